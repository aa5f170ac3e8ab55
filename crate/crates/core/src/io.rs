//! Text instance files, metro files and the JSON drawing interchange.

use std::collections::BTreeSet;

use serde_json::{json, Map, Value};

use crate::bounds::{BoundsReport, Rational};
use crate::error::{Error, Result};
use crate::geometry::{Point, Polyline};
use crate::metro::{LineOrders, MetroInstance};
use crate::model::{
    BundledCrossing, BundlingPlan, CircularInstance, CombinatorialDrawing, CrossingId, MatchingInstance,
};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-empty, non-comment lines as `(line number, tokens)`.
fn directives(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then(|| (i + 1, body.split_whitespace().collect()))
    })
}

fn number(line: usize, tok: &str) -> Result<usize> {
    tok.parse().map_err(|_| parse_err(line, format!("expected a non-negative integer, got {tok:?}")))
}

fn args<const K: usize>(line: usize, toks: &[&str]) -> Result<[usize; K]> {
    if toks.len() != K + 1 {
        return Err(parse_err(line, format!("{} takes {K} argument(s)", toks[0])));
    }
    let mut out = [0; K];
    for (slot, tok) in out.iter_mut().zip(&toks[1..]) {
        *slot = number(line, tok)?;
    }
    Ok(out)
}

/// Parses `n`, `order` and `edge` directives.
pub fn parse_instance(text: &str) -> Result<CircularInstance> {
    let mut n: Option<usize> = None;
    let mut order: Option<Vec<usize>> = None;
    let mut edges = Vec::new();
    let mut last = 1;
    for (line, toks) in directives(text) {
        last = line;
        match toks[0] {
            "n" => {
                if n.is_some() {
                    return Err(parse_err(line, "duplicate n"));
                }
                if !edges.is_empty() {
                    return Err(parse_err(line, "n must precede every edge"));
                }
                n = Some(args::<1>(line, &toks)?[0]);
            }
            "order" => {
                let size = n.ok_or_else(|| parse_err(line, "order before n"))?;
                if order.is_some() {
                    return Err(parse_err(line, "duplicate order"));
                }
                let ids = toks[1..].iter().map(|t| number(line, t)).collect::<Result<Vec<_>>>()?;
                let distinct: BTreeSet<usize> = ids.iter().copied().collect();
                if ids.len() != size || distinct.len() != size || ids.iter().any(|&v| v >= size) {
                    return Err(parse_err(line, "order is not a permutation"));
                }
                order = Some(ids);
            }
            "edge" => {
                let size = n.ok_or_else(|| parse_err(1, "missing n"))?;
                let [u, v] = args::<2>(line, &toks)?;
                if u >= size || v >= size {
                    return Err(parse_err(line, format!("vertex out of range in edge {u} {v}")));
                }
                edges.push((u, v));
            }
            other => return Err(parse_err(line, format!("unknown directive {other:?}"))),
        }
    }
    let n = n.ok_or_else(|| parse_err(1, "missing n"))?;
    let order = order.unwrap_or_else(|| (0..n).collect());
    CircularInstance::new(n, order, edges).map_err(|e| parse_err(last, e.to_string()))
}

/// Inverse of [`parse_instance`].
pub fn write_instance(inst: &CircularInstance) -> String {
    let mut out = format!("n {}\n", inst.n());
    let order: Vec<String> = std::iter::once("order".to_string())
        .chain(inst.order().iter().map(usize::to_string))
        .collect();
    out.push_str(&order.join(" "));
    out.push('\n');
    for &(u, v) in inst.edges() {
        out.push_str(&format!("edge {u} {v}\n"));
    }
    out
}

/// Parses `tree`, `n`, `treeedge` and `line` directives.
pub fn parse_metro(text: &str) -> Result<MetroInstance> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut lines = Vec::new();
    let mut last = 1;
    for (line, toks) in directives(text) {
        last = line;
        match toks[0] {
            "tree" => {
                args::<0>(line, &toks)?;
            }
            "n" => {
                if n.is_some() {
                    return Err(parse_err(line, "duplicate n"));
                }
                n = Some(args::<1>(line, &toks)?[0]);
            }
            "treeedge" | "line" => {
                let size = n.ok_or_else(|| parse_err(1, "missing n"))?;
                let [u, v] = args::<2>(line, &toks)?;
                if u >= size || v >= size {
                    return Err(parse_err(line, format!("vertex out of range in {} {u} {v}", toks[0])));
                }
                if toks[0] == "line" {
                    lines.push((u, v));
                } else {
                    edges.push((u, v));
                }
            }
            other => return Err(parse_err(line, format!("unknown directive {other:?}"))),
        }
    }
    let n = n.ok_or_else(|| parse_err(1, "missing n"))?;
    MetroInstance::new(n, edges, lines).map_err(|e| parse_err(last, e.to_string()))
}

/// Integers stay integers; other values become `"p/q"` strings.
pub fn rational_json(r: Rational) -> Value {
    if r.is_integer() {
        json!(r.to_integer())
    } else {
        json!(format!("{}/{}", r.numer(), r.denom()))
    }
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    let bad = || Error::InvalidDrawing(format!("not a rational: {v}"));
    if let Some(i) = v.as_i64() {
        return Ok(Rational::from_integer(i));
    }
    let s = v.as_str().ok_or_else(bad)?;
    let (p, q) = s.split_once('/').ok_or_else(bad)?;
    let (p, q): (i64, i64) = (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?);
    if q == 0 {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

fn opt_rational(r: Option<Rational>) -> Value {
    r.map_or(Value::Null, rational_json)
}

/// Drawing and plan in interchange form.
pub fn drawing_json(d: &CombinatorialDrawing, p: &BundlingPlan) -> Value {
    let inst = d.instance();
    let base = inst.base();
    let pair = |c: &CrossingId| json!([c.lo(), c.hi()]);
    let mut out = Map::new();
    out.insert("n".into(), json!(base.n()));
    out.insert("order".into(), json!(base.order()));
    out.insert("edges".into(), json!(base.edges().iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>()));
    out.insert("origin".into(), json!(inst.origin_map()));
    out.insert(
        "along_edge".into(),
        Value::Array(d.along_edge().iter().map(|seq| Value::Array(seq.iter().map(pair).collect())).collect()),
    );
    out.insert(
        "bundles".into(),
        Value::Array(
            p.bundles
                .iter()
                .map(|b| {
                    json!({
                        "e1": b.bundle1,
                        "e2": b.bundle2,
                        "crossings": b.member_crossings.iter().map(pair).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        ),
    );
    if let Some(geometry) = d.geometry() {
        let poly = |l: &Polyline| {
            Value::Array(l.iter().map(|pt| json!([rational_json(pt.x), rational_json(pt.y)])).collect())
        };
        out.insert("geometry".into(), Value::Array(geometry.iter().map(poly).collect()));
    }
    Value::Object(out)
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::InvalidDrawing(format!("missing field {key:?}")))
}

fn from_value<T: serde::de::DeserializeOwned>(v: &Value, key: &str) -> Result<T> {
    serde_json::from_value(field(v, key)?.clone())
        .map_err(|e| Error::InvalidDrawing(format!("field {key:?}: {e}")))
}

/// Reads a drawing and plan; a report with a `witness` object is unwrapped first.
///
/// The drawing itself must be realizable; the plan is returned unchecked.
pub fn drawing_from_json(v: &Value) -> Result<(CombinatorialDrawing, BundlingPlan)> {
    let v = v.get("witness").filter(|w| w.is_object()).unwrap_or(v);
    let n: usize = from_value(v, "n")?;
    let order: Vec<usize> = from_value(v, "order")?;
    let edges: Vec<(usize, usize)> = from_value(v, "edges")?;
    let base = CircularInstance::new(n, order, edges)?;
    let inst = match v.get("origin") {
        Some(o) => {
            let origin: Vec<usize> = serde_json::from_value(o.clone())
                .map_err(|e| Error::InvalidDrawing(format!("field \"origin\": {e}")))?;
            MatchingInstance::new(base, origin)?
        }
        None => MatchingInstance::from_matching(base)?,
    };
    let along: Vec<Vec<CrossingId>> = from_value(v, "along_edge")?;
    let geometry = match v.get("geometry") {
        None | Some(Value::Null) => None,
        Some(g) => {
            let raw: Vec<Vec<[Value; 2]>> = serde_json::from_value(g.clone())
                .map_err(|e| Error::InvalidDrawing(format!("field \"geometry\": {e}")))?;
            let lines = raw
                .iter()
                .map(|l| {
                    l.iter()
                        .map(|[x, y]| Ok(Point::new(rational_from_json(x)?, rational_from_json(y)?)))
                        .collect::<Result<Polyline>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Some(lines)
        }
    };
    let drawing = CombinatorialDrawing::new(inst, along, geometry)?;
    let raw_bundles = field(v, "bundles")?
        .as_array()
        .ok_or_else(|| Error::InvalidDrawing("bundles is not an array".into()))?;
    let bundles = raw_bundles
        .iter()
        .map(|b| {
            let e1: BTreeSet<usize> = from_value(b, "e1")?;
            let e2: BTreeSet<usize> = from_value(b, "e2")?;
            Ok(match b.get("crossings") {
                Some(c) => BundledCrossing {
                    bundle1: e1,
                    bundle2: e2,
                    member_crossings: serde_json::from_value(c.clone())
                        .map_err(|e| Error::InvalidDrawing(format!("bundle crossings: {e}")))?,
                },
                None => {
                    if !e1.is_disjoint(&e2) {
                        return Err(Error::InvalidDrawing("bundle sides share an edge".into()));
                    }
                    BundledCrossing::grid(e1, e2)
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((drawing, BundlingPlan::new(bundles)))
}

/// The bounds as a JSON object with alphabetical keys.
pub fn bounds_json(r: &BoundsReport) -> Map<String, Value> {
    let c = r.certificates.as_ref();
    let mut out = Map::new();
    out.insert("n".into(), json!(r.n));
    out.insert("m".into(), json!(r.m));
    out.insert("m_simplified".into(), json!(r.m_simplified));
    out.insert("lb_fixed".into(), json!(r.lb_fixed));
    out.insert("lb_general".into(), json!(r.lb_general));
    out.insert("lb_circular".into(), json!(r.lb_circular));
    out.insert("ub".into(), json!(r.ub));
    out.insert("ratio_fixed".into(), opt_rational(r.ratio_fixed));
    out.insert("ratio_free".into(), opt_rational(c.and_then(|c| c.ratio_free)));
    out.insert("ratio_general".into(), opt_rational(c.and_then(|c| c.ratio_general)));
    out.insert("empirical_free".into(), opt_rational(c.and_then(|c| c.empirical_free)));
    out.insert("empirical_general".into(), opt_rational(c.and_then(|c| c.empirical_general)));
    out.insert("genus_formula_kn".into(), json!(r.genus_formula_kn));
    out.insert("m_star".into(), json!(r.m_star));
    out.insert("outerplanar_bound".into(), json!(r.outerplanar_bound));
    out.insert("planar_bound".into(), json!(r.planar_bound));
    out.insert("planar_bound_note".into(), json!("non-constructive in this artifact"));
    out
}

pub fn line_orders_json(lo: &LineOrders) -> Value {
    serde_json::to_value(lo).expect("plain data")
}

/// Stable pretty printing with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::two_slope_layout;
    use crate::model::validate_bundling;

    #[test]
    fn parses_plain_instance() {
        let inst = parse_instance("n 4\nedge 0 2\nedge 1 3").unwrap();
        assert_eq!(inst.n(), 4);
        assert_eq!(inst.m(), 2);
        assert_eq!(inst.order(), &[0, 1, 2, 3]);
    }

    #[test]
    fn comments_and_whitespace() {
        let inst = parse_instance("# two chords\n\n  n   4 \norder 3 2 1 0 # reversed\n edge 0 2\n").unwrap();
        assert_eq!(inst.order(), &[3, 2, 1, 0]);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let e = parse_instance("edge 0 1").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e}");
        let e = parse_instance("").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = parse_instance("n 3\norder 0 1 1").unwrap_err();
        assert_eq!(e, parse_err(2, "order is not a permutation"));
        let e = parse_instance("n 3\nn 3").unwrap_err();
        assert_eq!(e, parse_err(2, "duplicate n"));
        let e = parse_instance("n 3\nedge 0 7").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse_instance("n 3\nfoo 1").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn instance_round_trip() {
        let inst = CircularInstance::new(5, vec![2, 0, 4, 1, 3], vec![(0, 1), (2, 3), (1, 4)]).unwrap();
        assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
        let empty = CircularInstance::with_identity_order(0, vec![]).unwrap();
        assert_eq!(parse_instance(&write_instance(&empty)).unwrap(), empty);
    }

    #[test]
    fn rationals() {
        assert_eq!(rational_json(Rational::from(12)), json!(12));
        assert_eq!(rational_json(Rational::new(3, 6)), json!("1/2"));
        assert_eq!(rational_from_json(&json!("-7/3")).unwrap(), Rational::new(-7, 3));
        assert!(rational_from_json(&json!("1/0")).is_err());
    }

    #[test]
    fn drawing_round_trip() {
        let inst = CircularInstance::with_identity_order(6, vec![(0, 3), (1, 4), (2, 5)]).unwrap();
        let lay = two_slope_layout(&MatchingInstance::from_matching(inst).unwrap());
        let v = drawing_json(&lay.drawing, &lay.plan);
        let (d, p) = drawing_from_json(&v).unwrap();
        assert_eq!(d, lay.drawing);
        assert_eq!(p, lay.plan);
        assert!(validate_bundling(&d, &p).unwrap().is_ok());
        let wrapped = json!({ "witness": v });
        assert_eq!(drawing_from_json(&wrapped).unwrap().0, lay.drawing);
    }

    #[test]
    fn metro_file() {
        let text = "tree\nn 4\ntreeedge 0 1\ntreeedge 0 2\ntreeedge 0 3\nline 1 2\n";
        let mi = parse_metro(text).unwrap();
        assert_eq!(mi.lines(), &[(1, 2)]);
        let e = parse_metro("tree\nn 3\ntreeedge 0 1\ntreeedge 0 2\nline 0 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
        let e = parse_metro("treeedge 0 1").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
    }
}
