//! Closed-form lower bounds and approximation certificates.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::layout::{greedy_outerplanar_subset, Pipeline};
use crate::model::CircularInstance;

pub type Rational = Ratio<i64>;

/// Lower bound on the fixed-order bundled crossing number of a simplified
/// instance with `m_simplified` edges.
pub fn lower_bound_fixed(m_simplified: usize) -> usize {
    m_simplified.div_ceil(16)
}

/// Euler-formula lower bounds `(general, circular)`, clamped at zero.
pub fn genus_lower_bounds(n: usize, m: usize) -> (usize, usize) {
    let (n, m) = (n as i64, m as i64);
    let bound = |excess: i64| (excess.max(0) as usize).div_ceil(6);
    (bound(m - (3 * n - 6)), bound(m - (2 * n - 3)))
}

/// Genus of the complete graph on `n` vertices.
pub fn genus_complete(n: usize) -> Result<usize> {
    if n < 3 {
        return Err(Error::Undefined(format!("genus formula needs n >= 3, got {n}")));
    }
    Ok(((n - 3) * (n - 4)).div_ceil(12))
}

/// Approximation factors guaranteed for dense graphs, plus the ratios
/// actually achieved by an upper bound `ub`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificates {
    /// `6c/(c-2)` for `c = m/n > 2`.
    pub ratio_free: Option<Rational>,
    /// `6c/(c-3)` for `c = m/n > 3`.
    pub ratio_general: Option<Rational>,
    /// `ub` over the circular genus bound, when that bound is positive.
    pub empirical_free: Option<Rational>,
    /// `ub` over the general genus bound, when that bound is positive.
    pub empirical_general: Option<Rational>,
}

pub fn approximation_certificates(n: usize, m: usize, ub: usize) -> Result<Certificates> {
    if n == 0 {
        return Err(Error::EmptyInstance);
    }
    let c = Rational::new(m as i64, n as i64);
    let factor = |k: i64| {
        (c > Rational::from(k)).then(|| Rational::from(6) * c / (c - Rational::from(k)))
    };
    let (lb_general, lb_circular) = genus_lower_bounds(n, m);
    let ratio = |lb: usize| (lb > 0).then(|| Rational::new(ub as i64, lb as i64));
    Ok(Certificates {
        ratio_free: factor(2),
        ratio_general: factor(3),
        empirical_free: ratio(lb_circular),
        empirical_general: ratio(lb_general),
    })
}

/// Bounds for one instance, with `ub` taken from a finished layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub n: usize,
    pub m: usize,
    pub m_simplified: usize,
    pub lb_fixed: usize,
    pub lb_general: usize,
    pub lb_circular: usize,
    pub ub: usize,
    /// `ub / lb_fixed`; at most 16 for the two-slope layout.
    pub ratio_fixed: Option<Rational>,
    pub certificates: Option<Certificates>,
    pub genus_formula_kn: Option<usize>,
    /// Size of the greedy non-interleaving subset of the simplified instance.
    pub m_star: usize,
    /// `2(m' - m*)`, achieved by the outerplanar layout.
    pub outerplanar_bound: usize,
    /// `4(m' - m*)` via a book embedding of a planar subgraph; not constructed here.
    pub planar_bound: usize,
}

impl BoundsReport {
    pub fn new(inst: &CircularInstance, pipeline: &Pipeline) -> Self {
        let (n, m) = (inst.n(), inst.m());
        let reduced = &pipeline.simplification.simplified;
        let m_simplified = reduced.m();
        let lb_fixed = lower_bound_fixed(m_simplified);
        let (lb_general, lb_circular) = genus_lower_bounds(n, m);
        let ub = pipeline.result.bundle_count;
        let m_star = greedy_outerplanar_subset(reduced.base()).len();
        Self {
            n,
            m,
            m_simplified,
            lb_fixed,
            lb_general,
            lb_circular,
            ub,
            ratio_fixed: (lb_fixed > 0).then(|| Rational::new(ub as i64, lb_fixed as i64)),
            certificates: approximation_certificates(n, m, ub).ok(),
            genus_formula_kn: if inst.is_complete() {
                genus_complete(n).ok()
            } else {
                None
            },
            m_star,
            outerplanar_bound: 2 * (m_simplified - m_star),
            planar_bound: 4 * (m_simplified - m_star),
        }
    }
}
