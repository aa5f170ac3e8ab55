mod common;

use bundlecross::layout::two_slope_layout;
use bundlecross::model::{validate_bundling, BundlingPlan};
use common::all_crossing;
use common::mutation::{mutate, run, Mutation};

#[test]
fn fifty_mutations_all_rejected() {
    let (fixtures, rejected, missed) = run(50);
    assert_eq!(missed, None);
    assert_eq!((fixtures, rejected), (50, 50));
}

#[test]
fn each_mutation_names_its_violation() {
    let l = two_slope_layout(&all_crossing(4));
    let names = |p: &BundlingPlan| {
        validate_bundling(&l.drawing, p)
            .unwrap()
            .violations
            .iter()
            .map(|v| v.name())
            .collect::<Vec<_>>()
    };
    let dropped = mutate(&l.plan, Mutation::Drop, 0).unwrap();
    assert!(names(&dropped).contains(&"not a partition"));
    let moved = mutate(&l.plan, Mutation::Move, 0).unwrap();
    assert!(names(&moved).contains(&"not a grid"));
    let merged = mutate(&l.plan, Mutation::Merge, 0).unwrap();
    assert!(!names(&merged).is_empty());
}
