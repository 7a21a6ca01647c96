use square_gluings::enumerate::{enumerate_gluings, enumerate_with, Budget, EnumerationOptions};
use square_gluings::surface::validate;

/// Counts of valid gluings of exactly n squares, frozen from the exhaustive search.
const COUNTS: [usize; 7] = [1, 3, 3, 8, 6, 13, 11];

#[test]
fn counts_up_to_seven() {
    for (i, &expected) in COUNTS.iter().enumerate() {
        let gs = enumerate_gluings(i + 1).unwrap();
        assert_eq!(gs.len(), expected, "n = {}", i + 1);
        assert!(gs.iter().all(|g| validate(g).valid && g.n() == i + 1));
    }
}

#[test]
fn symmetry_reduction_loses_nothing() {
    for n in 1..=4 {
        let reduced = enumerate_with(n, EnumerationOptions::default(), 4, &Budget::unlimited()).unwrap();
        let full = enumerate_with(
            n,
            EnumerationOptions { fresh_square_symmetry: false, ..EnumerationOptions::default() },
            4,
            &Budget::unlimited(),
        )
        .unwrap();
        assert!(reduced.gluings.keys().eq(full.gluings.keys()), "n = {n}");
        assert!(reduced.stats.nodes < full.stats.nodes || n == 1);
    }
}

#[test]
fn task_split_is_invisible() {
    let opts = EnumerationOptions::default();
    let one = enumerate_with(5, opts, 1, &Budget::unlimited()).unwrap();
    let many = enumerate_with(5, opts, 17, &Budget::unlimited()).unwrap();
    assert!(one.gluings.keys().eq(many.gluings.keys()));
}

#[test]
fn budget_is_enforced() {
    assert!(enumerate_with(4, EnumerationOptions::default(), 1, &Budget::new(Some(10))).is_err());
}
