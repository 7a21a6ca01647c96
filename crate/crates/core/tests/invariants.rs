use std::sync::OnceLock;

use proptest::prelude::*;
use square_gluings::canonical::{canonical_code, relabel, Dihedral};
use square_gluings::classify::{canonical_matrix, canonicalize};
use square_gluings::enumerate::enumerate_up_to;
use square_gluings::geodesic::{distance_matrix, DistanceMatrix};
use square_gluings::surface::{validate, Gluing};

fn l4() -> &'static [Gluing] {
    static L: OnceLock<Vec<Gluing>> = OnceLock::new();
    L.get_or_init(|| enumerate_up_to(4).unwrap())
}

/// A gluing from L(4), a permutation of its squares and a frame per square.
fn relabeled() -> impl Strategy<Value = (Gluing, Gluing)> {
    (0..l4().len()).prop_flat_map(|i| {
        let g = l4()[i].clone();
        let n = g.n();
        (
            Just(g),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            proptest::collection::vec(0..8usize, n),
        )
            .prop_map(|(g, perm, frames)| {
                let frames: Vec<Dihedral> = frames.into_iter().map(|k| Dihedral::ALL[k]).collect();
                let h = relabel(&g, &perm, &frames);
                (g, h)
            })
    })
}

fn permuted(m: &DistanceMatrix, perm: &[usize], scale: i64) -> DistanceMatrix {
    let k = m.len();
    let mut entries = vec![vec![0; k]; k];
    let mut curvature = vec![0; k];
    for i in 0..k {
        curvature[perm[i]] = m.curvature_quarters[i];
        for j in 0..k {
            entries[perm[i]][perm[j]] = m.get(i, j) * scale * scale;
        }
    }
    DistanceMatrix { curvature_quarters: curvature, entries }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_code_ignores_labels((g, h) in relabeled()) {
        prop_assert!(validate(&h).valid);
        prop_assert_eq!(canonical_code(&g), canonical_code(&h));
    }

    #[test]
    fn canonical_matrix_ignores_labels((g, h) in relabeled()) {
        prop_assert_eq!(canonical_matrix(&g).unwrap(), canonical_matrix(&h).unwrap());
    }

    #[test]
    fn canonicalize_ignores_order_and_scale(
        i in 0..15usize,
        seed in any::<u64>(),
        scale in 1..6i64,
    ) {
        let m = distance_matrix(&l4()[i]).unwrap();
        let mut perm: Vec<usize> = (0..m.len()).collect();
        // deterministic shuffle from the seed
        let mut s = seed;
        for k in (1..perm.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(k, (s >> 33) as usize % (k + 1));
        }
        prop_assert_eq!(canonicalize(&m).unwrap(), canonicalize(&permuted(&m, &perm, scale)).unwrap());
    }
}

#[test]
fn distinct_codes_within_l4() {
    let mut codes: Vec<_> = l4().iter().map(|g| (g.n(), canonical_code(g))).collect();
    codes.sort();
    codes.dedup();
    assert_eq!(codes.len(), l4().len());
}
