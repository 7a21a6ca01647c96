use square_gluings::canonical::{relabel, Dihedral};
use square_gluings::enumerate::enumerate_up_to;
use square_gluings::geodesic::{distance_matrix, distance_matrix_with_traces, shortest_distances};
use square_gluings::surface::{cone_points, fixtures};
use square_gluings::trace::{check_disk_exclusion, classify_crossing_types};

#[test]
fn fixture_distances() {
    let fold = fixtures::diagonal_fold();
    let m = distance_matrix(&fold).unwrap();
    let mut curv = m.curvature_quarters.clone();
    curv.sort();
    assert_eq!(curv, vec![2, 3, 3]);
    let apex = m.curvature_quarters.iter().position(|&c| c == 2).unwrap();
    let mut row: Vec<i64> = (0..3).filter(|&j| j != apex).map(|j| m.get(apex, j)).collect();
    row.sort();
    assert_eq!(row, vec![1, 1]);

    let square = fixtures::doubly_covered_square();
    for s in 0..4 {
        let mut d = shortest_distances(&square, s).unwrap().squared;
        d.sort();
        assert_eq!(d, vec![0, 1, 1, 2]);
    }
}

#[test]
fn metric_properties_over_l5() {
    for g in enumerate_up_to(5).unwrap() {
        let (m, traces) = distance_matrix_with_traces(&g).unwrap();
        for i in 0..m.len() {
            assert_eq!(m.get(i, i), 0);
            for j in 0..m.len() {
                assert_eq!(m.get(i, j), m.get(j, i));
                if i != j {
                    assert!(m.get(i, j) >= 1);
                }
            }
        }
        assert_eq!(m.triangle_violation(), None, "{}", g.to_json_line());
        for t in &traces {
            assert_eq!((t.plane_target - t.plane_source).norm2(), t.squared_length);
            check_disk_exclusion(t).unwrap();
            for counts in classify_crossing_types(t).unwrap().values() {
                assert!(counts.type1 <= 4 && counts.type2 <= 1 && counts.total() <= 5);
            }
        }
    }
}

#[test]
fn distances_survive_relabeling() {
    for g in enumerate_up_to(4).unwrap() {
        let n = g.n();
        let perm: Vec<usize> = (0..n).rev().collect();
        let frames: Vec<Dihedral> = (0..n).map(|i| Dihedral::ALL[(3 * i + 5) % 8]).collect();
        let h = relabel(&g, &perm, &frames);
        let sorted = |m: square_gluings::DistanceMatrix| {
            let mut v: Vec<i64> = m.entries.into_iter().flatten().collect();
            v.sort();
            v
        };
        assert_eq!(sorted(distance_matrix(&g).unwrap()), sorted(distance_matrix(&h).unwrap()));
        assert_eq!(cone_points(&g).unwrap().len(), cone_points(&h).unwrap().len());
    }
}

#[test]
fn non_sphere_is_refused() {
    assert!(distance_matrix(&fixtures::torus()).is_err());
}
