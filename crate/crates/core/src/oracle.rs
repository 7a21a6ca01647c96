//! Slow independent references for the fast paths: exhaustive enumeration,
//! a discretized surface graph for distances, and planar geometry for
//! doubly covered polygons.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};

use crate::canonical::{canonical_code, CanonicalCode};
use crate::dsu::DisjointSet;
use crate::geodesic::DistanceMatrix;
use crate::octagon::OctagonParams;
use crate::surface::{self, Gluing, Identification, Side, SideRef};

/// Canonical codes of all valid gluings of `n` squares, found by trying every
/// perfect matching of the `4n` sides with every orientation.
pub fn brute_force_codes(n: usize) -> BTreeSet<CanonicalCode> {
    fn go(n: usize, used: &mut Vec<bool>, ids: &mut Vec<Identification>, out: &mut BTreeSet<CanonicalCode>) {
        let Some(first) = used.iter().position(|u| !u) else {
            let g = Gluing::new(n, ids.clone()).expect("a perfect matching is a gluing");
            if surface::validate(&g).valid {
                out.insert(canonical_code(&g));
            }
            return;
        };
        used[first] = true;
        for other in first + 1..used.len() {
            if used[other] {
                continue;
            }
            used[other] = true;
            for flip in [false, true] {
                ids.push(
                    Identification::new(SideRef::from_index(first), SideRef::from_index(other), flip)
                        .expect("distinct sides"),
                );
                go(n, used, ids, out);
                ids.pop();
            }
            used[other] = false;
        }
        used[first] = false;
    }
    let mut out = BTreeSet::new();
    go(n, &mut vec![false; 4 * n], &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Copy, PartialEq)]
struct State(f64, usize);

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Geodesic distances (not squared) between cone points, approximated by
/// shortest paths in a graph whose nodes are `k` equally spaced points on
/// every side and whose edges are straight segments across each square.
/// Refining `k` by an integer factor can only shorten the result.
pub fn subdivided_distances(g: &Gluing, k: usize) -> Result<Vec<Vec<f64>>, surface::SurfaceError> {
    let cones = surface::cone_points(g)?;
    let n = g.n();
    // node (square, side, m) with m in 0..k at parameter m/k from the side's tail
    let local = |q: usize, s: usize, m: usize| (q * 4 + s) * k + m;
    let mut dsu = DisjointSet::new(4 * n * k);
    for q in 0..n {
        for s in 0..4 {
            let (p, flip) = g.mate(SideRef::new(q, Side::from_index(s)));
            for m in 0..=k {
                // the head of side s is the tail of side s + 1
                let here = if m == k { local(q, (s + 1) % 4, 0) } else { local(q, s, m) };
                let pm = if flip { m } else { k - m };
                let ps = p.side.index();
                let there = if pm == k { local(p.square, (ps + 1) % 4, 0) } else { local(p.square, ps, pm) };
                dsu.union(here, there);
            }
        }
    }
    let position = |s: usize, m: usize| {
        let side = Side::from_index(s);
        let (t, h) = (side.tail().position(), side.head().position());
        let f = m as f64 / k as f64;
        [t[0] as f64 + f * (h[0] - t[0]) as f64, t[1] as f64 + f * (h[1] - t[1]) as f64]
    };
    let total = 4 * n * k;
    let root: Vec<usize> = (0..total).map(|i| dsu.find(i)).collect();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); total];
    for q in 0..n {
        let nodes: Vec<(usize, [f64; 2])> = (0..4)
            .flat_map(|s| (0..k).map(move |m| (s, m)))
            .map(|(s, m)| (root[local(q, s, m)], position(s, m)))
            .collect();
        for (i, &(u, pu)) in nodes.iter().enumerate() {
            for &(v, pv) in &nodes[i + 1..] {
                let w = ((pu[0] - pv[0]).powi(2) + (pu[1] - pv[1]).powi(2)).sqrt();
                adj[u].push((v, w));
                adj[v].push((u, w));
            }
        }
    }
    let cone_node = |c: usize| {
        let r = cones[c].corners[0];
        // corner c is the tail of side c
        root[local(r.square, r.corner.index(), 0)]
    };
    let mut out = Vec::with_capacity(cones.len());
    for src in 0..cones.len() {
        let mut dist = vec![f64::INFINITY; total];
        let s = cone_node(src);
        dist[s] = 0.0;
        let mut heap = BinaryHeap::from([State(0.0, s)]);
        while let Some(State(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &adj[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(State(nd, v));
                }
            }
        }
        out.push((0..cones.len()).map(|t| dist[cone_node(t)]).collect());
    }
    Ok(out)
}

/// Distance matrix of a doubly covered convex polygon from its planar
/// vertices: both faces are flat and convex, so every pair of vertices is
/// joined by the straight segment.
pub fn planar_polygon_matrix(p: &OctagonParams) -> DistanceMatrix {
    let cones = p.cone_vertices();
    DistanceMatrix {
        curvature_quarters: cones.iter().map(|c| c.1).collect(),
        entries: cones
            .iter()
            .map(|&(u, _)| cones.iter().map(|&(v, _)| (u - v).norm2()).collect())
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::fixtures::*;

    #[test]
    fn one_square_brute_force() {
        let codes = brute_force_codes(1);
        assert!(codes.contains(&canonical_code(&diagonal_fold())));
        assert!(!codes.contains(&canonical_code(&torus())));
    }

    #[test]
    fn subdivided_square_distances() {
        let d = subdivided_distances(&doubly_covered_square(), 8).unwrap();
        let mut off: Vec<f64> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).map(|(i, j)| d[i][j]).collect();
        off.sort_by(f64::total_cmp);
        for (x, want) in off.iter().zip([1.0, 1.0, 1.0, 1.0, 2f64.sqrt(), 2f64.sqrt()]) {
            assert!((x - want).abs() < 1e-9);
        }
    }

    #[test]
    fn planar_triangle() {
        let p = OctagonParams::from_cuts(1, 1, 0, 0, 0, 1).unwrap();
        let m = planar_polygon_matrix(&p);
        let mut c = m.curvature_quarters.clone();
        c.sort();
        assert_eq!(c, vec![2, 3, 3]);
        assert_eq!(c.iter().sum::<i32>(), 8);
    }
}
