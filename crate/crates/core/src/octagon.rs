//! Doubly covered polygons glued from squares.
//!
//! Such a polygon has edges in the four directions 0°, 45°, 90°, 135°, so it
//! is an `a × b` lattice rectangle with its four corners cut at 45°. The cut
//! at each corner removes a right isosceles triangle with legs `B` (north-west),
//! `D` (north-east), `F` (south-east) and `H` (south-west); the remaining
//! edges `A` (west), `C` (north), `E` (east), `G` (south) follow.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::Point;
use crate::surface::{Corner, Gluing, GluingError, Identification, Side, SideRef};

/// Edge lengths counted in squares traversed, `edges = [A, B, C, D, E, F, G, H]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OctagonParams {
    pub a: u64,
    pub b: u64,
    pub edges: [u64; 8],
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OctagonError {
    #[error("octagon parameters violate the rectangle constraints: {0:?}")]
    Infeasible(OctagonParams),
    #[error("octagon has zero area")]
    Degenerate,
    #[error(transparent)]
    Gluing(#[from] GluingError),
}

impl OctagonParams {
    /// From the rectangle and the four corner cuts.
    pub fn from_cuts(a: u64, b: u64, nw: u64, ne: u64, se: u64, sw: u64) -> Option<Self> {
        let sub = |x: u64, y: u64, z: u64| x.checked_sub(y)?.checked_sub(z);
        let edges = [sub(b, nw, sw)?, nw, sub(a, nw, ne)?, ne, sub(b, ne, se)?, se, sub(a, se, sw)?, sw];
        (b <= a).then_some(Self { a, b, edges })
    }

    /// From the six free variables `a, A, B, D, F, H`.
    #[allow(non_snake_case)]
    pub fn from_free(a: u64, A: u64, B: u64, D: u64, F: u64, H: u64) -> Option<Self> {
        Self::from_cuts(a, A + B + H, B, D, F, H)
    }

    pub fn cuts(&self) -> [u64; 4] {
        [self.edges[1], self.edges[3], self.edges[5], self.edges[7]]
    }

    /// All four linear constraints and `b ≤ a`.
    pub fn is_consistent(&self) -> bool {
        let [a_, b_, c_, d_, e_, f_, g_, h_] = self.edges;
        a_ + b_ + h_ == self.b && d_ + e_ + f_ == self.b && b_ + c_ + d_ == self.a && f_ + g_ + h_ == self.a && self.b <= self.a
    }

    /// Twice the area: the number of squares in the doubly covered polygon.
    pub fn squares(&self) -> u64 {
        let cut: u64 = self.cuts().iter().map(|c| c * c).sum();
        2 * self.a * self.b - cut
    }

    pub fn is_degenerate(&self) -> bool {
        self.squares() == 0
    }

    /// Polygon vertices counterclockwise from the south edge, repeated points removed.
    pub fn vertices(&self) -> Vec<Point> {
        let (a, b) = (self.a as i64, self.b as i64);
        let [nw, ne, se, sw] = self.cuts().map(|c| c as i64);
        let raw = [
            Point::new(sw, 0),
            Point::new(a - se, 0),
            Point::new(a, se),
            Point::new(a, b - ne),
            Point::new(a - ne, b),
            Point::new(nw, b),
            Point::new(0, b - nw),
            Point::new(0, sw),
        ];
        let mut out: Vec<Point> = Vec::with_capacity(8);
        for p in raw {
            if out.last() != Some(&p) {
                out.push(p);
            }
        }
        while out.len() > 1 && out.first() == out.last() {
            out.pop();
        }
        out
    }

    /// Vertices with positive curvature and their curvature in quarter turns
    /// (the turning angle there in multiples of 45°).
    pub fn cone_vertices(&self) -> Vec<(Point, i32)> {
        let v = self.vertices();
        let k = v.len();
        let dir = |d: Point| -> i32 {
            match (d.x.signum(), d.y.signum()) {
                (1, 0) => 0,
                (1, 1) => 1,
                (0, 1) => 2,
                (-1, 1) => 3,
                (-1, 0) => 4,
                (-1, -1) => 5,
                (0, -1) => 6,
                _ => 7,
            }
        };
        (0..k)
            .filter_map(|i| {
                let prev = v[i] - v[(i + k - 1) % k];
                let next = v[(i + 1) % k] - v[i];
                let turn = (dir(next) - dir(prev)).rem_euclid(8);
                (turn > 0).then_some((v[i], turn))
            })
            .collect()
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("octagon serialization cannot fail")
    }

    pub fn from_json_line(line: &str) -> serde_json::Result<Self> {
        serde_json::from_str(line)
    }

    /// Least image under the symmetries of the rectangle (mirrors, and the
    /// diagonal reflection when `a = b`).
    pub fn congruence_key(&self) -> Self {
        let [nw, ne, se, sw] = self.cuts();
        let mut images = vec![
            [nw, ne, se, sw],
            [ne, nw, sw, se],
            [sw, se, ne, nw],
            [se, sw, nw, ne],
        ];
        if self.a == self.b {
            let more: Vec<_> = images.iter().map(|&[nw, ne, se, sw]| [se, ne, nw, sw]).collect();
            images.extend(more);
        }
        images
            .into_iter()
            .filter_map(|[nw, ne, se, sw]| Self::from_cuts(self.a, self.b, nw, ne, se, sw))
            .min()
            .expect("the identity image is feasible")
    }
}

/// Number of `(x, y) ≥ 0` with `x + y ≤ m`.
fn tri(m: i64) -> i64 {
    if m < 0 {
        0
    } else {
        (m + 1) * (m + 2) / 2
    }
}

/// Number of `0 ≤ x ≤ p`, `0 ≤ y ≤ q` with `x + y ≤ s`.
fn box_pairs(p: i64, q: i64, s: i64) -> i64 {
    if p < 0 || q < 0 || s < 0 {
        return 0;
    }
    tri(s) - tri(s - p - 1) - tri(s - q - 1) + tri(s - p - q - 2)
}

/// Feasible cut tuples inside an `a × b` rectangle, zero-area ones excluded.
fn cell_count(a: u64, b: u64) -> u64 {
    let (ai, bi) = (a as i64, b as i64);
    let total = if 2 * b <= a {
        tri(bi) * tri(bi)
    } else {
        let mut sum = 0;
        for nw in 0..=bi {
            for ne in 0..=(bi.min(ai - nw)) {
                // sw ≤ b − nw, se ≤ b − ne, sw + se ≤ a
                sum += box_pairs(bi - nw, bi - ne, ai);
            }
        }
        sum
    };
    // the two full diagonal cuts of a square collapse it to a segment
    let degenerate = if a == b { 2 } else { 0 };
    total as u64 - degenerate
}

fn cells(n: u64) -> impl Iterator<Item = (u64, u64)> {
    (1..).take_while(move |&b| 2 * b * b <= n).flat_map(move |b| (b..).take_while(move |&a| 2 * a * b <= n).map(move |a| (a, b)))
}

/// Every parameter tuple with `2ab ≤ n`, in `(b, a, cuts)` order.
pub fn enumerate_dc_octagons(n: u64) -> impl Iterator<Item = OctagonParams> {
    cells(n).flat_map(|(a, b)| {
        let mut out = Vec::new();
        for nw in 0..=b {
            for ne in 0..=b.min(a - nw.min(a)) {
                for sw in 0..=(b - nw) {
                    for se in 0..=(b - ne) {
                        if let Some(p) = OctagonParams::from_cuts(a, b, nw, ne, se, sw) {
                            if !p.is_degenerate() {
                                out.push(p);
                            }
                        }
                    }
                }
            }
        }
        out
    })
}

pub fn count_dc_octagons(n: u64) -> u64 {
    cells(n).map(|(a, b)| cell_count(a, b)).sum()
}

/// `(n, count)` for every `n` in `1..=max_n`.
pub fn count_table(max_n: u64) -> Vec<(u64, u64)> {
    let mut by_size: BTreeMap<u64, u64> = BTreeMap::new();
    for (a, b) in cells(max_n) {
        *by_size.entry(2 * a * b).or_default() += cell_count(a, b);
    }
    let mut acc = 0;
    (1..=max_n)
        .map(|n| {
            acc += by_size.get(&n).copied().unwrap_or(0);
            (n, acc)
        })
        .collect()
}

/// Tuples up to rectangle symmetry, each given by its least image.
pub fn enumerate_congruence_classes(n: u64) -> Vec<OctagonParams> {
    let mut keys: Vec<OctagonParams> = enumerate_dc_octagons(n).map(|p| p.congruence_key()).collect();
    keys.sort();
    keys.dedup();
    keys
}

/// Rectangles with `a ≤ √n/2`, `b ≤ a/2`, each cut at all four corners with
/// both cut vertices of each vertical side strictly inside it.
pub fn lower_bound_family(n: u64) -> impl Iterator<Item = OctagonParams> {
    (1..)
        .take_while(move |&a| 4 * a * a <= n)
        .flat_map(|a| (1..=a / 2).map(move |b| (a, b)))
        .flat_map(|(a, b)| {
            let mut out = Vec::new();
            for sw in 1..b {
                for nw in 1..=(b - sw) {
                    for se in 1..b {
                        for ne in 1..=(b - se) {
                            out.push(OctagonParams::from_cuts(a, b, nw, ne, se, sw).expect("family members are feasible"));
                        }
                    }
                }
            }
            out
        })
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Layer {
    Front,
    Back,
}

struct Piece {
    layer: Layer,
    tail: Point,
    head: Point,
}

/// The doubly covered octagon as a gluing. Full cells give a front and a back
/// square; cells halved by a cut give one square folded along its diagonal.
/// Squares are indexed row-major, front layer then back layer.
pub fn octagon_to_gluing(p: &OctagonParams) -> Result<Gluing, OctagonError> {
    if !p.is_consistent() {
        return Err(OctagonError::Infeasible(*p));
    }
    if p.is_degenerate() {
        return Err(OctagonError::Degenerate);
    }
    let (a, b) = (p.a as i64, p.b as i64);
    let [nw, ne, se, sw] = p.cuts().map(|c| c as i64);
    // cut functions at the center of cell (i, j) minus their thresholds, in `cuts` order
    let slack = |i: i64, j: i64| {
        [
            (i + b - j) - nw,
            (a + b - i - j - 1) - ne,
            (a - i + j) - se,
            (i + j + 1) - sw,
        ]
    };
    // (i, j, fold) where fold reflects the outside half onto the back
    let mut front: Vec<(i64, i64, Option<usize>)> = Vec::new();
    let mut back: Vec<(i64, i64)> = Vec::new();
    for j in 0..b {
        for i in 0..a {
            let s = slack(i, j);
            if s.iter().any(|&v| v < 0) {
                continue;
            }
            let halves: Vec<usize> = (0..4).filter(|&c| s[c] == 0).collect();
            match halves.as_slice() {
                [] => {
                    front.push((i, j, None));
                    back.push((i, j));
                }
                [c] => front.push((i, j, Some(*c))),
                _ => return Err(OctagonError::Degenerate),
            }
        }
    }
    let n = front.len() + back.len();

    let corner = |c: Corner| Point::from_array(c.position());
    let mut pieces: Vec<Piece> = Vec::with_capacity(4 * n);
    let cell_squares = front.iter().map(|&(i, j, f)| (i, j, Layer::Front, f)).chain(back.iter().map(|&(i, j)| (i, j, Layer::Back, None)));
    for (i, j, layer, fold) in cell_squares {
        let origin = Point::new(i, j);
        for side in Side::ALL {
            let (t, h) = (origin + corner(side.tail()), origin + corner(side.head()));
            let piece = match fold {
                None => Piece { layer, tail: t, head: h },
                Some(cut) => {
                    // the kept half contains the corner opposite the cut
                    let keep = match cut {
                        0 => Corner::SE,
                        1 => Corner::SW,
                        2 => Corner::NW,
                        _ => Corner::NE,
                    };
                    if side.tail() == keep || side.head() == keep {
                        Piece { layer: Layer::Front, tail: t, head: h }
                    } else {
                        let m = reflect_across_cut(cut, i, j);
                        Piece { layer: Layer::Back, tail: m(t), head: m(h) }
                    }
                }
            };
            pieces.push(piece);
        }
    }

    let key = |pc: &Piece| {
        let (u, v) = if (pc.tail.x, pc.tail.y) <= (pc.head.x, pc.head.y) { (pc.tail, pc.head) } else { (pc.head, pc.tail) };
        (u.x, u.y, v.x, v.y)
    };
    let mut by_segment: BTreeMap<(i64, i64, i64, i64), Vec<usize>> = BTreeMap::new();
    for (idx, pc) in pieces.iter().enumerate() {
        by_segment.entry(key(pc)).or_default().push(idx);
    }
    let mut ids = Vec::with_capacity(2 * n);
    let glue = |x: usize, y: usize| {
        let (px, py) = (&pieces[x], &pieces[y]);
        Identification::new(SideRef::from_index(x), SideRef::from_index(y), px.tail == py.tail)
    };
    for group in by_segment.values() {
        match group.as_slice() {
            [x, y] => ids.push(glue(*x, *y)?),
            [_, _, _, _] => {
                let mut g = group.clone();
                g.sort_by_key(|&x| pieces[x].layer);
                ids.push(glue(g[0], g[1])?);
                ids.push(glue(g[2], g[3])?);
            }
            _ => return Err(OctagonError::Infeasible(*p)),
        }
    }
    Ok(Gluing::new(n, ids)?)
}

/// Reflection across the cut line through cell `(i, j)` (cut index as in `cuts`).
fn reflect_across_cut(cut: usize, i: i64, j: i64) -> impl Fn(Point) -> Point {
    move |p: Point| match cut {
        // lines of slope −1: x + y = c
        1 | 3 => {
            let c = i + j + 1;
            Point::new(c - p.y, c - p.x)
        }
        // lines of slope 1: x − y = c
        _ => {
            let c = i - j;
            Point::new(p.y + c, p.x - c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::canonical_code;
    use crate::surface::{fixtures, validate};

    fn binom2(b: u64) -> u64 {
        b * b.saturating_sub(1) / 2
    }

    #[test]
    fn uncut_unit_square() {
        let p = OctagonParams::from_cuts(1, 1, 0, 0, 0, 0).unwrap();
        assert_eq!(p.edges, [1, 0, 1, 0, 1, 0, 1, 0]);
        assert!(enumerate_dc_octagons(2).any(|q| q == p));
        let g = octagon_to_gluing(&p).unwrap();
        assert_eq!(canonical_code(&g), canonical_code(&fixtures::doubly_covered_square()));
    }

    #[test]
    fn single_cut_unit_square_is_the_fold() {
        let p = OctagonParams::from_cuts(1, 1, 0, 0, 0, 1).unwrap();
        let g = octagon_to_gluing(&p).unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(canonical_code(&g), canonical_code(&fixtures::diagonal_fold()));
    }

    #[test]
    fn free_variables_determine_the_rest() {
        for p in enumerate_dc_octagons(24) {
            let [a_, b_, _, d_, _, f_, _, h_] = p.edges;
            assert_eq!(OctagonParams::from_free(p.a, a_, b_, d_, f_, h_), Some(p));
            assert!(p.is_consistent());
        }
    }

    #[test]
    fn closed_form_count_matches_enumeration() {
        for n in 1..=60 {
            assert_eq!(count_dc_octagons(n), enumerate_dc_octagons(n).count() as u64, "n = {n}");
        }
        let table = count_table(60);
        for (n, c) in table {
            assert_eq!(c, count_dc_octagons(n));
        }
    }

    #[test]
    fn family_cells_have_binomial_size() {
        let mut cells: BTreeMap<(u64, u64), u64> = BTreeMap::new();
        for p in lower_bound_family(400) {
            assert!(p.is_consistent());
            *cells.entry((p.a, p.b)).or_default() += 1;
        }
        for ((_, b), size) in cells {
            assert_eq!(size, binom2(b) * binom2(b));
        }
        assert_eq!(lower_bound_family(15).count(), 0);
    }

    #[test]
    fn realizations_are_valid_and_sized() {
        for p in enumerate_dc_octagons(12) {
            let g = octagon_to_gluing(&p).unwrap();
            assert!(validate(&g).valid, "{p:?}");
            assert_eq!(g.n() as u64, p.squares());
        }
    }

    #[test]
    fn congruence_keys_are_stable() {
        for p in enumerate_dc_octagons(20) {
            let k = p.congruence_key();
            assert_eq!(k.congruence_key(), k);
            assert_eq!(k.squares(), p.squares());
        }
        assert!(enumerate_congruence_classes(20).len() < enumerate_dc_octagons(20).count());
    }
}
