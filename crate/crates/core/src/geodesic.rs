//! Exact shortest paths between cone points by continuous Dijkstra.
//!
//! Every vertex of a valid gluing has angle at most 2π, so a shortest path
//! between cone points never bends: it unfolds to a straight segment between
//! two lattice points. The engine propagates windows (intervals of a glued
//! edge together with the unfolded image of the source) in order of their
//! minimum distance. Interval endpoints are rationals and source images are
//! integer points, so every comparison is exact.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{Placement, Point, QPoint};
use crate::rational::{self, Q};
use crate::surface::{self, Corner, Gluing, Side, SideRef, SurfaceError, VertexClass};
use crate::trace::{BoundaryPoint, Crossing};

pub use crate::trace::{classify_crossing_types, CrossingCounts, GeodesicTrace, TraceError};

pub const DEFAULT_MAX_WINDOWS: usize = 4_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeodesicError {
    #[error(transparent)]
    InvalidGluing(#[from] SurfaceError),
    #[error("cone point {index} out of range ({count} cone points)")]
    NoSuchConePoint { index: usize, count: usize },
    #[error("window budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error("distance matrix is not symmetric at ({i}, {j}): {forward} vs {backward}")]
    SymmetryViolation { i: usize, j: usize, forward: i64, backward: i64 },
}

/// A square positioned in the common unfolding plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UnfoldedFrame {
    pub square: usize,
    pub placement: Placement,
}

/// A pencil of straight paths from the source entering `square` through `side`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub square: usize,
    pub side: Side,
    pub lo: Q,
    pub hi: Q,
    /// Source position in the local frame of `square`.
    pub source_image: Point,
    /// Local frame of `square` → plane of the root square.
    pub frame: UnfoldedFrame,
    pub depth: u32,
    pub root: usize,
    pub parent: Option<usize>,
    pub min_d2: Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeodesicConfig {
    pub max_windows: usize,
}

impl Default for GeodesicConfig {
    fn default() -> Self {
        Self { max_windows: DEFAULT_MAX_WINDOWS }
    }
}

/// Combinatorial data shared by all runs on one gluing.
pub struct Surface<'g> {
    pub gluing: &'g Gluing,
    pub cones: Vec<VertexClass>,
    class_of: Vec<usize>,
    cone_of_class: Vec<Option<usize>>,
    class_count: usize,
    across: Vec<Placement>,
}

fn corner_point(c: Corner) -> Point {
    Point::from_array(c.position())
}

/// Isometry from the local frame of the square owning side `side_index` to
/// the local frame of the square glued across it, placing the first square
/// just outside the second.
pub fn across_transform(g: &Gluing, side_index: usize) -> Placement {
    let s = SideRef::from_index(side_index);
    let (p, flip) = g.mate(s);
    let (q0, q1) = if flip {
        (p.side.tail(), p.side.head())
    } else {
        (p.side.head(), p.side.tail())
    };
    Placement::across_edge(
        corner_point(s.side.tail()),
        corner_point(s.side.head()),
        corner_point(q0),
        corner_point(q1),
    )
}

impl<'g> Surface<'g> {
    pub fn new(g: &'g Gluing) -> Result<Self, GeodesicError> {
        let cones = surface::cone_points(g)?;
        let classes = surface::vertex_classes(g);
        let class_of = surface::corner_class_map(g, &classes);
        let mut cone_of_class = vec![None; classes.len()];
        for (k, c) in classes.iter().filter(|c| c.is_cone_point()).enumerate() {
            let idx = classes.iter().position(|x| x == c).expect("cone point is a class");
            cone_of_class[idx] = Some(k);
        }
        let across = (0..4 * g.n()).map(|i| across_transform(g, i)).collect();
        Ok(Self {
            gluing: g,
            cones,
            class_of,
            cone_of_class,
            class_count: classes.len(),
            across,
        })
    }

    fn cone_at(&self, square: usize, corner: usize) -> Option<usize> {
        self.cone_of_class[self.class_of[4 * square + corner]]
    }

    /// Squared hop counts along square edges between cone points.
    fn edge_graph_bounds(&self, source: usize) -> Vec<i64> {
        let mut adj = vec![Vec::new(); self.class_count];
        for q in 0..self.gluing.n() {
            for k in 0..4 {
                let a = self.class_of[4 * q + k];
                let b = self.class_of[4 * q + (k + 1) % 4];
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let start = self.cones[source].corners[0].index();
        let mut hops = vec![usize::MAX; self.class_count];
        hops[self.class_of[start]] = 0;
        let mut queue = VecDeque::from([self.class_of[start]]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if hops[w] == usize::MAX {
                    hops[w] = hops[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        let mut out = vec![i64::MAX; self.cones.len()];
        for (class, h) in hops.into_iter().enumerate() {
            if let Some(k) = self.cone_of_class[class] {
                if h != usize::MAX {
                    out[k] = (h * h) as i64;
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
struct Hit {
    root: usize,
    window: Option<usize>,
    corner: usize,
}

/// Result of one propagation run.
#[derive(Clone, Debug)]
pub struct ShortestPaths {
    pub source: usize,
    pub squared: Vec<i64>,
    pub traces: Vec<GeodesicTrace>,
    pub windows_created: usize,
}

struct Run<'s, 'g> {
    surface: &'s Surface<'g>,
    roots: Vec<(usize, usize)>,
    windows: Vec<Window>,
    by_edge: Vec<Vec<usize>>,
    heap: BinaryHeap<Reverse<(Q, usize)>>,
    best: Vec<Option<(i64, Hit)>>,
    bounds: Vec<i64>,
    config: GeodesicConfig,
}

fn side_points(side: usize) -> (QPoint, QPoint) {
    let s = Side::from_index(side);
    (corner_point(s.tail()).to_rational(), corner_point(s.head()).to_rational())
}

/// Solves `a + b·u ≥ 0` on `[lo, hi]`.
fn half_line(a: Q, b: Q, lo: Q, hi: Q) -> Option<(Q, Q)> {
    let zero = rational::zero();
    let (lo, hi) = if b > zero {
        (lo.max(-a / b), hi)
    } else if b < zero {
        (lo, hi.min(-a / b))
    } else if a >= zero {
        (lo, hi)
    } else {
        return None;
    };
    (lo <= hi).then_some((lo, hi))
}

impl<'s, 'g> Run<'s, 'g> {
    fn upper_bound(&self) -> i64 {
        self.best
            .iter()
            .zip(&self.bounds)
            .map(|(b, &ub)| b.map_or(ub, |(d, _)| d.min(ub)))
            .max()
            .unwrap_or(0)
    }

    fn offer(&mut self, cone: usize, d2: i64, hit: Hit) {
        if self.best[cone].is_none_or(|(d, _)| d2 < d) {
            self.best[cone] = Some((d2, hit));
        }
    }

    fn offer_corner(&mut self, source: Point, square: usize, corner: usize, root: usize, window: Option<usize>) {
        if let Some(cone) = self.surface.cone_at(square, corner) {
            let d2 = (corner_point(Corner::from_index(corner)) - source).norm2();
            self.offer(cone, d2, Hit { root, window, corner });
        }
    }

    /// Sends the part `[ul, uh]` of side `side` of `square` across the glued edge.
    #[allow(clippy::too_many_arguments)]
    fn emit(
        &mut self,
        square: usize,
        side: usize,
        ul: Q,
        uh: Q,
        source: Point,
        frame: Placement,
        depth: u32,
        root: usize,
        parent: Option<usize>,
    ) -> Result<(), GeodesicError> {
        let g = self.surface.gluing;
        let (partner, flip) = g.mate_index(4 * square + side);
        let (psquare, pside) = (partner / 4, partner % 4);
        let t = self.surface.across[4 * square + side];
        let s2 = t.apply(source);
        let placement = frame.compose(&t.inverse());
        let one = rational::one();
        let (mut lo, mut hi) = if flip { (ul, uh) } else { (one - uh, one - ul) };

        let (a, b) = side_points(pside);
        let e = b - a;
        let rel = a - s2.to_rational();
        let tstar = rational::clamp(-e.dot(rel), lo, hi);
        let min_d2 = (rel + e.scale(tstar)).norm2();
        if min_d2 > Q::from_integer(self.upper_bound()) {
            return Ok(());
        }

        // trim by existing windows on the same directed edge
        let mut rest = vec![(lo, hi)];
        let ai = Point::from_array(Side::from_index(pside).tail().position());
        let ei = Point::from_array(Side::from_index(pside).head().position()) - ai;
        for &w in &self.by_edge[partner] {
            let other = &self.windows[w];
            let (ol, oh) = (lo.max(other.lo), hi.min(other.hi));
            if ol > oh {
                continue;
            }
            let c0 = (ai - s2).norm2() - (ai - other.source_image).norm2();
            let c1 = 2 * ei.dot(other.source_image - s2);
            let Some((dl, dh)) = half_line(Q::from_integer(c0), Q::from_integer(c1), ol, oh) else {
                continue;
            };
            rest = rest
                .into_iter()
                .flat_map(|(x, y)| {
                    let mut parts = Vec::with_capacity(2);
                    if dh < x || dl > y {
                        parts.push((x, y));
                    } else {
                        if x < dl {
                            parts.push((x, dl));
                        }
                        if dh < y {
                            parts.push((dh, y));
                        }
                    }
                    parts
                })
                .collect();
            if rest.is_empty() {
                return Ok(());
            }
        }
        lo = rest.iter().map(|r| r.0).min().expect("nonempty");
        hi = rest.iter().map(|r| r.1).max().expect("nonempty");
        let tstar = rational::clamp(-e.dot(rel), lo, hi);
        let min_d2 = (rel + e.scale(tstar)).norm2();

        if self.windows.len() >= self.config.max_windows {
            return Err(GeodesicError::BudgetExceeded(self.config.max_windows));
        }
        let idx = self.windows.len();
        self.windows.push(Window {
            square: psquare,
            side: Side::from_index(pside),
            lo,
            hi,
            source_image: s2,
            frame: UnfoldedFrame { square: psquare, placement },
            depth: depth + 1,
            root,
            parent,
            min_d2,
        });
        self.by_edge[partner].push(idx);
        self.heap.push(Reverse((min_d2, idx)));
        Ok(())
    }

    fn start(&mut self) -> Result<(), GeodesicError> {
        for r in 0..self.roots.len() {
            let (q, c) = self.roots[r];
            let s = corner_point(Corner::from_index(c));
            for other in (0..4).filter(|&o| o != c) {
                self.offer_corner(s, q, other, r, None);
            }
            let one = rational::one();
            for side in [(c + 1) % 4, (c + 2) % 4] {
                self.emit(q, side, rational::zero(), one, s, Placement::IDENTITY, 0, r, None)?;
            }
        }
        Ok(())
    }

    fn process(&mut self, idx: usize) -> Result<(), GeodesicError> {
        let w = self.windows[idx].clone();
        let s = w.source_image.to_rational();
        let (a, b) = side_points(w.side.index());
        let e = b - a;
        let dlo = a + e.scale(w.lo) - s;
        let dhi = a + e.scale(w.hi) - s;
        let zero = rational::zero();
        let sigma = dlo.cross(dhi);
        if sigma == zero {
            return Ok(());
        }
        let sign = if sigma > zero { rational::one() } else { -rational::one() };

        for c in 0..4 {
            let x = corner_point(Corner::from_index(c)).to_rational() - s;
            if sign * dlo.cross(x) >= zero && sign * x.cross(dhi) >= zero {
                self.offer_corner(w.source_image, w.square, c, w.root, Some(idx));
            }
        }

        for j in (0..4).filter(|&j| j != w.side.index()) {
            let (aj, bj) = side_points(j);
            let ej = bj - aj;
            // the source must see side j from inside the square
            if ej.cross(s - aj) <= zero {
                continue;
            }
            let r = aj - s;
            let Some((l1, h1)) = half_line(sign * dlo.cross(r), sign * dlo.cross(ej), zero, rational::one()) else {
                continue;
            };
            let Some((l2, h2)) = half_line(sign * r.cross(dhi), sign * ej.cross(dhi), l1, h1) else {
                continue;
            };
            if l2 < h2 {
                self.emit(w.square, j, l2, h2, w.source_image, w.frame.placement, w.depth, w.root, Some(idx))?;
            }
        }
        Ok(())
    }

    fn trace(&self, source: usize, target: usize, d2: i64, hit: Hit) -> GeodesicTrace {
        let (q0, c0) = self.roots[hit.root];
        let plane_source = corner_point(Corner::from_index(c0));
        let mut chain = vec![UnfoldedFrame { square: q0, placement: Placement::IDENTITY }];
        let mut ws = Vec::new();
        let mut cur = hit.window;
        while let Some(w) = cur {
            ws.push(self.windows[w].frame);
            cur = self.windows[w].parent;
        }
        chain.extend(ws.into_iter().rev());
        let last = chain.last().expect("chain starts at the root").placement;
        let plane_target = last.apply(corner_point(Corner::from_index(hit.corner)));
        debug_assert_eq!((plane_target - plane_source).norm2(), d2);
        let crossings = chain
            .iter()
            .filter_map(|f| clip_crossing(f, plane_source, plane_target))
            .collect();
        GeodesicTrace {
            source,
            target,
            squared_length: d2,
            plane_source,
            plane_target,
            crossings,
        }
    }
}

/// Part of the plane segment inside the frame's square, if it meets the interior.
fn clip_crossing(frame: &UnfoldedFrame, from: Point, to: Point) -> Option<Crossing> {
    let inv = frame.placement.inverse();
    let p = inv.apply(from).to_rational();
    let d = inv.apply(to).to_rational() - p;
    let (zero, one) = (rational::zero(), rational::one());
    let (mut t0, mut t1) = (zero, one);
    for (pc, dc) in [(p.x, d.x), (p.y, d.y)] {
        if dc == zero {
            if pc < zero || pc > one {
                return None;
            }
            continue;
        }
        let (a, b) = ((zero - pc) / dc, (one - pc) / dc);
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        t0 = t0.max(a);
        t1 = t1.min(b);
    }
    if t0 >= t1 {
        return None;
    }
    let mid = p + d.scale((t0 + t1) / Q::from_integer(2));
    let interior = |v: Q| v > zero && v < one;
    if !interior(mid.x) || !interior(mid.y) {
        return None;
    }
    let entry = BoundaryPoint::locate(p + d.scale(t0))?;
    let exit = BoundaryPoint::locate(p + d.scale(t1))?;
    Some(Crossing::new(frame.square, entry, exit))
}

/// Exact squared distances and traces from cone point `source` (index into
/// [`surface::cone_points`]) to every cone point.
pub fn shortest_distances(g: &Gluing, source: usize) -> Result<ShortestPaths, GeodesicError> {
    let s = Surface::new(g)?;
    shortest_distances_on(&s, source, GeodesicConfig::default())
}

pub fn shortest_distances_on(
    surface: &Surface<'_>,
    source: usize,
    config: GeodesicConfig,
) -> Result<ShortestPaths, GeodesicError> {
    let count = surface.cones.len();
    if source >= count {
        return Err(GeodesicError::NoSuchConePoint { index: source, count });
    }
    let roots = surface.cones[source]
        .corners
        .iter()
        .map(|c| (c.square, c.corner.index()))
        .collect();
    let mut run = Run {
        surface,
        roots,
        windows: Vec::new(),
        by_edge: vec![Vec::new(); 4 * surface.gluing.n()],
        heap: BinaryHeap::new(),
        best: vec![None; count],
        bounds: surface.edge_graph_bounds(source),
        config,
    };
    run.best[source] = Some((0, Hit { root: 0, window: None, corner: 0 }));
    run.start()?;
    while let Some(Reverse((d, idx))) = run.heap.pop() {
        if d > Q::from_integer(run.upper_bound()) {
            break;
        }
        run.process(idx)?;
    }
    let mut squared = Vec::with_capacity(count);
    let mut traces = Vec::with_capacity(count);
    for target in 0..count {
        let (d2, hit) = run.best[target].expect("every cone point is reachable on a connected surface");
        squared.push(d2);
        if target == source {
            traces.push(GeodesicTrace {
                source,
                target,
                squared_length: 0,
                plane_source: Point::default(),
                plane_target: Point::default(),
                crossings: Vec::new(),
            });
        } else {
            traces.push(run.trace(source, target, d2, hit));
        }
    }
    Ok(ShortestPaths {
        source,
        squared,
        traces,
        windows_created: run.windows.len(),
    })
}

/// Pairwise squared geodesic distances between cone points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    pub curvature_quarters: Vec<i32>,
    pub entries: Vec<Vec<i64>>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization cannot fail")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// First triple `(i, j, k)` with `d(i, k) > d(i, j) + d(j, k)`, decided exactly.
    pub fn triangle_violation(&self) -> Option<(usize, usize, usize)> {
        let k = self.len();
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    let (c, a, b) = (self.get(i, l), self.get(i, j), self.get(j, l));
                    if !sqrt_sum_dominates(a, b, c) {
                        return Some((i, j, l));
                    }
                }
            }
        }
        None
    }
}

/// `√a + √b ≥ √c` for nonnegative integers, without rounding.
pub fn sqrt_sum_dominates(a: i64, b: i64, c: i64) -> bool {
    let (a, b, c) = (a as i128, b as i128, c as i128);
    let r = c - a - b;
    r <= 0 || r * r <= 4 * a * b
}

/// Every ordered pair of cone points with its shortest-path trace.
pub fn distance_matrix_with_traces(g: &Gluing) -> Result<(DistanceMatrix, Vec<GeodesicTrace>), GeodesicError> {
    let s = Surface::new(g)?;
    let k = s.cones.len();
    let mut entries = Vec::with_capacity(k);
    let mut traces = Vec::new();
    for src in 0..k {
        let run = shortest_distances_on(&s, src, GeodesicConfig::default())?;
        entries.push(run.squared);
        traces.extend(run.traces.into_iter().filter(|t| t.source != t.target));
    }
    for i in 0..k {
        for j in 0..i {
            if entries[i][j] != entries[j][i] {
                return Err(GeodesicError::SymmetryViolation {
                    i,
                    j,
                    forward: entries[i][j],
                    backward: entries[j][i],
                });
            }
        }
    }
    let matrix = DistanceMatrix {
        curvature_quarters: s.cones.iter().map(|c| c.curvature_quarters).collect(),
        entries,
    };
    Ok((matrix, traces))
}

pub fn distance_matrix(g: &Gluing) -> Result<DistanceMatrix, GeodesicError> {
    distance_matrix_with_traces(g).map(|(m, _)| m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::fixtures::*;

    fn off_diagonal(m: &DistanceMatrix) -> Vec<i64> {
        let mut v = Vec::new();
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                v.push(m.get(i, j));
            }
        }
        v.sort();
        v
    }

    #[test]
    fn diagonal_fold_is_a_right_triangle() {
        let m = distance_matrix(&diagonal_fold()).unwrap();
        assert_eq!(off_diagonal(&m), vec![1, 1, 2]);
        // the vertex of curvature 3 quarters sits at the acute corners
        let right = m.curvature_quarters.iter().position(|&c| c == 2).unwrap();
        let row: Vec<i64> = (0..3).filter(|&j| j != right).map(|j| m.get(right, j)).collect();
        assert_eq!(row, vec![1, 1]);
    }

    #[test]
    fn doubly_covered_square_distances() {
        let m = distance_matrix(&doubly_covered_square()).unwrap();
        assert_eq!(off_diagonal(&m), vec![1, 1, 1, 1, 2, 2]);
        for i in 0..4 {
            let r = shortest_distances(&doubly_covered_square(), i).unwrap();
            assert_eq!(r.squared[i], 0);
        }
    }

    #[test]
    fn invalid_gluings_are_refused() {
        assert!(matches!(shortest_distances(&torus(), 0), Err(GeodesicError::InvalidGluing(_))));
    }

    #[test]
    fn traces_realize_their_lengths() {
        let (m, traces) = distance_matrix_with_traces(&doubly_covered_square()).unwrap();
        for t in &traces {
            assert_eq!((t.plane_target - t.plane_source).norm2(), t.squared_length);
            assert_eq!(m.get(t.source, t.target), t.squared_length);
        }
        // the diagonal crosses one face once
        let diag = traces.iter().find(|t| t.squared_length == 2).unwrap();
        assert_eq!(diag.crossings.len(), 1);
        assert_eq!(diag.crossings[0].segment_type, 1);
    }

    #[test]
    fn budget_is_enforced() {
        let g = doubly_covered_square();
        let s = Surface::new(&g).unwrap();
        let r = shortest_distances_on(&s, 0, GeodesicConfig { max_windows: 1 });
        assert_eq!(r.unwrap_err(), GeodesicError::BudgetExceeded(1));
    }

    #[test]
    fn exact_triangle_inequality() {
        assert!(sqrt_sum_dominates(1, 1, 4));
        assert!(!sqrt_sum_dominates(1, 1, 5));
        assert!(sqrt_sum_dominates(2, 2, 8));
        assert!(!sqrt_sum_dominates(2, 2, 9));
    }
}
