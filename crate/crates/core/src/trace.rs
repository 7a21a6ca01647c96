//! Face-crossing records of shortest paths and the bounds they must obey.
//!
//! A shortest path between cone points meets each unit square in a set of
//! straight segments whose endpoints lie on the square's boundary. The type of
//! a segment is the smaller number of square corners strictly inside the two
//! boundary arcs cut off by its endpoints, so for squares it is 1 (adjacent
//! sides) or 2 (opposite sides).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{Point, QPoint};
use crate::rational::{self, RatStr, Q};
use crate::surface::{Corner, Side};

/// A point on the boundary of the unit square: side plus parameter along its
/// counterclockwise direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoundaryPoint {
    pub side: Side,
    pub t: Q,
}

impl BoundaryPoint {
    /// Boundary point for a point of `∂[0,1]²`; `None` if the point is not on the boundary.
    pub fn locate(p: QPoint) -> Option<Self> {
        let (zero, one) = (rational::zero(), rational::one());
        let inside = |v: Q| v >= zero && v <= one;
        if !inside(p.x) || !inside(p.y) {
            return None;
        }
        let bp = if p.y == one {
            BoundaryPoint { side: Side::N, t: one - p.x }
        } else if p.x == zero {
            BoundaryPoint { side: Side::W, t: one - p.y }
        } else if p.y == zero {
            BoundaryPoint { side: Side::S, t: p.x }
        } else if p.x == one {
            BoundaryPoint { side: Side::E, t: p.y }
        } else {
            return None;
        };
        Some(bp)
    }

    /// Position along the perimeter in `[0, 4)`; corner `k` sits at `k`.
    pub fn perimeter(&self) -> Q {
        let p = Q::from_integer(self.side.index() as i64) + self.t;
        if p >= Q::from_integer(4) {
            p - Q::from_integer(4)
        } else {
            p
        }
    }

    pub fn point(&self) -> QPoint {
        let a = Point::from_array(self.side.tail().position()).to_rational();
        let b = Point::from_array(self.side.head().position()).to_rational();
        a + (b - a).scale(self.t)
    }
}

/// Segment type of a chord of the unit square between two boundary points.
pub fn segment_type(a: &BoundaryPoint, b: &BoundaryPoint) -> u8 {
    let (pa, pb) = (a.perimeter(), b.perimeter());
    let four = Q::from_integer(4);
    let (start, end) = if pa <= pb { (pa, pb) } else { (pb, pa) };
    let mut inner = 0u8;
    let mut at_ends = 0u8;
    for k in 0..4 {
        let c = Q::from_integer(k);
        if c == start || c == end || c + four == end {
            at_ends += 1;
        } else if c > start && c < end {
            inner += 1;
        }
    }
    let outer = 4 - inner - at_ends;
    inner.min(outer)
}

/// One straight piece of a path inside a square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub square: usize,
    pub entry: BoundaryPoint,
    pub exit: BoundaryPoint,
    pub segment_type: u8,
}

impl Crossing {
    pub fn new(square: usize, entry: BoundaryPoint, exit: BoundaryPoint) -> Self {
        Self {
            square,
            segment_type: segment_type(&entry, &exit),
            entry,
            exit,
        }
    }
}

/// A shortest path between two cone points, realized as a straight segment
/// from `plane_source` to `plane_target` in the unfolding of its first square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicTrace {
    pub source: usize,
    pub target: usize,
    pub squared_length: i64,
    pub plane_source: Point,
    pub plane_target: Point,
    pub crossings: Vec<Crossing>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingCounts {
    pub type1: usize,
    pub type2: usize,
}

impl CrossingCounts {
    pub fn total(&self) -> usize {
        self.type1 + self.type2
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("crossing {index} in square {square} has type {found}, expected 1 or 2")]
    BadType { index: usize, square: usize, found: u8 },
    #[error("crossing {index} has a boundary parameter outside [0, 1]")]
    ParameterOutOfRange { index: usize },
    #[error("crossing {index} has coincident endpoints")]
    Degenerate { index: usize },
}

/// Per-square counts of type-1 and type-2 crossings.
pub fn classify_crossing_types(trace: &GeodesicTrace) -> Result<BTreeMap<usize, CrossingCounts>, TraceError> {
    let mut out: BTreeMap<usize, CrossingCounts> = BTreeMap::new();
    for (index, c) in trace.crossings.iter().enumerate() {
        let unit = |t: Q| t >= rational::zero() && t <= rational::one();
        if !unit(c.entry.t) || !unit(c.exit.t) {
            return Err(TraceError::ParameterOutOfRange { index });
        }
        if c.entry.point() == c.exit.point() {
            return Err(TraceError::Degenerate { index });
        }
        let found = segment_type(&c.entry, &c.exit);
        let counts = out.entry(c.square).or_default();
        match found {
            1 => counts.type1 += 1,
            2 => counts.type2 += 1,
            _ => {
                return Err(TraceError::BadType {
                    index,
                    square: c.square,
                    found,
                })
            }
        }
    }
    Ok(out)
}

fn segment_distance2(c: QPoint, a: QPoint, b: QPoint) -> Q {
    let d = b - a;
    let len2 = d.norm2();
    let t = if len2 == rational::zero() {
        rational::zero()
    } else {
        rational::clamp((c - a).dot(d) / len2, rational::zero(), rational::one())
    };
    (a + d.scale(t) - c).norm2()
}

/// Checks the exclusion disks around each crossing of the same square:
/// earlier crossings avoid the open disk centered at the exit point with the
/// segment's length as radius, later crossings avoid the one centered at the
/// entry point, and no other crossing enters the open disk on the segment as
/// diameter. Returns a description of the first violation.
pub fn check_disk_exclusion(trace: &GeodesicTrace) -> Result<(), String> {
    let mut by_square: BTreeMap<usize, Vec<(QPoint, QPoint)>> = BTreeMap::new();
    for c in &trace.crossings {
        by_square
            .entry(c.square)
            .or_default()
            .push((c.entry.point(), c.exit.point()));
    }
    let half = Q::new(1, 2);
    for (square, segs) in by_square {
        for (i, &(a, b)) in segs.iter().enumerate() {
            let r2 = (b - a).norm2();
            let mid = (a + b).scale(half);
            for (j, &(p, q)) in segs.iter().enumerate() {
                if i == j {
                    continue;
                }
                let center = if j < i { b } else { a };
                if segment_distance2(center, p, q) < r2 {
                    return Err(format!("square {square}: crossing {j} enters the disk of crossing {i}"));
                }
                if segment_distance2(mid, p, q) < r2 * Q::new(1, 4) {
                    return Err(format!("square {square}: crossing {j} enters the diameter disk of crossing {i}"));
                }
            }
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct BoundaryRecord {
    side: Side,
    t: RatStr,
}

#[derive(Serialize, Deserialize)]
struct CrossingRecord {
    square: usize,
    entry: BoundaryRecord,
    exit: BoundaryRecord,
    #[serde(rename = "type")]
    segment_type: u8,
}

#[derive(Serialize, Deserialize)]
struct TraceRecord {
    source: usize,
    target: usize,
    squared_length: i64,
    crossings: Vec<CrossingRecord>,
}

impl GeodesicTrace {
    /// Debug dump with rational edge parameters as `"p/q"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        let rec = TraceRecord {
            source: self.source,
            target: self.target,
            squared_length: self.squared_length,
            crossings: self
                .crossings
                .iter()
                .map(|c| CrossingRecord {
                    square: c.square,
                    entry: BoundaryRecord { side: c.entry.side, t: RatStr(c.entry.t) },
                    exit: BoundaryRecord { side: c.exit.side, t: RatStr(c.exit.t) },
                    segment_type: c.segment_type,
                })
                .collect(),
        };
        serde_json::to_value(rec).expect("trace serialization cannot fail")
    }
}

/// Corner of the unit square at a boundary point, if any.
pub fn corner_at(p: QPoint) -> Option<Corner> {
    Corner::ALL
        .into_iter()
        .find(|c| Point::from_array(c.position()).to_rational() == p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(side: Side, t: Q) -> BoundaryPoint {
        BoundaryPoint { side, t }
    }

    #[test]
    fn adjacent_sides_give_type_one() {
        let a = bp(Side::N, Q::new(1, 2));
        let b = bp(Side::E, Q::new(1, 3));
        assert_eq!(segment_type(&a, &b), 1);
        assert_eq!(segment_type(&b, &a), 1);
    }

    #[test]
    fn opposite_sides_give_type_two() {
        let a = bp(Side::N, Q::new(1, 2));
        let b = bp(Side::S, Q::new(1, 5));
        assert_eq!(segment_type(&a, &b), 2);
        let w = bp(Side::W, Q::new(2, 3));
        let e = bp(Side::E, Q::new(1, 7));
        assert_eq!(segment_type(&w, &e), 2);
    }

    #[test]
    fn chords_from_corners() {
        // diagonal NE to SW: one corner on each arc
        let ne = bp(Side::N, rational::zero());
        let sw = bp(Side::S, rational::zero());
        assert_eq!(segment_type(&ne, &sw), 1);
        // corner SW to the middle of N
        let n = bp(Side::N, Q::new(1, 2));
        assert_eq!(segment_type(&sw, &n), 1);
        // a boundary-only segment has type 0 and is rejected by classification
        let s = bp(Side::S, Q::new(1, 2));
        assert_eq!(segment_type(&sw, &s), 0);
    }

    #[test]
    fn locate_round_trips() {
        for side in Side::ALL {
            for t in [Q::new(0, 1), Q::new(1, 3), Q::new(3, 4)] {
                let p = bp(side, t);
                assert_eq!(BoundaryPoint::locate(p.point()).unwrap().point(), p.point());
            }
        }
        assert!(BoundaryPoint::locate(QPoint::new(Q::new(1, 2), Q::new(1, 2))).is_none());
    }

    #[test]
    fn malformed_traces_are_rejected() {
        let bad = GeodesicTrace {
            source: 0,
            target: 1,
            squared_length: 1,
            plane_source: Point::new(0, 0),
            plane_target: Point::new(1, 0),
            crossings: vec![Crossing::new(0, bp(Side::S, rational::zero()), bp(Side::S, rational::one()))],
        };
        assert!(matches!(classify_crossing_types(&bad), Err(TraceError::BadType { .. })));
    }

    #[test]
    fn disk_exclusion_flags_backtracking() {
        // two crossings of one square that nearly retrace each other
        let c1 = Crossing::new(0, bp(Side::W, Q::new(1, 2)), bp(Side::E, Q::new(1, 2)));
        let c2 = Crossing::new(0, bp(Side::N, Q::new(1, 2)), bp(Side::S, Q::new(1, 2)));
        let t = GeodesicTrace {
            source: 0,
            target: 1,
            squared_length: 9,
            plane_source: Point::new(0, 0),
            plane_target: Point::new(3, 0),
            crossings: vec![c1, c2],
        };
        assert!(check_disk_exclusion(&t).is_err());
    }
}
