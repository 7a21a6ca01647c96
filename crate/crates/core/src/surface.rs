//! Edge-to-edge gluings of unit squares and their validation as convex surfaces.
//!
//! Every square carries the same local frame: corners `NE, NW, SW, SE` in
//! counterclockwise order at `(1,1), (0,1), (0,0), (1,0)`, and side `k` runs
//! counterclockwise from corner `k` to corner `k + 1`, which gives the side
//! order `N, W, S, E`.
//!
//! An identification with `flip = false` glues the tail of one directed side
//! to the head of the other (the orientation-compatible seam); `flip = true`
//! glues tail to tail and head to head.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsu::DisjointSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    N,
    W,
    S,
    E,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::N, Side::W, Side::S, Side::E];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Side {
        Self::ALL[i % 4]
    }

    /// Corner where the counterclockwise traversal of this side starts.
    pub fn tail(self) -> Corner {
        Corner::from_index(self.index())
    }

    pub fn head(self) -> Corner {
        Corner::from_index(self.index() + 1)
    }

    pub fn label(self) -> &'static str {
        match self {
            Side::N => "N",
            Side::W => "W",
            Side::S => "S",
            Side::E => "E",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Corner {
    NE,
    NW,
    SW,
    SE,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::NE, Corner::NW, Corner::SW, Corner::SE];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Corner {
        Self::ALL[i % 4]
    }

    /// Lattice coordinates of the corner in the square's local frame.
    pub fn position(self) -> [i64; 2] {
        match self {
            Corner::NE => [1, 1],
            Corner::NW => [0, 1],
            Corner::SW => [0, 0],
            Corner::SE => [1, 0],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SideRef {
    pub square: usize,
    pub side: Side,
}

impl SideRef {
    pub fn new(square: usize, side: Side) -> Self {
        Self { square, side }
    }

    pub fn index(self) -> usize {
        4 * self.square + self.side.index()
    }

    pub fn from_index(i: usize) -> Self {
        Self::new(i / 4, Side::from_index(i % 4))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CornerRef {
    pub square: usize,
    pub corner: Corner,
}

impl CornerRef {
    pub fn new(square: usize, corner: Corner) -> Self {
        Self { square, corner }
    }

    pub fn index(self) -> usize {
        4 * self.square + self.corner.index()
    }

    pub fn from_index(i: usize) -> Self {
        Self::new(i / 4, Corner::from_index(i % 4))
    }
}

/// One glued pair of sides, stored with the smaller side first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Identification {
    pub first: SideRef,
    pub second: SideRef,
    pub flip: bool,
}

impl Identification {
    pub fn new(a: SideRef, b: SideRef, flip: bool) -> Result<Self, GluingError> {
        if a == b {
            return Err(GluingError::SelfGlued(a.square, a.side));
        }
        let (first, second) = if a < b { (a, b) } else { (b, a) };
        Ok(Self { first, second, flip })
    }

    /// Pairs of corner indices made equal by this identification.
    pub fn corner_links(&self) -> [(usize, usize); 2] {
        let tail = |s: SideRef| CornerRef::new(s.square, s.side.tail()).index();
        let head = |s: SideRef| CornerRef::new(s.square, s.side.head()).index();
        let (a, b) = (self.first, self.second);
        if self.flip {
            [(tail(a), tail(b)), (head(a), head(b))]
        } else {
            [(tail(a), head(b)), (head(a), tail(b))]
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GluingError {
    #[error("a gluing needs at least one square")]
    Empty,
    #[error("square {0} is out of range for n = {1}")]
    SquareOutOfRange(usize, usize),
    #[error("side {1} of square {0} is glued to itself")]
    SelfGlued(usize, Side),
    #[error("side {1} of square {0} appears in more than one identification")]
    SideRepeated(usize, Side),
    #[error("side {1} of square {0} is not glued")]
    SideUnmatched(usize, Side),
    #[error("expected {expected} identifications, found {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("malformed gluing record: {0}")]
    Malformed(String),
}

/// A perfect matching of the `4n` sides of `n` unit squares.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GluingRecord", into = "GluingRecord")]
pub struct Gluing {
    n: usize,
    identifications: Vec<Identification>,
    // mate[side index] = (partner side index, flip)
    mate: Vec<(usize, bool)>,
}

impl Gluing {
    pub fn new(n: usize, identifications: Vec<Identification>) -> Result<Self, GluingError> {
        if n == 0 {
            return Err(GluingError::Empty);
        }
        if identifications.len() != 2 * n {
            return Err(GluingError::WrongCount {
                expected: 2 * n,
                found: identifications.len(),
            });
        }
        let mut identifications = identifications
            .into_iter()
            .map(|id| Identification::new(id.first, id.second, id.flip))
            .collect::<Result<Vec<_>, _>>()?;
        let mut mate = vec![(usize::MAX, false); 4 * n];
        for id in &identifications {
            for s in [id.first, id.second] {
                if s.square >= n {
                    return Err(GluingError::SquareOutOfRange(s.square, n));
                }
                if mate[s.index()].0 != usize::MAX {
                    return Err(GluingError::SideRepeated(s.square, s.side));
                }
                mate[s.index()].0 = usize::MAX - 1;
            }
            let (a, b) = (id.first.index(), id.second.index());
            mate[a] = (b, id.flip);
            mate[b] = (a, id.flip);
        }
        if let Some(i) = mate.iter().position(|m| m.0 >= usize::MAX - 1) {
            let s = SideRef::from_index(i);
            return Err(GluingError::SideUnmatched(s.square, s.side));
        }
        identifications.sort();
        Ok(Self {
            n,
            identifications,
            mate,
        })
    }

    /// Builds a gluing from `(square, side, square, side, flip)` tuples.
    pub fn from_tuples(
        n: usize,
        tuples: &[(usize, Side, usize, Side, bool)],
    ) -> Result<Self, GluingError> {
        let ids = tuples
            .iter()
            .map(|&(qa, sa, qb, sb, flip)| {
                Identification::new(SideRef::new(qa, sa), SideRef::new(qb, sb), flip)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, ids)
    }

    /// Builds a gluing from a side-index matching: `mate[i] = (j, flip)` with `mate[j] = (i, flip)`.
    pub fn from_mates(n: usize, mate: &[(usize, bool)]) -> Result<Self, GluingError> {
        let mut ids = Vec::with_capacity(2 * n);
        for (i, &(j, flip)) in mate.iter().enumerate() {
            if i < j {
                ids.push(Identification::new(
                    SideRef::from_index(i),
                    SideRef::from_index(j),
                    flip,
                )?);
            } else if i == j {
                let s = SideRef::from_index(i);
                return Err(GluingError::SelfGlued(s.square, s.side));
            }
        }
        Self::new(n, ids)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn identifications(&self) -> &[Identification] {
        &self.identifications
    }

    /// Partner of a side together with the orientation bit of their seam.
    pub fn mate(&self, s: SideRef) -> (SideRef, bool) {
        let (j, flip) = self.mate[s.index()];
        (SideRef::from_index(j), flip)
    }

    pub fn mate_index(&self, side_index: usize) -> (usize, bool) {
        self.mate[side_index]
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("gluing serialization cannot fail")
    }

    pub fn from_json_line(line: &str) -> Result<Self, GluingError> {
        serde_json::from_str(line).map_err(|e| GluingError::Malformed(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct GluingRecord {
    n: usize,
    id: Vec<(usize, Side, usize, Side, bool)>,
}

impl TryFrom<GluingRecord> for Gluing {
    type Error = GluingError;

    fn try_from(r: GluingRecord) -> Result<Self, Self::Error> {
        Gluing::from_tuples(r.n, &r.id)
    }
}

impl From<Gluing> for GluingRecord {
    fn from(g: Gluing) -> Self {
        GluingRecord {
            n: g.n,
            id: g
                .identifications
                .iter()
                .map(|i| (i.first.square, i.first.side, i.second.square, i.second.side, i.flip))
                .collect(),
        }
    }
}

/// A vertex of the glued surface: an equivalence class of square corners.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexClass {
    pub corners: Vec<CornerRef>,
    pub corner_count: usize,
    /// Total angle in quarter turns.
    pub angle_quarters: i32,
    /// Curvature `2π − angle` in quarter turns.
    pub curvature_quarters: i32,
}

impl VertexClass {
    fn from_corners(mut corners: Vec<CornerRef>) -> Self {
        corners.sort();
        let count = corners.len();
        Self {
            corners,
            corner_count: count,
            angle_quarters: count as i32,
            curvature_quarters: 4 - count as i32,
        }
    }

    pub fn is_cone_point(&self) -> bool {
        self.corner_count < 4
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceCheck {
    pub connected: bool,
    pub euler_characteristic: i64,
    pub max_corner_count: usize,
    pub cone_points: Vec<VertexClass>,
    pub valid: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("gluing is not a convex surface (connected = {connected}, euler characteristic = {euler}, max corners = {max_corners})")]
    Invalid {
        connected: bool,
        euler: i64,
        max_corners: usize,
    },
}

/// Partitions the `4n` corners into vertex classes, ordered by smallest corner.
pub fn vertex_classes(g: &Gluing) -> Vec<VertexClass> {
    let mut dsu = DisjointSet::new(4 * g.n);
    for id in &g.identifications {
        for (a, b) in id.corner_links() {
            dsu.union(a, b);
        }
    }
    dsu.groups()
        .into_iter()
        .map(|grp| VertexClass::from_corners(grp.into_iter().map(CornerRef::from_index).collect()))
        .collect()
}

/// Corner index → vertex class index, consistent with [`vertex_classes`].
pub fn corner_class_map(g: &Gluing, classes: &[VertexClass]) -> Vec<usize> {
    let mut map = vec![0; 4 * g.n];
    for (k, c) in classes.iter().enumerate() {
        for r in &c.corners {
            map[r.index()] = k;
        }
    }
    map
}

pub fn is_connected(g: &Gluing) -> bool {
    let mut dsu = DisjointSet::new(g.n);
    for id in &g.identifications {
        dsu.union(id.first.square, id.second.square);
    }
    dsu.set_size(0) == g.n
}

pub fn validate(g: &Gluing) -> SurfaceCheck {
    let classes = vertex_classes(g);
    let connected = is_connected(g);
    let v = classes.len() as i64;
    let faces = g.n as i64;
    let edges = 2 * g.n as i64;
    let euler_characteristic = v - edges + faces;
    let max_corner_count = classes.iter().map(|c| c.corner_count).max().unwrap_or(0);
    let valid = connected && euler_characteristic == 2 && max_corner_count <= 4;
    let cone_points = classes.into_iter().filter(|c| c.is_cone_point()).collect();
    SurfaceCheck {
        connected,
        euler_characteristic,
        max_corner_count,
        cone_points,
        valid,
    }
}

pub fn cone_points(g: &Gluing) -> Result<Vec<VertexClass>, SurfaceError> {
    let check = validate(g);
    if !check.valid {
        return Err(SurfaceError::Invalid {
            connected: check.connected,
            euler: check.euler_characteristic,
            max_corners: check.max_corner_count,
        });
    }
    Ok(check.cone_points)
}

/// Small named gluings used throughout tests and examples.
pub mod fixtures {
    use super::*;

    /// One square with N glued to E and S glued to W: a doubly covered right isosceles triangle.
    pub fn diagonal_fold() -> Gluing {
        Gluing::from_tuples(1, &[(0, Side::N, 0, Side::E, false), (0, Side::S, 0, Side::W, false)])
            .expect("fixture is well formed")
    }

    /// Two squares glued side to side with mirrored orientation.
    pub fn doubly_covered_square() -> Gluing {
        let t: Vec<_> = Side::ALL.iter().map(|&s| (0, s, 1, s, true)).collect();
        Gluing::from_tuples(2, &t).expect("fixture is well formed")
    }

    /// The doubly covered parallelogram with sides 3 and √2 (six squares),
    /// written down from two different flat cuttings: a 4×1 strip with its
    /// north-west and south-east corners folded, and the same strip with the
    /// other two corners folded. The side tuples differ; the surface is the same.
    pub fn parallelogram_cuttings() -> (Gluing, Gluing) {
        use Side::{E, N, S, W};
        let a = Gluing::from_tuples(
            6,
            &[
                (0, N, 4, W, true),
                (0, W, 0, S, false),
                (0, E, 1, W, false),
                (1, N, 4, N, true),
                (1, S, 4, S, true),
                (1, E, 2, W, false),
                (2, N, 5, N, true),
                (2, S, 5, S, true),
                (2, E, 3, W, false),
                (3, N, 3, E, false),
                (3, S, 5, E, true),
                (4, E, 5, W, false),
            ],
        )
        .expect("fixture is well formed");
        let b = Gluing::from_tuples(
            6,
            &[
                (0, N, 0, W, false),
                (0, S, 4, W, true),
                (0, E, 1, W, false),
                (1, N, 4, N, true),
                (1, S, 4, S, true),
                (1, E, 2, W, false),
                (2, N, 5, N, true),
                (2, S, 5, S, true),
                (2, E, 3, W, false),
                (3, N, 5, E, true),
                (3, S, 3, E, false),
                (4, E, 5, W, false),
            ],
        )
        .expect("fixture is well formed");
        (a, b)
    }

    /// The doubly covered parallelogram with sides 1 and √2 at two scales:
    /// two squares and four squares.
    pub fn scaled_parallelograms() -> (Gluing, Gluing) {
        use Side::{E, N, S, W};
        let small = Gluing::from_tuples(2, &[(0, N, 0, W, false), (0, S, 1, N, false), (0, E, 1, W, false), (1, S, 1, E, false)])
            .expect("fixture is well formed");
        let large = Gluing::from_tuples(
            4,
            &[
                (0, N, 0, W, false),
                (0, S, 1, N, false),
                (0, E, 2, N, false),
                (1, W, 2, E, false),
                (1, S, 3, N, false),
                (1, E, 2, W, false),
                (2, S, 3, W, false),
                (3, S, 3, E, false),
            ],
        )
        .expect("fixture is well formed");
        (small, large)
    }

    /// One square with opposite sides glued by translation.
    pub fn torus() -> Gluing {
        Gluing::from_tuples(1, &[(0, Side::N, 0, Side::S, false), (0, Side::E, 0, Side::W, false)])
            .expect("fixture is well formed")
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn counts(g: &Gluing) -> Vec<usize> {
        let mut c: Vec<_> = vertex_classes(g).iter().map(|v| v.corner_count).collect();
        c.sort();
        c
    }

    #[test]
    fn corner_classes_of_small_gluings() {
        assert_eq!(counts(&diagonal_fold()), vec![1, 1, 2]);
        assert_eq!(counts(&doubly_covered_square()), vec![2, 2, 2, 2]);
        assert_eq!(counts(&torus()), vec![4]);
    }

    #[test]
    fn diagonal_fold_is_valid() {
        let c = validate(&diagonal_fold());
        assert!(c.valid);
        assert_eq!(c.euler_characteristic, 2);
        let mut curv: Vec<_> = c.cone_points.iter().map(|v| v.curvature_quarters).collect();
        curv.sort();
        assert_eq!(curv, vec![2, 3, 3]);
    }

    #[test]
    fn torus_is_rejected() {
        let c = validate(&torus());
        assert_eq!(c.euler_characteristic, 0);
        assert!(!c.valid);
        assert!(cone_points(&torus()).is_err());
    }

    #[test]
    fn doubly_covered_square_has_four_half_turn_cones() {
        let cones = cone_points(&doubly_covered_square()).unwrap();
        assert_eq!(cones.len(), 4);
        assert!(cones.iter().all(|c| c.curvature_quarters == 2));
    }

    #[test]
    fn rejects_malformed_matchings() {
        assert_eq!(
            Gluing::from_tuples(1, &[(0, Side::N, 0, Side::N, false), (0, Side::E, 0, Side::W, false)]),
            Err(GluingError::SelfGlued(0, Side::N))
        );
        assert!(matches!(
            Gluing::from_tuples(1, &[(0, Side::N, 0, Side::E, false), (0, Side::N, 0, Side::W, false)]),
            Err(GluingError::SideRepeated(0, Side::N))
        ));
        assert!(matches!(
            Gluing::from_tuples(1, &[(0, Side::N, 1, Side::E, false), (0, Side::S, 0, Side::W, false)]),
            Err(GluingError::SquareOutOfRange(1, 1))
        ));
        assert!(matches!(Gluing::from_tuples(0, &[]), Err(GluingError::Empty)));
    }

    #[test]
    fn json_round_trip_is_normalized() {
        let g = Gluing::from_tuples(1, &[(0, Side::E, 0, Side::N, false), (0, Side::W, 0, Side::S, false)])
            .unwrap();
        let line = g.to_json_line();
        assert_eq!(line, r#"{"n":1,"id":[[0,"N",0,"E",false],[0,"W",0,"S",false]]}"#);
        assert_eq!(Gluing::from_json_line(&line).unwrap(), g);
        assert!(Gluing::from_json_line(r#"{"n":1,"id":[[0,"N",0,"N",false],[0,"S",0,"W",false]]}"#).is_err());
    }
}
