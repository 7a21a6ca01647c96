//! Integer lattice points and the isometries that place unit squares in an unfolding.

use std::ops::{Add, Sub};

use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub fn from_array(a: [i64; 2]) -> Self {
        Self::new(a[0], a[1])
    }

    pub fn norm2(self) -> i64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dot(self, o: Point) -> i64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> i64 {
        self.x * o.y - self.y * o.x
    }

    pub fn to_rational(self) -> QPoint {
        QPoint::new(Q::from_integer(self.x), Q::from_integer(self.y))
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

/// A point with exact rational coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QPoint {
    pub x: Q,
    pub y: Q,
}

impl QPoint {
    pub fn new(x: Q, y: Q) -> Self {
        Self { x, y }
    }

    pub fn norm2(self) -> Q {
        self.x * self.x + self.y * self.y
    }

    pub fn dot(self, o: QPoint) -> Q {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: QPoint) -> Q {
        self.x * o.y - self.y * o.x
    }

    pub fn scale(self, t: Q) -> QPoint {
        QPoint::new(self.x * t, self.y * t)
    }
}

impl Add for QPoint {
    type Output = QPoint;
    fn add(self, o: QPoint) -> QPoint {
        QPoint::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for QPoint {
    type Output = QPoint;
    fn sub(self, o: QPoint) -> QPoint {
        QPoint::new(self.x - o.x, self.y - o.y)
    }
}

/// Lattice isometry `p ↦ m·p + t` with `m` one of the eight signed permutation matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Placement {
    pub m: [[i64; 2]; 2],
    pub t: Point,
}

impl Default for Placement {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Placement {
    pub const IDENTITY: Placement = Placement {
        m: [[1, 0], [0, 1]],
        t: Point::new(0, 0),
    };

    pub const ORTHOGONAL: [[[i64; 2]; 2]; 8] = [
        [[1, 0], [0, 1]],
        [[0, -1], [1, 0]],
        [[-1, 0], [0, -1]],
        [[0, 1], [-1, 0]],
        [[1, 0], [0, -1]],
        [[-1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1], [-1, 0]],
    ];

    pub fn linear(&self, p: Point) -> Point {
        Point::new(
            self.m[0][0] * p.x + self.m[0][1] * p.y,
            self.m[1][0] * p.x + self.m[1][1] * p.y,
        )
    }

    pub fn apply(&self, p: Point) -> Point {
        self.linear(p) + self.t
    }

    pub fn apply_q(&self, p: QPoint) -> QPoint {
        let m = |i: usize, j: usize| Q::from_integer(self.m[i][j]);
        QPoint::new(
            m(0, 0) * p.x + m(0, 1) * p.y + Q::from_integer(self.t.x),
            m(1, 0) * p.x + m(1, 1) * p.y + Q::from_integer(self.t.y),
        )
    }

    pub fn determinant(&self) -> i64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Placement) -> Placement {
        let mut m = [[0; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.m[i][0] * other.m[0][j] + self.m[i][1] * other.m[1][j];
            }
        }
        Placement {
            m,
            t: self.apply(other.t),
        }
    }

    pub fn inverse(&self) -> Placement {
        let mt = [[self.m[0][0], self.m[1][0]], [self.m[0][1], self.m[1][1]]];
        let inv = Placement {
            m: mt,
            t: Point::default(),
        };
        let t = inv.linear(self.t);
        Placement {
            m: mt,
            t: Point::new(-t.x, -t.y),
        }
    }

    /// The isometry sending `p0 ↦ q0`, `p1 ↦ q1` (unit lattice segments) that
    /// maps the unit square `[0,1]²` onto the lattice square across the image
    /// segment from `[0,1]²`.
    pub fn across_edge(p0: Point, p1: Point, q0: Point, q1: Point) -> Placement {
        let (d, e) = (p1 - p0, q1 - q0);
        for m in Self::ORTHOGONAL {
            let cand = Placement { m, t: Point::default() };
            if cand.linear(d) != e {
                continue;
            }
            let t = q0 - cand.linear(p0);
            let cand = Placement { m, t };
            // doubled coordinates keep the center on the lattice
            let c = cand.linear(Point::new(1, 1)) + Point::new(2 * t.x, 2 * t.y);
            let inside = (0..=2).contains(&c.x) && (0..=2).contains(&c.y);
            if !inside {
                return cand;
            }
        }
        unreachable!("unit segments always admit an outward isometry")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_inverse() {
        for (i, m) in Placement::ORTHOGONAL.iter().enumerate() {
            let a = Placement { m: *m, t: Point::new(3, -2) };
            let b = Placement { m: Placement::ORTHOGONAL[(i + 3) % 8], t: Point::new(-1, 5) };
            let p = Point::new(7, 4);
            assert_eq!(a.compose(&b).apply(p), a.apply(b.apply(p)));
            assert_eq!(a.inverse().apply(a.apply(p)), p);
            assert_eq!(a.determinant().abs(), 1);
        }
    }

    #[test]
    fn across_edge_lands_outside() {
        // east side of the square glued to the west side of its neighbor
        let t = Placement::across_edge(
            Point::new(1, 0),
            Point::new(1, 1),
            Point::new(0, 0),
            Point::new(0, 1),
        );
        assert_eq!(t.apply(Point::new(0, 0)), Point::new(-1, 0));
        assert_eq!(t.determinant(), 1);
        // the same segment glued head to head reflects
        let r = Placement::across_edge(
            Point::new(1, 0),
            Point::new(1, 1),
            Point::new(0, 1),
            Point::new(0, 0),
        );
        assert_eq!(r.determinant(), -1);
        assert_eq!(r.apply(Point::new(0, 0)), Point::new(-1, 1));
    }
}
