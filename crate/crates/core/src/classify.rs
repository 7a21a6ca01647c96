//! Isomorphism classes of gluings via normalized distance matrices.
//!
//! Two convex polyhedra are isometric when the geodesic distances between
//! their cone points agree under some bijection, and similar when they agree
//! up to a common factor. Squared distances are divided by their minimum and
//! the points reordered (within equal curvature) to the lexicographically
//! smallest row-major matrix.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geodesic::{self, DistanceMatrix, GeodesicError};
use crate::rational::{RatStr, Q};
use crate::surface::Gluing;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("distance matrix has a zero off-diagonal entry at ({0}, {1})")]
    Degenerate(usize, usize),
    #[error(transparent)]
    Geodesic(#[from] GeodesicError),
}

/// Complete invariant of a distance matrix up to permutation and scale.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalMatrix {
    pub k: usize,
    pub curvature_profile: Vec<i32>,
    pub entries: Vec<Vec<Q>>,
}

/// Orders of `0..k` that sort the labels ascending, enumerated group by group.
fn label_orders(labels: &[i32]) -> (Vec<i32>, Vec<Vec<usize>>) {
    let mut groups: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        groups.entry(l).or_default().push(i);
    }
    let mut profile = labels.to_vec();
    profile.sort();
    (profile, groups.into_values().collect())
}

struct Search<'a> {
    m: &'a [Vec<i64>],
    groups: Vec<Vec<usize>>,
    order: Vec<usize>,
    used: Vec<bool>,
    best: Option<Vec<usize>>,
}

impl Search<'_> {
    /// Compares the row-major sequences of two complete orders.
    fn less(&self, a: &[usize], b: &[usize]) -> bool {
        for i in 0..a.len() {
            for j in 0..a.len() {
                let (x, y) = (self.m[a[i]][a[j]], self.m[b[i]][b[j]]);
                if x != y {
                    return x < y;
                }
            }
        }
        false
    }

    fn run(&mut self, group: usize, filled: usize) {
        if group == self.groups.len() {
            if self.best.as_ref().is_none_or(|b| self.less(&self.order, b)) {
                self.best = Some(self.order.clone());
            }
            return;
        }
        if filled == self.groups[group].len() {
            self.run(group + 1, 0);
            return;
        }
        for idx in 0..self.groups[group].len() {
            let p = self.groups[group][idx];
            if self.used[p] {
                continue;
            }
            self.used[p] = true;
            self.order.push(p);
            self.run(group, filled + 1);
            self.order.pop();
            self.used[p] = false;
        }
    }
}

/// Divides by the minimum off-diagonal entry and permutes to the least
/// row-major form among curvature-preserving orders.
pub fn canonicalize(m: &DistanceMatrix) -> Result<CanonicalMatrix, ClassifyError> {
    let k = m.len();
    let mut min = i64::MAX;
    for i in 0..k {
        for j in 0..k {
            if i != j {
                if m.get(i, j) == 0 {
                    return Err(ClassifyError::Degenerate(i, j));
                }
                min = min.min(m.get(i, j));
            }
        }
    }
    let (profile, groups) = label_orders(&m.curvature_quarters);
    let mut search = Search {
        m: &m.entries,
        groups,
        order: Vec::with_capacity(k),
        used: vec![false; k],
        best: None,
    };
    search.run(0, 0);
    let order = search.best.unwrap_or_default();
    let entries = order
        .iter()
        .map(|&i| order.iter().map(|&j| Q::new(m.get(i, j), min.max(1))).collect())
        .collect();
    Ok(CanonicalMatrix {
        k,
        curvature_profile: profile,
        entries,
    })
}

pub fn canonical_matrix(g: &Gluing) -> Result<CanonicalMatrix, ClassifyError> {
    canonicalize(&geodesic::distance_matrix(g)?)
}

pub fn isomorphic(g1: &Gluing, g2: &Gluing) -> Result<bool, ClassifyError> {
    Ok(canonical_matrix(g1)? == canonical_matrix(g2)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingClass {
    pub matrix: CanonicalMatrix,
    pub representative: Gluing,
    pub multiplicity: usize,
}

#[derive(Serialize, Deserialize)]
struct ClassRecord {
    k: usize,
    curvature_profile: Vec<i32>,
    matrix: Vec<Vec<RatStr>>,
    representative: Gluing,
    multiplicity: usize,
}

impl GluingClass {
    pub fn to_json_line(&self) -> String {
        let rec = ClassRecord {
            k: self.matrix.k,
            curvature_profile: self.matrix.curvature_profile.clone(),
            matrix: self
                .matrix
                .entries
                .iter()
                .map(|r| r.iter().map(|&q| RatStr(q)).collect())
                .collect(),
            representative: self.representative.clone(),
            multiplicity: self.multiplicity,
        };
        serde_json::to_string(&rec).expect("class serialization cannot fail")
    }

    pub fn from_json_line(line: &str) -> serde_json::Result<Self> {
        let rec: ClassRecord = serde_json::from_str(line)?;
        Ok(Self {
            matrix: CanonicalMatrix {
                k: rec.k,
                curvature_profile: rec.curvature_profile,
                entries: rec.matrix.into_iter().map(|r| r.into_iter().map(|q| q.0).collect()).collect(),
            },
            representative: rec.representative,
            multiplicity: rec.multiplicity,
        })
    }
}

/// Partitions gluings by canonical matrix. The representative of each class
/// is its first member in input order; classes are sorted by matrix.
pub fn classify<I: IntoIterator<Item = Gluing>>(gluings: I) -> Result<Vec<GluingClass>, ClassifyError> {
    let gluings: Vec<Gluing> = gluings.into_iter().collect();
    let matrices: Vec<CanonicalMatrix> = gluings
        .par_iter()
        .map(canonical_matrix)
        .collect::<Result<_, _>>()?;
    let mut classes: BTreeMap<CanonicalMatrix, GluingClass> = BTreeMap::new();
    for (g, m) in gluings.into_iter().zip(matrices) {
        classes
            .entry(m.clone())
            .and_modify(|c| c.multiplicity += 1)
            .or_insert(GluingClass {
                matrix: m,
                representative: g,
                multiplicity: 1,
            });
    }
    Ok(classes.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::fixtures::*;

    fn sample() -> DistanceMatrix {
        DistanceMatrix {
            curvature_quarters: vec![2, 3, 3],
            entries: vec![vec![0, 1, 1], vec![1, 0, 2], vec![1, 2, 0]],
        }
    }

    #[test]
    fn scaling_is_normalized_away() {
        let m = sample();
        let mut m4 = m.clone();
        for row in &mut m4.entries {
            for v in row {
                *v *= 4;
            }
        }
        assert_eq!(canonicalize(&m).unwrap(), canonicalize(&m4).unwrap());
        let c = canonicalize(&m).unwrap();
        assert_eq!(c.entries[0][1], Q::from_integer(1));
    }

    #[test]
    fn permutations_are_normalized_away() {
        let m = sample();
        let p = [2, 0, 1];
        let permuted = DistanceMatrix {
            curvature_quarters: p.iter().map(|&i| m.curvature_quarters[i]).collect(),
            entries: p.iter().map(|&i| p.iter().map(|&j| m.entries[i][j]).collect()).collect(),
        };
        assert_eq!(canonicalize(&m).unwrap(), canonicalize(&permuted).unwrap());
    }

    #[test]
    fn zero_entries_are_degenerate() {
        let m = DistanceMatrix {
            curvature_quarters: vec![4, 4],
            entries: vec![vec![0, 0], vec![0, 0]],
        };
        assert_eq!(canonicalize(&m), Err(ClassifyError::Degenerate(0, 1)));
    }

    #[test]
    fn triangle_and_square_differ() {
        assert!(isomorphic(&diagonal_fold(), &diagonal_fold()).unwrap());
        assert!(!isomorphic(&diagonal_fold(), &doubly_covered_square()).unwrap());
    }

    #[test]
    fn duplicates_collapse() {
        let classes = classify(vec![diagonal_fold(), doubly_covered_square(), diagonal_fold()]).unwrap();
        assert_eq!(classes.len(), 2);
        let tri = classes.iter().find(|c| c.matrix.k == 3).unwrap();
        assert_eq!(tri.multiplicity, 2);
        let line = tri.to_json_line();
        assert_eq!(GluingClass::from_json_line(&line).unwrap(), *tri);
    }
}
