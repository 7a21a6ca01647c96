//! Canonical codes for gluings up to square relabeling and per-square dihedral symmetry.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::surface::{Gluing, Identification, Side, SideRef};

/// An element of the symmetry group of one square: reflect (across the NE–SW
/// diagonal) first, then rotate counterclockwise by `rot` quarter turns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Dihedral {
    pub rot: u8,
    pub reflect: bool,
}

impl Dihedral {
    pub const ALL: [Dihedral; 8] = [
        Dihedral { rot: 0, reflect: false },
        Dihedral { rot: 1, reflect: false },
        Dihedral { rot: 2, reflect: false },
        Dihedral { rot: 3, reflect: false },
        Dihedral { rot: 0, reflect: true },
        Dihedral { rot: 1, reflect: true },
        Dihedral { rot: 2, reflect: true },
        Dihedral { rot: 3, reflect: true },
    ];

    /// New label of side index `k`.
    pub fn side(self, k: usize) -> usize {
        let base = if self.reflect { 7 - k % 4 } else { k % 4 };
        (base + self.rot as usize) % 4
    }

    /// Old side index carrying new label `k`.
    pub fn side_preimage(self, k: usize) -> usize {
        let unrotated = (k % 4 + 4 - self.rot as usize) % 4;
        if self.reflect {
            (7 - unrotated) % 4
        } else {
            unrotated
        }
    }

    /// New label of corner index `c`.
    pub fn corner(self, c: usize) -> usize {
        let base = if self.reflect { (4 - c % 4) % 4 } else { c % 4 };
        (base + self.rot as usize) % 4
    }

    /// The unique element with the given reflection bit sending side `k` to label N.
    fn sending_to_north(k: usize, reflect: bool) -> Self {
        let base = if reflect { 7 - k % 4 } else { k % 4 };
        Dihedral {
            rot: ((4 - base % 4) % 4) as u8,
            reflect,
        }
    }
}

/// Applies a square permutation (`perm[old] = new`) and per-square relabelings (indexed by old square).
pub fn relabel(g: &Gluing, perm: &[usize], frames: &[Dihedral]) -> Gluing {
    let ids = g
        .identifications()
        .iter()
        .map(|id| {
            let map = |s: SideRef| {
                SideRef::new(perm[s.square], Side::from_index(frames[s.square].side(s.side.index())))
            };
            let flip = id.flip ^ frames[id.first.square].reflect ^ frames[id.second.square].reflect;
            Identification::new(map(id.first), map(id.second), flip).expect("relabeling keeps sides distinct")
        })
        .collect();
    Gluing::new(g.n(), ids).expect("relabeling preserves the matching")
}

/// Complete invariant of a gluing under relabeling of squares and their sides.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalCode(pub Vec<u32>);

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

const COMPONENT_SEPARATOR: u32 = u32::MAX;

struct Labeling {
    code: Vec<u32>,
    order: Vec<usize>,
    frames: Vec<Dihedral>,
}

/// Breadth-first labeling from a seed. Returns `None` as soon as the code
/// exceeds `bound`, which only prunes labelings that cannot be minimal.
fn bfs_labeling(g: &Gluing, seed: usize, frame: Dihedral, bound: Option<&[u32]>) -> Option<Labeling> {
    let n = g.n();
    let mut index = vec![usize::MAX; n];
    let mut frames = vec![Dihedral::default(); n];
    let mut order = vec![seed];
    index[seed] = 0;
    frames[seed] = frame;
    let mut code = Vec::with_capacity(4 * n);
    let mut tight = bound.is_some();
    let mut head = 0;
    while head < order.len() {
        let q = order[head];
        head += 1;
        let f = frames[q];
        for label in 0..4 {
            let old = f.side_preimage(label);
            let (partner, flip) = g.mate(SideRef::new(q, Side::from_index(old)));
            let p = partner.square;
            if index[p] == usize::MAX {
                index[p] = order.len();
                order.push(p);
                frames[p] = Dihedral::sending_to_north(partner.side.index(), f.reflect ^ flip);
            }
            let fp = frames[p];
            let rel_flip = flip ^ f.reflect ^ fp.reflect;
            let entry = (index[p] as u32) * 8 + (fp.side(partner.side.index()) as u32) * 2 + rel_flip as u32;
            if tight {
                let b = bound.expect("tight implies a bound")[code.len()];
                match entry.cmp(&b) {
                    Ordering::Greater => return None,
                    Ordering::Less => tight = false,
                    Ordering::Equal => {}
                }
            }
            code.push(entry);
        }
    }
    Some(Labeling { code, order, frames })
}

fn components(g: &Gluing) -> Vec<Vec<usize>> {
    let mut dsu = crate::dsu::DisjointSet::new(g.n());
    for id in g.identifications() {
        dsu.union(id.first.square, id.second.square);
    }
    dsu.groups()
}

fn best_labeling(g: &Gluing, squares: &[usize]) -> Labeling {
    let mut best: Option<Labeling> = None;
    for &q in squares {
        for d in Dihedral::ALL {
            let bound = best.as_ref().map(|b| b.code.as_slice());
            if let Some(l) = bfs_labeling(g, q, d, bound) {
                if best.as_ref().is_none_or(|b| l.code < b.code) {
                    best = Some(l);
                }
            }
        }
    }
    best.expect("every component has a square")
}

/// Canonical code together with the relabeling that realizes it.
pub fn canonical_form(g: &Gluing) -> (CanonicalCode, Gluing) {
    let mut labelings: Vec<Labeling> = components(g).iter().map(|c| best_labeling(g, c)).collect();
    labelings.sort_by(|a, b| a.code.cmp(&b.code));
    let mut code = Vec::with_capacity(4 * g.n() + labelings.len());
    let mut perm = vec![0; g.n()];
    let mut frames = vec![Dihedral::default(); g.n()];
    let mut offset = 0;
    for (i, l) in labelings.iter().enumerate() {
        if i > 0 {
            code.push(COMPONENT_SEPARATOR);
        }
        // component-local indices are shifted so the relabeled gluing stays well formed
        code.extend(l.code.iter().map(|&e| e + 8 * offset as u32));
        for (k, &q) in l.order.iter().enumerate() {
            perm[q] = offset + k;
            frames[q] = l.frames[q];
        }
        offset += l.order.len();
    }
    (CanonicalCode(code), relabel(g, &perm, &frames))
}

pub fn canonical_code(g: &Gluing) -> CanonicalCode {
    canonical_form(g).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::fixtures::*;

    #[test]
    fn dihedral_side_maps_are_consistent() {
        for d in Dihedral::ALL {
            for k in 0..4 {
                assert_eq!(d.side_preimage(d.side(k)), k);
                // side k joins corners k and k+1
                let mut img = [d.corner(k), d.corner(k + 1)];
                img.sort();
                let s = d.side(k);
                let mut expect = [s, (s + 1) % 4];
                expect.sort();
                assert_eq!(img, expect);
            }
            let k = 2;
            let t = Dihedral::sending_to_north(k, d.reflect);
            assert_eq!(t.side(k), 0);
        }
    }

    #[test]
    fn swapping_squares_keeps_the_code() {
        let g = doubly_covered_square();
        let swapped = relabel(&g, &[1, 0], &[Dihedral::default(); 2]);
        assert_eq!(canonical_code(&g), canonical_code(&swapped));
    }

    #[test]
    fn rotating_one_square_keeps_the_code() {
        let g = diagonal_fold();
        let r = relabel(&g, &[0], &[Dihedral { rot: 1, reflect: false }]);
        assert_ne!(r, g);
        assert_eq!(canonical_code(&g), canonical_code(&r));
    }

    #[test]
    fn distinct_one_square_gluings_get_distinct_codes() {
        assert_ne!(canonical_code(&diagonal_fold()), canonical_code(&torus()));
    }

    #[test]
    fn canonical_form_is_a_fixed_point() {
        let (code, form) = canonical_form(&doubly_covered_square());
        let (code2, form2) = canonical_form(&form);
        assert_eq!(code, code2);
        assert_eq!(form, form2);
    }
}
