//! Unfolded nets of a gluing drawn as SVG.
//!
//! Squares are laid on the grid by breadth-first unfolding from the lowest
//! unplaced square, always trying sides in order N, W, S, E. A square whose
//! cell is already taken waits for a later net. Glued side pairs that are not
//! drawn as shared edges carry matching seam labels.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::geodesic::across_transform;
use crate::lattice::{Placement, Point, QPoint};
use crate::rational::Q;
use crate::surface::{Gluing, Side, SideRef};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Net {
    /// Squares with their placement (local frame → net plane), in placement order.
    pub squares: Vec<(usize, Placement)>,
}

impl Net {
    fn cell(p: &Placement) -> (i64, i64) {
        let a = p.apply(Point::new(0, 0));
        let b = p.apply(Point::new(1, 1));
        (a.x.min(b.x), a.y.min(b.y))
    }
}

/// Partition of the squares into nets with tree edges (side indices) used to unfold them.
pub fn unfold_nets(g: &Gluing) -> (Vec<Net>, BTreeSet<usize>) {
    let n = g.n();
    let mut placed = vec![false; n];
    let mut tree = BTreeSet::new();
    let mut nets = Vec::new();
    while let Some(start) = placed.iter().position(|p| !p) {
        let mut cells: BTreeSet<(i64, i64)> = BTreeSet::new();
        let mut squares = vec![(start, Placement::IDENTITY)];
        placed[start] = true;
        cells.insert((0, 0));
        let mut queue = VecDeque::from([(start, Placement::IDENTITY)]);
        while let Some((q, frame)) = queue.pop_front() {
            for side in 0..4 {
                let (partner, _) = g.mate_index(4 * q + side);
                let p = partner / 4;
                if placed[p] {
                    continue;
                }
                let placement = frame.compose(&across_transform(g, 4 * q + side).inverse());
                let cell = Net::cell(&placement);
                if cells.contains(&cell) {
                    continue;
                }
                cells.insert(cell);
                placed[p] = true;
                tree.insert(4 * q + side);
                tree.insert(partner);
                squares.push((p, placement));
                queue.push_back((p, placement));
            }
        }
        nets.push(Net { squares });
    }
    (nets, tree)
}

const UNIT: i64 = 48;
const PAD: i64 = 16;

fn fmt_q(v: Q) -> String {
    let f = *v.numer() as f64 / *v.denom() as f64;
    let s = format!("{f:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// SVG drawing with one `<g>` per net, laid out left to right.
pub fn to_svg(g: &Gluing) -> String {
    let (nets, tree) = unfold_nets(g);
    let mut seam_label: BTreeMap<usize, usize> = BTreeMap::new();
    let mut next = 1;
    for id in g.identifications() {
        let (a, b) = (id.first.index(), id.second.index());
        if !tree.contains(&a) {
            seam_label.insert(a, next);
            seam_label.insert(b, next);
            next += 1;
        }
    }
    let mut body = String::new();
    let mut x_offset = PAD;
    let mut height = 0;
    for (k, net) in nets.iter().enumerate() {
        let cells: Vec<(i64, i64)> = net.squares.iter().map(|(_, p)| Net::cell(p)).collect();
        let minx = cells.iter().map(|c| c.0).min().unwrap_or(0);
        let maxx = cells.iter().map(|c| c.0).max().unwrap_or(0) + 1;
        let miny = cells.iter().map(|c| c.1).min().unwrap_or(0);
        let maxy = cells.iter().map(|c| c.1).max().unwrap_or(0) + 1;
        let to_px = |p: QPoint| -> (Q, Q) {
            let u = Q::from_integer(UNIT);
            ((p.x - Q::from_integer(minx)) * u, (Q::from_integer(maxy) - p.y) * u)
        };
        let _ = writeln!(body, r#"  <g id="net-{k}" transform="translate({x_offset},{PAD})">"#);
        for ((q, placement), (cx, cy)) in net.squares.iter().zip(&cells) {
            let x = (cx - minx) * UNIT;
            let y = (maxy - cy - 1) * UNIT;
            let _ = writeln!(
                body,
                r##"    <rect x="{x}" y="{y}" width="{UNIT}" height="{UNIT}" fill="#f4f1e8" stroke="#333" stroke-width="1"/>"##
            );
            let _ = writeln!(
                body,
                r#"    <text x="{}" y="{}" font-size="14" text-anchor="middle" dominant-baseline="middle">{q}</text>"#,
                x + UNIT / 2,
                y + UNIT / 2
            );
            for side in Side::ALL {
                let idx = SideRef::new(*q, side).index();
                let Some(label) = seam_label.get(&idx) else {
                    continue;
                };
                let t = Point::from_array(side.tail().position()).to_rational();
                let h = Point::from_array(side.head().position()).to_rational();
                let half = Q::new(1, 2);
                let mid = (t + h).scale(half);
                let center = QPoint::new(half, half);
                // pull the label inside its square
                let spot = mid + (center - mid).scale(Q::new(2, 5));
                let (px, py) = to_px(placement.apply_q(spot));
                let _ = writeln!(
                    body,
                    r##"    <text x="{}" y="{}" font-size="10" fill="#a33" text-anchor="middle" dominant-baseline="middle">{label}</text>"##,
                    fmt_q(px),
                    fmt_q(py)
                );
            }
        }
        body.push_str("  </g>\n");
        x_offset += (maxx - minx) * UNIT + PAD;
        height = height.max((maxy - miny) * UNIT);
    }
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n{body}</svg>\n",
        x_offset,
        height + 2 * PAD
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::fixtures::*;

    #[test]
    fn doubly_covered_square_unfolds_to_a_domino() {
        let (nets, tree) = unfold_nets(&doubly_covered_square());
        assert_eq!(nets.len(), 1);
        assert_eq!(tree.len(), 2);
        let svg = to_svg(&doubly_covered_square());
        assert_eq!(svg.matches("<g id=").count(), 1);
        assert_eq!(svg.matches("<rect").count(), 2);
        // three seams, each labeled on both of its sides
        assert_eq!(svg.matches("fill=\"#a33\"").count(), 6);
    }

    #[test]
    fn every_square_is_drawn_once() {
        let g = crate::octagon::octagon_to_gluing(&crate::octagon::OctagonParams::from_cuts(3, 2, 1, 0, 1, 1).unwrap()).unwrap();
        let (nets, _) = unfold_nets(&g);
        let mut seen: Vec<usize> = nets.iter().flat_map(|n| n.squares.iter().map(|s| s.0)).collect();
        seen.sort();
        assert_eq!(seen, (0..g.n()).collect::<Vec<_>>());
    }
}
