//! Doubly covered octagons cut from lattice rectangles: counts, the cubic
//! lower-bound family and a realized gluing.

use square_gluings::octagon::{self, OctagonParams};
use square_gluings::surface::validate;

fn main() {
    println!("n, tuples, congruence classes");
    for e in 2..=8 {
        let n = 1u64 << e;
        println!("{n}, {}, {}", octagon::count_dc_octagons(n), octagon::enumerate_congruence_classes(n).len());
    }
    for e in [10, 12, 14, 16] {
        let n = 1u64 << e;
        println!("{n}, {}, family {}", octagon::count_dc_octagons(n), octagon::lower_bound_family(n).count());
    }

    let p = OctagonParams::from_cuts(3, 2, 1, 0, 1, 1).unwrap();
    let g = octagon::octagon_to_gluing(&p).unwrap();
    println!("{} -> {} squares, valid = {}", p.to_json_line(), g.n(), validate(&g).valid);
    println!("{}", g.to_json_line());
}
