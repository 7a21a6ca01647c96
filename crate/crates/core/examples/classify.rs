//! Groups L(n) into isomorphism classes and prints the classes that more than
//! one gluing falls into.
//!
//!     cargo run --release --example classify -- 5

use square_gluings::classify::classify;
use square_gluings::enumerate::enumerate_up_to;

fn main() {
    let n: usize = std::env::args().nth(1).map_or(4, |s| s.parse().expect("n must be a positive integer"));
    let gluings = enumerate_up_to(n).unwrap();
    let count = gluings.len();
    let classes = classify(gluings).unwrap();
    println!("L({n}): {count} gluings, {} polyhedra up to similarity", classes.len());
    for c in classes.iter().filter(|c| c.multiplicity > 1) {
        println!("x{} profile {:?}", c.multiplicity, c.matrix.curvature_profile);
        println!("  {}", c.representative.to_json_line());
    }
}
