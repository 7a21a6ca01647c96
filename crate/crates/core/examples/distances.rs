//! Exact squared geodesic distances between the cone points of a few small
//! surfaces.

use square_gluings::geodesic::distance_matrix;
use square_gluings::surface::{fixtures, Gluing};

fn show(name: &str, g: &Gluing) {
    let m = distance_matrix(g).expect("fixture is a convex sphere");
    println!("{name} ({} squares), curvature {:?}", g.n(), m.curvature_quarters);
    for row in &m.entries {
        let cells: Vec<String> = row.iter().map(|d| format!("{d:>3}")).collect();
        println!("  {}", cells.join(" "));
    }
}

fn main() {
    show("diagonal fold", &fixtures::diagonal_fold());
    show("doubly covered square", &fixtures::doubly_covered_square());
    let (a, _) = fixtures::parallelogram_cuttings();
    show("doubly covered parallelogram", &a);
    if let Some(line) = std::env::args().nth(1) {
        let g = Gluing::from_json_line(&line).expect("argument must be a gluing JSON line");
        show("argument", &g);
    }
}
