//! Writes unfolded nets of the two parallelogram cuttings as SVG files.
//!
//!     cargo run --example svg_nets -- /tmp/nets

use std::path::PathBuf;

use square_gluings::classify::isomorphic;
use square_gluings::net::to_svg;
use square_gluings::surface::fixtures;

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    std::fs::create_dir_all(&dir).unwrap();
    let (a, b) = fixtures::parallelogram_cuttings();
    for (name, g) in [("cutting-a.svg", &a), ("cutting-b.svg", &b)] {
        let path = dir.join(name);
        std::fs::write(&path, to_svg(g)).unwrap();
        println!("wrote {}", path.display());
    }
    println!("isomorphic: {}", isomorphic(&a, &b).unwrap());
}
