//! Shortest paths of one surface with the segment type of each square
//! crossing.

use square_gluings::geodesic::distance_matrix_with_traces;
use square_gluings::surface::{fixtures, Gluing};
use square_gluings::trace::classify_crossing_types;

fn main() {
    let g = match std::env::args().nth(1) {
        Some(line) => Gluing::from_json_line(&line).expect("argument must be a gluing JSON line"),
        None => fixtures::parallelogram_cuttings().0,
    };
    let (_, traces) = distance_matrix_with_traces(&g).unwrap();
    for t in traces.iter().filter(|t| t.source < t.target) {
        println!("{} -> {}: squared length {}", t.source, t.target, t.squared_length);
        for c in &t.crossings {
            println!("  square {} type {}", c.square, c.segment_type);
        }
        for (sq, counts) in classify_crossing_types(t).unwrap() {
            if counts.total() > 1 {
                println!("  square {sq} crossed {} times", counts.total());
            }
        }
    }
}
