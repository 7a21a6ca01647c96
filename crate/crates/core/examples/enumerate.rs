//! Lists every valid gluing of up to `n` squares (default 5) with its
//! curvature profile.
//!
//!     cargo run --release --example enumerate -- 6

use square_gluings::enumerate::enumerate_gluings;
use square_gluings::surface::cone_points;

fn main() {
    let n: usize = std::env::args().nth(1).map_or(5, |s| s.parse().expect("n must be a positive integer"));
    let mut total = 0;
    for m in 1..=n {
        let gluings = enumerate_gluings(m).expect("n must be positive");
        println!("n = {m}: {} gluings", gluings.len());
        for g in &gluings {
            let mut profile: Vec<i32> = cone_points(g).unwrap().iter().map(|c| c.curvature_quarters).collect();
            profile.sort();
            println!("  {profile:?}  {}", g.to_json_line());
        }
        total += gluings.len();
    }
    println!("L({n}) = {total}");
}
