//! Runs the built-in self-check (oracle comparisons and crossing bounds) for
//! a chosen size.
//!
//!     cargo run --release --example verify -- 5

use square_gluings::pipeline::{run, Mode, PipelineConfig};

fn main() {
    let n: usize = std::env::args().nth(1).map_or(4, |s| s.parse().expect("n must be a positive integer"));
    let mut config = PipelineConfig::new(Mode::Verify, n);
    config.seed = 7;
    let out = run(&config).unwrap();
    print!("{}", out.text);
    std::process::exit(if out.failures == 0 { 0 } else { 1 });
}
