use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use square_gluings::pipeline::{self, Mode, PipelineConfig};

#[derive(Parser, Debug)]
#[command(name = "gluings", version, about = "Enumerate and classify gluings of unit squares into convex polyhedra")]
struct Args {
    /// Square budget.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Search node budget for enumeration.
    #[arg(long)]
    node_budget: Option<u64>,
    /// Subdivision factor of the distance oracle.
    #[arg(long, default_value_t = 32)]
    oracle_k: usize,
    /// Count octagons up to congruence instead of raw parameter tuples.
    #[arg(long)]
    dedupe_congruence: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumeration checkpoint file, created or resumed.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Also dump shortest-path traces in distances mode.
    #[arg(long)]
    traces: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let config = PipelineConfig {
        n: args.n,
        mode: args.mode,
        input: args.input,
        output: args.out,
        jobs: args.jobs,
        node_budget: args.node_budget,
        oracle_k: args.oracle_k,
        dedupe_congruence: args.dedupe_congruence,
        seed: args.seed,
        checkpoint: args.checkpoint,
        traces: args.traces,
    };
    match pipeline::run_to_output(&config) {
        Ok(out) => {
            if config.output.is_none() {
                let _ = std::io::stdout().write_all(out.text.as_bytes());
            }
            if out.failures > 0 {
                eprintln!("{} check(s) failed", out.failures);
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("gluings: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
