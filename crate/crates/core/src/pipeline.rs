//! End-to-end runs behind the `gluings` command.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::{canonical_code, CanonicalCode};
use crate::classify::{self, ClassifyError};
use crate::enumerate::{self, Budget, EnumerateError, EnumerationOptions, EnumerationTask};
use crate::geodesic::{self, GeodesicError};
use crate::net;
use crate::octagon;
use crate::oracle;
use crate::surface::{self, Gluing};
use crate::trace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// JSONL of all valid gluings with 1..=n squares.
    Enumerate,
    /// JSONL of isomorphism classes of the input gluings (or of L(n)).
    Classify,
    /// Distance matrix JSON for one gluing.
    Distances,
    /// CSV of doubly covered octagon counts for budgets 1..=n.
    DcCount,
    /// JSONL of doubly covered octagon parameter tuples.
    DcEnumerate,
    /// Oracle comparison report.
    Verify,
    /// SVG nets of one gluing.
    ExportSvg,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub n: usize,
    pub mode: Mode,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub jobs: usize,
    pub node_budget: Option<u64>,
    pub oracle_k: usize,
    pub dedupe_congruence: bool,
    pub seed: u64,
    pub checkpoint: Option<PathBuf>,
    pub traces: bool,
}

impl PipelineConfig {
    pub fn new(mode: Mode, n: usize) -> Self {
        Self {
            n,
            mode,
            input: None,
            output: None,
            jobs: 1,
            node_budget: None,
            oracle_k: 32,
            dedupe_congruence: false,
            seed: 0,
            checkpoint: None,
            traces: false,
        }
    }

    pub fn check(&self) -> Result<(), PipelineError> {
        if self.n == 0 {
            return Err(PipelineError::Usage("--n must be at least 1".into()));
        }
        if self.jobs == 0 {
            return Err(PipelineError::Usage("--jobs must be at least 1".into()));
        }
        if self.oracle_k < 4 || !self.oracle_k.is_power_of_two() {
            return Err(PipelineError::Usage("--oracle-k must be a power of two, at least 4".into()));
        }
        if matches!(self.mode, Mode::Distances | Mode::ExportSvg) && self.input.is_none() {
            return Err(PipelineError::Usage("this mode reads a gluing from --in".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Usage(_) => 2,
            PipelineError::Validation(_) => 3,
            PipelineError::Budget(_) => 4,
            PipelineError::Internal(_) => 5,
        }
    }
}

impl From<EnumerateError> for PipelineError {
    fn from(e: EnumerateError) -> Self {
        match e {
            EnumerateError::BudgetExceeded(_) => PipelineError::Budget(e.to_string()),
            EnumerateError::ZeroSquares => PipelineError::Usage(e.to_string()),
            EnumerateError::InconsistentPrefix => PipelineError::Internal(e.to_string()),
        }
    }
}

impl From<GeodesicError> for PipelineError {
    fn from(e: GeodesicError) -> Self {
        match e {
            GeodesicError::InvalidGluing(_) | GeodesicError::NoSuchConePoint { .. } => PipelineError::Validation(e.to_string()),
            GeodesicError::BudgetExceeded(_) => PipelineError::Budget(e.to_string()),
            GeodesicError::SymmetryViolation { .. } => PipelineError::Internal(e.to_string()),
        }
    }
}

impl From<ClassifyError> for PipelineError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Geodesic(g) => g.into(),
            ClassifyError::Degenerate(..) => PipelineError::Internal(e.to_string()),
        }
    }
}

/// Artifact text plus the number of failed checks it reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineOutput {
    pub text: String,
    pub failures: usize,
}

fn io_usage(path: &Path, e: std::io::Error) -> PipelineError {
    PipelineError::Usage(format!("{}: {e}", path.display()))
}

/// Gluings from a JSONL file, one per nonblank line.
pub fn read_gluings(path: &Path) -> Result<Vec<Gluing>, PipelineError> {
    let text = fs::read_to_string(path).map_err(|e| io_usage(path, e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| Gluing::from_json_line(l).map_err(|e| PipelineError::Validation(format!("line {}: {e}", i + 1))))
        .collect()
}

fn read_one_gluing(path: &Path) -> Result<Gluing, PipelineError> {
    read_gluings(path)?
        .into_iter()
        .next()
        .ok_or_else(|| PipelineError::Validation(format!("{}: no gluing found", path.display())))
}

fn require_valid(g: &Gluing) -> Result<(), PipelineError> {
    surface::cone_points(g).map(|_| ()).map_err(|e| PipelineError::Validation(e.to_string()))
}

/// Runs one mode and returns its artifact. Nothing is written to `output`;
/// see [`run_to_output`].
pub fn run(config: &PipelineConfig) -> Result<PipelineOutput, PipelineError> {
    config.check()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| PipelineError::Internal(e.to_string()))?;
    pool.install(|| match config.mode {
        Mode::Enumerate => enumerate_mode(config).map(ok),
        Mode::Classify => classify_mode(config).map(ok),
        Mode::Distances => distances_mode(config).map(ok),
        Mode::DcCount => Ok(ok(dc_count_mode(config))),
        Mode::DcEnumerate => Ok(ok(dc_enumerate_mode(config))),
        Mode::Verify => verify_mode(config),
        Mode::ExportSvg => {
            let g = read_one_gluing(config.input.as_deref().expect("checked"))?;
            Ok(ok(net::to_svg(&g)))
        }
    })
}

/// [`run`], then writes the artifact to the configured output path (if any).
pub fn run_to_output(config: &PipelineConfig) -> Result<PipelineOutput, PipelineError> {
    let out = run(config)?;
    if let Some(path) = &config.output {
        fs::write(path, &out.text).map_err(|e| io_usage(path, e))?;
    }
    Ok(out)
}

fn ok(text: String) -> PipelineOutput {
    PipelineOutput { text, failures: 0 }
}

/// Resumable state of an enumeration run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: usize,
    pub tasks: Vec<EnumerationTask>,
    pub done: Vec<bool>,
    pub found: Vec<Gluing>,
}

impl Checkpoint {
    pub fn fresh(n: usize, jobs: usize) -> Self {
        let opts = EnumerationOptions::default();
        let tasks: Vec<EnumerationTask> = (1..=n)
            .flat_map(|m| enumerate::split_task(&EnumerationTask::root(m), 4 * jobs, opts))
            .collect();
        let done = vec![false; tasks.len()];
        Self { n, tasks, done, found: Vec::new() }
    }

    pub fn load(path: &Path) -> Result<Option<Self>, PipelineError> {
        if !path.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(path).map_err(|e| io_usage(path, e))?;
        serde_json::from_str(&text)
            .map(Some)
            .map_err(|e| PipelineError::Validation(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<(), PipelineError> {
        let tmp = path.with_extension("tmp");
        let text = serde_json::to_string(self).expect("checkpoint serialization cannot fail");
        fs::write(&tmp, text).map_err(|e| io_usage(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| io_usage(path, e))
    }

    /// Replaces the listed unfinished tasks by their subtasks.
    fn refine(&mut self, unfinished: &[usize], opts: EnumerationOptions) {
        let mut tasks = Vec::with_capacity(self.tasks.len());
        let mut done = Vec::with_capacity(self.done.len());
        for (i, t) in self.tasks.iter().enumerate() {
            if unfinished.contains(&i) {
                let pieces = enumerate::split_task(t, 4, opts);
                done.resize(done.len() + pieces.len(), false);
                tasks.extend(pieces);
            } else {
                tasks.push(t.clone());
                done.push(self.done[i]);
            }
        }
        self.tasks = tasks;
        self.done = done;
    }

    pub fn is_complete(&self) -> bool {
        self.done.iter().all(|&d| d)
    }
}

/// L(n): every valid gluing with at most `n` squares, as JSONL sorted by size
/// then canonical code.
fn enumerate_mode(config: &PipelineConfig) -> Result<String, PipelineError> {
    let mut state = match &config.checkpoint {
        Some(path) => Checkpoint::load(path)?.unwrap_or_else(|| Checkpoint::fresh(config.n, config.jobs)),
        None => Checkpoint::fresh(config.n, config.jobs),
    };
    if state.n != config.n {
        return Err(PipelineError::Usage(format!("checkpoint is for n = {}, not {}", state.n, config.n)));
    }
    let opts = EnumerationOptions::default();
    let budget = Budget::new(config.node_budget);
    let pending: Vec<usize> = (0..state.tasks.len()).filter(|&i| !state.done[i]).collect();
    let mut exhausted = None;
    for batch in pending.chunks(config.jobs) {
        let tasks: Vec<EnumerationTask> = batch.iter().map(|&i| state.tasks[i].clone()).collect();
        let results = enumerate::run_tasks(&tasks, opts, &budget);
        let mut unfinished = Vec::new();
        for (&i, r) in batch.iter().zip(results) {
            match r {
                Ok(outcome) => {
                    state.done[i] = true;
                    state.found.extend(outcome.emitted.into_values());
                }
                Err(e) => {
                    unfinished.push(i);
                    exhausted = Some(e);
                }
            }
        }
        if exhausted.is_some() {
            // a task larger than the budget would never finish, so resume from finer pieces
            state.refine(&unfinished, opts);
            if let Some(path) = &config.checkpoint {
                state.save(path)?;
            }
            break;
        }
        if let Some(path) = &config.checkpoint {
            state.save(path)?;
        }
    }
    if let Some(e) = exhausted {
        return Err(e.into());
    }
    let mut all: BTreeMap<(usize, CanonicalCode), Gluing> = BTreeMap::new();
    for g in state.found {
        all.entry((g.n(), canonical_code(&g))).or_insert(g);
    }
    let mut text = String::new();
    for g in all.values() {
        text.push_str(&g.to_json_line());
        text.push('\n');
    }
    Ok(text)
}

fn classify_mode(config: &PipelineConfig) -> Result<String, PipelineError> {
    let gluings = match &config.input {
        Some(path) => read_gluings(path)?,
        None => enumerate::enumerate_up_to(config.n)?,
    };
    for g in &gluings {
        require_valid(g)?;
    }
    let classes = classify::classify(gluings)?;
    let mut text = String::new();
    for c in classes {
        text.push_str(&c.to_json_line());
        text.push('\n');
    }
    Ok(text)
}

fn distances_mode(config: &PipelineConfig) -> Result<String, PipelineError> {
    let g = read_one_gluing(config.input.as_deref().expect("checked"))?;
    require_valid(&g)?;
    let (m, traces) = geodesic::distance_matrix_with_traces(&g)?;
    let mut text = m.to_json();
    text.push('\n');
    if config.traces {
        for t in traces {
            text.push_str(&t.to_json().to_string());
            text.push('\n');
        }
    }
    Ok(text)
}

fn dc_count_mode(config: &PipelineConfig) -> String {
    let n = config.n as u64;
    let mut text = String::from("n,count\n");
    if config.dedupe_congruence {
        for m in 1..=n {
            let _ = writeln!(text, "{m},{}", octagon::enumerate_congruence_classes(m).len());
        }
    } else {
        for (m, c) in octagon::count_table(n) {
            let _ = writeln!(text, "{m},{c}");
        }
    }
    text
}

fn dc_enumerate_mode(config: &PipelineConfig) -> String {
    let n = config.n as u64;
    let tuples: Vec<octagon::OctagonParams> = if config.dedupe_congruence {
        octagon::enumerate_congruence_classes(n)
    } else {
        octagon::enumerate_dc_octagons(n).collect()
    };
    let mut text = String::new();
    for p in tuples {
        text.push_str(&p.to_json_line());
        text.push('\n');
    }
    text
}

/// Relative disagreement allowed between exact distances and the
/// subdivided-graph oracle.
pub const ORACLE_TOLERANCE: f64 = 0.02;

fn verify_mode(config: &PipelineConfig) -> Result<PipelineOutput, PipelineError> {
    let mut text = String::new();
    let mut failures = 0;
    let mut line = |ok: bool, what: String| {
        if !ok {
            failures += 1;
        }
        let _ = writeln!(text, "{} {what}", if ok { "PASS" } else { "FAIL" });
    };
    for m in 1..=config.n {
        let gluings = enumerate::enumerate_gluings(m)?;
        if m <= 3 {
            let fast: std::collections::BTreeSet<CanonicalCode> = gluings.iter().map(canonical_code).collect();
            let slow = oracle::brute_force_codes(m);
            line(fast == slow, format!("n={m} enumeration: {} gluings, oracle {}", fast.len(), slow.len()));
        }
        let mut worst: f64 = 0.0;
        let mut bound_violations = 0;
        for g in &gluings {
            let (matrix, traces) = geodesic::distance_matrix_with_traces(g)?;
            let approx = oracle::subdivided_distances(g, config.oracle_k).map_err(|e| PipelineError::Validation(e.to_string()))?;
            for i in 0..matrix.len() {
                for j in 0..matrix.len() {
                    if i != j {
                        let exact = (matrix.get(i, j) as f64).sqrt();
                        worst = worst.max((approx[i][j] - exact).abs() / exact);
                    }
                }
            }
            bound_violations += traces.iter().filter(|t| crossing_bound_violation(t).is_some()).count();
        }
        line(
            worst <= ORACLE_TOLERANCE,
            format!("n={m} distances vs oracle k={}: max relative error {worst:.5}", config.oracle_k),
        );
        line(bound_violations == 0, format!("n={m} crossing bounds: {bound_violations} violations"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let sample_n = config.n + 1;
    let mut sampled = 0;
    let mut violations = 0;
    for _ in 0..8 {
        if let Some(g) = enumerate::sample_gluing(sample_n, &mut rng) {
            let (_, traces) = geodesic::distance_matrix_with_traces(&g)?;
            violations += traces.iter().filter(|t| crossing_bound_violation(t).is_some()).count();
            sampled += 1;
        }
    }
    line(
        violations == 0,
        format!("n={sample_n} sampled crossing bounds (seed {}, {sampled} gluings): {violations} violations", config.seed),
    );
    let _ = writeln!(text, "mismatches: {failures}");
    Ok(PipelineOutput { text, failures })
}

/// Square exceeding the per-square crossing limits (≤ 4 type 1, ≤ 1 type 2,
/// ≤ 5 total), or a malformed trace.
pub fn crossing_bound_violation(t: &trace::GeodesicTrace) -> Option<String> {
    match trace::classify_crossing_types(t) {
        Err(e) => Some(e.to_string()),
        Ok(counts) => counts
            .into_iter()
            .find(|(_, c)| c.type1 > 4 || c.type2 > 1 || c.total() > 5)
            .map(|(q, c)| format!("square {q}: {} type-1, {} type-2", c.type1, c.type2)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_checks() {
        let mut c = PipelineConfig::new(Mode::Enumerate, 1);
        assert!(c.check().is_ok());
        c.oracle_k = 24;
        assert_eq!(c.check().unwrap_err().exit_code(), 2);
        let d = PipelineConfig::new(Mode::Distances, 1);
        assert_eq!(d.check().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn enumerate_one_square() {
        let out = run(&PipelineConfig::new(Mode::Enumerate, 1)).unwrap();
        assert!(out.text.lines().count() >= 1);
        for l in out.text.lines() {
            assert!(surface::validate(&Gluing::from_json_line(l).unwrap()).valid);
        }
    }

    #[test]
    fn dc_count_is_csv() {
        let out = run(&PipelineConfig::new(Mode::DcCount, 4)).unwrap();
        let lines: Vec<&str> = out.text.lines().collect();
        assert_eq!(lines[0], "n,count");
        assert_eq!(lines.len(), 5);
    }
}
