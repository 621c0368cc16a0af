//! Command-line front end: `analyze`, `sweep`, `classify` and `replay`.
//!
//! Every command that writes files also writes `manifest.json` next to them.
//! The manifest records the normalized configuration and a SHA-256 digest of
//! each output, and `replay` re-runs the command from it and checks that the
//! outputs come back byte-for-byte.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::detector::{detect, sample_covariance, DetectionReport};
use crate::error::{Error, Result};
use crate::filters::{classify_lowpass, FilterSetting, FrequencyResponse, LowpassVerdict};
use crate::graph::GsoKind;
use crate::io::manifest::{sha256_hex, RunManifest};
use crate::io::report::{profile_csv, sweep_csv};
use crate::io::svg::LineChart;
use crate::io::{load_edge_list, parse_signal_csv, DatasetOptions};
use crate::simulate::{run_sweep, run_sweep_with_threads, SweepAxis, SweepResult, SweepSpec, TrialConfig, DEFAULT_TRIALS};
use crate::spectral::order_spectrum;

/// Default output directory when `--out` is not given.
pub const OUT_DIR_ENV: &str = "GSP_LOWPASS_OUT";

#[derive(Debug, Parser)]
#[command(name = "gsp-lowpass", version, about = "Blind detection of first-order lowpass graph filters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score every covariance eigenvector of a signal matrix and decide.
    Analyze(AnalyzeArgs),
    /// Run a Monte-Carlo sweep described by a JSON config.
    Sweep(SweepArgs),
    /// Ground-truth lowpass classification of a response on a given graph.
    Classify(ClassifyArgs),
    /// Re-run a command from its manifest and compare outputs byte-for-byte.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct OutDir {
    /// Output directory, created if missing.
    #[arg(long, env = OUT_DIR_ENV, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// CSV signal matrix, one row per node.
    pub input: PathBuf,
    /// Use the raw second moment instead of removing per-node means.
    #[arg(long)]
    pub no_center: bool,
    /// Standardize every node's series before analysis.
    #[arg(long)]
    pub standardize: bool,
    /// The file has one sample per row.
    #[arg(long)]
    pub transpose: bool,
    /// Store only the first K per-mode entries in the report.
    #[arg(long, value_name = "K")]
    pub keep_scores: Option<usize>,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// JSON sweep configuration.
    pub config: PathBuf,
    /// Worker threads; defaults to all cores. Does not affect results.
    #[arg(long)]
    pub threads: Option<usize>,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Edge-list CSV (`i,j[,w]`, 0-based).
    #[arg(long)]
    pub graph: PathBuf,
    /// Frequency response: a JSON file, or inline JSON `{"form":..,"params":..}`.
    #[arg(long)]
    pub response: String,
    /// Cutoff index K (1-based).
    #[arg(long)]
    pub cutoff: usize,
    /// Shift operator for responses not tied to one (polynomials).
    #[arg(long, value_parser = parse_gso)]
    pub gso: Option<GsoKind>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// Manifest written by a previous run.
    pub manifest: PathBuf,
    #[command(flatten)]
    pub out: OutDir,
}

fn parse_gso(s: &str) -> std::result::Result<GsoKind, String> {
    match s.to_ascii_lowercase().as_str() {
        "laplacian" | "l" => Ok(GsoKind::Laplacian),
        "adjacency" | "a" => Ok(GsoKind::Adjacency),
        _ => Err(format!("expected laplacian or adjacency, got {s:?}")),
    }
}

/// What a command produced, for the binary to print.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub warnings: Vec<String>,
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Analyze(a) => {
            let cfg = AnalyzeConfig::from_args(&a)?;
            let m = analyze(&cfg, &a.out.out)?;
            Ok(summary(&m))
        }
        Command::Sweep(a) => {
            let text = std::fs::read_to_string(&a.config)?;
            let value: Value = serde_json::from_str(&text)?;
            let (cfg, warnings) = parse_sweep_config(&value)?;
            let m = sweep(&cfg, warnings, a.threads, &a.out.out)?;
            Ok(summary(&m))
        }
        Command::Classify(a) => {
            let response = read_response(&a.response)?;
            let (verdict, warnings) = classify(&a.graph, &response, a.cutoff, a.gso)?;
            Ok(Outcome { stdout: serde_json::to_string_pretty(&verdict)? + "\n", warnings })
        }
        Command::Replay(a) => {
            let files = replay(&a.manifest, &a.out.out)?;
            Ok(Outcome { stdout: format!("replay reproduced {} file(s) byte-for-byte\n", files), warnings: Vec::new() })
        }
    }
}

fn summary(m: &RunManifest) -> Outcome {
    let stdout = m.outputs.iter().map(|f| format!("{}  {}\n", f.sha256, f.file)).collect();
    Outcome { stdout, warnings: m.warnings.clone() }
}

// ---------------------------------------------------------------- analyze

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeConfig {
    pub input: PathBuf,
    pub input_sha256: String,
    pub options: DatasetOptions,
    pub keep_scores: Option<usize>,
}

impl AnalyzeConfig {
    fn from_args(a: &AnalyzeArgs) -> Result<Self> {
        let input = std::fs::canonicalize(&a.input)?;
        Ok(Self {
            input_sha256: sha256_hex(&std::fs::read(&input)?),
            input,
            options: DatasetOptions { center: !a.no_center, standardize_rows: a.standardize, transpose: a.transpose },
            keep_scores: a.keep_scores,
        })
    }
}

/// Detection report for the signal matrix stored in `text`.
pub fn analyze_text(text: &str, opts: &DatasetOptions) -> Result<DetectionReport> {
    let y = parse_signal_csv(text, opts)?;
    detect(&sample_covariance(&y, opts.center))
}

/// Writes `report.json`, `profile.csv`, `profile.svg` and the manifest.
pub fn analyze(cfg: &AnalyzeConfig, out: &Path) -> Result<RunManifest> {
    let bytes = std::fs::read(&cfg.input)?;
    if sha256_hex(&bytes) != cfg.input_sha256 {
        return Err(Error::invalid(format!("{} changed since the run was recorded", cfg.input.display())));
    }
    let text = String::from_utf8(bytes).map_err(|_| Error::Parse { line: 1, message: "input is not UTF-8".into() })?;
    let mut report = analyze_text(&text, &cfg.options)?;
    if let Some(k) = cfg.keep_scores {
        report.truncate_scores(k);
    }

    let mut manifest = RunManifest::new("analyze", serde_json::to_value(cfg)?, None);
    if report.top_gap == 0.0 {
        manifest.warnings.push("top covariance eigenvalue is degenerate; the top eigenvector is not unique".into());
    }
    if report.ambiguous {
        manifest.warnings.push(format!(
            "more than one close-to-positive eigenvector: modes {:?}",
            report.near_positive
        ));
    }

    std::fs::create_dir_all(out)?;
    manifest.emit(out, "report.json", (serde_json::to_string_pretty(&report)? + "\n").as_bytes())?;
    manifest.emit(out, "profile.csv", profile_csv(&report).as_bytes())?;
    manifest.emit(out, "profile.svg", profile_chart(&report).to_svg().as_bytes())?;
    manifest.write(out)?;
    Ok(manifest)
}

fn profile_chart(report: &DetectionReport) -> LineChart {
    let idx = |v: &[f64]| v.iter().enumerate().map(|(i, &s)| ((i + 1) as f64, s)).collect();
    let mut chart = LineChart::new("Eigenvector scores", "eigenvalue index i (descending)", "score");
    chart.push("l2 score", idx(&report.scores), 0, false);
    chart.push("linf score", idx(&report.scores_inf), 1, true);
    chart
}

// ---------------------------------------------------------------- sweep

/// Normalized sweep configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    pub grid: Vec<f64>,
    pub settings: Vec<FilterSetting>,
    pub n: usize,
    pub m: usize,
    pub sigma2: f64,
    pub trials: usize,
    pub seed: u64,
    pub fixed_graph: bool,
}

impl SweepConfig {
    pub fn spec(&self, setting: FilterSetting) -> SweepSpec {
        let mut base = TrialConfig::new(setting, self.n, self.m, self.sigma2, self.seed).with_trials(self.trials);
        base.fixed_graph = self.fixed_graph;
        SweepSpec { axis: self.axis, grid: self.grid.clone(), base }
    }
}

const SWEEP_KEYS: [&str; 10] = ["axis", "grid", "setting", "settings", "n", "m", "sigma2", "trials", "seed", "fixed_graph"];

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema { pointer: pointer.into(), message: message.into() }
}

fn field_uint(obj: &Map<String, Value>, key: &str, default: u64, min: u64) -> Result<u64> {
    match obj.get(key) {
        None => Ok(default),
        Some(v) => {
            let x = v.as_u64().ok_or_else(|| schema(format!("/{key}"), "expected a non-negative integer"))?;
            if x < min {
                return Err(schema(format!("/{key}"), format!("must be >= {min}")));
            }
            Ok(x)
        }
    }
}

fn parse_setting(v: &Value, pointer: &str) -> Result<FilterSetting> {
    let s = v.as_str().ok_or_else(|| schema(pointer, "expected a setting name"))?;
    s.parse().map_err(|_| {
        let names: Vec<_> = FilterSetting::ALL.iter().map(|f| f.name()).collect();
        schema(pointer, format!("unknown setting {s:?}; expected one of {}", names.join(", ")))
    })
}

/// Validates a sweep config, filling defaults. Returns the normalized config
/// and any warnings.
///
/// Keys: `axis` (`"n"`, `"m"` or `"sigma2"`), `grid` (non-empty array),
/// `setting` or `settings` (default: all four), `n` (100), `m` (1000),
/// `sigma2` (0.01), `trials` (200), `seed` (0), `fixed_graph` (false).
pub fn parse_sweep_config(value: &Value) -> Result<(SweepConfig, Vec<String>)> {
    let obj = value.as_object().ok_or_else(|| schema("", "expected a JSON object"))?;
    if let Some(k) = obj.keys().find(|k| !SWEEP_KEYS.contains(&k.as_str())) {
        return Err(schema(format!("/{k}"), "unknown key"));
    }

    let axis: SweepAxis = match obj.get("axis") {
        None => return Err(schema("/axis", "required")),
        Some(v) => serde_json::from_value(v.clone()).map_err(|_| schema("/axis", "expected \"n\", \"m\" or \"sigma2\""))?,
    };

    let grid_v = obj.get("grid").ok_or_else(|| schema("/grid", "required"))?;
    let grid_a = grid_v.as_array().ok_or_else(|| schema("/grid", "expected an array"))?;
    if grid_a.is_empty() {
        return Err(schema("/grid", "grid must not be empty"));
    }
    let grid = grid_a
        .iter()
        .enumerate()
        .map(|(i, v)| v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| schema(format!("/grid/{i}"), "expected a number")))
        .collect::<Result<Vec<f64>>>()?;

    let settings = match (obj.get("setting"), obj.get("settings")) {
        (Some(_), Some(_)) => return Err(schema("/settings", "give either setting or settings, not both")),
        (Some(v), None) => vec![parse_setting(v, "/setting")?],
        (None, Some(v)) => {
            let a = v.as_array().ok_or_else(|| schema("/settings", "expected an array"))?;
            if a.is_empty() {
                return Err(schema("/settings", "settings must not be empty"));
            }
            let list = a
                .iter()
                .enumerate()
                .map(|(i, s)| parse_setting(s, &format!("/settings/{i}")))
                .collect::<Result<Vec<_>>>()?;
            for (i, s) in list.iter().enumerate() {
                if list[..i].contains(s) {
                    return Err(schema(format!("/settings/{i}"), "duplicate setting"));
                }
            }
            list
        }
        (None, None) => FilterSetting::ALL.to_vec(),
    };

    let sigma2 = match obj.get("sigma2") {
        None => 0.01,
        Some(v) => v
            .as_f64()
            .filter(|x| x.is_finite() && *x >= 0.0)
            .ok_or_else(|| schema("/sigma2", "expected a finite number >= 0"))?,
    };
    let fixed_graph = match obj.get("fixed_graph") {
        None => false,
        Some(v) => v.as_bool().ok_or_else(|| schema("/fixed_graph", "expected a boolean"))?,
    };

    let cfg = SweepConfig {
        axis,
        grid,
        settings,
        n: field_uint(obj, "n", 100, 2)? as usize,
        m: field_uint(obj, "m", 1000, 1)? as usize,
        sigma2,
        trials: field_uint(obj, "trials", DEFAULT_TRIALS as u64, 1)? as usize,
        seed: field_uint(obj, "seed", 0, 0)?,
        fixed_graph,
    };
    let base = cfg.spec(cfg.settings[0]).base;
    for (i, &v) in cfg.grid.iter().enumerate() {
        cfg.axis
            .apply(&base, v)
            .map_err(|e| schema(format!("/grid/{i}"), e.to_string()))?;
    }

    let mut warnings = Vec::new();
    if cfg.trials == 1 {
        warnings.push("high variance: trials = 1, averages are single draws".to_owned());
    }
    Ok((cfg, warnings))
}

/// Runs every setting of `cfg` over the grid.
pub fn run_sweep_config(cfg: &SweepConfig, threads: Option<usize>) -> Result<Vec<SweepResult>> {
    cfg.settings
        .iter()
        .map(|&s| {
            let spec = cfg.spec(s);
            match threads {
                Some(t) => run_sweep_with_threads(&spec, t),
                None => run_sweep(&spec),
            }
        })
        .collect()
}

/// Writes `sweep.csv`, `sweep.json`, `error_rate.svg`, `scores.svg` and the
/// manifest.
pub fn sweep(cfg: &SweepConfig, warnings: Vec<String>, threads: Option<usize>, out: &Path) -> Result<RunManifest> {
    let results = run_sweep_config(cfg, threads)?;
    let mut manifest = RunManifest::new("sweep", serde_json::to_value(cfg)?, Some(cfg.seed));
    manifest.warnings = warnings;

    std::fs::create_dir_all(out)?;
    manifest.emit(out, "sweep.csv", sweep_csv(&results)?.as_bytes())?;
    let doc = json!({ "config": cfg, "results": results });
    manifest.emit(out, "sweep.json", (serde_json::to_string_pretty(&doc)? + "\n").as_bytes())?;
    let (err, scores) = sweep_charts(cfg, &results);
    manifest.emit(out, "error_rate.svg", err.to_svg().as_bytes())?;
    manifest.emit(out, "scores.svg", scores.to_svg().as_bytes())?;
    manifest.write(out)?;
    Ok(manifest)
}

fn sweep_charts(cfg: &SweepConfig, results: &[SweepResult]) -> (LineChart, LineChart) {
    let log_x = cfg.axis != SweepAxis::Sigma2 && cfg.grid.iter().all(|&v| v > 0.0);
    let axis = cfg.axis.name();
    let mut err = LineChart::new(format!("Error rate vs {axis}"), axis, "error rate").log_x(log_x);
    let mut scores = LineChart::new(format!("Mean top-eigenvector score vs {axis}"), axis, "mean score").log_x(log_x);
    for (k, r) in results.iter().enumerate() {
        let name = r.setting.name();
        let series = |f: fn(&crate::simulate::SweepPoint) -> f64| r.points.iter().map(|p| (p.value, f(p))).collect();
        err.push(format!("{name} l2"), series(|p| p.error_rate_l2), k, false);
        err.push(format!("{name} linf"), series(|p| p.error_rate_linf), k, true);
        scores.push(format!("{name} lowpass"), series(|p| p.mean_score_t0), k, false);
        scores.push(format!("{name} highpass"), series(|p| p.mean_score_t1), k, true);
    }
    (err, scores)
}

// ---------------------------------------------------------------- classify

/// Inline JSON when `arg` starts with `{`, otherwise a path to a JSON file.
pub fn read_response(arg: &str) -> Result<FrequencyResponse> {
    let text = if arg.trim_start().starts_with('{') { arg.to_owned() } else { std::fs::read_to_string(arg)? };
    Ok(serde_json::from_str(&text)?)
}

pub fn classify(
    graph: &Path,
    response: &FrequencyResponse,
    cutoff: usize,
    gso: Option<GsoKind>,
) -> Result<(LowpassVerdict, Vec<String>)> {
    let g = load_edge_list(graph, None)?;
    let kind = match (response.gso(), gso) {
        (Some(r), Some(k)) if r != k => {
            return Err(Error::invalid(format!("response is defined on the {r:?} but --gso is {k:?}")))
        }
        (Some(r), _) => r,
        (None, Some(k)) => k,
        (None, None) => return Err(Error::invalid("polynomial responses need --gso")),
    };
    let mut warnings = Vec::new();
    if !g.is_connected() {
        warnings.push("graph is disconnected: the lowest-frequency mode need not be sign-uniform".to_owned());
    }
    let sp = order_spectrum(&g.gso(kind), kind)?;
    Ok((classify_lowpass(response, &sp, cutoff)?, warnings))
}

// ---------------------------------------------------------------- replay

/// Re-runs the command recorded in `manifest_path` into `out` and checks
/// every output digest. Returns the number of files compared.
pub fn replay(manifest_path: &Path, out: &Path) -> Result<usize> {
    let recorded = RunManifest::read(manifest_path)?;
    let fresh = match recorded.command.as_str() {
        "analyze" => {
            let cfg: AnalyzeConfig = serde_json::from_value(recorded.config.clone())?;
            analyze(&cfg, out)?
        }
        "sweep" => {
            let (cfg, warnings) = parse_sweep_config(&recorded.config)?;
            sweep(&cfg, warnings, None, out)?
        }
        other => return Err(Error::invalid(format!("cannot replay command {other:?}"))),
    };
    for want in &recorded.outputs {
        match fresh.outputs.iter().find(|f| f.file == want.file) {
            Some(got) if got.sha256 == want.sha256 => {}
            Some(_) => return Err(Error::ReplayMismatch(format!("{} differs from the recorded run", want.file))),
            None => return Err(Error::ReplayMismatch(format!("{} was not produced", want.file))),
        }
    }
    if fresh.outputs.len() != recorded.outputs.len() {
        return Err(Error::ReplayMismatch("replay produced a different set of files".into()));
    }
    Ok(recorded.outputs.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err_pointer(v: Value) -> String {
        match parse_sweep_config(&v) {
            Err(Error::Schema { pointer, .. }) => pointer,
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn sweep_config_defaults() {
        let (cfg, warnings) = parse_sweep_config(&json!({"axis": "m", "grid": [10, 50]})).unwrap();
        assert_eq!(cfg.settings, FilterSetting::ALL.to_vec());
        assert_eq!((cfg.n, cfg.m, cfg.sigma2, cfg.trials, cfg.seed), (100, 1000, 0.01, 200, 0));
        assert!(warnings.is_empty());
    }

    #[test]
    fn sweep_config_schema_errors() {
        assert_eq!(err_pointer(json!({"axis": "m", "grid": []})), "/grid");
        assert_eq!(err_pointer(json!({"grid": [1]})), "/axis");
        assert_eq!(err_pointer(json!({"axis": "q", "grid": [1]})), "/axis");
        assert_eq!(err_pointer(json!({"axis": "m", "grid": [1, "x"]})), "/grid/1");
        assert_eq!(err_pointer(json!({"axis": "m", "grid": [1.5]})), "/grid/0");
        assert_eq!(err_pointer(json!({"axis": "n", "grid": [1]})), "/grid/0");
        assert_eq!(err_pointer(json!({"axis": "m", "grid": [1], "bogus": 1})), "/bogus");
        assert_eq!(err_pointer(json!({"axis": "m", "grid": [1], "trials": 0})), "/trials");
        assert_eq!(err_pointer(json!({"axis": "m", "grid": [1], "settings": ["Nope"]})), "/settings/0");
        assert_eq!(err_pointer(json!({"axis": "m", "grid": [1], "sigma2": -1})), "/sigma2");
        assert_eq!(err_pointer(json!([1])), "");
    }

    #[test]
    fn single_trial_warns() {
        let (_, warnings) = parse_sweep_config(&json!({"axis": "m", "grid": [10], "trials": 1})).unwrap();
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("high variance"));
    }

    #[test]
    fn normalized_config_reparses_to_itself() {
        let (cfg, _) = parse_sweep_config(&json!({"axis": "sigma2", "grid": [0.01, 1], "setting": "AdjacencyWeak"})).unwrap();
        let (again, _) = parse_sweep_config(&serde_json::to_value(&cfg).unwrap()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn inline_response() {
        let r = read_response(r#"{"form":"InverseShift","params":{"alpha":0.25,"kind":"IplusAlphaL"}}"#).unwrap();
        assert_eq!(r.gso(), Some(GsoKind::Laplacian));
    }
}
