//! Load or generate a graph, run one algorithm over the `c` grid (or a single
//! `c`), and write the report.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::generate::gen_pref_attach;
use crate::graph::DirectedGraph;
use crate::peel::RatioGuess;
use crate::report::{ReportError, RunReport, RunRow};
use crate::snap::{read_snap_file, SnapError};
use crate::stream::ordered_edges;
use crate::sweep::{
    build_grid, ratio_to_f64, run_single, sweep, Algorithm, RunError, RunSettings, SweepError,
    SweepGrid,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Snap(#[from] SnapError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error(transparent)]
    Run(#[from] RunError),
    #[error("writing {path}: {source}")]
    Write { path: PathBuf, source: ReportError },
    #[error("creating {path}: {source}")]
    Create {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// `pref:n=<vertices>,k=<edges per vertex>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub n: usize,
    pub k: usize,
}

impl FromStr for GenSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .strip_prefix("pref:")
            .ok_or_else(|| format!("generator spec {s:?} must start with \"pref:\""))?;
        let (mut n, mut k) = (None, None);
        for part in body.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got {part:?}"))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| format!("{key} must be a positive integer, got {value:?}"))?;
            match key.trim() {
                "n" => n = Some(value),
                "k" => k = Some(value),
                other => return Err(format!("unknown generator key {other:?}")),
            }
        }
        let (n, k) = match (n, k) {
            (Some(n), Some(k)) => (n, k),
            _ => return Err(format!("generator spec {s:?} needs both n and k")),
        };
        if n < 2 || k < 1 {
            return Err(format!(
                "generator needs n >= 2 and k >= 1, got n={n}, k={k}"
            ));
        }
        Ok(GenSpec { n, k })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InputSource {
    File(PathBuf),
    Generate(GenSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub input: InputSource,
    pub algo: Algorithm,
    pub delta: f64,
    /// Fixed ratio guess; `None` sweeps the grid.
    pub c: Option<RatioGuess>,
    pub settings: RunSettings,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(input: InputSource, algo: Algorithm) -> Self {
        RunConfig {
            input,
            algo,
            delta: 2.0,
            c: None,
            settings: RunSettings::default(),
            out: None,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let s = &self.settings;
        let bad = |msg: String| Err(ExperimentError::Config(msg));
        if !(s.epsilon > 0.0 && s.epsilon < 1.0) {
            return bad(format!("epsilon must lie in (0, 1), got {}", s.epsilon));
        }
        if !(self.delta.is_finite() && self.delta > 1.0) {
            return bad(format!("delta must be greater than 1, got {}", self.delta));
        }
        if !(s.f.is_finite() && s.f > 0.0) {
            return bad(format!("f must be positive, got {}", s.f));
        }
        Ok(())
    }

    pub fn dataset_name(&self) -> String {
        match &self.input {
            InputSource::File(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
            InputSource::Generate(spec) => format!("pref-n{}-k{}", spec.n, spec.k),
        }
    }
}

pub fn load_graph(cfg: &RunConfig) -> Result<DirectedGraph, ExperimentError> {
    Ok(match &cfg.input {
        InputSource::File(path) => read_snap_file(path)?.graph,
        InputSource::Generate(spec) => gen_pref_attach(spec.n, spec.k, cfg.settings.seed),
    })
}

/// Runs the configured experiment and, when `cfg.out` is set, writes the CSV.
pub fn run_experiment(cfg: &RunConfig) -> Result<RunReport, ExperimentError> {
    cfg.validate()?;
    let g = load_graph(cfg)?;
    let report = run_on_graph(cfg, &g)?;
    if let Some(path) = &cfg.out {
        write_report(&report, path)?;
    }
    Ok(report)
}

/// Everything [`run_experiment`] does after the graph is in memory.
pub fn run_on_graph(cfg: &RunConfig, g: &DirectedGraph) -> Result<RunReport, ExperimentError> {
    cfg.validate()?;
    let dataset = cfg.dataset_name();
    let seed = cfg.settings.seed;

    if cfg.algo == Algorithm::Exact {
        let edges = ordered_edges(g, cfg.settings.stream_order());
        let mut out = run_single(g, cfg.algo, RatioGuess::new(1, 1), &cfg.settings, &edges)?;
        let (s, t) = out.pair.sizes();
        out.c = RatioGuess::new(s.max(1) as u64, t.max(1) as u64);
        return Ok(RunReport {
            rows: vec![RunRow::from_outcome(&dataset, cfg.algo, seed, &out)],
        });
    }

    let grid = match cfg.c {
        Some(c) => SweepGrid::single(c),
        None => build_grid(g.vertex_count(), cfg.delta)?,
    };
    let result = sweep(g, cfg.algo, &grid, &cfg.settings)?;
    let rows = result
        .rows
        .iter()
        .map(|row| match &row.result {
            Ok(out) => RunRow::from_outcome(&dataset, cfg.algo, seed, out),
            Err(e) => RunRow::failed(&dataset, cfg.algo, ratio_to_f64(row.c), seed, e.to_string()),
        })
        .collect();
    Ok(RunReport { rows })
}

pub fn write_report(report: &RunReport, path: &Path) -> Result<(), ExperimentError> {
    let file = File::create(path).map_err(|source| ExperimentError::Create {
        path: path.to_path_buf(),
        source,
    })?;
    report
        .write_csv(BufWriter::new(file))
        .map_err(|source| ExperimentError::Write {
            path: path.to_path_buf(),
            source,
        })
}
