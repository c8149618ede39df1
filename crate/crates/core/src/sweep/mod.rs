//! k-sweeps, period averages and engine/closed-form validation, all emitting
//! CSV with a header row and LF line endings.
//!
//! Rows are computed independently (optionally on a bounded rayon pool) and
//! assembled in grid order, so serial and parallel runs write identical bytes.

mod averages;
mod closed_form;
pub mod figures;
mod validate;

pub use averages::{run_average, AverageConfig, AverageRow, FamilySpec, PeriodChoice};
pub use closed_form::{closed_form_amplitudes, run_closed_form};
pub use validate::{
    compare_with_engine, run_validate, validate_family, ValidationEntry, ValidationReport,
    VALIDATION_TOL,
};

use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::average::{AverageError, PeriodSpec, SINGULAR_OFFSET};
use crate::engine::{probabilities, scattering_matrix, EngineError, ScatteringMatrix};
use crate::entropy::{EntropyError, EntropyMeasure, ProbabilityVector};
use crate::families;
use crate::graph::{GraphError, OpenGraph};
use crate::graph_json::SpecError;

/// Cell value for a k at which the system stayed singular after the retry.
pub const NA: &str = "NA";

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("{path}: {source}")]
    SpecParse { path: PathBuf, source: SpecError },
    #[error("{path}: {source}")]
    ConfigParse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error("engine failure at k = {k}: {source}")]
    EngineFailure { k: f64, source: EngineError },
    #[error(transparent)]
    Average(#[from] AverageError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

/// Quantities a sweep can emit per graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Probabilities,
    Entropy,
    AmplitudesReIm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub k_min: f64,
    pub k_max: f64,
    pub samples: usize,
    /// Lead index; defaults to the graph file's entrance.
    #[serde(default)]
    pub entrance: Option<usize>,
    #[serde(default)]
    pub measures: Vec<EntropyMeasure>,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<Output>,
}

fn default_outputs() -> Vec<Output> {
    vec![Output::Probabilities, Output::Entropy]
}

impl SweepConfig {
    pub fn load(path: &Path) -> Result<Self, SweepError> {
        let text = std::fs::read_to_string(path)?;
        let cfg: Self = serde_json::from_str(&text).map_err(|source| SweepError::ConfigParse {
            path: path.to_path_buf(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if !(self.k_min > 0.0 && self.k_min.is_finite()) {
            return Err(SweepError::BadConfig(format!("k_min must be positive, got {}", self.k_min)));
        }
        if !(self.k_max > self.k_min && self.k_max.is_finite()) {
            return Err(SweepError::BadConfig(format!(
                "k_max ({}) must exceed k_min ({})",
                self.k_max, self.k_min
            )));
        }
        if self.samples < 2 {
            return Err(SweepError::BadConfig("samples must be at least 2".into()));
        }
        for m in &self.measures {
            m.validate()?;
        }
        Ok(())
    }

    /// `samples` points from `k_min` to `k_max` inclusive.
    pub fn grid(&self) -> Vec<f64> {
        let step = (self.k_max - self.k_min) / (self.samples - 1) as f64;
        (0..self.samples)
            .map(|i| {
                if i + 1 == self.samples {
                    self.k_max
                } else {
                    self.k_min + step * i as f64
                }
            })
            .collect()
    }

    fn wants(&self, o: Output) -> bool {
        self.outputs.contains(&o)
    }
}

/// Execution settings shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses rayon's default, `Some(1)` runs serially.
    pub workers: Option<usize>,
    /// Quadrature tolerance override.
    pub tol: Option<f64>,
}

impl RunOptions {
    pub fn serial() -> Self {
        Self {
            workers: Some(1),
            tol: None,
        }
    }

    /// Runs `job` on a pool bounded by `workers`.
    pub fn install<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T, SweepError> {
        match self.workers {
            None => Ok(job()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .map_err(|e| SweepError::Pool(e.to_string()))?;
                Ok(pool.install(job))
            }
        }
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:?}")
}

/// A family that can be built at a given size with unit edge lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Series,
    Parallel,
    Pvv,
    Cycle,
    Wheel,
    Complete,
}

impl FamilyName {
    pub const ALL: [FamilyName; 6] = [
        Self::Series,
        Self::Parallel,
        Self::Pvv,
        Self::Cycle,
        Self::Wheel,
        Self::Complete,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Series => "series",
            Self::Parallel => "parallel",
            Self::Pvv => "pvv",
            Self::Cycle => "cycle",
            Self::Wheel => "wheel",
            Self::Complete => "complete",
        }
    }

    /// Smallest admissible size.
    pub fn min_size(&self) -> usize {
        match self {
            Self::Series | Self::Parallel | Self::Pvv => 1,
            Self::Cycle => 3,
            Self::Wheel => 4,
            Self::Complete => 2,
        }
    }

    /// Sizes checked by `validate` when none are given.
    pub fn default_sizes(&self) -> std::ops::RangeInclusive<usize> {
        match self {
            Self::Series | Self::Parallel => 1..=8,
            Self::Pvv => 1..=1,
            Self::Cycle => 3..=8,
            Self::Wheel => 4..=7,
            Self::Complete => 2..=6,
        }
    }

    /// Unit-length member of size `n`. `pvv` ignores `n`.
    pub fn build(&self, n: usize) -> Result<OpenGraph, SweepError> {
        if n < self.min_size() {
            return Err(SweepError::BadConfig(format!(
                "{} needs n ≥ {}, got {n}",
                self.as_str(),
                self.min_size()
            )));
        }
        Ok(match self {
            Self::Series => families::series_bundle(n, 1.0, 1.0)?,
            Self::Parallel => families::parallel_bundle(n, 1.0, 1.0)?,
            Self::Pvv => families::two_edge(1.0, 1.0)?,
            Self::Cycle => families::cycle(n, 1.0)?,
            Self::Wheel => families::wheel(n, 1.0)?,
            Self::Complete => families::complete(n, 1.0)?,
        })
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyName {
    type Err = SweepError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| SweepError::BadConfig(format!("unknown family `{s}`")))
    }
}

/// Singular-system retry shift for a graph: `1e−9·K`, with the sweep span
/// standing in for `K` when the lengths are incommensurate.
fn retry_shift(og: &OpenGraph, span: f64) -> f64 {
    let k_period = PeriodSpec::infer(og.base()).map_or(span, |p| p.k_period);
    SINGULAR_OFFSET * k_period
}

/// Scattering matrix at `k`, retried once at `k + shift`. `Ok(None)` means
/// the retry failed too and the row gets `NA` cells.
fn matrix_with_retry(
    og: &OpenGraph,
    entrance: usize,
    k: f64,
    shift: f64,
) -> Result<Option<(ScatteringMatrix, Vec<f64>)>, SweepError> {
    let attempt = |k: f64| -> Result<(ScatteringMatrix, Vec<f64>), EngineError> {
        let sm = scattering_matrix(og, k)?;
        let p = probabilities(&sm, entrance)?;
        Ok((sm, p))
    };
    let numerical = |e: &EngineError| {
        matches!(
            e,
            EngineError::SingularSystem { .. } | EngineError::UnitarityViolation { .. }
        )
    };
    match attempt(k) {
        Ok(v) => Ok(Some(v)),
        Err(e) if numerical(&e) => match attempt(k + shift) {
            Ok(v) => Ok(Some(v)),
            Err(e) if numerical(&e) => Ok(None),
            Err(source) => Err(SweepError::EngineFailure { k, source }),
        },
        Err(source) => Err(SweepError::EngineFailure { k, source }),
    }
}

struct SweepTarget<'a> {
    prefix: String,
    graph: &'a OpenGraph,
    entrance: usize,
    shift: f64,
}

impl SweepTarget<'_> {
    fn header(&self, cfg: &SweepConfig) -> Vec<String> {
        let l = self.graph.channel_count();
        let mut cols = Vec::new();
        if cfg.wants(Output::Probabilities) {
            cols.extend((1..=l).map(|j| format!("{}p_{j}", self.prefix)));
        }
        if cfg.wants(Output::AmplitudesReIm) {
            for j in 1..=l {
                cols.push(format!("{}sigma_{j}_re", self.prefix));
                cols.push(format!("{}sigma_{j}_im", self.prefix));
            }
        }
        if cfg.wants(Output::Entropy) {
            cols.extend(cfg.measures.iter().map(|m| format!("{}{}", self.prefix, m.column_name())));
        }
        cols
    }

    fn cells(&self, cfg: &SweepConfig, k: f64) -> Result<(Vec<String>, bool), SweepError> {
        let width = self.header(cfg).len();
        let Some((sm, p)) = matrix_with_retry(self.graph, self.entrance, k, self.shift)? else {
            return Ok((vec![NA.to_string(); width], true));
        };
        let mut cells = Vec::with_capacity(width);
        let pv = ProbabilityVector::new(p)?;
        if cfg.wants(Output::Probabilities) {
            cells.extend(pv.values().iter().map(|&x| fmt_float(x)));
        }
        if cfg.wants(Output::AmplitudesReIm) {
            for s in sm.column(self.entrance) {
                cells.push(fmt_float(s.re));
                cells.push(fmt_float(s.im));
            }
        }
        if cfg.wants(Output::Entropy) {
            for m in &cfg.measures {
                cells.push(fmt_float(m.evaluate(&pv)?));
            }
        }
        Ok((cells, false))
    }
}

/// Rows written and rows that carried `NA`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SweepSummary {
    pub rows: usize,
    pub na_rows: usize,
}

/// Sweep of several labelled graphs on one grid. Columns are `k`, then each
/// graph's columns prefixed by `<label>_`; an empty label adds no prefix.
pub fn run_sweep_labelled<W: Write>(
    graphs: &[(&str, &OpenGraph)],
    cfg: &SweepConfig,
    opts: &RunOptions,
    out: &mut W,
) -> Result<SweepSummary, SweepError> {
    cfg.validate()?;
    let span = cfg.k_max - cfg.k_min;
    let mut targets = Vec::with_capacity(graphs.len());
    for &(label, og) in graphs {
        let entrance = cfg.entrance.unwrap_or(og.entrance());
        if entrance >= og.channel_count() {
            return Err(SweepError::BadConfig(format!(
                "entrance {entrance} out of range for {} leads",
                og.channel_count()
            )));
        }
        targets.push(SweepTarget {
            prefix: if label.is_empty() {
                String::new()
            } else {
                format!("{label}_")
            },
            graph: og,
            entrance,
            shift: retry_shift(og, span),
        });
    }

    let mut header = vec!["k".to_string()];
    for t in &targets {
        header.extend(t.header(cfg));
    }

    let grid = cfg.grid();
    let rows: Vec<(String, bool)> = opts.install(|| {
        grid.par_iter()
            .map(|&k| {
                let mut line = fmt_float(k);
                let mut na = false;
                for t in &targets {
                    let (cells, missing) = t.cells(cfg, k)?;
                    na |= missing;
                    for c in cells {
                        line.push(',');
                        line.push_str(&c);
                    }
                }
                line.push('\n');
                Ok((line, na))
            })
            .collect::<Result<Vec<_>, SweepError>>()
    })??;

    writeln!(out, "{}", header.join(","))?;
    let mut summary = SweepSummary::default();
    for (line, na) in &rows {
        out.write_all(line.as_bytes())?;
        summary.rows += 1;
        summary.na_rows += usize::from(*na);
    }
    Ok(summary)
}

/// One row per k: `k`, then `p_1..p_l`, then `sigma_j_re/_im`, then one
/// column per measure, each block present when requested in `outputs`.
pub fn run_sweep<W: Write>(
    og: &OpenGraph,
    cfg: &SweepConfig,
    opts: &RunOptions,
    out: &mut W,
) -> Result<SweepSummary, SweepError> {
    run_sweep_labelled(&[("", og)], cfg, opts, out)
}

/// [`run_sweep`] into a string.
pub fn sweep_to_string(og: &OpenGraph, cfg: &SweepConfig, opts: &RunOptions) -> Result<String, SweepError> {
    let mut buf = Vec::new();
    run_sweep(og, cfg, opts, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV is ASCII"))
}
