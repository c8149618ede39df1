use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{fmt_float, FamilyName, RunOptions, SweepError};
use crate::average::{average_entropies, PeriodSpec, Quadrature};
use crate::entropy::EntropyMeasure;
use crate::graph::OpenGraph;
use crate::graph_json::load_open_graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InferKeyword {
    Infer,
}

/// `"infer"` or an explicit period `K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PeriodChoice {
    Infer(InferKeyword),
    Explicit(f64),
}

impl Default for PeriodChoice {
    fn default() -> Self {
        Self::Infer(InferKeyword::Infer)
    }
}

impl PeriodChoice {
    fn resolve(&self, og: &OpenGraph) -> Result<PeriodSpec, SweepError> {
        let explicit = match *self {
            Self::Infer(_) => None,
            Self::Explicit(k) => Some(k),
        };
        Ok(PeriodSpec::resolve(explicit, og.base())?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParameterKind {
    Renyi,
    Tsallis,
}

impl ParameterKind {
    fn measure(&self, x: f64) -> Result<EntropyMeasure, SweepError> {
        Ok(match self {
            Self::Renyi => EntropyMeasure::renyi(x)?,
            Self::Tsallis => EntropyMeasure::tsallis(x)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilySpec {
    Named {
        family: FamilyName,
        n_min: usize,
        n_max: usize,
    },
    /// A graph file; relative paths are taken from the config's directory.
    Graph {
        graph: PathBuf,
        #[serde(default)]
        label: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AverageConfig {
    #[serde(default)]
    pub period: PeriodChoice,
    pub measure: ParameterKind,
    pub parameter_grid: Vec<f64>,
    /// Adds a Shannon row at parameter 1, the common limit of both families.
    #[serde(default = "default_true")]
    pub include_shannon: bool,
    pub families: Vec<FamilySpec>,
    #[serde(default)]
    pub tol: Option<f64>,
}

fn default_true() -> bool {
    true
}

impl AverageConfig {
    pub fn load(path: &Path) -> Result<Self, SweepError> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg: Self = serde_json::from_str(&text).map_err(|source| SweepError::ConfigParse {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        for f in &mut cfg.families {
            if let FamilySpec::Graph { graph, .. } = f {
                if graph.is_relative() {
                    *graph = base.join(&*graph);
                }
            }
        }
        Ok(cfg)
    }

    /// Grid measures in ascending parameter order, Shannon slotted in at 1.
    fn measures(&self) -> Result<Vec<(f64, EntropyMeasure)>, SweepError> {
        let mut out = self
            .parameter_grid
            .iter()
            .map(|&x| Ok((x, self.measure.measure(x)?)))
            .collect::<Result<Vec<_>, SweepError>>()?;
        if self.include_shannon {
            out.push((1.0, EntropyMeasure::Shannon));
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(out)
    }

    fn graphs(&self) -> Result<Vec<(String, usize, OpenGraph)>, SweepError> {
        let mut out = Vec::new();
        for f in &self.families {
            match f {
                FamilySpec::Named { family, n_min, n_max } => {
                    if n_min > n_max {
                        return Err(SweepError::BadConfig(format!("{family}: n_min > n_max")));
                    }
                    for n in *n_min..=*n_max {
                        out.push((family.to_string(), n, family.build(n)?));
                    }
                }
                FamilySpec::Graph { graph, label } => {
                    let og = load_open_graph(graph).map_err(|source| SweepError::SpecParse {
                        path: graph.clone(),
                        source,
                    })?;
                    let name = label.clone().unwrap_or_else(|| {
                        graph
                            .file_stem()
                            .map_or("graph".into(), |s| s.to_string_lossy().into_owned())
                    });
                    let n = og.base().vertex_count();
                    out.push((name, n, og));
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AverageRow {
    pub family: String,
    pub n: usize,
    pub parameter: f64,
    pub value: f64,
    pub quad_error_estimate: f64,
}

/// Columns `family,n,parameter,value,quad_error_estimate`, one row per graph
/// and parameter. All parameters of one graph share the quadrature nodes.
pub fn run_average<W: Write>(
    cfg: &AverageConfig,
    opts: &RunOptions,
    out: &mut W,
) -> Result<Vec<AverageRow>, SweepError> {
    let measures = cfg.measures()?;
    let only: Vec<EntropyMeasure> = measures.iter().map(|m| m.1).collect();
    let quad = Quadrature::with_tol(opts.tol.or(cfg.tol).unwrap_or(crate::average::DEFAULT_TOL));
    let mut rows = Vec::new();
    for (family, n, og) in cfg.graphs()? {
        let period = cfg.period.resolve(&og)?;
        let values = opts.install(|| average_entropies(&og, &only, &period, &quad))??;
        for ((parameter, _), v) in measures.iter().zip(values) {
            rows.push(AverageRow {
                family: family.clone(),
                n,
                parameter: *parameter,
                value: v.value,
                quad_error_estimate: v.error_estimate,
            });
        }
    }
    writeln!(out, "family,n,parameter,value,quad_error_estimate")?;
    for r in &rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.family,
            r.n,
            fmt_float(r.parameter),
            fmt_float(r.value),
            fmt_float(r.quad_error_estimate)
        )?;
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::average::Quadrature;
    use crate::entropy::{shannon, ProbabilityVector};
    use crate::closed_forms::complete_amplitudes;
    use num_complex::Complex64;
    use std::convert::Infallible;
    use std::f64::consts::PI;

    #[test]
    fn config_parsing() {
        let json = r#"{
            "period": "infer",
            "measure": "renyi",
            "parameter_grid": [0.5, 2],
            "families": [{"family": "wheel", "n_min": 4, "n_max": 5}, {"graph": "g.json"}]
        }"#;
        let c: AverageConfig = serde_json::from_str(json).unwrap();
        assert_eq!(c.period, PeriodChoice::default());
        assert!(c.include_shannon);
        assert!(matches!(c.families[1], FamilySpec::Graph { .. }));
        let c: AverageConfig =
            serde_json::from_str(r#"{"period": 6.5, "measure": "tsallis", "parameter_grid": [], "families": []}"#)
                .unwrap();
        assert_eq!(c.period, PeriodChoice::Explicit(6.5));
        assert!(serde_json::from_str::<AverageConfig>(r#"{"period": "guess", "measure": "renyi", "parameter_grid": [], "families": []}"#).is_err());
    }

    #[test]
    fn rows_sorted_with_shannon_at_one() {
        let cfg = AverageConfig {
            period: PeriodChoice::default(),
            measure: ParameterKind::Tsallis,
            parameter_grid: vec![4.0, 0.5],
            include_shannon: true,
            families: vec![FamilySpec::Named {
                family: FamilyName::Complete,
                n_min: 3,
                n_max: 3,
            }],
            tol: Some(1e-5),
        };
        let mut buf = Vec::new();
        let rows = run_average(&cfg, &RunOptions::default(), &mut buf).unwrap();
        let params: Vec<f64> = rows.iter().map(|r| r.parameter).collect();
        assert_eq!(params, vec![0.5, 1.0, 4.0]);
        assert!(rows[0].value >= rows[1].value && rows[1].value >= rows[2].value);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("family,n,parameter,value,quad_error_estimate\ncomplete,3,0.5,"));
    }

    #[test]
    fn bad_grid_rejected() {
        let cfg = AverageConfig {
            period: PeriodChoice::default(),
            measure: ParameterKind::Renyi,
            parameter_grid: vec![1.0],
            include_shannon: false,
            families: vec![],
            tol: None,
        };
        assert!(run_average(&cfg, &RunOptions::default(), &mut Vec::new()).is_err());
    }

    #[test]
    fn complete_two_matches_scalar_quadrature() {
        // K_2: two channels with closed-form amplitudes, averaged independently
        let cfg = AverageConfig {
            period: PeriodChoice::default(),
            measure: ParameterKind::Renyi,
            parameter_grid: vec![],
            include_shannon: true,
            families: vec![FamilySpec::Named {
                family: FamilyName::Complete,
                n_min: 2,
                n_max: 2,
            }],
            tol: Some(1e-8),
        };
        let rows = run_average(&cfg, &RunOptions::default(), &mut Vec::new()).unwrap();
        let oracle = Quadrature::with_tol(1e-10)
            .mean(0.0, 2.0 * PI, |k| {
                let (r, t) = complete_amplitudes(2, Complex64::from_polar(1.0, k)).unwrap();
                let p = ProbabilityVector::new(vec![r.norm_sqr(), t.norm_sqr()]).unwrap();
                Ok::<_, Infallible>(vec![shannon(&p)])
            })
            .unwrap();
        assert!((rows[0].value - oracle.values[0]).abs() < 1e-7);
    }
}
