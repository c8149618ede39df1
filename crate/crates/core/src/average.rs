//! Period-averaged entropies via adaptive composite Gauss–Legendre quadrature.
//!
//! The integrand is vector-valued so that every measure of a parameter grid
//! shares one scattering solve per node. Refinement is global: each round
//! splits the panels carrying the largest share of the error estimate, and
//! panel sums are always reduced left to right, so results do not depend on
//! how rayon schedules the work.

use std::convert::Infallible;
use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_integer::Integer;
use rayon::prelude::*;
use thiserror::Error;

use crate::engine::EngineError;
use crate::entropy::{scattering_entropies, EntropyError, EntropyMeasure};
use crate::graph::{MetricGraph, OpenGraph};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const INITIAL_PANELS: usize = 64;
pub const NODES_PER_PANEL: usize = 8;
pub const PANEL_BUDGET: usize = 1 << 16;
/// Relative tolerance for recognizing lengths as integer multiples of `ℓ₀`.
pub const COMMENSURATE_TOL: f64 = 1e-9;
/// Largest denominator tried when reconstructing length ratios.
pub const MAX_DENOMINATOR: i64 = 10_000;
/// Singular nodes are moved by this fraction of the period.
pub const SINGULAR_OFFSET: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AverageError {
    #[error("edge lengths are not commensurate; supply the period explicitly")]
    NoPeriod,
    #[error("period must be positive and finite, got {0}")]
    BadPeriod(f64),
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("quadrature stalled at {panels} panels with error estimate {error:e} (tol {tol:e})")]
    QuadratureStalled { panels: usize, error: f64, tol: f64 },
    #[error(transparent)]
    Entropy(#[from] EntropyError),
}

/// Lets infallible integrands go through [`Quadrature::mean`].
impl From<Infallible> for AverageError {
    fn from(e: Infallible) -> Self {
        match e {}
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodSource {
    Explicit,
    Inferred,
}

/// Period `K` of the channel probabilities in `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodSpec {
    pub k_period: f64,
    pub source: PeriodSource,
}

impl PeriodSpec {
    pub fn explicit(k_period: f64) -> Result<Self, AverageError> {
        if !(k_period.is_finite() && k_period > 0.0) {
            return Err(AverageError::BadPeriod(k_period));
        }
        Ok(Self {
            k_period,
            source: PeriodSource::Explicit,
        })
    }

    /// `K = 2π/ℓ₀` for the common length `ℓ₀` of the graph's edges.
    pub fn infer(graph: &MetricGraph) -> Result<Self, AverageError> {
        let lengths: Vec<f64> = graph.lengths().collect();
        let l0 = commensurate_length(&lengths).ok_or(AverageError::NoPeriod)?;
        Ok(Self {
            k_period: 2.0 * PI / l0,
            source: PeriodSource::Inferred,
        })
    }

    /// An explicit period wins over inference.
    pub fn resolve(explicit: Option<f64>, graph: &MetricGraph) -> Result<Self, AverageError> {
        match explicit {
            Some(k) => Self::explicit(k),
            None => Self::infer(graph),
        }
    }
}

/// Best rational approximation `p/q` of `x > 0` with `q ≤ max_den`, if it is
/// within `COMMENSURATE_TOL · x`.
fn rational_approximation(x: f64, max_den: i64) -> Option<(i64, i64)> {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a > i64::MAX as f64 / 4.0 {
            return None;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= COMMENSURATE_TOL * x {
            return Some((h1, k1));
        }
        let frac = rest - a as f64;
        if frac <= 0.0 {
            return None;
        }
        rest = 1.0 / frac;
    }
    None
}

/// Largest `ℓ₀` such that every length is an integer multiple of it.
pub fn commensurate_length(lengths: &[f64]) -> Option<f64> {
    let reference = lengths.iter().copied().fold(f64::INFINITY, f64::min);
    if !(reference.is_finite() && reference > 0.0) {
        return None;
    }
    let ratios = lengths
        .iter()
        .map(|&l| rational_approximation(l / reference, MAX_DENOMINATOR))
        .collect::<Option<Vec<_>>>()?;
    let common_den = ratios.iter().fold(1i64, |acc, &(_, q)| acc.lcm(&q));
    let multiples: Vec<i64> = ratios.iter().map(|&(p, q)| p * (common_den / q)).collect();
    let g = multiples.iter().fold(common_den, |acc, m| acc.gcd(m));
    let l0 = reference * g as f64 / common_den as f64;
    let ok = lengths.iter().all(|&l| {
        let m = l / l0;
        (m - m.round()).abs() <= COMMENSURATE_TOL * m.max(1.0)
    });
    ok.then_some(l0)
}

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussLegendre::new(NonZeroUsize::new(NODES_PER_PANEL).unwrap())
            .as_node_weight_pairs()
            .to_vec()
    })
}

/// Adaptive composite Gauss–Legendre settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    /// Target for the estimated error of the mean, per component.
    pub tol: f64,
    pub initial_panels: usize,
    pub panel_budget: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            initial_panels: INITIAL_PANELS,
            panel_budget: PANEL_BUDGET,
        }
    }
}

/// Mean of a vector-valued integrand over an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanEstimate {
    pub values: Vec<f64>,
    pub error_estimate: Vec<f64>,
    pub panels: usize,
}

#[derive(Debug, Clone)]
struct Panel {
    a: f64,
    b: f64,
    whole: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl Panel {
    fn refined(&self) -> impl Iterator<Item = f64> + '_ {
        self.left.iter().zip(&self.right).map(|(l, r)| l + r)
    }

    fn errors(&self) -> impl Iterator<Item = f64> + '_ {
        self.refined().zip(&self.whole).map(|(r, w)| (r - w).abs())
    }

    fn error(&self) -> f64 {
        self.errors().fold(0.0, f64::max)
    }
}

fn gauss<F, E>(f: &F, a: f64, b: f64) -> Result<Vec<f64>, E>
where
    F: Fn(f64) -> Result<Vec<f64>, E>,
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc: Vec<f64> = Vec::new();
    for &(x, w) in rule() {
        let y = f(mid + half * x)?;
        if acc.is_empty() {
            acc = vec![0.0; y.len()];
        }
        for (s, v) in acc.iter_mut().zip(&y) {
            *s += w * half * v;
        }
    }
    Ok(acc)
}

fn halves<F, E>(f: &F, a: f64, b: f64, whole: Vec<f64>) -> Result<Panel, E>
where
    F: Fn(f64) -> Result<Vec<f64>, E>,
{
    let m = 0.5 * (a + b);
    Ok(Panel {
        a,
        b,
        whole,
        left: gauss(f, a, m)?,
        right: gauss(f, m, b)?,
    })
}

impl Quadrature {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    /// `(1/(b − a)) ∫ₐᵇ f`, componentwise.
    pub fn mean<F, E>(&self, a: f64, b: f64, f: F) -> Result<MeanEstimate, AverageError>
    where
        F: Fn(f64) -> Result<Vec<f64>, E> + Sync,
        E: Send,
        AverageError: From<E>,
    {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(AverageError::BadTolerance(self.tol));
        }
        let width = b - a;
        let n0 = self.initial_panels.max(1);
        let mut panels: Vec<Panel> = (0..n0)
            .into_par_iter()
            .map(|i| {
                let pa = a + width * i as f64 / n0 as f64;
                let pb = a + width * (i + 1) as f64 / n0 as f64;
                let whole = gauss(&f, pa, pb)?;
                halves(&f, pa, pb, whole)
            })
            .collect::<Result<_, E>>()?;

        loop {
            let dim = panels.first().map_or(0, |p| p.whole.len());
            let mut err_sum = vec![0.0; dim];
            for p in &panels {
                for (s, e) in err_sum.iter_mut().zip(p.errors()) {
                    *s += e;
                }
            }
            let err_mean = err_sum.iter().fold(0.0, |m: f64, e| m.max(e / width));
            if err_mean < self.tol {
                let mut values = vec![0.0; dim];
                for p in &panels {
                    for (s, v) in values.iter_mut().zip(p.refined()) {
                        *s += v;
                    }
                }
                return Ok(MeanEstimate {
                    values: values.iter().map(|v| v / width).collect(),
                    error_estimate: err_sum.iter().map(|e| e / width).collect(),
                    panels: panels.len(),
                });
            }

            let mut order: Vec<(usize, f64)> =
                panels.iter().map(|p| p.error()).enumerate().collect();
            order.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
            let total: f64 = order.iter().map(|o| o.1).sum();
            let mut picked = Vec::new();
            let mut covered = 0.0;
            for &(i, e) in &order {
                if covered >= 0.5 * total || e == 0.0 {
                    break;
                }
                picked.push(i);
                covered += e;
            }
            if picked.is_empty() || panels.len() + picked.len() > self.panel_budget {
                return Err(AverageError::QuadratureStalled {
                    panels: panels.len(),
                    error: err_mean,
                    tol: self.tol,
                });
            }
            picked.sort_unstable();

            let children: Vec<(Panel, Panel)> = picked
                .par_iter()
                .map(|&i| {
                    let p = &panels[i];
                    let m = 0.5 * (p.a + p.b);
                    Ok((
                        halves(&f, p.a, m, p.left.clone())?,
                        halves(&f, m, p.b, p.right.clone())?,
                    ))
                })
                .collect::<Result<_, E>>()?;

            let mut next = Vec::with_capacity(panels.len() + picked.len());
            let mut split = picked.iter().zip(children).peekable();
            for (i, p) in panels.into_iter().enumerate() {
                match split.peek() {
                    Some(&(&j, _)) if j == i => {
                        let (_, (l, r)) = split.next().unwrap();
                        next.push(l);
                        next.push(r);
                    }
                    _ => next.push(p),
                }
            }
            panels = next;
        }
    }
}

/// Entropies at `k`, retried once at `k + 1e−9·K` if the system is singular.
pub fn entropies_with_retry(
    og: &OpenGraph,
    measures: &[EntropyMeasure],
    k: f64,
    k_period: f64,
) -> Result<Vec<f64>, EntropyError> {
    match scattering_entropies(og, measures, k) {
        Err(EntropyError::Engine(EngineError::SingularSystem { .. })) => {
            scattering_entropies(og, measures, k + SINGULAR_OFFSET * k_period)
        }
        other => other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageValue {
    pub measure: EntropyMeasure,
    pub value: f64,
    pub error_estimate: f64,
}

/// `(1/K)∫₀ᴷ H(k) dk` for each measure, from shared solves.
pub fn average_entropies(
    og: &OpenGraph,
    measures: &[EntropyMeasure],
    period: &PeriodSpec,
    quad: &Quadrature,
) -> Result<Vec<AverageValue>, AverageError> {
    for m in measures {
        m.validate()?;
    }
    let k_period = period.k_period;
    let est = quad.mean(0.0, k_period, |k| entropies_with_retry(og, measures, k, k_period))?;
    Ok(measures
        .iter()
        .zip(est.values.iter().zip(&est.error_estimate))
        .map(|(&measure, (&value, &error_estimate))| AverageValue {
            measure,
            value,
            error_estimate,
        })
        .collect())
}

pub fn average_entropy(
    og: &OpenGraph,
    measure: EntropyMeasure,
    period: &PeriodSpec,
    tol: f64,
) -> Result<AverageValue, AverageError> {
    let quad = Quadrature::with_tol(tol);
    Ok(average_entropies(og, &[measure], period, &quad)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::graph::MetricGraph;

    #[test]
    fn constant_mean() {
        let est = Quadrature::default()
            .mean(0.0, 3.0, |_| Ok::<_, Infallible>(vec![2.5, -1.0]))
            .unwrap();
        assert!((est.values[0] - 2.5).abs() < 1e-14);
        assert!((est.values[1] + 1.0).abs() < 1e-14);
        assert_eq!(est.panels, INITIAL_PANELS);
    }

    #[test]
    fn cusp_integrand_refines() {
        // |sin k| has mean 2/π and kinks at π and 2π, both inside panels here
        let q = Quadrature::with_tol(1e-10);
        let est = q
            .mean(0.3, 0.3 + 2.0 * PI, |k| Ok::<_, Infallible>(vec![k.sin().abs()]))
            .unwrap();
        assert!((est.values[0] - 2.0 / PI).abs() < 1e-10);
        assert!(est.panels > INITIAL_PANELS);
    }

    #[test]
    fn stall_is_reported() {
        let q = Quadrature {
            tol: 1e-12,
            initial_panels: 4,
            panel_budget: 8,
        };
        let r = q.mean(0.0, 1.0, |k| {
            Ok::<_, Infallible>(vec![if k < 0.3 { 0.0 } else { 1.0 }])
        });
        assert!(matches!(r, Err(AverageError::QuadratureStalled { .. })));
        assert!(Quadrature::with_tol(0.0)
            .mean(0.0, 1.0, |_| Ok::<_, Infallible>(vec![1.0]))
            .is_err());
    }

    #[test]
    fn commensurate_lengths() {
        let l0 = commensurate_length(&[1.0, 2.0, 3.0]).unwrap();
        assert!((l0 - 1.0).abs() < 1e-15);
        let l0 = commensurate_length(&[0.5, 0.75]).unwrap();
        assert!((l0 - 0.25).abs() < 1e-15);
        let l0 = commensurate_length(&[2.0, 3.0]).unwrap();
        assert!((l0 - 1.0).abs() < 1e-15);
        assert!(commensurate_length(&[1.0, 2f64.sqrt()]).is_none());
        assert!(commensurate_length(&[1.0, PI]).is_none());
    }

    #[test]
    fn period_resolution() {
        let g = MetricGraph::from_triples(2, &[(1, 2, 0.5), (1, 2, 1.0)]).unwrap();
        let p = PeriodSpec::resolve(None, &g).unwrap();
        assert_eq!(p.source, PeriodSource::Inferred);
        assert!((p.k_period - 4.0 * PI).abs() < 1e-12);
        let p = PeriodSpec::resolve(Some(1.5), &g).unwrap();
        assert_eq!(p.source, PeriodSource::Explicit);
        let bad = MetricGraph::from_triples(2, &[(1, 2, 1.0), (1, 2, 2f64.sqrt())]).unwrap();
        assert_eq!(PeriodSpec::infer(&bad), Err(AverageError::NoPeriod));
        assert!(PeriodSpec::explicit(-1.0).is_err());
    }

    #[test]
    fn wheel_average_renyi_below_shannon() {
        let og = families::wheel(5, 1.0).unwrap();
        let period = PeriodSpec::infer(og.base()).unwrap();
        let v = average_entropies(
            &og,
            &[EntropyMeasure::Shannon, EntropyMeasure::Renyi(2.0)],
            &period,
            &Quadrature::default(),
        )
        .unwrap();
        assert!(v[1].value < v[0].value);
        assert!(v[0].value > 0.0 && v[0].value <= 5f64.log2());
    }
}
