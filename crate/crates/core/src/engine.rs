//! Scattering amplitudes of open graphs from the family-of-paths system.
//!
//! For every directed edge `i → j` the family `P[i→j]` collects all
//! trajectories that start along that edge and eventually leave through the
//! exit lead at vertex `f`. Arriving at `j` a wave picks up `e^{ikℓ}`, then
//! either leaves through the lead at `f` (`t_j`, only when `j = f`), turns
//! back along the same physical edge (`r_j`), or continues along any other
//! edge at `j` (`t_j`), parallel siblings included:
//!
//! ```text
//! P[i→j] = z (δ_{jf} t_j + r_j P[j→i] + t_j Σ_{e' ∋ j, e' ≠ e} P[j→l(e')])
//! ```
//!
//! The `2e` equations are assembled as `(I − M) P = b` and solved densely.
//! The global amplitude is `σ(f,i) = δ_{fi} r_i + t_i Σ_{i→j} P[i→j]`.

use num_complex::Complex64;
use thiserror::Error;

use crate::graph::{GraphError, OpenGraph, VertexAmplitudes, VertexId};
use crate::linalg::{CMatrix, LuError, LuFactorization};

/// Tolerance on `|Σp − 1|` before a probability vector is rejected.
pub const UNITARITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("vertex {0} carries no lead")]
    NotALeadVertex(VertexId),
    #[error("wavenumber must be positive and finite, got {0}")]
    NonPositiveWavenumber(f64),
    #[error("family-of-paths system singular at k = {k} (exit vertex {exit})")]
    SingularSystem { k: f64, exit: VertexId },
    #[error("channel probabilities sum to 1 + {residual:e}")]
    UnitarityViolation { residual: f64 },
    #[error("entrance channel {entrance} out of range for {channels} channels")]
    BadChannel { entrance: usize, channels: usize },
    #[error("lead coordinates must be non-negative")]
    NegativeCoordinate,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One direction of travel along a physical edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectedEdge {
    pub from: VertexId,
    pub to: VertexId,
    /// Index of the physical edge in the base graph.
    pub edge: usize,
    pub length: f64,
}

/// Directed edges in the canonical order `2s: a→b`, `2s+1: b→a`.
pub fn directed_edges(og: &OpenGraph) -> Vec<DirectedEdge> {
    og.base()
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(s, e)| {
            [
                DirectedEdge {
                    from: e.a,
                    to: e.b,
                    edge: s,
                    length: e.length,
                },
                DirectedEdge {
                    from: e.b,
                    to: e.a,
                    edge: s,
                    length: e.length,
                },
            ]
        })
        .collect()
}

/// `(I − M) P = b` for one exit vertex at one wavenumber.
#[derive(Debug, Clone)]
pub struct PathFamilySystem {
    pub exit_vertex: VertexId,
    pub wavenumber: f64,
    pub matrix: CMatrix,
    pub rhs: Vec<Complex64>,
    pub unknowns: Vec<DirectedEdge>,
}

impl PathFamilySystem {
    pub fn dim(&self) -> usize {
        self.unknowns.len()
    }
}

/// Solution of a [`PathFamilySystem`] with diagnostics.
#[derive(Debug, Clone)]
pub struct FamilySolution {
    pub values: Vec<Complex64>,
    pub residual: f64,
    pub condition_estimate: f64,
}

fn check_k(k: f64) -> Result<(), EngineError> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(EngineError::NonPositiveWavenumber(k))
    }
}

fn phase(k: f64, length: f64) -> Complex64 {
    Complex64::from_polar(1.0, k * length)
}

/// `I − M`, which does not depend on the exit vertex.
fn bounce_matrix(
    unknowns: &[DirectedEdge],
    amps: &[VertexAmplitudes],
    k: f64,
    vertex_count: usize,
) -> CMatrix {
    // outgoing[v] = indices of directed edges leaving v
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); vertex_count + 1];
    for (p, de) in unknowns.iter().enumerate() {
        outgoing[de.from].push(p);
    }
    let n = unknowns.len();
    let mut a = CMatrix::identity(n);
    for (p, de) in unknowns.iter().enumerate() {
        let z = phase(k, de.length);
        let va = amps[de.to - 1];
        for &q in &outgoing[de.to] {
            let coeff = if unknowns[q].edge == de.edge {
                va.r
            } else {
                va.t
            };
            a[(p, q)] -= z * coeff;
        }
    }
    a
}

fn exit_rhs(
    unknowns: &[DirectedEdge],
    amps: &[VertexAmplitudes],
    k: f64,
    exit: VertexId,
) -> Vec<Complex64> {
    unknowns
        .iter()
        .map(|de| {
            if de.to == exit {
                phase(k, de.length) * amps[exit - 1].t
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect()
}

pub fn assemble_system(
    og: &OpenGraph,
    exit: VertexId,
    k: f64,
) -> Result<PathFamilySystem, EngineError> {
    check_k(k)?;
    og.effective_degree(exit)?;
    if !og.has_lead(exit) {
        return Err(EngineError::NotALeadVertex(exit));
    }
    let unknowns = directed_edges(og);
    let amps = og.all_vertex_amplitudes();
    let matrix = bounce_matrix(&unknowns, &amps, k, og.base().vertex_count());
    let rhs = exit_rhs(&unknowns, &amps, k, exit);
    Ok(PathFamilySystem {
        exit_vertex: exit,
        wavenumber: k,
        matrix,
        rhs,
        unknowns,
    })
}

fn singular(err: LuError, k: f64, exit: VertexId) -> EngineError {
    match err {
        LuError::Singular { .. } | LuError::Dimension { .. } => {
            EngineError::SingularSystem { k, exit }
        }
    }
}

pub fn solve_families(sys: &PathFamilySystem) -> Result<FamilySolution, EngineError> {
    let lu = LuFactorization::new(&sys.matrix)
        .map_err(|e| singular(e, sys.wavenumber, sys.exit_vertex))?;
    let values = lu
        .solve(&sys.rhs)
        .map_err(|e| singular(e, sys.wavenumber, sys.exit_vertex))?;
    let residual = sys.matrix.residual_inf(&values, &sys.rhs);
    Ok(FamilySolution {
        values,
        residual,
        condition_estimate: lu.condition_estimate(),
    })
}

/// `δ_{fi} r_i + t_i Σ_{i→j} P[i→j]` given solved families for exit `f`.
fn amplitude_from_families(
    unknowns: &[DirectedEdge],
    families: &[Complex64],
    amps: &[VertexAmplitudes],
    exit: VertexId,
    entrance: VertexId,
) -> Complex64 {
    let va = amps[entrance - 1];
    let sum: Complex64 = unknowns
        .iter()
        .zip(families)
        .filter(|(de, _)| de.from == entrance)
        .map(|(_, p)| *p)
        .sum();
    let direct = if exit == entrance {
        va.r
    } else {
        Complex64::new(0.0, 0.0)
    };
    direct + va.t * sum
}

pub fn scattering_amplitude(
    og: &OpenGraph,
    exit: VertexId,
    entrance: VertexId,
    k: f64,
) -> Result<Complex64, EngineError> {
    og.effective_degree(entrance)?;
    if !og.has_lead(entrance) {
        return Err(EngineError::NotALeadVertex(entrance));
    }
    let sys = assemble_system(og, exit, k)?;
    let sol = solve_families(&sys)?;
    Ok(amplitude_from_families(
        &sys.unknowns,
        &sol.values,
        &og.all_vertex_amplitudes(),
        exit,
        entrance,
    ))
}

/// Global scattering matrix at one wavenumber.
///
/// Entry `(f, i)` is the amplitude to leave through channel `f` after
/// entering through channel `i`; channels are numbered as the graph's leads.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringMatrix {
    pub k: f64,
    channels: usize,
    amplitudes: Vec<Complex64>,
}

impl ScatteringMatrix {
    /// Wraps a channel-major (`f * l + i`) amplitude table.
    pub fn from_amplitudes(k: f64, channels: usize, amplitudes: Vec<Complex64>) -> Self {
        assert_eq!(amplitudes.len(), channels * channels);
        Self {
            k,
            channels,
            amplitudes,
        }
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn get(&self, exit: usize, entrance: usize) -> Complex64 {
        self.amplitudes[exit * self.channels + entrance]
    }

    pub fn column(&self, entrance: usize) -> Vec<Complex64> {
        (0..self.channels).map(|f| self.get(f, entrance)).collect()
    }

    /// `max_i |Σ_f |σ(f,i)|² − 1|`
    pub fn unitarity_defect(&self) -> f64 {
        (0..self.channels)
            .map(|i| {
                let s: f64 = self.column(i).iter().map(|z| z.norm_sqr()).sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `max |σ(f,i) − σ(i,f)|`
    pub fn reciprocity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for f in 0..self.channels {
            for i in 0..f {
                worst = worst.max((self.get(f, i) - self.get(i, f)).norm());
            }
        }
        worst
    }
}

pub fn scattering_matrix(og: &OpenGraph, k: f64) -> Result<ScatteringMatrix, EngineError> {
    check_k(k)?;
    let unknowns = directed_edges(og);
    let amps = og.all_vertex_amplitudes();
    let l = og.channel_count();
    let leads = og.leads();
    let matrix = bounce_matrix(&unknowns, &amps, k, og.base().vertex_count());
    let lu = LuFactorization::new(&matrix).map_err(|e| singular(e, k, leads[0]))?;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); l * l];
    for (fi, &f) in leads.iter().enumerate() {
        let rhs = exit_rhs(&unknowns, &amps, k, f);
        let families = lu.solve(&rhs).map_err(|e| singular(e, k, f))?;
        for (ii, &i) in leads.iter().enumerate() {
            amplitudes[fi * l + ii] = amplitude_from_families(&unknowns, &families, &amps, f, i);
        }
    }
    Ok(ScatteringMatrix {
        k,
        channels: l,
        amplitudes,
    })
}

/// `|σ(f, entrance)|²` for every exit channel, renormalized to sum exactly to 1.
pub fn probabilities(sm: &ScatteringMatrix, entrance: usize) -> Result<Vec<f64>, EngineError> {
    if entrance >= sm.channels {
        return Err(EngineError::BadChannel {
            entrance,
            channels: sm.channels,
        });
    }
    let mut p: Vec<f64> = sm.column(entrance).iter().map(|z| z.norm_sqr()).collect();
    let sum: f64 = p.iter().sum();
    let residual = sum - 1.0;
    if !(residual.abs() <= UNITARITY_TOL) {
        return Err(EngineError::UnitarityViolation { residual });
    }
    for v in &mut p {
        *v /= sum;
    }
    Ok(p)
}

/// Channel probabilities for the graph's own entrance at wavenumber `k`.
pub fn channel_probabilities(og: &OpenGraph, k: f64) -> Result<Vec<f64>, EngineError> {
    probabilities(&scattering_matrix(og, k)?, og.entrance())
}

/// Scattering Green's function on the leads, natural units `m = ħ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensValue {
    pub value: Complex64,
    pub x_entrance: f64,
    pub x_exit: f64,
}

/// `(1/(ik)) [δ_{fi} e^{ik|x_f − x_i|} + σ(f,i) e^{ik(x_f + x_i)}]`
pub fn greens_function(
    og: &OpenGraph,
    exit: VertexId,
    entrance: VertexId,
    k: f64,
    x_entrance: f64,
    x_exit: f64,
) -> Result<GreensValue, EngineError> {
    if !(x_entrance >= 0.0 && x_exit >= 0.0) {
        return Err(EngineError::NegativeCoordinate);
    }
    let sigma = scattering_amplitude(og, exit, entrance, k)?;
    Ok(GreensValue {
        value: greens_from_amplitude(sigma, exit == entrance, k, x_entrance, x_exit),
        x_entrance,
        x_exit,
    })
}

/// Green's function value from a known amplitude.
pub fn greens_from_amplitude(
    sigma: Complex64,
    same_channel: bool,
    k: f64,
    x_entrance: f64,
    x_exit: f64,
) -> Complex64 {
    let ik = Complex64::new(0.0, k);
    let free = if same_channel {
        phase(k, (x_exit - x_entrance).abs())
    } else {
        Complex64::new(0.0, 0.0)
    };
    (free + sigma * phase(k, x_exit.abs() + x_entrance.abs())) / ik
}
