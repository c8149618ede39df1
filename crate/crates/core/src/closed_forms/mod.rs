//! Analytic scattering amplitudes for series/parallel layouts, cycles,
//! wheels and complete graphs with Neumann vertices.
//!
//! Each family defines its own phase variable; see [`PhaseConvention`].
//! The engine in [`crate::engine`] is the reference these formulas are
//! validated against.

mod cycle;
mod parallel;
mod series;
mod symmetric;

pub use cycle::{cycle_amplitudes, cycle_beta, cycle_probabilities};
pub use parallel::{parallel_identical, parallel_pair, pvv_equal, pvv_two_edge, Ends};
pub use series::{series_chain, series_identical, series_identical_or_chain, series_pair};
pub use symmetric::{complete_amplitudes, wheel_amplitudes};

use num_complex::Complex64;
use thiserror::Error;

use crate::graph::VertexAmplitudes;

/// Relative size below which a denominator counts as zero.
pub const DENOMINATOR_RTOL: f64 = 1e-12;
/// Discriminant modulus below which the two branches are indistinguishable.
pub const BRANCH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosedFormError {
    #[error("{formula}: denominator vanishes (step {step})")]
    DenominatorVanishes { formula: &'static str, step: usize },
    #[error("{formula}: branch-degenerate point (|discriminant| = {modulus:e})")]
    DegenerateBranch {
        formula: &'static str,
        modulus: f64,
    },
    #[error("{formula}: unsupported size or label ({detail})")]
    BadArgument {
        formula: &'static str,
        detail: String,
    },
}

/// Reflection and transmission amplitude of a subgraph seen as a scatterer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPort {
    pub r: Complex64,
    pub t: Complex64,
}

impl TwoPort {
    pub fn new(r: Complex64, t: Complex64) -> Self {
        Self { r, t }
    }

    pub fn real(r: f64, t: f64) -> Self {
        Self::new(Complex64::new(r, 0.0), Complex64::new(t, 0.0))
    }

    /// `|R|² + |T|²`
    pub fn flux(&self) -> f64 {
        self.r.norm_sqr() + self.t.norm_sqr()
    }

    pub fn probabilities(&self) -> [f64; 2] {
        [self.r.norm_sqr(), self.t.norm_sqr()]
    }
}

impl From<VertexAmplitudes> for TwoPort {
    fn from(v: VertexAmplitudes) -> Self {
        Self::new(v.r, v.t)
    }
}

impl From<TwoPort> for VertexAmplitudes {
    fn from(tp: TwoPort) -> Self {
        VertexAmplitudes::new(tp.r, tp.t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Series,
    Parallel,
    TwoEdge,
    TwoEdgeEqual,
    Cycle,
    Wheel,
    Complete,
}

/// Which length the phase variable `z` of a formula is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseVariable {
    /// `z = e^{ikℓ}`
    FullEdge,
    /// `z_j = e^{ikℓ_j/2}`, half of each parallel edge.
    HalfEdge,
}

/// The phase variable a closed-form family expects.
///
/// * series, parallel bundles, cycles, wheels, complete graphs and the
///   equal-length two-edge block: `z = e^{ikℓ}`;
/// * the general two-edge block: `z_j = e^{ikℓ_j/2}` per edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseConvention {
    pub family: Family,
    pub variable: PhaseVariable,
}

impl PhaseConvention {
    pub const fn of(family: Family) -> Self {
        let variable = match family {
            Family::TwoEdge => PhaseVariable::HalfEdge,
            _ => PhaseVariable::FullEdge,
        };
        Self { family, variable }
    }

    pub fn phase(&self, k: f64, length: f64) -> Complex64 {
        match self.variable {
            PhaseVariable::FullEdge => Complex64::from_polar(1.0, k * length),
            PhaseVariable::HalfEdge => Complex64::from_polar(1.0, 0.5 * k * length),
        }
    }
}

/// `z = z_half²`, exact on the unit circle up to rounding.
pub fn half_to_full(z_half: Complex64) -> Complex64 {
    z_half * z_half
}

#[cfg(test)]
fn unit(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// `num / den`, rejecting `den` that is negligible against `scale`.
fn checked_div(
    num: Complex64,
    den: Complex64,
    scale: f64,
    formula: &'static str,
    step: usize,
) -> Result<Complex64, ClosedFormError> {
    if den.norm() < DENOMINATOR_RTOL * scale.max(1.0) || !den.is_finite() {
        Err(ClosedFormError::DenominatorVanishes { formula, step })
    } else {
        Ok(num / den)
    }
}
