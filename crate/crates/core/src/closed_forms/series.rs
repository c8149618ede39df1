//! Vertices and renormalized blocks joined in series by links of phase `z`.

use num_complex::Complex64;

use super::{checked_div, ClosedFormError, TwoPort, BRANCH_TOL};

/// Two scatterers joined by one link, seen from the first one's free side.
///
/// `R = r₁ + t₁² r₂ z² / (1 − r₁ r₂ z²)`, `T = t₁ t₂ z / (1 − r₁ r₂ z²)`.
pub fn series_pair(a: TwoPort, b: TwoPort, z: Complex64) -> Result<TwoPort, ClosedFormError> {
    let z2 = z * z;
    let loop_gain = a.r * b.r * z2;
    let den = Complex64::new(1.0, 0.0) - loop_gain;
    let scale = 1.0 + loop_gain.norm();
    let inv = checked_div(Complex64::new(1.0, 0.0), den, scale, "series_pair", 1)?;
    Ok(TwoPort::new(
        a.r + a.t * a.t * b.r * z2 * inv,
        a.t * b.t * z * inv,
    ))
}

/// Symmetric blocks joined by links of phase `z`, seen from the first
/// element's free side. Partial composites are not mirror-symmetric, so the
/// fold carries both of their reflections.
pub fn series_chain(elements: &[TwoPort], z: Complex64) -> Result<TwoPort, ClosedFormError> {
    let (first, rest) = elements
        .split_first()
        .ok_or_else(|| ClosedFormError::BadArgument {
            formula: "series_chain",
            detail: "empty chain".into(),
        })?;
    let z2 = z * z;
    // (reflection from the left, from the right, transmission)
    let (mut left, mut right, mut t) = (first.r, first.r, first.t);
    for (idx, el) in rest.iter().enumerate() {
        let loop_gain = right * el.r * z2;
        let scale = 1.0 + loop_gain.norm();
        let inv = checked_div(Complex64::new(1.0, 0.0), 1.0 - loop_gain, scale, "series_chain", idx + 1)?;
        left += t * t * el.r * z2 * inv;
        right = el.r + el.t * el.t * right * z2 * inv;
        t = t * el.t * z * inv;
    }
    Ok(TwoPort::new(left, t))
}

/// `n` identical symmetric blocks `(ℛ, 𝒯)` in series.
///
/// With `Λ± = 1 + (𝒯² − ℛ²)z² ± √(1 − 2(ℛ² + 𝒯²)z² + (ℛ² − 𝒯²)²z⁴)`:
///
/// ```text
/// R = 2(Λ₊ⁿ − Λ₋ⁿ)ℛ / D,   T = 2ⁿ(Λ₊ − Λ₋)𝒯ⁿzⁿ⁻¹ / D,
/// D = (2 − Λ₋)Λ₊ⁿ − (2 − Λ₊)Λ₋ⁿ
/// ```
///
/// Both ratios are symmetric under `Λ₊ ↔ Λ₋`, so the root's branch is irrelevant.
pub fn series_identical(block: TwoPort, n: usize, z: Complex64) -> Result<TwoPort, ClosedFormError> {
    if n == 0 {
        return Err(ClosedFormError::BadArgument {
            formula: "series_identical",
            detail: "n must be at least 1".into(),
        });
    }
    let (r, t) = (block.r, block.t);
    let z2 = z * z;
    let (r2, t2) = (r * r, t * t);
    let disc = (1.0 - 2.0 * (r2 + t2) * z2 + (r2 - t2) * (r2 - t2) * z2 * z2).sqrt();
    if disc.norm() < BRANCH_TOL {
        return Err(ClosedFormError::DegenerateBranch {
            formula: "series_identical",
            modulus: disc.norm(),
        });
    }
    let base = 1.0 + (t2 - r2) * z2;
    let lp = base + disc;
    let lm = base - disc;
    let ni = n as i32;
    let (lpn, lmn) = (lp.powi(ni), lm.powi(ni));
    let den = (2.0 - lm) * lpn - (2.0 - lp) * lmn;
    let scale = (2.0 - lm).norm() * lpn.norm() + (2.0 - lp).norm() * lmn.norm();
    let inv = checked_div(Complex64::new(1.0, 0.0), den, scale, "series_identical", n)?;
    let refl = 2.0 * (lpn - lmn) * r * inv;
    let trans = 2f64.powi(ni) * (lp - lm) * t.powi(ni) * z.powi(ni - 1) * inv;
    Ok(TwoPort::new(refl, trans))
}

/// [`series_identical`], falling back to [`series_chain`] at degenerate branches.
pub fn series_identical_or_chain(
    block: TwoPort,
    n: usize,
    z: Complex64,
) -> Result<TwoPort, ClosedFormError> {
    match series_identical(block, n, z) {
        Err(ClosedFormError::DegenerateBranch { .. }) => series_chain(&vec![block; n], z),
        other => other,
    }
}
