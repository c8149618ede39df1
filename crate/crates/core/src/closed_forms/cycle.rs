//! Cycle `C_n` with a lead on every vertex, entrance at vertex 1.
//!
//! With `β = √(9 − 10z² + z⁴)` and `μ± = 3 + z² ± β`, the half-integer powers
//! `√(μ±^m)` are evaluated as `(√μ±)^m` with the principal root. Under that
//! reading both the reflection and transmission are invariant under
//! `β → −β` and under the sign of either root, so no tracking along a sweep
//! is needed. Vertices past the midpoint use the mirror label `n − v + 2`.
//!
//! The even-`n` transmission carries the prefactor `2^{2v−1}`; the variant
//! `2^{4v−1}` disagrees with the path-sum engine by a factor `4^v`.

use num_complex::Complex64;

use super::{checked_div, ClosedFormError, BRANCH_TOL};

pub fn cycle_beta(z: Complex64) -> Complex64 {
    let z2 = z * z;
    (9.0 - 10.0 * z2 + z2 * z2).sqrt()
}

/// `σ^{(v,1)}` on `C_n`; `v = 1` is the reflection amplitude.
pub fn cycle_amplitudes(n: usize, v: usize, z: Complex64) -> Result<Complex64, ClosedFormError> {
    if n < 3 || v == 0 || v > n {
        return Err(ClosedFormError::BadArgument {
            formula: "cycle_amplitudes",
            detail: format!("n = {n}, v = {v}"),
        });
    }
    let v = if v > 1 && v > (n + 2) / 2 { n - v + 2 } else { v };
    let z2 = z * z;
    // β² = (z² − 1)(z² − 9); test the square, β itself only falls off like √ε
    let disc = 9.0 - 10.0 * z2 + z2 * z2;
    if disc.norm() < BRANCH_TOL {
        return Err(ClosedFormError::DegenerateBranch {
            formula: "cycle_amplitudes",
            modulus: disc.norm(),
        });
    }
    let beta = disc.sqrt();
    let mp = 3.0 + z2 + beta;
    let mm = 3.0 + z2 - beta;
    let (a, b) = (mp.sqrt(), mm.sqrt());
    let p = |m: usize| a.powi(m as i32);
    let q = |m: usize| b.powi(m as i32);
    let one = Complex64::new(1.0, 0.0);

    if n % 2 == 1 {
        let lhs = a * q(n) * (mm + 4.0 * z);
        let rhs = p(n) * b * (mp + 4.0 * z);
        let den = (3.0 - z) * (lhs - rhs);
        let scale = 4.0 * (lhs.norm() + rhs.norm());
        let inv = checked_div(one, den, scale, "cycle_amplitudes", n)?;
        if v == 1 {
            let cp = 2.0 + 3.0 * mm + 4.0 * z - 6.0 * z2;
            let cm = 2.0 + 3.0 * mp + 4.0 * z - 6.0 * z2;
            return Ok((p(n) * b * (mp + cp * z) - a * q(n) * (mm + cm * z)) * inv);
        }
        let vi = v as i32;
        let pre = 2f64.powi(2 * vi - 3) * z.powi(vi - 2) * (1.0 + z) * (mp * mm).powi(-vi);
        let body = (4.0 * z - mp) * p(2 * v + 1) * q(n + 4) - (4.0 * z - mm) * p(n + 4) * q(2 * v + 1);
        Ok(pre * body * inv)
    } else {
        let diff = p(n) - q(n);
        let den = (9.0 - z2) * mp * mm * diff;
        let scale = 10.0 * (mp * mm).norm() * (p(n).norm() + q(n).norm());
        let inv = checked_div(one, den, scale, "cycle_amplitudes", n)?;
        if v == 1 {
            let cp = 14.0 + 3.0 * mp - 6.0 * z2;
            let cm = 14.0 + 3.0 * mm - 6.0 * z2;
            return Ok((mp * q(n) * (3.0 * mm + cp * z2) - mm * p(n) * (3.0 * mp + cm * z2)) * inv);
        }
        let vi = v as i32;
        let m = n + 2 - 2 * v;
        let pre = 2f64.powi(2 * vi - 1) * z.powi(vi - 1) * beta * mp * mm;
        Ok(pre * (p(m) + q(m)) * inv)
    }
}

/// `|σ^{(v,1)}|²` for `v = 1..=n`, in vertex order.
pub fn cycle_probabilities(n: usize, z: Complex64) -> Result<Vec<f64>, ClosedFormError> {
    (1..=n)
        .map(|v| cycle_amplitudes(n, v, z).map(|s| s.norm_sqr()))
        .collect()
}
