//! Wheel `W_n` (hub entrance) and complete graph `K_n`, one lead per vertex.

use num_complex::Complex64;

use super::{checked_div, ClosedFormError};

/// Hub reflection and the common hub-to-rim transmission of `W_n`.
///
/// `D = 2n + (n−2)(z² − z³)`, `R = [4 − n(2 + z² − z³)]/D`, `T = 2z(1 + z)/D`.
pub fn wheel_amplitudes(n: usize, z: Complex64) -> Result<(Complex64, Complex64), ClosedFormError> {
    if n < 4 {
        return Err(ClosedFormError::BadArgument {
            formula: "wheel_amplitudes",
            detail: format!("n = {n} < 4"),
        });
    }
    let nf = n as f64;
    let (z2, z3) = (z * z, z * z * z);
    let den = 2.0 * nf + (nf - 2.0) * (z2 - z3);
    let inv = checked_div(Complex64::new(1.0, 0.0), den, 4.0 * nf, "wheel_amplitudes", n)?;
    Ok((
        (4.0 - nf * (2.0 + z2 - z3)) * inv,
        2.0 * z * (1.0 + z) * inv,
    ))
}

/// Reflection and transmission of `K_n`, the same for every entrance.
///
/// `D = n² − n(n−4)z + (n−2)²(z² − z³)`,
/// `R = (n−2)[(n−4)z − n(1 + z² − z³)]/D`, `T = 4z(1 + z)/D`.
pub fn complete_amplitudes(n: usize, z: Complex64) -> Result<(Complex64, Complex64), ClosedFormError> {
    if n < 2 {
        return Err(ClosedFormError::BadArgument {
            formula: "complete_amplitudes",
            detail: format!("n = {n} < 2"),
        });
    }
    let nf = n as f64;
    let (z2, z3) = (z * z, z * z * z);
    let den = nf * nf - nf * (nf - 4.0) * z + (nf - 2.0) * (nf - 2.0) * (z2 - z3);
    let scale = 3.0 * nf * nf;
    let inv = checked_div(Complex64::new(1.0, 0.0), den, scale, "complete_amplitudes", n)?;
    Ok((
        (nf - 2.0) * ((nf - 4.0) * z - nf * (1.0 + z2 - z3)) * inv,
        4.0 * z * (1.0 + z) * inv,
    ))
}
