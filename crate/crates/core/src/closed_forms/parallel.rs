//! Scatterers hung in parallel between two lead vertices.

use num_complex::Complex64;

use super::{checked_div, ClosedFormError, TwoPort};

/// Amplitudes of the two lateral (lead) vertices of a parallel bundle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ends {
    /// Neumann vertices of degree `n + 1`: `r = −(n−1)/(n+1)`, `t = 2/(n+1)`.
    Neumann,
    Custom(TwoPort),
}

fn c_term(
    ends: TwoPort,
    m: (TwoPort, Complex64),
    other: (TwoPort, Complex64),
) -> Complex64 {
    let (r, t) = (ends.r, ends.t);
    let (rm, tm, zm) = (m.0.r, m.0.t, m.1);
    let (rn, tn, zn) = (other.0.r, other.0.t, other.1);
    let zm2 = zm * zm;
    let zn2 = zn * zn;
    let dm = rm * rm - tm * tm;
    let dn = rn * rn - tn * tn;
    (rm - r * dm * zm2 + r * (r - t) * rm * dn * zn2 * zn2
        + (2.0 * r * r - r * t - t * t) * dm * rn * zm2 * zn2)
        * zm2
}

/// Diamond layout: lead vertices with amplitudes `ends`, inner vertices
/// `a` and `b` at phases `z₁ = e^{ikℓ₁}`, `z₂ = e^{ikℓ₂}` from both ends.
///
/// For the two-edge block (inner vertices at edge midpoints) pass
/// `z_j = e^{ikℓ_j/2}`.
pub fn parallel_pair(
    ends: TwoPort,
    a: TwoPort,
    b: TwoPort,
    z1: Complex64,
    z2: Complex64,
) -> Result<TwoPort, ClosedFormError> {
    let (r, t) = (ends.r, ends.t);
    let (r1, t1, r2, t2) = (a.r, a.t, b.r, b.t);
    let z1s = z1 * z1;
    let z2s = z2 * z2;
    let zz = z1s * z2s;
    let dr = r * r - t * t;
    let first = 1.0 - r * (r1 * z1s + r2 * z2s) + dr * (r1 * r2 + t1 * t2) * zz;
    let second = r * (t1 * z1s + t2 * z2s) - dr * (r1 * t2 + t1 * r2) * zz;
    let den = first * first - second * second;
    let scale = first.norm_sqr() + second.norm_sqr();

    let d1 = r1 * r1 - t1 * t1;
    let d2 = r2 * r2 - t2 * t2;
    let refl_num = c_term(ends, (a, z1), (b, z2))
        + c_term(ends, (b, z2), (a, z1))
        + 2.0 * (t * t1 * t2 - (2.0 * r - t) * r1 * r2) * zz
        - 2.0 * ((r + t) * (r - t) * (r - t) * d1 * d2) * zz * zz;
    let trans_num = t1 * z1s + t2 * z2s - 2.0 * (r - t) * (r1 * t2 + r2 * t1) * zz
        + (r - t) * (r - t) * (d1 * t2 * z1s + t1 * d2 * z2s) * zz;

    let inv = checked_div(Complex64::new(1.0, 0.0), den, scale, "parallel_pair", 0)?;
    Ok(TwoPort::new(
        r + t * t * refl_num * inv,
        t * t * trans_num * inv,
    ))
}

/// Two vertices joined by edges of lengths `ℓ₁`, `ℓ₂`, each vertex with a
/// lead (Neumann, degree 3); `z_j = e^{ikℓ_j/2}`.
///
/// ```text
/// R = −[3 + (z₁² − z₂²)² − 3(2 − z₁²z₂²)z₁²z₂²] / D
/// T = 4[(1 − z₂⁴)z₁² + (1 − z₁⁴)z₂²] / D
/// D = (3 − z₁²z₂²)² − (z₁² + z₂²)²
/// ```
///
/// The reflection carries an overall minus sign; it is the Neumann
/// specialization of [`parallel_pair`] and reduces to [`pvv_equal`].
pub fn pvv_two_edge(z1: Complex64, z2: Complex64) -> Result<TwoPort, ClosedFormError> {
    let a = z1 * z1;
    let b = z2 * z2;
    let ab = a * b;
    let den = (3.0 - ab) * (3.0 - ab) - (a + b) * (a + b);
    let inv = checked_div(Complex64::new(1.0, 0.0), den, 9.0, "pvv_two_edge", 0)?;
    let refl = -(3.0 + (a - b) * (a - b) - 3.0 * (2.0 - ab) * ab) * inv;
    let trans = 4.0 * ((1.0 - b * b) * a + (1.0 - a * a) * b) * inv;
    Ok(TwoPort::new(refl, trans))
}

/// Equal-length two-edge block, `z = e^{ikℓ}`:
/// `ℛ = −3(1 − z²)/(9 − z²)`, `𝒯 = 8z/(9 − z²)`.
pub fn pvv_equal(z: Complex64) -> Result<TwoPort, ClosedFormError> {
    let z2 = z * z;
    let inv = checked_div(Complex64::new(1.0, 0.0), 9.0 - z2, 9.0, "pvv_equal", 0)?;
    Ok(TwoPort::new(-3.0 * (1.0 - z2) * inv, 8.0 * z * inv))
}

/// `n` identical blocks `(ℛ, 𝒯)` between two lead vertices, each block on
/// links of phase `z`.
///
/// With `s = r + (n−1)t` and `D = (1 − sℛz²)² − (s𝒯z²)²`:
/// `R = r + n t² [ℛ − s(ℛ² − 𝒯²)z²] z² / D`, `T = n t² 𝒯 z² / D`.
pub fn parallel_identical(
    block: TwoPort,
    n: usize,
    z: Complex64,
    ends: Ends,
) -> Result<TwoPort, ClosedFormError> {
    if n == 0 {
        return Err(ClosedFormError::BadArgument {
            formula: "parallel_identical",
            detail: "n must be at least 1".into(),
        });
    }
    let (rb, tb) = (block.r, block.t);
    let z2 = z * z;
    let nf = n as f64;
    match ends {
        Ends::Neumann => {
            let lhs = nf + 1.0 - (nf - 1.0) * rb * z2;
            let rhs2 = (nf - 1.0) * (nf - 1.0) * tb * tb * z2 * z2;
            let den = lhs * lhs - rhs2;
            let scale = lhs.norm_sqr() + rhs2.norm();
            let inv = checked_div(Complex64::new(1.0, 0.0), den, scale, "parallel_identical", n)?;
            let refl = -((nf * nf - 1.0) * (1.0 + (rb * rb - tb * tb) * z2 * z2)
                - 2.0 * (nf * nf + 1.0) * rb * z2)
                * inv;
            let trans = 4.0 * nf * tb * z2 * inv;
            Ok(TwoPort::new(refl, trans))
        }
        Ends::Custom(e) => {
            let s = e.r + (nf - 1.0) * e.t;
            let first = 1.0 - s * rb * z2;
            let second = s * tb * z2;
            let den = first * first - second * second;
            let scale = first.norm_sqr() + second.norm_sqr();
            let inv = checked_div(Complex64::new(1.0, 0.0), den, scale, "parallel_identical", n)?;
            let refl = e.r + nf * e.t * e.t * (rb - s * (rb * rb - tb * tb) * z2) * z2 * inv;
            let trans = nf * e.t * e.t * tb * z2 * inv;
            Ok(TwoPort::new(refl, trans))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::unit;
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn equal_block_transparent_at_z_one() {
        let tp = pvv_equal(unit(0.0)).unwrap();
        assert!(tp.r.norm() < 1e-15);
        assert!(close(tp.t, Complex64::new(1.0, 0.0), 1e-15));
    }

    #[test]
    fn equal_block_value_at_quarter_period() {
        // z = i: ℛ = −3·2/10, 𝒯 = 8i/10
        let tp = pvv_equal(unit(std::f64::consts::FRAC_PI_2)).unwrap();
        assert!(close(tp.r, Complex64::new(-0.6, 0.0), 1e-15));
        assert!(close(tp.t, Complex64::new(0.0, 0.8), 1e-15));
    }

    #[test]
    fn two_edge_reduces_to_equal() {
        // z = 1 is a removable 0/0 of the two-edge form
        for i in 1..50 {
            let theta = 0.13 * i as f64;
            let half = unit(theta / 2.0);
            let a = pvv_two_edge(half, half).unwrap();
            let b = pvv_equal(unit(theta)).unwrap();
            assert!(close(a.r, b.r, 1e-12) && close(a.t, b.t, 1e-12), "θ={theta}");
        }
    }

    #[test]
    fn neumann_pair_is_two_edge_block() {
        let ends = TwoPort::real(-1.0 / 3.0, 2.0 / 3.0);
        let mid = TwoPort::real(0.0, 1.0);
        for i in 0..50 {
            let z1 = unit(0.11 * i as f64);
            let z2 = unit(0.07 * i as f64 + 0.3);
            let a = parallel_pair(ends, mid, mid, z1, z2).unwrap();
            let b = pvv_two_edge(z1, z2).unwrap();
            assert!(close(a.r, b.r, 1e-10) && close(a.t, b.t, 1e-10));
        }
    }

    #[test]
    fn pair_symmetric_under_branch_swap() {
        let ends = TwoPort::new(Complex64::new(-0.2, 0.1), Complex64::new(0.5, 0.3));
        let a = TwoPort::new(Complex64::new(0.1, 0.4), Complex64::new(0.7, -0.1));
        let b = TwoPort::new(Complex64::new(-0.3, 0.0), Complex64::new(0.2, 0.6));
        let (z1, z2) = (unit(0.4), unit(1.9));
        let x = parallel_pair(ends, a, b, z1, z2).unwrap();
        let y = parallel_pair(ends, b, a, z2, z1).unwrap();
        assert!(close(x.r, y.r, 1e-14) && close(x.t, y.t, 1e-14));
    }

    #[test]
    fn two_edge_unitary_on_circle() {
        for i in 0..100 {
            let tp = pvv_two_edge(unit(0.061 * i as f64 + 0.01), unit(0.173 * i as f64 + 0.2)).unwrap();
            assert!((tp.flux() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn neumann_ends_match_general_form() {
        for n in 1..=8 {
            let nf = n as f64;
            let ends = TwoPort::real(-(nf - 1.0) / (nf + 1.0), 2.0 / (nf + 1.0));
            for i in 0..30 {
                let theta = 0.21 * i as f64 + 0.05;
                let block = pvv_equal(unit(theta)).unwrap();
                let a = parallel_identical(block, n, unit(theta), Ends::Neumann).unwrap();
                let b = parallel_identical(block, n, unit(theta), Ends::Custom(ends)).unwrap();
                assert!(close(a.r, b.r, 1e-12) && close(a.t, b.t, 1e-12));
                assert!((a.flux() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn zero_blocks_rejected() {
        assert!(parallel_identical(TwoPort::real(0.0, 1.0), 0, unit(0.1), Ends::Neumann).is_err());
    }
}
