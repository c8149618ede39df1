use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

use super::{fmt_float, FamilyName, SweepError, NA};
use crate::closed_forms::{
    complete_amplitudes, cycle_amplitudes, parallel_identical, pvv_equal, series_identical_or_chain,
    wheel_amplitudes, ClosedFormError, Ends,
};

/// Entrance column `σ(·, 1)` of the unit-length family member, in lead
/// order, from the closed forms. `kℓ = k`.
pub fn closed_form_amplitudes(
    family: FamilyName,
    n: usize,
    k: f64,
) -> Result<Vec<Complex64>, ClosedFormError> {
    let z = Complex64::from_polar(1.0, k);
    let bad = |detail: String| ClosedFormError::BadArgument {
        formula: family.as_str(),
        detail,
    };
    if n < family.min_size() {
        return Err(bad(format!("n = {n}")));
    }
    Ok(match family {
        FamilyName::Series => {
            let tp = series_identical_or_chain(pvv_equal(z)?, n, z)?;
            vec![tp.r, tp.t]
        }
        FamilyName::Parallel => {
            let tp = parallel_identical(pvv_equal(z)?, n, z, Ends::Neumann)?;
            vec![tp.r, tp.t]
        }
        FamilyName::Pvv => {
            let tp = pvv_equal(z)?;
            vec![tp.r, tp.t]
        }
        FamilyName::Cycle => (1..=n)
            .map(|v| cycle_amplitudes(n, v, z))
            .collect::<Result<_, _>>()?,
        FamilyName::Wheel => {
            let (r, t) = wheel_amplitudes(n, z)?;
            std::iter::once(r).chain(std::iter::repeat_n(t, n - 1)).collect()
        }
        FamilyName::Complete => {
            let (r, t) = complete_amplitudes(n, z)?;
            std::iter::once(r).chain(std::iter::repeat_n(t, n - 1)).collect()
        }
    })
}

fn channels(family: FamilyName, n: usize) -> usize {
    match family {
        FamilyName::Series | FamilyName::Parallel | FamilyName::Pvv => 2,
        _ => n,
    }
}

/// Closed-form amplitudes at `kℓ = 2π(j + ½)/samples`, `j = 0..samples`.
/// Columns `k, p_1..p_l, sigma_j_re, sigma_j_im`; degenerate points are `NA`.
pub fn run_closed_form<W: Write>(
    family: FamilyName,
    n: usize,
    samples: usize,
    out: &mut W,
) -> Result<usize, SweepError> {
    if samples == 0 {
        return Err(SweepError::BadConfig("z-samples must be positive".into()));
    }
    family.build(n)?;
    let l = channels(family, n);
    let mut header = vec!["k".to_string()];
    header.extend((1..=l).map(|j| format!("p_{j}")));
    for j in 1..=l {
        header.push(format!("sigma_{j}_re"));
        header.push(format!("sigma_{j}_im"));
    }
    writeln!(out, "{}", header.join(","))?;
    let mut na_rows = 0;
    for j in 0..samples {
        let k = 2.0 * PI * (j as f64 + 0.5) / samples as f64;
        let mut cells = vec![fmt_float(k)];
        match closed_form_amplitudes(family, n, k) {
            Ok(sigma) => {
                cells.extend(sigma.iter().map(|s| fmt_float(s.norm_sqr())));
                for s in &sigma {
                    cells.push(fmt_float(s.re));
                    cells.push(fmt_float(s.im));
                }
            }
            Err(_) => {
                na_rows += 1;
                cells.extend(std::iter::repeat_n(NA.to_string(), 3 * l));
            }
        }
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(na_rows)
}
