use std::f64::consts::{PI, SQRT_2};
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{closed_form_amplitudes, fmt_float, FamilyName, RunOptions, SweepError};
use crate::closed_forms::{cycle_beta, pvv_two_edge, ClosedFormError};
use crate::engine::{scattering_matrix, EngineError};
use crate::families;
use crate::graph::OpenGraph;

/// Largest accepted `|σ_engine − σ_closed|`.
pub const VALIDATION_TOL: f64 = 1e-8;
/// Cycle samples with `|β|` below this are skipped as branch-degenerate.
pub const CYCLE_BETA_EXCLUSION: f64 = 1e-3;
/// Second edge length of the unequal two-edge check.
const UNEQUAL_LENGTH: f64 = SQRT_2;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationEntry {
    pub family: String,
    pub n: usize,
    pub max_delta: f64,
    pub compared: usize,
    pub excluded: usize,
}

impl ValidationEntry {
    pub fn passed(&self) -> bool {
        self.max_delta <= VALIDATION_TOL && self.compared > 0
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub entries: Vec<ValidationEntry>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(ValidationEntry::passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "family,n,max_abs_delta,compared,excluded,status")?;
        for e in &self.entries {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                e.family,
                e.n,
                fmt_float(e.max_delta),
                e.compared,
                e.excluded,
                if e.passed() { "pass" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

/// `max_j max_f |σ_engine(f, entrance; k_j) − closed(k_j)[f]|` over
/// `k_j = 2π(j + ½)/samples`. Samples where the closed form declines or the
/// engine is singular are counted as excluded.
pub fn compare_with_engine<F>(
    og: &OpenGraph,
    entrance: usize,
    samples: usize,
    closed: F,
) -> Result<(f64, usize, usize), SweepError>
where
    F: Fn(f64) -> Result<Vec<Complex64>, ClosedFormError>,
{
    let (mut worst, mut compared, mut excluded) = (0.0f64, 0, 0);
    for j in 0..samples {
        let k = 2.0 * PI * (j as f64 + 0.5) / samples as f64;
        let Ok(expected) = closed(k) else {
            excluded += 1;
            continue;
        };
        let sm = match scattering_matrix(og, k) {
            Ok(sm) => sm,
            Err(EngineError::SingularSystem { .. }) => {
                excluded += 1;
                continue;
            }
            Err(source) => return Err(SweepError::EngineFailure { k, source }),
        };
        let column = sm.column(entrance);
        if column.len() != expected.len() {
            return Err(SweepError::BadConfig(format!(
                "closed form gives {} channels, graph has {}",
                expected.len(),
                column.len()
            )));
        }
        for (a, b) in column.iter().zip(&expected) {
            worst = worst.max((a - b).norm());
        }
        compared += 1;
    }
    Ok((worst, compared, excluded))
}

/// Engine against closed forms for one family member; `pvv` also checks the
/// unequal-length form.
pub fn validate_family(
    family: FamilyName,
    n: usize,
    samples: usize,
) -> Result<Vec<ValidationEntry>, SweepError> {
    let og = family.build(n)?;
    let closed = |k: f64| {
        if family == FamilyName::Cycle && cycle_beta(Complex64::from_polar(1.0, k)).norm() < CYCLE_BETA_EXCLUSION {
            return Err(ClosedFormError::DegenerateBranch {
                formula: "cycle_amplitudes",
                modulus: 0.0,
            });
        }
        closed_form_amplitudes(family, n, k)
    };
    let (max_delta, compared, excluded) = compare_with_engine(&og, og.entrance(), samples, closed)?;
    let mut out = vec![ValidationEntry {
        family: family.to_string(),
        n,
        max_delta,
        compared,
        excluded,
    }];
    if family == FamilyName::Pvv {
        let og = families::two_edge(1.0, UNEQUAL_LENGTH)?;
        let (max_delta, compared, excluded) = compare_with_engine(&og, 0, samples, |k| {
            let tp = pvv_two_edge(
                Complex64::from_polar(1.0, 0.5 * k),
                Complex64::from_polar(1.0, 0.5 * k * UNEQUAL_LENGTH),
            )?;
            Ok(vec![tp.r, tp.t])
        })?;
        out.push(ValidationEntry {
            family: "pvv_unequal".into(),
            n,
            max_delta,
            compared,
            excluded,
        });
    }
    Ok(out)
}

/// Validates `families` over `sizes` (each family's default range when `None`).
pub fn run_validate<W: Write>(
    selected: &[FamilyName],
    sizes: Option<(usize, usize)>,
    samples: usize,
    opts: &RunOptions,
    out: &mut W,
) -> Result<ValidationReport, SweepError> {
    let mut jobs = Vec::new();
    for &family in selected {
        let range = match sizes {
            Some((lo, hi)) => lo.max(family.min_size())..=hi,
            None => family.default_sizes(),
        };
        jobs.extend(range.map(|n| (family, n)));
    }
    let entries = opts.install(|| {
        jobs.par_iter()
            .map(|&(family, n)| validate_family(family, n, samples))
            .collect::<Result<Vec<_>, _>>()
    })??;
    let report = ValidationReport {
        entries: entries.into_iter().flatten().collect(),
    };
    report.write_csv(out)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_members_pass() {
        for (family, n) in [
            (FamilyName::Cycle, 5),
            (FamilyName::Cycle, 6),
            (FamilyName::Wheel, 5),
            (FamilyName::Complete, 4),
            (FamilyName::Series, 3),
            (FamilyName::Parallel, 3),
            (FamilyName::Pvv, 1),
        ] {
            for e in validate_family(family, n, 64).unwrap() {
                assert!(e.passed(), "{e:?}");
            }
        }
    }

    #[test]
    fn corrupted_closed_form_fails() {
        let og = families::wheel(5, 1.0).unwrap();
        let (delta, compared, _) = compare_with_engine(&og, 0, 32, |k| {
            let mut s = closed_form_amplitudes(FamilyName::Wheel, 5, k)?;
            s[0] += 1e-6;
            Ok(s)
        })
        .unwrap();
        let report = ValidationReport {
            entries: vec![ValidationEntry {
                family: "wheel".into(),
                n: 5,
                max_delta: delta,
                compared,
                excluded: 0,
            }],
        };
        assert!(!report.passed());
        assert_eq!(report.exit_code(), 1);
    }
}
