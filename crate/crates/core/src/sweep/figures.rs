//! Built-in figure datasets, one CSV per figure. Sweeps cover
//! `kℓ ∈ (0, 4π]` with unit lengths.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use super::{
    fmt_float, run_average, run_sweep_labelled, AverageConfig, FamilyName,
    FamilySpec, Output, PeriodChoice, RunOptions, SweepConfig, SweepError,
};
use super::averages::ParameterKind;
use crate::entropy::{renyi, shannon, tsallis, EntropyMeasure, ProbabilityVector};
use crate::graph::OpenGraph;

pub const FIGURES: [&str; 14] = [
    "fig2", "fig3", "fig6", "fig7", "fig9", "fig10", "fig11", "fig12", "fig13", "fig14", "fig15",
    "fig16", "fig17", "fig18",
];

pub const SWEEP_SAMPLES: usize = 1024;
/// α and q values of the entropy surfaces; 1 is covered by the Shannon column.
pub const SURFACE_GRID: [f64; 10] = [0.0, 0.5, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0];
/// Parameters of the average-entropy figures; Shannon is added at 1.
pub const AVERAGE_GRID: [f64; 8] = [0.0, 0.25, 0.5, 0.75, 1.5, 2.0, 3.0, 4.0];

fn sweep_config(measures: Vec<EntropyMeasure>, outputs: Vec<Output>) -> SweepConfig {
    SweepConfig {
        k_min: 4.0 * PI / SWEEP_SAMPLES as f64,
        k_max: 4.0 * PI,
        samples: SWEEP_SAMPLES,
        entrance: None,
        measures,
        outputs,
    }
}

fn surface_measures() -> Vec<EntropyMeasure> {
    let mut m = vec![EntropyMeasure::Shannon];
    m.extend(SURFACE_GRID.iter().map(|&a| EntropyMeasure::Renyi(a)));
    m.extend(SURFACE_GRID.iter().map(|&q| EntropyMeasure::Tsallis(q)));
    m
}

/// Labelled graphs with their shared sweep settings.
pub type LabelledSweep = (Vec<(String, OpenGraph)>, SweepConfig);

/// Labelled graphs and sweep settings for the k-sweep figures.
pub fn figure_sweep(name: &str) -> Option<Result<LabelledSweep, SweepError>> {
    let (members, entropies): (&[(&str, FamilyName, usize)], bool) = match name {
        "fig6" => (&[("series", FamilyName::Series, 8), ("parallel", FamilyName::Parallel, 8)], false),
        "fig7" => (&[("series", FamilyName::Series, 8), ("parallel", FamilyName::Parallel, 8)], true),
        "fig9" => (&[("c7", FamilyName::Cycle, 7), ("c8", FamilyName::Cycle, 8)], false),
        "fig10" => (&[("c7", FamilyName::Cycle, 7), ("c8", FamilyName::Cycle, 8)], true),
        "fig11" => (&[("w5", FamilyName::Wheel, 5)], false),
        "fig12" => (&[("w5", FamilyName::Wheel, 5)], true),
        "fig13" => (&[("k4", FamilyName::Complete, 4)], false),
        "fig14" => (&[("k4", FamilyName::Complete, 4)], true),
        _ => return None,
    };
    let cfg = if entropies {
        sweep_config(surface_measures(), vec![Output::Entropy])
    } else {
        sweep_config(vec![], vec![Output::Probabilities])
    };
    let graphs = members
        .iter()
        .map(|&(label, family, n)| Ok((label.to_string(), family.build(n)?)))
        .collect::<Result<Vec<_>, SweepError>>();
    Some(graphs.map(|g| (g, cfg)))
}

/// Average-entropy configuration for the averaging figures.
pub fn figure_average(name: &str) -> Option<AverageConfig> {
    let named = |family, n_min, n_max| FamilySpec::Named { family, n_min, n_max };
    let bundles = || vec![named(FamilyName::Series, 1, 8), named(FamilyName::Parallel, 1, 8)];
    let symmetric = || {
        vec![
            named(FamilyName::Cycle, 3, 8),
            named(FamilyName::Wheel, 4, 8),
            named(FamilyName::Complete, 3, 8),
        ]
    };
    let (measure, families) = match name {
        "fig15" => (ParameterKind::Renyi, bundles()),
        "fig16" => (ParameterKind::Tsallis, bundles()),
        "fig17" => (ParameterKind::Renyi, symmetric()),
        "fig18" => (ParameterKind::Tsallis, symmetric()),
        _ => return None,
    };
    Some(AverageConfig {
        period: PeriodChoice::default(),
        measure,
        parameter_grid: AVERAGE_GRID.to_vec(),
        include_shannon: true,
        families,
        tol: None,
    })
}

/// Bernoulli entropies on `p ∈ [0, 1]` (step 0.01) × parameter `∈ [0, 5]`
/// (step 0.1). At parameter 1 both columns hold the Shannon value.
fn bernoulli<W: Write>(out: &mut W, compare: bool) -> Result<(), SweepError> {
    if compare {
        writeln!(out, "p,gamma,renyi,tsallis,renyi_minus_tsallis")?;
    } else {
        writeln!(out, "p,parameter,shannon,renyi,tsallis")?;
    }
    for i in 0..=100 {
        let p = i as f64 / 100.0;
        let pv = ProbabilityVector::new(vec![p, 1.0 - p])?;
        let h = shannon(&pv);
        for j in 0..=50 {
            let g = j as f64 / 10.0;
            let (r, t) = if j == 10 {
                (h, h)
            } else {
                (renyi(g, &pv)?, tsallis(g, &pv)?)
            };
            let cells = if compare {
                [p, g, r, t, r - t]
            } else {
                [p, g, h, r, t]
            };
            let line: Vec<String> = cells.iter().map(|&x| fmt_float(x)).collect();
            writeln!(out, "{}", line.join(","))?;
        }
    }
    Ok(())
}

pub fn write_figure<W: Write>(name: &str, opts: &RunOptions, out: &mut W) -> Result<(), SweepError> {
    match name {
        "fig2" => return bernoulli(out, false),
        "fig3" => return bernoulli(out, true),
        _ => {}
    }
    if let Some(setup) = figure_sweep(name) {
        let (graphs, cfg) = setup?;
        let refs: Vec<(&str, &OpenGraph)> = graphs.iter().map(|(l, g)| (l.as_str(), g)).collect();
        run_sweep_labelled(&refs, &cfg, opts, out)?;
        return Ok(());
    }
    if let Some(cfg) = figure_average(name) {
        run_average(&cfg, opts, out)?;
        return Ok(());
    }
    Err(SweepError::BadConfig(format!("unknown figure `{name}`")))
}

/// Writes `<dir>/<name>.csv` for each figure and reports the time taken.
pub fn write_figures(
    dir: &Path,
    names: &[&str],
    opts: &RunOptions,
) -> Result<Vec<(PathBuf, Duration)>, SweepError> {
    std::fs::create_dir_all(dir)?;
    let mut done = Vec::new();
    for &name in names {
        let path = dir.join(format!("{name}.csv"));
        let start = Instant::now();
        let mut w = BufWriter::new(File::create(&path)?);
        write_figure(name, opts, &mut w)?;
        w.flush()?;
        done.push((path, start.elapsed()));
    }
    Ok(done)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_figure_is_known() {
        for name in FIGURES {
            let known = matches!(name, "fig2" | "fig3")
                || figure_sweep(name).is_some()
                || figure_average(name).is_some();
            assert!(known, "{name}");
        }
        assert!(write_figure("fig99", &RunOptions::default(), &mut Vec::new()).is_err());
    }

    #[test]
    fn bernoulli_table() {
        let mut buf = Vec::new();
        write_figure("fig2", &RunOptions::default(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 101 * 51);
        // p = 1/2, parameter 2
        let row = text.lines().find(|l| l.starts_with("0.5,2.0,")).unwrap();
        let v: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
        assert!((v[2] - 1.0).abs() < 1e-15 && (v[3] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sweep_headers() {
        let (graphs, cfg) = figure_sweep("fig9").unwrap().unwrap();
        assert_eq!(graphs.len(), 2);
        assert_eq!(cfg.samples, SWEEP_SAMPLES);
        assert_eq!(cfg.outputs, vec![Output::Probabilities]);
    }
}
