use std::path::Path;
use std::process::{Command, Output};

fn qgs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgs")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const WHEEL5: &str = r#"{
  "vertices": 5,
  "edges": [[1,2,1.0],[1,3,1.0],[1,4,1.0],[1,5,1.0],[2,3,1.0],[3,4,1.0],[4,5,1.0],[5,2,1.0]],
  "leads": [1,2,3,4,5],
  "entrance": 0
}"#;

const SWEEP: &str = r#"{
  "k_min": 0.1,
  "k_max": 6.283185307179586,
  "samples": 200,
  "measures": ["shannon", "renyi_2", "tsallis_0.5"],
  "outputs": ["probabilities", "amplitudes_re_im", "entropy"]
}"#;

#[test]
fn sweep_csv_is_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "w5.json", WHEEL5);
    let config = write(dir.path(), "sweep.json", SWEEP);
    let mut outputs = Vec::new();
    for workers in ["1", "3"] {
        let out = qgs(&["--workers", workers, "sweep", "--graph", &graph, "--config", &config]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push(out.stdout);
    }
    assert_eq!(outputs[0], outputs[1]);

    let text = String::from_utf8(outputs.pop().unwrap()).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header[0], "k");
    assert_eq!(&header[1..6], ["p_1", "p_2", "p_3", "p_4", "p_5"]);
    assert_eq!(&header[6..8], ["sigma_1_re", "sigma_1_im"]);
    assert_eq!(&header[16..], ["shannon", "renyi_2", "tsallis_0.5"]);
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 200);
    let first: Vec<f64> = rows[0].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(first[0], 0.1);
    let flux: f64 = first[1..6].iter().sum();
    assert!((flux - 1.0).abs() < 1e-12);
}

#[test]
fn sweep_to_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "w5.json", WHEEL5);
    let config = write(dir.path(), "sweep.json", SWEEP);
    let path = dir.path().join("out.csv");
    let to_file = qgs(&["sweep", "--graph", &graph, "--config", &config, "--out", path.to_str().unwrap()]);
    assert!(to_file.status.success());
    let to_stdout = qgs(&["sweep", "--graph", &graph, "--config", &config]);
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
}

#[test]
fn average_with_graph_file() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "w5.json", WHEEL5);
    let config = write(
        dir.path(),
        "avg.json",
        r#"{"period": "infer", "measure": "tsallis", "parameter_grid": [0.5, 2],
            "families": [{"graph": "w5.json", "label": "w5"}, {"family": "cycle", "n_min": 3, "n_max": 4}],
            "tol": 1e-6}"#,
    );
    let out = qgs(&["average", "--config", &config]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,n,parameter,value,quad_error_estimate");
    assert_eq!(lines.len(), 1 + 3 * 3);
    assert!(lines[1].starts_with("w5,5,0.5,"));
    assert!(lines[4].starts_with("cycle,3,0.5,"));
}

#[test]
fn closed_form_and_validate() {
    let out = qgs(&["closed-form", "--family", "cycle", "--n", "6", "--z-samples", "32"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 33);

    let out = qgs(&["validate", "--family", "wheel,complete", "--n-min", "4", "--n-max", "5", "--samples", "64"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 4);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",pass")));
}

#[test]
fn bad_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "bad.json", r#"{"vertices": 2, "edges": [[1, 3, 1.0]], "leads": [1]}"#);
    let config = write(dir.path(), "sweep.json", SWEEP);
    let out = qgs(&["sweep", "--graph", &graph, "--config", &config]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let config = write(dir.path(), "bad_sweep.json", r#"{"k_min": 1, "k_max": 2, "samples": 4, "measures": ["renyi_1"]}"#);
    let graph = write(dir.path(), "w5.json", WHEEL5);
    let out = qgs(&["sweep", "--graph", &graph, "--config", &config]);
    assert_eq!(out.status.code(), Some(2));

    let out = qgs(&["figures", "--out-dir", dir.path().to_str().unwrap(), "--only", "fig99"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn figures_subset() {
    let dir = tempfile::tempdir().unwrap();
    let out = qgs(&["figures", "--out-dir", dir.path().to_str().unwrap(), "--only", "fig2,fig11"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let fig11 = std::fs::read_to_string(dir.path().join("fig11.csv")).unwrap();
    assert!(fig11.starts_with("k,w5_p_1,"));
    assert_eq!(fig11.lines().count(), 1 + 1024);
    assert!(dir.path().join("fig2.csv").exists());
}
