use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ptphase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptphase")).args(args).output().expect("binary runs")
}

fn body(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

fn column(text: &str, idx: usize) -> Vec<String> {
    body(text).iter().map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn repeated_runs_are_byte_identical() {
    // the header echoes the output path, so both runs use the same relative name
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for sub in ["wigner", "flow", "liouvillian"] {
        let mut outs = Vec::new();
        for dir in &dirs {
            let p = dir.path().join(format!("{sub}.csv"));
            let o = Command::new(env!("CARGO_BIN_EXE_ptphase"))
                .current_dir(dir.path())
                .args([
                    sub,
                    "--lambda",
                    "2",
                    "--theta",
                    "0.5236",
                    "--grid",
                    "-2:2:21,-2:2:17",
                    "--out",
                    &format!("{sub}.csv"),
                ])
                .output()
                .unwrap();
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
            outs.push(fs::read(&p).unwrap());
            if sub == "flow" {
                outs.push(fs::read(dir.path().join("flow.stagnation.json")).unwrap());
            }
        }
        let half = outs.len() / 2;
        assert_eq!(outs[..half], outs[half..], "{sub}");
    }
    let a = ptphase(&["bipartite", "--lambda", "2:5"]);
    let b = ptphase(&["bipartite", "--lambda", "2:5"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn theta_zero_equals_excited_component() {
    let grid = "-3:3:31,-3:3:31";
    let total = ptphase(&["wigner", "--lambda", "3", "--theta", "0", "--phi", "0.4", "--grid", grid]);
    let comp = ptphase(&["wigner", "--lambda", "3", "--component", "11", "--grid", grid]);
    let (t, c) = (String::from_utf8(total.stdout).unwrap(), String::from_utf8(comp.stdout).unwrap());
    assert_eq!(body(&t), body(&c));
}

#[test]
fn tau_sweep_writes_one_file_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.csv");
    let tau = (std::f64::consts::PI / 12.0).to_string();
    let o = ptphase(&[
        "wigner",
        "--lambda",
        "2",
        "--theta",
        "0.5235987755982988",
        "--tau",
        &tau,
        "--tau-steps",
        "3",
        "--grid",
        "-2:2:11,-2:2:11",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    for k in 0..4 {
        let text = fs::read_to_string(dir.path().join(format!("w_t{k}.csv"))).unwrap();
        let line = text.lines().find(|l| l.starts_with("# tau:")).unwrap();
        let t: f64 = line[6..].trim().parse().unwrap();
        assert!((t - k as f64 * std::f64::consts::PI / 12.0).abs() < 1e-15);
    }
    assert!(!Path::new(&out).exists());
}

#[test]
fn flow_writes_stagnation_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.csv");
    let o = ptphase(&[
        "flow",
        "--lambda",
        "2",
        "--theta",
        "0.5235987755982988",
        "--grid",
        "-3:3:61,-3:3:61",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("f.stagnation.json")).unwrap()).unwrap();
    let pts = doc["data"]["points"].as_array().unwrap();
    assert!(!pts.is_empty());
    for p in pts {
        let idx = p["poincare_index"].as_i64().unwrap();
        assert!(idx == 1 || idx == -1);
    }
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.contains("# columns: s,q,W,J_s,J_q,div_J,residual"));
}

#[test]
fn mask_marks_exactly_the_small_values() {
    let o = ptphase(&["liouvillian", "--lambda", "2", "--theta", "0", "--grid", "-3:3:31,-3:3:31"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let floor: f64 = text.lines().find(|l| l.starts_with("# w_floor:")).unwrap()[10..].trim().parse().unwrap();
    let w = column(&text, 2);
    let mask = column(&text, 4);
    let div = column(&text, 3);
    for ((w, m), d) in w.iter().zip(&mask).zip(&div) {
        let small = w.parse::<f64>().unwrap().abs() <= floor;
        assert_eq!(m == "1", small);
        assert_eq!(d == "nan", small);
    }
}

#[test]
fn classical_unbound_starts_at_energy_two() {
    let o = ptphase(&["classical", "--lambda", "1", "--regime", "unbound", "--tau-steps", "0"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let row: Vec<f64> = body(&text)[0].split(',').skip(1).map(|v| v.parse().unwrap()).collect();
    assert_eq!(row[0], 0.0);
    assert!((row[3] - 2.0).abs() < 1e-12);
}

#[test]
fn bipartite_table_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let o = ptphase(&["bipartite", "--lambda", "2:3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    let d_tilde: f64 = column(&text, 7)[0].parse().unwrap();
    assert!((d_tilde - 0.7488).abs() < 1e-3);
    assert!(dir.path().join("b.report.json").exists());
}

#[test]
fn json_format_is_valid() {
    let o = ptphase(&["infoprofile", "--lambda", "2:3", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 8);
    assert!(doc["columns"].as_array().unwrap().iter().any(|c| c == "kurtosis_excess_s"));
    assert!(doc["columns"].as_array().unwrap().iter().any(|c| c == "kurtosis_ratio_s"));
}

#[test]
fn config_file_precedence_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# test\nlambda = 4\ngrid = -1:1:3,-1:1:3\n").unwrap();
    let o = ptphase(&["wigner", "--config", cfg.to_str().unwrap(), "--lambda", "3"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("lambda=3") && text.contains("grid=-1:1:3,-1:1:3"));

    fs::write(&cfg, "lamda = 4\n").unwrap();
    assert_eq!(ptphase(&["wigner", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(ptphase(&["wigner", "--grid", "0:1:1,0:1:3"]).status.code(), Some(2));
    assert_eq!(ptphase(&["flow", "--truncation-K", "9"]).status.code(), Some(2));
    assert_eq!(ptphase(&["wigner", "--lambda", "13"]).status.code(), Some(2));
    assert_eq!(ptphase(&["nonsense"]).status.code(), Some(2));
}
