use std::path::Path;
use std::process::Command;

use qcover::output::{read_scores_csv, Summary};
use qcover::sweep::read_sweep_csv;
use qcover_core::stats::wasserstein1;

fn qcover(args: &[&str]) -> std::process::Output {
    let out = Command::new(env!("CARGO_BIN_EXE_qcover"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "qcover {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(qcover(args).stdout).unwrap()
}

#[test]
fn gen_circuit_reports_gate_count_and_replays() {
    let text = stdout(&["gen-circuit", "--kind", "bc", "--qubits", "5", "--depth", "2", "--seed", "3"]);
    assert!(text.contains("# gate_count 34\n"));
    assert!(text.contains("QUBITS 5\n"));
    let again = stdout(&["gen-circuit", "--kind", "bc", "--qubits", "5", "--depth", "2", "--seed", "3"]);
    assert_eq!(text, again);
    let iqft = stdout(&["gen-circuit", "--kind", "iqft", "--qubits", "7"]);
    assert!(iqft.contains("# gate_count 58\n"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.txt");
    std::fs::write(&path, &text).unwrap();
    let scores = stdout(&["score", "--circuit", path.to_str().unwrap(), "--blocks", "A=0,1"]);
    assert!(scores.starts_with("score,value\nms,"));
    assert!(scores.contains("\nA,"));
    assert!(scores.contains("\npcs_q4,"));
}

#[test]
fn gen_state_feeds_score() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ghz.csv");
    qcover(&["gen-state", "--family", "ghz", "--qubits", "6", "--out", path.to_str().unwrap()]);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# family=ghz qubits=6 seed=0 index=0\nindex,re,im\n"));
    let scores = stdout(&["score", "--state", path.to_str().unwrap(), "--blocks", "s2_A=0,1,2"]);
    let get = |name: &str| -> f64 {
        scores
            .lines()
            .find_map(|l| l.strip_prefix(&format!("{name},")))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((get("q") - 1.0).abs() < 1e-12);
    assert!((get("mcs") - 1.0 / 32.0).abs() < 1e-12);
    assert!((get("s2_A") - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn bad_input_fails_with_message() {
    let out = Command::new(env!("CARGO_BIN_EXE_qcover"))
        .args(["gen-circuit", "--kind", "nope"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown generator"));
    let out = Command::new(env!("CARGO_BIN_EXE_qcover"))
        .args(["score", "--state", "/nonexistent/state.csv"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/state.csv"));
}

fn recompute_wasserstein(dir: &Path, prefix: &str, summary: &Summary) {
    let reference = read_scores_csv(&dir.join(format!("{prefix}_hr_scores.csv"))).unwrap();
    assert!(!summary.wasserstein.is_empty());
    for (label, scores) in &summary.wasserstein {
        let cols = read_scores_csv(&dir.join(format!("{prefix}_{label}_scores.csv"))).unwrap();
        for (name, &wd) in scores {
            let again = wasserstein1(&cols[name], &reference[name]).unwrap();
            assert!((again - wd).abs() <= 1e-12, "{label}/{name}: {again} vs {wd}");
        }
    }
}

#[test]
fn rq1_and_rq3_outputs_are_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let d1 = dir.path().join("rq1");
    qcover(&["rq1", "--qubits", "4", "--samples", "30", "--seed", "8", "--out", d1.to_str().unwrap()]);
    let s1 = Summary::read(&d1.join("summary.json")).unwrap();
    assert_eq!(s1.seed, 8);
    assert_eq!(s1.config["samples"], 30);
    recompute_wasserstein(&d1, "rq1", &s1);
    let header = std::fs::read_to_string(d1.join("rq1_hr_scores.csv")).unwrap();
    assert!(header.starts_with("sample,ms,mcs,mds,ps,pcs,pvs,q,s,s2_A,s2_AB,seed\n"));
    assert!(d1.join("rq1_q.svg").exists());

    let d3 = dir.path().join("rq3");
    qcover(&["rq3", "--qubits", "4", "--samples", "25", "--seed", "8", "--out", d3.to_str().unwrap()]);
    let s3 = Summary::read(&d3.join("summary.json")).unwrap();
    recompute_wasserstein(&d3, "rq3", &s3);
    let text = std::fs::read_to_string(d3.join("summary.json")).unwrap();
    assert_eq!(Summary::from_json(&text).unwrap().to_json().unwrap(), text);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("rq2");
    std::fs::write(
        &cfg,
        format!(
            "# small sweep\nqubits = 2\nmmd_samples = 10\npermutations = 20\nreps = 2\nkinds = bc,iqft\nbc-max-layers = 1\nnull-reps = 2\nseed = 5\nout = {}\n",
            out.display()
        ),
    )
    .unwrap();
    qcover(&["rq2", "--config", cfg.to_str().unwrap(), "--seed", "6"]);
    let s = Summary::read(&out.join("summary.json")).unwrap();
    assert_eq!(s.seed, 6);
    assert_eq!(s.config["mmd_samples"], 10);
    let rows = read_sweep_csv(&out.join("rq2_sweep.csv")).unwrap();
    assert_eq!(rows.len(), 2 * 2);
    assert!(rows.iter().all(|r| r.seed == 6 && r.n == 2));
    assert!(s.results.contains_key("null"));
}
