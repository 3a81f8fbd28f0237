use std::path::Path;
use std::process::{Command, Output};

use product_density::workbench::{read_witness, Instance};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_product-density"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn bound_verbs_match_golden_file() {
    let golden = include_str!("data/bounds.golden");
    let mut checked = 0;
    for line in golden
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
    {
        let (args, want) = line.split_once(" | ").unwrap();
        let args: Vec<&str> = args.split_whitespace().collect();
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{line}");
        assert_eq!(stdout(&o).trim_end(), want, "{line}");
        checked += 1;
    }
    assert!(checked >= 20);
}

#[test]
fn json_output_is_machine_readable() {
    let o = run(&[
        "--format",
        "json",
        "bounds",
        "f",
        "--delta",
        "1/2",
        "--targets",
        "2",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["values"][0], "688");
    let o = run(&[
        "--format",
        "json",
        "report",
        "--delta",
        "1/2",
        "--targets",
        "2",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["f_tower"][0]["f"], "688");
    assert_eq!(v["passes"], true);
}

#[test]
fn report_domain_error() {
    let o = run(&["report", "--delta", "3/4", "--targets", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("delta"));
}

#[test]
fn planted_pipeline_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("planted.json");
    let planted = dir.path().join("planted.witness.json");
    let o = run(&[
        "gen",
        "--out",
        p(&inst),
        "--seed",
        "4",
        "--sizes",
        "5,5,5",
        "--targets",
        "2,2,2",
        "--planted",
        "--noise",
        "1/4",
        "--witness-out",
        p(&planted),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(
        run(&["verify", "--instance", p(&inst), "--witness", p(&planted)])
            .status
            .code(),
        Some(0)
    );

    let found = dir.path().join("found.json");
    let o = run(&[
        "witness",
        "--instance",
        p(&inst),
        "--t",
        "3",
        "--out",
        p(&found),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read_witness(&found).unwrap().levels, vec![1, 2, 3]);
    assert_eq!(
        run(&["verify", "--instance", p(&inst), "--witness", p(&found)])
            .status
            .code(),
        Some(0)
    );

    let one = dir.path().join("one.json");
    let o = run(&[
        "extract",
        "--instance",
        p(&inst),
        "--mode",
        "exhaustive",
        "--out",
        p(&one),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        run(&["verify", "--instance", p(&inst), "--witness", p(&one)])
            .status
            .code(),
        Some(0)
    );

    let o = run(&["rank", "--instance", p(&inst)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rank 3"), "{}", stdout(&o));

    assert_eq!(
        run(&["per-level", "--instance", p(&inst), "--mode", "exhaustive"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        run(&["oracle", "subgrid", "--instance", p(&inst)])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        run(&["oracle", "common", "--instance", p(&inst)])
            .status
            .code(),
        Some(0)
    );

    // Without noise the dominant prefix pattern is the planted first coordinate.
    let clean = dir.path().join("clean.json");
    let o = run(&[
        "gen",
        "--out",
        p(&clean),
        "--seed",
        "4",
        "--sizes",
        "5,5,5",
        "--planted",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let cut = dir.path().join("cut.json");
    let o = run(&[
        "split",
        "--instance",
        p(&clean),
        "--cut",
        "1",
        "--theta",
        "1/20",
        "--out",
        p(&cut),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains("kept levels [2, 3]"), "{}", stdout(&o));
    assert_eq!(
        run(&["verify", "--instance", p(&clean), "--witness", p(&cut)])
            .status
            .code(),
        Some(0)
    );

    // Tampering with the witness makes verification fail.
    let text = std::fs::read_to_string(&planted).unwrap();
    let mut w: serde_json::Value = serde_json::from_str(&text).unwrap();
    w["I"][0] = serde_json::json!([0, 1, 2, 3, 4]);
    std::fs::write(&planted, w.to_string()).unwrap();
    let o = run(&["verify", "--instance", p(&inst), "--witness", p(&planted)]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
}

#[test]
fn off_diagonal_instance_is_not_found() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("offdiag.json");
    let points: Vec<usize> = (0..9).filter(|i| i % 3 != i / 3).collect();
    let text = serde_json::json!({
        "version": 1, "k0": 0, "sizes": [3, 3], "targets": [2, 2], "delta": "2/3",
        "levels": [{"k": 2, "points": points}],
    });
    std::fs::write(&inst, text.to_string()).unwrap();
    assert!(Instance::from_json(&text.to_string()).is_ok());
    for mode in ["exhaustive", "proof"] {
        let o = run(&["extract", "--instance", p(&inst), "--mode", mode]);
        assert_eq!(o.status.code(), Some(2), "{mode}");
    }
    assert_eq!(
        run(&["oracle", "subgrid", "--instance", p(&inst)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn invalid_input_and_budget() {
    assert_eq!(
        run(&["bounds", "t", "--eps", "3/0", "--targets", "2"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["bounds", "t", "--eps", "0.5", "--targets", "2"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&[
            "verify",
            "--instance",
            "/nonexistent",
            "--witness",
            "/nonexistent"
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(
        run(&["bounds", "f", "--delta", "1/2", "--targets", "2,2,2"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        run(&[
            "--max-bits",
            "10",
            "bounds",
            "ackermann",
            "--n",
            "2",
            "--x",
            "100"
        ])
        .status
        .code(),
        Some(4)
    );

    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("bad.json");
    std::fs::write(&inst, "{\"version\": 1,\n \"k0\": 0, \"mystery\": 3}").unwrap();
    let o = run(&["extract", "--instance", p(&inst)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn threads_flag_is_accepted() {
    let o = run(&[
        "--threads",
        "2",
        "bounds",
        "t",
        "--eps",
        "1/2",
        "--targets",
        "2",
    ]);
    assert_eq!(stdout(&o), "88\n");
}
