use std::process::{Command, Output};

fn kappa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kappa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn metric_lines(o: &Output) -> Vec<String> {
    stdout(o)
        .lines()
        .filter(|l| !l.starts_with("# wall_time_s"))
        .map(String::from)
        .collect()
}

#[test]
fn path_enumeration_row() {
    let o = kappa(&[
        "cutsets", "enum", "--graph", "path5", "--vertex", "2", "--nmax", "4", "--out", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let lines = metric_lines(&o);
    assert!(lines[0].starts_with("# kappa cutsets enum config_hash="));
    assert_eq!(lines[1], "vertex,n,count,kappa_estimate");
    assert!(lines.iter().any(|l| l.starts_with("2,2,4,")), "{lines:?}");
}

#[test]
fn brute_and_components_agree() {
    let run = |algo| {
        metric_lines(&kappa(&[
            "cutsets",
            "enum",
            "--graph",
            "grid3x3-corner",
            "--vertex",
            "4",
            "--nmax",
            "5",
            "--algo",
            algo,
        ]))[1..]
            .to_vec()
    };
    assert_eq!(run("brute"), run("components"));
}

#[test]
fn missing_seed_is_a_usage_error() {
    let o = kappa(&[
        "perc", "theta", "--graph", "path5", "--p", "0.5", "--vertex", "2", "--trials", "1000",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--seed"));
}

#[test]
fn bad_arguments_exit_one() {
    assert_eq!(kappa(&["perc", "theta", "--bogus"]).status.code(), Some(1));
    assert_eq!(
        kappa(&[
            "cutsets",
            "enum",
            "--graph",
            "no-such-graph",
            "--vertex",
            "0",
            "--nmax",
            "2"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        kappa(&["perc", "theta", "--graph", "grid:5x5", "--p", "0.5", "--vertex", "12"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(kappa(&["--help"]).status.code(), Some(0));
    assert_eq!(kappa(&["--version"]).status.code(), Some(0));
}

#[test]
fn seeded_runs_are_reproducible() {
    for args in [
        &[
            "perc", "census", "--graph", "star3", "--vertex", "0", "--p", "0.5", "--trials",
            "5000", "--seed", "7",
        ][..],
        &[
            "rw", "census", "--graph", "path5", "--origin", "2", "--trials", "5000", "--seed", "7",
        ][..],
        &[
            "gff", "pipeline", "--graph", "path5", "--origin", "2", "--cutset", "1,2", "--trials",
            "5000", "--seed", "7",
        ][..],
    ] {
        let a = kappa(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(metric_lines(&a), metric_lines(&kappa(args)));
    }
}

#[test]
fn exact_theta_as_json() {
    let o = kappa(&[
        "perc", "theta", "--graph", "path5", "--p", "0.5", "--vertex", "2", "--out", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["command"], "perc theta");
    assert_eq!(v["result"][0]["theta"], 0.4375);
    assert!(v["wall_time_s"].is_number());
}

#[test]
fn crossing_matrix_is_json() {
    let o = kappa(&[
        "rw", "crossing", "--graph", "path5", "--cutset", "1,2", "--origin", "2",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["matrix"]["p"][0][1], 0.25);
}

#[test]
fn config_file_supplies_flags() {
    let dir = std::env::temp_dir().join(format!("kappa-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("theta.json");
    std::fs::write(
        &cfg,
        r#"{"command": ["perc", "theta"], "graph": "path5", "p": 0.5, "vertex": 2}"#,
    )
    .unwrap();
    let from_file = kappa(&["--config", cfg.to_str().unwrap()]);
    let direct = kappa(&[
        "perc", "theta", "--graph", "path5", "--p", "0.5", "--vertex", "2",
    ]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(metric_lines(&from_file), metric_lines(&direct));
    std::fs::write(
        &cfg,
        r#"{"command": "perc theta", "graph": "path5", "p": 0.5, "vertex": 2, "colour": 1}"#,
    )
    .unwrap();
    assert_eq!(
        kappa(&["--config", cfg.to_str().unwrap()]).status.code(),
        Some(1)
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn out_path_receives_the_record() {
    let dir = std::env::temp_dir().join(format!("kappa-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("green.json");
    let o = kappa(&[
        "gff",
        "green",
        "--graph",
        "path4-end",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["matrix"][0][0], 3.0);
    std::fs::remove_dir_all(&dir).ok();
}
