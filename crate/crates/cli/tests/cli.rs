use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn wdbc() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/wdbc.data")
}

fn wrapfs(args: &[&str], env_seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wrapfs"));
    cmd.args(args).env_remove("WRAPFS_SEED");
    if let Some(s) = env_seed {
        cmd.env("WRAPFS_SEED", s);
    }
    cmd.output().unwrap()
}

fn run_knn(out: &Path, extra: &[&str], env_seed: Option<&str>) -> Output {
    let data = wdbc();
    let mut args = vec![
        "run",
        "--data",
        data.to_str().unwrap(),
        "--optimizer",
        "none",
        "--classifiers",
        "knn",
        "--output",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    wrapfs(&args, env_seed)
}

fn report_seed(path: &Path) -> u64 {
    let text = std::fs::read_to_string(path).unwrap();
    wrapfs_core::pipeline::parse_json_report(&text)
        .unwrap()
        .metadata
        .seed
}

#[test]
fn csv_report_has_header_and_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = run_knn(&out, &["--format", "csv", "--seed", "1"], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("classifier,mode,accuracy,"));
    assert!(lines[1].starts_with("knn,without_fs,"));
}

#[test]
fn flag_seed_beats_environment_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    assert!(run_knn(&out, &[], Some("17")).status.success());
    assert_eq!(report_seed(&out), 17);
    assert!(run_knn(&out, &["--seed", "5"], Some("17")).status.success());
    assert_eq!(report_seed(&out), 5);
}

#[test]
fn config_file_sets_defaults_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(&cfg, "# experiment\nseed = 8\nsplit = 0.5\nknn.k = 3\n").unwrap();
    let out = dir.path().join("r.json");
    let cfg_arg = cfg.to_str().unwrap();
    assert!(run_knn(&out, &["--config", cfg_arg], None).status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let report = wrapfs_core::pipeline::parse_json_report(&text).unwrap();
    assert_eq!(report.metadata.seed, 8);
    assert_eq!(report.metadata.dataset.n_train, 285);
    assert!(run_knn(&out, &["--config", cfg_arg, "--seed", "2"], None)
        .status
        .success());
    assert_eq!(report_seed(&out), 2);
}

#[test]
fn config_problems_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    for extra in [
        &["--optimizer", "ga"][..],
        &["--classifiers", "knn,xgb"],
        &["--cv-k", "1"],
        &["--split", "1.5"],
        &["--format", "xml"],
        &["--no-such-flag"],
        &["--seed", "minus-one"],
    ] {
        let o = run_knn(&out, extra, None);
        assert_eq!(o.status.code(), Some(1), "{extra:?}");
    }
    let bad_cfg = dir.path().join("bad.cfg");
    std::fs::write(&bad_cfg, "colour = blue\n").unwrap();
    let o = run_knn(&out, &["--config", bad_cfg.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        wrapfs(&["run", "--optimizer", "none"], None).status.code(),
        Some(1)
    );
    assert_eq!(run_knn(&out, &[], Some("x")).status.code(), Some(1));
}

#[test]
fn io_and_parse_problems_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.data");
    let o = wrapfs(
        &[
            "run",
            "--data",
            missing.to_str().unwrap(),
            "--optimizer",
            "none",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("absent.data"));

    let broken = dir.path().join("broken.data");
    std::fs::write(&broken, "1,B,1.0,2.0\n").unwrap();
    let o = wrapfs(
        &[
            "run",
            "--data",
            broken.to_str().unwrap(),
            "--optimizer",
            "none",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));

    let unwritable = dir.path().join("no_dir").join("r.json");
    assert_eq!(run_knn(&unwritable, &[], None).status.code(), Some(2));
    let data = wdbc();
    let o = wrapfs(
        &[
            "run",
            "--data",
            data.to_str().unwrap(),
            "--config",
            "/nonexistent.cfg",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_opt_prints_a_median() {
    let o = wrapfs(
        &[
            "bench-opt",
            "--function",
            "onemax",
            "--optimizer",
            "ica",
            "--runs",
            "3",
            "--dim",
            "8",
        ],
        None,
    );
    assert!(o.status.success());
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 4);
    assert!(stdout
        .lines()
        .last()
        .unwrap()
        .starts_with("median best_cost "));
    let o = wrapfs(
        &["bench-opt", "--function", "rosenbrock", "--optimizer", "ba"],
        None,
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn help_exits_cleanly() {
    let o = wrapfs(&["--help"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("bench-opt"));
}
