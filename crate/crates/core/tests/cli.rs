use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hamlab::input::Table;
use hamlab::kernel::uniform_grid;
use hamlab::report::RunReport;
use tempfile::TempDir;

fn hamlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamlab"))
        .args(args)
        .env_remove("HAMLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn report(out: &Output) -> RunReport {
    RunReport::from_json(&String::from_utf8_lossy(&out.stdout)).expect("stdout holds a report")
}

fn check<'a>(r: &'a RunReport, name: &str) -> &'a hamlab::report::Check {
    r.checks
        .iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("no check {name} in {:?}", r.checks))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn write_table(dir: &Path, name: &str, f: impl Fn(f64, f64) -> f64) -> PathBuf {
    let table = Table::from_fn(uniform_grid(21), f).unwrap();
    write(dir, name, &table.to_tsv())
}

#[test]
fn build_kernel_reports_zeta0_and_positivity() {
    let out = hamlab(&[
        "build-kernel",
        "--n",
        "1",
        "--p",
        "1",
        "--k",
        "107",
        "--grid",
        "101",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    let zeta0 = r.data["zeta0"].as_f64().unwrap();
    assert!((zeta0 - 320.0 / 3.0).abs() < 1e-12);
    assert!(check(&r, "kernel_min").passed);
}

#[test]
fn build_kernel_below_threshold_warns() {
    let out = hamlab(&[
        "build-kernel",
        "--n",
        "1",
        "--p",
        "1",
        "--k",
        "20",
        "--grid",
        "51",
    ]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert!(!r.warnings.is_empty());
    assert!(r.checks.iter().all(|c| c.name != "kernel_min"));
}

#[test]
fn build_kernel_writes_table() {
    let dir = TempDir::new().unwrap();
    let table = dir.path().join("k.tsv");
    let out = hamlab(&[
        "build-kernel",
        "--n",
        "1",
        "--p",
        "1",
        "--k",
        "107",
        "--grid",
        "11",
        "--table",
        table.to_str().unwrap(),
        "--table-grid",
        "5",
    ]);
    assert_eq!(code(&out), 0);
    let t = Table::read(&table).unwrap();
    assert_eq!(t.t_coords().len(), 5);
    assert!((0..5).all(|i| t.get(i, i) > 0.0));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        code(&hamlab(&["build-kernel", "--p", "1", "--k", "107"])),
        2
    );
    assert_eq!(
        code(&hamlab(&["verify", "--n", "0", "--p", "1", "--k", "107"])),
        2
    );
    assert_eq!(code(&hamlab(&["no-such-command"])), 2);
}

#[test]
fn verify_passes_and_fails_on_tolerance() {
    let ok = hamlab(&[
        "verify", "--n", "1", "--p", "1", "--k", "107", "--nodes", "16", "--tol", "1e-9",
    ]);
    assert_eq!(code(&ok), 0);
    let ok = hamlab(&[
        "verify", "--n", "2", "--p", "1", "--k", "47040", "--nodes", "24", "--tol", "1e-7",
    ]);
    assert_eq!(code(&ok), 0);
    let strict = hamlab(&[
        "verify", "--n", "1", "--p", "1", "--k", "107", "--nodes", "16", "--tol", "1e-30",
    ]);
    assert_eq!(code(&strict), 1);
    let r = report(&strict);
    assert!(r.checks.iter().any(|c| !c.passed && c.measured.is_some()));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("FAIL"));
}

#[test]
fn solve_constant_kernel() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        dir.path(),
        "k.spec",
        "# constant kernel\nconstant 1\nnodes 8\n",
    );
    let out = hamlab(&[
        "solve",
        "--kernel-spec",
        spec.to_str().unwrap(),
        "--alpha",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r.solutions.len(), 1);
    assert!(r.solutions[0]
        .f
        .iter()
        .all(|v| (v.unwrap() - 1.0).abs() < 1e-12));
}

#[test]
fn solve_constructed_with_designed_seeds() {
    let dir = TempDir::new().unwrap();
    let spec = write(dir.path(), "k.spec", "constructed 2 1 47040\nnodes 24\n");
    let out = hamlab(&[
        "solve",
        "--kernel-spec",
        spec.to_str().unwrap(),
        "--alpha",
        "47040",
        "--seeds",
        "constant,designed",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert!(r.solutions.len() >= 2);
    assert_eq!(r.data["matched"], serde_json::Value::Bool(true));
}

#[test]
fn solve_malformed_spec_exits_2() {
    let dir = TempDir::new().unwrap();
    let spec = write(dir.path(), "bad.spec", "constructed two 1\n");
    let out = hamlab(&[
        "solve",
        "--kernel-spec",
        spec.to_str().unwrap(),
        "--alpha",
        "2",
    ]);
    assert_eq!(code(&out), 2);
    let missing = dir.path().join("missing.spec");
    let out = hamlab(&[
        "solve",
        "--kernel-spec",
        missing.to_str().unwrap(),
        "--alpha",
        "2",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn uniqueness_verdicts() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("small.tsv", 0.0601, "certified-unique"),
        ("wide.tsv", 1.25, "inconclusive"),
    ];
    let small = write_table(dir.path(), cases[0].0, |t, u| 1.0 + 0.01 * (t + u));
    let wide = write_table(dir.path(), cases[1].0, |t, u| 2.0 + t * u);
    for (table, (name, lhs, verdict)) in [small, wide].iter().zip(cases) {
        let spec = write(
            dir.path(),
            &format!("{name}.spec"),
            &format!("table {name}\n"),
        );
        let out = hamlab(&[
            "uniqueness",
            "--kernel-spec",
            spec.to_str().unwrap(),
            "--alpha",
            "2",
            "--grid",
            "21",
        ]);
        assert!(table.exists());
        assert_eq!(code(&out), 0);
        let r = report(&out);
        let measured = r.data["certificate"]["lhs"].as_f64().unwrap();
        assert!((measured - lhs).abs() < 5e-5, "{measured}");
        assert_eq!(r.data["verdict"], verdict);
    }
    let spec = write(dir.path(), "one.spec", "constant 1\n");
    let r = report(&hamlab(&[
        "uniqueness",
        "--kernel-spec",
        spec.to_str().unwrap(),
        "--alpha",
        "2",
    ]));
    assert_eq!(r.data["certificate"]["lhs"].as_f64().unwrap(), 0.0);
    assert_eq!(r.data["verdict"], "certified-unique");
}

#[test]
fn gibbs_constructed_counts() {
    let out = hamlab(&["gibbs", "--n", "1", "--p", "1", "--k", "107"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert!(check(&r, "ti_gibbs_count").measured.unwrap() >= 1.0);
}

#[test]
fn gibbs_zero_interaction_is_compatible() {
    let dir = TempDir::new().unwrap();
    let table = write_table(dir.path(), "zero.tsv", |_, _| 0.0);
    let out = hamlab(&[
        "gibbs",
        "--xi-table",
        table.to_str().unwrap(),
        "--J",
        "1",
        "--beta",
        "1",
        "--order",
        "2",
        "--depth",
        "2",
        "--nodes",
        "8",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    let compat: Vec<_> = r
        .checks
        .iter()
        .filter(|c| c.name.starts_with("compatibility"))
        .collect();
    assert!(!compat.is_empty());
    assert!(compat.iter().all(|c| c.measured.unwrap() <= 1e-8));
}

#[test]
fn gibbs_rejects_depth_zero_and_mixed_modes() {
    assert_eq!(
        code(&hamlab(&[
            "gibbs", "--n", "1", "--p", "1", "--k", "107", "--depth", "0"
        ])),
        2
    );
    assert_eq!(code(&hamlab(&["gibbs", "--n", "1"])), 2);
}

#[test]
fn reports_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let spec = write(dir.path(), "k.spec", "constructed 1 1 107\nnodes 16\n");
    let spec = spec.to_str().unwrap();
    let run = |out: &Path, threads: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_hamlab"));
        cmd.args([
            "solve",
            "--kernel-spec",
            spec,
            "--alpha",
            "107",
            "--seeds",
            "constant,random:6",
            "--rng-seed",
            "9",
            "--out",
            out.to_str().unwrap(),
        ]);
        match threads {
            Some(t) => cmd.env("HAMLAB_THREADS", t),
            None => cmd.env_remove("HAMLAB_THREADS"),
        };
        let status = cmd.status().unwrap();
        assert_eq!(status.code(), Some(0));
        let mut r = RunReport::from_json(&fs::read_to_string(out).unwrap()).unwrap();
        r.args.pop();
        r.without_timings().to_json()
    };
    let a = run(&dir.path().join("a.json"), None);
    let b = run(&dir.path().join("b.json"), Some("1"));
    let c = run(&dir.path().join("c.json"), Some("3"));
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert!(a.contains("\"rng_seed\": 9"));
}

#[test]
fn bad_thread_count_exits_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_hamlab"))
        .args(["verify", "--n", "1", "--p", "1", "--k", "107"])
        .env("HAMLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}
