use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn sinegordon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sinegordon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn files(dir: &Path, prefix: &str) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with(prefix))
        .collect();
    v.sort();
    v
}

const RING_CONFIG: &str =
    "scenario=circular-ring\ndt=0.2\ndx=0.4\ndy=0.4\nt_end=12.6\nsnapshots=2.8,5.6,8.4,11.2,12.6\n";

#[test]
fn lists_all_scenarios() {
    let o = sinegordon(&["list-scenarios"]);
    assert!(o.status.success());
    let out = String::from_utf8(o.stdout).unwrap();
    assert_eq!(out.lines().count(), 6);
    for name in [
        "line-soliton-exact",
        "circular-ring",
        "elliptical-breather",
        "inhomogeneous-line",
    ] {
        assert!(out.contains(name), "{name} missing");
    }
}

#[test]
fn describe_prints_formulas_and_defaults() {
    let o = sinegordon(&["describe", "--scenario", "line-soliton-exact"]);
    assert!(o.status.success());
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("4 atan(exp(x + y - t))"));
    assert!(out.contains("dt = 0.001, dx = 0.25"));

    let o = sinegordon(&["describe", "--scenario", "no-such-thing"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("unknown scenario"));
}

#[test]
fn run_needs_a_source() {
    assert!(!sinegordon(&["run"]).status.success());
    let o = sinegordon(&["run", "--scenario", "circular-ring", "--config", "x.cfg"]);
    assert!(!o.status.success());
}

#[test]
fn ring_config_writes_six_snapshots() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("ring.cfg");
    fs::write(&cfg, RING_CONFIG).unwrap();
    let out = dir.path().join("out");
    let o = sinegordon(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--diagnostics",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let snaps = files(&out, "snapshot_");
    assert_eq!(snaps.len(), 6, "{snaps:?}");
    assert!(snaps.iter().all(|n| n.starts_with("snapshot_half-sine_")));
    assert!(!out.join("errors.csv").exists());

    let first = fs::read_to_string(out.join(&snaps[0])).unwrap();
    let mut lines = first.lines();
    assert_eq!(
        lines.next().unwrap(),
        "# t=0 transform=half-sine M=36 N=36 a=-7 b=7 c=-7 d=7"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 36);
    assert!(rows.iter().all(|r| r.split(' ').count() == 36));

    let diag = fs::read_to_string(out.join("diagnostics.csv")).unwrap();
    assert_eq!(diag.lines().next(), Some("t,energy,ring_radius"));
    assert_eq!(diag.lines().count(), 7);

    let meta = fs::read_to_string(out.join("run_meta.txt")).unwrap();
    assert!(meta.contains("tableau=ssprk54"));
    assert!(meta.contains("phi_sign=+"));
    assert!(meta.contains("unix_time="));
}

#[test]
fn refuses_to_overwrite() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().to_str().unwrap();
    let args = [
        "run",
        "--scenario",
        "circular-ring",
        "--t-end",
        "0.4",
        "--out",
        out,
    ];
    assert!(sinegordon(&args).status.success());
    let meta = dir.path().join("run_meta.txt");
    fs::write(&meta, "sentinel").unwrap();

    let o = sinegordon(&args);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("overwrite"), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(&meta).unwrap(), "sentinel");

    let mut forced = args.to_vec();
    forced.push("--overwrite");
    assert!(sinegordon(&forced).status.success());
    assert_ne!(fs::read_to_string(&meta).unwrap(), "sentinel");
}

#[test]
fn identical_runs_give_identical_bytes() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for d in [&a, &b] {
        let o = sinegordon(&[
            "run",
            "--scenario",
            "elliptical-ring",
            "--t-end",
            "1.6",
            "--transform",
            "both",
            "--diagnostics",
            "--no-timestamp",
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let names = files(a.path(), "");
    assert_eq!(names, files(b.path(), ""));
    // t=0 and t=1.6, two transforms each, plus diagnostics and meta
    assert_eq!(names.len(), 6, "{names:?}");
    for n in &names {
        assert_eq!(
            fs::read(a.path().join(n)).unwrap(),
            fs::read(b.path().join(n)).unwrap(),
            "{n} differs"
        );
    }
    assert!(!fs::read_to_string(a.path().join("run_meta.txt"))
        .unwrap()
        .contains("unix_time"));
}

#[test]
fn exact_scenario_writes_error_table() {
    let dir = TempDir::new().unwrap();
    let o = sinegordon(&[
        "run",
        "--scenario",
        "line-soliton-exact",
        "--t-end",
        "0.02",
        "--snapshots",
        "0.01,0.02",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("errors.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,l_inf,rms"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0], vec![0.0, 0.0, 0.0]);
    for w in rows.windows(2) {
        assert!(w[1][0] > w[0][0]);
    }
    for r in &rows {
        assert!(r[1] >= r[2] && r[2] >= 0.0);
    }
    assert_eq!(files(dir.path(), "snapshot_raw_").len(), 3);
}

#[test]
fn zero_end_time_gives_initial_snapshot_only() {
    let dir = TempDir::new().unwrap();
    let o = sinegordon(&[
        "run",
        "--scenario",
        "line-soliton-exact",
        "--t-end",
        "0",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        files(dir.path(), "snapshot_"),
        vec!["snapshot_raw_t0000.0000.dat"]
    );
    let csv = fs::read_to_string(dir.path().join("errors.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn config_errors_are_reported() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.cfg");

    fs::write(&bad, "scenario=circular-ring\n# ok\ncolour=blue\n").unwrap();
    let o = sinegordon(&["run", "--config", bad.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    fs::write(&bad, "scenario=circular-ring\ndt=-0.1\n").unwrap();
    let o = sinegordon(&["run", "--config", bad.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("dt"), "{}", stderr(&o));

    fs::write(&bad, "").unwrap();
    let o = sinegordon(&["run", "--config", bad.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("scenario required"), "{}", stderr(&o));
}

#[test]
fn flags_override_config() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("c.cfg");
    fs::write(&cfg, RING_CONFIG).unwrap();
    let out = dir.path().join("o");
    let o = sinegordon(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--t-end",
        "0.4",
        "--snapshots",
        "0.2,0.4",
        "--transform",
        "raw",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        files(&out, "snapshot_"),
        vec![
            "snapshot_raw_t0000.0000.dat",
            "snapshot_raw_t0000.2000.dat",
            "snapshot_raw_t0000.4000.dat"
        ]
    );
}
