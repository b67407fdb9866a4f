use std::path::{Path, PathBuf};
use std::process::Command;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn oldroyd(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_oldroyd")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write_config(dir: &Path, name: &str, base: &str, edit: impl Fn(String) -> String) -> PathBuf {
    let text = std::fs::read_to_string(configs().join(base)).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, edit(text)).unwrap();
    path
}

#[test]
fn zero_data_run_passes_with_zero_ledger() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs().join("zero.ini");
    let (code, stdout, _) = oldroyd(&["run", "--config", cfg.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}");
    let ledger = std::fs::read_to_string(tmp.path().join("ledger.csv")).unwrap();
    let mut lines = ledger.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,kinetic,stress_energy,dissipation_p,dissipation_2,relax,coupling,g_work,budget_residual"
    );
    for line in lines {
        assert!(line.split(',').skip(1).all(|x| x.parse::<f64>().unwrap() == 0.0), "{line}");
    }
    let tail = std::fs::read_to_string(tmp.path().join("tail.csv")).unwrap();
    assert_eq!(tail.lines().next().unwrap(), "t,M,tail");
    let summary = std::fs::read_to_string(tmp.path().join("run_summary.txt")).unwrap();
    assert!(summary.contains("gamma = ") && summary.contains("case (ii)"));
    assert!(tmp.path().join("final.bin").exists());
}

#[test]
fn t_end_override_and_snapshots() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.ini", "tg_s2.ini", |t| {
        t.replace("modes_per_axis = 32", "modes_per_axis = 16")
            .replace("t_end = 2", "t_end = 2\nsnapshot_interval = 0.1\nledger_interval = 0.05")
    });
    let out = tmp.path().join("out");
    let (code, stdout, stderr) = oldroyd(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--t-end", "0.3"]);
    assert_eq!(code, 0, "{stdout}{stderr}");
    assert!(stdout.contains("t_end = 0.3"));
    let snaps = std::fs::read_dir(&out)
        .unwrap()
        .filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().starts_with("snapshot_"))
        .count();
    assert_eq!(snaps, 4);
    let rows = std::fs::read_to_string(out.join("ledger.csv")).unwrap().lines().count() - 1;
    assert!((6..=7).contains(&rows), "{rows}");
}

#[test]
fn inadmissible_config_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "bad.ini", "tg_s2.ini", |t| {
        t.replace("nu = 1", "nu = 0.4").replace("lambda = 0", "lambda = 1")
    });
    let (code, _, stderr) = oldroyd(&["run", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stderr.contains("lambda must satisfy lambda < sqrt(2*nu*(1-theta))"), "{stderr}");

    let cfg = write_config(tmp.path(), "unknown.ini", "zero.ini", |t| t + "\n[run]\nfoo = 1\n");
    let (code, _, stderr) = oldroyd(&["run", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(code, 1, "{stderr}");

    let cfg = write_config(tmp.path(), "three.ini", "zero.ini", |t| t.replace("modes_per_axis = 16", "modes_per_axis = 16\ndimension = 3"));
    let (code, _, stderr) = oldroyd(&["run", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stderr.contains("two-dimensional"), "{stderr}");
}

#[test]
fn blow_up_exits_three() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "b.ini", "tg_s2.ini", |t| {
        t.replace("modes_per_axis = 32", "modes_per_axis = 8")
            .replace("t_end = 2", "t_end = 2\nblowup_threshold = 1")
    });
    let out = tmp.path().join("o");
    let (code, _, stderr) = oldroyd(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 3, "{stderr}");
    assert!(stderr.contains("blow-up"));
    assert!(out.join("run_summary.txt").exists());
}

#[test]
fn usage_errors_exit_one() {
    let cfg = configs().join("zero.ini");
    assert_eq!(oldroyd(&["converge", "--config", cfg.to_str().unwrap(), "--levels", "8"]).0, 1);
    assert_eq!(oldroyd(&["converge", "--config", cfg.to_str().unwrap(), "--levels", "16,8"]).0, 1);
    assert_eq!(oldroyd(&["frobnicate"]).0, 1);
    assert_eq!(oldroyd(&["run", "--config", "/nonexistent.ini", "--out", "/tmp/x"]).0, 1);
    assert_eq!(oldroyd(&["--help"]).0, 0);
}

#[test]
fn converge_zero_data_passes() {
    let cfg = configs().join("zero.ini");
    let (code, stdout, _) = oldroyd(&["converge", "--config", cfg.to_str().unwrap(), "--levels", "8,16,32"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("8,16,0.0000000000000000e0,0.0000000000000000e0"), "{stdout}");
}

#[test]
fn verify_hypotheses_exit_codes() {
    let (code, stdout, _) = oldroyd(&["verify-hypotheses", "--config", configs().join("pq.ini").to_str().unwrap(), "--samples", "2000", "--radius", "10"]);
    assert_eq!(code, 0);
    let nu_fit: f64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("nu_fit = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(nu_fit > 0.0);
    let (code, stdout, _) = oldroyd(&["verify-hypotheses", "--config", configs().join("linear.ini").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("nu_fit = 7.500000e-1"), "{stdout}");
    let (code, _, stderr) = oldroyd(&["verify-hypotheses", "--config", configs().join("nonmonotone.ini").to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("monotonicity_violations"));
}

#[test]
fn decompose_branches() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.ini", "tg_s1.ini", |t| {
        t.replace("modes_per_axis = 32", "modes_per_axis = 16").replace("t_end = 2", "t_end = 0.5")
    });
    let out = tmp.path().join("big");
    let (code, stdout, stderr) = oldroyd(&["decompose", "--config", cfg.to_str().unwrap(), "--R-split", "1e6", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{stderr}");
    assert!(stdout.contains("status = pass"));
    let csv = std::fs::read_to_string(out.join("decomposition.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,norm_tau,norm_psi_p,norm_H_2,superposition_residual");
    for line in csv.lines().skip(1) {
        assert_eq!(line.split(',').nth(3).unwrap().parse::<f64>().unwrap(), 0.0);
    }

    let relax = configs().join("relaxation.ini");
    let (code, stdout, stderr) = oldroyd(&["decompose", "--config", relax.to_str().unwrap(), "--R-split", "0.5", "--out", tmp.path().join("r").to_str().unwrap()]);
    assert_eq!(code, 0, "{stderr}");
    assert!(stdout.contains("h_envelope = pass"), "{stdout}");

    let (code, _, _) = oldroyd(&["decompose", "--config", relax.to_str().unwrap(), "--R-split", "-1", "--out", tmp.path().join("n").to_str().unwrap()]);
    assert_eq!(code, 1);
}
