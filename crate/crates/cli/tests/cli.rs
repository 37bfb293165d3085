use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cbsars_cli::{parse_config, run_experiment, ExitStatus};

fn cbsars(dir: &Path, config: &str, extra: &[&str]) -> Output {
    let cfg = dir.join("run.cfg");
    fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_cbsars"))
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .args(extra)
        .output()
        .unwrap()
}

fn rows(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(2)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

const ONE_PLUS_ONE_SPHERE: &str = "\
mode = trajectory
algorithm = oneplusone
algorithm.kappa_sigma = 0.3333333333333333
algorithm.p_target = 0.2
objective = sphere
n = 10
sigma0 = 1e-6
seed = 2012
replicates = 6
max_evals = 10000
";

#[test]
fn one_plus_one_sphere_traces() {
    let dir = tempfile::tempdir().unwrap();
    let out = cbsars(dir.path(), ONE_PLUS_ONE_SPHERE, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for k in 0..6 {
        let path = dir.path().join(format!("out/trace_{k:03}.csv"));
        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,evals,x_norm,sigma,z_norm,log_eta"));
        let comment = lines.next().unwrap();
        assert!(comment.starts_with("# mode=trajectory algorithm=oneplusone"));
        assert!(comment.contains("seed=2012") && comment.contains(&format!("replicate={k}")));
        let data = rows(&path);
        assert_eq!(data.len(), 10_001);
        // elitist selection: the distance to the optimum never increases
        assert!(data.windows(2).all(|w| w[1][2] <= w[0][2]));
        assert_eq!(data[0][3], 1e-6);
        assert!(data.last().unwrap()[2] < 1e-9);
    }
    let summary = fs::read_to_string(dir.path().join("out/summary.csv")).unwrap();
    assert!(summary.starts_with("replicate,seed,stream,iterations,evals,final_f,evals_to_target,cr,cr_half_width\n# "));
    assert_eq!(summary.lines().count(), 8);
}

#[test]
fn same_seed_gives_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = "mode = trajectory\nalgorithm = xnes\nobjective = quarter@quad:100\nn = 5\nseed = 4\nreplicates = 3\nmax_evals = 3000\n";
    assert_eq!(cbsars(a.path(), cfg, &[]).status.code(), Some(0));
    assert_eq!(cbsars(b.path(), cfg, &[]).status.code(), Some(0));
    for name in ["trace_000.csv", "trace_001.csv", "trace_002.csv", "summary.csv"] {
        let fa = fs::read(a.path().join("out").join(name)).unwrap();
        let fb = fs::read(b.path().join("out").join(name)).unwrap();
        assert_eq!(fa, fb, "{name}");
    }
    assert_ne!(
        fs::read(a.path().join("out/trace_000.csv")).unwrap(),
        fs::read(a.path().join("out/trace_001.csv")).unwrap()
    );
}

#[test]
fn config_errors_exit_one_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = cbsars(dir.path(), "algorithm = csa\nobjective = sphere\nn = 3\nseed = 1\nsigma0 = -1\n", &[]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5") && err.contains("sigma0 must be positive"), "{err}");

    let out = cbsars(dir.path(), "algorithm = csa\nobjective = sphere\nn = 3\nseed = 1\n", &["--set", "speed=3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("speed"));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = cbsars(
        dir.path(),
        "algorithm = sa\nobjective = sphere\nn = 4\nseed = 1\nmax_evals = 800\n",
        &["--seed", "77", "--mode", "normalized-chain", "--set", "record_every=10"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("out/trace_000.csv")).unwrap();
    assert!(text.lines().nth(1).unwrap().contains("mode=normalized-chain") && text.contains("seed=77"));
    // p = 8 at n = 4: 100 iterations, rows every 10
    let data = rows(&dir.path().join("out/trace_000.csv"));
    assert_eq!(data.len(), 11);
    assert_eq!(data[10][1], 800.0);
    // x_norm = z_norm * sigma on reconstructed rows
    for r in &data {
        assert!((r[2] - r[4] * r[3]).abs() <= 1e-12 * r[2]);
    }
}

#[test]
fn unreached_required_target_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "algorithm = oneplusone\nobjective = sphere\nn = 10\nseed = 1\nmax_evals = 50\ntarget_f = 1e-30\nrequire_target = true\n";
    assert_eq!(cbsars(dir.path(), cfg, &[]).status.code(), Some(2));
    let cfg = cfg.replace("require_target = true", "require_target = false");
    assert_eq!(cbsars(dir.path(), &cfg, &[]).status.code(), Some(0));
}

#[test]
fn invariance_suite_reports_failures_with_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let pass = "mode = invariance-suite\nalgorithm = oneplusone\nobjective = quad:1e6\nn = 10\nseed = 1\n";
    let out = cbsars(dir.path(), pass, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = fs::read_to_string(dir.path().join("out/invariance.csv")).unwrap();
    assert_eq!(text.lines().count(), 2 + 15);

    // fast convergence exhausts double precision in the translated run
    let fail = "mode = invariance-suite\nalgorithm = xnes\nobjective = sphere\nn = 10\nseed = 1\n";
    let out = cbsars(dir.path(), fail, &[]);
    assert_eq!(out.status.code(), Some(3));
    let text = fs::read_to_string(dir.path().join("out/invariance.csv")).unwrap();
    assert!(text.lines().any(|l| l.starts_with("id,translation x0=1") && l.contains(",fail,")));
    assert!(text.lines().any(|l| l.starts_with("id,monotone") && l.contains(",pass,")));
}

#[test]
fn scaling_invariance_check_mode() {
    let dir = tempfile::tempdir().unwrap();
    let out = cbsars(dir.path(), "mode = si-check\nobjective = arctan@pnorm:1\nn = 3\nseed = 5\nreplicates = 2\ntrials = 200\n", &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("out/si_check.csv")).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains(",consistent,")).count(), 2);
}

#[test]
fn cr_estimate_positive_for_one_plus_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = parse_config(
        "mode = cr-estimate\nalgorithm = oneplusone\nobjective = sphere\nn = 10\nseed = 3\nreplicates = 2\nmax_evals = 20000\n",
    )
    .unwrap();
    let outcome = run_experiment(&cfg, dir.path()).unwrap();
    assert_eq!(outcome.status, ExitStatus::Success);
    assert_eq!(outcome.files.len(), 1);
    let summary = rows_of_summary(&dir.path().join("summary.csv"));
    for cr in summary {
        assert!(cr > 0.01 && cr < 0.03, "{cr}");
    }
}

fn rows_of_summary(path: &Path) -> Vec<f64> {
    fs::read_to_string(path).unwrap().lines().skip(2).map(|l| l.split(',').nth(7).unwrap().parse().unwrap()).collect()
}

#[test]
fn constant_sigma_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "mode = constant-sigma\nobjective = sphere\nn = 10\nsigma0 = 1e-6\nseed = 0\nmax_evals = 50000000\nrecord_every = 100000\n";
    let out = cbsars(dir.path(), cfg, &[]);
    assert_eq!(out.status.code(), Some(0));
    let summary = fs::read_to_string(dir.path().join("out/summary.csv")).unwrap();
    let row = summary.lines().nth(2).unwrap();
    let evals: f64 = row.split(',').nth(6).unwrap().parse().unwrap();
    assert!(evals > 6.2e6 / 3.0 && evals < 6.2e6 * 3.0, "{evals}");
}
