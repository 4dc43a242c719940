use std::path::Path;
use std::process::{Command, Output};

use anyonchain::{AnyonModel, Complex64, Label};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anyonchain")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = cli(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fibonacci_dims_row() {
    let text = stdout(&["dims", "--model", "fibonacci", "--L", "4", "--J", "0"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "model,k,jext,L,J,dim_bruteforce,dim_verlinde");
    assert_eq!(lines.len(), 2);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[5], "2");
    assert_eq!(fields[6].parse::<f64>().unwrap().round(), 2.0);
}

#[test]
fn analytic_page_curve_has_one_row_per_cut() {
    let text =
        stdout(&["page-curve", "--analytic", "--model", "su2k", "--k", "3", "--jext", "1", "--L", "12", "--J", "0"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "model,k,jext,L,LA,J,exact_aee,asympt_aee,exact_var");
    assert_eq!(lines.len(), 12);
    for (i, line) in lines[1..].iter().enumerate() {
        assert_eq!(line.split(',').nth(4).unwrap(), (i + 1).to_string());
    }
}

#[test]
fn montecarlo_schema_and_reproducibility() {
    let args = ["page-curve", "--montecarlo", "--L", "8", "--LA", "2,4", "--samples", "50", "--seed", "11"];
    let a = stdout(&args);
    assert_eq!(a.lines().next().unwrap(), "model,k,jext,L,LA,J,n_samples,seed,mean_aee,stderr,sample_var");
    assert_eq!(a, stdout(&args));
    let other = stdout(&["page-curve", "--montecarlo", "--L", "8", "--LA", "2,4", "--samples", "50", "--seed", "12"]);
    assert_ne!(a, other);
}

#[test]
fn reals_carry_seventeen_significant_digits() {
    let text = stdout(&["variance", "--L", "10"]);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let mantissa = row[7].split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 17);
}

#[test]
fn config_file_with_flag_override_and_resolved_copy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# dims sweep\nmodel = su2k\nk = 2\nL = 2\nJ = 1\n").unwrap();
    let out = dir.path().join("dims.csv");
    let status = cli(&["dims", "--config", arg(&cfg), "--L", "3", "--J", "1/2", "--out", arg(&out)]);
    assert!(status.status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("su2k,2,1/2,3,1/2,2,"), "{csv}");
    let resolved = std::fs::read_to_string(dir.path().join("dims.config")).unwrap();
    assert!(resolved.contains("L = 3") && resolved.contains("model = su2k") && resolved.contains("jext = 1/2"));
    assert!(!resolved.contains("out"));
}

#[test]
fn plots_are_written_next_to_results() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("levels.csv");
    let plot = dir.path().join("levels.svg");
    let status =
        cli(&["golden-chain", "levels", "--L", "12", "--parity", "+1", "--out", arg(&out), "--plot", arg(&plot)]);
    assert!(status.status.success());
    let svg = std::fs::read_to_string(&plot).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("GOE") && svg.contains("Poisson"));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "L,J,parity,lambda,m,E_m,r_m");
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert!(rows[0].ends_with(','), "edge levels have no ratio");
}

#[test]
fn aee_curve_schema() {
    let text = stdout(&["golden-chain", "aee-curve", "--L", "8", "--LA", "2,4", "--window", "4"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "L,J,parity,lambda,LA,f,mean_aee,n_states,analytic_exact,analytic_asymptotic");
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1].split(',').nth(7).unwrap(), "4");
}

#[test]
fn invalid_input_fails_without_leaving_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    for args in [
        vec!["dims", "--model", "su2k", "--L", "4"],
        vec!["dims", "--model", "nonsense", "--L", "4"],
        vec!["page-curve", "--analytic", "--montecarlo", "--L", "6"],
        vec!["page-curve", "--L", "6"],
        vec!["page-curve", "--analytic", "--L", "6", "--LA", "9"],
        vec!["dims", "--L", "4", "--seed", "1"],
        vec!["qsree", "--L", "10"],
        vec!["golden-chain", "levels", "--L", "8", "--parity", "2"],
    ] {
        let mut full = args.clone();
        full.extend(["--out", arg(&out)]);
        let r = cli(&full);
        assert_eq!(r.status.code(), Some(2), "{args:?}");
        assert!(!String::from_utf8_lossy(&r.stderr).is_empty());
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0, "{args:?}");
    }
    let cfg = dir.path().join("bad.conf");
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(cli(&["dims", "--config", arg(&cfg), "--L", "4"]).status.code(), Some(2));
}

#[test]
fn unwritable_destination_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("x.csv");
    assert_eq!(cli(&["dims", "--L", "4", "--out", arg(&out)]).status.code(), Some(2));
}

#[test]
fn model_files_round_trip_and_broken_models_are_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("fib.json");
    let dumped = stdout(&["model", "dump", "--model", "fibonacci"]);
    std::fs::write(&good, &dumped).unwrap();
    assert_eq!(stdout(&["model", "dump", "--model", arg(&good)]), dumped);
    let report = stdout(&["model", "validate", "--model", arg(&good)]);
    assert!(report.lines().skip(1).all(|l| l.ends_with(",true")));

    let fib = AnyonModel::fibonacci();
    let t = Label(1);
    let key = [t, t, t, t, Label(0), Label(0)];
    let broken = fib.with_f_entry(key, fib.f(t, t, t, t, Label(0), Label(0)) * Complex64::new(1.01, 0.0)).unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, broken.to_json().unwrap()).unwrap();
    let r = cli(&["model", "validate", "--model", arg(&bad)]);
    assert_eq!(r.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&r.stdout).contains("pentagon"));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["page-curve", "--montecarlo", "--L", "9", "--J", "tau", "--samples", "64", "--seed", "3"];
    let one =
        Command::new(env!("CARGO_BIN_EXE_anyonchain")).args(args).env("ANYONCHAIN_THREADS", "1").output().unwrap();
    let four =
        Command::new(env!("CARGO_BIN_EXE_anyonchain")).args(args).env("ANYONCHAIN_THREADS", "4").output().unwrap();
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    let bad =
        Command::new(env!("CARGO_BIN_EXE_anyonchain")).args(args).env("ANYONCHAIN_THREADS", "many").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
