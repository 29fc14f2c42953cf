use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ssw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssw")).args(args).output().expect("spawn ssw")
}

fn ssw_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssw")).args(args).env(key, value).output().expect("spawn ssw")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn manifest_value(path: &Path, key: &str) -> String {
    let text = fs::read_to_string(path).unwrap();
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("{key} missing from manifest:\n{text}"))
        .to_string()
}

#[test]
fn run_dam_break_emits_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = ssw(&["run", "--case", "dam_break", "--scheme", "o4", "--n", "500", "--out-dir", out]);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in ["dam_break_o4_500.csv", "dam_break_o4_500.vtk", "dam_break_o4_500_entropy.csv", "dam_break_o4_500_manifest.txt"] {
        assert!(dir.path().join(f).is_file(), "missing {f}");
    }
    let csv = fs::read_to_string(dir.path().join("dam_break_o4_500.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "x,h,v1,v2,P11,P12,P22");
    assert_eq!(csv.lines().count(), 501);
    let vtk = fs::read_to_string(dir.path().join("dam_break_o4_500.vtk")).unwrap();
    assert!(vtk.starts_with("# vtk DataFile Version"));
    assert_eq!(vtk.matches("SCALARS").count(), 6);
}

#[test]
fn single_shock_uses_case_gravity() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = ssw(&["run", "--case", "single_shock", "--scheme", "o2", "--n", "500", "--out-dir", out]);
    assert!(o.status.success(), "{}", stderr(&o));
    let g: f64 = manifest_value(&dir.path().join("single_shock_o2_500_manifest.txt"), "g").parse().unwrap();
    assert_eq!(g, 9.81e3);
}

#[test]
fn invalid_scheme_exits_with_usage() {
    let o = ssw(&["run", "--case", "dam_break", "--scheme", "o7"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("o7") && (e.contains("Usage") || e.contains("--help")), "{e}");
}

#[test]
fn invalid_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "cfl=-1\n").unwrap();
    let o = ssw(&["run", "--case", "dam_break", "--scheme", "o2", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));

    fs::write(&cfg, "colour=blue\n").unwrap();
    let o = ssw(&["run", "--case", "dam_break", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"));

    let o = ssw(&["run", "--case", "no_such_case"]);
    assert_eq!(o.status.code(), Some(2));

    let o = ssw(&["run", "--case", "dam_break", "--ny", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solver_abort_exits_3() {
    // Without step halving a CFL number of 5 leaves the admissible set.
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "max_halvings=0\n").unwrap();
    let o = ssw(&[
        "run", "--case", "dam_break", "--scheme", "o1", "--n", "50", "--cfl", "5", "--config", cfg.to_str().unwrap(),
        "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("solver aborted"));
    assert!(!dir.path().join("dam_break_o1_50.csv").exists());
}

#[test]
fn flags_override_config_which_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "case=dam_break\nscheme=o1\nn=40\ncfl=0.3\ntend=0.05\n").unwrap();
    let out = dir.path().join("out");
    let o = ssw(&["run", "--config", cfg.to_str().unwrap(), "--cfl", "0.2", "--out-dir", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let man = out.join("dam_break_o1_40_manifest.txt");
    assert_eq!(manifest_value(&man, "cfl"), "0.2");
    assert_eq!(manifest_value(&man, "tend"), "0.05");
    assert_eq!(manifest_value(&man, "g"), "9.81");
}

#[test]
fn manifest_rerun_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let o = ssw(&[
        "run", "--case", "accuracy_2d", "--scheme", "o3", "--n", "16", "--tend", "0.05", "--out-dir", a.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let man = a.join("accuracy_2d_o3_16_manifest.txt");
    assert_eq!(manifest_value(&man, "ny"), "16");
    let o = ssw_env(&["run", "--config", man.to_str().unwrap(), "--out-dir", b.to_str().unwrap()], "SSW_THREADS", "2");
    assert!(o.status.success(), "{}", stderr(&o));
    for f in ["accuracy_2d_o3_16.csv", "accuracy_2d_o3_16_entropy.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f} differs");
    }
}

#[test]
fn bad_thread_count_is_a_config_error() {
    let o = ssw_env(&["run", "--case", "dam_break", "--n", "20", "--tend", "0.01"], "SSW_THREADS", "zero");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn converge_single_n_has_no_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = ssw(&["converge", "--case", "accuracy_1d", "--scheme", "o3", "--n", "50", "--out-dir", out]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    let row = s.lines().find(|l| l.starts_with("50,")).expect("table row");
    assert!(row.ends_with(",--"), "{row}");
    let csv = fs::read_to_string(dir.path().join("accuracy_1d_o3_convergence.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn converge_orders_approach_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = ssw(&[
        "converge", "--case", "accuracy_1d", "--scheme", "o3", "--n", "100,200", "--wave-speeds", "characteristic",
        "--out-dir", out,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    let order: f64 = s.lines().find(|l| l.starts_with("200,")).unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!(order > 2.5, "{s}");
}

#[test]
fn converge_rejects_case_without_exact_solution() {
    let o = ssw(&["converge", "--case", "dam_break", "--scheme", "o2", "--n", "50"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes_and_is_reproducible() {
    let a = ssw(&["verify", "--seed", "42"]);
    let b = ssw(&["verify", "--seed", "42"]);
    assert!(a.status.success(), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).starts_with("seed 42\n"));
    assert!(stdout(&a).contains("9 of 9 checks passed"));
}

#[test]
fn verify_prints_generated_seed() {
    let o = ssw(&["verify"]);
    assert!(o.status.success());
    let first = stdout(&o).lines().next().unwrap().to_string();
    let seed: u64 = first.strip_prefix("seed ").unwrap().parse().unwrap();
    let again = ssw(&["verify", "--seed", &seed.to_string()]);
    assert_eq!(stdout(&again), stdout(&o));
}
