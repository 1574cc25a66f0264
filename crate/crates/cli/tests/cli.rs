use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polaron-dicke"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

// Header line and numeric rows of a CSV, metadata comments dropped.
fn data(path: &Path) -> (String, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().to_string();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

fn meta(path: &Path, key: &str) -> String {
    let text = fs::read_to_string(path).unwrap();
    let prefix = format!("# {key}=");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix).map(str::to_string))
        .unwrap_or_else(|| panic!("{key} missing from {}", path.display()))
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn malformed_config_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[bath\ntemperature_k = 4").unwrap();
    let out = run(&["bath", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn negative_temperature_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["bath", "--set", "bath.temperature_k=-1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none(), "nothing written on error");
}

#[test]
fn unknown_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["bath", "--set", "bath.temprature_k=4", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["sweep", "--axis", "area", "--values", "", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(code(&run(&["no-such-command"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn reproduce_regenerates_identical_files() {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let out = run(&["fig5", "--set", "bath.temperature_k=20", "--out", first.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let sidecar = first.path().join("fig5_lifetimes.json");
    let out = run(&["reproduce", sidecar.to_str().unwrap(), "--out", second.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["fig5_lifetimes.csv", "fig5_lifetimes.json"] {
        assert_eq!(fs::read(first.path().join(name)).unwrap(), fs::read(second.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn area_sweep_peak_excitation_grows_with_area() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "sweep",
        "--axis",
        "area",
        "--values",
        "pi/8,pi,2pi",
        "--set",
        "grid.n_points=301",
        "--set",
        "grid.t_max_ps=600",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = data(&dir.path().join("sweep_area_index.csv"));
    assert_eq!(header, "index,value,status,n_max,file,error");
    assert!(rows.iter().all(|r| r[2] == "ok"));
    let n_max: Vec<f64> = rows.iter().map(|r| num(&r[3])).collect();
    assert!(n_max[0] < n_max[1] && n_max[1] < n_max[2], "{n_max:?}");
}

#[test]
fn temperature_sweep_matches_decoherence_figure() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert!(run(&["sweep", "--axis", "temperature", "--values", "4,77", "--out", d]).status.success());
    assert!(run(&["fig3", "--out", d]).status.success());
    for (idx, fig) in [("000", "fig3_T4K.csv"), ("001", "fig3_T77K.csv")] {
        let sweep = data(&dir.path().join(format!("sweep_temperature_{idx}.csv")));
        let figure = data(&dir.path().join(fig));
        assert_eq!(sweep, figure, "{fig}");
    }
}

#[test]
fn zero_coupling_gives_unit_kappa_and_no_lifetime_gap() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let set = ["--set", "material.deform_e_ev=0", "--set", "material.deform_h_ev=0", "--out", d];
    assert!(run(&[&["bath"], &set[..]].concat()).status.success());
    assert!(run(&[&["fig5"], &set[..]].concat()).status.success());
    assert_eq!(num(&meta(&dir.path().join("bath_constants.csv"), "kappa")), 1.0);
    let (header, rows) = data(&dir.path().join("fig5_lifetimes.csv"));
    let gap = header.split(',').position(|c| c == "relative_gap").unwrap();
    assert!(rows.iter().all(|r| num(&r[gap]) == 0.0));
}

#[test]
fn collective_rates_obey_sum_rule() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(&["bath", "--set", "bath.temperature_k=20", "--out", dir.path().to_str().unwrap()]).status.success());
    let (header, rows) = data(&dir.path().join("bath_constants.csv"));
    let col = |name: &str| header.split(',').position(|c| c == name).unwrap();
    let row = &rows[0];
    let (g, s, a) = (num(&row[col("gamma_per_ps")]), num(&row[col("rate_sym_per_ps")]), num(&row[col("rate_asym_per_ps")]));
    assert!((s + a - 2.0 * g).abs() <= 4.0 * f64::EPSILON * g);
    assert!(s > g && a < g);
}
