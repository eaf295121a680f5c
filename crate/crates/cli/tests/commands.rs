use std::path::{Path, PathBuf};

use bvkit_cli::{run, Options, Report, Status};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.model"))
}

fn exec(command: &str, model: &str, opts: &Options) -> Report {
    run(command, &fixture(model), opts)
}

fn detail<'a>(r: &'a Report, check: &str, key: &str) -> &'a str {
    let c = r.checks.iter().find(|c| c.name == check).unwrap_or_else(|| panic!("no check {check}"));
    &c.details.iter().find(|d| d.key == key).unwrap_or_else(|| panic!("no detail {key}")).value
}

#[test]
fn quantum_master_equation_fixtures() {
    let o = Options::default();
    let adj = exec("qme", "sl2-adjoint", &o);
    assert_eq!(adj.status, Status::Pass);
    assert_eq!(detail(&adj, "quantum master equation", "residual"), "0");
    let sol = exec("qme", "solvable2", &o);
    assert_eq!(sol.status, Status::Fail);
    assert_eq!(detail(&sol, "quantum master equation", "residual"), "2*i*hbar^2*c1");
    assert_eq!(exec("master", "solvable2", &o).status, Status::Pass);
}

#[test]
fn lie_checks() {
    let o = Options::default();
    for m in ["abelian", "sl2", "sl2-adjoint", "solvable2"] {
        assert_eq!(exec("check-lie", m, &o).status, Status::Pass, "{m}");
        assert_eq!(exec("check-rep", m, &o).status, Status::Pass, "{m}");
        assert_eq!(exec("brst", m, &o).status, Status::Pass, "{m}");
    }
    let brst = exec("brst", "sl2", &o);
    assert_eq!(detail(&brst, "images", "d(ch)"), "ce*cf");
    assert_eq!(detail(&brst, "images", "d(ce)"), "2*ch*ce");
    assert_eq!(exec("check-lie", "gauge", &o).status, Status::Refused);
}

#[test]
fn cohomology_report() {
    let r = exec("ce-cohomology", "sl2", &Options::default());
    assert_eq!(detail(&r, "cohomology", "dims"), "(1, 0, 0, 1)");
    let r = exec("ce-cohomology", "sl2-adjoint", &Options { p: 1, ..Options::default() });
    assert_eq!(r.status, Status::Pass);
    assert_eq!(detail(&r, "cohomology", "H^0"), "0");
    assert_eq!(exec("ce-cohomology", "solvable2", &Options { p: 1, ..Options::default() }).status, Status::Refused);
}

#[test]
fn linf_table() {
    let o = Options::default();
    let r = exec("linf", "linf", &o);
    assert_eq!(r.status, Status::Pass);
    assert_eq!(detail(&r, "components", "degrees"), "1, 2, 3");
    let short = exec("linf", "linf", &Options { rows: 2, ..o });
    assert_eq!(short.status, Status::Pass);
}

#[test]
fn hbar_sequence_rows() {
    let r = exec("hbar-seq", "solvable2", &Options::default());
    assert_eq!(r.status, Status::Fail);
    assert_eq!(detail(&r, "R_2", "residual"), "2*i*c1");
    let total = r.checks.iter().find(|c| c.name == "rows reassemble the quantum residual").unwrap();
    assert_eq!(total.status, Status::Pass);
}

#[test]
fn onshell_points() {
    let o = Options { points: vec!["x=0".into(), "x=1/2".into()], ..Options::default() };
    let r = exec("onshell", "onshell", &o);
    assert_eq!(r.status, Status::Fail);
    assert_eq!(detail(&r, "{S1,S1} + 2{S0,S2}", "residual"), "-2*x*c1_plus*c1");
    assert_eq!(detail(&r, "{S1,S1} + 2{S0,S2}", "off shell"), "no");
    assert_eq!(detail(&r, "point 1", "critical"), "yes");
    assert_eq!(detail(&r, "point 2", "critical"), "no");
    let at_zero = exec("onshell", "onshell", &Options { points: vec!["x=0".into()], ..Options::default() });
    assert_eq!(at_zero.status, Status::Pass);
    let full = exec("onshell", "onshell", &Options { action: Some("S_full".into()), ..Options::default() });
    assert_eq!(full.status, Status::Pass);
    let bad = exec("onshell", "onshell", &Options { points: vec!["c1=0".into()], ..Options::default() });
    assert_eq!(bad.status, Status::Refused);
}

#[test]
fn gauge_experiments() {
    let gauges: Vec<String> = ["0", "F1", "F2", "F3"].map(String::from).to_vec();
    let r = exec("gauge-exp", "gauge", &Options { gauges: gauges.clone(), ..Options::default() });
    assert_eq!(r.status, Status::Pass);
    assert_eq!(detail(&r, "gauge independence", "F: -3*x*t"), "1");
    let s = exec("gauge-exp", "gauge", &Options { gauges, stokes: true, ..Options::default() });
    assert_eq!(s.status, Status::Pass);
    assert_eq!(exec("gauge-exp", "gauge", &Options::default()).status, Status::Refused);
    let even = exec("gauge-exp", "gauge", &Options { gauges: vec!["x".into()], ..Options::default() });
    assert_eq!(even.status, Status::Refused);
}

#[test]
fn omega_and_trace() {
    let o = Options { samples: 10, ..Options::default() };
    assert_eq!(exec("omega-square", "sl2-adjoint", &o).status, Status::Pass);
    let sol = exec("omega-square", "solvable2", &o);
    assert_eq!(sol.checks[0].status, Status::Pass);
    assert_eq!(sol.checks[1].status, Status::Fail);
    let t = exec("trace-cond", "solvable2", &o);
    assert_eq!(detail(&t, "trace condition", "trace"), "-c1");
    assert_eq!(t.checks[1].status, Status::Pass);
}

#[test]
fn identities_are_seeded() {
    let o = Options { seed: 9, samples: 20, ..Options::default() };
    let a = exec("bv-identities", "gauge", &o);
    assert_eq!(a.status, Status::Pass);
    assert_eq!(a.to_json(), exec("bv-identities", "gauge", &o).to_json());
    assert_eq!(detail(&a, "inputs", "polynomials"), "60");
    assert_eq!(exec("bv-identities", "linf", &o).status, Status::Refused);
}

#[test]
fn refusals() {
    let o = Options::default();
    assert_eq!(exec("qme", "malformed", &o).exit_code(), 2);
    assert_eq!(exec("qme", "does-not-exist", &o).exit_code(), 2);
    assert_eq!(exec("frobnicate", "sl2", &o).exit_code(), 2);
    assert_eq!(exec("qme", "linf", &o).exit_code(), 2);
}
