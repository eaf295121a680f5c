//! Subcommand implementations. Every command returns a [`Report`]; module
//! errors become refusals.

use std::collections::BTreeMap;
use std::path::Path;

use bvkit_core::random::{random_poly, rng, PolyShape};
use bvkit_core::{
    gauge_independence_experiment, run_suite, stokes_experiment, BigRational, BvSpace, Derivation, Error, GaugeFermion,
    Gen, LieModel, Matrix, Parity, Poly, Scalar,
};

use crate::expr::parse_expression;
use crate::model::{load_model, Model};
use crate::report::{Check, Report, Status};

pub const COMMANDS: [&str; 13] = [
    "check-lie",
    "check-rep",
    "brst",
    "linf",
    "ce-cohomology",
    "bv-identities",
    "master",
    "qme",
    "hbar-seq",
    "onshell",
    "omega-square",
    "gauge-exp",
    "trace-cond",
];

/// Flags shared by the subcommands; each command reads the ones it needs.
#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub samples: usize,
    pub max_degree: u32,
    /// Highest `L∞` row reported.
    pub rows: u32,
    /// Module degree of the Chevalley–Eilenberg complex.
    pub p: u32,
    pub action: Option<String>,
    pub points: Vec<String>,
    pub gauges: Vec<String>,
    pub psi: Vec<String>,
    pub stokes: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            samples: 100,
            max_degree: 3,
            rows: 3,
            p: 0,
            action: None,
            points: Vec::new(),
            gauges: Vec::new(),
            psi: Vec::new(),
            stokes: false,
        }
    }
}

type Outcome = Result<Vec<Check>, String>;

/// Loads the model and runs `command` on it.
pub fn run(command: &str, model_path: &Path, opts: &Options) -> Report {
    let shown = model_path.display().to_string();
    if !COMMANDS.contains(&command) {
        return Report::refused(command, &shown, format!("unknown subcommand `{command}`"));
    }
    match load_model(model_path) {
        Ok(model) => run_model(command, &shown, &model, opts),
        Err(e) => Report::refused(command, &shown, e),
    }
}

/// Runs `command` on an already parsed model; `shown` labels the report.
pub fn run_model(command: &str, shown: &str, model: &Model, opts: &Options) -> Report {
    let outcome = match command {
        "check-lie" => check_lie(model),
        "check-rep" => check_rep(model),
        "brst" => brst(model),
        "linf" => linf(model, opts),
        "ce-cohomology" => ce_cohomology(model, opts),
        "bv-identities" => bv_identities(model, opts),
        "master" => master(model, opts, false),
        "qme" => master(model, opts, true),
        "hbar-seq" => hbar_seq(model, opts),
        "onshell" => onshell(model, opts),
        "omega-square" => omega_square(model, opts),
        "gauge-exp" => gauge_exp(model, opts),
        "trace-cond" => trace_cond(model),
        other => Err(format!("unknown subcommand `{other}`")),
    };
    let warnings = model.warnings.iter().map(ToString::to_string).collect();
    match outcome {
        Ok(checks) => Report::new(command, shown, warnings, checks),
        Err(reason) => {
            let mut r = Report::refused(command, shown, reason);
            r.warnings = warnings;
            r
        }
    }
}

fn lie(model: &Model) -> Result<&LieModel, String> {
    model.lie.as_ref().ok_or_else(|| "model has no `[lie]` section".to_string())
}

fn bv(model: &Model) -> Result<BvSpace, String> {
    model.bv().map_err(|e| e.to_string())
}

fn core<T>(r: bvkit_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn rational(q: &BigRational) -> String {
    Scalar::from_rational(q.clone()).to_string()
}

/// `Σ v_i·g_i` rendered in the model's canonical form.
fn combination(model: &Model, names: &[String], values: &[BigRational]) -> String {
    let ctx = &model.ctx;
    names
        .iter()
        .zip(values)
        .fold(Poly::zero(ctx), |acc, (n, q)| {
            &acc + &Poly::var(ctx, n).expect("declared").scale(&Scalar::from_rational(q.clone()))
        })
        .to_string()
}

fn matrix(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|r| {
            let entries: Vec<String> = (0..m.cols()).map(|c| rational(m.get(r, c))).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn jacobi(model: &Model, l: &LieModel) -> Check {
    let violations = l.jacobi_check();
    let mut check = Check::new("jacobi", Status::from_bool(violations.is_empty())).detail("dimension", l.dim());
    let names = l.basis_names();
    for v in &violations {
        let (a, b, c) = v.triple;
        check.push(format!("[{},{},{}]", names[a], names[b], names[c]), combination(model, names, &v.residual));
    }
    check
}

fn check_lie(model: &Model) -> Outcome {
    Ok(vec![jacobi(model, lie(model)?)])
}

fn check_rep(model: &Model) -> Outcome {
    let l = lie(model)?;
    let violations = l.rep_check();
    let mut rep = Check::new("representation", Status::from_bool(violations.is_empty()))
        .detail("module dimension", l.module_dim());
    let names = l.basis_names();
    for v in &violations {
        let (a, b) = v.pair;
        rep.push(format!("[{},{}]", names[a], names[b]), matrix(&v.residual));
    }
    Ok(vec![jacobi(model, l), rep])
}

/// The BRST differential of the Lie data, else the declared derivation.
fn differential(model: &Model) -> Result<(Derivation, &'static str), String> {
    if let (Some(l), Some(coords)) = (&model.lie, model.coordinates()) {
        return Ok((core(l.brst_rep(&coords))?, "brst"));
    }
    match &model.derivation {
        Some(d) => Ok((d.clone(), "derivation")),
        None => Err("model has neither `[lie]` nor `[derivation]`".into()),
    }
}

fn brst(model: &Model) -> Outcome {
    let (d, source) = differential(model)?;
    let ctx = &model.ctx;
    let mut images = Check::new("images", Status::Pass).detail("source", source).detail("parity", d.parity());
    for (g, p) in d.images() {
        images.push(format!("d({})", ctx.name(g)), p);
    }
    let square = d.square_residual();
    let mut nil = Check::new("nilpotence", Status::from_bool(square.is_empty()));
    for (g, p) in &square {
        nil.push(format!("d(d({}))", ctx.name(*g)), p);
    }
    Ok(vec![images, nil])
}

fn linf(model: &Model, opts: &Options) -> Outcome {
    let (d, source) = differential(model)?;
    let ctx = &model.ctx;
    let components: Vec<String> = d.homogeneous_components().iter().map(|(n, _)| n.to_string()).collect();
    let report = core(d.linf_relations(opts.rows))?;
    let mut checks = vec![Check::new("components", Status::Pass)
        .detail("source", source)
        .detail("degrees", if components.is_empty() { "none".into() } else { components.join(", ") })];
    for row in &report.rows {
        let mut c = Check::new(format!("row {}", row.n), Status::from_bool(row.holds()));
        for (g, p) in &row.residuals {
            c.push(ctx.name(*g), p);
        }
        checks.push(c);
    }
    let mut over = Check::new(format!("rows above {}", opts.rows), Status::from_bool(report.overflow.is_empty()));
    for (g, p) in &report.overflow {
        over.push(ctx.name(*g), p);
    }
    checks.push(over);
    Ok(checks)
}

fn ce_cohomology(model: &Model, opts: &Options) -> Outcome {
    let l = lie(model)?;
    if !l.jacobi_check().is_empty() || !l.rep_check().is_empty() {
        return Err("Lie data fail the Jacobi or representation check; the complex is undefined".into());
    }
    if opts.p == 1 && l.module_dim() == 0 {
        return Err("p = 1 needs a module".into());
    }
    let coords = model.coordinates().expect("lie present");
    let mats = core(l.ce_matrices(&coords, opts.p))?;
    let dims = core(l.ce_cohomology_dims(&coords, opts.p))?;
    let squares_vanish = mats.windows(2).all(|w| w[1].mul(&w[0]).is_zero());
    let list = |v: Vec<String>| format!("({})", v.join(", "));
    let mut check = Check::new("cohomology", Status::from_bool(squares_vanish))
        .detail("p", opts.p)
        .detail("dims", list(dims.iter().map(ToString::to_string).collect()))
        .detail("cochains", list(mats.iter().map(|m| m.cols().to_string()).collect()))
        .detail("ranks", list(mats.iter().map(|m| m.rank().to_string()).collect()));
    for (q, d) in dims.iter().enumerate() {
        check.push(format!("H^{q}"), d);
    }
    Ok(vec![check])
}

fn bv_identities(model: &Model, opts: &Options) -> Outcome {
    let bv = bv(model)?;
    let shape = PolyShape { max_degree: opts.max_degree, ..PolyShape::default() };
    let report = core(run_suite(&bv, opts.seed, opts.samples, &shape))?;
    let mut checks = vec![Check::new("inputs", Status::Pass)
        .detail("seed", report.seed)
        .detail("samples", report.samples)
        .detail("polynomials", report.inputs)
        .detail("max degree", opts.max_degree)];
    for row in &report.rows {
        let mut c = Check::new(row.identity.name(), Status::from_bool(row.failures == 0))
            .detail("checked", row.checked)
            .detail("failures", row.failures);
        if let Some(args) = &row.first_failure {
            for (k, a) in args.iter().enumerate() {
                c.push(format!("arg{}", k + 1), a);
            }
        }
        checks.push(c);
    }
    Ok(checks)
}

/// Named expression or inline expression.
fn resolve(model: &Model, src: &str) -> Result<Poly, String> {
    if let Some(p) = model.expr(src) {
        return Ok(p.clone());
    }
    parse_expression(src, &model.ctx).map(|p| p.poly).map_err(|e| format!("`{src}`: {e}"))
}

/// The action: `--action NAME`, else `S` from `[exprs]`, else `S0 + hbar*S1`
/// with `S1` generated by the BRST differential of the Lie data.
fn action(model: &Model, bv: &BvSpace, opts: &Options) -> Result<(String, Poly), String> {
    if let Some(name) = &opts.action {
        return Ok((name.clone(), resolve(model, name)?));
    }
    if let Some(s) = model.expr("S") {
        return Ok(("S".into(), s.clone()));
    }
    if let (Some(l), Some(coords)) = (&model.lie, model.coordinates()) {
        let s1 = core(bv.s1_of(&core(l.brst_rep(&coords))?))?;
        let s0 = model.expr("S0").cloned().unwrap_or_else(|| Poly::zero(&model.ctx));
        let label = if model.expr("S0").is_some() { "S0 + hbar*S1" } else { "hbar*S1" };
        return Ok((label.into(), &s0 + &s1.scale(&Scalar::hbar())));
    }
    Err("no action: define `S` in `[exprs]`, pass --action, or give `[lie]` data".into())
}

fn master(model: &Model, opts: &Options, quantum: bool) -> Outcome {
    let bv = bv(model)?;
    let (label, s) = action(model, &bv, opts)?;
    let (name, residual) = if quantum {
        ("quantum master equation", core(bv.quantum_master_residual(&s))?)
    } else {
        ("classical master equation", core(bv.classical_master_residual(&s))?)
    };
    Ok(vec![Check::new(name, Status::from_bool(residual.is_zero()))
        .detail("action", label)
        .detail("S", &s)
        .detail("residual", residual)])
}

fn hbar_seq(model: &Model, opts: &Options) -> Outcome {
    let bv = bv(model)?;
    let (label, s) = action(model, &bv, opts)?;
    let rows = core(bv.hbar_equations(&s))?;
    let qme = core(bv.quantum_master_residual(&s))?;
    let sum = rows.iter().fold(Poly::zero(&model.ctx), |acc, (k, r)| &acc + &r.scale(&Scalar::hbar_pow(*k)));
    let mut checks = vec![Check::new("action", Status::Pass).detail("action", label).detail("S", &s)];
    for (k, r) in &rows {
        checks.push(Check::new(format!("R_{k}"), Status::from_bool(r.is_zero())).detail("residual", r));
    }
    checks.push(
        Check::new("rows reassemble the quantum residual", Status::from_bool(sum == qme)).detail("residual", qme),
    );
    Ok(checks)
}

fn parse_point(model: &Model, src: &str) -> Result<BTreeMap<Gen, BigRational>, String> {
    let mut point = BTreeMap::new();
    for part in src.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part.split_once('=').ok_or_else(|| format!("point entry `{part}` must be `name=value`"))?;
        let g = model.ctx.lookup(name.trim()).map_err(|e| e.to_string())?;
        if model.ctx.parity(g) != Parity::Even || !model.ctx.is_field(g) {
            return Err(format!("point coordinate `{}` is not an even field", name.trim()));
        }
        let v = parse_expression(value.trim(), &model.ctx).map_err(|e| format!("`{value}`: {e}"))?.poly;
        let q = (v.is_constant())
            .then(|| v.constant_term().as_rational())
            .flatten()
            .ok_or_else(|| format!("point value `{}` must be a rational number", value.trim()))?;
        if point.insert(g, q).is_some() {
            return Err(format!("coordinate `{}` given twice", name.trim()));
        }
    }
    Ok(point)
}

fn onshell(model: &Model, opts: &Options) -> Outcome {
    let bv = bv(model)?;
    let (label, s) = action(model, &bv, opts)?;
    let points = opts.points.iter().map(|p| parse_point(model, p)).collect::<Result<Vec<_>, _>>()?;
    let report = core(bv.antifield_report(&s, &points))?;
    let mut checks = vec![
        Check::new("{S0,S1}", Status::from_bool(report.first.is_zero()))
            .detail("action", label)
            .detail("residual", &report.first),
        Check::new("{S1,S1} + 2{S0,S2}", Status::from_bool(report.second.is_zero() || !report.points.is_empty()))
            .detail("off shell", if report.second.is_zero() { "yes" } else { "no" })
            .detail("residual", &report.second),
    ];
    if !report.second.is_zero() {
        let ctx = &model.ctx;
        for (idx, pc) in report.points.iter().enumerate() {
            let coords: Vec<String> =
                pc.point.iter().map(|(g, q)| format!("{}={}", ctx.name(*g), rational(q))).collect();
            let mut c = Check::new(format!("point {}", idx + 1), Status::from_bool(pc.on_shell()))
                .detail("point", coords.join(", "));
            if pc.is_critical() {
                c.push("critical", "yes");
                c.push("residual", pc.residual.as_ref().expect("critical point is evaluated"));
            } else {
                c.push("critical", "no");
                for (g, grad) in &pc.nonzero_gradients {
                    c.push(format!("dS0/d{}", ctx.name(*g)), grad);
                }
            }
            checks.push(c);
        }
        if report.points.is_empty() {
            checks.push(
                Check::new("on shell", Status::Fail)
                    .detail("reason", "second residual is nonzero and no --point given"),
            );
        }
    }
    Ok(checks)
}

fn omega_square(model: &Model, opts: &Options) -> Outcome {
    let bv = bv(model)?;
    let (label, s) = action(model, &bv, opts)?;
    let qme = core(bv.quantum_master_residual(&s))?;
    let mut inputs: Vec<(String, Poly)> = Vec::new();
    for name in &opts.psi {
        inputs.push((name.clone(), resolve(model, name)?));
    }
    let mut r = rng(opts.seed);
    let shape = PolyShape { max_degree: opts.max_degree, hbar: Some((0, 1)), ..PolyShape::default() };
    for k in 0..opts.samples {
        inputs.push((format!("random {}", k + 1), random_poly(&mut r, &model.ctx, &shape)));
    }
    let mut identity =
        Check::new("omega^2 = 1/2 {qme, -}", Status::Pass).detail("action", label).detail("qme residual", &qme);
    let mut nil = Check::new("omega^2 = 0", Status::Pass).detail("tested", inputs.len());
    let half = Scalar::from_ratio(1, 2);
    for (name, psi) in &inputs {
        let twice = core(bv.omega_apply(&s, &core(bv.omega_apply(&s, psi))?))?;
        if twice != core(bv.bracket(&qme, psi))?.scale(&half) {
            identity.status = Status::Fail;
            identity.push(format!("violated on {name}"), psi);
        }
        if !twice.is_zero() && nil.status == Status::Pass {
            nil.status = Status::Fail;
            nil.push("first nonzero", name);
            nil.push("psi", psi);
            nil.push("omega^2 psi", twice);
        }
    }
    Ok(vec![identity, nil])
}

fn gauge_exp(model: &Model, opts: &Options) -> Outcome {
    let bv = bv(model)?;
    let phi = model.integrand.as_ref().ok_or("model has no `[integrand]` section")?;
    if opts.gauges.is_empty() {
        return Err("no gauge fermions given; pass --gauge".into());
    }
    let gauges = opts
        .gauges
        .iter()
        .map(|g| GaugeFermion::new(resolve(model, g)?).map_err(|e| format!("gauge `{g}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let (name, report) = if opts.stokes {
        ("integral of Delta(integrand) vanishes", core(stokes_experiment(&bv, phi, &gauges))?)
    } else {
        match gauge_independence_experiment(&bv, phi, &gauges) {
            Ok(r) => ("gauge independence", r),
            Err(Error::NotDeltaClosed(residual)) => {
                return Ok(vec![Check::new("integrand is Delta-closed", Status::Refused)
                    .detail("integrand", phi)
                    .detail("Delta(integrand)", residual)])
            }
            Err(e) => return Err(e.to_string()),
        }
    };
    let ok = if opts.stokes { report.all_zero() } else { report.all_equal() };
    let mut check = Check::new(name, Status::from_bool(ok)).detail("integrand", phi);
    for (g, v) in gauges.iter().zip(&report.values) {
        check.push(format!("F: {}", g.poly()), v);
    }
    Ok(vec![check])
}

fn trace_cond(model: &Model) -> Outcome {
    let l = lie(model)?;
    let coords = model.coordinates().expect("lie present");
    let trace = core(l.trace_condition(&coords))?;
    let mut checks = vec![Check::new("trace condition", Status::from_bool(trace.is_zero())).detail("trace", &trace)];
    if let Ok(bv) = model.bv() {
        let s1 = core(bv.s1_of(&core(l.brst_rep(&coords))?))?;
        let div = core(bv.delta(&s1))?;
        checks.push(Check::new("Delta(S1) equals the trace", Status::from_bool(div == trace)).detail("Delta(S1)", div));
    }
    Ok(checks)
}
