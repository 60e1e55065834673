use std::f64::consts::PI;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{divergence_rate, resonance_report, subcritical_report, BoundReport, GrowthKind};
use crate::eigenflow::{blow_up_time, eigen_closed_form, eigen_rk4, ric_n_inequality_margin, EigenFlowState};
use crate::error::Error;
use crate::flow::{evolve, lift_u, BoundaryData, EndpointData, FlowConfig, Trajectory};
use crate::geometry::{
    check_riccati, curvature_snapshot, identity_suite, observed_orders, IdentityOptions, IdentitySuite,
    WarpedProductMetric,
};
use crate::numerics::sup_norm;
use crate::stationary::{critical_phi, is_resonant, stationary_residual, stationary_solution, Regime};
use crate::topology::ferus_check;

use super::config::{EigenflowConfig, FlowSection, RunConfig, StationaryConfig, SweepConfig, VerifyConfig};
use super::output::RunDir;
use super::{Cli, CliError, Command};

/// Final-row tolerance of an exact single-mode run.
const EXACT_MODE_TOL: f64 = 1e-4;
/// Smallest acceptable observed order of the identity residuals.
const MIN_ORDER: f64 = 1.8;

pub fn dispatch(cli: &Cli) -> Result<(), CliError> {
    if let Command::Ferus { p, n } = cli.command {
        return ferus(p, n);
    }
    let cfg = match (&cli.config, &cli.command) {
        (Some(path), _) => RunConfig::load(path)?,
        (None, Command::Verify) => RunConfig::default(),
        (None, cmd) => return Err(CliError::Config(format!("`{}` needs --config", cmd.name()))),
    };
    let run_id = cli
        .run_id
        .clone()
        .or_else(|| cfg.run_id.clone())
        .unwrap_or_else(|| cli.command.name().to_string());
    let ctx = Context { out: &cli.out, run_id: &run_id, force: cli.force, plot: cfg.output.plot_script };
    match cli.command {
        Command::Stationary => stationary(&ctx, section(&cfg.stationary, "stationary")?),
        Command::Evolve => {
            let mut flow = section(&cfg.flow, "flow")?.clone();
            if let Some(b) = cli.backend {
                flow.backend = b.into();
            }
            if let Some(theta) = &cli.theta {
                flow.theta = theta.clone();
            }
            evolve_cmd(&ctx, &flow)
        }
        Command::Eigenflow => eigenflow(&ctx, section(&cfg.eigenflow, "eigenflow")?),
        Command::Sweep => sweep(&ctx, section(&cfg.sweep, "sweep")?),
        Command::Verify => verify(&ctx, &cfg.verify.clone().unwrap_or_default(), cfg.seed),
        Command::Ferus { .. } => unreachable!(),
    }
}

struct Context<'a> {
    out: &'a Path,
    run_id: &'a str,
    force: bool,
    plot: bool,
}

impl Context<'_> {
    fn open(&self, command: &str, parameters: &impl Serialize) -> Result<RunDir, CliError> {
        let params = serde_json::to_value(parameters).unwrap_or(Value::Null);
        RunDir::create(self.out, self.run_id, self.force, command, params)
    }
}

fn section<'a, T>(s: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
    s.as_ref().ok_or_else(|| CliError::Config(format!("config has no [{name}] section")))
}

/// Errors that describe bad input rather than a failed computation.
fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidConfig(_)
            | Error::InvalidArgument(_)
            | Error::InvalidBoundary(_)
            | Error::InvalidMetric(_)
            | Error::BoundaryMismatch { .. }
    )
}

fn classify(e: Error) -> CliError {
    if is_input_error(&e) {
        CliError::config(e)
    } else {
        CliError::compute(e)
    }
}

fn ferus(p: u64, n: u64) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Config("ferus needs n >= 1".into()));
    }
    println!("{}", ferus_check(p, n));
    Ok(())
}

fn stationary(ctx: &Context, cfg: &StationaryConfig) -> Result<(), CliError> {
    if cfg.m < 4 {
        return Err(CliError::Config(format!("stationary.m = {} must be >= 4", cfg.m)));
    }
    let result = stationary_solution(cfg.phi_param, cfg.l, cfg.mu0, cfg.mu1, cfg.family_c).map_err(classify)?;
    if result.regime == Regime::ResonanceUnsolvable {
        return Err(CliError::Compute(format!(
            "ResonanceUnsolvable: Phi = (pi/l)^2 admits no stationary profile for mu0 = {}, mu1 = {}",
            cfg.mu0, cfg.mu1
        )));
    }
    let residual = stationary_residual(&result, cfg.m).map_err(CliError::compute)?;
    let samples = result.sample(cfg.m).ok_or_else(|| CliError::compute(Error::MissingSolution))?;

    let mut run = ctx.open("stationary", cfg)?;
    let mut csv = run.csv("stationary.csv", "stationary", &["x", "phi"])?;
    for (i, v) in samples.iter().enumerate() {
        let x = if i == cfg.m { cfg.l } else { cfg.l * i as f64 / cfg.m as f64 };
        csv.floats(&[x, *v])?;
    }
    csv.finish()?;
    let h = cfg.l / cfg.m as f64;
    // Stencil error h^2 |phi''''| / 12 = h^2 Phi^2 |phi| / 12, plus round-off.
    let tol = h * h * cfg.phi_param.powi(2) * sup_norm(&samples) / 12.0 + 64.0 * f64::EPSILON * sup_norm(&samples) / (h * h);
    let report = json!({
        "regime": result.regime,
        "stable_under_flow": result.stable_under_flow,
        "family_param": result.family_param,
        "residual": residual.interior_max,
        "residual_tolerance": tol,
        "endpoints_exact": residual.endpoints_exact,
    });
    run.json("report.json", &report)?;
    run.check("residual", residual.interior_max <= tol, format!("{:e} <= {tol:e}", residual.interior_max));
    run.check("endpoints_exact", residual.endpoints_exact, "phi(0) = mu0, phi(l) = mu1");
    run.result("regime", result.regime);
    if ctx.plot {
        run.text("plot.gp", &plot_script("stationary.png", "x", "phi", &["'stationary.csv' using 1:2 with lines title 'phi'"]))?;
    }
    run.finish()?;
    Ok(())
}

fn check_thetas(thetas: &[f64]) -> Result<(), CliError> {
    match thetas.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
        Some(t) => Err(CliError::Config(format!("theta = {t} must lie in (0, 1)"))),
        None => Ok(()),
    }
}

fn validated_flow(flow: &FlowSection) -> Result<(WarpedProductMetric, BoundaryData, FlowConfig), CliError> {
    check_thetas(&flow.theta)?;
    let fc = flow.flow_config();
    fc.validate().map_err(CliError::config)?;
    let bd = flow.boundary_data();
    bd.validate(flow.t_end).map_err(CliError::config)?;
    let phi0 = flow.initial_metric()?;
    let [mu0, mu1] = bd.mu(0.0);
    let gap = (phi0.phi()[0] - mu0).abs().max((phi0.phi()[flow.m] - mu1).abs());
    if gap > 1e-8 {
        return Err(CliError::config(Error::BoundaryMismatch { gap }));
    }
    Ok((phi0, bd, fc))
}

fn write_trajectory(run: &mut RunDir, rel: &str, traj: &Trajectory) -> Result<(), CliError> {
    let mut csv = run.csv(rel, "trajectory", &["t", "x", "phi"])?;
    for (t, snap) in traj.times.iter().zip(&traj.snapshots) {
        for (i, v) in snap.phi().iter().enumerate() {
            csv.floats(&[*t, snap.x(i), *v])?;
        }
    }
    csv.finish()
}

fn write_curvature(run: &mut RunDir, traj: &Trajectory) -> Result<(), CliError> {
    let mut csv = run.csv("curvature.csv", "curvature", &["t", "x", "a", "rho", "tau1", "ric_n"])?;
    for (t, snap) in traj.times.iter().zip(&traj.snapshots) {
        let Ok(c) = curvature_snapshot(snap) else { continue };
        for i in 0..=snap.m() {
            csv.floats(&[*t, snap.x(i), c.a[i], c.rho[i], c.tau1[i], c.ric_n[i]])?;
        }
    }
    csv.finish()
}

/// `A sin(j pi x / l) e^{(Phi - (j pi / l)^2) t}` against the last snapshot.
fn exact_mode_error(traj: &Trajectory, amplitude: f64, mode: usize) -> f64 {
    let l = traj.l();
    let k = mode as f64 * PI / l;
    let t = *traj.times.last().unwrap();
    let growth = ((traj.phi_param - k * k) * t).exp();
    let last = traj.last();
    (0..=last.m())
        .map(|i| (last.phi()[i] - amplitude * growth * (k * last.x(i)).sin()).abs())
        .fold(0.0, f64::max)
}

/// Convergence estimate appropriate to the regime, or the reason there is
/// none.
fn bound_reports(traj: &Trajectory, thetas: &[f64]) -> Result<Vec<BoundReport>, String> {
    let l = traj.l();
    let t_min = traj.times.iter().copied().find(|t| *t > 0.0).ok_or("no positive snapshot time")?;
    let resonant = is_resonant(traj.phi_param, l);
    if !resonant && traj.phi_param >= critical_phi(l) {
        return Err("no estimate for Phi > (pi/l)^2".into());
    }
    thetas
        .iter()
        .map(|&theta| {
            if resonant {
                resonance_report(traj, theta, t_min)
            } else {
                subcritical_report(traj, theta, t_min)
            }
            .map_err(|e| e.to_string())
        })
        .collect()
}

fn evolve_cmd(ctx: &Context, flow: &FlowSection) -> Result<(), CliError> {
    let (phi0, bd, fc) = validated_flow(flow)?;
    let output = evolve(&phi0, &bd, &fc).map_err(classify)?;
    let mut run = ctx.open("evolve", flow)?;

    let mut plots = Vec::new();
    for (name, traj) in [("fd", &output.fd), ("spectral", &output.spectral)] {
        if let Some(traj) = traj {
            let rel = format!("trajectory_{name}.csv");
            write_trajectory(&mut run, &rel, traj)?;
            plots.push(format!("'{rel}' using 2:3:1 with points palette pt 7 ps 0.3 title '{name}'"));
        }
    }
    let primary = output.primary();
    write_curvature(&mut run, primary)?;
    run.result("snapshots", primary.len());

    if let Some((amplitude, mode)) = flow.initial.exact_mode(&bd) {
        for traj in [&output.fd, &output.spectral].into_iter().flatten() {
            let err = exact_mode_error(traj, amplitude, mode);
            let name = format!("exact_solution_error_{}", backend_name(traj));
            run.check(&name, err <= EXACT_MODE_TOL, format!("{err:e} <= {EXACT_MODE_TOL:e}"));
            run.result(&name, err);
        }
    }
    if let (Some(fd), Some(sp)) = (&output.fd, &output.spectral) {
        let dist = fd.distance_to(sp).map_err(CliError::compute)?;
        let max = dist.iter().map(|d| d.1).fold(0.0, f64::max);
        run.result("cross_backend_distance", max);
    }

    let stable = !is_resonant(fc.phi_param, flow.l) && fc.phi_param < critical_phi(flow.l);
    let fit = divergence_rate(primary).ok();
    let diverged = primary.diverged_at.is_some() || (!stable && fit.is_some_and(|f| f.kind == GrowthKind::Exponential));
    run.result("diverged", diverged);
    run.result("diverged_at", primary.diverged_at);
    run.result("growth", fit);

    if !flow.theta.is_empty() {
        match bound_reports(primary, &flow.theta) {
            Ok(reports) => {
                let mut csv = run.csv("bounds.csv", "bounds", &["theta", "t", "observed", "bound", "margin"])?;
                for r in &reports {
                    for k in 0..r.times.len() {
                        csv.floats(&[r.theta, r.times[k], r.observed_deviation[k], r.bound_value[k], r.margin[k]])?;
                    }
                    let scale = r.observed_deviation.iter().copied().fold(1.0, f64::max);
                    let slack = 1e-8 * scale;
                    run.check(
                        &format!("bound_theta_{}", r.theta),
                        r.holds(slack),
                        format!("min margin {:e}, truncation tail {:e}", r.min_margin(), r.truncation_tail),
                    );
                }
                csv.finish()?;
                plots.push("'bounds.csv' using 2:3 with lines title 'observed'".into());
            }
            Err(reason) => run.result("bounds_skipped", reason),
        }
    }

    let opts = IdentityOptions::default();
    let identities = if primary.diverged_at.is_some() {
        json!({ "skipped": "trajectory overflowed" })
    } else {
        match identity_suite(primary, &opts) {
            Ok(suite) => json!({ "options": opts, "suite": suite }),
            Err(e) => json!({ "skipped": e.to_string() }),
        }
    };
    run.json("identities.json", &identities)?;

    if ctx.plot {
        let lines: Vec<&str> = plots.iter().map(String::as_str).filter(|p| p.contains("trajectory")).collect();
        run.text("plot.gp", &plot_script("trajectory.png", "x", "phi", &lines))?;
    }
    run.finish()?;
    Ok(())
}

fn backend_name(traj: &Trajectory) -> &'static str {
    match traj.backend {
        crate::flow::Backend::Spectral => "spectral",
        _ => "fd",
    }
}

fn eigenflow(ctx: &Context, cfg: &EigenflowConfig) -> Result<(), CliError> {
    let state = EigenFlowState::new(cfg.mus.clone(), cfg.phi_param).map_err(CliError::config)?;
    if !(cfg.t_end >= cfg.t_start && cfg.samples >= 2 && cfg.rk4_dt > 0.0) {
        return Err(CliError::Config("eigenflow needs t_end >= t_start, samples >= 2, rk4_dt > 0".into()));
    }
    let t_star = cfg
        .mus
        .iter()
        .filter(|m| **m > 0.0)
        .filter_map(|&m| blow_up_time(m, cfg.phi_param))
        .fold(f64::INFINITY, f64::min);

    let mut run = ctx.open("eigenflow", cfg)?;
    let mut header: Vec<String> = vec!["t".into()];
    header.extend((1..=cfg.mus.len()).map(|i| format!("mu_{i}")));
    header.extend(["ric_n".into(), "margin".into()]);
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut csv = run.csv("eigenflow.csv", "eigenflow", &header_refs)?;
    let mut last_t = None;
    for k in 0..cfg.samples {
        let t = cfg.t_start + (cfg.t_end - cfg.t_start) * k as f64 / (cfg.samples - 1) as f64;
        if t >= t_star {
            break;
        }
        let mus = state.at(t).map_err(CliError::compute)?;
        let ric: f64 = mus.iter().sum();
        let margin = ric_n_inequality_margin(&state, t).map_err(CliError::compute)?;
        let mut row = vec![t];
        row.extend(&mus);
        row.extend([ric, margin]);
        csv.floats(&row)?;
        last_t = Some(t);
    }
    csv.finish()?;
    if t_star.is_finite() {
        run.result("blow_up_time", t_star);
    }

    // RK4 from t = 0 to the last written row.
    if let Some(t) = last_t {
        let steps = ((t.abs() / cfg.rk4_dt).ceil() as usize).max(1);
        let mut worst: f64 = 0.0;
        for &mu in cfg.mus.iter().filter(|m| **m > 0.0) {
            let rk = eigen_rk4(mu, cfg.phi_param, t / steps as f64, steps);
            let exact = eigen_closed_form(mu, cfg.phi_param, t).map_err(CliError::compute)?;
            let approx = rk.values.last().copied().unwrap_or(f64::NAN);
            worst = worst.max((approx - exact).abs() / exact.abs().max(1.0));
        }
        run.check("rk4_agreement", worst <= 1e-6, format!("relative gap {worst:e} at t = {t}"));
        run.result("rk4_relative_gap", worst);
    }
    if ctx.plot {
        let lines: Vec<String> = (1..=cfg.mus.len())
            .map(|i| format!("'eigenflow.csv' using 1:{} with lines title 'mu_{i}'", i + 1))
            .collect();
        let refs: Vec<&str> = lines.iter().map(String::as_str).collect();
        run.text("plot.gp", &plot_script("eigenflow.png", "t", "mu", &refs))?;
    }
    run.finish()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
struct SweepRow {
    index: usize,
    l: f64,
    phi_factor: f64,
    phi_param: f64,
    boundary: String,
    classification: String,
    rate: f64,
    final_sup: f64,
    error: String,
    artifacts: Vec<String>,
}

/// Long-time class of one run and the matching rate: decay rate of the
/// deviation for `converge`, exponential rate for `diverge`, slope of the
/// first sine coefficient for `linear-growth`.
fn classify_run(traj: &Trajectory) -> (String, f64) {
    let l = traj.l();
    let phi = traj.phi_param;
    let fit = divergence_rate(traj).ok();
    if traj.diverged_at.is_some() {
        return ("diverge".into(), fit.map_or(f64::NAN, |f| f.rate));
    }
    let kind = fit.map(|f| f.kind);
    if is_resonant(phi, l) {
        return match (kind, fit) {
            (Some(GrowthKind::Linear), Some(f)) => ("linear-growth".into(), f.slope),
            (Some(GrowthKind::Exponential), Some(f)) => ("diverge".into(), f.rate),
            _ => ("resonance".into(), 0.0),
        };
    }
    if phi < critical_phi(l) {
        let [t0, t1] = traj.boundary.mu_tilde();
        if let Some(reference) = stationary_solution(phi, l, t0, t1, None).ok().and_then(|s| s.sample(traj.m())) {
            let dev = traj.deviation_from(&reference);
            let (d0, d1) = (dev[0], *dev.last().unwrap());
            let t = *traj.times.last().unwrap();
            if d1 <= 0.5 * d0 || d1 <= 1e-12 {
                let rate = if d1 > 0.0 && d0 > 0.0 { (d0 / d1).ln() / t } else { f64::INFINITY };
                return ("converge".into(), rate);
            }
        }
        return ("bounded".into(), 0.0);
    }
    match (kind, fit) {
        (Some(GrowthKind::Exponential), Some(f)) => ("diverge".into(), f.rate),
        (Some(GrowthKind::Linear), Some(f)) => ("linear-growth".into(), f.slope),
        _ => ("bounded".into(), 0.0),
    }
}

fn sweep_run(root: &Path, index: usize, cfg: &SweepConfig, l: f64, factor: f64, bd: &BoundaryData) -> Result<SweepRow, String> {
    let phi_param = factor * critical_phi(l);
    let steps = (cfg.t_end / cfg.dt).round().max(1.0) as usize;
    let fc = FlowConfig::new(phi_param, cfg.t_end, cfg.dt, cfg.m).with_stride((steps / 100).max(1));
    let phi0 = cfg.initial.build(phi_param, l, 1, cfg.m, bd).map_err(|e| e.to_string())?;
    let traj = crate::flow::evolve_fd(&phi0, bd, &fc).map_err(|e| e.to_string())?;
    let (classification, rate) = classify_run(&traj);

    let dir = format!("runs/{index:03}");
    let rel = format!("{dir}/final_profile.csv");
    std::fs::create_dir_all(root.join(&dir)).map_err(|e| e.to_string())?;
    let mut csv = super::output::CsvFile::create(&root.join(&rel), "profile", &["x", "phi"]).map_err(|e| e.to_string())?;
    let last = traj.last();
    for i in 0..=last.m() {
        csv.floats(&[last.x(i), last.phi()[i]]).map_err(|e| e.to_string())?;
    }
    csv.finish().map_err(|e| e.to_string())?;
    Ok(SweepRow {
        index,
        l,
        phi_factor: factor,
        phi_param,
        boundary: String::new(),
        classification,
        rate,
        final_sup: sup_norm(last.phi()),
        error: String::new(),
        artifacts: vec![rel],
    })
}

fn sweep(ctx: &Context, cfg: &SweepConfig) -> Result<(), CliError> {
    if cfg.lengths.iter().any(|l| !(*l > 0.0)) || cfg.phi_factors.is_empty() || cfg.boundaries.is_empty() {
        return Err(CliError::Config("sweep needs positive lengths, phi_factors and boundaries".into()));
    }
    FlowConfig::new(0.0, cfg.t_end, cfg.dt, cfg.m).validate().map_err(CliError::config)?;
    for b in &cfg.boundaries {
        b.to_data().validate(cfg.t_end).map_err(CliError::config)?;
    }
    let mut grid = Vec::new();
    for &l in &cfg.lengths {
        for &f in &cfg.phi_factors {
            for b in &cfg.boundaries {
                grid.push((grid.len(), l, f, b));
            }
        }
    }
    let mut run = ctx.open("sweep", cfg)?;
    let root = run.root().to_path_buf();
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|&(index, l, f, b)| {
            let mut row = sweep_run(&root, index, cfg, l, f, &b.to_data()).unwrap_or_else(|error| SweepRow {
                index,
                l,
                phi_factor: f,
                phi_param: f * critical_phi(l),
                boundary: String::new(),
                classification: "error".into(),
                rate: f64::NAN,
                final_sup: f64::NAN,
                error,
                artifacts: vec![],
            });
            row.boundary = b.label();
            row
        })
        .collect();

    for row in &rows {
        for a in &row.artifacts {
            run.adopt(a);
        }
    }
    let mut csv = run.csv(
        "summary.csv",
        "sweep",
        &["index", "l", "phi_factor", "phi", "boundary", "classification", "rate", "final_sup", "error"],
    )?;
    for r in &rows {
        csv.row([
            r.index.to_string(),
            super::output::fmt_f64(r.l),
            super::output::fmt_f64(r.phi_factor),
            super::output::fmt_f64(r.phi_param),
            r.boundary.clone(),
            r.classification.clone(),
            super::output::fmt_f64(r.rate),
            super::output::fmt_f64(r.final_sup),
            r.error.clone(),
        ])?;
    }
    csv.finish()?;
    let failed = rows.iter().filter(|r| !r.error.is_empty()).count();
    run.result("runs", rows.len());
    run.result("failed_runs", failed);
    run.check("runs_completed", failed == 0, format!("{failed} of {} runs failed", rows.len()));
    run.finish()?;
    if failed == rows.len() {
        return Err(CliError::Compute(format!("all {failed} sweep runs failed")));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct OrderStudy {
    name: &'static str,
    resolutions: Vec<usize>,
    suites: Vec<IdentitySuite>,
    /// `[riccati, A, tau1, R_N]`; `null` where the identity is exact.
    orders: [Option<f64>; 4],
}

fn order_study(
    name: &'static str,
    resolutions: &[usize],
    opts: &IdentityOptions,
    make: impl Fn(usize) -> (WarpedProductMetric, BoundaryData, FlowConfig),
) -> Result<OrderStudy, CliError> {
    let suites = resolutions
        .iter()
        .map(|&m| {
            let (phi0, bd, cfg) = make(m);
            let traj = crate::flow::evolve_fd(&phi0, &bd, &cfg).map_err(CliError::compute)?;
            identity_suite(&traj, opts).map_err(CliError::compute)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(OrderStudy { name, resolutions: resolutions.to_vec(), orders: observed_orders(&suites), suites })
}

/// Positive random profile `c0 + sum_j b_j cos(j pi x / l)`, `c0 >= 2`,
/// `|b_j| <= 0.5`.
fn random_profile(rng: &mut ChaCha8Rng, l: f64, m: usize) -> WarpedProductMetric {
    let c0 = rng.gen_range(2.0..3.0);
    let b: Vec<f64> = (0..3).map(|_| rng.gen_range(-0.5..0.5)).collect();
    WarpedProductMetric::from_fn(l, 1, m, |x| {
        c0 + b.iter().enumerate().map(|(j, bj)| bj * ((j + 1) as f64 * PI * x / l).cos()).sum::<f64>()
    })
    .expect("profile is positive")
}

fn verify(ctx: &Context, cfg: &VerifyConfig, seed: u64) -> Result<(), CliError> {
    let res = &cfg.resolutions;
    if res.len() < 2 || res[0] < 8 || res.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(CliError::Config("verify.resolutions needs >= 2 entries, each twice the last, starting at >= 8".into()));
    }
    let mut run = ctx.open("verify", &json!({ "verify": cfg, "seed": seed }))?;
    let opts = IdentityOptions::default();

    let exact = order_study("exact_mode", res, &opts, |m| {
        let dt = 0.25 / m as f64;
        let phi0 = WarpedProductMetric::from_fn(1.0, 1, m, |x| (PI * x).sin()).unwrap();
        (phi0, BoundaryData::zero(), FlowConfig::new(0.0, 0.2, dt, m))
    })?;
    let late = IdentityOptions { t_min: 0.1, ..opts };
    let subcritical = order_study("subcritical", res, &late, |m| {
        let dt = 0.25 / m as f64;
        let phi = 0.5 * PI * PI;
        let bd = BoundaryData::new(EndpointData::exponential(1.0, 0.5, 1.0), EndpointData::exponential(2.0, 0.5, 1.0));
        let st = stationary_solution(phi, 1.0, 1.0, 2.0, None).unwrap();
        let phi0 = WarpedProductMetric::from_fn(1.0, 1, m, |x| {
            st.eval(x).unwrap() + lift_u(&bd, 0.0, x, 1.0) + 0.3 * x * (1.0 - x)
        })
        .unwrap();
        (phi0, bd, FlowConfig::new(phi, 0.3, dt, m))
    })?;
    for study in [&exact, &subcritical] {
        let worst = study.orders.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        run.check(
            &format!("identity_orders_{}", study.name),
            worst >= MIN_ORDER,
            format!("orders {:?}, need >= {MIN_ORDER} or exact", study.orders),
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_riccati_order = f64::INFINITY;
    let mut worst_scaling: f64 = 0.0;
    for _ in 0..cfg.random_cases {
        let l = rng.gen_range(0.5..2.0);
        let m = res[0].max(50);
        let coarse = random_profile(&mut rng.clone(), l, m);
        let fine = random_profile(&mut rng, l, 2 * m);
        let r0 = check_riccati(&coarse).map_err(CliError::compute)?.max;
        let r1 = check_riccati(&fine).map_err(CliError::compute)?.max;
        worst_riccati_order = worst_riccati_order.min((r0 / r1).log2());

        let c = rng.gen_range(0.1..10.0);
        let base = curvature_snapshot(&fine).map_err(CliError::compute)?;
        let scaled = curvature_snapshot(&fine.scaled(c).map_err(CliError::compute)?).map_err(CliError::compute)?;
        // A second difference over phi carries round-off up to 4 eps kappa / h^2
        // with kappa = max phi / min phi <= 4 for these profiles.
        let roundoff = 64.0 * f64::EPSILON / fine.dx().powi(2);
        for (u, v) in base.a.iter().zip(&scaled.a).chain(base.rho.iter().zip(&scaled.rho)) {
            worst_scaling = worst_scaling.max((u - v).abs() / ((1.0 + u.abs()) * roundoff));
        }
    }
    run.check(
        "riccati_order_random",
        cfg.random_cases == 0 || worst_riccati_order >= 1.5,
        format!("worst observed order {worst_riccati_order:.3} over {} profiles", cfg.random_cases),
    );
    // a and rho are invariant under phi -> c phi.
    run.check("scaling_invariance", worst_scaling <= 1.0, format!("gap {worst_scaling:.3} x round-off level"));

    let mut worst_rk: f64 = 0.0;
    for _ in 0..cfg.random_cases {
        let phi = rng.gen_range(0.1..3.0);
        let mu0 = phi * rng.gen_range(0.05..1.0);
        let t = rng.gen_range(0.0..5.0);
        let steps = ((t / 2.5e-4) as usize).max(1);
        let rk = eigen_rk4(mu0, phi, t / steps as f64, steps);
        let exact = eigen_closed_form(mu0, phi, t).map_err(CliError::compute)?;
        worst_rk = worst_rk.max((rk.values[steps] - exact).abs());
    }
    run.check("eigenflow_rk4", worst_rk <= 1e-8, format!("worst gap {worst_rk:e}"));

    run.json(
        "verify.json",
        &json!({
            "order_studies": [exact, subcritical],
            "riccati_worst_order": worst_riccati_order,
            "scaling_gap": worst_scaling,
            "eigenflow_rk4_gap": worst_rk,
        }),
    )?;
    let failed: Vec<String> = run.checks().iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    let manifest = run.finish()?;
    for c in &manifest.checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    if !failed.is_empty() {
        return Err(CliError::Compute(format!("failed checks: {}", failed.join(", "))));
    }
    Ok(())
}

/// Gnuplot script rendering `lines` to a PNG next to the data.
fn plot_script(png: &str, xlabel: &str, ylabel: &str, lines: &[&str]) -> String {
    format!(
        "# gnuplot script; run from this directory: gnuplot plot.gp\n\
         set datafile separator ','\n\
         set key autotitle columnhead\n\
         set terminal pngcairo size 900,600\n\
         set output '{png}'\n\
         set xlabel '{xlabel}'\n\
         set ylabel '{ylabel}'\n\
         plot {}\n",
        lines.join(", \\\n     ")
    )
}
