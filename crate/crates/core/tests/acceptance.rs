//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! PASS/FAIL line per criterion and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use rtstokes::contour::modified_contour_rhs;
use rtstokes::graph::graph_rhs;
use rtstokes::harness::{
    experiment_convergence, experiment_decay_fit, experiment_kernel_check, experiment_reversal, Preset, SimConfig,
};
use rtstokes::semigroup::{decay_bound_check, DecayMode};
use rtstokes::spectral::{self, lambda_inverse_mean_free, to_spectral, NormKind, NormSpec, SpectralCoeffs};
use rtstokes::timestep::{integrate_graph, norm_report};
use rtstokes::{ArcChordLimits, CurveState, GraphState, IntegratorConfig, PhysParams, Result};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn kernel_fidelity() -> Result<Outcome> {
    let start = Instant::now();
    let r = experiment_kernel_check()?;
    let err = r.measured["stokeslet_series_max_error"];
    let secs = start.elapsed().as_secs_f64();
    outcome(err < 1e-10 && secs < 30.0, format!("max error {err:.3e} (< 1e-10), {secs:.1} s (< 30 s)"))
}

fn summation_identity() -> Result<Outcome> {
    let r = experiment_kernel_check()?;
    let (s, c) = (r.measured["log_identity_series"], r.measured["log_identity_closed"]);
    let ln2 = 2f64.ln();
    let (es, ec) = ((s + ln2).abs(), (c + ln2).abs());
    outcome(es < 1e-8 && ec < 1e-8, format!("series {s:.12} closed {c:.12}, errors {es:.2e} {ec:.2e} (< 1e-8)"))
}

fn steady_states() -> Result<Outcome> {
    let p = PhysParams::with_jump(4.0)?;
    let mut worst: f64 = 0.0;
    for c in [0.0, 0.37, -1.5] {
        let s = GraphState::from_fn(256, |_| c)?;
        worst = worst.max(max_abs(&graph_rhs(&s, &p)?));
    }
    outcome(worst < 1e-12, format!("max |rhs| {worst:.2e} (< 1e-12)"))
}

fn linear_rates() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (drho, tol, filter) in [(4.0, 0.01, 0.0), (-4.0, 0.02, 1e-13)] {
        for k in 1..=3 {
            let start = Instant::now();
            let mut cfg = SimConfig::single_mode(128, drho, k, 1e-5, 1e-3, 5.0);
            cfg.filter_threshold = filter;
            let r = experiment_decay_fit(&cfg, tol)?;
            let secs = start.elapsed().as_secs_f64();
            let rate = r.measured[&format!("rate_k{k}")];
            let ok = r.pass && secs < 60.0;
            pass &= ok;
            parts.push(format!("drho={drho} k={k}: {rate:.5} ({secs:.1}s)"));
        }
    }
    outcome(pass, format!("{} (1% decay, 2% growth vs (drho/4)/k)", parts.join("; ")))
}

fn cubic_nonlinearity() -> Result<Outcome> {
    let p = PhysParams::with_jump(4.0)?;
    let base = |a: f64| a.cos() + 0.5 * (2.0 * a).sin();
    let eps = [1e-1, 1e-2, 1e-3];
    let mut res = Vec::new();
    for e in eps {
        let s = GraphState::from_fn(128, |a| e * base(a))?;
        let rhs = graph_rhs(&s, &p)?;
        let lin = lambda_inverse_mean_free(&to_spectral(&s.h)?).to_samples();
        let diff: Vec<f64> = rhs.iter().zip(&lin).map(|(r, l)| r + p.rate() * l).collect();
        res.push(spectral::l2_norm_samples(&diff));
    }
    let slope = rtstokes::fit::power_law_exponent(&eps, &res)?;
    outcome(slope >= 2.9, format!("log-log slope {slope:.4} (>= 2.9)"))
}

fn formulation_equivalence() -> Result<Outcome> {
    let p = PhysParams::with_jump(4.0)?;
    let g = GraphState::from_fn(256, |a| 0.1 * a.cos())?;
    let m = modified_contour_rhs(&CurveState::from_graph(&g), &p)?;
    let r = graph_rhs(&g, &p)?;
    let d = m.iter().zip(&r).map(|(a, b)| (a[1] - b).abs()).fold(0.0, f64::max);
    outcome(d < 1e-8, format!("max difference {d:.2e} (< 1e-8)"))
}

fn monotonicity_and_mean() -> Result<Outcome> {
    let p = PhysParams::with_jump(4.0)?;
    let cfg = IntegratorConfig { dt: 1e-3, t_end: 10.0, monitor_every: 1, ..Default::default() };
    let traj = integrate_graph(GraphState::from_fn(128, |a| 0.1 * a.cos())?, &p, &cfg)?.into_result()?;
    let rise = traj.reports.windows(2).map(|w| w[1].l2 - w[0].l2).fold(f64::NEG_INFINITY, f64::max);
    let m0 = traj.reports[0].mean;
    let drift = traj.reports.iter().map(|r| (r.mean - m0).abs()).fold(0.0, f64::max);
    outcome(
        rise <= 1e-12 && drift < 1e-12,
        format!(
            "{} reports, max l2 step increase {rise:.2e} (<= 1e-12), mean drift {drift:.2e} (< 1e-12)",
            traj.reports.len()
        ),
    )
}

fn tnorm_bound() -> Result<Outcome> {
    let p = PhysParams::with_jump(4.0)?;
    let shape = GraphState::from_fn(64, |a| a.cos() + 0.5 * (2.0 * a).sin())?;
    let h3 = norm_report(&shape, 0.0, &ArcChordLimits::default())?.h3;
    let scale = 0.05 / h3;
    let h0 = GraphState::new(shape.h.iter().map(|x| scale * x).collect(), 0.0)?;
    let cfg = IntegratorConfig { dt: 1e-2, t_end: 50.0, monitor_every: 10, ..Default::default() };
    let traj = integrate_graph(h0, &p, &cfg)?.into_result()?;
    let h3_0 = traj.reports[0].h3;
    let sup = traj.sup_tnorm(1.75);
    outcome(
        sup <= 10.0 * h3_0,
        format!("||h0||_H3 = {h3_0:.4}, sup (1+t)^1.75 ||h||_L2 + ||h||_H3 = {sup:.4} (<= {:.3})", 10.0 * h3_0),
    )
}

fn exponential_envelope() -> Result<Outcome> {
    let p = PhysParams::with_jump(4.0)?;
    let h0 = SpectralCoeffs::from_fn(2048, |k| {
        if k == 0 || k.abs() > 512 {
            0.0.into()
        } else {
            (-(k.abs() as f64)).exp().into()
        }
    })?;
    let times: Vec<f64> = (0..=1000).map(|i| i as f64 * 0.1).collect();
    let r = decay_bound_check(&h0, &p, &times, DecayMode::Exponential { nu: 1.0 })?;
    // the report's ratio is ||h(t)||_A e^{sqrt(rho_bar t)} / ||h0||_{A_1}
    let a1 = spectral::norm(&h0, NormSpec::new(0.0, 1.0)?, NormKind::Wiener);
    outcome(
        r.max_ratio <= 3.0,
        format!("max ||h(t)||_A e^(sqrt(t)) = {:.4} ||h0||_A1 (<= 3, ||h0||_A1 = {a1:.1})", r.max_ratio),
    )
}

fn time_reversal() -> Result<Outcome> {
    let cfg = SimConfig::single_mode(128, 4.0, 1, 1e-3, 1e-3, 1.0);
    let r = experiment_reversal(&cfg, 1.0)?;
    let (err, growth) = (r.measured["recovery_error"], r.measured["growth_ratio_a0"]);
    let floor = 0.9 * 1f64.exp();
    outcome(
        err < 1e-4 && growth > floor,
        format!("recovery error {err:.2e} (< 1e-4), A0 growth {growth:.5} (> {floor:.5})"),
    )
}

fn convergence_orders() -> Result<Outcome> {
    let mut cfg = SimConfig::single_mode(64, 20.0, 1, 0.0, 1e-2, 0.5);
    cfg.initial = Preset::RandomAnalytic;
    cfg.amp = Some(0.01);
    cfg.initial_nu = Some(0.2);
    cfg.seed = Some(11);
    cfg.k = None;
    let r = experiment_convergence(&cfg)?;
    let mut fmt: Vec<String> = r.measured.iter().map(|(k, v)| format!("{k} = {v:.3}")).collect();
    fmt.extend(r.info.iter().map(|(k, v)| format!("{k} = {v:.2e}")));
    outcome(r.pass, format!("{} (ratios > 100, orders 4 +- 0.2)", fmt.join(", ")))
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("kernel fidelity", kernel_fidelity),
        ("summation identity", summation_identity),
        ("steady states", steady_states),
        ("linear rates", linear_rates),
        ("cubic nonlinearity", cubic_nonlinearity),
        ("formulation equivalence", formulation_equivalence),
        ("stable monotonicity and mean conservation", monotonicity_and_mean),
        ("tnorm boundedness", tnorm_bound),
        ("exponential decay envelope", exponential_envelope),
        ("time reversal and unstable growth", time_reversal),
        ("convergence orders", convergence_orders),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|s| name.contains(s.as_str())) {
            continue;
        }
        let start = Instant::now();
        let (pass, detail) = match f() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let secs = start.elapsed().as_secs_f64();
        println!("{} {name}: {detail} [{secs:.1}s]", if pass { "PASS" } else { "FAIL" });
        if !pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
