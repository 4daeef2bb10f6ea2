//! Time integration of the graph and curve equations.

use rtstokes::spectral::to_spectral;
use rtstokes::timestep::{integrate_curve, integrate_graph};
use rtstokes::{CurveState, GraphState, IntegratorConfig, PhysParams};

fn cfg(dt: f64, t_end: f64) -> IntegratorConfig {
    IntegratorConfig { dt, t_end, monitor_every: 10, ..Default::default() }
}

#[test]
fn mean_height_is_conserved() {
    let p = PhysParams::with_jump(4.0).unwrap();
    let g = GraphState::from_fn(64, |a| 0.05 + 0.1 * a.cos() - 0.05 * (2.0 * a).sin()).unwrap();
    let traj = integrate_graph(g, &p, &cfg(1e-2, 10.0)).unwrap().into_result().unwrap();
    let drift = traj.reports.iter().map(|r| (r.mean - 0.05).abs()).fold(0.0, f64::max);
    assert!(drift < 1e-12, "{drift:.3e}");
    assert!((traj.final_state.mean() - 0.05).abs() < 1e-12);
}

#[test]
fn small_unstable_mode_grows_at_the_linear_rate() {
    // drho = -4: h^(1) grows like e^t
    let p = PhysParams::with_jump(-4.0).unwrap();
    let g = GraphState::from_fn(64, |a| 0.01 * a.cos()).unwrap();
    let mut c = cfg(1e-3, 1.0);
    c.filter_threshold = 1e-13;
    let traj = integrate_graph(g, &p, &c).unwrap().into_result().unwrap();
    let amp = to_spectral(&traj.final_state.h).unwrap().coeff(1).norm() * 2.0;
    let predicted = 0.01 * 1f64.exp();
    assert!((amp / predicted - 1.0).abs() < 0.02, "{amp} vs {predicted}");
}

#[test]
fn halving_the_step_divides_the_error_by_sixteen() {
    let p = PhysParams::with_jump(4.0).unwrap();
    let g = || GraphState::from_fn(32, |a| 0.3 * a.cos() + 0.1 * (2.0 * a).sin()).unwrap();
    let solve = |dt: f64| integrate_graph(g(), &p, &cfg(dt, 1.0)).unwrap().into_result().unwrap().final_state.h;
    let (a, b, c) = (solve(0.1), solve(0.05), solve(0.025));
    let diff = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
    let ratio = diff(&a, &b) / diff(&b, &c);
    assert!((ratio - 16.0).abs() < 1.5, "ratio {ratio}");
}

#[test]
fn curve_and_graph_evolutions_agree() {
    let p = PhysParams::with_jump(4.0).unwrap();
    let g = GraphState::from_fn(32, |a| 0.15 * a.cos() + 0.05 * (2.0 * a).sin()).unwrap();
    let c = cfg(1e-2, 0.5);
    let from_graph = integrate_graph(g.clone(), &p, &c).unwrap().into_result().unwrap();
    let from_curve = integrate_curve(CurveState::from_graph(&g), &p, &c).unwrap().into_result().unwrap();
    let back = from_curve.final_state.to_graph().unwrap();
    let d = back.h.iter().zip(&from_graph.final_state.h).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(d < 1e-6, "{d:.3e}");
}
