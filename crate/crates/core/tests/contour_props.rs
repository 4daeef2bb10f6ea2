//! Contour velocity: spectral accuracy, parametrization independence and arc-chord monitoring.

use std::f64::consts::PI;

use rtstokes::contour::{arc_chord, contour_velocity};
use rtstokes::spectral::{self, to_spectral};
use rtstokes::{ArcChordLimits, CurveState, Error, GraphState, PhysParams};

fn params() -> PhysParams {
    PhysParams::with_jump(4.0).unwrap()
}

fn height(a: f64) -> f64 {
    0.3 * a.cos() + 0.15 * (2.0 * a).sin() - 0.05 * (3.0 * a).cos()
}

fn graph_velocity(n: usize) -> Vec<[f64; 2]> {
    let c = CurveState::from_graph(&GraphState::from_fn(n, height).unwrap());
    contour_velocity(&c, &params()).unwrap()
}

/// Evaluates the trigonometric interpolant of `samples` at `x`.
fn interpolate(samples: &[f64], x: f64) -> f64 {
    let c = to_spectral(samples).unwrap();
    let half = (samples.len() / 2) as i64;
    let mut sum = c.coeff(0).re;
    for k in 1..half {
        let z = c.coeff(k);
        let kx = k as f64 * x;
        sum += 2.0 * (z.re * kx.cos() - z.im * kx.sin());
    }
    sum + c.coeff(-half).re * (half as f64 * x).cos()
}

#[test]
fn velocity_converges_spectrally() {
    let reference = graph_velocity(256);
    let err = |n: usize| {
        let v = graph_velocity(n);
        let stride = 256 / n;
        (0..n)
            .flat_map(|j| (0..2).map(move |c| (j, c)))
            .map(|(j, c)| (v[j][c] - reference[j * stride][c]).abs())
            .fold(0.0, f64::max)
    };
    let (e16, e32) = (err(16), err(32));
    assert!(e16 / e32 > 100.0, "errors {e16:.3e} {e32:.3e}");
}

#[test]
fn velocity_is_independent_of_parametrization() {
    // same curve as a graph and with z1 = alpha + 0.2 sin(alpha)
    let n = 256;
    let on_graph = graph_velocity(n);
    let grid = spectral::grid(n);
    let p1: Vec<f64> = grid.iter().map(|a| 0.2 * a.sin()).collect();
    let z2: Vec<f64> = grid.iter().map(|a| height(a + 0.2 * a.sin())).collect();
    let v = contour_velocity(&CurveState::new(p1, z2, 0.0).unwrap(), &params()).unwrap();
    let comp = |c: usize| on_graph.iter().map(|u| u[c]).collect::<Vec<f64>>();
    let (u1, u2) = (comp(0), comp(1));
    let mut worst: f64 = 0.0;
    for (j, a) in grid.iter().enumerate() {
        let x = a + 0.2 * a.sin();
        worst = worst.max((v[j][0] - interpolate(&u1, x)).abs());
        worst = worst.max((v[j][1] - interpolate(&u2, x)).abs());
    }
    assert!(worst < 1e-8, "{worst:.3e}");
}

#[test]
fn horizontal_translation_of_the_parameter_leaves_velocity_unchanged() {
    // shifting alpha by a grid spacing is a relabelling of the same points
    let n = 64;
    let v = graph_velocity(n);
    let grid = spectral::grid(n);
    let step = 2.0 * PI / n as f64;
    let p1 = vec![step; n];
    let z2: Vec<f64> = grid.iter().map(|a| height(a + step)).collect();
    let w = contour_velocity(&CurveState::new(p1, z2, 0.0).unwrap(), &params()).unwrap();
    for (j, wj) in w.iter().enumerate() {
        let vk = v[(j + 1) % n];
        assert!((wj[0] - vk[0]).abs() < 1e-13 && (wj[1] - vk[1]).abs() < 1e-13);
    }
}

#[test]
fn arc_chord_of_graphs_is_moderate() {
    let c = CurveState::from_graph(&GraphState::from_fn(128, height).unwrap());
    let r = arc_chord(&c, &ArcChordLimits::default()).unwrap();
    assert!(r.ok);
    // a flat line has F between 2 (adjacent nodes) and pi^2/2 (antipodal ones)
    assert!(r.min_f > 1.0 && r.max_f < 10.0, "{r:?}");
    assert!(r.min_tangent_norm >= 1.0);
}

/// `z1 = alpha - (pi/2) sin(alpha)` folds over so that the nodes at `+-pi/2`
/// share `z1 = 0`; they are separated vertically by `2 delta`.
fn folded(n: usize, delta: f64) -> CurveState {
    let grid = spectral::grid(n);
    let p1 = grid.iter().map(|a| -0.5 * PI * a.sin()).collect();
    let z2 = grid.iter().map(|a| 0.3 * a.cos() + delta * a.sin()).collect();
    CurveState::new(p1, z2, 0.0).unwrap()
}

#[test]
fn arc_chord_grows_as_a_fold_closes() {
    let limits = ArcChordLimits::default();
    let near = |delta: f64| arc_chord(&folded(64, delta), &limits).unwrap();
    // F at the pinch is pi^2 / (cosh(2 delta) - 1) ~ pi^2 / (2 delta^2)
    let pinch = |delta: f64| PI * PI / ((2.0 * delta).cosh() - 1.0);
    for delta in [1e-2, 3e-3] {
        let r = near(delta);
        assert!((r.max_f / pinch(delta) - 1.0).abs() < 1e-6, "{r:?} vs {}", pinch(delta));
        assert!(r.ok);
    }
    let closed = folded(64, 1e-4);
    assert!(!arc_chord(&closed, &limits).unwrap().ok);
    assert!(matches!(contour_velocity(&closed, &params()), Err(Error::ArcChord(_))));
}
