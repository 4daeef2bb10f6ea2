//! Interface as an arbitrary periodic curve `z(alpha) = (alpha + p1(alpha), z2(alpha))`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphState, OffsetTable, PhysParams};
use crate::kernels::{cosh_minus_cos, diagonal_limit, regular_part_raw};
use crate::spectral::{self, lambda_inverse_mean_free, to_spectral, SpectralCoeffs};

/// Curve samples on the uniform grid. `z1` is stored as its periodic
/// perturbation `p1 = z1 - alpha`, so `z1(alpha + 2 pi) = z1(alpha) + 2 pi`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveState {
    pub p1: Vec<f64>,
    pub z2: Vec<f64>,
    pub t: f64,
}

impl CurveState {
    pub fn new(p1: Vec<f64>, z2: Vec<f64>, t: f64) -> Result<Self> {
        spectral::check_grid_size(z2.len())?;
        if p1.len() != z2.len() {
            return Err(Error::Precondition(format!("p1 has {} samples, z2 has {}", p1.len(), z2.len())));
        }
        Ok(Self { p1, z2, t })
    }

    /// The graph `x2 = h(x1)` with the trivial parametrization `z1 = alpha`.
    pub fn from_graph(graph: &GraphState) -> Self {
        Self { p1: vec![0.0; graph.n()], z2: graph.h.clone(), t: graph.t }
    }

    pub fn n(&self) -> usize {
        self.z2.len()
    }

    pub fn z1(&self) -> Vec<f64> {
        spectral::grid(self.n()).iter().zip(&self.p1).map(|(a, p)| a + p).collect()
    }

    pub fn dz1(&self) -> Result<Vec<f64>> {
        Ok(spectral::derivative_samples(&self.p1, 1)?.into_iter().map(|d| 1.0 + d).collect())
    }

    pub fn dz2(&self) -> Result<Vec<f64>> {
        spectral::derivative_samples(&self.z2, 1)
    }

    /// Resamples the curve as a graph on the uniform grid in `x1`, solving
    /// `z1(s) = x1` by Newton iteration on the trigonometric interpolant.
    pub fn to_graph(&self) -> Result<GraphState> {
        let n = self.n();
        let p1c = to_spectral(&self.p1)?;
        let dp1c = spectral::derivative(&p1c, 1)?;
        let z2c = to_spectral(&self.z2)?;
        let dz1 = self.dz1()?;
        if let Some((node, &value)) = dz1.iter().enumerate().find(|(_, d)| **d <= 0.0) {
            return Err(Error::GraphParametrizationLost { node, value });
        }
        let xs = spectral::grid(n);
        let z1 = self.z1();
        let mut h = Vec::with_capacity(n);
        for (i, &x) in xs.iter().enumerate() {
            // start from the node whose z1 is closest, modulo the period
            let start = (0..n)
                .min_by(|&a, &b| {
                    let da = (z1[a] - x + PI).rem_euclid(2.0 * PI) - PI;
                    let db = (z1[b] - x + PI).rem_euclid(2.0 * PI) - PI;
                    da.abs().total_cmp(&db.abs())
                })
                .unwrap_or(i);
            let mut s = xs[start] - ((z1[start] - x + PI).rem_euclid(2.0 * PI) - PI);
            let mut converged = false;
            for _ in 0..60 {
                let f = s + eval_trig(&p1c, s) - x;
                let df = 1.0 + eval_trig(&dp1c, s);
                if df <= 0.0 {
                    return Err(Error::GraphParametrizationLost { node: i, value: df });
                }
                let step = f / df;
                s -= step;
                if step.abs() < 1e-15 * (1.0 + s.abs()) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::Precondition(format!("inverse of z1 did not converge at x1 = {x}")));
            }
            h.push(eval_trig(&z2c, s));
        }
        GraphState::new(h, self.t)
    }
}

/// Value of the trigonometric interpolant at an arbitrary parameter.
fn eval_trig(c: &SpectralCoeffs, s: f64) -> f64 {
    let n = c.n() as i64;
    c.iter()
        .map(|(k, ck)| {
            // split the Nyquist mode symmetrically so the interpolant is real
            if k == -n / 2 {
                ck.re * (k as f64 * s).cos()
            } else {
                ck.re * (k as f64 * s).cos() - ck.im * (k as f64 * s).sin()
            }
        })
        .sum()
}

/// Extrema of the arc-chord function
/// `F(alpha, beta) = beta^2 / (cosh(z2(alpha) - z2(alpha - beta)) - cos(z1(alpha) - z1(alpha - beta)))`
/// with `F(alpha, 0) = 2 / |z_alpha|^2`, over grid pairs and `beta` in `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcChordReport {
    pub min_f: f64,
    pub max_f: f64,
    pub min_tangent_norm: f64,
    pub ok: bool,
}

/// Abort thresholds for the arc-chord monitor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcChordLimits {
    pub max_f: f64,
    pub min_tangent_norm: f64,
}

impl Default for ArcChordLimits {
    fn default() -> Self {
        Self { max_f: 1e6, min_tangent_norm: 1e-6 }
    }
}

/// Tangent length treated as zero: spectral derivatives carry round-off.
pub const DEGENERATE_TANGENT: f64 = 1e-12;

pub fn arc_chord(curve: &CurveState, limits: &ArcChordLimits) -> Result<ArcChordReport> {
    let n = curve.n();
    let z1 = curve.z1();
    let dz1 = curve.dz1()?;
    let dz2 = curve.dz2()?;
    let mut min_tangent_norm = f64::INFINITY;
    let mut min_f = f64::INFINITY;
    let mut max_f: f64 = 0.0;
    for i in 0..n {
        let w = dz1[i].hypot(dz2[i]);
        if w < DEGENERATE_TANGENT {
            return Err(Error::DegenerateParametrization { node: i, min_tangent_norm: w });
        }
        min_tangent_norm = min_tangent_norm.min(w);
        let diag = 2.0 / (w * w);
        min_f = min_f.min(diag);
        max_f = max_f.max(diag);
    }
    let betas = spectral::grid(n);
    for i in 0..n {
        for j in 1..n {
            let m = (i + n - j) % n;
            let beta = if betas[j] > PI { betas[j] - 2.0 * PI } else { betas[j] };
            let d = cosh_minus_cos(z1[i] - z1[m], curve.z2[i] - curve.z2[m]);
            let f = if d > 0.0 { beta * beta / d } else { f64::INFINITY };
            min_f = min_f.min(f);
            max_f = max_f.max(f);
        }
    }
    let ok = max_f.is_finite() && max_f <= limits.max_f && min_tangent_norm > limits.min_tangent_norm;
    Ok(ArcChordReport { min_f, max_f, min_tangent_norm, ok })
}

/// Boundary-integral velocity of the interface,
/// `N(z)(alpha) = (rho- - rho+) integral_T S(z(alpha) - z(beta)) z_beta^perp(beta) z2(beta) d beta`
/// with `z_beta^perp = (-dz2, dz1)`.
///
/// The weight `(1/8pi) log(4 sin^2((alpha - beta)/2))` multiplies a function
/// of `beta` alone and is applied as a Fourier multiplier; the remainder is
/// smooth and summed by the trapezoid rule.
pub fn contour_velocity(curve: &CurveState, params: &PhysParams) -> Result<Vec<[f64; 2]>> {
    let report = arc_chord(curve, &ArcChordLimits::default())?;
    if !report.ok {
        return Err(Error::ArcChord(report));
    }
    contour_velocity_unchecked(curve, params)
}

pub(crate) fn contour_velocity_unchecked(curve: &CurveState, params: &PhysParams) -> Result<Vec<[f64; 2]>> {
    let n = curve.n();
    let z1 = curve.z1();
    let z2 = &curve.z2;
    let dz1 = curve.dz1()?;
    let dz2 = curve.dz2()?;
    let f1: Vec<f64> = dz2.iter().zip(z2).map(|(d, z)| -d * z).collect();
    let f2: Vec<f64> = dz1.iter().zip(z2).map(|(d, z)| d * z).collect();
    // (1/8pi) integral log(4 sin^2) f = -(1/4) Lambda_0^{-1} f
    let s1 = lambda_inverse_mean_free(&to_spectral(&f1)?).to_samples();
    let s2 = lambda_inverse_mean_free(&to_spectral(&f2)?).to_samples();
    let tab = OffsetTable::new(n);
    let mut r1 = vec![0.0; n];
    let mut r2 = vec![0.0; n];
    for i in 0..n {
        let k = diagonal_limit([dz1[i], dz2[i]])?;
        let [a, b] = k.apply([f1[i], f2[i]]);
        r1[i] += a;
        r2[i] += b;
        // the regular part is even in (y, beta): each pair is evaluated once
        for m in (i + 1)..n {
            let k = regular_part_raw(z1[i] - z1[m], z2[i] - z2[m], tab.sin2_half[m - i]);
            let [a, b] = k.apply([f1[m], f2[m]]);
            r1[i] += a;
            r2[i] += b;
            let [a, b] = k.apply([f1[i], f2[i]]);
            r1[m] += a;
            r2[m] += b;
        }
    }
    let w = 2.0 * PI / n as f64;
    let drho = params.drho();
    Ok((0..n).map(|i| [drho * (-0.25 * s1[i] + w * r1[i]), drho * (-0.25 * s2[i] + w * r2[i])]).collect())
}

fn lambda_from(n_vel: &[[f64; 2]], dz1: &[f64]) -> Result<Vec<f64>> {
    n_vel
        .iter()
        .zip(dz1)
        .enumerate()
        .map(
            |(node, (v, &d))| {
                if d.abs() < 1e-12 {
                    Err(Error::GraphParametrizationLost { node, value: d })
                } else {
                    Ok(-v[0] / d)
                }
            },
        )
        .collect()
}

/// `lambda = -N1 / dz1`, the tangential velocity that cancels horizontal motion.
pub fn tangential_lambda(curve: &CurveState, params: &PhysParams) -> Result<Vec<f64>> {
    let dz1 = curve.dz1()?;
    let vel = contour_velocity(curve, params)?;
    lambda_from(&vel, &dz1)
}

/// `N(z) + lambda dz/dalpha`, whose horizontal component vanishes.
pub fn modified_contour_rhs(curve: &CurveState, params: &PhysParams) -> Result<Vec<[f64; 2]>> {
    let dz1 = curve.dz1()?;
    let dz2 = curve.dz2()?;
    let vel = contour_velocity(curve, params)?;
    let lambda = lambda_from(&vel, &dz1)?;
    Ok(vel.iter().zip(lambda.iter().zip(&dz2)).map(|(v, (l, d2))| [0.0, v[1] + l * d2]).collect())
}
