//! Kernels of the Stokes problem in the horizontally periodic strip `T x R`.
//!
//! All closed forms are written in terms of
//!
//! ```text
//! D(y) = cosh y2 - cos y1 = 2 sinh^2(y2/2) + 2 sin^2(y1/2),
//! ```
//!
//! evaluated through the right-hand side, which is free of cancellation
//! close to the origin.

use std::f64::consts::PI;

use crate::contour::CurveState;
use crate::error::{Error, Result};
use crate::graph::PhysParams;
use crate::spectral;

/// Offset `y = x - x'` in the strip, with `y1` reduced into `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Displacement {
    pub y1: f64,
    pub y2: f64,
}

impl Displacement {
    pub fn new(y1: f64, y2: f64) -> Self {
        let mut r = y1.rem_euclid(2.0 * PI);
        if r > PI {
            r -= 2.0 * PI;
        }
        Self { y1: r, y2 }
    }

    pub fn is_origin(&self) -> bool {
        self.y1 == 0.0 && self.y2 == 0.0
    }
}

impl std::ops::Neg for Displacement {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.y1, -self.y2)
    }
}

/// 2x2 real matrix value of a kernel.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KernelValue {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl KernelValue {
    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [self.m11 * v[0] + self.m12 * v[1], self.m21 * v[0] + self.m22 * v[1]]
    }

    pub fn max_abs_diff(&self, other: &KernelValue) -> f64 {
        [self.m11 - other.m11, self.m12 - other.m12, self.m21 - other.m21, self.m22 - other.m22]
            .iter()
            .fold(0.0, |a, d| a.max(d.abs()))
    }

    /// Scalar multiple of the identity plus a symmetric matrix `[[a, b], [b, c]]`.
    fn from_parts(scalar: f64, a: f64, b: f64, c: f64) -> Self {
        Self { m11: scalar + a, m12: b, m21: b, m22: scalar + c }
    }
}

/// `cosh y2 - cos y1`, cancellation free.
#[inline]
pub fn cosh_minus_cos(y1: f64, y2: f64) -> f64 {
    let a = (0.5 * y2).sinh();
    let b = (0.5 * y1).sin();
    2.0 * (a * a + b * b)
}

/// Matrix part `-(y2 / (8 pi D)) [[-sinh y2, sin y1], [sin y1, sinh y2]]`,
/// returned as `(a, b, c)` of the symmetric matrix.
#[inline]
fn matrix_part(y1: f64, y2: f64, d: f64) -> (f64, f64, f64) {
    let f = -y2 / (8.0 * PI * d);
    let sh = y2.sinh();
    (-f * sh, f * y1.sin(), f * sh)
}

/// The x1-periodic Stokeslet
///
/// ```text
/// S(y) = (1/8pi) log(2 (cosh y2 - cos y1)) I
///        - y2 / (8 pi (cosh y2 - cos y1)) [[-sinh y2, sin y1], [sin y1, sinh y2]].
/// ```
pub fn stokeslet(y: Displacement) -> Result<KernelValue> {
    if y.is_origin() {
        return Err(Error::Domain("Stokeslet is singular at y = (0, 0)".into()));
    }
    let d = cosh_minus_cos(y.y1, y.y2);
    let (a, b, c) = matrix_part(y.y1, y.y2, d);
    Ok(KernelValue::from_parts((2.0 * d).ln() / (8.0 * PI), a, b, c))
}

/// Regular part of the Stokeslet once the universal weight
/// `(1/8pi) log(4 sin^2(beta/2)) I` is removed, `beta` being the parameter
/// offset between the two curve points.
///
/// At `y = 0, beta = 0` this is the finite diagonal limit along a curve with
/// tangent `w`: scalar `(1/8pi) log |w|^2`, matrix
/// `-(1/8pi) (2/|w|^2) [[-w2^2, w1 w2], [w1 w2, w2^2]]`.
pub fn stokeslet_regular_part_at(y: Displacement, param_offset: f64, tangent: [f64; 2]) -> Result<KernelValue> {
    let s = (0.5 * param_offset).sin();
    let sin2 = s * s;
    match (y.is_origin(), sin2 == 0.0) {
        (true, true) => diagonal_limit(tangent),
        (false, false) => Ok(regular_part_raw(y.y1, y.y2, sin2)),
        (true, false) => Err(Error::Domain(format!(
            "curve self-intersection: distinct parameters at offset {param_offset} coincide"
        ))),
        (false, true) => Err(Error::Domain("zero parameter offset for distinct points".into())),
    }
}

/// [`stokeslet_regular_part_at`] for a graph-like configuration, where the
/// parameter offset equals the horizontal offset `y1`.
pub fn stokeslet_regular_part(y: Displacement, tangent: [f64; 2]) -> Result<KernelValue> {
    stokeslet_regular_part_at(y, y.y1, tangent)
}

/// Off-diagonal regular part given `sin^2(beta/2)`.
#[inline]
pub(crate) fn regular_part_raw(y1: f64, y2: f64, sin2_half_offset: f64) -> KernelValue {
    let d = cosh_minus_cos(y1, y2);
    let (a, b, c) = matrix_part(y1, y2, d);
    let scalar = (d / (2.0 * sin2_half_offset)).ln() / (8.0 * PI);
    KernelValue::from_parts(scalar, a, b, c)
}

pub(crate) fn diagonal_limit(w: [f64; 2]) -> Result<KernelValue> {
    let w2 = w[0] * w[0] + w[1] * w[1];
    if !(w2 > 0.0) {
        return Err(Error::Domain("zero tangent vector at the diagonal".into()));
    }
    let f = -1.0 / (8.0 * PI) * 2.0 / w2;
    Ok(KernelValue::from_parts(w2.ln() / (8.0 * PI), -f * w[1] * w[1], f * w[0] * w[1], f * w[1] * w[1]))
}

/// Fourier coefficient `beta_n(x2)` of the Green function of the
/// x1-periodic bilaplacian, `K(x) = sum_n beta_n(x2) e^{i n x1}`.
pub fn bilap_green_coefficient(n: i64, x2: f64) -> f64 {
    if n == 0 {
        x2.abs() * x2 * x2 / (24.0 * PI)
    } else {
        let a = (n as f64 * x2).abs();
        let na = n.abs() as f64;
        (a + 1.0) * (-a).exp() / (8.0 * PI * na * na * na)
    }
}

/// Green function of `-Delta` on `T x R`: `-(1/4pi) log(cosh y2 - cos y1)`.
pub fn poisson_kernel(y: Displacement) -> Result<f64> {
    if y.is_origin() {
        return Err(Error::Domain("Poisson kernel is singular at y = (0, 0)".into()));
    }
    Ok(-cosh_minus_cos(y.y1, y.y2).ln() / (4.0 * PI))
}

/// Truncated Fourier series of the second derivatives of `K`, used as an
/// independent check of the closed-form Stokeslet.
pub mod series {
    use std::f64::consts::PI;

    use super::{Displacement, KernelValue};

    /// `d^2 K / dx1^2` summed over `1 <= n <= terms`.
    pub fn d11(y: Displacement, terms: usize) -> f64 {
        let a = y.y2.abs();
        let s: f64 = (1..=terms)
            .map(|n| {
                let n = n as f64;
                (a + 1.0 / n) * (-n * a).exp() * (n * y.y1).cos()
            })
            .sum();
        -s / (4.0 * PI)
    }

    /// `d^2 K / dx1 dx2`.
    pub fn d12(y: Displacement, terms: usize) -> f64 {
        let a = y.y2.abs();
        let s: f64 = (1..=terms)
            .map(|n| {
                let n = n as f64;
                (n * y.y1).sin() * (-n * a).exp()
            })
            .sum();
        y.y2 * s / (4.0 * PI)
    }

    /// `d^2 K / dx2^2`.
    pub fn d22(y: Displacement, terms: usize) -> f64 {
        let a = y.y2.abs();
        let s: f64 = (1..=terms)
            .map(|n| {
                let n = n as f64;
                (1.0 / n - a) * (-n * a).exp() * (n * y.y1).cos()
            })
            .sum();
        a / (4.0 * PI) - s / (4.0 * PI)
    }

    /// Stokeslet assembled from the series,
    /// `S = [[K_22, -K_12], [-K_12, K_11]]`.
    pub fn stokeslet(y: Displacement, terms: usize) -> KernelValue {
        let k12 = d12(y, terms);
        KernelValue { m11: d22(y, terms), m12: -k12, m21: -k12, m22: d11(y, terms) }
    }

    /// `sum_{n=1}^{terms} cos(n x1) e^{-n |x2|} / n`, with the final two
    /// partial sums averaged (one Euler-transform step), which removes the
    /// leading `O(1/terms)` oscillation of alternating tails.
    pub fn log_series(x1: f64, x2: f64, terms: usize) -> f64 {
        let a = x2.abs();
        let mut s = 0.0;
        let mut last = 0.0;
        for n in 1..=terms + 1 {
            let nf = n as f64;
            last = (nf * x1).cos() * (-nf * a).exp() / nf;
            s += last;
        }
        s - 0.5 * last
    }

    /// Closed form of [`log_series`]:
    /// `|x2|/2 - (1/2) log(cosh x2 - cos x1) - (log 2)/2`.
    pub fn log_series_closed(x1: f64, x2: f64) -> f64 {
        0.5 * x2.abs() - 0.5 * super::cosh_minus_cos(x1, x2).ln() - 0.5 * 2f64.ln()
    }

    /// Largest tail term `e^{-N|x2|}` bound times a harmonic factor; used to
    /// choose `N` for a target accuracy.
    pub fn tail_bound(x2: f64, terms: usize) -> f64 {
        let a = x2.abs();
        let q = (-a).exp();
        let n = terms as f64;
        (a + 1.0) * q.powf(n + 1.0) / (1.0 - q) / (4.0 * PI)
    }
}

/// Value of a field evaluated off the interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample<T> {
    pub value: T,
    /// Target lies within a few node spacings of the interface, where the
    /// trapezoid rule loses its spectral accuracy.
    pub near_interface: bool,
}

/// Multiple of the local node spacing below which a target counts as close.
pub const NEAR_INTERFACE_SPACINGS: f64 = 5.0;

struct CurveGeometry {
    z1: Vec<f64>,
    z2: Vec<f64>,
    dz1: Vec<f64>,
    dz2: Vec<f64>,
    spacing: f64,
}

impl CurveGeometry {
    fn new(curve: &CurveState) -> Result<Self> {
        let z1 = curve.z1();
        let dz1 = curve.dz1()?;
        let dz2 = spectral::derivative_samples(&curve.z2, 1)?;
        let h = 2.0 * PI / curve.n() as f64;
        let spacing = dz1.iter().zip(&dz2).map(|(a, b)| a.hypot(*b)).fold(0.0, f64::max) * h;
        Ok(Self { z1, z2: curve.z2.clone(), dz1, dz2, spacing })
    }

    fn near(&self, x: [f64; 2]) -> bool {
        let min_d = self
            .z1
            .iter()
            .zip(&self.z2)
            .map(|(&a, &b)| {
                let d = Displacement::new(x[0] - a, x[1] - b);
                d.y1.hypot(d.y2)
            })
            .fold(f64::INFINITY, f64::min);
        min_d < NEAR_INTERFACE_SPACINGS * self.spacing
    }
}

/// Velocity `u(x) = (rho- - rho+) integral_T S(x - z(beta)) z_beta^perp z2(beta) d beta`
/// at a point off the interface.
pub fn velocity_at(x: [f64; 2], curve: &CurveState, params: &PhysParams) -> Result<FieldSample<[f64; 2]>> {
    let g = CurveGeometry::new(curve)?;
    velocity_with(&g, x, params)
}

fn velocity_with(g: &CurveGeometry, x: [f64; 2], params: &PhysParams) -> Result<FieldSample<[f64; 2]>> {
    let n = g.z1.len();
    let mut u = [0.0; 2];
    for j in 0..n {
        let y = Displacement::new(x[0] - g.z1[j], x[1] - g.z2[j]);
        let s = stokeslet(y)?;
        let f = [-g.dz2[j] * g.z2[j], g.dz1[j] * g.z2[j]];
        let v = s.apply(f);
        u[0] += v[0];
        u[1] += v[1];
    }
    let w = params.drho() * 2.0 * PI / n as f64;
    Ok(FieldSample { value: [u[0] * w, u[1] * w], near_interface: g.near(x) })
}

/// Velocities at a batch of points.
pub fn velocity_field(
    points: &[[f64; 2]],
    curve: &CurveState,
    params: &PhysParams,
) -> Result<Vec<FieldSample<[f64; 2]>>> {
    let g = CurveGeometry::new(curve)?;
    points.iter().map(|&x| velocity_with(&g, x, params)).collect()
}

/// Dynamic pressure relative to the hydrostatic state of the flat interface,
/// before the constant offset is fixed.
///
/// The pressure solving `-Delta p = div F` for `F = rho e2` splits into the
/// flat hydrostatic profile `-rho_flat(x2) x2` and the contribution of the
/// density anomaly between the curve and `x2 = 0`; the anomaly integral over
/// the vertical direction reduces to the curve integral
///
/// ```text
/// -(rho- - rho+)/(4 pi) integral_T [log D(x1 - beta, x2) - log D(x - z(beta)) z1'(beta)] d beta.
/// ```
fn raw_dynamic_pressure(g: &CurveGeometry, x: [f64; 2], params: &PhysParams) -> Result<f64> {
    let n = g.z1.len();
    let alphas = spectral::grid(n);
    let mut acc = 0.0;
    for j in 0..n {
        let y = Displacement::new(x[0] - g.z1[j], x[1] - g.z2[j]);
        if y.is_origin() {
            return Err(Error::Domain("pressure evaluated on an interface node".into()));
        }
        let flat = cosh_minus_cos(x[0] - alphas[j], x[1]);
        if flat == 0.0 {
            return Err(Error::Domain("pressure evaluated on the reference line node".into()));
        }
        acc += flat.ln() - cosh_minus_cos(y.y1, y.y2).ln() * g.dz1[j];
    }
    Ok(-params.drho() / (4.0 * PI) * acc * 2.0 * PI / n as f64)
}

/// Dynamic pressure at a set of points, with the additive constant fixed so
/// that the values have zero mean over the set.
pub fn pressure_at(points: &[[f64; 2]], curve: &CurveState, params: &PhysParams) -> Result<Vec<FieldSample<f64>>> {
    let g = CurveGeometry::new(curve)?;
    let raw = points.iter().map(|&x| raw_dynamic_pressure(&g, x, params)).collect::<Result<Vec<_>>>()?;
    let mean = raw.iter().sum::<f64>() / raw.len().max(1) as f64;
    Ok(points.iter().zip(raw).map(|(&x, p)| FieldSample { value: p - mean, near_interface: g.near(x) }).collect())
}

/// Hydrostatic pressure of the flat configuration, `-rho(x2) x2`, the part
/// removed from [`pressure_at`]. Adding it back gives a pressure with
/// `grad p = Delta u - rho e2`.
pub fn hydrostatic_pressure(x2: f64, params: &PhysParams) -> f64 {
    if x2 > 0.0 {
        -params.rho_plus * x2
    } else {
        -params.rho_minus * x2
    }
}
