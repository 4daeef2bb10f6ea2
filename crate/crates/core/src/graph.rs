//! Evolution of an interface given as a graph `x2 = h(alpha)`.
//!
//! Three independent evaluations of the same right-hand side are provided:
//!
//! * [`graph_rhs`], the linear part `-rho_bar Lambda^{-1} h` plus the four
//!   nonlinear integrals `I1..I4`, each with a smooth integrand handled by
//!   the trapezoid rule and a logarithmic weight applied as an exact Fourier
//!   multiplier;
//! * [`graph_rhs_direct`], the three-integral form with the weight
//!   `log(4 sin^2(beta/2))` split off the full logarithm;
//! * [`series_rhs_cubic`], the Fourier-side expansion truncated at cubic
//!   order, valid for small amplitude.
//!
//! Here `rho_bar = (rho- - rho+)/4` is the linear decay rate of mode `k = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{
    self, derivative, lambda_inverse, lambda_inverse_mean_free, to_spectral, NormKind, NormSpec, SpectralCoeffs,
};

/// Densities of the lower (`rho_minus`) and upper (`rho_plus`) fluid, with
/// viscosity and gravity scaled to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub rho_minus: f64,
    pub rho_plus: f64,
}

impl PhysParams {
    pub fn new(rho_minus: f64, rho_plus: f64) -> Result<Self> {
        if !rho_minus.is_finite() || !rho_plus.is_finite() {
            return Err(Error::Config("densities must be finite".into()));
        }
        if rho_minus == rho_plus {
            return Err(Error::Config("equal densities: the interface does not move".into()));
        }
        Ok(Self { rho_minus, rho_plus })
    }

    /// Parameters with a given density jump `rho- - rho+`, upper density 1.
    pub fn with_jump(drho: f64) -> Result<Self> {
        Self::new(1.0 + drho, 1.0)
    }

    pub fn drho(&self) -> f64 {
        self.rho_minus - self.rho_plus
    }

    /// `rho_bar = (rho- - rho+)/4`.
    pub fn rate(&self) -> f64 {
        0.25 * self.drho()
    }

    /// Heavier fluid below.
    pub fn is_stable(&self) -> bool {
        self.drho() > 0.0
    }

    /// Densities exchanged, flipping the sign of the jump.
    pub fn swapped(&self) -> Self {
        Self { rho_minus: self.rho_plus, rho_plus: self.rho_minus }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphState {
    pub h: Vec<f64>,
    pub t: f64,
}

impl GraphState {
    pub fn new(h: Vec<f64>, t: f64) -> Result<Self> {
        spectral::check_grid_size(h.len())?;
        Ok(Self { h, t })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(spectral::grid(n).into_iter().map(f).collect(), 0.0)
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn mean(&self) -> f64 {
        self.h.iter().sum::<f64>() / self.n() as f64
    }
}

/// Tail/peak coefficient ratio above which a field counts as unresolved.
pub const RESOLUTION_LIMIT: f64 = 0.05;

fn resolved_spectrum(h: &[f64]) -> Result<SpectralCoeffs> {
    let c = to_spectral(h)?;
    let ratio = spectral::spectral_tail_ratio(&c);
    if ratio > RESOLUTION_LIMIT {
        return Err(Error::Resolution { n: h.len(), ratio });
    }
    Ok(c)
}

/// Trigonometric tables of the quadrature offsets `beta_j = 2 pi j / n`.
pub(crate) struct OffsetTable {
    pub sin2_half: Vec<f64>,
    pub sin: Vec<f64>,
    pub cos: Vec<f64>,
}

impl OffsetTable {
    pub fn new(n: usize) -> Self {
        let betas = spectral::grid(n);
        Self {
            sin2_half: betas.iter().map(|b| (0.5 * b).sin().powi(2)).collect(),
            sin: betas.iter().map(|b| b.sin()).collect(),
            cos: betas.iter().map(|b| b.cos()).collect(),
        }
    }
}

/// The four nonlinear integrals at every node, trapezoid parts only.
struct Integrals {
    i1: Vec<f64>,
    /// `integral T1 h(alpha - beta) h_alpha(alpha - beta)`, still to be
    /// multiplied by `h_alpha(alpha)`.
    i2_smooth: Vec<f64>,
    i3: Vec<f64>,
    i4: Vec<f64>,
}

fn nonlinear_integrals(h: &[f64], ha: &[f64]) -> Integrals {
    let n = h.len();
    let tab = OffsetTable::new(n);
    let w = 2.0 * PI / n as f64;
    let mut out = Integrals { i1: vec![0.0; n], i2_smooth: vec![0.0; n], i3: vec![0.0; n], i4: vec![0.0; n] };
    for i in 0..n {
        let (hi, hai) = (h[i], ha[i]);
        let (mut s1, mut s2, mut s3, mut s4) = (0.0, 0.0, 0.0, 0.0);
        for j in 1..n {
            // node alpha - beta_j
            let m = if i >= j { i - j } else { i + n - j };
            let (hm_, ham) = (h[m], ha[m]);
            let dh = hi - hm_;
            let sh = (0.5 * dh).sinh();
            let sh2 = sh * sh;
            let sinh_dh = 2.0 * sh * (1.0 + sh2).sqrt();
            let s2b = tab.sin2_half[j];
            let t1 = (sh2 / s2b).ln_1p();
            s1 += t1 * hm_;
            s2 += t1 * hm_ * ham;
            let t2 = hm_ * dh / (2.0 * (sh2 + s2b));
            s3 += t2 * (hai * ham - 1.0) * sinh_dh;
            s4 += t2 * (hai + ham) * tab.sin[j];
        }
        // diagonal limits beta -> 0, h_- ~ h_alpha beta
        let q = 1.0 + hai * hai;
        let l = q.ln();
        s1 += l * hi;
        s2 += l * hi * hai;
        s3 += 2.0 * hi * hai * hai * (hai * hai - 1.0) / q;
        s4 += 4.0 * hi * hai * hai / q;
        out.i1[i] = s1 * w;
        out.i2_smooth[i] = s2 * w;
        out.i3[i] = s3 * w;
        out.i4[i] = s4 * w;
    }
    out
}

/// `h_t = -rho_bar Lambda^{-1} h + (rho_bar / 2 pi)(I1 + I2 + I3 + I4)`.
///
/// The linear term uses the mean-free `Lambda^{-1}`, so that constants are
/// steady states and the mean of `h` is conserved.
pub fn graph_rhs(state: &GraphState, params: &PhysParams) -> Result<Vec<f64>> {
    let hc = resolved_spectrum(&state.h)?;
    let ha = derivative(&hc, 1)?.to_samples();
    let lin = lambda_inverse_mean_free(&hc).to_samples();
    let g: Vec<f64> = state.h.iter().zip(&ha).map(|(a, b)| a * b).collect();
    // integral log(sin^2(beta/2)) g(alpha - beta) d beta = -2 pi Lambda^{-1} g
    let log_sin_g = lambda_inverse(&to_spectral(&g)?).to_samples();
    let nl = nonlinear_integrals(&state.h, &ha);
    let rb = params.rate();
    Ok((0..state.n())
        .map(|i| {
            let i2 = ha[i] * (nl.i2_smooth[i] - 2.0 * PI * log_sin_g[i]);
            let sum = nl.i1[i] + i2 + nl.i3[i] + nl.i4[i];
            -rb * lin[i] + rb / (2.0 * PI) * sum
        })
        .collect())
}

/// The graph equation in its three-integral form,
///
/// ```text
/// h_t = (drho/8pi) integral log(2(cosh h_- - cos beta)) h(alpha-beta) [1 + h_a(alpha) h_a(alpha-beta)]
///     + (drho/8pi) integral h(alpha-beta) h_- / (cosh h_- - cos beta)
///                  [(h_a h_a' - 1) sinh h_- + (h_a + h_a') sin beta],
/// ```
///
/// evaluated directly from `cosh - cos`, with only the weight
/// `log(4 sin^2(beta/2))` applied spectrally.
pub fn graph_rhs_direct(state: &GraphState, params: &PhysParams) -> Result<Vec<f64>> {
    let n = state.n();
    let h = &state.h;
    let hc = resolved_spectrum(h)?;
    let ha = derivative(&hc, 1)?.to_samples();
    let g: Vec<f64> = h.iter().zip(&ha).map(|(a, b)| a * b).collect();
    let lh = lambda_inverse_mean_free(&hc).to_samples();
    let lg = lambda_inverse_mean_free(&to_spectral(&g)?).to_samples();
    let tab = OffsetTable::new(n);
    let w = 2.0 * PI / n as f64;
    let mut out = vec![0.0; n];
    for i in 0..n {
        let (hi, hai) = (h[i], ha[i]);
        let mut acc = 0.0;
        for j in 1..n {
            let m = (i + n - j) % n;
            let dh = hi - h[m];
            let d = dh.cosh() - tab.cos[j];
            let remainder = (d / (2.0 * tab.sin2_half[j])).ln();
            acc += remainder * h[m] * (1.0 + hai * ha[m]);
            acc += h[m] * dh / d * ((hai * ha[m] - 1.0) * dh.sinh() + (hai + ha[m]) * tab.sin[j]);
        }
        let q = 1.0 + hai * hai;
        acc += q.ln() * hi * q + 2.0 * hi * hai * hai;
        // weight log(4 sin^2) has zero mean and coefficients -1/|k| (normalized)
        let singular = -2.0 * PI * (lh[i] + hai * lg[i]);
        out[i] = params.drho() / (8.0 * PI) * (acc * w + singular);
    }
    Ok(out)
}

/// Truncation order of [`series_rhs_cubic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOrder {
    /// Only the semigroup generator `-rho_bar Lambda^{-1} h`.
    Linear,
    /// Generator plus the cubic terms of `I1..I4`.
    Cubic,
}

/// Largest `A^1` norm accepted by [`series_rhs_cubic`].
pub const CUBIC_AMPLITUDE_LIMIT: f64 = 0.2;

/// `integral_T e^{-i p beta} log(sin^2(beta/2)) d beta`.
fn log_sin2_moment(p: i64) -> f64 {
    if p == 0 {
        -2.0 * PI * 4f64.ln()
    } else {
        -2.0 * PI / p.abs() as f64
    }
}

fn sgn(p: i64) -> f64 {
    p.signum() as f64
}

/// Trilinear Fourier weight of the cubic part of `I1 + I2 + I3 + I4` for
/// the product `h^(a) h^(b) h^(c)` feeding output mode `a + b + c`.
///
/// To cubic order (with `h_- = h(alpha) - h(alpha - beta)`):
///
/// * `I1 + I3 ~ -integral h(alpha-beta) h_-^2 / (4 sin^2(beta/2))`, whose
///   weight follows from `integral (1 - cos p beta)/(4 sin^2(beta/2)) = pi |p|`;
/// * `I2 ~ h_a(alpha) integral log(sin^2(beta/2)) h h_a (alpha - beta)`, exact;
/// * `I4 ~ integral h(alpha-beta) h_- (h_a(alpha) + h_a(alpha-beta)) cot(beta/2)`,
///   with `integral e^{-i p beta} cot(beta/2) = -2 pi i sign(p)`.
pub fn cubic_weight(a: i64, b: i64, c: i64) -> Complex64 {
    let abs = |p: i64| p.abs() as f64;
    let w13 = PI * (abs(a) - abs(a + b) - abs(a + c) + abs(a + b + c));
    let w2 = -(b as f64) * (c as f64) * log_sin2_moment(a + b);
    let w4 = 2.0 * PI * c as f64 * (sgn(a) - sgn(a + b) + sgn(a + c) - sgn(a + b + c));
    Complex64::new(w13 + w2 + w4, 0.0)
}

/// Small-amplitude expansion of the graph equation on the Fourier side.
pub fn series_rhs_cubic(state: &GraphState, params: &PhysParams, order: SeriesOrder) -> Result<Vec<f64>> {
    let hc = to_spectral(&state.h)?;
    let a1 = spectral::norm(&hc, NormSpec { s: 1.0, nu: 0.0 }, NormKind::Wiener);
    if a1 >= CUBIC_AMPLITUDE_LIMIT {
        return Err(Error::Truncation { a1, limit: CUBIC_AMPLITUDE_LIMIT });
    }
    let rb = params.rate();
    let mut out = lambda_inverse_mean_free(&hc).map_multiplier(|_| Complex64::new(-rb, 0.0));
    if order == SeriesOrder::Cubic {
        let n = hc.n() as i64;
        let peak = hc.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
        let modes: Vec<(i64, Complex64)> = hc.iter().filter(|(k, c)| *k != -n / 2 && c.norm() > 1e-14 * peak).collect();
        let mut acc = vec![Complex64::new(0.0, 0.0); hc.n()];
        for &(a, ca) in &modes {
            for &(b, cb) in &modes {
                let cab = ca * cb;
                for &(c, cc) in &modes {
                    let k = a + b + c;
                    if k < -n / 2 + 1 || k >= n / 2 {
                        continue;
                    }
                    acc[k.rem_euclid(n) as usize] += cubic_weight(a, b, c) * cab * cc;
                }
            }
        }
        let scale = rb / (2.0 * PI);
        out = SpectralCoeffs::from_fn(hc.n(), |k| out.coeff(k) + scale * acc[k.rem_euclid(n) as usize])?;
    }
    Ok(out.to_samples())
}
