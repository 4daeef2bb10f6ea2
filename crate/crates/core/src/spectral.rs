//! Fourier plumbing on the torus `T = [0, 2pi)`.
//!
//! Coefficients follow the convention
//!
//! ```text
//! h^(k) = (1/2pi) * integral_T h(alpha) exp(-i k alpha) d alpha,
//! ```
//!
//! discretized on `n` uniform nodes `alpha_j = 2 pi j / n`, so that
//! `h(alpha) = sum_k h^(k) exp(i k alpha)`. With this normalization the
//! operator `Lambda^{-1}` has multiplier `1/|k|` for `k != 0` and `log 4`
//! at `k = 0`, and the norms of the `H^s_nu` / `A^s_nu` scales are plain
//! weighted sums over the coefficients.
//!
//! Wavenumbers run over `-n/2 ..= n/2 - 1`. The Nyquist mode `-n/2` has no
//! partner, so operators with odd symbols (derivatives of odd order, the
//! Hilbert transform) zero it to keep real fields real.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn forward_plan(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n))
}

fn inverse_plan(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n))
}

/// Smallest grid accepted by [`to_spectral`].
pub const MIN_GRID: usize = 8;

pub fn check_grid_size(n: usize) -> Result<()> {
    if n < MIN_GRID || !n.is_power_of_two() {
        return Err(Error::Config(format!("grid size must be a power of two >= {MIN_GRID}, got {n}")));
    }
    Ok(())
}

/// Uniform periodic grid `alpha_j = 2 pi j / n`.
pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

/// Complex Fourier coefficients of a real periodic field, stored in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoeffs {
    data: Vec<Complex64>,
}

impl SpectralCoeffs {
    pub fn zeros(n: usize) -> Result<Self> {
        check_grid_size(n)?;
        Ok(Self { data: vec![Complex64::new(0.0, 0.0); n] })
    }

    /// Builds coefficients from a function of the wavenumber. The caller is
    /// responsible for Hermitian symmetry if a real field is intended.
    pub fn from_fn(n: usize, f: impl Fn(i64) -> Complex64) -> Result<Self> {
        check_grid_size(n)?;
        let data = (0..n).map(|i| f(wavenumber(i, n))).collect();
        Ok(Self { data })
    }

    pub fn n(&self) -> usize {
        self.data.len()
    }

    /// Coefficient of wavenumber `k`; zero outside the resolved band.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let n = self.n() as i64;
        if k < -n / 2 || k >= n / 2 {
            return Complex64::new(0.0, 0.0);
        }
        self.data[k.rem_euclid(n) as usize]
    }

    pub fn set_coeff(&mut self, k: i64, value: Complex64) {
        let n = self.n() as i64;
        assert!(k >= -n / 2 && k < n / 2, "wavenumber {k} outside grid of size {n}");
        self.data[k.rem_euclid(n) as usize] = value;
    }

    /// `(k, coefficient)` pairs in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n = self.n();
        self.data.iter().enumerate().map(move |(i, &c)| (wavenumber(i, n), c))
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Mean of the field, i.e. the real part of the zero mode.
    pub fn mean(&self) -> f64 {
        self.data[0].re
    }

    /// Largest violation of `c(-k) = conj(c(k))` over the grid.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n() as i64;
        let mut worst = self.data[0].im.abs().max(self.coeff(-n / 2).im.abs());
        for k in 1..n / 2 {
            worst = worst.max((self.coeff(-k) - self.coeff(k).conj()).norm());
        }
        worst
    }

    /// Applies a Fourier multiplier `c(k) -> m(k) c(k)`.
    pub fn map_multiplier(&self, m: impl Fn(i64) -> Complex64) -> Self {
        let n = self.n();
        let data = self.data.iter().enumerate().map(|(i, &c)| m(wavenumber(i, n)) * c).collect();
        Self { data }
    }

    fn map_real_multiplier(&self, m: impl Fn(i64) -> f64) -> Self {
        self.map_multiplier(|k| Complex64::new(m(k), 0.0))
    }

    /// Real samples on the uniform grid.
    pub fn to_samples(&self) -> Vec<f64> {
        let n = self.n();
        let mut buf = self.data.clone();
        inverse_plan(n).process(&mut buf);
        buf.into_iter().map(|c| c.re).collect()
    }
}

/// Wavenumber of FFT storage slot `i` on a grid of size `n`.
pub fn wavenumber(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

pub fn to_spectral(samples: &[f64]) -> Result<SpectralCoeffs> {
    let n = samples.len();
    check_grid_size(n)?;
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    forward_plan(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    for c in &mut buf {
        *c *= scale;
    }
    Ok(SpectralCoeffs { data: buf })
}

pub fn from_spectral(coeffs: &SpectralCoeffs) -> Vec<f64> {
    coeffs.to_samples()
}

/// `Lambda^{-1}`: multiplier `1/|k|`, and `log 4` on the mean.
pub fn lambda_inverse(h: &SpectralCoeffs) -> SpectralCoeffs {
    h.map_real_multiplier(|k| if k == 0 { 4f64.ln() } else { 1.0 / k.abs() as f64 })
}

/// `Lambda^{-1}` with the mean annihilated: multiplier `1/|k|`, `0` at `k = 0`.
///
/// This is the symbol of the linearized evolution (the `log 4` of the zero
/// mode cancels against the mean term of the linearization), and minus the
/// normalized convolution with the weight `log(4 sin^2(beta/2))`.
pub fn lambda_inverse_mean_free(h: &SpectralCoeffs) -> SpectralCoeffs {
    h.map_real_multiplier(|k| if k == 0 { 0.0 } else { 1.0 / k.abs() as f64 })
}

/// Hilbert transform on the torus, multiplier `-i sign(k)`.
pub fn hilbert_transform(h: &SpectralCoeffs) -> SpectralCoeffs {
    let nyq = -(h.n() as i64) / 2;
    h.map_multiplier(|k| {
        if k == 0 || k == nyq {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, -(k.signum() as f64))
        }
    })
}

pub const MAX_DERIVATIVE_ORDER: u32 = 4;

/// `d^order / d alpha^order`, multiplier `(ik)^order`.
pub fn derivative(h: &SpectralCoeffs, order: u32) -> Result<SpectralCoeffs> {
    if order > MAX_DERIVATIVE_ORDER {
        return Err(Error::Precondition(format!("derivative order {order} exceeds {MAX_DERIVATIVE_ORDER}")));
    }
    let nyq = -(h.n() as i64) / 2;
    Ok(h.map_multiplier(|k| {
        if order % 2 == 1 && k == nyq {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(0.0, k as f64).powu(order)
    }))
}

/// Spectral derivative of real samples.
pub fn derivative_samples(samples: &[f64], order: u32) -> Result<Vec<f64>> {
    Ok(derivative(&to_spectral(samples)?, order)?.to_samples())
}

/// Regularity exponent `s` and analyticity band `nu` of a norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    pub s: f64,
    pub nu: f64,
}

impl NormSpec {
    pub fn new(s: f64, nu: f64) -> Result<Self> {
        if !(nu >= 0.0) || !s.is_finite() {
            return Err(Error::Config(format!("invalid norm spec s={s}, nu={nu}")));
        }
        Ok(Self { s, nu })
    }

    pub const L2: NormSpec = NormSpec { s: 0.0, nu: 0.0 };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    /// `(sum_k e^{2 nu |k|} |k|^{2s} |h^(k)|^2)^{1/2}`
    Sobolev,
    /// `sum_k e^{nu |k|} |k|^s |h^(k)|`
    Wiener,
}

/// `|k|^s` with `0^0 = 1`; the zero mode carries no weight when `s != 0`.
fn power_weight(k: i64, s: f64) -> f64 {
    if k == 0 {
        if s == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (k.abs() as f64).powf(s)
    }
}

pub fn norm(h: &SpectralCoeffs, spec: NormSpec, kind: NormKind) -> f64 {
    match kind {
        // zero coefficients are skipped so that e^{nu |k|} overflow cannot turn them into NaN
        NormKind::Sobolev => h
            .iter()
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
            .map(|(k, c)| {
                let w = power_weight(k, spec.s) * (spec.nu * k.abs() as f64).exp();
                w * w * c.norm_sqr()
            })
            .sum::<f64>()
            .sqrt(),
        NormKind::Wiener => h
            .iter()
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
            .map(|(k, c)| power_weight(k, spec.s) * (spec.nu * k.abs() as f64).exp() * c.norm())
            .sum(),
    }
}

/// `L^2(T)` norm of grid samples, `(integral_T |h|^2)^{1/2}` by the
/// trapezoid rule. Equals `sqrt(2 pi)` times the coefficient `H^0` norm.
pub fn l2_norm_samples(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    (2.0 * PI / n * samples.iter().map(|x| x * x).sum::<f64>()).sqrt()
}

/// Zeroes every coefficient of modulus below `threshold`.
pub fn krasny_filter(h: &SpectralCoeffs, threshold: f64) -> SpectralCoeffs {
    assert!(threshold >= 0.0, "negative filter threshold");
    if threshold == 0.0 {
        return h.clone();
    }
    let data = h.data.iter().map(|&c| if c.norm() < threshold { Complex64::new(0.0, 0.0) } else { c }).collect();
    SpectralCoeffs { data }
}

/// Ratio of the largest coefficient in the top quarter of the band to the
/// largest coefficient overall. Small for resolved fields.
pub fn spectral_tail_ratio(h: &SpectralCoeffs) -> f64 {
    let n = h.n() as i64;
    let cut = 3 * n / 8;
    let mut peak = 0.0f64;
    let mut tail = 0.0f64;
    for (k, c) in h.iter() {
        let m = c.norm();
        peak = peak.max(m);
        if k.abs() >= cut {
            tail = tail.max(m);
        }
    }
    if peak == 0.0 {
        0.0
    } else {
        tail / peak
    }
}
