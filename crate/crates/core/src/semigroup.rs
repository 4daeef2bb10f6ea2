//! Exact solution of the linearized problem, `h^(k, t) = e^{-(rho_bar/|k|) t} h^_0(k)`.

use crate::error::{Error, Result};
use crate::graph::PhysParams;
use crate::spectral::{norm, NormKind, NormSpec, SpectralCoeffs};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemigroupQuery {
    pub t: f64,
    pub params: PhysParams,
}

/// Applies `e^{-rho_bar Lambda^{-1} t}` on the mean-free part; the zero mode is
/// left unchanged. A negative density jump gives growth.
pub fn semigroup_apply(h0: &SpectralCoeffs, q: SemigroupQuery) -> SpectralCoeffs {
    let rate = q.params.rate();
    h0.map_multiplier(|k| {
        let f = if k == 0 { 1.0 } else { (-rate * q.t / k.abs() as f64).exp() };
        f.into()
    })
}

/// Envelope against which the linear evolution is measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayMode {
    /// `||h(t)||_{L2} <= C ||h0||_{H^{s0}} (1 + t)^{-s}`.
    Algebraic { s0: f64, s: f64 },
    /// `||h(t)||_{A^0} <= C ||h0||_{A^0_nu} e^{-sqrt(rho_bar nu t)}`.
    Exponential { nu: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    pub envelopes: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Empirical constant `C`.
    pub max_ratio: f64,
}

/// Evaluates the exact linear norms at `times` and their ratio to the
/// decay envelope. Requires zero-mean data and a stable density jump.
pub fn decay_bound_check(
    h0: &SpectralCoeffs,
    params: &PhysParams,
    times: &[f64],
    mode: DecayMode,
) -> Result<DecayReport> {
    let scale = h0.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    if h0.mean().abs() > 1e-14 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Precondition(format!("data has nonzero mean {}", h0.mean())));
    }
    if !params.is_stable() {
        return Err(Error::Precondition("decay bounds need rho- > rho+".into()));
    }
    let (spec, kind, initial) = match mode {
        DecayMode::Algebraic { s0, s: _ } => {
            (NormSpec::L2, NormKind::Sobolev, norm(h0, NormSpec::new(s0, 0.0)?, NormKind::Sobolev))
        }
        DecayMode::Exponential { nu } => {
            (NormSpec::L2, NormKind::Wiener, norm(h0, NormSpec::new(0.0, nu)?, NormKind::Wiener))
        }
    };
    let mut report = DecayReport {
        times: times.to_vec(),
        norms: Vec::with_capacity(times.len()),
        envelopes: Vec::with_capacity(times.len()),
        ratios: Vec::with_capacity(times.len()),
        max_ratio: 0.0,
    };
    for &t in times {
        if t < 0.0 {
            return Err(Error::Precondition(format!("negative time {t}")));
        }
        let h = semigroup_apply(h0, SemigroupQuery { t, params: *params });
        let value = norm(&h, spec, kind);
        let env = match mode {
            DecayMode::Algebraic { s, .. } => initial * (1.0 + t).powf(-s),
            DecayMode::Exponential { nu } => initial * (-(params.rate() * nu * t).sqrt()).exp(),
        };
        let ratio = value / env;
        // NaN-propagating maximum
        if !(ratio <= report.max_ratio) {
            report.max_ratio = ratio;
        }
        report.norms.push(value);
        report.envelopes.push(env);
        report.ratios.push(ratio);
    }
    Ok(report)
}
