//! Flat TOML run configuration and initial-data presets.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::contour::{ArcChordLimits, CurveState};
use crate::error::{Error, Result};
use crate::graph::{GraphState, PhysParams};
use crate::spectral;
use crate::timestep::IntegratorConfig;

pub const SCHEMA_VERSION: u32 = 1;

/// Highest wavenumber summed by the `random_analytic` preset. The preset is
/// evaluated pointwise, so the same seed gives the same function on any grid.
pub const RANDOM_ANALYTIC_KMAX: i64 = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Graph,
    Curve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// `amp cos(k alpha)`.
    SingleMode,
    /// `sum a_k cos(k alpha) + b_k sin(k alpha)` from `modes = [[k, a, b], ...]`.
    ModeSum,
    /// `h^(k) = amp e^{-initial_nu |k|} e^{i phi_k}` with seeded phases.
    RandomAnalytic,
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}
fn default_dt() -> f64 {
    1e-3
}
fn default_monitor_every() -> usize {
    10
}
fn default_nu() -> f64 {
    0.1
}
fn default_m() -> f64 {
    1.75
}
fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub mode: Mode,
    pub rho_minus: f64,
    pub rho_plus: f64,
    pub n: usize,
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub t_end: f64,
    /// Steps between snapshot files; 0 writes only the first and last.
    #[serde(default)]
    pub output_every: usize,
    #[serde(default = "default_monitor_every")]
    pub monitor_every: usize,
    #[serde(default)]
    pub filter_threshold: f64,
    /// Weight of the `A^0_nu` monitor.
    #[serde(default = "default_nu")]
    pub nu: f64,
    /// Time exponent of the `(1 + t)^m ||h||_{L2} + ||h||_{H3}` monitor.
    #[serde(default = "default_m")]
    pub m: f64,
    pub initial: Preset,
    #[serde(default)]
    pub k: Option<i64>,
    #[serde(default)]
    pub amp: Option<f64>,
    #[serde(default)]
    pub modes: Option<Vec<[f64; 3]>>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub initial_nu: Option<f64>,
    /// Constant added to the initial height.
    #[serde(default)]
    pub mean: f64,
    #[serde(default)]
    pub arc_chord_max_f: Option<f64>,
    #[serde(default)]
    pub arc_chord_min_tangent: Option<f64>,
    #[serde(default)]
    pub blowup_limit: Option<f64>,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

impl SimConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: SimConfig = toml::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; a relative `out_dir` is resolved against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg = Self::from_toml_str(&std::fs::read_to_string(path)?)?;
        if cfg.out_dir.is_relative() {
            if let Some(dir) = path.parent() {
                cfg.out_dir = dir.join(&cfg.out_dir);
            }
        }
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// A graph-mode single-mode configuration, convenient for tests.
    pub fn single_mode(n: usize, drho: f64, k: i64, amp: f64, dt: f64, t_end: f64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            mode: Mode::Graph,
            rho_minus: 1.0 + drho,
            rho_plus: 1.0,
            n,
            dt,
            t_end,
            output_every: 0,
            monitor_every: 10,
            filter_threshold: 0.0,
            nu: default_nu(),
            m: default_m(),
            initial: Preset::SingleMode,
            k: Some(k),
            amp: Some(amp),
            modes: None,
            seed: None,
            initial_nu: None,
            mean: 0.0,
            arc_chord_max_f: None,
            arc_chord_min_tangent: None,
            blowup_limit: None,
            out_dir: default_out_dir(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if !self.n.is_power_of_two() {
            return Err(Error::Config(format!("n = {} is not a power of two", self.n)));
        }
        spectral::check_grid_size(self.n)?;
        self.params()?;
        self.integrator().validate()?;
        if !(self.m > 0.0) {
            return Err(Error::Config("m must be positive".into()));
        }
        let need = |name: &str, present: bool| {
            if present {
                Ok(())
            } else {
                Err(Error::Config(format!("preset {:?} requires `{name}`", self.initial)))
            }
        };
        match self.initial {
            Preset::SingleMode => {
                need("k", self.k.is_some())?;
                need("amp", self.amp.is_some())?;
            }
            Preset::ModeSum => need("modes", self.modes.is_some())?,
            Preset::RandomAnalytic => {
                need("amp", self.amp.is_some())?;
                need("seed", self.seed.is_some())?;
                need("initial_nu", self.initial_nu.is_some())?;
                if !(self.initial_nu.unwrap_or(0.0) > 0.0) {
                    return Err(Error::Config("initial_nu must be positive".into()));
                }
            }
        }
        if let Some(a) = self.amp {
            if !(a >= 0.0) {
                return Err(Error::Config(format!("amp must be nonnegative, got {a}")));
            }
        }
        if let Some(modes) = &self.modes {
            for m in modes {
                if m[0].fract() != 0.0 {
                    return Err(Error::Config(format!("mode number {} is not an integer", m[0])));
                }
            }
        }
        Ok(())
    }

    pub fn params(&self) -> Result<PhysParams> {
        PhysParams::new(self.rho_minus, self.rho_plus)
    }

    pub fn integrator(&self) -> IntegratorConfig {
        let d = ArcChordLimits::default();
        IntegratorConfig {
            dt: self.dt,
            t_end: self.t_end,
            filter_threshold: self.filter_threshold,
            monitor_every: self.monitor_every,
            output_every: self.output_every,
            nu: self.nu,
            arc_chord: ArcChordLimits {
                max_f: self.arc_chord_max_f.unwrap_or(d.max_f),
                min_tangent_norm: self.arc_chord_min_tangent.unwrap_or(d.min_tangent_norm),
            },
            blowup_limit: self.blowup_limit.unwrap_or(1e6),
        }
    }

    /// Largest excited wavenumber of the initial data.
    pub fn max_mode(&self) -> i64 {
        match self.initial {
            Preset::SingleMode => self.k.unwrap_or(0).abs(),
            Preset::ModeSum => self.modes.iter().flatten().map(|m| (m[0] as i64).abs()).max().unwrap_or(0),
            Preset::RandomAnalytic => RANDOM_ANALYTIC_KMAX,
        }
    }

    /// Initial height as a function of `alpha`, independent of `n`.
    pub fn initial_height(&self) -> Result<Box<dyn Fn(f64) -> f64>> {
        let c = self.mean;
        Ok(match self.initial {
            Preset::SingleMode => {
                let (k, amp) = (self.k.unwrap_or(0) as f64, self.amp.unwrap_or(0.0));
                Box::new(move |a| c + amp * (k * a).cos())
            }
            Preset::ModeSum => {
                let modes = self.modes.clone().unwrap_or_default();
                Box::new(move |a| {
                    c + modes.iter().map(|m| m[1] * (m[0] * a).cos() + m[2] * (m[0] * a).sin()).sum::<f64>()
                })
            }
            Preset::RandomAnalytic => {
                let coeffs = random_analytic_coefficients(
                    self.amp.unwrap_or(0.0),
                    self.initial_nu.unwrap_or(1.0),
                    self.seed.unwrap_or(0),
                );
                Box::new(move |a| {
                    // h = sum_{k >= 1} 2 |c_k| cos(k alpha + phi_k)
                    c + coeffs
                        .iter()
                        .enumerate()
                        .map(|(i, (m, phi))| 2.0 * m * ((i + 1) as f64 * a + phi).cos())
                        .sum::<f64>()
                })
            }
        })
    }

    pub fn initial_graph(&self) -> Result<GraphState> {
        GraphState::from_fn(self.n, self.initial_height()?)
    }

    pub fn initial_curve(&self) -> Result<CurveState> {
        Ok(CurveState::from_graph(&self.initial_graph()?))
    }
}

/// `(|h^(k)|, arg h^(k))` for `k = 1..=RANDOM_ANALYTIC_KMAX`.
pub fn random_analytic_coefficients(amp: f64, nu: f64, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (1..=RANDOM_ANALYTIC_KMAX).map(|k| (amp * (-nu * k as f64).exp(), 2.0 * PI * rng.gen::<f64>())).collect()
}
