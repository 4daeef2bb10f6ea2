use thiserror::Error;

use crate::contour::ArcChordReport;
use crate::timestep::InterfaceState;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    /// Kernel evaluated at a point where it is singular or undefined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate parametrization: |dz/dalpha| = {min_tangent_norm:.3e} at node {node}")]
    DegenerateParametrization { node: usize, min_tangent_norm: f64 },

    #[error("arc-chord condition violated: max F = {:.3e}, min |z_alpha| = {:.3e}", .0.max_f, .0.min_tangent_norm)]
    ArcChord(ArcChordReport),

    #[error("graph parametrization lost: dz1/dalpha = {value:.3e} at node {node}")]
    GraphParametrizationLost { node: usize, value: f64 },

    /// Spectrum does not decay; the grid cannot represent the field.
    #[error("under-resolved field: tail/peak coefficient ratio {ratio:.3e} on n = {n}")]
    Resolution { n: usize, ratio: f64 },

    #[error("amplitude outside cubic truncation domain: A^1 norm {a1:.3e} >= {limit}")]
    Truncation { a1: f64, limit: f64 },

    /// Non-finite or runaway values; carries the last state that was healthy.
    #[error("blow-up at t = {t}: {detail}")]
    BlowUp { t: f64, detail: String, last_healthy: Box<InterfaceState> },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("experiment error: {0}")]
    Experiment(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
