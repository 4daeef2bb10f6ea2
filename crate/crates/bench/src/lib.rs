//! Sample interfaces shared by the benchmarks.

use rtstokes::{CurveState, GraphState};

/// A smooth three-mode graph with amplitude of order `0.1` on `n` nodes.
pub fn sample_graph(n: usize) -> GraphState {
    GraphState::from_fn(n, |a| 0.1 * a.cos() + 0.05 * (2.0 * a).sin() - 0.02 * (3.0 * a).cos())
        .expect("n is a power of two")
}

pub fn sample_curve(n: usize) -> CurveState {
    CurveState::from_graph(&sample_graph(n))
}
