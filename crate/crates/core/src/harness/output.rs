//! File formats shared with the plotting scripts.
//!
//! * `norms.csv`: header `t,l2,h3,a0,a0_nu,mean,minF,maxF`, one row per report.
//! * `snapshot_NNNNNN.csv`: `alpha,h` in graph mode, `alpha,z1,z2` in curve mode.
//! * `result.json`: see [`ExperimentResult`](super::ExperimentResult).
//!
//! Floats are written with 17 significant digits.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::spectral;
use crate::timestep::{InterfaceState, NormReport};

pub const NORMS_HEADER: &str = "t,l2,h3,a0,a0_nu,mean,minF,maxF";

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_norms_csv(path: &Path, reports: &[NormReport]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{NORMS_HEADER}")?;
    for r in reports {
        let row = [r.t, r.l2, r.h3, r.a0, r.a0_nu, r.mean, r.min_f, r.max_f];
        writeln!(w, "{}", row.map(fmt).join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a `norms.csv` written by [`write_norms_csv`].
pub fn read_norms_csv(path: &Path) -> Result<Vec<NormReport>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == NORMS_HEADER => {}
        other => {
            return Err(crate::Error::Config(format!("unexpected norms.csv header {other:?}")));
        }
    }
    lines
        .map(|line| {
            let v: Vec<f64> = line
                .split(',')
                .map(|s| s.parse::<f64>().map_err(|e| crate::Error::Config(format!("{e}: {s}"))))
                .collect::<Result<_>>()?;
            if v.len() != 8 {
                return Err(crate::Error::Config(format!("norms.csv row has {} columns", v.len())));
            }
            Ok(NormReport { t: v[0], l2: v[1], h3: v[2], a0: v[3], a0_nu: v[4], mean: v[5], min_f: v[6], max_f: v[7] })
        })
        .collect()
}

pub fn snapshot_path(dir: &Path, index: usize) -> PathBuf {
    dir.join(format!("snapshot_{index:06}.csv"))
}

pub fn write_snapshot(path: &Path, state: &InterfaceState) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    match state {
        InterfaceState::Graph(g) => {
            writeln!(w, "alpha,h")?;
            for (a, h) in spectral::grid(g.n()).iter().zip(&g.h) {
                writeln!(w, "{},{}", fmt(*a), fmt(*h))?;
            }
        }
        InterfaceState::Curve(c) => {
            writeln!(w, "alpha,z1,z2")?;
            for ((a, z1), z2) in spectral::grid(c.n()).iter().zip(c.z1()).zip(&c.z2) {
                writeln!(w, "{},{},{}", fmt(*a), fmt(z1), fmt(*z2))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphState;

    #[test]
    fn norms_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("norms.csv");
        let r =
            NormReport { t: 0.1, l2: 1.0 / 3.0, h3: 2.0, a0: 0.0, a0_nu: 1e-300, mean: -0.5, min_f: 2.0, max_f: 4.9 };
        write_norms_csv(&p, &[r, r]).unwrap();
        assert_eq!(read_norms_csv(&p).unwrap(), vec![r, r]);
        let text = fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("t,l2,h3,a0,a0_nu,mean,minF,maxF\n"));
        assert!(text.contains("3.3333333333333331e-1"));
    }

    #[test]
    fn snapshot_columns() {
        let dir = tempfile::tempdir().unwrap();
        let g = GraphState::from_fn(8, f64::cos).unwrap();
        let p = snapshot_path(dir.path(), 3);
        assert!(p.ends_with("snapshot_000003.csv"));
        write_snapshot(&p, &InterfaceState::Graph(g)).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().count(), 9);
        assert!(text.starts_with("alpha,h\n"));
    }
}
