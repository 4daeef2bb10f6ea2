//! Least-squares line fits used by the experiments.

use crate::error::{Error, Result};

/// Slope and intercept of the least-squares line through `(x, y)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Experiment(format!(
            "line fit needs at least two matched points, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Experiment("line fit with a single abscissa".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

fn logs(v: &[f64]) -> Result<Vec<f64>> {
    v.iter()
        .map(|&a| {
            if a > 0.0 && a.is_finite() {
                Ok(a.ln())
            } else {
                Err(Error::Experiment(format!("cannot take the log of {a}")))
            }
        })
        .collect()
}

/// Rate `r` of the best fit `y ~ C e^{r t}`.
pub fn exponential_rate(t: &[f64], y: &[f64]) -> Result<f64> {
    Ok(linear_fit(t, &logs(y)?)?.0)
}

/// Exponent `p` of the best fit `y ~ C x^p`.
pub fn power_law_exponent(x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(linear_fit(&logs(x)?, &logs(y)?)?.0)
}
