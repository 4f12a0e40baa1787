//! Moments and tail fits for endpoint densities, plus sample moments for
//! Monte-Carlo batches.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::density::{trapezoid_weights, EndpointTable};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("density must be positive on the fit window, found {value} at t = {t}")]
    Range { t: f64, value: f64 },
    #[error("degenerate data: {0}")]
    Degenerate(String),
}

/// Mass-normalized moments about the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub mass: f64,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    /// `mu_4 / mu_2^2 - 3`
    pub excess_kurtosis: f64,
}

/// Trapezoid moments of a tabulated density over its own grid.
pub fn moments(table: &EndpointTable) -> Result<MomentSummary, StatsError> {
    if table.t_grid.len() < 2 {
        return Err(StatsError::Argument("endpoint table is empty".into()));
    }
    let w = trapezoid_weights(&table.t_grid);
    let weighted: Vec<(f64, f64)> = table
        .t_grid
        .iter()
        .zip(&table.values)
        .zip(&w)
        .map(|((&t, &f), &w)| (t, w * f))
        .collect();
    let mass: f64 = weighted.iter().map(|(_, p)| p).sum();
    if !(mass > 0.0) {
        return Err(StatsError::Degenerate(format!("non-positive mass {mass}")));
    }
    let mean = weighted.iter().map(|(t, p)| t * p).sum::<f64>() / mass;
    let central = |k: i32| weighted.iter().map(|(t, p)| (t - mean).powi(k) * p).sum::<f64>() / mass;
    summarize(mass, mean, central(2), central(3), central(4))
}

/// Sample moments (population normalization) of raw observations.
pub fn sample_moments(xs: &[f64]) -> Result<MomentSummary, StatsError> {
    if xs.is_empty() {
        return Err(StatsError::Argument("no samples".into()));
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let central = |k: i32| xs.iter().map(|x| (x - mean).powi(k)).sum::<f64>() / n;
    summarize(1.0, mean, central(2), central(3), central(4))
}

fn summarize(mass: f64, mean: f64, m2: f64, m3: f64, m4: f64) -> Result<MomentSummary, StatsError> {
    if !(m2 > 0.0) {
        return Err(StatsError::Degenerate("zero variance".into()));
    }
    Ok(MomentSummary {
        mass,
        mean,
        variance: m2,
        skewness: m3 / m2.powf(1.5),
        excess_kurtosis: m4 / (m2 * m2) - 3.0,
    })
}

/// Result of fitting `log f_end(t) ~ a - c t^3` (and `a' - c' t^2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub c: f64,
    pub cubic_r2: f64,
    pub quad_r2: f64,
}

pub const DEFAULT_TAIL_WINDOW: (f64, f64) = (2.5, 3.8);

/// Least-squares tail fits on the grid points inside `[t_lo, t_hi]`.
pub fn tail_fit(table: &EndpointTable, t_lo: f64, t_hi: f64) -> Result<TailFit, StatsError> {
    if !(t_lo < t_hi) {
        return Err(StatsError::Argument(format!("empty window [{t_lo}, {t_hi}]")));
    }
    let mut ts = Vec::new();
    let mut logs = Vec::new();
    for (&t, &f) in table.t_grid.iter().zip(&table.values) {
        if t >= t_lo && t <= t_hi {
            if !(f > 0.0) {
                return Err(StatsError::Range { t, value: f });
            }
            ts.push(t);
            logs.push(f.ln());
        }
    }
    if ts.len() < 3 {
        return Err(StatsError::Argument(format!(
            "need at least 3 grid points in [{t_lo}, {t_hi}], found {}",
            ts.len()
        )));
    }
    let cube: Vec<f64> = ts.iter().map(|t| -t.powi(3)).collect();
    let square: Vec<f64> = ts.iter().map(|t| -t * t).collect();
    let (c, cubic_r2) = linear_fit(&cube, &logs);
    let (_, quad_r2) = linear_fit(&square, &logs);
    Ok(TailFit { c, cubic_r2, quad_r2 })
}

/// Ordinary least squares `y ~ a + b x`; returns `(b, R^2)`.
fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let ss_tot: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    (slope, 1.0 - ss_res / ss_tot)
}
