//! Geometric last-passage percolation: endpoint of the maximizing up-right
//! path from the origin to the anti-diagonal `i + j = 2n`.
//!
//! Each sample draws its weights from its own ChaCha stream (`seed`, stream =
//! sample index), so a batch depends only on the configuration and never on
//! how samples are scheduled across threads.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::density::EndpointTable;
use crate::format::sig17;
use crate::pool;
use crate::stats::{self, StatsError};

#[derive(Debug, Error)]
pub enum LppError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("degenerate data: {0}")]
    Data(String),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LppConfig {
    /// `P(w = k) = q (1 - q)^k`
    pub q: f64,
    /// Endpoints lie on `i + j = 2n`.
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
}

impl LppConfig {
    pub fn validate(&self) -> Result<(), LppError> {
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(LppError::Argument(format!("q must be in (0, 1), got {}", self.q)));
        }
        if self.n == 0 {
            return Err(LppError::Argument("n must be at least 1".into()));
        }
        if self.samples == 0 {
            return Err(LppError::Argument("samples must be at least 1".into()));
        }
        Ok(())
    }

    /// Mean of one weight, `(1 - q) / q`.
    pub fn weight_mean(&self) -> f64 {
        (1.0 - self.q) / self.q
    }
}

/// Weights on the triangle `{(i, j) : i, j >= 0, i + j <= 2n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightField {
    n: usize,
    /// `rows[i][j] = w(i, j)`, `rows[i].len() = 2n + 1 - i`.
    rows: Vec<Vec<u64>>,
}

impl WeightField {
    /// Validates the triangular shape: `2n + 1` rows, row `i` holding `2n + 1 - i` entries.
    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self, LppError> {
        let len = rows.len();
        if len < 3 || len.is_multiple_of(2) {
            return Err(LppError::Argument(format!(
                "weight field needs 2n + 1 rows with n >= 1, got {len}"
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != len - i {
                return Err(LppError::Argument(format!(
                    "row {i} has {} entries, expected {}",
                    row.len(),
                    len - i
                )));
            }
        }
        Ok(WeightField { n: len / 2, rows })
    }

    pub fn from_fn(n: usize, mut w: impl FnMut(usize, usize) -> u64) -> Result<Self, LppError> {
        let d = 2 * n;
        Self::from_rows((0..=d).map(|i| (0..=d - i).map(|j| w(i, j)).collect()).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.rows[i][j]
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.rows.iter().flatten().copied()
    }
}

/// Last-passage times `L(n + y, n - y)` for `y = -n..=n` (index `y + n`).
pub fn last_passage_profile(weights: &WeightField) -> Vec<u64> {
    let d = 2 * weights.n;
    sweep(d, |i, j| weights.get(i, j))
}

/// Rolling anti-diagonal dynamic program
/// `G(i, j) = w(i, j) + max(G(i - 1, j), G(i, j - 1))`.
///
/// `draw(i, j)` is called once per cell, diagonal by diagonal, and within a
/// diagonal from the largest `i` down to `0`.
fn sweep(d: usize, mut draw: impl FnMut(usize, usize) -> u64) -> Vec<u64> {
    let mut g = vec![0u64; d + 1];
    g[0] = draw(0, 0);
    for diag in 1..=d {
        // i = diag: only the (i - 1, j) predecessor exists
        g[diag] = draw(diag, 0) + g[diag - 1];
        for i in (1..diag).rev() {
            g[i] = draw(i, diag - i) + g[i].max(g[i - 1]);
        }
        g[0] += draw(0, diag);
    }
    g
}

/// Argmax over `y = -n..=n`, ties broken toward the smallest `|y|`, then negative `y`.
pub fn argmax_endpoint(profile: &[u64]) -> i64 {
    let n = (profile.len() / 2) as i64;
    let mut best: Option<(u64, i64)> = None;
    for (k, &v) in profile.iter().enumerate() {
        let y = k as i64 - n;
        let better = match best {
            None => true,
            Some((bv, by)) => v > bv || (v == bv && (y.abs(), y) < (by.abs(), by)),
        };
        if better {
            best = Some((v, y));
        }
    }
    best.map_or(0, |(_, y)| y)
}

/// The RNG stream of one sample.
pub fn sample_rng(seed: u64, sample_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample_index);
    rng
}

/// Inversion sampler `floor(ln U / ln(1 - q))`, `U` uniform on `(0, 1]`.
struct Geometric {
    inv_log: f64,
}

impl Geometric {
    fn new(q: f64) -> Self {
        Geometric {
            inv_log: 1.0 / (1.0 - q).ln(),
        }
    }

    #[inline]
    fn draw(&self, rng: &mut ChaCha8Rng) -> u64 {
        let u = 1.0 - rng.random::<f64>();
        (u.ln() * self.inv_log) as u64
    }
}

/// The weight field sample `index` of a batch sees.
pub fn draw_field(cfg: &LppConfig, index: u64) -> Result<WeightField, LppError> {
    cfg.validate()?;
    let d = 2 * cfg.n;
    let mut rng = sample_rng(cfg.seed, index);
    let geo = Geometric::new(cfg.q);
    let mut rows: Vec<Vec<u64>> = (0..=d).map(|i| vec![0; d + 1 - i]).collect();
    sweep(d, |i, j| {
        let w = geo.draw(&mut rng);
        rows[i][j] = w;
        w
    });
    WeightField::from_rows(rows)
}

fn sample_one(cfg: &LppConfig, index: u64) -> i64 {
    let mut rng = sample_rng(cfg.seed, index);
    let geo = Geometric::new(cfg.q);
    let profile = sweep(2 * cfg.n, |_, _| geo.draw(&mut rng));
    argmax_endpoint(&profile)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LppBatch {
    pub config: LppConfig,
    /// Argmax `y` per sample.
    pub endpoints_y: Vec<i64>,
    /// `y n^{-2/3}`
    pub rescaled: Vec<f64>,
}

impl LppBatch {
    /// `c3 y n^{-2/3}`, for a user-supplied transversal constant `c3`.
    pub fn in_airy_units(&self, c3: f64) -> Vec<f64> {
        self.rescaled.iter().map(|r| c3 * r).collect()
    }

    pub fn moments(&self) -> Result<stats::MomentSummary, LppError> {
        Ok(stats::sample_moments(&self.rescaled)?)
    }

    /// CSV with header `sample_index,y,rescaled`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "sample_index,y,rescaled")?;
        for (k, (y, r)) in self.endpoints_y.iter().zip(&self.rescaled).enumerate() {
            writeln!(out, "{k},{y},{}", sig17(*r))?;
        }
        Ok(())
    }
}

/// Draws `cfg.samples` independent fields and records the argmax endpoint of each.
pub fn sample_endpoints(cfg: &LppConfig) -> Result<LppBatch, LppError> {
    cfg.validate()?;
    let endpoints_y = pool::map_indices(cfg.samples as u64, |k| sample_one(cfg, k));
    let scale = (cfg.n as f64).powf(-2.0 / 3.0);
    let rescaled = endpoints_y.iter().map(|&y| y as f64 * scale).collect();
    Ok(LppBatch {
        config: *cfg,
        endpoints_y,
        rescaled,
    })
}

/// Kolmogorov–Smirnov distance after standardizing both the batch and the
/// reference density to zero mean and unit variance.
pub fn ks_distance(batch: &LppBatch, reference: &EndpointTable) -> Result<f64, LppError> {
    ks_distance_samples(&batch.rescaled, reference)
}

/// [`ks_distance`] on raw observations.
pub fn ks_distance_samples(samples: &[f64], reference: &EndpointTable) -> Result<f64, LppError> {
    if samples.is_empty() {
        return Err(LppError::Data("empty batch".into()));
    }
    let sm = stats::sample_moments(samples)
        .map_err(|e| LppError::Data(format!("batch cannot be standardized: {e}")))?;
    let rm = stats::moments(reference)?;
    let (b_mu, b_sd) = (sm.mean, sm.variance.sqrt());
    let (r_mu, r_sd) = (rm.mean, rm.variance.sqrt());

    let cum = reference.cumulative();
    let total = *cum.last().expect("reference has at least two points");
    let ts = &reference.t_grid;
    let ref_cdf = |z: f64| {
        let t = r_mu + r_sd * z;
        if t <= ts[0] {
            return 0.0;
        }
        if t >= ts[ts.len() - 1] {
            return 1.0;
        }
        let k = ts.partition_point(|&g| g <= t);
        let (t0, t1) = (ts[k - 1], ts[k]);
        let (f0, f1) = (reference.values[k - 1], reference.values[k]);
        // exact integral of the linear interpolant from t0 to t
        let h = t - t0;
        let slope = (f1 - f0) / (t1 - t0);
        (cum[k - 1] + h * (f0 + 0.5 * slope * h)) / total
    };

    let mut z: Vec<f64> = samples.iter().map(|x| (x - b_mu) / b_sd).collect();
    z.sort_by(f64::total_cmp);
    let n = z.len() as f64;
    let mut d = 0.0_f64;
    let mut k = 0;
    while k < z.len() {
        let v = z[k];
        let below = k as f64 / n;
        while k < z.len() && z[k] == v {
            k += 1;
        }
        let at = k as f64 / n;
        let g = ref_cdf(v);
        d = d.max((at - g).abs()).max((below - g).abs());
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let ok = LppConfig { q: 0.5, n: 3, samples: 2, seed: 1 };
        assert!(ok.validate().is_ok());
        assert!(LppConfig { q: 1.0, ..ok }.validate().is_err());
        assert!(LppConfig { n: 0, ..ok }.validate().is_err());
        assert!(LppConfig { samples: 0, ..ok }.validate().is_err());
    }

    #[test]
    fn zero_weights() {
        let f = WeightField::from_fn(1, |_, _| 0).unwrap();
        assert_eq!(last_passage_profile(&f), vec![0, 0, 0]);
    }

    #[test]
    fn small_field_matches_enumeration() {
        let w = |i, j| match (i, j) {
            (0, 0) => 1,
            (1, 0) => 5,
            (0, 1) => 2,
            _ => 0,
        };
        let f = WeightField::from_fn(1, w).unwrap();
        // index 0 is y = -1, i.e. (0, 2); index 2 is y = 1, i.e. (2, 0)
        assert_eq!(last_passage_profile(&f), vec![3, 6, 6]);
    }

    #[test]
    fn malformed_fields() {
        assert!(WeightField::from_rows(vec![vec![0; 3], vec![0; 2]]).is_err());
        assert!(WeightField::from_rows(vec![vec![0; 3], vec![0; 3], vec![0; 1]]).is_err());
        assert!(WeightField::from_rows(vec![vec![0]]).is_err());
    }

    #[test]
    fn tie_breaking() {
        assert_eq!(argmax_endpoint(&[5, 1, 5]), -1);
        assert_eq!(argmax_endpoint(&[5, 5, 5]), 0);
        assert_eq!(argmax_endpoint(&[1, 2, 3, 7, 7]), 1);
        assert_eq!(argmax_endpoint(&[7, 2, 3, 2, 7]), -2);
    }

    #[test]
    fn batch_matches_drawn_fields() {
        let cfg = LppConfig { q: 0.3, n: 6, samples: 5, seed: 42 };
        let batch = sample_endpoints(&cfg).unwrap();
        for k in 0..5 {
            let field = draw_field(&cfg, k).unwrap();
            let y = argmax_endpoint(&last_passage_profile(&field));
            assert_eq!(batch.endpoints_y[k as usize], y);
        }
        assert!(batch.endpoints_y.iter().all(|y| y.unsigned_abs() <= 6));
    }

    #[test]
    fn csv_layout() {
        let cfg = LppConfig { q: 0.5, n: 2, samples: 2, seed: 3 };
        let batch = sample_endpoints(&cfg).unwrap();
        let mut buf = Vec::new();
        batch.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "sample_index,y,rescaled");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0,"));
    }
}
