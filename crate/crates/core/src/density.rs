//! Joint density of the location and height of the maximum of `A2(t) - t^2`.
//!
//! With `B_s(x, y) = Ai(x + y + s)` on `L^2([0, inf))`:
//!
//! * `F_GOE(s) = det(I - B_s)`
//! * `psi_{t,m}(x) = 2 e^{xt} [t Ai(x + m + t^2) + Ai'(x + m + t^2)]`
//! * `gamma(t, s) = 2^{1/3} <psi_{-t,m}(2^{1/3} .), (I - B_s)^{-1} psi_{t,m}(2^{1/3} .)>`,
//!   `m = 4^{-1/3} s`
//! * `f(t, m) = gamma(t, s) F_GOE(s)
//!            = det(I - B_s + 2^{1/3} psi_{t,m}(2^{1/3} .) (x) psi_{-t,m}(2^{1/3} .)) - F_GOE(s)`,
//!   `s = 4^{1/3} m`
//!
//! The half-line is truncated to `[0, L]` with `L` picked per `(s, t)` by
//! [`cutoff`], and discretized with a composite Gauss–Legendre rule of
//! `nodes` points per panel of width `cutoff_floor`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fredholm::{self, DiscreteOperator, Factorized, FredholmError, WeightedVector};
use crate::pool;
use crate::quadrature::{QuadratureError, QuadratureRule};
use crate::specfun::{self, SpecfunError};

/// `2^{1/3}`
pub const CBRT_2: f64 = 1.259_921_049_894_873_2;
/// `4^{1/3}`
pub const CBRT_4: f64 = 1.587_401_051_968_199_5;

/// Cutoff doubling stops here even if the envelope is still above tolerance.
const MAX_CUTOFF_DOUBLINGS: u32 = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DensityError {
    #[error("invalid numerics configuration: {0}")]
    Config(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error(transparent)]
    Fredholm(#[from] FredholmError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

pub type Result<T> = std::result::Result<T, DensityError>;

/// Discretization and integration-range settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericsConfig {
    /// Gauss–Legendre nodes per cutoff panel.
    pub nodes: usize,
    /// Smallest truncation length `L` and the panel width.
    pub cutoff_floor: f64,
    /// Integrand envelope level below which the half-line is truncated.
    pub envelope_tol: f64,
    pub m_lo: f64,
    pub m_hi: f64,
    pub t_max: f64,
    pub dm: f64,
    pub dt: f64,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            nodes: 80,
            cutoff_floor: 12.0,
            envelope_tol: 1e-14,
            m_lo: -6.0,
            m_hi: 3.0,
            t_max: 4.0,
            dm: 0.02,
            dt: 0.02,
        }
    }
}

impl NumericsConfig {
    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn with_cutoff_floor(mut self, cutoff_floor: f64) -> Self {
        self.cutoff_floor = cutoff_floor;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(DensityError::Config(msg.to_owned()));
        if self.nodes < 25 || self.nodes > crate::quadrature::MAX_NODES {
            return fail("nodes must be in 25..=2048");
        }
        if !(self.cutoff_floor >= 8.0) || !self.cutoff_floor.is_finite() {
            return fail("cutoff_floor must be >= 8");
        }
        if !(self.envelope_tol > 0.0) {
            return fail("envelope_tol must be positive");
        }
        if !(self.m_lo < self.m_hi) || !self.m_lo.is_finite() || !self.m_hi.is_finite() {
            return fail("m_lo must be < m_hi");
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return fail("t_max must be positive");
        }
        if !(self.dm > 0.0 && self.dt > 0.0) {
            return fail("grid steps must be positive");
        }
        Ok(())
    }
}

/// `(x, y) -> Ai(x + y + s)`
pub fn b_kernel(s: f64) -> impl Fn(f64, f64) -> f64 + Copy + Send + Sync {
    move |x, y| specfun::ai(x + y + s)
}

/// `(x, y) -> d/ds Ai(x + y + s) = Ai'(x + y + s)`
pub fn b_kernel_derivative(s: f64) -> impl Fn(f64, f64) -> f64 + Copy + Send + Sync {
    move |x, y| specfun::aip(x + y + s)
}

/// `psi_{t,m}(x) = 2 e^{xt} [t Ai(x + m + t^2) + Ai'(x + m + t^2)]`.
///
/// The exponential is combined with the Airy decay before exponentiating,
/// so large `x t` does not overflow.
pub fn psi(t: f64, m: f64, x: f64) -> f64 {
    match specfun::airy_scaled(x + m + t * t) {
        Ok(a) => psi_from_scaled(t, x, &a),
        Err(_) => f64::NAN,
    }
}

#[inline]
fn psi_from_scaled(t: f64, x: f64, a: &specfun::ScaledAiry) -> f64 {
    let bracket = t * a.ai + a.aip;
    if bracket == 0.0 {
        return 0.0;
    }
    2.0 * (x * t - a.log_scale).exp() * bracket
}

/// Log of the integrand envelope `2 e^{2^{1/3} L |t|} exp(-(2/3) max(0, 2^{1/3} L + min(s, s + t^2))^{3/2})`.
fn log_envelope(s: f64, t: f64, l: f64) -> f64 {
    let x = CBRT_2 * l;
    let arg = (x + s.min(s + t * t)).max(0.0);
    std::f64::consts::LN_2 + x * t.abs() - 2.0 / 3.0 * arg * arg.sqrt()
}

/// Number of doublings of `cutoff_floor` used for `(s, t)`.
fn cutoff_level(s: f64, t: f64, cfg: &NumericsConfig) -> u32 {
    let log_tol = cfg.envelope_tol.ln();
    let mut level = 0;
    while level < MAX_CUTOFF_DOUBLINGS
        && log_envelope(s, t, cfg.cutoff_floor * f64::powi(2.0, level as i32)) > log_tol
    {
        level += 1;
    }
    level
}

/// Truncation length `L(s, t)`: `cutoff_floor` doubled until the envelope
/// drops below `envelope_tol`.
pub fn cutoff(s: f64, t: f64, cfg: &NumericsConfig) -> f64 {
    cfg.cutoff_floor * f64::powi(2.0, cutoff_level(s, t, cfg) as i32)
}

/// `B_s` discretized on `[0, L]` together with the factorization of `I - B_s`.
pub struct GoeOperator {
    s: f64,
    rule: Arc<QuadratureRule>,
    op: DiscreteOperator,
    fact: Factorized,
}

impl GoeOperator {
    /// Builds the operator on `[0, cutoff]`; `cutoff` is split into panels of
    /// width `cfg.cutoff_floor` with `cfg.nodes` points each.
    pub fn new(s: f64, cutoff: f64, cfg: &NumericsConfig) -> Result<Self> {
        if !s.is_finite() {
            return Err(DensityError::Argument(format!("s must be finite, got {s}")));
        }
        let panels = (cutoff / cfg.cutoff_floor).round().max(1.0) as usize;
        let rule = Arc::new(QuadratureRule::composite(cfg.nodes, 0.0, cutoff, panels)?);
        let op = fredholm::discretize_symmetric(b_kernel(s), rule.clone())?;
        let fact = Factorized::new(&op);
        Ok(GoeOperator { s, rule, op, fact })
    }

    /// Uses the `t = 0` cutoff for `s`.
    pub fn for_shift(s: f64, cfg: &NumericsConfig) -> Result<Self> {
        GoeOperator::new(s, cutoff(s, 0.0, cfg), cfg)
    }

    pub fn shift(&self) -> f64 {
        self.s
    }

    pub fn rule(&self) -> &Arc<QuadratureRule> {
        &self.rule
    }

    pub fn operator(&self) -> &DiscreteOperator {
        &self.op
    }

    /// `F_GOE(s) = det(I - B_s)`
    pub fn f_goe(&self) -> f64 {
        self.fact.det()
    }

    /// `(psi_{t,m}(2^{1/3} x_i), psi_{-t,m}(2^{1/3} x_i))` as weighted vectors,
    /// `m = 4^{-1/3} s`. Both share one Airy evaluation per node.
    pub fn psi_pair(&self, t: f64) -> Result<(WeightedVector, WeightedVector)> {
        if !t.is_finite() {
            return Err(DensityError::Argument(format!("t must be finite, got {t}")));
        }
        let m = self.s / CBRT_4;
        let n = self.rule.len();
        let mut plus = Vec::with_capacity(n);
        let mut minus = Vec::with_capacity(n);
        for (x, w) in self.rule.iter() {
            let xs = CBRT_2 * x;
            let a = specfun::airy_scaled(xs + m + t * t)?;
            let sw = w.sqrt();
            plus.push(sw * psi_from_scaled(t, xs, &a));
            minus.push(sw * psi_from_scaled(-t, xs, &a));
        }
        for (index, value) in plus.iter().chain(minus.iter()).enumerate() {
            if !value.is_finite() {
                let index = index % n;
                return Err(FredholmError::NonFiniteFunction {
                    index,
                    x: self.rule.nodes()[index],
                    value: *value,
                }
                .into());
            }
        }
        Ok((
            WeightedVector::from_weighted(plus),
            WeightedVector::from_weighted(minus),
        ))
    }

    /// `gamma(t, s)` through the resolvent.
    pub fn gamma(&self, t: f64) -> Result<f64> {
        let (plus, minus) = self.psi_pair(t)?;
        Ok(CBRT_2 * self.fact.quadform(&plus, &minus)?)
    }

    /// `gamma(t, s) F_GOE(s)`
    pub fn density_resolvent(&self, t: f64) -> Result<f64> {
        Ok(self.gamma(t)? * self.f_goe())
    }

    /// `det(I - B_s + Psi_{t,m}) - det(I - B_s)`, factorizing the rank-one
    /// updated matrix directly.
    pub fn density_determinant(&self, t: f64) -> Result<f64> {
        let (plus, minus) = self.psi_pair(t)?;
        let updated = fredholm::rank_one_det(&self.op, &plus.scaled(CBRT_2), &minus)?;
        Ok(updated - self.f_goe())
    }

    /// `d/ds F_GOE(s)` via the trace formula.
    pub fn f_goe_derivative(&self) -> Result<f64> {
        let dop = fredholm::discretize_symmetric(b_kernel_derivative(self.s), self.rule.clone())?;
        Ok(self.fact.det_derivative(&dop)?)
    }
}

/// Lazily built operators for a fixed `s`, one per cutoff level.
struct OperatorCache<'a> {
    s: f64,
    cfg: &'a NumericsConfig,
    ops: BTreeMap<u32, GoeOperator>,
}

impl<'a> OperatorCache<'a> {
    fn new(s: f64, cfg: &'a NumericsConfig) -> Self {
        OperatorCache {
            s,
            cfg,
            ops: BTreeMap::new(),
        }
    }

    fn for_t(&mut self, t: f64) -> Result<&GoeOperator> {
        let level = cutoff_level(self.s, t, self.cfg);
        if !self.ops.contains_key(&level) {
            let l = self.cfg.cutoff_floor * f64::powi(2.0, level as i32);
            let op = GoeOperator::new(self.s, l, self.cfg)?;
            self.ops.insert(level, op);
        }
        Ok(&self.ops[&level])
    }
}

/// `f(t_i, m)` for every `t_i`, resolvent path, at a single `m`.
pub fn density_row(m: f64, ts: &[f64], cfg: &NumericsConfig) -> Result<Vec<f64>> {
    let mut cache = OperatorCache::new(CBRT_4 * m, cfg);
    ts.iter()
        .map(|&t| cache.for_t(t)?.density_resolvent(t))
        .collect()
}

/// `F_GOE(s) = det(I - P_0 B_s P_0)`
pub fn f_goe(s: f64, cfg: &NumericsConfig) -> Result<f64> {
    cfg.validate()?;
    Ok(GoeOperator::for_shift(s, cfg)?.f_goe())
}

/// `P(max_t {A2(t) - t^2} <= m) = F_GOE(4^{1/3} m)`
pub fn cdf_max(m: f64, cfg: &NumericsConfig) -> Result<f64> {
    f_goe(CBRT_4 * m, cfg)
}

/// `gamma(t, s)`, with the cutoff chosen for `(s, t)`.
pub fn gamma(t: f64, s: f64, cfg: &NumericsConfig) -> Result<f64> {
    cfg.validate()?;
    GoeOperator::new(s, cutoff(s, t, cfg), cfg)?.gamma(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum JointMethod {
    /// `gamma(t, 4^{1/3} m) F_GOE(4^{1/3} m)`
    Resolvent,
    /// `det(I - B + Psi) - F_GOE`
    Determinant,
}

/// Joint density `f(t, m)` of the argmax and the max.
pub fn joint_density(t: f64, m: f64, cfg: &NumericsConfig, method: JointMethod) -> Result<f64> {
    cfg.validate()?;
    let s = CBRT_4 * m;
    let op = GoeOperator::new(s, cutoff(s, t, cfg), cfg)?;
    match method {
        JointMethod::Resolvent => op.density_resolvent(t),
        JointMethod::Determinant => op.density_determinant(t),
    }
}

/// Composite Gauss–Legendre rule used for `int dm` (at least 200 nodes).
pub fn m_rule(cfg: &NumericsConfig) -> Result<QuadratureRule> {
    let panels = (cfg.m_hi - cfg.m_lo).ceil().max(1.0) as usize;
    let per_panel = 24.max(200usize.div_ceil(panels));
    Ok(QuadratureRule::composite(per_panel, cfg.m_lo, cfg.m_hi, panels)?)
}

/// Composite Gauss–Legendre rule used for `int dt` over `[-t_max, t_max]` (400 nodes).
pub fn t_rule(cfg: &NumericsConfig) -> Result<QuadratureRule> {
    Ok(QuadratureRule::composite(50, -cfg.t_max, cfg.t_max, 8)?)
}

/// `f_end(t) = int dm f(t, m)` over `[m_lo, m_hi]`.
pub fn endpoint_density(t: f64, cfg: &NumericsConfig) -> Result<f64> {
    cfg.validate()?;
    if !(t.abs() <= cfg.t_max + 2.0) {
        return Err(DensityError::Argument(format!(
            "|t| must be at most t_max + 2 = {}, got {t}",
            cfg.t_max + 2.0
        )));
    }
    Ok(EndpointTable::compute(vec![t], cfg)?.values[0])
}

/// Both sides of `int dt f(t, m) = d/dm F_GOE(4^{1/3} m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginalResidual {
    pub lhs: f64,
    pub rhs: f64,
}

impl MarginalResidual {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// `lhs`: 400-node t-integration of `f(., m)` over `[-t_max, t_max]`;
/// `rhs`: `4^{1/3} F_GOE'(4^{1/3} m)` by the trace formula.
pub fn goe_marginal_residual(m: f64, cfg: &NumericsConfig) -> Result<MarginalResidual> {
    goe_marginal_residual_with(m, cfg, b_kernel_derivative(CBRT_4 * m))
}

/// As [`goe_marginal_residual`] with a caller-supplied `d/ds B_s` kernel.
pub fn goe_marginal_residual_with<K: Fn(f64, f64) -> f64>(
    m: f64,
    cfg: &NumericsConfig,
    derivative_kernel: K,
) -> Result<MarginalResidual> {
    cfg.validate()?;
    let rule = t_rule(cfg)?;
    let row = density_row(m, rule.nodes(), cfg)?;
    let lhs = rule.weights().iter().zip(&row).map(|(w, f)| w * f).sum();

    let op = GoeOperator::for_shift(CBRT_4 * m, cfg)?;
    let dop = fredholm::discretize_symmetric(derivative_kernel, op.rule().clone())?;
    let rhs = CBRT_4 * op.fact.det_derivative(&dop)?;
    Ok(MarginalResidual { lhs, rhs })
}

/// Centered difference of `F_GOE` with step `h`, for cross-checking the
/// trace formula.
pub fn f_goe_derivative_fd(s: f64, h: f64, cfg: &NumericsConfig) -> Result<f64> {
    let l = cutoff(s, 0.0, cfg).max(cutoff(s - h, 0.0, cfg));
    let plus = GoeOperator::new(s + h, l, cfg)?.f_goe();
    let minus = GoeOperator::new(s - h, l, cfg)?.f_goe();
    Ok((plus - minus) / (2.0 * h))
}

/// `|int_{-8}^{8} dt psi_{-t,m}(2^{1/3} x) psi_{t,m}(2^{1/3} y) - (-2^{1/3} Ai'(x + y + 4^{1/3} m))|`
pub fn psi_closed_form_residual(x: f64, y: f64, m: f64) -> Result<f64> {
    let rule = QuadratureRule::composite(50, -8.0, 8.0, 8)?;
    let (xs, ys) = (CBRT_2 * x, CBRT_2 * y);
    let numeric = rule.integrate(|t| psi(-t, m, xs) * psi(t, m, ys))?;
    let closed = -CBRT_2 * specfun::airy(x + y + CBRT_4 * m)?.aip;
    Ok((numeric - closed).abs())
}

/// Uniform grid `lo, lo + step, ...` through `hi` (inclusive up to rounding).
pub fn grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(lo <= hi) || !(step > 0.0) || !lo.is_finite() || !hi.is_finite() {
        return Err(DensityError::Argument(format!(
            "empty or invalid grid [{lo}, {hi}] step {step}"
        )));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| lo + step * i as f64).collect())
}

/// Grid symmetric about zero: `k * step` for `k = -K..=K`, exact negation.
pub fn symmetric_grid(half_width: f64, step: f64) -> Result<Vec<f64>> {
    if !(half_width >= 0.0) || !(step > 0.0) || !half_width.is_finite() {
        return Err(DensityError::Argument(format!(
            "invalid symmetric grid: half width {half_width}, step {step}"
        )));
    }
    let k = (half_width / step + 1e-9).floor() as i64;
    Ok((-k..=k).map(|i| step * i as f64).collect())
}

/// `f(t_i, m_j)` on a rectangular grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointDensityTable {
    pub t_grid: Vec<f64>,
    pub m_grid: Vec<f64>,
    /// Row-major in `t`: `values[i * m_grid.len() + j] = f(t_i, m_j)`.
    pub values: Vec<f64>,
    pub config: NumericsConfig,
}

impl JointDensityTable {
    /// Fills the table column by column (one `m` at a time, in parallel when
    /// the `parallel` feature is on). Cell values do not depend on the schedule.
    pub fn compute(t_grid: Vec<f64>, m_grid: Vec<f64>, cfg: &NumericsConfig) -> Result<Self> {
        cfg.validate()?;
        let columns: Vec<Vec<f64>> = pool::map(&m_grid, |&m| density_row(m, &t_grid, cfg))
            .into_iter()
            .collect::<Result<_>>()?;
        let (nt, nm) = (t_grid.len(), m_grid.len());
        let mut values = vec![0.0; nt * nm];
        for (j, col) in columns.iter().enumerate() {
            for (i, &f) in col.iter().enumerate() {
                values[i * nm + j] = f;
            }
        }
        Ok(JointDensityTable {
            t_grid,
            m_grid,
            values,
            config: *cfg,
        })
    }

    /// Default range `[-t_max, t_max] x [m_lo, m_hi]` with steps `dt`, `dm`.
    pub fn default_grid(cfg: &NumericsConfig) -> Result<Self> {
        let ts = symmetric_grid(cfg.t_max, cfg.dt)?;
        let ms = grid(cfg.m_lo, cfg.m_hi, cfg.dm)?;
        JointDensityTable::compute(ts, ms, cfg)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.m_grid.len() + j]
    }

    /// Two-dimensional trapezoid rule over the table.
    pub fn trapezoid_mass(&self) -> f64 {
        let wt = trapezoid_weights(&self.t_grid);
        let wm = trapezoid_weights(&self.m_grid);
        let nm = self.m_grid.len();
        let mut total = 0.0;
        for (i, a) in wt.iter().enumerate() {
            let row = &self.values[i * nm..(i + 1) * nm];
            total += a * row.iter().zip(&wm).map(|(f, b)| f * b).sum::<f64>();
        }
        total
    }

    /// `max |f(t, m) - f(-t, m)|`, pairing `t_i` with `t_{n-1-i}`.
    /// Meaningful only when the t-grid is symmetric.
    pub fn max_asymmetry(&self) -> f64 {
        let (nt, nm) = (self.t_grid.len(), self.m_grid.len());
        let mut worst = 0.0_f64;
        for i in 0..nt / 2 {
            for j in 0..nm {
                worst = worst.max((self.get(i, j) - self.get(nt - 1 - i, j)).abs());
            }
        }
        worst
    }

    /// `(t, m, f)` at the largest table entry.
    pub fn argmax(&self) -> (f64, f64, f64) {
        let nm = self.m_grid.len();
        let (k, &f) = self
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("table is non-empty");
        (self.t_grid[k / nm], self.m_grid[k % nm], f)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `f_end(t_i)` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EndpointTable {
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub config: NumericsConfig,
}

impl EndpointTable {
    /// `f_end(t_i) = sum_j w_j f(t_i, m_j)` with the nodes of [`m_rule`].
    pub fn compute(t_grid: Vec<f64>, cfg: &NumericsConfig) -> Result<Self> {
        cfg.validate()?;
        let rule = m_rule(cfg)?;
        let columns: Vec<Vec<f64>> = pool::map(rule.nodes(), |&m| density_row(m, &t_grid, cfg))
            .into_iter()
            .collect::<Result<_>>()?;
        let mut values = vec![0.0; t_grid.len()];
        for (w, col) in rule.weights().iter().zip(&columns) {
            for (acc, f) in values.iter_mut().zip(col) {
                *acc += w * f;
            }
        }
        Ok(EndpointTable {
            t_grid,
            values,
            config: *cfg,
        })
    }

    /// Symmetric grid `[-t_max, t_max]` with step `dt`.
    pub fn default_grid(cfg: &NumericsConfig) -> Result<Self> {
        EndpointTable::compute(symmetric_grid(cfg.t_max, cfg.dt)?, cfg)
    }

    /// Wraps precomputed values (e.g. read back from a CSV).
    pub fn from_values(t_grid: Vec<f64>, values: Vec<f64>, config: NumericsConfig) -> Result<Self> {
        if t_grid.len() != values.len() || t_grid.len() < 2 {
            return Err(DensityError::Argument(
                "endpoint table needs at least two (t, f) pairs of equal length".into(),
            ));
        }
        if t_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(DensityError::Argument("t grid must be increasing".into()));
        }
        Ok(EndpointTable {
            t_grid,
            values,
            config,
        })
    }

    pub fn trapezoid_mass(&self) -> f64 {
        trapezoid_weights(&self.t_grid)
            .iter()
            .zip(&self.values)
            .map(|(w, f)| w * f)
            .sum()
    }

    /// `max |f_end(t) - f_end(-t)|` over mirrored grid points.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.values.len();
        (0..n / 2)
            .map(|i| (self.values[i] - self.values[n - 1 - i]).abs())
            .fold(0.0, f64::max)
    }

    /// Cumulative trapezoid integral at each grid point, starting from 0.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.values.len());
        let mut acc = 0.0;
        out.push(0.0);
        for k in 1..self.values.len() {
            let h = self.t_grid[k] - self.t_grid[k - 1];
            acc += 0.5 * h * (self.values[k] + self.values[k - 1]);
            out.push(acc);
        }
        out
    }
}

/// Trapezoid weights for an increasing, possibly non-uniform grid.
pub fn trapezoid_weights(grid: &[f64]) -> Vec<f64> {
    let n = grid.len();
    let mut w = vec![0.0; n];
    for k in 1..n {
        let h = 0.5 * (grid[k] - grid[k - 1]);
        w[k - 1] += h;
        w[k] += h;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> NumericsConfig {
        NumericsConfig::default()
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        assert!(cfg().with_nodes(10).validate().is_err());
        assert!(cfg().with_cutoff_floor(4.0).validate().is_err());
        let mut c = cfg();
        c.m_lo = 5.0;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.dt = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn kernel_structure() {
        assert!((b_kernel(0.0)(0.0, 0.0) - 0.3550280538878172).abs() < 1e-16);
        let (x, y, s) = (0.37, 1.9, -1.3);
        assert_eq!(b_kernel(s)(x, y), b_kernel(s)(y, x));
        assert_eq!(b_kernel(s)(x, y), b_kernel(0.0)(x, y + s));
    }

    #[test]
    fn psi_values() {
        assert!((psi(0.0, 0.0, 0.0) + 0.5176388075856136).abs() < 1e-15);
        assert!((psi(1.0, 0.0, 0.0) + 0.047710049967823594).abs() < 1e-15);
        for t in [0.0, 1.0, 2.0, 4.0, -4.0] {
            assert!(psi(t, 0.0, 40.0).abs() < 1e-20, "t = {t}");
        }
        // Large x t is handled without overflow.
        assert!(psi(6.0, -4.0, 120.0).is_finite());
    }

    #[test]
    fn cutoff_grows_with_t() {
        let c = cfg();
        assert_eq!(cutoff(0.0, 0.0, &c), 12.0);
        assert!(cutoff(0.0, 4.0, &c) >= 24.0);
        assert!(cutoff(-9.5, 4.0, &c) > cutoff(0.0, 4.0, &c));
        assert_eq!(cutoff(1.0, 2.5, &c), cutoff(1.0, -2.5, &c));
    }

    #[test]
    fn grids() {
        let g = grid(-5.0, 3.0, 0.05).unwrap();
        assert_eq!(g.len(), 161);
        let s = symmetric_grid(4.0, 0.02).unwrap();
        assert_eq!(s.len(), 401);
        assert!(s.iter().zip(s.iter().rev()).all(|(a, b)| *a == -*b));
        assert!(grid(1.0, 0.0, 0.1).is_err());
        assert!(grid(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn f_goe_tails() {
        let c = cfg();
        let hi = f_goe(8.0, &c).unwrap();
        assert!((1.0 - 1e-8..=1.0).contains(&hi));
        assert!(cdf_max(5.0, &c).unwrap() > 1.0 - 1e-8);
        assert!(cdf_max(-4.0, &c).unwrap() < 1e-4);
        assert_eq!(cdf_max(0.3, &c).unwrap(), f_goe(CBRT_4 * 0.3, &c).unwrap());
    }

    #[test]
    fn rejects_out_of_range_endpoint() {
        assert!(endpoint_density(6.5, &cfg()).is_err());
        assert!(joint_density(f64::NAN, 0.0, &cfg(), JointMethod::Resolvent).is_err());
    }

    #[test]
    fn trapezoid_weights_sum_to_length() {
        let w = trapezoid_weights(&[0.0, 0.5, 2.0, 2.25]);
        assert!((w.iter().sum::<f64>() - 2.25).abs() < 1e-15);
    }
}
