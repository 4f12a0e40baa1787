//! Nyström discretization of integral operators and the determinant,
//! resolvent, rank-one and derivative formulas built on it.
//!
//! An operator `K` on `L^2([a, b])` is represented by the matrix
//! `M_ij = sqrt(w_i w_j) K(x_i, x_j)` and a function `u` by `sqrt(w_i) u(x_i)`,
//! so that `<u, v> ~ sum u_i v_i` and symmetric kernels stay symmetric.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, LU};
use thiserror::Error;

use crate::quadrature::QuadratureRule;

/// `I - M` is treated as singular when its smallest LU pivot falls below this.
///
/// The guard is on the pivot, not on the determinant: `det(I - B_s)` is a CDF
/// and legitimately reaches `1e-19` inside the default `m` range while the
/// system stays well conditioned.
pub const SINGULARITY_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FredholmError {
    #[error("kernel is not finite at nodes ({i}, {j}): K({x}, {y}) = {value}")]
    NonFiniteKernel {
        i: usize,
        j: usize,
        x: f64,
        y: f64,
        value: f64,
    },
    #[error("function is not finite at node {index} (x = {x}): {value}")]
    NonFiniteFunction { index: usize, x: f64, value: f64 },
    #[error("I - K is numerically singular (det = {det:e})")]
    Singular { det: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

/// Weighted kernel matrix on a quadrature rule.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    rule: Arc<QuadratureRule>,
    entries: DMatrix<f64>,
}

impl DiscreteOperator {
    /// The zero operator on `rule`.
    pub fn zero(rule: Arc<QuadratureRule>) -> Self {
        let n = rule.len();
        DiscreteOperator {
            rule,
            entries: DMatrix::zeros(n, n),
        }
    }

    pub fn rule(&self) -> &Arc<QuadratureRule> {
        &self.rule
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Largest `|M_ij - M_ji|`.
    pub fn max_asymmetry(&self) -> f64 {
        let m = &self.entries;
        let n = m.nrows();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        worst
    }
}

/// `sqrt(w_i) u(x_i)` on a quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedVector {
    values: DVector<f64>,
}

impl WeightedVector {
    /// Samples `u` at the nodes of `rule`.
    pub fn sample<F: FnMut(f64) -> f64>(rule: &QuadratureRule, mut u: F) -> Result<Self, FredholmError> {
        let mut values = DVector::zeros(rule.len());
        for (index, (x, w)) in rule.iter().enumerate() {
            let value = u(x);
            if !value.is_finite() {
                return Err(FredholmError::NonFiniteFunction { index, x, value });
            }
            values[index] = w.sqrt() * value;
        }
        Ok(WeightedVector { values })
    }

    /// Wraps already-weighted entries.
    pub fn from_weighted(values: Vec<f64>) -> Self {
        WeightedVector {
            values: DVector::from_vec(values),
        }
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `sum u_i v_i`, the discrete `L^2` inner product.
    pub fn dot(&self, other: &WeightedVector) -> f64 {
        self.values.dot(&other.values)
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.values *= factor;
        self
    }
}

/// Builds `M_ij = sqrt(w_i w_j) K(x_i, x_j)`.
pub fn discretize<K: Fn(f64, f64) -> f64>(
    kernel: K,
    rule: Arc<QuadratureRule>,
) -> Result<DiscreteOperator, FredholmError> {
    let n = rule.len();
    let sw = rule.sqrt_weights();
    let x = rule.nodes();
    let mut entries = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let value = kernel(x[i], x[j]);
            if !value.is_finite() {
                return Err(FredholmError::NonFiniteKernel {
                    i,
                    j,
                    x: x[i],
                    y: x[j],
                    value,
                });
            }
            entries[(i, j)] = sw[i] * sw[j] * value;
        }
    }
    Ok(DiscreteOperator { rule, entries })
}

/// Like [`discretize`] but evaluates only `i >= j` and mirrors, for kernels
/// known to satisfy `K(x, y) = K(y, x)`.
pub fn discretize_symmetric<K: Fn(f64, f64) -> f64>(
    kernel: K,
    rule: Arc<QuadratureRule>,
) -> Result<DiscreteOperator, FredholmError> {
    let n = rule.len();
    let sw = rule.sqrt_weights();
    let x = rule.nodes();
    let mut entries = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in j..n {
            let value = kernel(x[i], x[j]);
            if !value.is_finite() {
                return Err(FredholmError::NonFiniteKernel {
                    i,
                    j,
                    x: x[i],
                    y: x[j],
                    value,
                });
            }
            let m = sw[i] * sw[j] * value;
            entries[(i, j)] = m;
            entries[(j, i)] = m;
        }
    }
    Ok(DiscreteOperator { rule, entries })
}

/// Pivoted LU factorization of `I - M`, reusable across right-hand sides.
pub struct Factorized {
    lu: LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    det: f64,
    min_pivot: f64,
}

impl Factorized {
    pub fn new(op: &DiscreteOperator) -> Self {
        let n = op.dim();
        let a = DMatrix::identity(n, n) - &op.entries;
        let lu = a.lu();
        let det = lu.determinant();
        let min_pivot = lu
            .u()
            .diagonal()
            .iter()
            .fold(f64::INFINITY, |acc, p| acc.min(p.abs()));
        Factorized { lu, det, min_pivot }
    }

    /// `det(I - M)`, sign included.
    pub fn det(&self) -> f64 {
        self.det
    }

    fn check(&self) -> Result<(), FredholmError> {
        if self.min_pivot > SINGULARITY_GUARD && self.det.is_finite() {
            Ok(())
        } else {
            Err(FredholmError::Singular { det: self.det })
        }
    }

    fn check_len(&self, len: usize) -> Result<(), FredholmError> {
        let expected = self.lu.l().nrows();
        if len == expected {
            Ok(())
        } else {
            Err(FredholmError::Dimension { expected, got: len })
        }
    }

    /// `(I - M)^{-1} u`
    pub fn solve(&self, u: &WeightedVector) -> Result<DVector<f64>, FredholmError> {
        self.check()?;
        self.check_len(u.len())?;
        self.lu
            .solve(&u.values)
            .ok_or(FredholmError::Singular { det: self.det })
    }

    /// `v^T (I - M)^{-1} u`
    pub fn quadform(&self, u: &WeightedVector, v: &WeightedVector) -> Result<f64, FredholmError> {
        self.check_len(v.len())?;
        Ok(v.values.dot(&self.solve(u)?))
    }

    /// `det(I - M + u v^T) = det(I - M) (1 + v^T (I - M)^{-1} u)`
    pub fn rank_one_det(&self, u: &WeightedVector, v: &WeightedVector) -> Result<f64, FredholmError> {
        Ok(self.det * (1.0 + self.quadform(u, v)?))
    }

    /// `-det(I - M) tr((I - M)^{-1} dM)`
    pub fn det_derivative(&self, dop: &DiscreteOperator) -> Result<f64, FredholmError> {
        self.check()?;
        self.check_len(dop.dim())?;
        let x = self
            .lu
            .solve(&dop.entries)
            .ok_or(FredholmError::Singular { det: self.det })?;
        Ok(-self.det * x.trace())
    }
}

/// `det(I - M)` via pivoted LU.
pub fn det_id_minus(op: &DiscreteOperator) -> f64 {
    Factorized::new(op).det()
}

/// `v^T (I - M)^{-1} u`, by a linear solve.
pub fn resolvent_quadform(
    op: &DiscreteOperator,
    u: &WeightedVector,
    v: &WeightedVector,
) -> Result<f64, FredholmError> {
    Factorized::new(op).quadform(u, v)
}

/// `det(I - M + u v^T)`, evaluated directly by factorizing the updated matrix.
pub fn rank_one_det(
    op: &DiscreteOperator,
    u: &WeightedVector,
    v: &WeightedVector,
) -> Result<f64, FredholmError> {
    let n = op.dim();
    for len in [u.len(), v.len()] {
        if len != n {
            return Err(FredholmError::Dimension { expected: n, got: len });
        }
    }
    let a = DMatrix::identity(n, n) - &op.entries + &u.values * v.values.transpose();
    Ok(a.lu().determinant())
}

/// Derivative of `s -> det(I - M(s))` given `dM = dM/ds`.
pub fn det_derivative(op: &DiscreteOperator, dop: &DiscreteOperator) -> Result<f64, FredholmError> {
    Factorized::new(op).det_derivative(dop)
}
