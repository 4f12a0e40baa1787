//! Gauss–Legendre rules on finite intervals and composite (panelled) rules.

use thiserror::Error;

pub const MAX_NODES: usize = 2048;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("node count must be in 1..={MAX_NODES}, got {0}")]
    NodeCount(usize),
    #[error("invalid interval [{0}, {1}]")]
    Interval(f64, f64),
    #[error("integrand is not finite at node {index} (x = {x}): {value}")]
    NonFinite { index: usize, x: f64, value: f64 },
}

/// Nodes and positive weights for `sum w_i f(x_i) ~ int_a^b f`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    interval: (f64, f64),
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `sqrt(w_i)` for every node, the symmetric Nyström weighting.
    pub fn sqrt_weights(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.sqrt()).collect()
    }

    /// Splits `[a, b]` into `panels` equal pieces with an `n`-point rule on each.
    pub fn composite(n: usize, a: f64, b: f64, panels: usize) -> Result<Self, QuadratureError> {
        check_interval(a, b)?;
        if panels == 0 {
            return Err(QuadratureError::NodeCount(0));
        }
        let base = gauss_legendre(n, -1.0, 1.0)?;
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(n * panels);
        let mut weights = Vec::with_capacity(n * panels);
        for p in 0..panels {
            let lo = a + h * p as f64;
            let hi = if p + 1 == panels { b } else { lo + h };
            let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            for (x, w) in base.iter() {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
        }
        Ok(QuadratureRule {
            nodes,
            weights,
            interval: (a, b),
        })
    }

    /// `sum w_i f(x_i)`, failing on the first non-finite integrand value.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, f: F) -> Result<f64, QuadratureError> {
        integrate(self, f)
    }
}

fn check_interval(a: f64, b: f64) -> Result<(), QuadratureError> {
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        Err(QuadratureError::Interval(a, b))
    }
}

/// The `n`-point Gauss–Legendre rule on `[a, b]`.
///
/// Nodes are roots of `P_n`, found by Newton iteration from the Chebyshev-angle
/// guess `cos(pi (i - 1/4) / (n + 1/2))`; `P_n` and `P_n'` come from the
/// three-term recurrence.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<QuadratureRule, QuadratureError> {
    if n == 0 || n > MAX_NODES {
        return Err(QuadratureError::NodeCount(n));
    }
    check_interval(a, b)?;

    let nf = n as f64;
    let mut ref_nodes = vec![0.0; n];
    let mut ref_weights = vec![0.0; n];
    // Roots are symmetric; solve for the positive half (descending from near 1).
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        ref_nodes[i] = -x;
        ref_nodes[n - 1 - i] = x;
        ref_weights[i] = w;
        ref_weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        ref_nodes[n / 2] = 0.0;
    }

    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    Ok(QuadratureRule {
        nodes: ref_nodes.iter().map(|x| mid + half * x).collect(),
        weights: ref_weights.iter().map(|w| half * w).collect(),
        interval: (a, b),
    })
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let pn = if n == 0 { p0 } else { p1 };
    let pn1 = if n == 0 { 0.0 } else { p0 };
    let d = n as f64 * (x * pn - pn1) / (x * x - 1.0);
    (pn, d)
}

pub fn integrate<F: FnMut(f64) -> f64>(
    rule: &QuadratureRule,
    mut f: F,
) -> Result<f64, QuadratureError> {
    let mut sum = 0.0;
    for (index, (x, w)) in rule.iter().enumerate() {
        let value = f(x);
        if !value.is_finite() {
            return Err(QuadratureError::NonFinite { index, x, value });
        }
        sum += w * value;
    }
    Ok(sum)
}
