//! The `verify` suite: identities and convergence properties of the density
//! pipeline, each reported as `|residual|` against a fixed tolerance.

use std::fmt;

use anyhow::Result;
use endpoint_core::density::{
    cutoff, f_goe, f_goe_derivative_fd, goe_marginal_residual_with, psi_closed_form_residual,
    EndpointTable, GoeOperator, NumericsConfig, CBRT_4,
};
use endpoint_core::specfun;
use endpoint_core::stats::{self, DEFAULT_TAIL_WINDOW};
use serde::Serialize;

use crate::Level;

pub const REFERENCE_VARIANCE: f64 = 0.2409;
pub const REFERENCE_EXCESS_KURTOSIS: f64 = -0.2374;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    /// Quantity that must be strictly below `tolerance`.
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tolerance,
            passed: residual < tolerance,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}  {:<36} residual = {:<12.3e} tol = {:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.residual,
            self.tolerance
        )
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Runs every check whose name contains `only` (all when `None`), reporting each
/// through `report` as soon as it is computed.
pub fn run(
    level: Level,
    only: Option<&str>,
    mutate_aip_sign: bool,
    mut report: impl FnMut(&Check),
) -> Result<Vec<Check>> {
    let nodes = match level {
        Level::Fast => 80,
        Level::Full => 160,
    };
    let cfg = NumericsConfig::default().with_nodes(nodes);
    let wanted = |name: &str| only.is_none_or(|o| name.contains(o));
    let mut checks = Vec::new();
    let mut push = |c: Check, checks: &mut Vec<Check>| {
        report(&c);
        checks.push(c);
    };

    for m in [-2.0, -1.0, 0.0, 1.0] {
        let name = format!("marginal_identity[m={m}]");
        if !wanted(&name) {
            continue;
        }
        let s = CBRT_4 * m;
        let sign = if mutate_aip_sign { -1.0 } else { 1.0 };
        let r = goe_marginal_residual_with(m, &cfg, move |x, y| sign * specfun::aip(x + y + s))?;
        push(Check::new(name, r.residual(), 1e-6), &mut checks);
    }

    if wanted("trace_formula_vs_difference") {
        let op = GoeOperator::for_shift(0.0, &cfg)?;
        let trace = op.f_goe_derivative()?;
        let fd = f_goe_derivative_fd(0.0, 1e-4, &cfg)?;
        push(Check::new("trace_formula_vs_difference[s=0]", (trace - fd).abs(), 1e-7), &mut checks);
    }

    if wanted("two_formula") || wanted("joint_symmetry") {
        let ts = linspace(-2.0, 2.0, 9);
        let ms = linspace(-3.0, 1.0, 9);
        let (mut agree, mut sym) = (0.0_f64, 0.0_f64);
        for &m in &ms {
            let s = CBRT_4 * m;
            for &t in &ts {
                let op = GoeOperator::new(s, cutoff(s, t, &cfg), &cfg)?;
                let a = op.density_resolvent(t)?;
                let b = op.density_determinant(t)?;
                let mirrored = op.density_resolvent(-t)?;
                agree = agree.max((a - b).abs());
                sym = sym.max((a - mirrored).abs());
            }
        }
        if wanted("two_formula") {
            push(Check::new("two_formula_agreement[9x9]", agree, 1e-8), &mut checks);
        }
        if wanted("joint_symmetry") {
            push(Check::new("joint_symmetry[9x9]", sym, 1e-9), &mut checks);
        }
    }

    if wanted("psi_closed_form") {
        let mut worst = 0.0_f64;
        for x in [0.0, 0.5, 1.0] {
            for (y, m) in [(0.0, 0.0), (0.5, -1.0), (1.5, 0.5)] {
                worst = worst.max(psi_closed_form_residual(x, y, m)?);
            }
        }
        push(Check::new("psi_closed_form[9 points]", worst, 1e-6), &mut checks);
    }

    if wanted("fgoe_node_doubling") {
        let fine = cfg.with_nodes(2 * nodes);
        let mut worst = 0.0_f64;
        for k in -4..=3 {
            let s = k as f64;
            worst = worst.max((f_goe(s, &cfg)? - f_goe(s, &fine)?).abs());
        }
        push(Check::new(format!("fgoe_node_doubling[{nodes}->{}]", 2 * nodes), worst, 1e-9), &mut checks);
    }

    if level == Level::Full && wanted("cutoff_doubling") {
        for (t, m) in [(0.0, -1.0), (1.0, -2.0), (2.0, 0.0)] {
            let s = CBRT_4 * m;
            let l = cutoff(s, t, &cfg);
            let a = GoeOperator::new(s, l, &cfg)?.density_resolvent(t)?;
            let b = GoeOperator::new(s, 2.0 * l, &cfg)?.density_resolvent(t)?;
            push(Check::new(format!("cutoff_doubling[t={t},m={m}]"), (a - b).abs(), 1e-9), &mut checks);
        }
    }

    let table_checks = [
        "mass",
        "endpoint_symmetry",
        "variance",
        "excess_kurtosis",
        "skewness",
        "tail_cubic_beats_quadratic",
        "tail_exponent_positive",
    ];
    if table_checks.iter().any(|n| wanted(n)) {
        let table = EndpointTable::default_grid(&cfg)?;
        let mo = stats::moments(&table)?;
        let fit = stats::tail_fit(&table, DEFAULT_TAIL_WINDOW.0, DEFAULT_TAIL_WINDOW.1)?;
        let all = [
            Check::new("mass", (mo.mass - 1.0).abs(), 1e-4),
            Check::new("endpoint_symmetry", table.max_asymmetry(), 1e-8),
            Check::new("variance", (mo.variance - REFERENCE_VARIANCE).abs(), 5e-3),
            Check::new(
                "excess_kurtosis",
                (mo.excess_kurtosis - REFERENCE_EXCESS_KURTOSIS).abs(),
                5e-3,
            ),
            Check::new("skewness", mo.skewness.abs(), 1e-7),
            // margins: must be negative
            Check::new("tail_cubic_beats_quadratic", fit.quad_r2 - fit.cubic_r2, 0.0),
            Check::new("tail_exponent_positive", -fit.c, 0.0),
        ];
        for c in all.into_iter().filter(|c| wanted(&c.name)) {
            push(c, &mut checks);
        }
    }
    Ok(checks)
}
