//! Browser bindings: F_GOE curves, the joint density surface and the endpoint
//! density, computed in the page with a coarse default discretization.

use endpoint_core::density::{self, grid, symmetric_grid, EndpointTable, JointDensityTable, NumericsConfig};
use endpoint_core::stats;
use wasm_bindgen::prelude::*;

fn config(nodes: usize) -> Result<NumericsConfig, JsError> {
    let cfg = NumericsConfig::default().with_nodes(nodes);
    cfg.validate()?;
    Ok(cfg)
}

/// `s` grid from `min` to `max`.
#[wasm_bindgen]
pub fn s_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>, JsError> {
    Ok(grid(min, max, step)?)
}

/// `F_GOE(s)` on [`s_grid`].
#[wasm_bindgen]
pub fn fgoe_curve(min: f64, max: f64, step: f64, nodes: usize) -> Result<Vec<f64>, JsError> {
    let cfg = config(nodes)?;
    grid(min, max, step)?
        .into_iter()
        .map(|s| density::f_goe(s, &cfg).map_err(JsError::from))
        .collect()
}

/// Symmetric `t` grid `[-half_width, half_width]`.
#[wasm_bindgen]
pub fn t_grid(half_width: f64, step: f64) -> Result<Vec<f64>, JsError> {
    Ok(symmetric_grid(half_width, step)?)
}

/// `f(t, m)` on `t_grid(t_half, step) x s_grid(m_lo, m_hi, step)`, flattened
/// t-major.
#[wasm_bindgen]
pub fn joint_density_grid(t_half: f64, m_lo: f64, m_hi: f64, step: f64, nodes: usize) -> Result<Vec<f64>, JsError> {
    let cfg = config(nodes)?;
    let table = JointDensityTable::compute(symmetric_grid(t_half, step)?, grid(m_lo, m_hi, step)?, &cfg)?;
    Ok(table.values)
}

/// Endpoint density on `t_grid(t_max, step)` followed by its variance and
/// excess kurtosis as the last two entries.
#[wasm_bindgen]
pub fn endpoint_density_curve(t_max: f64, step: f64, nodes: usize) -> Result<Vec<f64>, JsError> {
    let cfg = config(nodes)?;
    let table = EndpointTable::compute(symmetric_grid(t_max, step)?, &cfg)?;
    let m = stats::moments(&table)?;
    let mut out = table.values;
    out.extend([m.variance, m.excess_kurtosis]);
    Ok(out)
}
