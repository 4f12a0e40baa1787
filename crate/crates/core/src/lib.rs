//! Argmax and maximum of the Airy2 process minus a parabola.
//!
//! Computes the joint density `f(t, m)` of the argmax `T` and the maximum `M`
//! of `A2(t) - t^2` (Airy2 process minus a parabola) from Fredholm
//! determinants of the kernel `Ai(x + y + s)`, the endpoint marginal
//! `f_end(t)`, and a geometric last-passage percolation sampler whose
//! rescaled endpoints converge to the same law.
//!
//! Module map:
//!
//! * [`specfun`]: `Ai`, `Ai'` on the real line.
//! * [`quadrature`]: Gauss–Legendre and composite rules.
//! * [`fredholm`]: Nyström discretization, determinants, resolvent forms.
//! * [`density`]: `F_GOE`, `psi`, `gamma`, `f(t, m)`, `f_end(t)` and tables.
//! * [`stats`]: moments and tail fits of endpoint tables.
//! * [`lppsim`]: Monte-Carlo last-passage percolation endpoints and KS distance.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod density;
pub mod format;
pub mod fredholm;
pub mod lppsim;
mod pool;
pub mod quadrature;
pub mod specfun;
pub mod stats;

pub use density::{
    cdf_max, endpoint_density, f_goe, gamma, goe_marginal_residual, joint_density, psi,
    psi_closed_form_residual, EndpointTable, JointDensityTable, JointMethod, NumericsConfig,
};
pub use fredholm::{DiscreteOperator, WeightedVector};
pub use lppsim::{ks_distance, sample_endpoints, LppBatch, LppConfig};
pub use quadrature::{gauss_legendre, QuadratureRule};
pub use specfun::{airy, AiryValue};
pub use stats::{moments, tail_fit, MomentSummary, TailFit};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
