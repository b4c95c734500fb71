//! Matter/antimatter two-component decomposition of relativistic wavefunctions.
//!
//! A Klein-Gordon field `Φ` is split into a particle ingredient `θ` and a
//! hidden antiparticle ingredient `χ`; a Dirac spinor is split into its upper
//! and lower halves. The ratio `R = ∫|χ|² / ∫|θ|²` is computed for boosted free
//! wave packets and for hydrogenlike 1S bound states, both in closed form and
//! by independent quadrature.
//!
//! All quantities use natural units `ħ = c = m₀ = 1`.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coulomb;
pub mod diracfree;
pub mod error;
pub mod evolve;
pub mod kgfree;
pub mod packets;
pub mod quad;
pub mod units;

pub use error::{Error, Result};
pub use units::{Beta, FineStructure, ModelKind, Zeta};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

use serde::Serialize;

/// How a ratio was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioMethod {
    ClosedForm,
    Quadrature,
}

/// The hidden-antiparticle ratio `∫|χ|² / ∫|θ|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioResult {
    pub value: f64,
    pub method: RatioMethod,
    pub abs_error_estimate: f64,
}

impl RatioResult {
    pub fn closed_form(value: f64) -> Self {
        Self {
            value,
            method: RatioMethod::ClosedForm,
            abs_error_estimate: 4.0 * f64::EPSILON * value.abs(),
        }
    }

    pub(crate) fn quadrature(value: f64, abs_error_estimate: f64) -> Self {
        Self {
            value,
            method: RatioMethod::Quadrature,
            abs_error_estimate: abs_error_estimate.abs(),
        }
    }
}
