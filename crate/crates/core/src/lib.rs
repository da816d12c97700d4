//! Forecasting under policy feedback.
//!
//! * [`model`]: closed-form optimal and equilibrium forecasts, their bias and
//!   Mincer-Zarnowitz (MZ) lines, and conditional-forecast variants.
//! * [`oracle`]: brute-force minimizers that check the closed forms.
//! * [`simulator`]: a seeded Monte Carlo engine for the game, plus OLS
//!   estimators.
//! * [`evaluation`]: rolling-window MZ regressions on forecast panels.

// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod evaluation;
pub mod format;
pub mod model;
pub mod oracle;
pub mod simulator;

pub use error::{Error, Result};
pub use model::{
    BiasLine, ConditionalForecastSpec, EquilibriumSolution, LinearRule, ModelParams, MzLine,
};
