use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{optimal_forecast, LinearRule, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IterationStatus {
    Converged,
    ZeroSlope,
    /// The best response is undefined (`τ² + (μ+c)² = 0`).
    Singular,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestResponseTrace {
    /// The starting rule followed by every iterate that moved by at least `tol`.
    pub rules: Vec<LinearRule>,
    pub status: IterationStatus,
}

/// Repeatedly replaces the DM's conjecture with the forecaster's best
/// response. Diagnostic only: convergence is not guaranteed.
pub fn best_response_iteration(
    start: LinearRule,
    params: &ModelParams,
    max_iter: usize,
    tol: f64,
) -> Result<BestResponseTrace> {
    let mut rules = vec![start];
    let mut current = start;
    if current.slope == 0.0 {
        return Ok(BestResponseTrace {
            rules,
            status: IterationStatus::ZeroSlope,
        });
    }
    for _ in 0..max_iter {
        let next = match optimal_forecast(&current, params) {
            Ok(rule) => rule,
            Err(crate::Error::SingularDenominator) => {
                return Ok(BestResponseTrace {
                    rules,
                    status: IterationStatus::Singular,
                })
            }
            Err(e) => return Err(e),
        };
        let moved = (next.intercept - current.intercept)
            .abs()
            .max((next.slope - current.slope).abs());
        if moved < tol {
            return Ok(BestResponseTrace {
                rules,
                status: IterationStatus::Converged,
            });
        }
        rules.push(next);
        current = next;
        if current.slope == 0.0 {
            return Ok(BestResponseTrace {
                rules,
                status: IterationStatus::ZeroSlope,
            });
        }
    }
    Ok(BestResponseTrace {
        rules,
        status: IterationStatus::MaxIterations,
    })
}
