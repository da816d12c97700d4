//! Monte Carlo engine that plays the forecasting game draw by draw.
//!
//! Draws are generated in fixed-size blocks. Block `k` uses a ChaCha8 stream
//! keyed by `(seed, k)`, so the output depends only on the run's seed and
//! size, never on how blocks are scheduled across worker threads.

mod best_response;
mod ols;
mod shock;

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use best_response::{best_response_iteration, BestResponseTrace, IterationStatus};
pub use ols::{ols, ols_mz, OlsFit};
pub use shock::{
    beta_shape, sample_policy_shock, truncated_std_normal_moments, PolicyShockSpec, ShockFamily,
    ShockSampler,
};

use crate::error::{Error, Result};
use crate::format::sig10;
use crate::model::{
    bias_line, conditional_bias_and_mz, conditional_forecast, constrained_dm_choice,
    equilibrium_bias_and_mz, mz_line, optimal_forecast, reaction_from_conjecture, solve_equilibria,
    ActionMenu, BiasLine, ConditionalForecastSpec, LinearRule, ModelParams, MzLine,
};

/// Number of draws generated from one random stream.
pub const BLOCK_SIZE: usize = 1 << 14;

/// Tolerance for agreement between duplicated moment specifications.
const MOMENT_MATCH_TOL: f64 = 1e-12;

/// Distribution of the state and the outcome noise. Both are drawn normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateNoiseSpec {
    pub theta_mean: f64,
    pub theta_var: f64,
    pub noise_var: f64,
}

impl StateNoiseSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.theta_mean.is_finite() {
            return Err(Error::InvalidParams("theta mean must be finite".into()));
        }
        if !(self.theta_var.is_finite() && self.theta_var >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "theta variance must be >= 0, got {}",
                self.theta_var
            )));
        }
        if !(self.noise_var.is_finite() && self.noise_var > 0.0) {
            return Err(Error::InvalidParams(format!(
                "noise variance must be > 0, got {}",
                self.noise_var
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scenario {
    /// Forecaster best-responds to an arbitrary (possibly wrong) conjecture.
    ConjectureRule { conjecture: LinearRule },
    /// Both sides play the selected equilibrium.
    Equilibrium,
    /// The DM follows the mechanical Taylor rule.
    TaylorRule,
    /// Forecast `θ + a₀` under an assumed action; the DM reacts through
    /// `conjecture`.
    Conditional {
        spec: ConditionalForecastSpec,
        conjecture: LinearRule,
    },
    /// The DM picks from a two-action menu using both conditional forecasts.
    /// Each draw's adjustment cost is the DM's type `t = 1/x − 1`; the
    /// menu's own `t_cost` is not used. The recorded forecast is the one
    /// conditional on the action actually taken.
    ConstrainedMenu { spec: ConditionalForecastSpec },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationRun {
    pub draw_count: usize,
    pub seed: u64,
    pub scenario: Scenario,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrawRecord {
    pub theta: f64,
    pub x: f64,
    pub forecast: f64,
    pub action: f64,
    pub outcome: f64,
    pub error: f64,
}

/// Statistics recomputable from the draw records alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub draw_count: usize,
    pub mean_error: f64,
    pub mean_error_se: f64,
    pub mse: f64,
    /// OLS of outcome on forecast; `None` when forecasts do not vary.
    pub mz: Option<OlsFit>,
    /// OLS of forecast error on the state; `None` when the state is fixed.
    pub bias_regression: Option<OlsFit>,
    /// Mean squared deviation of the error from its fitted conditional mean.
    pub variance_term: f64,
    /// Mean squared fitted conditional bias.
    pub bias_sq_term: f64,
}

impl SimulationSummary {
    pub fn from_records(records: &[DrawRecord]) -> Result<Self> {
        let n = records.len();
        if n == 0 {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        let nf = n as f64;
        let errors: Vec<f64> = records.iter().map(|r| r.error).collect();
        let mean_error = errors.iter().sum::<f64>() / nf;
        let mse = errors.iter().map(|e| e * e).sum::<f64>() / nf;
        let mean_error_se = if n > 1 {
            let var = errors.iter().map(|e| (e - mean_error).powi(2)).sum::<f64>() / (nf - 1.0);
            (var / nf).sqrt()
        } else {
            f64::NAN
        };

        let forecasts: Vec<f64> = records.iter().map(|r| r.forecast).collect();
        let outcomes: Vec<f64> = records.iter().map(|r| r.outcome).collect();
        let thetas: Vec<f64> = records.iter().map(|r| r.theta).collect();
        let mz = optional_fit(ols_mz(&forecasts, &outcomes))?;
        let bias_regression = optional_fit(ols(&thetas, &errors))?;

        let fitted = |theta: f64| match &bias_regression {
            Some(fit) => fit.intercept + fit.slope * theta,
            None => mean_error,
        };
        let (mut variance_term, mut bias_sq_term) = (0.0, 0.0);
        for r in records {
            let b = fitted(r.theta);
            variance_term += (r.error - b).powi(2);
            bias_sq_term += b * b;
        }
        Ok(Self {
            draw_count: n,
            mean_error,
            mean_error_se,
            mse,
            mz,
            bias_regression,
            variance_term: variance_term / nf,
            bias_sq_term: bias_sq_term / nf,
        })
    }
}

fn optional_fit(fit: Result<OlsFit>) -> Result<Option<OlsFit>> {
    match fit {
        Ok(f) => Ok(Some(f)),
        Err(Error::ZeroVariance) | Err(Error::InsufficientData { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationOutput {
    pub run: SimulationRun,
    pub records: Vec<DrawRecord>,
    pub summary: SimulationSummary,
}

/// How a scenario maps a state draw to a forecast and an action.
#[derive(Debug, Clone, Copy)]
enum Play {
    Reactive {
        forecast_rule: LinearRule,
        conjecture: LinearRule,
    },
    Conditional {
        assumed_action: f64,
        conjecture: LinearRule,
    },
    Menu {
        actions: [f64; 2],
    },
}

fn resolve_play(scenario: &Scenario, params: &ModelParams) -> Result<Play> {
    match *scenario {
        Scenario::ConjectureRule { conjecture } => Ok(Play::Reactive {
            forecast_rule: optimal_forecast(&conjecture, params)?,
            conjecture,
        }),
        Scenario::TaylorRule => Ok(Play::Reactive {
            forecast_rule: optimal_forecast(&LinearRule::TAYLOR, params)?,
            conjecture: LinearRule::TAYLOR,
        }),
        Scenario::Equilibrium => {
            let rule = solve_equilibria(params).selected()?;
            Ok(Play::Reactive {
                forecast_rule: rule,
                conjecture: rule,
            })
        }
        Scenario::Conditional { spec, conjecture } => {
            conjecture.implied_state(0.0)?;
            Ok(Play::Conditional {
                assumed_action: spec.assumed_action,
                conjecture,
            })
        }
        Scenario::ConstrainedMenu { spec } => {
            let menu = spec.menu.ok_or(Error::MissingMenu)?;
            Ok(Play::Menu {
                actions: menu.actions,
            })
        }
    }
}

/// Population bias and MZ line the scenario's sample statistics estimate.
pub fn analytic_targets(scenario: &Scenario, params: &ModelParams) -> Result<(BiasLine, MzLine)> {
    match scenario {
        Scenario::ConjectureRule { conjecture } => {
            Ok((bias_line(conjecture, params)?, mz_line(conjecture, params)?))
        }
        Scenario::TaylorRule => Ok((
            bias_line(&LinearRule::TAYLOR, params)?,
            mz_line(&LinearRule::TAYLOR, params)?,
        )),
        Scenario::Equilibrium => equilibrium_bias_and_mz(params),
        Scenario::Conditional { spec, conjecture } => {
            conditional_bias_and_mz(spec, conjecture, params)
        }
        // The forecast conditional on the realized action is unbiased.
        Scenario::ConstrainedMenu { .. } => Ok((
            BiasLine {
                coef_theta: 0.0,
                coef_const: 0.0,
            },
            MzLine {
                intercept: 0.0,
                slope: 1.0,
            },
        )),
    }
}

fn check_consistent(what: &str, a: f64, b: f64) -> Result<()> {
    if (a - b).abs() > MOMENT_MATCH_TOL * a.abs().max(b.abs()).max(1.0) {
        return Err(Error::ParameterMismatch(format!("{what}: {a} vs {b}")));
    }
    Ok(())
}

fn stream(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Plays `run.draw_count` independent rounds of the game.
pub fn play_game(
    run: &SimulationRun,
    shock: &PolicyShockSpec,
    state_noise: &StateNoiseSpec,
    params: &ModelParams,
) -> Result<SimulationOutput> {
    params.validate()?;
    state_noise.validate()?;
    check_consistent("policy strength mean", shock.target_mean, params.mu)?;
    check_consistent("policy strength variance", shock.target_var, params.tau2)?;
    check_consistent("noise variance", state_noise.noise_var, params.sigma2)?;
    if run.draw_count == 0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let sampler = shock.sampler()?;
    let play = resolve_play(&run.scenario, params)?;

    let blocks = run.draw_count.div_ceil(BLOCK_SIZE);
    let chunks: Vec<Vec<DrawRecord>> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let start = block * BLOCK_SIZE;
            let len = BLOCK_SIZE.min(run.draw_count - start);
            let mut rng = stream(run.seed, block as u64);
            let mut out = Vec::with_capacity(len);
            for _ in 0..len {
                out.push(play_round(&play, &sampler, state_noise, params, &mut rng)?);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let records: Vec<DrawRecord> = chunks.into_iter().flatten().collect();
    let summary = SimulationSummary::from_records(&records)?;
    Ok(SimulationOutput {
        run: *run,
        records,
        summary,
    })
}

fn play_round(
    play: &Play,
    sampler: &ShockSampler,
    sn: &StateNoiseSpec,
    params: &ModelParams,
    rng: &mut ChaCha8Rng,
) -> Result<DrawRecord> {
    let z: f64 = StandardNormal.sample(rng);
    let theta = sn.theta_mean + sn.theta_var.sqrt() * z;
    let x = sampler.sample(rng);
    let z: f64 = StandardNormal.sample(rng);
    let noise = sn.noise_var.sqrt() * z;

    let (forecast, action) = match *play {
        Play::Reactive {
            forecast_rule,
            conjecture,
        } => {
            let f = forecast_rule.eval(theta);
            (f, reaction_from_conjecture(x, &conjecture, f, params)?)
        }
        Play::Conditional {
            assumed_action,
            conjecture,
        } => {
            let f = conditional_forecast(
                theta,
                &ConditionalForecastSpec::unconstrained(assumed_action),
            );
            (f, reaction_from_conjecture(x, &conjecture, f, params)?)
        }
        Play::Menu { actions } => {
            let spec = ConditionalForecastSpec {
                assumed_action: actions[0],
                menu: Some(ActionMenu {
                    actions,
                    t_cost: 1.0 / x - 1.0,
                }),
            };
            let f0 = theta + actions[0];
            let f1 = theta + actions[1];
            let choice = constrained_dm_choice(f0, f1, &spec, params)?;
            ([f0, f1][choice], actions[choice])
        }
    };
    let outcome = theta + action + noise;
    Ok(DrawRecord {
        theta,
        x,
        forecast,
        action,
        outcome,
        error: outcome - forecast,
    })
}

pub const DRAWS_CSV_HEADER: &str = "index,theta,x,forecast,action,outcome,error";

/// Writes per-draw records as CSV with 10 significant digits.
pub fn write_draws_csv<W: Write>(records: &[DrawRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{DRAWS_CSV_HEADER}")?;
    for (i, r) in records.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            i,
            sig10(r.theta),
            sig10(r.x),
            sig10(r.forecast),
            sig10(r.action),
            sig10(r.outcome),
            sig10(r.error)
        )?;
    }
    Ok(())
}
