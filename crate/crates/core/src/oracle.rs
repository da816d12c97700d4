//! Brute-force verifiers for the closed forms in [`crate::model`].
//!
//! None of these routines evaluate the closed-form optimum they are meant to
//! check. The Monte Carlo minimizer uses the analytic optimum only to centre
//! its search bracket.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{optimal_forecast, LinearRule, ModelParams};
use crate::simulator::PolicyShockSpec;

pub const MIN_SAMPLE_COUNT: usize = 10_000;
pub const GOLDEN_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub sample_count: usize,
    /// Minimum half-width of the search interval around the pilot value.
    pub bracket_halfwidth: f64,
    /// Golden-section stopping width, relative to `1 + |f|`.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            sample_count: 200_000,
            bracket_halfwidth: 1.0,
            tolerance: 1e-9,
            seed: 0,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sample_count < MIN_SAMPLE_COUNT {
            return Err(Error::InvalidParams(format!(
                "sample_count must be >= {MIN_SAMPLE_COUNT}, got {}",
                self.sample_count
            )));
        }
        if !(self.bracket_halfwidth > 0.0) {
            return Err(Error::InvalidParams("bracket_halfwidth must be > 0".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParams("tolerance must be > 0".into()));
        }
        Ok(())
    }
}

/// Exact conditional MSE of forecast value `f` at state `θ`, expanded in raw
/// moments of `x`: with `g = y_T − (f − b)/c`,
/// `E[(θ − f + x·g + ε)²] = (θ − f)² + 2μ(θ − f)g + E[x²]g² + σ²`.
pub fn exact_conditional_mse(
    forecast: f64,
    theta: f64,
    conjecture: &LinearRule,
    params: &ModelParams,
) -> Result<f64> {
    let state = conjecture.implied_state(forecast)?;
    let gap = params.y_target - state;
    let miss = theta - forecast;
    let second_moment = params.tau2 + params.mu * params.mu;
    Ok(miss * miss + 2.0 * params.mu * miss * gap + second_moment * gap * gap + params.sigma2)
}

/// Minimizes the exact conditional MSE by recovering its quadratic
/// coefficients from three evaluations and solving the first-order
/// condition. Later passes recentre on the previous estimate with a step
/// sized to the loss scale, which keeps cancellation error near machine
/// precision even when the minimum value dwarfs the curvature.
pub fn exact_mse_minimizer(
    theta: f64,
    conjecture: &LinearRule,
    params: &ModelParams,
) -> Result<f64> {
    let loss = |f: f64| exact_conditional_mse(f, theta, conjecture, params);
    let mut center = theta;
    let mut h = 1.0 + center.abs();
    for _ in 0..4 {
        let (lm, l0, lp) = (loss(center - h)?, loss(center)?, loss(center + h)?);
        let curvature = (lp + lm - 2.0 * l0) / (h * h);
        let slope = (lp - lm) / (2.0 * h);
        if !(curvature > 0.0) {
            return Err(Error::SingularDenominator);
        }
        center -= slope / curvature;
        let scale = 1.0 + center.abs();
        h = (l0 / curvature).sqrt().clamp(1e-6 * scale, scale);
    }
    Ok(center)
}

/// Golden-section search for the minimum of a unimodal function on `[lo, hi]`.
/// Returns `(argmin, min, iterations)`.
pub fn golden_section<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64, usize) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iter = 0;
    while iter < max_iter && (hi - lo) > tol * (1.0 + x1.abs().max(x2.abs())) {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
        iter += 1;
    }
    if f1 <= f2 {
        (x1, f1, iter)
    } else {
        (x2, f2, iter)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McMinimum {
    pub minimizer: f64,
    /// Delta-method standard error of the minimizer over Monte Carlo draws.
    pub std_error: f64,
    pub min_loss: f64,
    pub iterations: usize,
}

/// Draws of `(x, ε)` shared by every candidate forecast.
struct CommonDraws {
    x: Vec<f64>,
    noise: Vec<f64>,
}

impl CommonDraws {
    fn generate(dist: &PolicyShockSpec, sigma2: f64, n: usize, seed: u64) -> Result<Self> {
        let sampler = dist.sampler()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sd = sigma2.sqrt();
        let mut x = Vec::with_capacity(n);
        let mut noise = Vec::with_capacity(n);
        for _ in 0..n {
            x.push(sampler.sample(&mut rng));
            let z: f64 = StandardNormal.sample(&mut rng);
            noise.push(sd * z);
        }
        Ok(Self { x, noise })
    }

    fn residuals<'a>(
        &'a self,
        forecast: f64,
        theta: f64,
        conjecture: &LinearRule,
        y_target: f64,
    ) -> impl Iterator<Item = f64> + 'a {
        let gap = y_target - (forecast - conjecture.intercept) / conjecture.slope;
        let base = theta - forecast;
        self.x
            .iter()
            .zip(&self.noise)
            .map(move |(&x, &e)| base + x * gap + e)
    }

    fn mean_loss(&self, forecast: f64, theta: f64, conjecture: &LinearRule, y_target: f64) -> f64 {
        let sum: f64 = self
            .residuals(forecast, theta, conjecture, y_target)
            .map(|r| r * r)
            .sum();
        sum / self.x.len() as f64
    }
}

/// Minimizes a Monte Carlo estimate of the conditional MSE with common
/// random numbers across candidate forecasts.
pub fn mc_mse_minimizer(
    theta: f64,
    conjecture: &LinearRule,
    params: &ModelParams,
    dist: &PolicyShockSpec,
    cfg: &OracleConfig,
) -> Result<McMinimum> {
    cfg.validate()?;
    let tol = 1e-9;
    if (dist.target_mean - params.mu).abs() > tol * params.mu.max(1.0)
        || (dist.target_var - params.tau2).abs() > tol * params.tau2.max(1.0)
    {
        return Err(Error::ParameterMismatch(format!(
            "shock moments ({}, {}) differ from params ({}, {})",
            dist.target_mean, dist.target_var, params.mu, params.tau2
        )));
    }
    let pilot = optimal_forecast(conjecture, params)?.eval(theta);
    let half = cfg.bracket_halfwidth.max(10.0 * pilot.abs());
    let (lo, hi) = (pilot - half, pilot + half);

    let draws = CommonDraws::generate(dist, params.sigma2, cfg.sample_count, cfg.seed)?;
    let y_t = params.y_target;
    let (minimizer, min_loss, iterations) = golden_section(
        |f| draws.mean_loss(f, theta, conjecture, y_t),
        lo,
        hi,
        cfg.tolerance,
        GOLDEN_MAX_ITER,
    );
    let edge = 2.0 * cfg.tolerance * (1.0 + minimizer.abs());
    if minimizer - lo <= edge || hi - minimizer <= edge {
        return Err(Error::BracketFailure { lo, hi });
    }

    // Sample first-order condition: mean of r_i (1 + x_i / c) = 0.
    let c = conjecture.slope;
    let n = draws.x.len() as f64;
    let scores: Vec<f64> = draws
        .residuals(minimizer, theta, conjecture, y_t)
        .zip(&draws.x)
        .map(|(r, &x)| r * (1.0 + x / c))
        .collect();
    let jacobian = draws.x.iter().map(|&x| (1.0 + x / c).powi(2)).sum::<f64>() / n;
    let score_mean = scores.iter().sum::<f64>() / n;
    let score_var = scores.iter().map(|s| (s - score_mean).powi(2)).sum::<f64>() / (n - 1.0);
    let std_error = score_var.sqrt() / (n.sqrt() * jacobian);

    Ok(McMinimum {
        minimizer,
        std_error,
        min_loss,
        iterations,
    })
}

/// Monte Carlo MSE curve over a grid of forecast values, on common draws.
pub fn mc_mse_curve(
    forecasts: &[f64],
    theta: f64,
    conjecture: &LinearRule,
    params: &ModelParams,
    dist: &PolicyShockSpec,
    cfg: &OracleConfig,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    conjecture.implied_state(0.0)?;
    let draws = CommonDraws::generate(dist, params.sigma2, cfg.sample_count, cfg.seed)?;
    Ok(forecasts
        .iter()
        .map(|&f| draws.mean_loss(f, theta, conjecture, params.y_target))
        .collect())
}

/// Brute-force minimizer of the DM's expected loss
/// `E[(θ + a + ε − y_T)²|f] + t·a²`, where the DM reads the state from `f`
/// through `conjecture`. Uses an expanding grid and repeated refinement.
pub fn grid_action_minimizer(
    forecast: f64,
    t_cost: f64,
    conjecture: &LinearRule,
    params: &ModelParams,
) -> Result<f64> {
    if !(t_cost > -1.0) {
        return Err(Error::InvalidParams(format!(
            "adjustment cost must exceed -1, got {t_cost}"
        )));
    }
    let state = conjecture.implied_state(forecast)?;
    let loss = |a: f64| {
        let miss = state + a - params.y_target;
        miss * miss + params.sigma2 + t_cost * a * a
    };
    const POINTS: usize = 101;
    let argmin_on = |lo: f64, hi: f64| -> usize {
        let step = (hi - lo) / (POINTS - 1) as f64;
        (0..POINTS)
            .map(|i| (i, loss(lo + step * i as f64)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
            .expect("non-empty grid")
    };

    let mut radius = 1.0;
    let mut idx = argmin_on(-radius, radius);
    let mut doublings = 0;
    while (idx == 0 || idx == POINTS - 1) && doublings < 1100 {
        radius *= 2.0;
        idx = argmin_on(-radius, radius);
        doublings += 1;
    }
    let (mut lo, mut hi) = (-radius, radius);
    loop {
        let step = (hi - lo) / (POINTS - 1) as f64;
        let best = lo + step * idx as f64;
        lo = best - step;
        hi = best + step;
        if hi - lo <= 1e-14 * (1.0 + best.abs()) {
            return Ok(best);
        }
        idx = argmin_on(lo, hi);
    }
}
