//! Closed-form results for the forecaster / decision-maker feedback game.
//!
//! The outcome is `y = θ + a + ε`. The decision maker (DM) observes the
//! forecast `f`, inverts it through a conjectured affine rule `f = b + c·θ`
//! and reacts with `a = x·(y_T − E(θ|f))`, where the policy strength `x` is
//! private to the DM and has mean `mu` and variance `tau2`. The forecaster
//! minimizes the conditional MSE of `f` given `θ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slopes at or below this magnitude (relative to `max(1, mu)`) are treated
/// as zero when classifying equilibrium roots.
pub const ZERO_SLOPE_TOL: f64 = 1e-12;

/// Primitives of the game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Mean of the policy strength `x`.
    pub mu: f64,
    /// Variance of the policy strength `x`.
    pub tau2: f64,
    /// Variance of the outcome noise.
    pub sigma2: f64,
    /// The DM's target for the outcome.
    pub y_target: f64,
}

impl ModelParams {
    pub fn new(mu: f64, tau2: f64, sigma2: f64, y_target: f64) -> Result<Self> {
        let params = Self {
            mu,
            tau2,
            sigma2,
            y_target,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(Error::InvalidParams(format!(
                "mu must be > 0, got {}",
                self.mu
            )));
        }
        if !(self.tau2.is_finite() && self.tau2 >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "tau2 must be >= 0, got {}",
                self.tau2
            )));
        }
        if !(self.sigma2.is_finite() && self.sigma2 > 0.0) {
            return Err(Error::InvalidParams(format!(
                "sigma2 must be > 0, got {}",
                self.sigma2
            )));
        }
        if !self.y_target.is_finite() {
            return Err(Error::InvalidParams("y_target must be finite".into()));
        }
        Ok(())
    }
}

/// An affine forecast rule `f(θ) = intercept + slope·θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearRule {
    pub intercept: f64,
    pub slope: f64,
}

impl LinearRule {
    /// The conjecture behind the mechanical Taylor rule `a = x·(y_T − f)`.
    pub const TAYLOR: LinearRule = LinearRule {
        intercept: 0.0,
        slope: 1.0,
    };

    pub const fn new(intercept: f64, slope: f64) -> Self {
        Self { intercept, slope }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.intercept + self.slope * theta
    }

    /// The state the DM infers from forecast `f` when she believes this rule.
    pub fn implied_state(&self, forecast: f64) -> Result<f64> {
        self.require_invertible()?;
        Ok((forecast - self.intercept) / self.slope)
    }

    fn require_invertible(&self) -> Result<()> {
        if self.slope == 0.0 {
            Err(Error::DegenerateConjecture)
        } else {
            Ok(())
        }
    }

    /// `y_T + b/c`, the term that recurs through every closed form.
    fn shifted_target(&self, y_target: f64) -> f64 {
        y_target + self.intercept / self.slope
    }
}

/// Population Mincer-Zarnowitz line `E(y|f) = intercept + slope·f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MzLine {
    pub intercept: f64,
    pub slope: f64,
}

impl MzLine {
    pub fn eval(&self, forecast: f64) -> f64 {
        self.intercept + self.slope * forecast
    }
}

/// Conditional bias `E(y − f|θ) = coef_const + coef_theta·θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasLine {
    pub coef_theta: f64,
    pub coef_const: f64,
}

impl BiasLine {
    pub fn eval(&self, theta: f64) -> f64 {
        self.coef_const + self.coef_theta * theta
    }
}

/// One linear equilibrium of the game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumRoot {
    pub rule: LinearRule,
    /// `(τ² + μ(μ+c)) / (τ² + (μ+c)²)` at this root.
    pub k: f64,
    /// The root slope is zero, so the rule cannot serve as a conjecture.
    pub degenerate: bool,
    /// `τ² + (μ+c)² = 0` at this root (only possible when `τ² = 0`); the
    /// forecaster is indifferent among all forecasts and the intercept is
    /// reported as the `τ² → 0` limit.
    pub singular: bool,
}

impl EquilibriumRoot {
    pub fn usable(&self) -> bool {
        !self.degenerate && !self.singular
    }
}

/// Both separating equilibria together with existence metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSolution {
    pub tau2: f64,
    /// `None` when `τ² > 1/4`.
    pub roots: Option<[EquilibriumRoot; 2]>,
    /// Both roots coincide (`τ² = 1/4`).
    pub repeated: bool,
    /// 1-based index of the selected equilibrium.
    pub selected_index: usize,
}

impl EquilibriumSolution {
    pub fn exists(&self) -> bool {
        self.roots.is_some()
    }

    /// Root `index` (1 or 2), erroring if it does not exist or cannot be used.
    pub fn root(&self, index: usize) -> Result<&EquilibriumRoot> {
        assert!(index == 1 || index == 2, "equilibrium index must be 1 or 2");
        let roots = self
            .roots
            .as_ref()
            .ok_or(Error::NoEquilibrium { tau2: self.tau2 })?;
        let root = &roots[index - 1];
        if root.usable() {
            Ok(root)
        } else {
            Err(Error::DegenerateEquilibrium { index })
        }
    }

    pub fn rule(&self, index: usize) -> Result<LinearRule> {
        self.root(index).map(|r| r.rule)
    }

    pub fn selected(&self) -> Result<LinearRule> {
        self.rule(self.selected_index)
    }
}

/// A two-action menu for the constrained DM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionMenu {
    pub actions: [f64; 2],
    /// Adjustment cost `t`, must exceed −1.
    pub t_cost: f64,
}

/// Conditional (fixed-action) forecasting setup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionalForecastSpec {
    pub assumed_action: f64,
    pub menu: Option<ActionMenu>,
}

impl ConditionalForecastSpec {
    pub fn unconstrained(assumed_action: f64) -> Self {
        Self {
            assumed_action,
            menu: None,
        }
    }

    pub fn with_menu(a0: f64, a1: f64, t_cost: f64) -> Result<Self> {
        let spec = Self {
            assumed_action: a0,
            menu: Some(ActionMenu {
                actions: [a0, a1],
                t_cost,
            }),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(menu) = &self.menu {
            if !(menu.t_cost > -1.0) {
                return Err(Error::InvalidParams(format!(
                    "adjustment cost must exceed -1, got {}",
                    menu.t_cost
                )));
            }
        }
        Ok(())
    }
}

/// Conditional MSE split into outcome variance and squared bias.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MseDecomposition {
    pub variance_term: f64,
    pub bias_sq_term: f64,
}

impl MseDecomposition {
    pub fn total(&self) -> f64 {
        self.variance_term + self.bias_sq_term
    }
}

/// Replaces `-0.0` with `0.0` so zero limits print without a sign.
fn unsigned_zero(v: f64) -> f64 {
    v + 0.0
}

/// The DM's optimal action `x·(y_T − E(θ|f))` for a realized strength `x`.
pub fn dm_optimal_action(x: f64, expected_state: f64, params: &ModelParams) -> f64 {
    debug_assert!(x > 0.0);
    x * (params.y_target - expected_state)
}

/// The DM's action after inverting forecast `f` through `conjecture`.
pub fn reaction_from_conjecture(
    x: f64,
    conjecture: &LinearRule,
    forecast: f64,
    params: &ModelParams,
) -> Result<f64> {
    let state = conjecture.implied_state(forecast)?;
    Ok(dm_optimal_action(x, state, params))
}

fn best_response_denominator(conjecture: &LinearRule, params: &ModelParams) -> Result<f64> {
    conjecture.require_invertible()?;
    let s = params.mu + conjecture.slope;
    let den = params.tau2 + s * s;
    if den == 0.0 {
        return Err(Error::SingularDenominator);
    }
    Ok(den)
}

/// The MSE-minimizing affine forecast against the DM's conjecture.
pub fn optimal_forecast(conjecture: &LinearRule, params: &ModelParams) -> Result<LinearRule> {
    let den = best_response_denominator(conjecture, params)?;
    let c = conjecture.slope;
    let mu = params.mu;
    let s = mu + c;
    let slope = c * s / den;
    let intercept = c * (params.tau2 + mu * s) / den * conjecture.shifted_target(params.y_target);
    Ok(LinearRule::new(intercept, slope))
}

/// Solves for both linear equilibria.
///
/// The equilibrium slopes solve `c² + (2μ−1)c + μ(μ−1) + τ² = 0`. Writing
/// `s = μ + c` this becomes `s² − s + τ² = 0`, whose roots are computed as
/// `s₁ = (1 + √(1−4τ²))/2` and `s₂ = τ²/s₁` to avoid cancellation near
/// `τ² = 0`.
pub fn solve_equilibria(params: &ModelParams) -> EquilibriumSolution {
    let tau2 = params.tau2;
    let mu = params.mu;
    let disc = 1.0 - 4.0 * tau2;
    if disc < 0.0 {
        return EquilibriumSolution {
            tau2,
            roots: None,
            repeated: false,
            selected_index: 1,
        };
    }
    let s1 = 0.5 * (1.0 + disc.sqrt());
    let s2 = tau2 / s1;
    let root = |s: f64| {
        let c = s - mu;
        let den = tau2 + s * s;
        let degenerate = c.abs() <= ZERO_SLOPE_TOL * mu.max(1.0);
        let singular = den == 0.0;
        let (k, intercept) = if degenerate || singular {
            // Limits of k and b along the root as the singularity is approached.
            (1.0 - c, (1.0 - c) * params.y_target)
        } else {
            let k = (tau2 + mu * s) / den;
            (k, k / (1.0 - k) * c * params.y_target)
        };
        EquilibriumRoot {
            rule: LinearRule::new(intercept, c),
            k,
            degenerate,
            singular,
        }
    };
    EquilibriumSolution {
        tau2,
        roots: Some([root(s1), root(s2)]),
        repeated: disc == 0.0,
        selected_index: 1,
    }
}

/// Conditional bias of the optimal forecast given the state.
pub fn bias_line(conjecture: &LinearRule, params: &ModelParams) -> Result<BiasLine> {
    let den = best_response_denominator(conjecture, params)?;
    let coef_theta = params.tau2 / den;
    let coef_const = -coef_theta * (conjecture.slope * params.y_target + conjecture.intercept);
    Ok(BiasLine {
        coef_theta: unsigned_zero(coef_theta),
        coef_const: unsigned_zero(coef_const),
    })
}

/// Population MZ line of the optimal forecast under `conjecture`.
pub fn mz_line(conjecture: &LinearRule, params: &ModelParams) -> Result<MzLine> {
    conjecture.require_invertible()?;
    let c = conjecture.slope;
    let s = params.mu + c;
    if s == 0.0 {
        return Err(Error::SingularMz);
    }
    let slope = (params.tau2 + c * s) / (c * s);
    let intercept = -(params.tau2 / s) * conjecture.shifted_target(params.y_target);
    Ok(MzLine {
        intercept: unsigned_zero(intercept),
        slope,
    })
}

/// Bias and MZ line of the first (selected) equilibrium, in the reduced
/// closed forms that hold along that root.
pub fn equilibrium_bias_and_mz(params: &ModelParams) -> Result<(BiasLine, MzLine)> {
    let tau2 = params.tau2;
    let disc = 1.0 - 4.0 * tau2;
    if disc < 0.0 {
        return Err(Error::NoEquilibrium { tau2 });
    }
    let root = disc.sqrt();
    let s1 = 0.5 * (1.0 + root);
    let mu = params.mu;
    if (s1 - mu).abs() <= ZERO_SLOPE_TOL * mu.max(1.0) {
        return Err(Error::DegenerateEquilibrium { index: 1 });
    }
    let y_t = params.y_target;

    let coef_theta = 2.0 * tau2 / (1.0 + root);
    let bias = BiasLine {
        coef_theta: unsigned_zero(coef_theta),
        coef_const: unsigned_zero(-coef_theta * y_t),
    };

    let adj = (1.0 - mu) * s1;
    let mz = MzLine {
        intercept: unsigned_zero(tau2 / (tau2 - adj) * y_t),
        slope: unsigned_zero(adj / (adj - tau2)),
    };
    Ok((bias, mz))
}

/// Splits the conditional MSE of forecast value `f` at state `θ` into
/// `Var(y|θ)` and `bias²(f|θ)`.
pub fn mse_decomposition(
    forecast: f64,
    theta: f64,
    conjecture: &LinearRule,
    params: &ModelParams,
) -> Result<MseDecomposition> {
    conjecture.require_invertible()?;
    let c = conjecture.slope;
    let gap = params.y_target - forecast / c + conjecture.intercept / c;
    let variance_term = params.tau2 * gap * gap + params.sigma2;
    let bias = theta + params.mu * conjecture.shifted_target(params.y_target)
        - (params.mu + c) / c * forecast;
    Ok(MseDecomposition {
        variance_term,
        bias_sq_term: bias * bias,
    })
}

/// The forecast that ignores feedback and assumes the action is fixed.
pub fn conditional_forecast(theta: f64, spec: &ConditionalForecastSpec) -> f64 {
    theta + spec.assumed_action
}

/// Bias and MZ line of the conditional forecast `θ + a₀` when the DM reacts
/// through `conjecture`.
pub fn conditional_bias_and_mz(
    spec: &ConditionalForecastSpec,
    conjecture: &LinearRule,
    params: &ModelParams,
) -> Result<(BiasLine, MzLine)> {
    conjecture.require_invertible()?;
    let c = conjecture.slope;
    let mu = params.mu;
    let a0 = spec.assumed_action;
    let level = mu * conjecture.shifted_target(params.y_target);
    let bias = BiasLine {
        coef_theta: unsigned_zero(-mu / c),
        coef_const: unsigned_zero(level - (mu + c) / c * a0),
    };
    let mz = MzLine {
        intercept: unsigned_zero(level - a0),
        slope: unsigned_zero(-(mu - c) / c),
    };
    Ok((bias, mz))
}

/// Index (0 or 1) of the menu action a constrained DM picks given the two
/// conditional forecasts. Ties go to action 0.
pub fn constrained_dm_choice(
    f0: f64,
    f1: f64,
    spec: &ConditionalForecastSpec,
    params: &ModelParams,
) -> Result<usize> {
    let menu = spec.menu.as_ref().ok_or(Error::MissingMenu)?;
    let [a0, a1] = menu.actions;
    let y_t = params.y_target;
    let lhs = (f0 - y_t).powi(2) - (f1 - y_t).powi(2);
    let rhs = menu.t_cost * (a1 * a1 - a0 * a0);
    Ok(if lhs <= rhs { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(mu: f64, tau2: f64, y_target: f64) -> ModelParams {
        ModelParams::new(mu, tau2, 1.0, y_target).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(0.0, 0.1, 1.0, 0.0).is_err());
        assert!(ModelParams::new(0.5, -0.1, 1.0, 0.0).is_err());
        assert!(ModelParams::new(0.5, 0.1, 0.0, 0.0).is_err());
        assert!(ModelParams::new(0.5, 0.1, 1.0, f64::NAN).is_err());
        assert!(ModelParams::new(0.5, 0.0, 1.0, 2.0).is_ok());
    }

    #[test]
    fn dm_action_examples() {
        assert_eq!(dm_optimal_action(0.5, 1.0, &params(0.5, 0.1, 2.0)), 0.5);
        assert_eq!(dm_optimal_action(3.7, 2.0, &params(0.5, 0.1, 2.0)), 0.0);
        let t = 1.0;
        assert_eq!(
            dm_optimal_action(1.0 / (1.0 + t), 0.0, &params(0.5, 0.1, 2.0)),
            1.0
        );
    }

    #[test]
    fn reaction_examples() {
        let p = params(0.5, 0.1, 2.0);
        assert_eq!(
            reaction_from_conjecture(0.5, &LinearRule::TAYLOR, 1.0, &p).unwrap(),
            0.5
        );
        let p0 = params(0.5, 0.1, 0.0);
        let conj = LinearRule::new(1.0, 2.0);
        assert_eq!(
            reaction_from_conjecture(1.0, &conj, 3.0, &p0).unwrap(),
            -1.0
        );
        let on_target = conj.slope * p.y_target + conj.intercept;
        assert_eq!(
            reaction_from_conjecture(0.3, &conj, on_target, &p).unwrap(),
            0.0
        );
        assert!(matches!(
            reaction_from_conjecture(1.0, &LinearRule::new(1.0, 0.0), 1.0, &p),
            Err(Error::DegenerateConjecture)
        ));
    }

    #[test]
    fn optimal_forecast_taylor_example() {
        let rule = optimal_forecast(&LinearRule::TAYLOR, &params(0.5, 0.1, 2.0)).unwrap();
        assert!(close(rule.intercept, 0.7234042553191489, 1e-12));
        assert!(close(rule.slope, 0.6382978723404255, 1e-12));
    }

    #[test]
    fn optimal_forecast_without_uncertainty() {
        for mu in [0.1, 0.5, 1.0, 3.0] {
            let rule = optimal_forecast(&LinearRule::TAYLOR, &params(mu, 0.0, 2.0)).unwrap();
            assert!(close(rule.slope, 1.0 / (mu + 1.0), 1e-15));
            assert!(close(rule.intercept, mu * 2.0 / (mu + 1.0), 1e-15));
        }
    }

    #[test]
    fn optimal_forecast_errors() {
        let p = params(0.5, 0.0, 1.0);
        assert!(matches!(
            optimal_forecast(&LinearRule::new(0.0, 0.0), &p),
            Err(Error::DegenerateConjecture)
        ));
        assert!(matches!(
            optimal_forecast(&LinearRule::new(0.0, -0.5), &p),
            Err(Error::SingularDenominator)
        ));
    }

    #[test]
    fn equilibria_examples() {
        let sol = solve_equilibria(&params(0.98, 0.1, 2.0));
        assert!(sol.exists());
        assert_eq!(sol.selected_index, 1);
        let [r1, r2] = sol.roots.unwrap();
        assert!(close(r1.rule.slope, -0.0927016653792583, 1e-12));
        assert!(close(r2.rule.slope, -0.8672983346207417, 1e-12));

        let sol = solve_equilibria(&params(0.3, 0.0, 2.0));
        let [r1, r2] = sol.roots.unwrap();
        assert_eq!(r1.rule.slope, 1.0 - 0.3);
        assert_eq!(r2.rule.slope, -0.3);
        assert!(r2.singular && !r1.singular);
        assert!(close(r2.rule.intercept, 1.3 * 2.0, 1e-15));
        assert!(matches!(
            sol.rule(2),
            Err(Error::DegenerateEquilibrium { index: 2 })
        ));

        let sol = solve_equilibria(&params(0.5, 0.26, 2.0));
        assert!(!sol.exists());
        assert!(matches!(sol.selected(), Err(Error::NoEquilibrium { .. })));
    }

    #[test]
    fn repeated_root_at_quarter() {
        let sol = solve_equilibria(&params(0.3, 0.25, 1.0));
        assert!(sol.repeated);
        let [r1, r2] = sol.roots.unwrap();
        assert_eq!(r1, r2);
        assert_eq!(sol.selected().unwrap(), r1.rule);
    }

    #[test]
    fn degenerate_root_flagged_not_fatal() {
        // mu = 1, tau2 = 0 puts the first root exactly at slope zero.
        let sol = solve_equilibria(&params(1.0, 0.0, 2.0));
        let [r1, _] = sol.roots.unwrap();
        assert!(r1.degenerate);
        assert!(matches!(
            sol.selected(),
            Err(Error::DegenerateEquilibrium { index: 1 })
        ));
    }

    #[test]
    fn bias_examples() {
        let b = bias_line(&LinearRule::TAYLOR, &params(0.5, 0.1, 2.0)).unwrap();
        assert!(close(b.eval(3.0), 0.1 / 2.35, 1e-15));
        assert!(close(b.eval(3.0), 0.04255, 1e-5));

        let b0 = bias_line(&LinearRule::new(0.4, 1.3), &params(0.7, 0.0, 2.0)).unwrap();
        assert_eq!((b0.coef_theta, b0.coef_const), (0.0, 0.0));

        let p = params(0.6, 0.25, 2.0);
        let rule = solve_equilibria(&p).selected().unwrap();
        let b = bias_line(&rule, &p).unwrap();
        assert!(close(b.eval(p.y_target + 1.0), 0.5, 1e-12));
    }

    #[test]
    fn mz_examples() {
        let mz = mz_line(&LinearRule::TAYLOR, &params(0.5, 0.1, 2.0)).unwrap();
        assert!(close(mz.slope, 1.6 / 1.5, 1e-15));
        assert!(close(mz.intercept, -0.2 / 1.5, 1e-15));

        let mz = mz_line(&LinearRule::TAYLOR, &params(0.98, 0.1, 2.0)).unwrap();
        assert!(close(mz.slope, 1.05, 0.005));

        let mz = mz_line(&LinearRule::new(0.3, -2.0), &params(0.5, 0.0, 2.0)).unwrap();
        assert_eq!((mz.intercept, mz.slope), (0.0, 1.0));

        assert!(matches!(
            mz_line(&LinearRule::new(0.0, -0.5), &params(0.5, 0.1, 2.0)),
            Err(Error::SingularMz)
        ));
    }

    #[test]
    fn equilibrium_bias_and_mz_examples() {
        let (_, mz) = equilibrium_bias_and_mz(&params(0.98, 0.1, 2.0)).unwrap();
        assert!(close(mz.slope, -0.22, 0.005));

        for tau2 in [0.05, 0.1, 0.2] {
            let (_, mz) = equilibrium_bias_and_mz(&params(1.0, tau2, 2.0)).unwrap();
            assert_eq!(mz.slope, 0.0);
            assert_eq!(mz.intercept, 2.0);
        }

        let (bias, mz) = equilibrium_bias_and_mz(&params(0.4, 0.0, 2.0)).unwrap();
        assert_eq!((bias.coef_theta, bias.coef_const), (0.0, 0.0));
        assert_eq!((mz.intercept, mz.slope), (0.0, 1.0));

        assert!(matches!(
            equilibrium_bias_and_mz(&params(0.5, 0.3, 2.0)),
            Err(Error::NoEquilibrium { .. })
        ));
        // mu = 1/2 + sqrt(1 - 4 tau2)/2 with tau2 = 0.09 gives mu = 0.9.
        assert!(matches!(
            equilibrium_bias_and_mz(&params(0.9, 0.09, 2.0)),
            Err(Error::DegenerateEquilibrium { index: 1 })
        ));
    }

    #[test]
    fn reduced_forms_agree_with_general_forms() {
        for &(mu, tau2) in &[(0.98, 0.1), (0.7, 0.15), (0.2, 0.24), (1.6, 0.05)] {
            let p = params(mu, tau2, 1.7);
            let rule = solve_equilibria(&p).selected().unwrap();
            let (bias_eq, mz_eq) = equilibrium_bias_and_mz(&p).unwrap();
            let bias = bias_line(&rule, &p).unwrap();
            let mz = mz_line(&rule, &p).unwrap();
            assert!(close(bias.coef_theta, bias_eq.coef_theta, 1e-10));
            assert!(close(bias.coef_const, bias_eq.coef_const, 1e-10));
            assert!(close(mz.slope, mz_eq.slope, 1e-10));
            assert!(close(mz.intercept, mz_eq.intercept, 1e-10));
        }
    }

    #[test]
    fn decomposition_examples() {
        let p = ModelParams::new(0.5, 0.0, 1.0, 2.0).unwrap();
        for f in [-3.0, 0.0, 2.5] {
            let d = mse_decomposition(f, 1.0, &LinearRule::TAYLOR, &p).unwrap();
            assert_eq!(d.variance_term, 1.0);
        }

        let p = ModelParams::new(0.7, 0.2, 0.5, 1.5).unwrap();
        let conj = LinearRule::new(0.3, 0.8);
        let c = conj.slope;
        let e = c / (p.mu + c);
        let d = e * p.mu * (p.y_target + conj.intercept / c);
        for theta in [-2.0, 0.0, 4.0] {
            let dec = mse_decomposition(d + e * theta, theta, &conj, &p).unwrap();
            assert!(dec.bias_sq_term < 1e-24);
        }
    }

    #[test]
    fn conditional_examples() {
        assert_eq!(
            conditional_forecast(1.0, &ConditionalForecastSpec::unconstrained(0.0)),
            1.0
        );
        assert_eq!(
            conditional_forecast(1.0, &ConditionalForecastSpec::unconstrained(0.25)),
            1.25
        );

        let p = params(1.0, 0.1, 2.0);
        let spec = ConditionalForecastSpec::unconstrained(0.0);
        let rational = LinearRule::new(spec.assumed_action, 1.0);
        let (bias, _) = conditional_bias_and_mz(&spec, &rational, &p).unwrap();
        assert_eq!(bias.eval(p.y_target), 0.0);

        let spec = ConditionalForecastSpec::unconstrained(0.3);
        let (_, mz) = conditional_bias_and_mz(&spec, &LinearRule::TAYLOR, &p).unwrap();
        assert_eq!(mz.slope, 0.0);
        assert_eq!(mz.intercept, -0.3 + 2.0);

        let p = params(0.5, 0.1, 2.0);
        let spec = ConditionalForecastSpec::unconstrained(0.2);
        let (bias, _) = conditional_bias_and_mz(&spec, &LinearRule::TAYLOR, &p).unwrap();
        assert!(close(bias.eval(1.0), 0.2, 1e-15));
    }

    #[test]
    fn conditional_rational_dm_matches_reduced_form() {
        let p = params(0.6, 0.1, 2.0);
        let a0 = 0.4;
        let spec = ConditionalForecastSpec::unconstrained(a0);
        let (bias, mz) = conditional_bias_and_mz(&spec, &LinearRule::new(a0, 1.0), &p).unwrap();
        for theta in [-1.0, 0.5, 3.0] {
            assert!(close(
                bias.eval(theta),
                -a0 + p.mu * (p.y_target - theta),
                1e-14
            ));
        }
        assert!(close(mz.slope, 1.0 - p.mu, 1e-15));
        assert!(close(
            mz.intercept,
            -(1.0 - p.mu) * a0 + p.mu * p.y_target,
            1e-14
        ));
    }

    #[test]
    fn constrained_choice_examples() {
        let p = params(0.5, 0.1, 2.0);
        let spec = ConditionalForecastSpec::with_menu(0.0, -0.25, 0.0).unwrap();
        assert_eq!(constrained_dm_choice(1.5, 2.4, &spec, &p).unwrap(), 1);
        assert_eq!(constrained_dm_choice(2.0, 2.1, &spec, &p).unwrap(), 0);
        let sym = ConditionalForecastSpec::with_menu(0.25, -0.25, 3.0).unwrap();
        assert_eq!(constrained_dm_choice(1.0, 1.0, &sym, &p).unwrap(), 0);
        assert!(matches!(
            constrained_dm_choice(1.0, 1.0, &ConditionalForecastSpec::unconstrained(0.0), &p),
            Err(Error::MissingMenu)
        ));
        assert!(ConditionalForecastSpec::with_menu(0.0, 1.0, -1.0).is_err());
    }
}
