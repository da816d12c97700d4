//! Moment-matched samplers for the policy strength `x = 1/(1+t)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ShockFamily {
    /// Beta distribution rescaled to `(lower, upper)`.
    BetaScaled { lower: f64, upper: f64 },
    /// Normal distribution truncated to `[lower, ∞)`.
    TruncatedNormal { lower: f64 },
    /// Point mass at the mean.
    Degenerate,
}

/// Distribution of the policy strength, specified by its first two moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyShockSpec {
    #[serde(flatten)]
    pub family: ShockFamily,
    pub target_mean: f64,
    pub target_var: f64,
}

impl PolicyShockSpec {
    pub fn beta_unit(mean: f64, var: f64) -> Self {
        Self {
            family: ShockFamily::BetaScaled {
                lower: 0.0,
                upper: 1.0,
            },
            target_mean: mean,
            target_var: var,
        }
    }

    pub fn truncated_normal(mean: f64, var: f64) -> Self {
        Self {
            family: ShockFamily::TruncatedNormal { lower: 0.0 },
            target_mean: mean,
            target_var: var,
        }
    }

    pub fn degenerate(mean: f64) -> Self {
        Self {
            family: ShockFamily::Degenerate,
            target_mean: mean,
            target_var: 0.0,
        }
    }

    /// Beta on the unit interval when feasible, a point mass when the
    /// variance is zero, and a truncated normal otherwise.
    pub fn default_for(mean: f64, var: f64) -> Self {
        if var == 0.0 {
            Self::degenerate(mean)
        } else if mean < 1.0 && var < mean * (1.0 - mean) {
            Self::beta_unit(mean, var)
        } else {
            Self::truncated_normal(mean, var)
        }
    }

    /// Solves the moment-matching problem and returns a ready sampler.
    pub fn sampler(&self) -> Result<ShockSampler> {
        let mean = self.target_mean;
        let var = self.target_var;
        if !(mean.is_finite() && mean > 0.0) {
            return Err(Error::MomentMatchInfeasible(format!(
                "mean must be positive, got {mean}"
            )));
        }
        if !(var.is_finite() && var >= 0.0) {
            return Err(Error::MomentMatchInfeasible(format!(
                "variance must be non-negative, got {var}"
            )));
        }
        match self.family {
            ShockFamily::Degenerate => {
                if var != 0.0 {
                    return Err(Error::MomentMatchInfeasible(
                        "degenerate family requires zero variance".into(),
                    ));
                }
                Ok(ShockSampler::Point(mean))
            }
            ShockFamily::BetaScaled { lower, upper } => beta_sampler(mean, var, lower, upper),
            ShockFamily::TruncatedNormal { lower } => truncated_normal_sampler(mean, var, lower),
        }
    }
}

#[derive(Debug, Clone)]
pub enum ShockSampler {
    Point(f64),
    Beta {
        dist: Beta<f64>,
        lower: f64,
        width: f64,
    },
    TruncatedNormal {
        location: f64,
        scale: f64,
        /// Standardized truncation point.
        alpha: f64,
    },
}

impl ShockSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            ShockSampler::Point(v) => *v,
            ShockSampler::Beta { dist, lower, width } => loop {
                let x = lower + width * dist.sample(rng);
                if x > 0.0 {
                    break x;
                }
            },
            ShockSampler::TruncatedNormal {
                location,
                scale,
                alpha,
            } => loop {
                let x = location + scale * sample_std_normal_tail(*alpha, rng);
                if x > 0.0 {
                    break x;
                }
            },
        }
    }
}

fn beta_sampler(mean: f64, var: f64, lower: f64, upper: f64) -> Result<ShockSampler> {
    if !(lower >= 0.0 && upper > lower && upper.is_finite()) {
        return Err(Error::MomentMatchInfeasible(format!(
            "beta support must satisfy 0 <= lower < upper, got ({lower}, {upper})"
        )));
    }
    let width = upper - lower;
    let m = (mean - lower) / width;
    let v = var / (width * width);
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::MomentMatchInfeasible(format!(
            "mean {mean} outside support ({lower}, {upper})"
        )));
    }
    let max_var = m * (1.0 - m);
    if !(v > 0.0 && v < max_var) {
        return Err(Error::MomentMatchInfeasible(format!(
            "beta requires 0 < variance < {}, got {var}",
            max_var * width * width
        )));
    }
    let (a, b) = beta_shape(m, v);
    let dist = Beta::new(a, b).map_err(|e| Error::MomentMatchInfeasible(e.to_string()))?;
    Ok(ShockSampler::Beta { dist, lower, width })
}

/// Beta shape parameters with mean `m` and variance `v` on the unit interval.
pub fn beta_shape(m: f64, v: f64) -> (f64, f64) {
    let common = m * (1.0 - m) / v - 1.0;
    (m * common, (1.0 - m) * common)
}

/// Upper end of the bisection range for the standardized truncation point.
/// Beyond it the moment ratio cannot be evaluated reliably in f64.
const ALPHA_MAX: f64 = 25.0;
const ALPHA_MIN: f64 = -40.0;

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

fn std_normal_sf(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

/// Mean and variance of a standard normal truncated to `[alpha, ∞)`.
pub fn truncated_std_normal_moments(alpha: f64) -> (f64, f64) {
    let lambda = std_normal_pdf(alpha) / std_normal_sf(alpha);
    (lambda, 1.0 + alpha * lambda - lambda * lambda)
}

/// `var / (mean − lower)²` of the truncated normal in standardized units.
fn dispersion_ratio(alpha: f64) -> f64 {
    let (lambda, var) = truncated_std_normal_moments(alpha);
    let excess = lambda - alpha;
    var / (excess * excess)
}

fn truncated_normal_sampler(mean: f64, var: f64, lower: f64) -> Result<ShockSampler> {
    if !(lower >= 0.0 && lower.is_finite()) {
        return Err(Error::MomentMatchInfeasible(format!(
            "truncation point must be >= 0, got {lower}"
        )));
    }
    let excess = mean - lower;
    if !(excess > 0.0) {
        return Err(Error::MomentMatchInfeasible(format!(
            "mean {mean} must exceed truncation point {lower}"
        )));
    }
    let target = var / (excess * excess);
    let hi_ratio = dispersion_ratio(ALPHA_MAX);
    if !(target > 0.0 && target < hi_ratio) {
        return Err(Error::MomentMatchInfeasible(format!(
            "truncated normal requires 0 < variance < {:.6}, got {var}",
            hi_ratio * excess * excess
        )));
    }
    // Below ALPHA_MIN the truncated mass is under 1e-300, so the plain normal
    // already has the target moments to machine precision.
    if target <= dispersion_ratio(ALPHA_MIN) {
        let scale = var.sqrt();
        return Ok(ShockSampler::TruncatedNormal {
            location: mean,
            scale,
            alpha: (lower - mean) / scale,
        });
    }
    // The ratio increases monotonically from 0 (alpha → −∞) to 1 (alpha → ∞).
    let (mut lo, mut hi) = (ALPHA_MIN, ALPHA_MAX);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if dispersion_ratio(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * (1.0 + mid.abs()) {
            break;
        }
    }
    let alpha = 0.5 * (lo + hi);
    let (lambda, _) = truncated_std_normal_moments(alpha);
    let scale = excess / (lambda - alpha);
    let location = lower - alpha * scale;
    Ok(ShockSampler::TruncatedNormal {
        location,
        scale,
        alpha,
    })
}

/// Draws `Z ~ N(0,1)` conditioned on `Z >= alpha`. Uses plain rejection for
/// `alpha <= 0` and Robert's exponential proposal otherwise.
fn sample_std_normal_tail<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    if alpha <= 0.0 {
        loop {
            let z: f64 = StandardNormal.sample(rng);
            if z >= alpha {
                return z;
            }
        }
    }
    let rate = 0.5 * (alpha + (alpha * alpha + 4.0).sqrt());
    loop {
        let e: f64 = Exp1.sample(rng);
        let z = alpha + e / rate;
        let u: f64 = rng.random();
        if u <= (-0.5 * (z - rate) * (z - rate)).exp() {
            return z;
        }
    }
}

/// Draws `n` policy strengths from a single stream seeded by `seed`.
pub fn sample_policy_shock(spec: &PolicyShockSpec, n: usize, seed: u64) -> Result<Vec<f64>> {
    let sampler = spec.sampler()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| sampler.sample(&mut rng)).collect())
}
