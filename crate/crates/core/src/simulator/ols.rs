//! Two-variable least squares with classical (homoskedastic) standard errors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::MzLine;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub intercept: f64,
    pub slope: f64,
    pub intercept_se: f64,
    pub slope_se: f64,
    pub r_squared: f64,
    pub n: usize,
}

impl OlsFit {
    pub fn line(&self) -> MzLine {
        MzLine {
            intercept: self.intercept,
            slope: self.slope,
        }
    }
}

/// Regresses `y` on a constant and `x`.
pub fn ols(x: &[f64], y: &[f64]) -> Result<OlsFit> {
    assert_eq!(x.len(), y.len(), "regressor and response lengths differ");
    let n = x.len();
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    if x.iter().all(|&v| v == x[0]) {
        return Err(Error::ZeroVariance);
    }
    let nf = n as f64;
    let x_mean = x.iter().sum::<f64>() / nf;
    let y_mean = y.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - x_mean;
        let dy = yi - y_mean;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ssr = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let r = yi - intercept - slope * xi;
            r * r
        })
        .sum::<f64>();
    let s2 = ssr / (nf - 2.0);
    let slope_se = (s2 / sxx).sqrt();
    let intercept_se = (s2 * (1.0 / nf + x_mean * x_mean / sxx)).sqrt();
    // A constant response is fitted exactly.
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ssr / syy };
    Ok(OlsFit {
        intercept,
        slope,
        intercept_se,
        slope_se,
        r_squared,
        n,
    })
}

/// Mincer-Zarnowitz regression of realized outcomes on forecasts.
pub fn ols_mz(forecasts: &[f64], outcomes: &[f64]) -> Result<OlsFit> {
    ols(forecasts, outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let fit = ols_mz(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
        assert!((fit.intercept - 1.0).abs() < 1e-15);
        assert!((fit.slope - 2.0).abs() < 1e-15);
        assert!((fit.r_squared - 1.0).abs() < 1e-15);
        assert!(fit.slope_se < 1e-12);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            ols_mz(&[1.0, 2.0], &[1.0, 2.0]),
            Err(Error::InsufficientData { needed: 3, got: 2 })
        ));
        assert!(matches!(
            ols_mz(&[0.1, 0.1, 0.1, 0.1], &[1.0, 2.0, 3.0, 4.0]),
            Err(Error::ZeroVariance)
        ));
    }

    #[test]
    fn textbook_standard_errors() {
        // y = 1 + 2x with residuals (+1, -1, -1, +1) at x = 0..3.
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [2.0, 2.0, 4.0, 8.0];
        let fit = ols(&x, &y).unwrap();
        // sxx = 5, sxy = 10 -> slope 2, intercept 4 - 2*1.5 = 1, ssr = 4, s2 = 2.
        assert!((fit.slope - 2.0).abs() < 1e-14);
        assert!((fit.intercept - 1.0).abs() < 1e-14);
        assert!((fit.slope_se - (2.0f64 / 5.0).sqrt()).abs() < 1e-14);
        assert!((fit.intercept_se - (2.0 * (0.25 + 2.25 / 5.0f64)).sqrt()).abs() < 1e-14);
        // syy = 24.
        assert!((fit.r_squared - (1.0 - 4.0 / 24.0)).abs() < 1e-14);
    }
}
