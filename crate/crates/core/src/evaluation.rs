//! Rolling-window Mincer-Zarnowitz evaluation of forecast/realization series.

use std::cmp::Ordering;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig10;
use crate::simulator::{ols_mz, DrawRecord};

/// Window length used when none is given: ten years of quarterly data.
pub const DEFAULT_WINDOW: usize = 40;

pub const ROLLING_CSV_HEADER: &str =
    "window_end,mz_intercept,mz_slope,slope_stderr,r_squared,mean_error";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastRow {
    pub period: String,
    pub forecast: f64,
    pub realization: f64,
}

impl ForecastRow {
    pub fn error(&self) -> f64 {
        self.realization - self.forecast
    }
}

/// Rows of aligned forecasts and realizations in strictly increasing period
/// order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ForecastSeries {
    rows: Vec<ForecastRow>,
}

/// Orders period labels numerically when both parse as numbers, otherwise
/// lexicographically (which suits labels such as `1974Q2`).
fn compare_periods(a: &str, b: &str) -> Ordering {
    match (a.trim().parse::<f64>(), b.trim().parse::<f64>()) {
        (Ok(x), Ok(y)) => x.total_cmp(&y),
        _ => a.cmp(b),
    }
}

impl ForecastSeries {
    pub fn new(rows: Vec<ForecastRow>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            // Data lines start at line 2, after the header.
            let line = i as u64 + 2;
            if !row.forecast.is_finite() || !row.realization.is_finite() {
                return Err(Error::Value {
                    line,
                    message: "non-finite forecast or realization".into(),
                });
            }
            if i > 0 && compare_periods(&rows[i - 1].period, &row.period) != Ordering::Less {
                return Err(Error::Value {
                    line,
                    message: format!(
                        "period {:?} does not follow {:?}",
                        row.period,
                        rows[i - 1].period
                    ),
                });
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[ForecastRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn forecasts(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.forecast).collect()
    }

    pub fn realizations(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.realization).collect()
    }

    /// Builds a series from simulated draws, labelling periods with
    /// consecutive integers starting at `first_period`.
    pub fn from_draws(draws: &[DrawRecord], first_period: u64) -> Self {
        let rows = draws
            .iter()
            .zip(first_period..)
            .map(|(d, period)| ForecastRow {
                period: period.to_string(),
                forecast: d.forecast,
                realization: d.outcome,
            })
            .collect();
        Self { rows }
    }

    /// Appends `other`, whose periods must continue this series' order.
    pub fn concat(mut self, other: ForecastSeries) -> Result<Self> {
        self.rows.extend(other.rows);
        Self::new(self.rows)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "period,forecast,realization")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{}",
                r.period,
                sig10(r.forecast),
                sig10(r.realization)
            )?;
        }
        Ok(())
    }
}

/// Reads a `period,forecast,realization` CSV. Extra columns are ignored.
pub fn ingest_csv<R: Read>(input: R) -> Result<ForecastSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema(format!("missing column `{name}`")))
    };
    let (i_period, i_forecast, i_real) = (
        column("period")?,
        column("forecast")?,
        column("realization")?,
    );

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let number = |idx: usize, name: &str| -> Result<f64> {
            let raw = record.get(idx).unwrap_or("");
            if raw.is_empty() {
                return Err(Error::Value {
                    line,
                    message: format!("missing {name}"),
                });
            }
            let v: f64 = raw.parse().map_err(|_| Error::Parse {
                line,
                message: format!("{name} {raw:?} is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Value {
                    line,
                    message: format!("{name} {raw:?} is not finite"),
                });
            }
            Ok(v)
        };
        let forecast = number(i_forecast, "forecast")?;
        let realization = number(i_real, "realization")?;
        let period = record.get(i_period).unwrap_or("").to_string();
        if let Some(prev) = rows.last().map(|r: &ForecastRow| r.period.clone()) {
            if compare_periods(&prev, &period) != Ordering::Less {
                return Err(Error::Value {
                    line,
                    message: format!("period {period:?} does not follow {prev:?}"),
                });
            }
        }
        rows.push(ForecastRow {
            period,
            forecast,
            realization,
        });
    }
    Ok(ForecastSeries { rows })
}

pub fn ingest_csv_path(path: impl AsRef<Path>) -> Result<ForecastSeries> {
    let file = std::fs::File::open(path)?;
    ingest_csv(std::io::BufReader::new(file))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RollingWindow {
    pub window_end: String,
    pub mz_intercept: f64,
    pub mz_slope: f64,
    pub slope_stderr: f64,
    pub r_squared: f64,
    pub mean_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RollingResult {
    pub window: usize,
    pub windows: Vec<RollingWindow>,
}

impl RollingResult {
    pub fn slopes(&self) -> Vec<f64> {
        self.windows.iter().map(|w| w.mz_slope).collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{ROLLING_CSV_HEADER}")?;
        for w in &self.windows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                w.window_end,
                sig10(w.mz_intercept),
                sig10(w.mz_slope),
                sig10(w.slope_stderr),
                sig10(w.r_squared),
                sig10(w.mean_error)
            )?;
        }
        Ok(())
    }
}

fn mean_error(rows: &[ForecastRow]) -> f64 {
    rows.iter().map(ForecastRow::error).sum::<f64>() / rows.len() as f64
}

fn check_window(series: &ForecastSeries, window: usize, min_window: usize) -> Result<()> {
    if window < min_window {
        return Err(Error::InsufficientData {
            needed: min_window,
            got: window,
        });
    }
    if series.len() < window {
        return Err(Error::WindowTooLarge {
            window,
            len: series.len(),
        });
    }
    Ok(())
}

/// MZ regression over every full trailing window of `window` rows.
pub fn rolling_mz(series: &ForecastSeries, window: usize) -> Result<RollingResult> {
    check_window(series, window, 3)?;
    let forecasts = series.forecasts();
    let realizations = series.realizations();
    let windows = (window..=series.len())
        .map(|end| {
            let start = end - window;
            let fit = ols_mz(&forecasts[start..end], &realizations[start..end])?;
            Ok(RollingWindow {
                window_end: series.rows[end - 1].period.clone(),
                mz_intercept: fit.intercept,
                mz_slope: fit.slope,
                slope_stderr: fit.slope_se,
                r_squared: fit.r_squared,
                mean_error: mean_error(&series.rows[start..end]),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RollingResult { window, windows })
}

/// Trailing mean of `realization − forecast` over every full window.
pub fn moving_average_bias(series: &ForecastSeries, window: usize) -> Result<Vec<(String, f64)>> {
    check_window(series, window, 1)?;
    Ok(series
        .rows
        .windows(window)
        .map(|w| (w[window - 1].period.clone(), mean_error(w)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(values: &[(f64, f64)]) -> ForecastSeries {
        ForecastSeries::new(
            values
                .iter()
                .enumerate()
                .map(|(i, &(f, r))| ForecastRow {
                    period: format!("{}", i + 1),
                    forecast: f,
                    realization: r,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn ingest_valid_rows() {
        let csv = "period,forecast,realization\n2000Q1,1.0,1.5\n2000Q2,2.0,2.1\n2000Q3,3.0,2.9\n";
        let s = ingest_csv(csv.as_bytes()).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.rows()[1].period, "2000Q2");
        assert_eq!(s.rows()[2].realization, 2.9);
    }

    #[test]
    fn ingest_reports_bad_line() {
        let csv = "period,forecast,realization\n1,1.0,1.5\n2,abc,2.1\n";
        match ingest_csv(csv.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ingest_schema_and_value_errors() {
        assert!(matches!(
            ingest_csv("period,forecast\n1,2\n".as_bytes()),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            ingest_csv("period,forecast,realization\n1,NaN,2\n".as_bytes()),
            Err(Error::Value { line: 2, .. })
        ));
        assert!(matches!(
            ingest_csv("period,forecast,realization\n1,1,\n".as_bytes()),
            Err(Error::Value { line: 2, .. })
        ));
        assert!(matches!(
            ingest_csv("period,forecast,realization\n2,1,1\n1,1,1\n".as_bytes()),
            Err(Error::Value { line: 3, .. })
        ));
    }

    #[test]
    fn numeric_periods_order_numerically() {
        let csv = "period,forecast,realization\n9,1,1\n10,2,2\n11,3,3\n";
        assert_eq!(ingest_csv(csv.as_bytes()).unwrap().len(), 3);
    }

    #[test]
    fn header_only_is_empty_series() {
        let s = ingest_csv("period,forecast,realization\n".as_bytes()).unwrap();
        assert!(s.is_empty());
        assert!(matches!(
            rolling_mz(&s, 3),
            Err(Error::WindowTooLarge { .. })
        ));
    }

    #[test]
    fn window_counts() {
        let s = series(&[(1.0, 1.0), (2.0, 2.5), (3.0, 2.0), (4.0, 4.5)]);
        assert_eq!(rolling_mz(&s, 3).unwrap().windows.len(), 2);
        assert!(matches!(
            rolling_mz(&s, 5),
            Err(Error::WindowTooLarge { window: 5, len: 4 })
        ));
        assert!(matches!(
            rolling_mz(&s, 2),
            Err(Error::InsufficientData { .. })
        ));
        assert_eq!(moving_average_bias(&s, 1).unwrap().len(), 4);
    }

    #[test]
    fn constant_error_average() {
        let s = series(&[(1.0, 1.5), (2.0, 2.5), (-3.0, -2.5), (4.0, 4.5), (0.0, 0.5)]);
        for w in 1..=5 {
            for (_, m) in moving_average_bias(&s, w).unwrap() {
                assert!((m - 0.5).abs() < 1e-15);
            }
        }
        let raw = moving_average_bias(&s, 1).unwrap();
        assert_eq!(raw[2], ("3".to_string(), 0.5));
    }

    #[test]
    fn rolling_csv_format() {
        let s = series(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]);
        let mut buf = Vec::new();
        rolling_mz(&s, 3).unwrap().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(ROLLING_CSV_HEADER));
        assert_eq!(lines.next(), Some("3,1,2,0,1,2"));
    }
}
