use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use feedcast::evaluation::{ingest_csv_path, rolling_mz};
use feedcast::format::sig10;
use feedcast::model::{
    bias_line, equilibrium_bias_and_mz, mz_line, optimal_forecast, solve_equilibria,
};
use feedcast::simulator::{
    analytic_targets, ols_mz, play_game, write_draws_csv, PolicyShockSpec, Scenario, SimulationRun,
    SimulationSummary, StateNoiseSpec,
};
use feedcast::{BiasLine, ConditionalForecastSpec, LinearRule, ModelParams, MzLine};
use serde::{Deserialize, Serialize};

use crate::{CliError, EvaluateArgs, ScenarioKind, ShockKind, SimulateArgs, SolveArgs, SweepArgs};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleReport {
    pub conjecture: LinearRule,
    pub optimal_rule: LinearRule,
    pub bias_line: BiasLine,
    /// Absent when `μ + c = 0` makes the forecast constant.
    pub mz_line: Option<MzLine>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootReport {
    pub index: usize,
    pub rule: LinearRule,
    pub k: f64,
    pub degenerate: bool,
    pub singular: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriaReport {
    pub exists: bool,
    pub repeated: bool,
    pub selected_index: usize,
    pub roots: Vec<RootReport>,
    /// Bias and MZ line of the selected equilibrium, when it is usable.
    pub bias_line: Option<BiasLine>,
    pub mz_line: Option<MzLine>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub params: ModelParams,
    pub conjecture: Option<RuleReport>,
    pub taylor_rule: RuleReport,
    pub equilibria: EquilibriaReport,
}

fn rule_report(conjecture: LinearRule, params: &ModelParams) -> Result<RuleReport, CliError> {
    let mz = match mz_line(&conjecture, params) {
        Ok(line) => Some(line),
        Err(feedcast::Error::SingularMz) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(RuleReport {
        conjecture,
        optimal_rule: optimal_forecast(&conjecture, params)?,
        bias_line: bias_line(&conjecture, params)?,
        mz_line: mz,
    })
}

/// Builds the `solve` report. Fails with `NoEquilibrium` only when no
/// conjecture was supplied.
pub fn solve_report(
    params: &ModelParams,
    conjecture: Option<LinearRule>,
) -> Result<SolveReport, CliError> {
    params.validate()?;
    let solution = solve_equilibria(params);
    if !solution.exists() && conjecture.is_none() {
        return Err(feedcast::Error::NoEquilibrium { tau2: params.tau2 }.into());
    }
    let conjecture = conjecture.map(|c| rule_report(c, params)).transpose()?;
    let roots = solution
        .roots
        .iter()
        .flatten()
        .zip(1..)
        .map(|(r, index)| RootReport {
            index,
            rule: r.rule,
            k: r.k,
            degenerate: r.degenerate,
            singular: r.singular,
        })
        .collect();
    let (bias, mz) = match equilibrium_bias_and_mz(params) {
        Ok((b, m)) => (Some(b), Some(m)),
        Err(feedcast::Error::NoEquilibrium { .. })
        | Err(feedcast::Error::DegenerateEquilibrium { .. }) => (None, None),
        Err(e) => return Err(e.into()),
    };
    Ok(SolveReport {
        params: *params,
        conjecture,
        taylor_rule: rule_report(LinearRule::TAYLOR, params)?,
        equilibria: EquilibriaReport {
            exists: solution.exists(),
            repeated: solution.repeated,
            selected_index: solution.selected_index,
            roots,
            bias_line: bias,
            mz_line: mz,
        },
    })
}

pub fn solve(args: &SolveArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let params = ModelParams::new(args.mu, args.tau2, args.sigma2, args.ytarget)?;
    let conjecture = match (args.b, args.c) {
        (b, Some(c)) => Some(LinearRule::new(b.unwrap_or(0.0), c)),
        (Some(_), None) => return Err(CliError::Usage("--b requires --c".into())),
        (None, None) => None,
    };
    let report = solve_report(&params, conjecture)?;
    serde_json::to_writer_pretty(&mut *stdout, &report)?;
    writeln!(stdout)?;
    Ok(())
}

pub const SWEEP_HEADER: &str = "mu,tau2,mz_slope,mz_intercept,exists";

/// Writes the sweep CSV. Cells are empty where no usable equilibrium exists.
pub fn write_sweep<W: Write>(args: &SweepArgs, mut out: W) -> Result<(), CliError> {
    if !(args.tau2_min >= 0.0 && args.tau2_min <= args.tau2_max && args.tau2_max.is_finite()) {
        return Err(CliError::Usage(
            "tau2 range must satisfy 0 <= tau2-min <= tau2-max".into(),
        ));
    }
    if args.steps < 2 {
        return Err(CliError::Usage("--steps must be at least 2".into()));
    }
    if let Some(clip) = args.clip {
        if !(clip > 0.0) {
            return Err(CliError::Usage("--clip must be positive".into()));
        }
    }
    write!(out, "{SWEEP_HEADER}")?;
    if args.clip.is_some() {
        write!(out, ",mz_slope_clipped")?;
    }
    writeln!(out)?;
    for &mu in &args.mu {
        for i in 0..args.steps {
            let tau2 = if i + 1 == args.steps {
                args.tau2_max
            } else {
                args.tau2_min + (args.tau2_max - args.tau2_min) * i as f64 / (args.steps - 1) as f64
            };
            let params = ModelParams::new(mu, tau2, 1.0, args.ytarget)?;
            let exists = solve_equilibria(&params).exists();
            let mz = match equilibrium_bias_and_mz(&params) {
                Ok((_, mz)) => Some(mz),
                Err(feedcast::Error::NoEquilibrium { .. })
                | Err(feedcast::Error::DegenerateEquilibrium { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            let (slope, intercept) = match mz {
                Some(m) => (sig10(m.slope), sig10(m.intercept)),
                None => (String::new(), String::new()),
            };
            write!(
                out,
                "{},{},{slope},{intercept},{exists}",
                sig10(mu),
                sig10(tau2)
            )?;
            if let Some(clip) = args.clip {
                let clipped = mz
                    .map(|m| sig10(m.slope.clamp(-clip, clip)))
                    .unwrap_or_default();
                write!(out, ",{clipped}")?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &args.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            write_sweep(args, &mut file)?;
            file.flush()?;
            Ok(())
        }
        None => write_sweep(args, stdout),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticTargets {
    pub bias_line: BiasLine,
    pub mz_line: MzLine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateReport {
    pub params: ModelParams,
    pub shock: PolicyShockSpec,
    pub state_noise: StateNoiseSpec,
    pub run: SimulationRun,
    pub summary: SimulationSummary,
    /// Population values the sample statistics estimate, when defined.
    pub analytic: Option<AnalyticTargets>,
}

fn shock_spec(kind: ShockKind, mu: f64, tau2: f64) -> PolicyShockSpec {
    match kind {
        ShockKind::Auto => PolicyShockSpec::default_for(mu, tau2),
        ShockKind::Beta => PolicyShockSpec::beta_unit(mu, tau2),
        ShockKind::TruncatedNormal => PolicyShockSpec::truncated_normal(mu, tau2),
        ShockKind::Degenerate => PolicyShockSpec::degenerate(mu),
    }
}

fn scenario(args: &SimulateArgs) -> Result<Scenario, CliError> {
    let conjecture = LinearRule::new(args.b, args.c);
    Ok(match args.scenario {
        ScenarioKind::Equilibrium => Scenario::Equilibrium,
        ScenarioKind::Taylor => Scenario::TaylorRule,
        ScenarioKind::Conjecture => Scenario::ConjectureRule { conjecture },
        ScenarioKind::Conditional => Scenario::Conditional {
            spec: ConditionalForecastSpec::unconstrained(args.a0),
            conjecture,
        },
        // The menu's cost is replaced by each draw's own type.
        ScenarioKind::Menu => Scenario::ConstrainedMenu {
            spec: ConditionalForecastSpec::with_menu(args.a0, args.a1, 0.0)?,
        },
    })
}

fn prefixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

pub fn simulate(args: &SimulateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let params = ModelParams::new(args.mu, args.tau2, args.sigma2, args.ytarget)?;
    let shock = shock_spec(args.shock, args.mu, args.tau2);
    let state_noise = StateNoiseSpec {
        theta_mean: args.theta_mean,
        theta_var: args.theta_var,
        noise_var: args.sigma2,
    };
    let run = SimulationRun {
        draw_count: args.n,
        seed: args.seed,
        scenario: scenario(args)?,
    };
    let output = play_game(&run, &shock, &state_noise, &params)?;
    let analytic = analytic_targets(&run.scenario, &params)
        .ok()
        .map(|(bias_line, mz_line)| AnalyticTargets { bias_line, mz_line });
    let report = SimulateReport {
        params,
        shock,
        state_noise,
        run,
        summary: output.summary,
        analytic,
    };

    let mut draws = BufWriter::new(File::create(prefixed(&args.out_prefix, "_draws.csv"))?);
    write_draws_csv(&output.records, &mut draws)?;
    draws.flush()?;
    let json = serde_json::to_string_pretty(&report)?;
    std::fs::write(
        prefixed(&args.out_prefix, "_summary.json"),
        format!("{json}\n"),
    )?;
    writeln!(stdout, "{json}")?;
    Ok(())
}

pub fn evaluate(args: &EvaluateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let series = ingest_csv_path(&args.input)?;
    let rolled = rolling_mz(&series, args.window)?;
    let full = ols_mz(&series.forecasts(), &series.realizations())?;
    let mut out = BufWriter::new(File::create(&args.out)?);
    rolled.write_csv(&mut out)?;
    out.flush()?;
    writeln!(stdout, "observations={}", full.n)?;
    writeln!(stdout, "windows={}", rolled.windows.len())?;
    writeln!(stdout, "mz_intercept={}", sig10(full.intercept))?;
    writeln!(stdout, "mz_slope={}", sig10(full.slope))?;
    writeln!(stdout, "slope_stderr={}", sig10(full.slope_se))?;
    writeln!(stdout, "r_squared={}", sig10(full.r_squared))?;
    Ok(())
}
