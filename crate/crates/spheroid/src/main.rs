//! Command-line front end: JSON config in, CSV/JSON results out.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 empty result
//! (no equilibria for the given parameters), 3 verification failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use spheroid::dynamics::{
    fit_decay_rate, integrate_linear_modes, integrate_radial, radial_rhs, radial_rhs_fd_oracle,
};
use spheroid::oracle::{curvature_mode_derivative, solve_mode_bvp};
use spheroid::special::bessel_half;
use spheroid::spectrum::{
    coefficients, gamma_thresholds, h_j_of_k, lambda_k_direct, lambda_k_hj, linearized_curvature,
    mode_spectrum, Verdict,
};
use spheroid::stationary::{solve_stationary, theta_star, Branch, ModelParams, StationaryState};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_EMPTY: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "spheroid", version, about = "Stationary solutions, spectra and stability \
thresholds of the tumor-spheroid free-boundary model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the stationarity equation: radii, f' signs, existence threshold.
    Stationary {
        #[command(flatten)]
        common: Common,
    },
    /// Per-mode adhesiveness thresholds gamma_k and their supremum gamma_*.
    Threshold {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        branch: Option<BranchSel>,
        #[arg(long)]
        k_max: Option<u32>,
    },
    /// Eigenvalues Lambda_k of the linearization, both closed forms.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        branch: Option<BranchSel>,
        #[arg(long)]
        k_max: Option<u32>,
    },
    /// Check every closed form against its brute-force oracle.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        branch: Option<BranchSel>,
        #[arg(long)]
        k_max: Option<u32>,
        /// Finite-difference cells for the mode BVP oracle.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Integrate the radial ODE or the linearized mode system.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        mode: Option<SimMode>,
        #[arg(long)]
        branch: Option<BranchSel>,
        /// Initial radius (radial mode).
        #[arg(long)]
        r0: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        /// Initial mode amplitudes as "k:amp,k:amp,..." (linear-modes mode).
        #[arg(long)]
        modes: Option<String>,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// JSON configuration file; flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write results here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    sigma_bar: Option<f64>,
    #[arg(long)]
    sigma_tilde: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    p_bar: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum BranchSel {
    Smaller,
    Larger,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum SimMode {
    Radial,
    LinearModes,
}

// Config file schema. Unknown keys are ignored, so every JSON summary
// the tool emits re-parses under this reader.
#[derive(Deserialize, Default)]
struct FileConfig {
    #[serde(default)]
    model: ModelSection,
    #[serde(default)]
    threshold: SpectrumSection,
    #[serde(default)]
    spectrum: SpectrumSection,
    #[serde(default)]
    verify: VerifySection,
    #[serde(default)]
    simulate: SimulateSection,
}

#[derive(Deserialize, Default)]
struct ModelSection {
    sigma_bar: Option<f64>,
    sigma_tilde: Option<f64>,
    mu: Option<f64>,
    gamma: Option<f64>,
    p_bar: Option<f64>,
}

#[derive(Deserialize, Default, Clone)]
struct SpectrumSection {
    branch: Option<BranchSel>,
    k_max: Option<u32>,
}

#[derive(Deserialize, Default)]
struct VerifySection {
    branch: Option<BranchSel>,
    k_max: Option<u32>,
    grid: Option<usize>,
    /// Per-check tolerance overrides (check name -> tolerance).
    tolerances: Option<BTreeMap<String, f64>>,
}

#[derive(Deserialize, Default)]
struct SimulateSection {
    mode: Option<SimMode>,
    branch: Option<BranchSel>,
    r0: Option<f64>,
    t_end: Option<f64>,
    modes: Option<String>,
    samples: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Stationary { common } => cmd_stationary(&common),
        Command::Threshold {
            common,
            branch,
            k_max,
        } => cmd_threshold(&common, branch, k_max),
        Command::Spectrum {
            common,
            branch,
            k_max,
        } => cmd_spectrum(&common, branch, k_max),
        Command::Verify {
            common,
            branch,
            k_max,
            grid,
        } => cmd_verify(&common, branch, k_max, grid),
        Command::Simulate {
            common,
            mode,
            branch,
            r0,
            t_end,
            modes,
        } => cmd_simulate(&common, mode, branch, r0, t_end, modes),
    }
}

fn load_config(common: &Common) -> Result<FileConfig, String> {
    match &common.config {
        None => Ok(FileConfig::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
        }
    }
}

fn resolve_model(file: &ModelSection, flags: &Common) -> Result<ModelParams, String> {
    let need = |flag: Option<f64>, from_file: Option<f64>, name: &str| {
        flag.or(from_file)
            .ok_or_else(|| format!("missing required model field: {name}"))
    };
    let sigma_bar = need(flags.sigma_bar, file.sigma_bar, "sigma_bar")?;
    let sigma_tilde = need(flags.sigma_tilde, file.sigma_tilde, "sigma_tilde")?;
    let mu = need(flags.mu, file.mu, "mu")?;
    let gamma = need(flags.gamma, file.gamma, "gamma")?;
    let p_bar = flags.p_bar.or(file.p_bar).unwrap_or(0.0);
    ModelParams::new(sigma_bar, sigma_tilde, mu, gamma, p_bar).map_err(|e| e.to_string())
}

/// Fixed 17-significant-digit scientific notation: deterministic and
/// exactly round-trippable as an IEEE double.
fn csv_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_result(common: &Common, text: &str) -> Result<(), String> {
    match &common.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pick_branch(
    states: &[StationaryState],
    sel: BranchSel,
) -> Result<StationaryState, String> {
    let want = match sel {
        BranchSel::Smaller => Branch::Smaller,
        BranchSel::Larger => Branch::Larger,
    };
    states
        .iter()
        .find(|s| s.branch == want || s.branch == Branch::Degenerate)
        .copied()
        .ok_or_else(|| "requested branch does not exist".to_string())
}

/// Shared empty-result path: print the message and signal exit 2.
fn no_equilibria(params: &ModelParams) -> Result<u8, String> {
    let ts = theta_star(params.gamma).map_err(|e| e.to_string())?;
    println!(
        "no equilibria: theta = {} exceeds theta_* = {}",
        params.theta(),
        ts.value
    );
    Ok(EXIT_EMPTY)
}

#[derive(Serialize)]
struct StationaryReport {
    model: ModelParams,
    theta: f64,
    theta_star: f64,
    theta_star_argmax: f64,
    roots: Vec<StationaryState>,
}

fn cmd_stationary(common: &Common) -> Result<u8, String> {
    let file = load_config(common)?;
    let params = resolve_model(&file.model, common)?;
    let states = solve_stationary(&params).map_err(|e| e.to_string())?;
    if states.is_empty() {
        return no_equilibria(&params);
    }
    let ts = theta_star(params.gamma).map_err(|e| e.to_string())?;
    let text = match common.format {
        Format::Json => {
            let report = StationaryReport {
                model: params,
                theta: params.theta(),
                theta_star: ts.value,
                theta_star_argmax: ts.argmax_radius,
                roots: states,
            };
            to_json(&report)?
        }
        Format::Csv => {
            let mut out = String::from("branch,R_s,f_value,f_prime\n");
            for s in &states {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    s.branch,
                    csv_f(s.radius),
                    csv_f(s.f_value),
                    csv_f(s.f_prime)
                );
            }
            let _ = writeln!(out, "# theta = {}", csv_f(params.theta()));
            let _ = writeln!(out, "# theta_star = {}", csv_f(ts.value));
            let _ = writeln!(out, "# theta_star_argmax = {}", csv_f(ts.argmax_radius));
            out
        }
    };
    write_result(common, &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ThresholdReport {
    model: ModelParams,
    branch: Branch,
    radius: f64,
    k_min: u32,
    gamma_k: Vec<f64>,
    gamma_star: f64,
    attained_at: u32,
    verdict: Verdict,
}

fn cmd_threshold(
    common: &Common,
    branch: Option<BranchSel>,
    k_max: Option<u32>,
) -> Result<u8, String> {
    let file = load_config(common)?;
    let params = resolve_model(&file.model, common)?;
    let branch = branch.or(file.threshold.branch).unwrap_or(BranchSel::Larger);
    let k_max = k_max.or(file.threshold.k_max).unwrap_or(64);
    let states = solve_stationary(&params).map_err(|e| e.to_string())?;
    if states.is_empty() {
        return no_equilibria(&params);
    }
    let state = pick_branch(&states, branch)?;
    let th = gamma_thresholds(&state, k_max).map_err(|e| e.to_string())?;
    let verdict = if params.gamma > th.gamma_star {
        Verdict::Stable
    } else {
        Verdict::Unstable
    };
    let text = match common.format {
        Format::Json => to_json(&ThresholdReport {
            model: params,
            branch: state.branch,
            radius: state.radius,
            k_min: 2,
            gamma_k: th.gamma_k.clone(),
            gamma_star: th.gamma_star,
            attained_at: th.attained_at,
            verdict,
        })?,
        Format::Csv => {
            let mut out = String::from("k,gamma_k\n");
            for (i, g) in th.gamma_k.iter().enumerate() {
                let _ = writeln!(out, "{},{}", i as u32 + 2, csv_f(*g));
            }
            let _ = writeln!(out, "# branch = {}", state.branch);
            let _ = writeln!(out, "# R_s = {}", csv_f(state.radius));
            let _ = writeln!(out, "# gamma_star = {}", csv_f(th.gamma_star));
            let _ = writeln!(out, "# attained_at = {}", th.attained_at);
            let _ = writeln!(out, "# verdict = {}", verdict_str(verdict));
            out
        }
    };
    write_result(common, &text)?;
    Ok(EXIT_OK)
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Stable => "stable",
        Verdict::Unstable => "unstable",
    }
}

#[derive(Serialize)]
struct SpectrumRow {
    k: u32,
    lambda_direct: f64,
    lambda_hj: f64,
    h_k: f64,
    j_k: f64,
    gamma_k: f64,
}

#[derive(Serialize)]
struct SpectrumReport {
    model: ModelParams,
    branch: Branch,
    radius: f64,
    k_max: u32,
    rows: Vec<SpectrumRow>,
    gamma_star: f64,
    attained_at: u32,
    classification: Verdict,
}

fn cmd_spectrum(
    common: &Common,
    branch: Option<BranchSel>,
    k_max: Option<u32>,
) -> Result<u8, String> {
    let file = load_config(common)?;
    let params = resolve_model(&file.model, common)?;
    let branch = branch.or(file.spectrum.branch).unwrap_or(BranchSel::Larger);
    let k_max = k_max.or(file.spectrum.k_max).unwrap_or(64);
    let states = solve_stationary(&params).map_err(|e| e.to_string())?;
    if states.is_empty() {
        return no_equilibria(&params);
    }
    let state = pick_branch(&states, branch)?;
    let spec = mode_spectrum(&state, k_max).map_err(|e| e.to_string())?;
    let mut rows = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        let (h, j) = h_j_of_k(&state, k).map_err(|e| e.to_string())?;
        // gamma_k is only meaningful for k >= 2
        let gamma_k = if k >= 2 {
            spec.thresholds.gamma_k[(k - 2) as usize]
        } else {
            f64::NAN
        };
        rows.push(SpectrumRow {
            k,
            lambda_direct: spec.lambdas[k as usize],
            lambda_hj: lambda_k_hj(&state, k).map_err(|e| e.to_string())?,
            h_k: h,
            j_k: j,
            gamma_k,
        });
    }
    let text = match common.format {
        Format::Json => to_json(&SpectrumReport {
            model: params,
            branch: state.branch,
            radius: state.radius,
            k_max,
            rows,
            gamma_star: spec.thresholds.gamma_star,
            attained_at: spec.thresholds.attained_at,
            classification: spec.classification,
        })?,
        Format::Csv => {
            let mut out = String::from("k,lambda_direct,lambda_hj,h_k,j_k,gamma_k\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.k,
                    csv_f(r.lambda_direct),
                    csv_f(r.lambda_hj),
                    csv_f(r.h_k),
                    csv_f(r.j_k),
                    csv_f(r.gamma_k)
                );
            }
            let _ = writeln!(out, "# branch = {}", state.branch);
            let _ = writeln!(out, "# R_s = {}", csv_f(state.radius));
            let _ = writeln!(out, "# gamma_star = {}", csv_f(spec.thresholds.gamma_star));
            let _ = writeln!(out, "# attained_at = {}", spec.thresholds.attained_at);
            let _ = writeln!(out, "# classification = {}", verdict_str(spec.classification));
            out
        }
    };
    write_result(common, &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CheckResult {
    check: String,
    max_error: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    model: ModelParams,
    branch: Branch,
    radius: f64,
    checks: Vec<CheckResult>,
}

fn cmd_verify(
    common: &Common,
    branch: Option<BranchSel>,
    k_max: Option<u32>,
    grid: Option<usize>,
) -> Result<u8, String> {
    let file = load_config(common)?;
    let params = resolve_model(&file.model, common)?;
    let branch = branch.or(file.verify.branch).unwrap_or(BranchSel::Larger);
    let k_max = k_max.or(file.verify.k_max).unwrap_or(64);
    let grid = grid.or(file.verify.grid).unwrap_or(2048);
    let states = solve_stationary(&params).map_err(|e| e.to_string())?;
    if states.is_empty() {
        return no_equilibria(&params);
    }
    let state = pick_branch(&states, branch)?;
    let mut checks = run_checks(&state, k_max, grid).map_err(|e| e.to_string())?;
    if let Some(overrides) = &file.verify.tolerances {
        for c in &mut checks {
            if let Some(&tol) = overrides.get(&c.check) {
                c.tolerance = tol;
            }
        }
    }
    for c in &mut checks {
        c.pass = c.max_error <= c.tolerance;
    }
    let text = match common.format {
        Format::Json => to_json(&VerifyReport {
            model: params,
            branch: state.branch,
            radius: state.radius,
            checks: checks
                .iter()
                .map(|c| CheckResult {
                    check: c.check.clone(),
                    ..*c
                })
                .collect(),
        })?,
        Format::Csv => {
            let mut out = String::from("check,max_error,tolerance,status\n");
            for c in &checks {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    c.check,
                    csv_f(c.max_error),
                    csv_f(c.tolerance),
                    if c.pass { "pass" } else { "fail" }
                );
            }
            out
        }
    };
    write_result(common, &text)?;
    let failures: Vec<&str> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.check.as_str())
        .collect();
    if failures.is_empty() {
        Ok(EXIT_OK)
    } else {
        eprintln!("verification failed: {}", failures.join(", "));
        Ok(EXIT_VERIFY)
    }
}

/// The oracle suite: each closed form against an independent
/// brute-force computation, with the worst relative error observed.
fn run_checks(
    state: &StationaryState,
    k_max: u32,
    grid: usize,
) -> spheroid::error::Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    let mut push = |name: &str, err: f64, tol: f64| {
        checks.push(CheckResult {
            check: name.to_string(),
            max_error: err,
            tolerance: tol,
            pass: err <= tol,
        });
    };

    // three-term recurrence of the half-integer Bessel functions
    let mut worst = 0.0f64;
    for m in 1..=40u32 {
        for &r in &[0.5, 2.0, 10.0, 40.0] {
            let lo = bessel_half(m - 1, r)?;
            let mid = bessel_half(m, r)?;
            let hi = bessel_half(m + 1, r)?;
            let resid = (lo - hi - (2.0 * m as f64 + 1.0) / r * mid).abs() / lo;
            worst = worst.max(resid);
        }
    }
    push("bessel_recurrence", worst, 1e-9);

    // the two closed forms of Lambda_k agree
    let coeffs = coefficients(state);
    let mut worst = 0.0f64;
    for k in 0..=k_max {
        let direct = lambda_k_direct(&coeffs, state, k)?;
        let hj = lambda_k_hj(state, k)?;
        let scale = direct.abs().max(hj.abs()).max(1.0);
        worst = worst.max((direct - hj).abs() / scale);
    }
    push("spectrum_dual_forms", worst, 1e-10);

    // finite-difference mode BVP reproduces the closed-form eigenvalue
    let mut worst = 0.0f64;
    for k in [0u32, 1, 2, 5] {
        let direct = lambda_k_direct(&coeffs, state, k)?;
        let fd = solve_mode_bvp(state, k, grid)?.lambda_fd;
        worst = worst.max((fd - direct).abs() / direct.abs().max(1.0));
    }
    push("mode_bvp_fd", worst, 1e-5);

    // geometric curvature linearization against the per-mode coefficient
    let mut worst = 0.0f64;
    for k in 2..=6u32 {
        for &theta in &[0.4, 1.1, 2.0] {
            let want = linearized_curvature(state, k);
            let got = curvature_mode_derivative(state.radius, k, theta)?;
            worst = worst.max((got - want).abs() / want.abs().max(1.0));
        }
    }
    push("curvature_linearization", worst, 1e-6);

    // radial velocity law against the integral-identity FD oracle
    let mut worst = 0.0f64;
    for &r in &[0.3, 0.5 * state.radius, state.radius, 1.5 * state.radius] {
        let direct = radial_rhs(&state.params, r)?;
        let fd = radial_rhs_fd_oracle(&state.params, r, grid)?;
        worst = worst.max((fd - direct).abs() / direct.abs().max(1.0));
    }
    push("radial_rhs_fd", worst, 1e-6);

    Ok(checks)
}

#[derive(Serialize)]
struct SimulateSummary {
    model: ModelParams,
    mode: SimMode,
    t_end: f64,
    extinction: bool,
    blow_up: bool,
    /// Stationary radius used as the fit limit (radial mode only).
    limit: Option<f64>,
    /// Least-squares exponential rate per column; positive = decay.
    fitted_rates: BTreeMap<String, Option<f64>>,
}

fn cmd_simulate(
    common: &Common,
    mode: Option<SimMode>,
    branch: Option<BranchSel>,
    r0: Option<f64>,
    t_end: Option<f64>,
    modes: Option<String>,
) -> Result<u8, String> {
    let file = load_config(common)?;
    let params = resolve_model(&file.model, common)?;
    let sim = &file.simulate;
    let mode = mode.or(sim.mode).unwrap_or(SimMode::Radial);
    let t_end = t_end
        .or(sim.t_end)
        .ok_or("missing required simulate field: t_end")?;
    let samples = sim.samples.unwrap_or(400);

    let (trace, limit) = match mode {
        SimMode::Radial => {
            let r0 = r0.or(sim.r0).ok_or("missing required simulate field: r0")?;
            let trace = integrate_radial(&params, r0, t_end, t_end * 1e-3)
                .map_err(|e| e.to_string())?;
            // fit toward the stationary radius nearest the final value
            let states = solve_stationary(&params).map_err(|e| e.to_string())?;
            let last = *trace.columns[0].last().unwrap();
            let limit = states
                .iter()
                .map(|s| s.radius)
                .min_by(|a, b| (a - last).abs().total_cmp(&(b - last).abs()));
            (trace, limit)
        }
        SimMode::LinearModes => {
            let branch = branch.or(sim.branch).unwrap_or(BranchSel::Larger);
            let modes = modes
                .or_else(|| sim.modes.clone())
                .ok_or("missing required simulate field: modes")?;
            let amps = parse_modes(&modes)?;
            let states = solve_stationary(&params).map_err(|e| e.to_string())?;
            if states.is_empty() {
                return no_equilibria(&params);
            }
            let state = pick_branch(&states, branch)?;
            let trace = integrate_linear_modes(&state, &amps, t_end, samples)
                .map_err(|e| e.to_string())?;
            (trace, None)
        }
    };

    let mut fitted_rates = BTreeMap::new();
    let fit_limit = limit.unwrap_or(0.0);
    for (label, col) in trace.labels.iter().zip(&trace.columns) {
        let rate = fit_decay_rate(&trace.times, col, fit_limit, 0.5).ok();
        fitted_rates.insert(label.clone(), rate);
    }
    let summary = SimulateSummary {
        model: params,
        mode,
        t_end,
        extinction: trace.metadata.extinction,
        blow_up: trace.metadata.blow_up,
        limit,
        fitted_rates,
    };

    match common.format {
        Format::Json => {
            #[derive(Serialize)]
            struct JsonSeries<'a> {
                times: &'a [f64],
                labels: &'a [String],
                columns: &'a [Vec<f64>],
                summary: &'a SimulateSummary,
            }
            let text = to_json(&JsonSeries {
                times: &trace.times,
                labels: &trace.labels,
                columns: &trace.columns,
                summary: &summary,
            })?;
            write_result(common, &text)?;
        }
        Format::Csv => {
            let mut out = String::from("time");
            for label in &trace.labels {
                let _ = write!(out, ",{label}");
            }
            out.push('\n');
            for (i, t) in trace.times.iter().enumerate() {
                let _ = write!(out, "{}", csv_f(*t));
                for col in &trace.columns {
                    let _ = write!(out, ",{}", csv_f(col[i]));
                }
                out.push('\n');
            }
            write_result(common, &out)?;
            // the fitted-rate summary goes to stdout when the series
            // went to a file, to stderr otherwise (keeps stdout pure CSV)
            let summary_text = to_json(&summary)?;
            if common.output.is_some() {
                print!("{summary_text}");
            } else {
                eprint!("{summary_text}");
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parse "k:amp,k:amp,..." into a dense amplitude vector indexed by k.
fn parse_modes(spec: &str) -> Result<Vec<f64>, String> {
    let mut pairs = Vec::new();
    for part in spec.split(',') {
        let (k, amp) = part
            .split_once(':')
            .ok_or_else(|| format!("bad mode entry '{part}', expected k:amp"))?;
        let k: usize = k
            .trim()
            .parse()
            .map_err(|_| format!("bad mode index '{k}'"))?;
        let amp: f64 = amp
            .trim()
            .parse()
            .map_err(|_| format!("bad mode amplitude '{amp}'"))?;
        pairs.push((k, amp));
    }
    if pairs.is_empty() {
        return Err("no modes given".into());
    }
    let len = pairs.iter().map(|&(k, _)| k).max().unwrap() + 1;
    let mut amps = vec![0.0; len];
    for (k, amp) in pairs {
        amps[k] = amp;
    }
    Ok(amps)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    text.push('\n');
    Ok(text)
}
