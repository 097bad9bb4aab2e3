//! Time evolution and decay-rate extraction.
//!
//! The radius of a radial (spherically symmetric) tumor obeys the
//! scalar ODE
//!
//! ```text
//! dR/dt = mu R [ sigma_bar f(R) - sigma_tilde / 3 ]
//! ```
//!
//! whose zeros are exactly the stationary radii. The right-hand side is
//! validated against an independent elliptic solve (see the oracle
//! module and the `verify` CLI command) before anything downstream
//! trusts it. The linearized non-radial dynamics are diagonal in the
//! spherical-harmonic basis, so each mode amplitude is evolved in
//! closed form as `c_k(t) = c_k(0) exp(-Lambda_k t)` with no stepping
//! error.
//!
//! Decay (or growth) rates are recovered from a time series by a
//! log-linear least-squares fit over its trailing half:
//!
//! ```
//! use spheroid::stationary::ModelParams;
//! use spheroid::spectrum::lambda_k_hj;
//! use spheroid::dynamics::{fit_decay_rate, integrate_linear_modes};
//!
//! let (_, state) = ModelParams::with_stationary_radius(1.0, 1.0, 1.0, 0.0, 3.4713).unwrap();
//! let lambda_2 = lambda_k_hj(&state, 2).unwrap();
//! let trace = integrate_linear_modes(&state, &[0.0, 0.0, 0.01], 6.0 / lambda_2, 400).unwrap();
//! let rate = fit_decay_rate(&trace.times, trace.column("mode_2").unwrap(), 0.0, 0.5).unwrap();
//! assert!((rate - lambda_2).abs() < 1e-9 * lambda_2);
//! ```

use crate::error::{Error, Result};
use crate::spectrum::{coefficients, lambda_k_direct};
use crate::stationary::{f_of_r, ModelParams, StationaryState};
use serde::{Deserialize, Serialize};

/// A time series of boundary state produced by one simulation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationTrace {
    pub times: Vec<f64>,
    /// One column per tracked quantity (radius, or one per mode plus an
    /// aggregate norm), column-major.
    pub columns: Vec<Vec<f64>>,
    pub labels: Vec<String>,
    pub metadata: TraceMetadata,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceMetadata {
    pub params: ModelParams,
    pub initial: Vec<f64>,
    pub extinction: bool,
    pub blow_up: bool,
}

impl SimulationTrace {
    pub fn column(&self, label: &str) -> Option<&[f64]> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.columns[i].as_slice())
    }
}

/// dR/dt for the radial problem.
pub fn radial_rhs(params: &ModelParams, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radial_rhs requires R > 0, got {r}")));
    }
    Ok(params.mu * r * (params.sigma_bar * f_of_r(params.gamma, r)? - params.sigma_tilde / 3.0))
}

/// The independent route to dR/dt: solve the two elliptic problems on
/// the ball of radius `r` by finite differences (nutrient with boundary
/// value `sigma_bar (1 - gamma/r)`, then pressure with source
/// `-mu (sigma - sigma_tilde)`) and return the boundary velocity
/// `-p'(r)` from the integral identity
/// `r^2 p'(r) = -mu \int_0^r (sigma - sigma_tilde) s^2 ds`.
pub fn radial_rhs_fd_oracle(params: &ModelParams, r: f64, n_grid: usize) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!(
            "oracle requires R > 0, got R = {r}"
        )));
    }
    // reuse the mode-BVP machinery at k = 0 with the radial boundary
    // data (negative boundary values are fine: the problem is linear)
    let sigma_b = params.sigma_bar * (1.0 - params.gamma / r);
    let velocity_at = |n: usize| -> Result<f64> {
        let (grid, sigma) =
            crate::oracle::solve_radial_helmholtz(r, 0.0, 1.0, n, |_| 0.0, sigma_b)?;
        let h = r / n as f64;
        let mut integral = 0.0;
        for i in 0..n {
            integral += (sigma[i] - params.sigma_tilde) * grid[i] * grid[i] * h;
        }
        // -p'(r) = (mu / r^2) * integral
        Ok(params.mu * integral / (r * r))
    };
    // one Richardson level removes the O(h^2) term; the result is still
    // a pure finite-difference quantity, independent of the closed form
    let coarse = velocity_at(n_grid / 2)?;
    let fine = velocity_at(n_grid)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];
const DP_A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

/// Integrate the radial ODE with an adaptive Dormand-Prince 5(4) pair,
/// relative tolerance 1e-10. Terminates early at the extinction guard
/// (R < 1e-6) or the blow-up guard (R > 1e3); either sets a flag in the
/// trace metadata.
pub fn integrate_radial(
    params: &ModelParams,
    r0: f64,
    t_end: f64,
    dt_init: f64,
) -> Result<SimulationTrace> {
    params.validate()?;
    if !(r0 > 0.0) {
        return Err(Error::Domain(format!("R0 must be positive, got {r0}")));
    }
    if !(t_end > 0.0 && dt_init > 0.0) {
        return Err(Error::Domain("t_end and dt_init must be positive".into()));
    }
    let rhs = |r: f64| radial_rhs(params, r);
    let rel_tol = 1e-10;
    let abs_tol = 1e-12;
    let mut t = 0.0;
    let mut r = r0;
    let mut dt = dt_init.min(t_end);
    let mut times = vec![0.0];
    let mut radii = vec![r0];
    let mut extinction = false;
    let mut blow_up = false;
    let mut k = [0.0_f64; 7];
    k[0] = rhs(r)?;
    while t < t_end {
        if dt < 1e-14 * t.max(1.0) {
            return Err(Error::Numerical(format!(
                "step size underflow at t = {t}"
            )));
        }
        let dt_eff = dt.min(t_end - t);
        let mut ok = true;
        for stage in 1..7 {
            let mut acc = 0.0;
            for j in 0..stage {
                acc += DP_A[stage - 1][j] * k[j];
            }
            let r_stage = r + dt_eff * acc;
            if r_stage <= 0.0 {
                ok = false;
                break;
            }
            let _ = DP_C[stage]; // stage times unused: autonomous ODE
            k[stage] = rhs(r_stage)?;
        }
        if !ok {
            dt *= 0.5;
            continue;
        }
        let mut r5 = r;
        let mut r4 = r;
        for j in 0..7 {
            r5 += dt_eff * DP_B5[j] * k[j];
            r4 += dt_eff * DP_B4[j] * k[j];
        }
        let err = (r5 - r4).abs() / (abs_tol + rel_tol * r.abs().max(r5.abs()));
        if err <= 1.0 {
            t += dt_eff;
            r = r5;
            times.push(t);
            radii.push(r);
            k[0] = k[6]; // FSAL
            if r < 1e-6 {
                extinction = true;
                break;
            }
            if r > 1e3 {
                blow_up = true;
                break;
            }
        }
        let scale = if err > 0.0 {
            0.9 * err.powf(-0.2)
        } else {
            5.0
        };
        dt = dt_eff * scale.clamp(0.2, 5.0);
    }
    Ok(SimulationTrace {
        times,
        columns: vec![radii],
        labels: vec!["radius".into()],
        metadata: TraceMetadata {
            params: *params,
            initial: vec![r0],
            extinction,
            blow_up,
        },
    })
}

/// Evolve the linearized spherical-harmonic mode system in closed form:
/// `c_k(t) = c_k(0) exp(-Lambda_k t)`, sampled at `n_samples` uniform
/// times. The final column is the aggregate norm `sum_k |c_k(t)|`.
pub fn integrate_linear_modes(
    state: &StationaryState,
    initial_amplitudes: &[f64],
    t_end: f64,
    n_samples: usize,
) -> Result<SimulationTrace> {
    if initial_amplitudes.is_empty() {
        return Err(Error::Domain("no mode amplitudes given".into()));
    }
    if initial_amplitudes.iter().any(|a| !a.is_finite()) {
        return Err(Error::Domain("mode amplitudes must be finite".into()));
    }
    if !(t_end > 0.0) || n_samples < 2 {
        return Err(Error::Domain(
            "t_end must be positive and n_samples >= 2".into(),
        ));
    }
    let coeffs = coefficients(state);
    let k_count = initial_amplitudes.len();
    let mut lambdas = Vec::with_capacity(k_count);
    for k in 0..k_count {
        let lam = if k == 1 {
            0.0 // translation mode, structurally zero
        } else {
            lambda_k_direct(&coeffs, state, k as u32)?
        };
        lambdas.push(lam);
    }
    let times: Vec<f64> = (0..n_samples)
        .map(|i| t_end * i as f64 / (n_samples - 1) as f64)
        .collect();
    let mut columns: Vec<Vec<f64>> = vec![Vec::with_capacity(n_samples); k_count + 1];
    for &t in &times {
        let mut aggregate = 0.0;
        for k in 0..k_count {
            let c = initial_amplitudes[k] * (-lambdas[k] * t).exp();
            columns[k].push(c);
            aggregate += c.abs();
        }
        columns[k_count].push(aggregate);
    }
    let mut labels: Vec<String> = (0..k_count).map(|k| format!("mode_{k}")).collect();
    labels.push("aggregate".into());
    Ok(SimulationTrace {
        times,
        columns,
        labels,
        metadata: TraceMetadata {
            params: state.params,
            initial: initial_amplitudes.to_vec(),
            extinction: false,
            blow_up: false,
        },
    })
}

/// Least-squares exponential rate of the deviation |value - limit| over
/// the trailing `tail_fraction` of a series. Returns the decay rate
/// (positive for decay, negative for growth): the negated slope of
/// log-deviation against time.
///
/// Requires at least 10 tail samples above the 1e-13 noise floor and a
/// log-magnitude tail that is monotone over at least one decade.
pub fn fit_decay_rate(
    times: &[f64],
    values: &[f64],
    limit: f64,
    tail_fraction: f64,
) -> Result<f64> {
    if times.len() != values.len() || times.is_empty() {
        return Err(Error::Domain("times/values length mismatch".into()));
    }
    if !(0.0..1.0).contains(&tail_fraction) && tail_fraction != 1.0 {
        return Err(Error::Domain(format!(
            "tail_fraction must be in (0, 1], got {tail_fraction}"
        )));
    }
    let start = ((1.0 - tail_fraction) * times.len() as f64).floor() as usize;
    let mut ts = Vec::new();
    let mut logs = Vec::new();
    for i in start..times.len() {
        let dev = (values[i] - limit).abs();
        if dev > 1e-13 {
            ts.push(times[i]);
            logs.push(dev.ln());
        }
    }
    if ts.len() < 10 {
        return Err(Error::InsufficientSignal(format!(
            "only {} tail samples above the noise floor",
            ts.len()
        )));
    }
    let span = logs
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max)
        - logs.iter().cloned().fold(f64::INFINITY, f64::min);
    if span < std::f64::consts::LN_10 {
        return Err(Error::InsufficientSignal(format!(
            "tail spans only {:.2} decades",
            span / std::f64::consts::LN_10
        )));
    }
    let increasing = logs.last().unwrap() > logs.first().unwrap();
    let slack = 1e-9 * span;
    for w in logs.windows(2) {
        let step_ok = if increasing {
            w[1] >= w[0] - slack
        } else {
            w[1] <= w[0] + slack
        };
        if !step_ok {
            return Err(Error::InsufficientSignal(
                "tail log-magnitude is not monotone".into(),
            ));
        }
    }
    // least squares slope of log-deviation vs time
    let n = ts.len() as f64;
    let mean_t = ts.iter().sum::<f64>() / n;
    let mean_l = logs.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, l) in ts.iter().zip(&logs) {
        num += (t - mean_t) * (l - mean_l);
        den += (t - mean_t) * (t - mean_t);
    }
    if den == 0.0 {
        return Err(Error::InsufficientSignal("degenerate time grid".into()));
    }
    Ok(-num / den)
}
