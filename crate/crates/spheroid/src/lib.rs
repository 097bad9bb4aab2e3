//! Stationary solutions, linearized spectrum and stability thresholds
//! of the tumor-spheroid free-boundary model with a Gibbs-Thomson
//! boundary condition, plus the brute-force oracles that verify every
//! closed form numerically.
//!
//! The model has five constants: the external nutrient concentration
//! `sigma_bar`, the apoptosis threshold `sigma_tilde`, the
//! proliferation rate `mu`, the cell-to-cell adhesiveness `gamma` and
//! the external pressure `p_bar`. Radial equilibria are balls whose
//! radius solves `f(R) = sigma_tilde / (3 sigma_bar)`; for nutrient
//! ratios below the threshold `theta_*` there are exactly two.
//!
//! ```
//! use spheroid::stationary::{ModelParams, solve_stationary, theta_star};
//!
//! let params = ModelParams::new(1.0, 0.3, 1.0, 0.1, 0.0).unwrap();
//! let roots = solve_stationary(&params).unwrap();
//! assert_eq!(roots.len(), 2);
//! assert!(roots[0].f_prime > 0.0 && roots[1].f_prime < 0.0);
//!
//! let ts = theta_star(0.1).unwrap();
//! assert!(params.theta() < ts.value);
//! ```
//!
//! The linearization at an equilibrium is diagonal over spherical
//! harmonics; the degree-k eigenvalue `Lambda_k` is positive exactly
//! when the mode decays, and `Lambda_1 = 0` (translation):
//!
//! ```
//! use spheroid::stationary::{ModelParams, solve_stationary};
//! use spheroid::spectrum::{coefficients, lambda_k_direct, mode_spectrum};
//!
//! let params = ModelParams::new(1.0, 0.3, 1.0, 0.1, 0.0).unwrap();
//! let larger = solve_stationary(&params).unwrap()[1];
//! let spec = mode_spectrum(&larger, 16).unwrap();
//! assert_eq!(spec.lambdas[1], 0.0);
//! // Lambda_0 = -mu sigma_bar R_s f'(R_s)
//! let want = -1.0 * 1.0 * larger.radius * larger.f_prime;
//! assert!((spec.lambdas[0] - want).abs() < 1e-9 * want.abs().max(1.0));
//! ```
//!
//! Every closed form is checked against an independent finite-difference
//! solve of the per-mode boundary-value problems:
//!
//! ```
//! use spheroid::stationary::{ModelParams, solve_stationary};
//! use spheroid::spectrum::{coefficients, lambda_k_direct};
//! use spheroid::oracle::solve_mode_bvp;
//!
//! let params = ModelParams::new(1.0, 0.3, 1.0, 0.1, 0.0).unwrap();
//! let state = solve_stationary(&params).unwrap()[1];
//! let coeffs = coefficients(&state);
//! let closed = lambda_k_direct(&coeffs, &state, 5).unwrap();
//! let oracle = solve_mode_bvp(&state, 5, 2048).unwrap().lambda_fd;
//! assert!((closed - oracle).abs() < 1e-6 * closed.abs().max(1.0));
//! ```

pub mod dynamics;
pub mod error;
pub mod oracle;
pub mod special;
pub mod spectrum;
pub mod stationary;

pub use error::{Error, Result};
