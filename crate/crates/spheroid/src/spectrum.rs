//! Eigenvalues of the linearized boundary-evolution operator.
//!
//! On the spherical-harmonic subspace of degree k the linearization at
//! a radial equilibrium acts as multiplication by `Lambda_k(gamma)`.
//! Two algebraically equivalent expressions are implemented:
//!
//! ```text
//! Lambda_k = -[c2 - c1 k(k+1)] I_{k+3/2}(R_s)/I_{k+1/2}(R_s) + c3
//! Lambda_k = (mu sigma_bar / R_s) [gamma (h_k + j_k) - j_k R_s]
//! ```
//!
//! Their agreement encodes the stationarity identity
//! `sigma_tilde = 3 sigma_bar (1 - gamma/R_s) I_{3/2}/(R_s I_{1/2})`
//! and is itself one of the verification checks. A mode with
//! `Lambda_k > 0` decays (the evolution is `d rho/dt + Psi(rho) = 0`).
//!
//! The per-mode thresholds `gamma_k` depend only on the stationary
//! radius, and their supremum `gamma_*` splits the larger branch into a
//! stable and an unstable regime:
//!
//! ```
//! use spheroid::stationary::ModelParams;
//! use spheroid::spectrum::gamma_thresholds;
//!
//! // pin the stationary radius, back-solving sigma_tilde
//! let (_, state) = ModelParams::with_stationary_radius(1.0, 1.0, 1.0, 0.0, 3.4713).unwrap();
//! let th = gamma_thresholds(&state, 32).unwrap();
//! assert_eq!(th.attained_at, 2);
//! assert!(th.gamma_star < 1.0); // gamma = 1 exceeds gamma_*: stable
//! ```

use crate::error::{Error, Result};
use crate::special::bessel_ratio;
use crate::stationary::{solve_stationary, Branch, ModelParams, StationaryState};
use serde::{Deserialize, Serialize};

/// The constants c1, c2, c3 of the linearization at a stationary state.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LinearizationCoefficients {
    /// mu gamma sigma_bar / (2 R_s^2), > 0.
    pub c1: f64,
    /// mu gamma sigma_bar / R_s^2 - mu sigma_tilde R_s / 3 = 2 c1 - mu sigma_tilde R_s / 3.
    pub c2: f64,
    /// p_s''(R_s) = -mu [sigma_bar (1 - gamma/R_s) - sigma_tilde].
    pub c3: f64,
}

pub fn coefficients(state: &StationaryState) -> LinearizationCoefficients {
    let p = &state.params;
    let rs = state.radius;
    let c1 = p.mu * p.gamma * p.sigma_bar / (2.0 * rs * rs);
    let c2 = 2.0 * c1 - p.mu * p.sigma_tilde * rs / 3.0;
    let c3 = -p.mu * (p.sigma_bar * (1.0 - p.gamma / rs) - p.sigma_tilde);
    LinearizationCoefficients { c1, c2, c3 }
}

/// Lambda_k from the Bessel-ratio form.
pub fn lambda_k_direct(
    coeffs: &LinearizationCoefficients,
    state: &StationaryState,
    k: u32,
) -> Result<f64> {
    let kk = k as f64 * (k as f64 + 1.0);
    let ratio = bessel_ratio(k, state.radius)?;
    Ok(-(coeffs.c2 - coeffs.c1 * kk) * ratio + coeffs.c3)
}

/// The pair (h_k, j_k):
///
/// ```text
/// h_k = ((k^2+k)/2 - 1) ratio_k / R_s
/// j_k = 1 - 3 ratio_0 / R_s - ratio_0 ratio_k
/// ```
///
/// with `ratio_k = I_{k+3/2}(R_s)/I_{k+1/2}(R_s)`. Note j_0 < 0,
/// j_1 = 0 and j_k > 0 for k >= 2.
pub fn h_j_of_k(state: &StationaryState, k: u32) -> Result<(f64, f64)> {
    let rs = state.radius;
    let ratio0 = bessel_ratio(0, rs)?;
    let ratio_k = bessel_ratio(k, rs)?;
    let kk = k as f64 * (k as f64 + 1.0);
    let h = (kk / 2.0 - 1.0) * ratio_k / rs;
    let j = 1.0 - 3.0 * ratio0 / rs - ratio0 * ratio_k;
    Ok((h, j))
}

/// Lambda_k from the h/j form. Valid for all k >= 0; agrees with
/// [`lambda_k_direct`] at stationary states.
pub fn lambda_k_hj(state: &StationaryState, k: u32) -> Result<f64> {
    let (h, j) = h_j_of_k(state, k)?;
    let p = &state.params;
    let rs = state.radius;
    Ok(p.mu * p.sigma_bar / rs * (p.gamma * (h + j) - j * rs))
}

/// Per-mode coefficient of the linearized mean curvature at the sphere:
/// for a degree-k perturbation the directional derivative of the
/// curvature is `-(1/R_s^2)(1 - k(k+1)/2)` times the harmonic.
pub fn linearized_curvature(state: &StationaryState, k: u32) -> f64 {
    let rs = state.radius;
    let kk = k as f64 * (k as f64 + 1.0);
    -(1.0 - kk / 2.0) / (rs * rs)
}

/// Per-mode thresholds gamma_k = j_k R_s / (h_k + j_k) for k >= 2, and
/// their supremum gamma_*.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GammaThresholds {
    /// gamma_k for k = 2 ..= k_max (index 0 is k = 2).
    pub gamma_k: Vec<f64>,
    pub gamma_star: f64,
    /// The k attaining the supremum.
    pub attained_at: u32,
}

/// Scan gamma_k over k in [2, k_max], extending past k_max until the
/// tail bound 8 R_s / k has been below the running maximum for 50
/// consecutive k (gamma_k = O(R_s/k) with a factor-2 safety margin).
pub fn gamma_thresholds(state: &StationaryState, k_max: u32) -> Result<GammaThresholds> {
    if k_max < 2 {
        return Err(Error::Domain(format!(
            "gamma_thresholds requires k_max >= 2, got {k_max}"
        )));
    }
    let rs = state.radius;
    let mut gamma_k = Vec::with_capacity((k_max - 1) as usize);
    let mut gamma_star = f64::NEG_INFINITY;
    let mut attained_at = 2u32;
    let mut consecutive_below = 0u32;
    let mut k = 2u32;
    loop {
        let (h, j) = h_j_of_k(state, k)?;
        let g = j * rs / (h + j);
        if k <= k_max {
            gamma_k.push(g);
        }
        if g > gamma_star {
            gamma_star = g;
            attained_at = k;
        }
        if 8.0 * rs / (k as f64) < gamma_star {
            consecutive_below += 1;
        } else {
            consecutive_below = 0;
        }
        if k >= k_max && consecutive_below >= 50 {
            break;
        }
        if k > 10_000_000 {
            return Err(Error::Numerical(
                "gamma_* scan did not terminate".into(),
            ));
        }
        k += 1;
    }
    Ok(GammaThresholds {
        gamma_k,
        gamma_star,
        attained_at,
    })
}

/// Stability verdict for one stationary branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unstable,
}

/// The complete per-branch spectrum with diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeSpectrum {
    pub state: StationaryState,
    pub k_max: u32,
    /// Lambda_k for k = 0 ..= k_max (Lambda_1 structurally zero).
    pub lambdas: Vec<f64>,
    /// h_k for k = 2 ..= k_max.
    pub h: Vec<f64>,
    /// j_k for k = 0 ..= k_max.
    pub j: Vec<f64>,
    pub thresholds: GammaThresholds,
    pub classification: Verdict,
}

/// Compute the spectrum up to k_max (>= 2) at a stationary state.
///
/// Lambda_k is taken from the direct Bessel-ratio form; Lambda_1 is set
/// to exactly zero after checking the floating-point residue is below
/// 1e-10 relative (it is structurally zero, the translation mode).
pub fn mode_spectrum(state: &StationaryState, k_max: u32) -> Result<ModeSpectrum> {
    if k_max < 2 {
        return Err(Error::Domain(format!(
            "mode_spectrum requires k_max >= 2, got {k_max}"
        )));
    }
    let coeffs = coefficients(state);
    let mut lambdas = Vec::with_capacity(k_max as usize + 1);
    let mut h = Vec::new();
    let mut j = Vec::new();
    for k in 0..=k_max {
        let lam = lambda_k_direct(&coeffs, state, k)?;
        let (hk, jk) = h_j_of_k(state, k)?;
        if k >= 2 {
            h.push(hk);
        }
        j.push(jk);
        lambdas.push(lam);
    }
    let scale = lambdas[0].abs().max(1.0);
    if lambdas[1].abs() > 1e-10 * scale {
        return Err(Error::Numerical(format!(
            "translation-mode eigenvalue not numerically zero: {}",
            lambdas[1]
        )));
    }
    lambdas[1] = 0.0;
    let thresholds = gamma_thresholds(state, k_max)?;
    let all_decay =
        lambdas[0] > 0.0 && lambdas.iter().skip(2).all(|&l| l > 0.0);
    let classification = if state.branch == Branch::Larger && all_decay {
        Verdict::Stable
    } else {
        Verdict::Unstable
    };
    Ok(ModeSpectrum {
        state: *state,
        k_max,
        lambdas,
        h,
        j,
        thresholds,
        classification,
    })
}

/// Stability report for one branch.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BranchReport {
    pub branch: Branch,
    pub radius: f64,
    pub f_prime: f64,
    pub lambda0: f64,
    pub gamma_star: f64,
    pub gamma_star_attained_at: u32,
    /// Modes k >= 2 with negative eigenvalue (growing perturbations).
    pub negative_modes: Vec<(u32, f64)>,
    pub verdict: Verdict,
}

/// Full classification across all stationary branches.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Classification {
    pub theta: f64,
    pub theta_star: f64,
    pub branches: Vec<BranchReport>,
}

/// Classify every stationary branch of the given parameters: the
/// smaller branch is always unstable (Lambda_0 < 0 there); the larger
/// branch is stable exactly when Lambda_0 > 0 and every Lambda_k with
/// k >= 2 is positive, equivalently when gamma exceeds gamma_* at the
/// realized radius.
pub fn classify(params: &ModelParams, k_max: u32) -> Result<Classification> {
    let ts = crate::stationary::theta_star(params.gamma)?;
    let states = solve_stationary(params)?;
    let mut branches = Vec::new();
    for state in &states {
        let spec = mode_spectrum(state, k_max)?;
        let negative_modes: Vec<(u32, f64)> = spec
            .lambdas
            .iter()
            .enumerate()
            .skip(2)
            .filter(|(_, &l)| l < 0.0)
            .map(|(k, &l)| (k as u32, l))
            .collect();
        branches.push(BranchReport {
            branch: state.branch,
            radius: state.radius,
            f_prime: state.f_prime,
            lambda0: spec.lambdas[0],
            gamma_star: spec.thresholds.gamma_star,
            gamma_star_attained_at: spec.thresholds.attained_at,
            negative_modes,
            verdict: spec.classification,
        });
    }
    Ok(Classification {
        theta: params.theta(),
        theta_star: ts.value,
        branches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stationary::f_prime_of_r;

    fn two_states() -> Vec<StationaryState> {
        let p = ModelParams::new(1.0, 0.3, 1.0, 0.1, 0.0).unwrap();
        solve_stationary(&p).unwrap()
    }

    #[test]
    fn coefficient_identities() {
        for state in two_states() {
            let c = coefficients(&state);
            let p = &state.params;
            assert!(c.c1 > 0.0);
            let want = -p.mu * p.sigma_tilde * state.radius / 3.0;
            // the subtraction reintroduces rounding at the scale of c1
            let tol = 1e-14 * (want.abs() + 2.0 * c.c1.abs()).max(1e-300);
            assert!(((c.c2 - 2.0 * c.c1) - want).abs() < tol);
        }
    }

    #[test]
    fn c3_vanishes_at_balanced_nutrient() {
        // sigma_tilde = sigma_bar (1 - gamma/R_s) makes the c3 bracket
        // vanish; such a pair need not be stationary, so assemble the
        // state by hand
        let radius = 2.0;
        let gamma = 0.1;
        let params = ModelParams::new(1.0, 1.0 - gamma / radius, 1.0, gamma, 0.0).unwrap();
        let state = StationaryState {
            params,
            radius,
            branch: Branch::Larger,
            f_value: 0.0,
            f_prime: 0.0,
        };
        assert_eq!(coefficients(&state).c3, 0.0);
    }

    #[test]
    fn lambda0_identity() {
        for state in two_states() {
            let c = coefficients(&state);
            let lam0 = lambda_k_direct(&c, &state, 0).unwrap();
            let p = &state.params;
            let want = -p.mu * p.sigma_bar * state.radius
                * f_prime_of_r(p.gamma, state.radius).unwrap();
            assert!(
                (lam0 - want).abs() <= 1e-9 * (1.0 + lam0.abs()),
                "{lam0} vs {want}"
            );
        }
    }

    #[test]
    fn lambda1_is_zero() {
        for state in two_states() {
            let c = coefficients(&state);
            let lam1 = lambda_k_direct(&c, &state, 1).unwrap();
            let lam0 = lambda_k_direct(&c, &state, 0).unwrap();
            assert!(lam1.abs() <= 1e-10 * lam0.abs().max(1.0), "{lam1}");
        }
    }

    #[test]
    fn dual_formulas_agree() {
        for state in two_states() {
            let c = coefficients(&state);
            for k in 2..=200u32 {
                let a = lambda_k_direct(&c, &state, k).unwrap();
                let b = lambda_k_hj(&state, k).unwrap();
                assert!(
                    (a - b).abs() <= 1e-9 * a.abs().max(1.0),
                    "k={k}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn j_sign_facts() {
        for state in two_states() {
            let (_, j0) = h_j_of_k(&state, 0).unwrap();
            let (_, j1) = h_j_of_k(&state, 1).unwrap();
            assert!(j0 < 0.0, "j0 = {j0}");
            assert!(j1.abs() < 1e-12, "j1 = {j1}");
            for k in 2..=100u32 {
                let (_, jk) = h_j_of_k(&state, k).unwrap();
                assert!(jk > 0.0, "j_{k} = {jk}");
            }
        }
    }

    #[test]
    fn h2_positive_closed_form() {
        let state = two_states()[1];
        let (h2, _) = h_j_of_k(&state, 2).unwrap();
        let want = 2.0 * bessel_ratio(2, state.radius).unwrap() / state.radius;
        assert!((h2 - want).abs() < 1e-15 * want);
        assert!(h2 > 0.0);
    }

    #[test]
    fn factorization_sign() {
        // sign(Lambda_k) = sign(gamma - gamma_k) for k >= 2
        let state = two_states()[1];
        let th = gamma_thresholds(&state, 64).unwrap();
        let c = coefficients(&state);
        for k in 2..=64u32 {
            let lam = lambda_k_direct(&c, &state, k).unwrap();
            let gk = th.gamma_k[(k - 2) as usize];
            assert!(
                (lam > 0.0) == (state.params.gamma > gk),
                "k={k} lam={lam} gamma_k={gk}"
            );
        }
    }

    #[test]
    fn lambda_divergence() {
        // Lambda_k / k -> mu sigma_bar gamma / (4 R_s); the O(1) offset
        // j_inf R_s decays like 1/k relative, so pick a configuration
        // where k = 200 is already deep in the asymptotic regime
        let (p, state) = ModelParams::with_stationary_radius(1.0, 1.0, 1.0, 0.0, 3.4713).unwrap();
        let c = coefficients(&state);
        let k = 200u32;
        let lam = lambda_k_direct(&c, &state, k).unwrap();
        let slope = p.mu * p.sigma_bar * p.gamma / (4.0 * state.radius);
        assert!(
            (lam / k as f64 - slope).abs() < 0.10 * slope,
            "{} vs {slope}",
            lam / k as f64
        );
        let lam0 = lambda_k_direct(&c, &state, 0).unwrap();
        assert!(lam > lam0);
        // divergence also holds (eventually) on the gamma = 0.1 set
        let state = two_states()[1];
        let c = coefficients(&state);
        let lam_far = lambda_k_direct(&c, &state, 20_000).unwrap();
        assert!(lam_far > lambda_k_direct(&c, &state, 0).unwrap());
        assert!(lam_far > 0.0);
    }

    #[test]
    fn gamma_thresholds_positive_and_decaying() {
        let state = two_states()[1];
        let th = gamma_thresholds(&state, 1000).unwrap();
        assert!(th.gamma_star > 0.0);
        for (i, &g) in th.gamma_k.iter().enumerate() {
            assert!(g > 0.0, "gamma_{} = {g}", i + 2);
        }
        assert!(th.gamma_k[998] < 0.01 * th.gamma_star);
        // frozen from the 30-digit scan: gamma_* at R_s = 8.7568870...
        assert!((th.gamma_star - 2.8145859305781555).abs() < 1e-9);
        assert_eq!(th.attained_at, 2);
    }

    #[test]
    fn thresholds_mu_independent() {
        let p1 = ModelParams::new(1.0, 0.3, 1.0, 0.1, 0.0).unwrap();
        let s1 = solve_stationary(&p1).unwrap()[1];
        let (p7, s7) = ModelParams::with_stationary_radius(1.0, 7.3, 0.1, 0.0, s1.radius).unwrap();
        assert!((p7.sigma_tilde - p1.sigma_tilde).abs() < 1e-13);
        let t1 = gamma_thresholds(&s1, 128).unwrap();
        let t7 = gamma_thresholds(&s7, 128).unwrap();
        for (a, b) in t1.gamma_k.iter().zip(&t7.gamma_k) {
            assert!((a - b).abs() <= 1e-14 * a.abs());
        }
    }

    #[test]
    fn linearized_curvature_values() {
        let state = two_states()[1];
        let rs2 = state.radius * state.radius;
        assert!((linearized_curvature(&state, 0) + 1.0 / rs2).abs() < 1e-16);
        assert_eq!(linearized_curvature(&state, 1), 0.0);
        assert!((linearized_curvature(&state, 3) - 5.0 / rs2).abs() < 1e-15);
    }

    #[test]
    fn classify_branches() {
        // gamma far below gamma_*: smaller branch unstable, larger
        // branch unstable through some k >= 2
        let p = ModelParams::new(1.0, 0.3, 1.0, 0.1, 0.0).unwrap();
        let c = classify(&p, 64).unwrap();
        assert_eq!(c.branches.len(), 2);
        assert_eq!(c.branches[0].verdict, Verdict::Unstable);
        assert_eq!(c.branches[1].verdict, Verdict::Unstable);
        assert!(!c.branches[1].negative_modes.is_empty());

        // stable larger branch: gamma = 1, R_s = 3.4713 has
        // gamma_*(R_s) ~ 0.8656 < gamma
        let (p, _) = ModelParams::with_stationary_radius(1.0, 1.0, 1.0, 0.0, 3.4713).unwrap();
        let c = classify(&p, 64).unwrap();
        let larger = c
            .branches
            .iter()
            .find(|b| b.branch == Branch::Larger)
            .unwrap();
        assert_eq!(larger.verdict, Verdict::Stable);
        assert!(p.gamma > larger.gamma_star);
        assert!(larger.negative_modes.is_empty());
    }

    #[test]
    fn classify_no_equilibria() {
        let ts = crate::stationary::theta_star(0.1).unwrap();
        let p = ModelParams::new(1.0, ts.value * 1.2, 1.0, 0.1, 0.0).unwrap();
        let c = classify(&p, 16).unwrap();
        assert!(c.branches.is_empty());
        assert!(c.theta > c.theta_star);
    }
}
