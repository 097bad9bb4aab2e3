//! Radial stationary solutions.
//!
//! A radial equilibrium of radius `R_s` solves
//!
//! ```text
//! f(R) = (1 - gamma/R) (R coth R - 1) / R^2 = sigma_tilde / (3 sigma_bar)
//! ```
//!
//! For nutrient ratios theta = sigma_tilde/sigma_bar below the
//! existence threshold theta_* there are exactly two roots, the smaller
//! with f' > 0 and the larger with f' < 0. The nutrient and pressure
//! profiles on the equilibrium ball are in closed form.

use crate::error::{Error, Result};
use crate::special::bessel_ratio;
use serde::{Deserialize, Serialize};

/// The five physical constants of the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// External nutrient concentration, > 0.
    pub sigma_bar: f64,
    /// Apoptosis threshold concentration, > 0.
    pub sigma_tilde: f64,
    /// Proliferation rate, > 0.
    pub mu: f64,
    /// Cell-to-cell adhesiveness (Gibbs-Thomson coefficient), > 0.
    pub gamma: f64,
    /// External pressure (any sign).
    pub p_bar: f64,
}

impl ModelParams {
    pub fn new(sigma_bar: f64, sigma_tilde: f64, mu: f64, gamma: f64, p_bar: f64) -> Result<Self> {
        let p = ModelParams {
            sigma_bar,
            sigma_tilde,
            mu,
            gamma,
            p_bar,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.sigma_bar > 0.0
            && self.sigma_tilde > 0.0
            && self.mu > 0.0
            && self.gamma > 0.0
            && self.p_bar.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "sigma_bar, sigma_tilde, mu, gamma must be positive and p_bar finite: {self:?}"
            )))
        }
    }

    /// The nutrient ratio theta = sigma_tilde / sigma_bar.
    pub fn theta(&self) -> f64 {
        self.sigma_tilde / self.sigma_bar
    }

    /// Construct parameters for which `radius` is an exact stationary
    /// radius, by back-solving sigma_tilde from the stationarity
    /// equation. Useful for tests and threshold studies that need to
    /// pin R_s while varying the other constants.
    pub fn with_stationary_radius(
        sigma_bar: f64,
        mu: f64,
        gamma: f64,
        p_bar: f64,
        radius: f64,
    ) -> Result<(Self, StationaryState)> {
        if !(radius > gamma) {
            return Err(Error::Domain(format!(
                "stationary radius must exceed gamma ({gamma}), got {radius}"
            )));
        }
        let sigma_tilde = 3.0 * sigma_bar * f_of_r(gamma, radius)?;
        let params = ModelParams::new(sigma_bar, sigma_tilde, mu, gamma, p_bar)?;
        let state = StationaryState::at_radius(params, radius)?;
        Ok((params, state))
    }
}

/// Which root of the stationarity equation a state corresponds to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// The smaller root, f' > 0 (always unstable).
    Smaller,
    /// The larger root, f' < 0.
    Larger,
    /// Tangency root at theta = theta_*.
    Degenerate,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::Smaller => write!(f, "smaller"),
            Branch::Larger => write!(f, "larger"),
            Branch::Degenerate => write!(f, "degenerate"),
        }
    }
}

/// One root of the stationarity equation together with the local data
/// the spectrum computation needs.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StationaryState {
    pub params: ModelParams,
    pub radius: f64,
    pub branch: Branch,
    pub f_value: f64,
    pub f_prime: f64,
}

impl StationaryState {
    /// Build a state at a radius known to satisfy the stationarity
    /// equation (the residual is checked); the branch is inferred from
    /// the sign of f'.
    pub fn at_radius(params: ModelParams, radius: f64) -> Result<Self> {
        params.validate()?;
        let f_value = f_of_r(params.gamma, radius)?;
        let resid = (f_value - params.theta() / 3.0).abs();
        if resid > 1e-9 {
            return Err(Error::Domain(format!(
                "radius {radius} is not stationary: |f(R) - theta/3| = {resid:.3e}"
            )));
        }
        let f_prime = f_prime_of_r(params.gamma, radius)?;
        let branch = if f_prime > 0.0 {
            Branch::Smaller
        } else {
            Branch::Larger
        };
        Ok(StationaryState {
            params,
            radius,
            branch,
            f_value,
            f_prime,
        })
    }
}

/// A sampled radial function on [0, R_s].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialProfile {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: ProfileKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    Nutrient,
    Pressure,
    ModeA,
    ModeB,
}

/// g(R) = (R coth R - 1) / R^2, the gamma-free part of f. Evaluated as
/// ratio_0(R)/R so the removable singularity at R = 0 never appears.
fn g_of_r(r: f64) -> Result<f64> {
    Ok(bessel_ratio(0, r)? / r)
}

/// g'(R). Closed form for moderate R; series below R = 0.9 where the
/// closed form loses digits to cancellation.
fn g_prime_of_r(r: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::Domain(format!("g' requires R > 0, got {r}")));
    }
    if r < 0.9 {
        // g(R) = 1/3 - R^2/45 + 2R^4/945 - R^6/4725 + 2R^8/93555 - ...
        // coefficients 2^(2n) B_2n / (2n)! of R coth R, shifted
        const C: [f64; 7] = [
            -1.0 / 45.0,
            2.0 / 945.0,
            -1.0 / 4725.0,
            2.0 / 93555.0,
            -1382.0 / 638512875.0,
            4.0 / 18243225.0,
            -3617.0 / 162820783125.0,
        ];
        let r2 = r * r;
        let mut acc = 0.0;
        let mut pow = r;
        for (n, c) in C.iter().enumerate() {
            acc += (2 * (n + 1)) as f64 * c * pow;
            pow *= r2;
        }
        Ok(acc)
    } else {
        let r0 = bessel_ratio(0, r)?; // coth R - 1/R
        Ok((1.0 - r0 * r0) / r - 3.0 * r0 / (r * r))
    }
}

/// f(R) = (1 - gamma/R)(R coth R - 1)/R^2.
pub fn f_of_r(gamma: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("f requires R > 0, got {r}")));
    }
    Ok((1.0 - gamma / r) * g_of_r(r)?)
}

/// f'(R), analytic: f' = (gamma/R^2) g + (1 - gamma/R) g'.
pub fn f_prime_of_r(gamma: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("f' requires R > 0, got {r}")));
    }
    Ok(gamma / (r * r) * g_of_r(r)? + (1.0 - gamma / r) * g_prime_of_r(r)?)
}

/// f'(R) through the h_0/j_0 identity
/// `f'(R) = -(1/R^2) [gamma (h_0 + j_0) - j_0 R]`.
/// Independent route used to cross-check [`f_prime_of_r`].
pub fn f_prime_via_hj(gamma: f64, r: f64) -> Result<f64> {
    let r0 = bessel_ratio(0, r)?;
    let h0 = -r0 / r;
    let j0 = 1.0 - 3.0 * r0 / r - r0 * r0;
    Ok(-(gamma * (h0 + j0) - j0 * r) / (r * r))
}

/// The existence threshold theta_*(gamma) = 3 max_{R > gamma} f(R),
/// together with the maximizing radius.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ThetaStar {
    pub value: f64,
    pub argmax_radius: f64,
}

pub fn theta_star(gamma: f64) -> Result<ThetaStar> {
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!(
            "theta_star requires gamma > 0, got {gamma}"
        )));
    }
    // coarse log-spaced scan to bracket the single interior maximum
    let lo = gamma * (1.0 + 1e-12);
    let hi = (100.0_f64).max(10.0 * gamma);
    let n = 4096usize;
    let ratio = (hi / lo).powf(1.0 / (n - 1) as f64);
    let mut best = f64::NEG_INFINITY;
    let mut best_i = 0usize;
    let mut x = lo;
    let mut xs = Vec::with_capacity(n);
    for i in 0..n {
        xs.push(x);
        let v = f_of_r(gamma, x)?;
        if v > best {
            best = v;
            best_i = i;
        }
        x *= ratio;
    }
    if best_i == 0 || best_i == n - 1 {
        return Err(Error::Numerical(format!(
            "theta_star bracket not found for gamma = {gamma}"
        )));
    }
    // golden-section refinement on the bracketing triple
    let (mut a, mut b) = (xs[best_i - 1], xs[best_i + 1]);
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f_of_r(gamma, c)?;
    let mut fd = f_of_r(gamma, d)?;
    while b - a > 1e-13 * b.max(1.0) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f_of_r(gamma, c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f_of_r(gamma, d)?;
        }
    }
    let argmax = 0.5 * (a + b);
    Ok(ThetaStar {
        value: 3.0 * f_of_r(gamma, argmax)?,
        argmax_radius: argmax,
    })
}

fn bisect_root(gamma: f64, level: f64, mut a: f64, mut b: f64) -> Result<f64> {
    let ga = f_of_r(gamma, a)? - level;
    let gb = f_of_r(gamma, b)? - level;
    if ga * gb > 0.0 {
        return Err(Error::Numerical(format!(
            "no sign change on [{a}, {b}] for gamma = {gamma}"
        )));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = f_of_r(gamma, m)? - level;
        if gm * ga > 0.0 {
            a = m;
        } else {
            b = m;
        }
        if b - a < 1e-14 * b.max(1.0) {
            break;
        }
    }
    let mut r = 0.5 * (a + b);
    // one Newton polish
    for _ in 0..4 {
        let fp = f_prime_of_r(gamma, r)?;
        if fp.abs() < 1e-300 {
            break;
        }
        let step = (f_of_r(gamma, r)? - level) / fp;
        let next = r - step;
        if next > a && next < b {
            r = next;
        } else {
            break;
        }
    }
    Ok(r)
}

/// All radial stationary radii for the given parameters: two roots for
/// theta < theta_*, one degenerate root at the tangency, none above.
pub fn solve_stationary(params: &ModelParams) -> Result<Vec<StationaryState>> {
    params.validate()?;
    let gamma = params.gamma;
    let theta = params.theta();
    let level = theta / 3.0;
    let ts = theta_star(gamma)?;
    if theta > ts.value + 1e-10 {
        return Ok(vec![]);
    }
    if (theta - ts.value).abs() < 1e-10 {
        let r = ts.argmax_radius;
        return Ok(vec![StationaryState {
            params: *params,
            radius: r,
            branch: Branch::Degenerate,
            f_value: f_of_r(gamma, r)?,
            f_prime: f_prime_of_r(gamma, r)?,
        }]);
    }
    // left bracket: (gamma+, argmax); right: (argmax, hi) with f(hi) < level
    let mut hi = 2.0 * ts.argmax_radius;
    while f_of_r(gamma, hi)? > level {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(Error::Numerical(
                "right bracket for stationary root not found".into(),
            ));
        }
    }
    let r1 = bisect_root(gamma, level, gamma * (1.0 + 1e-12), ts.argmax_radius)?;
    let r2 = bisect_root(gamma, level, ts.argmax_radius, hi)?;
    let make = |radius: f64, branch: Branch| -> Result<StationaryState> {
        Ok(StationaryState {
            params: *params,
            radius,
            branch,
            f_value: f_of_r(gamma, radius)?,
            f_prime: f_prime_of_r(gamma, radius)?,
        })
    };
    Ok(vec![make(r1, Branch::Smaller)?, make(r2, Branch::Larger)?])
}

/// sinh(r)/r with the removable singularity filled in.
fn sinhc(r: f64) -> f64 {
    if r < 1e-4 {
        1.0 + r * r / 6.0 + r * r * r * r / 120.0
    } else {
        r.sinh() / r
    }
}

/// R_s sinh r / (r sinh R_s), overflow-safe for large R_s.
fn sigma_radial_factor(r: f64, rs: f64) -> f64 {
    if rs < 300.0 {
        rs * sinhc(r) / rs.sinh()
    } else {
        // sinh x = e^x (1 - e^{-2x}) / 2; the e^{r - R_s} factor keeps
        // everything representable
        let num_over_r = -(-2.0 * r).exp_m1() / r.max(f64::MIN_POSITIVE);
        let num_over_r = if r < 1e-8 { 2.0 } else { num_over_r };
        rs * (r - rs).exp() * num_over_r / (-(-2.0 * rs).exp_m1())
    }
}

fn check_grid(grid: &[f64], radius: f64) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain("empty radial grid".into()));
    }
    let mut prev = -1.0;
    for &r in grid {
        if r < 0.0 || r > radius * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "grid point {r} outside [0, {radius}]"
            )));
        }
        if r <= prev {
            return Err(Error::Domain("grid must be strictly increasing".into()));
        }
        prev = r;
    }
    Ok(())
}

/// Stationary nutrient profile
/// `sigma_s(r) = sigma_bar (1 - gamma/R_s) R_s sinh r / (r sinh R_s)`.
pub fn sigma_profile(state: &StationaryState, grid: &[f64]) -> Result<RadialProfile> {
    let rs = state.radius;
    check_grid(grid, rs)?;
    let p = &state.params;
    let boundary = p.sigma_bar * (1.0 - p.gamma / rs);
    let values = grid
        .iter()
        .map(|&r| boundary * sigma_radial_factor(r, rs))
        .collect();
    Ok(RadialProfile {
        grid: grid.to_vec(),
        values,
        kind: ProfileKind::Nutrient,
    })
}

/// Stationary pressure profile, Darcy pressure on the equilibrium ball:
/// `p_s(r) = -mu sigma_s(r) + mu sigma_tilde r^2 / 6 + p_bar
///           + mu sigma_bar (1 - gamma/R_s) - mu sigma_tilde R_s^2 / 6`.
pub fn pressure_profile(state: &StationaryState, grid: &[f64]) -> Result<RadialProfile> {
    let rs = state.radius;
    check_grid(grid, rs)?;
    let p = &state.params;
    let boundary = p.sigma_bar * (1.0 - p.gamma / rs);
    let offset = p.p_bar + p.mu * boundary - p.mu * p.sigma_tilde * rs * rs / 6.0;
    let values = grid
        .iter()
        .map(|&r| {
            let sigma = boundary * sigma_radial_factor(r, rs);
            -p.mu * sigma + p.mu * p.sigma_tilde * r * r / 6.0 + offset
        })
        .collect();
    Ok(RadialProfile {
        grid: grid.to_vec(),
        values,
        kind: ProfileKind::Pressure,
    })
}
