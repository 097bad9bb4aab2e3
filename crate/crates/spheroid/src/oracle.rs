//! Brute-force verification layer.
//!
//! Everything the closed-form spectrum claims is re-derived here the
//! slow way: the per-mode radial boundary-value problems are solved by
//! second-order finite differences on a cell-centered grid, the mode
//! profiles are compared pointwise, and the curvature linearization is
//! checked by Richardson-extrapolated directional differencing of the
//! full nonlinear curvature of a perturbed sphere.

use crate::error::{Error, Result};
use crate::special::{bessel_half_scaled, legendre_with_derivs};
use crate::spectrum::coefficients;
use crate::stationary::{ProfileKind, RadialProfile, StationaryState};

/// Thomas algorithm for a tridiagonal system. `lo[0]` and
/// `up[n-1]` are ignored.
fn solve_tridiagonal(lo: &[f64], diag: &[f64], up: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    if diag[0] == 0.0 {
        return Err(Error::Numerical("singular tridiagonal system".into()));
    }
    c[0] = up[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - lo[i] * c[i - 1];
        if denom == 0.0 {
            return Err(Error::Numerical("singular tridiagonal system".into()));
        }
        c[i] = up[i] / denom;
        d[i] = (rhs[i] - lo[i] * d[i - 1]) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    Ok(x)
}

/// Finite-difference solution of one per-mode BVP pair.
#[derive(Debug, Clone)]
pub struct ModeBvpSolution {
    pub k: u32,
    /// Cell centers r_i = (i + 1/2) h on (0, R_s).
    pub grid: Vec<f64>,
    /// Nutrient perturbation a_k(r).
    pub a: Vec<f64>,
    /// Pressure perturbation b_k(r).
    pub b: Vec<f64>,
    pub b_prime_at_rs: f64,
    /// b'(R_s) + c3 with unit boundary amplitude: the oracle eigenvalue.
    pub lambda_fd: f64,
}

/// Discretize u'' + (2/r) u' - k(k+1)/r^2 u - s u = rhs on a
/// cell-centered grid with n cells, Dirichlet value `bval` at r = R_s.
///
/// Conservative form (r^2 u')' keeps the r = 0 cell regular: the inner
/// face of the first cell sits at r = 0 where the flux coefficient r^2
/// vanishes identically. The outer boundary flux uses the one-sided
/// second-order formula through the boundary value and the last two
/// cells, which keeps the whole scheme O(h^2).
pub(crate) fn solve_radial_helmholtz(
    rs: f64,
    kk: f64,
    s: f64,
    n: usize,
    rhs_fn: impl Fn(usize) -> f64,
    bval: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let h = rs / n as f64;
    let grid: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * h).collect();
    let mut lo = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut up = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for i in 0..n {
        let r = grid[i];
        let r2 = r * r;
        let rp = (i as f64 + 1.0) * h; // outer face
        let rm = i as f64 * h; // inner face (zero for i = 0)
        let cp = rp * rp / (r2 * h * h);
        let cm = rm * rm / (r2 * h * h);
        lo[i] = cm;
        diag[i] = -(cp + cm + kk / r2 + s);
        up[i] = cp;
        rhs[i] = rhs_fn(i);
    }
    // outer flux through (bval, u_{n-1}, u_{n-2}):
    // u'(R_s) ~ (8 bval - 9 u_{n-1} + u_{n-2}) / (3h)
    let i = n - 1;
    let r2 = grid[i] * grid[i];
    let a_out = (n as f64 * h).powi(2) / (r2 * h); // rp^2 / (r^2 h)
    let b_in = ((n - 1) as f64 * h).powi(2) / (r2 * h);
    lo[i] = a_out / (3.0 * h) + b_in / h;
    diag[i] = -a_out * 3.0 / h - b_in / h - kk / r2 - s;
    up[i] = 0.0;
    rhs[i] -= a_out * 8.0 * bval / (3.0 * h);
    let u = solve_tridiagonal(&lo, &diag, &up, &rhs)?;
    Ok((grid, u))
}

/// Derivative at R_s from a quadratic through (R_s, bval) and the last
/// two cell centers.
fn boundary_derivative(rs: f64, grid: &[f64], u: &[f64], bval: f64) -> f64 {
    let n = u.len();
    let (x0, x1, x2) = (rs, grid[n - 1], grid[n - 2]);
    let (y0, y1, y2) = (bval, u[n - 1], u[n - 2]);
    y0 * (1.0 / (x0 - x1) + 1.0 / (x0 - x2))
        + y1 * (x0 - x2) / ((x1 - x0) * (x1 - x2))
        + y2 * (x0 - x1) / ((x2 - x0) * (x2 - x1))
}

/// Solve the degree-k mode BVP pair by finite differences and extract
/// the oracle eigenvalue lambda_fd = b'(R_s) + c3 (unit amplitude).
pub fn solve_mode_bvp(state: &StationaryState, k: u32, n_grid: usize) -> Result<ModeBvpSolution> {
    if n_grid < 64 {
        return Err(Error::Domain(format!(
            "n_grid must be >= 64, got {n_grid}"
        )));
    }
    let rs = state.radius;
    let c = coefficients(state);
    let kk = k as f64 * (k as f64 + 1.0);
    let a_boundary = c.c2 - c.c1 * kk;
    // a'' + (2/r) a' - kk/r^2 a = a
    let (grid, a) = solve_radial_helmholtz(rs, kk, 1.0, n_grid, |_| 0.0, a_boundary)?;
    // b'' + (2/r) b' - kk/r^2 b = -a
    let (_, b) = solve_radial_helmholtz(rs, kk, 0.0, n_grid, |i| -a[i], 0.0)?;
    let b_prime_at_rs = boundary_derivative(rs, &grid, &b, 0.0);
    let lambda_fd = b_prime_at_rs + c.c3;
    Ok(ModeBvpSolution {
        k,
        grid,
        a,
        b,
        b_prime_at_rs,
        lambda_fd,
    })
}

/// I_{k+1/2}(r) / I_{k+1/2}(rs) without overflow, via the scaled series.
fn bessel_half_normalized(k: u32, r: f64, rs: f64) -> Result<f64> {
    let (m_r, e_r) = bessel_half_scaled(k, r)?;
    let (m_rs, e_rs) = bessel_half_scaled(k, rs)?;
    Ok((m_r.ln() + e_r - m_rs.ln() - e_rs).exp())
}

/// The closed-form mode profiles (unit amplitude):
///
/// ```text
/// a_k(r) = [c2 - c1 k(k+1)] sqrt(R_s/r) I_{k+1/2}(r) / I_{k+1/2}(R_s)
/// b_k(r) = -[c2 - c1 k(k+1)] [ sqrt(R_s/r) I_{k+1/2}(r)/I_{k+1/2}(R_s) - (r/R_s)^k ]
/// ```
pub fn mode_profiles_closed_form(
    state: &StationaryState,
    k: u32,
    grid: &[f64],
) -> Result<(RadialProfile, RadialProfile)> {
    let rs = state.radius;
    let c = coefficients(state);
    let kk = k as f64 * (k as f64 + 1.0);
    let amp = c.c2 - c.c1 * kk;
    let mut a = Vec::with_capacity(grid.len());
    let mut b = Vec::with_capacity(grid.len());
    for &r in grid {
        if !(r > 0.0 && r <= rs * (1.0 + 1e-12)) {
            return Err(Error::Domain(format!(
                "mode profile grid point {r} outside (0, {rs}]"
            )));
        }
        let bessel_part = (rs / r).sqrt() * bessel_half_normalized(k, r, rs)?;
        a.push(amp * bessel_part);
        b.push(-amp * (bessel_part - (r / rs).powi(k as i32)));
    }
    Ok((
        RadialProfile {
            grid: grid.to_vec(),
            values: a,
            kind: ProfileKind::ModeA,
        },
        RadialProfile {
            grid: grid.to_vec(),
            values: b,
            kind: ProfileKind::ModeB,
        },
    ))
}

/// Mean curvature of the perturbed sphere r = R_s + rho(theta) for an
/// axisymmetric perturbation rho(theta) = sum_k rho_k P_k(cos theta),
/// evaluated at polar angle `theta`.
///
/// On the unit sphere, for axisymmetric rho:
/// `Delta_omega rho = rho_tt + cot(theta) rho_t` (poles: `2 rho_tt`),
/// `|grad rho|^2 = rho_t^2`, and
/// `grad|grad rho|^2 . grad rho = 2 rho_tt rho_t^2`.
pub fn curvature_axisymmetric(rs: f64, rho_coeffs: &[f64], theta: f64) -> Result<f64> {
    if rho_coeffs.is_empty() {
        return Ok(1.0 / rs);
    }
    let k_max = (rho_coeffs.len() - 1) as u32;
    let x = theta.cos();
    let sin_t = theta.sin();
    let (p, dp, ddp) = legendre_with_derivs(k_max, x.clamp(-1.0, 1.0))?;
    let mut rho = 0.0;
    let mut rho_t = 0.0;
    let mut rho_tt = 0.0;
    for (k, &ck) in rho_coeffs.iter().enumerate() {
        rho += ck * p[k];
        // d/dtheta P_k(cos theta) = -sin(theta) P_k'(x)
        rho_t += ck * (-sin_t * dp[k]);
        rho_tt += ck * (-x * dp[k] + sin_t * sin_t * ddp[k]);
    }
    let r = rs + rho;
    if r <= 0.0 {
        return Err(Error::Domain(format!(
            "perturbed radius non-positive: R_s + rho = {r}"
        )));
    }
    let at_pole = sin_t.abs() < 1e-12;
    let laplace_rho = if at_pole {
        2.0 * rho_tt
    } else {
        rho_tt + x / sin_t * rho_t
    };
    let grad2 = rho_t * rho_t;
    let denom = (r * r + grad2).sqrt();
    let first = (2.0 * r - laplace_rho) / (r * denom);
    let second = (2.0 * r * grad2 + 2.0 * rho_tt * grad2) / (2.0 * r * denom.powi(3));
    Ok(0.5 * (first + second))
}

/// Richardson-extrapolated directional derivative of the curvature at
/// the sphere in the direction of the degree-k Legendre mode, divided
/// by P_k(cos theta). Converges to -(1/R_s^2)(1 - k(k+1)/2).
pub fn curvature_mode_derivative(rs: f64, k: u32, theta: f64) -> Result<f64> {
    let pk = crate::special::legendre(k, theta.cos().clamp(-1.0, 1.0))?;
    if pk.abs() < 1e-3 {
        return Err(Error::Domain(format!(
            "P_{k}(cos theta) too small at theta = {theta} for a stable quotient"
        )));
    }
    let quotient = |eps: f64| -> Result<f64> {
        let mut coeffs = vec![0.0; k as usize + 1];
        coeffs[k as usize] = eps;
        let kappa = curvature_axisymmetric(rs, &coeffs, theta)?;
        Ok((kappa - 1.0 / rs) / (eps * pk))
    };
    let q1 = quotient(1e-3)?;
    let q2 = quotient(5e-4)?;
    let q3 = quotient(2.5e-4)?;
    // two Richardson levels in the step (expansion in eps)
    let r12 = 2.0 * q2 - q1;
    let r23 = 2.0 * q3 - q2;
    Ok((4.0 * r23 - r12) / 3.0)
}
