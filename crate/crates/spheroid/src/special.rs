//! Modified Bessel functions of half-integer order and Legendre
//! polynomials.
//!
//! The spectrum of the linearized boundary-evolution operator is built
//! from the ratios `I_{k+3/2}(r) / I_{k+1/2}(r)`. Forward recurrence in
//! increasing order is unstable for `I`, so the ratio is evaluated
//! directly by a Lentz-style continued fraction, which stays accurate
//! for orders up to ~1e4 and arguments up to ~1e3. The functions
//! themselves are evaluated by the ascending series, which has all
//! positive terms and therefore no cancellation.

use crate::error::{Error, Result};

/// ln Γ(m + 3/2) for integer m ≥ 0, via Γ(3/2) = √π / 2 and the
/// functional equation. Exact up to rounding, no Lanczos needed.
fn ln_gamma_half(m: u32) -> f64 {
    let mut acc = 0.5 * std::f64::consts::PI.ln() - std::f64::consts::LN_2;
    for i in 1..=m as u64 {
        acc += (i as f64 + 0.5).ln();
    }
    acc
}

/// I_{m+1/2}(r) in scaled form: returns `(mantissa, ln_scale)` with the
/// function value equal to `mantissa * exp(ln_scale)`. Usable beyond the
/// overflow range of f64.
pub fn bessel_half_scaled(m: u32, r: f64) -> Result<(f64, f64)> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!(
            "bessel_half requires r > 0, got {r}"
        )));
    }
    // leading term (r/2)^(m+1/2) / Γ(m+3/2), carried in log space
    let mut ln_scale = (m as f64 + 0.5) * (r / 2.0).ln() - ln_gamma_half(m);
    let quarter_r2 = 0.25 * r * r;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for j in 0..500u32 {
        term *= quarter_r2 / ((j as f64 + 1.0) * (m as f64 + j as f64 + 1.5));
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
        if sum > 1e250 {
            let ln = sum.ln();
            ln_scale += ln;
            term /= sum;
            sum = 1.0;
        }
    }
    Ok((sum, ln_scale))
}

/// I_{m+1/2}(r), the modified Bessel function of order m + 1/2.
///
/// Returns the unscaled value; overflows to infinity for arguments past
/// the f64 range (use [`bessel_half_scaled`] there).
pub fn bessel_half(m: u32, r: f64) -> Result<f64> {
    let (mant, ln_scale) = bessel_half_scaled(m, r)?;
    Ok((mant.ln() + ln_scale).exp())
}

/// The ratio I_{k+3/2}(r) / I_{k+1/2}(r), evaluated by the continued
/// fraction built on the downward recurrence
/// `I_{nu-1} - I_{nu+1} = (2 nu / r) I_nu`:
///
/// ```text
/// I_{nu+1}/I_nu = 1 / (2(nu+1)/r + 1 / (2(nu+2)/r + ...))
/// ```
///
/// Always in (0, 1) range issues aside; strictly increasing in `r` and
/// tends to `r / (2k+3)` as `r -> 0`.
pub fn bessel_ratio(k: u32, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!(
            "bessel_ratio requires r > 0, got {r}"
        )));
    }
    let nu = k as f64 + 0.5;
    // modified Lentz with b0 = 0
    let tiny = 1e-300;
    let mut f = tiny;
    let mut c = f;
    let mut d = 0.0;
    let max_iter = 1_000_000u64;
    for i in 1..=max_iter {
        let b = 2.0 * (nu + i as f64) / r;
        d = b + d;
        if d == 0.0 {
            d = tiny;
        }
        c = b + 1.0 / c;
        if c == 0.0 {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            return Ok(f);
        }
    }
    Err(Error::Numerical(format!(
        "bessel_ratio continued fraction did not converge (k={k}, r={r})"
    )))
}

/// Legendre polynomial P_k(x) by the three-term recurrence.
pub fn legendre(k: u32, x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "legendre requires |x| <= 1, got {x}"
        )));
    }
    let mut p_prev = 1.0;
    if k == 0 {
        return Ok(p_prev);
    }
    let mut p = x;
    for n in 1..k {
        let n = n as f64;
        let p_next = ((2.0 * n + 1.0) * x * p - n * p_prev) / (n + 1.0);
        p_prev = p;
        p = p_next;
    }
    Ok(p)
}

/// P_k(x), P_k'(x), P_k''(x) for k = 0..=k_max.
///
/// Derivatives come from `P'_{k+1} = P'_{k-1} + (2k+1) P_k` (and the
/// same relation one level up for P''), which is regular at x = ±1
/// unlike the (1-x²)-divided forms.
pub fn legendre_with_derivs(k_max: u32, x: f64) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "legendre_with_derivs requires |x| <= 1, got {x}"
        )));
    }
    let n = k_max as usize + 1;
    let mut p = vec![0.0; n];
    let mut dp = vec![0.0; n];
    let mut ddp = vec![0.0; n];
    p[0] = 1.0;
    if n > 1 {
        p[1] = x;
        dp[1] = 1.0;
    }
    for k in 1..k_max as usize {
        let kf = k as f64;
        p[k + 1] = ((2.0 * kf + 1.0) * x * p[k] - kf * p[k - 1]) / (kf + 1.0);
        dp[k + 1] = dp[k - 1] + (2.0 * kf + 1.0) * p[k];
        ddp[k + 1] = ddp[k - 1] + (2.0 * kf + 1.0) * dp[k];
    }
    Ok((p, dp, ddp))
}
