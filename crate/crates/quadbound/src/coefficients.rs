//! Closed-form moments of the piecewise weight `t -> |t - theta|` against
//! the densities that `(alpha, m)`-convexity produces.
//!
//! Everything here is an explicit polynomial-style formula in `theta`,
//! `alpha`, `p`; no integration happens at runtime. The unit tests pin each
//! formula to its defining integral using the adaptive oracle:
//!
//! ```text
//! a1(theta)            = ∫₀¹ |t - theta| dt
//! a2(theta, alpha)     = ∫₀¹ |t - theta| t^alpha dt
//! a3(theta, alpha)     = ∫₀¹ |t - theta| (1 - t^alpha) dt
//! a4(theta, alpha)     = ∫₀¹ |t - (1-theta)| t^alpha dt
//! a5(theta, alpha)     = ∫₀¹ |t - (1-theta)| (1 - t^alpha) dt
//! holder_factor(theta, p) = ∫₀¹ |t - theta|^p dt
//! e_coeff(X, Y, alpha, m) = ∫₀¹ (t^alpha X + m (1 - t^alpha) Y) dt
//! ```
//!
//! Immediate consequences, also pinned by tests: `a2 + a3 = a1`,
//! `a4 + a5 = a1`, `a4(theta, ·) = a2(1-theta, ·)`, and
//! `holder_factor(theta, 1) = a1(theta)`.

use crate::model::ParamError;

fn check_unit(name: &str, v: f64) -> Result<(), ParamError> {
    if v.is_finite() && (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(ParamError::new(format!(
            "{name} must lie in [0,1], got {v}"
        )))
    }
}

/// First absolute moment of the weight: `a1(theta) = theta^2 - theta + 1/2`.
///
/// Symmetric about `theta = 1/2`, where it attains its minimum `1/4`; the
/// value at `theta = 2/3` is `5/18`.
pub fn a1(theta: f64) -> Result<f64, ParamError> {
    check_unit("theta", theta)?;
    Ok(theta * theta - theta + 0.5)
}

/// The four weighted moments entering the power-mean route, evaluated for
/// one `(theta, alpha)` pair. See the module docs for the integrals each
/// field represents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightMoments {
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
}

/// Evaluates all four weighted moments.
///
/// `a2` pairs with the density `t^alpha`, `a3` with its complement
/// `1 - t^alpha`; `a4` and `a5` are the same pair with the weight
/// reflected (`theta -> 1 - theta`). The pairs recombine to the plain
/// moment: `a2 + a3 = a4 + a5 = a1(theta)`.
pub fn weight_moments(theta: f64, alpha: f64) -> Result<WeightMoments, ParamError> {
    check_unit("theta", theta)?;
    check_unit("alpha", alpha)?;
    let ap1 = alpha + 1.0;
    let ap2 = alpha + 2.0;
    let r = 1.0 - theta;
    let a2 = 2.0 * theta.powf(ap2) / (ap1 * ap2) - theta / ap1 + 1.0 / ap2;
    let a3 =
        theta * theta - 2.0 * theta.powf(ap2) / (ap1 * ap2) - alpha * theta / ap1
            + alpha / (2.0 * ap2);
    let a4 = 2.0 * r.powf(ap2) / (ap1 * ap2) - r / ap1 + 1.0 / ap2;
    let a5 = r * r - 2.0 * r.powf(ap2) / (ap1 * ap2) - alpha * r / ap1 + alpha / (2.0 * ap2);
    Ok(WeightMoments { a2, a3, a4, a5 })
}

/// `p`-th absolute moment of the weight:
/// `(theta^(p+1) + (1-theta)^(p+1)) / (p+1)` for `p >= 1`.
///
/// At `p = 1` this collapses to [`a1`]. In the Hölder-route bound it
/// appears raised to the power `1/p` with `p` the conjugate of `q`.
pub fn holder_factor(theta: f64, p: f64) -> Result<f64, ParamError> {
    check_unit("theta", theta)?;
    if !(p.is_finite() && p >= 1.0) {
        return Err(ParamError::new(format!("p must satisfy p >= 1, got {p}")));
    }
    Ok((theta.powf(p + 1.0) + (1.0 - theta).powf(p + 1.0)) / (p + 1.0))
}

/// Mean of the convexity envelope against the two sampled values:
/// `e_coeff(X, Y, alpha, m) = (X + alpha m Y) / (alpha + 1)` for
/// `X, Y >= 0`, which is the unweighted integral of
/// `t^alpha X + m (1 - t^alpha) Y` over `[0, 1]`.
pub fn e_coeff(x_q: f64, y_q: f64, alpha: f64, m: f64) -> Result<f64, ParamError> {
    if !(x_q.is_finite() && x_q >= 0.0) {
        return Err(ParamError::new(format!(
            "x_q must be nonnegative, got {x_q}"
        )));
    }
    if !(y_q.is_finite() && y_q >= 0.0) {
        return Err(ParamError::new(format!(
            "y_q must be nonnegative, got {y_q}"
        )));
    }
    check_unit("alpha", alpha)?;
    if !(m.is_finite() && m > 0.0 && m <= 1.0) {
        return Err(ParamError::new("m must lie in (0,1]"));
    }
    Ok((x_q + alpha * m * y_q) / (alpha + 1.0))
}
