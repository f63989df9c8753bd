//! The quadrature defect and its two closed-form upper bounds.
//!
//! For rule parameters `(theta, lambda, m, a, b)` (see
//! [`RuleParams`]) the *defect* is
//!
//! ```text
//! D = (1-theta) (lambda f(ma) + (1-lambda) f(mb)) + theta f(mC)
//!     - (1 / (m (b-a))) ∫_{ma}^{mb} f(x) dx
//! ```
//!
//! When `|f'|^q` is `(alpha, m)`-convex on `[0, b]`, `|D|` is bounded by
//! two different closed forms, each the minimum of two branch values:
//!
//! * the **power-mean route** (any `q >= 1`):
//!   `m (b-a) a1(theta)^(1-1/q) min(B1, B2)`, where `B1`/`B2` blend the
//!   weighted moments `a2..a5` with `|f'|^q` sampled at the rule nodes
//!   (endpoint slots for `B1`, interior slot for `B2`);
//! * the **Hölder route** (only `q > 1`, with conjugate `p`):
//!   `m (b-a) holder_factor(theta, p)^(1/p) min(B3, B4)`, where `B3`/`B4`
//!   use the envelope means computed by [`coefficients::e_coeff`].
//!
//! Both bounds hold whenever the convexity assumption genuinely holds —
//! the `verify` pipeline checks exactly that, pairing each bound with a
//! sampling [`Certificate`](crate::model::Certificate) for the assumption.
//! Neither route dominates the other; reporting both branch values and the
//! argmin is the point of [`BoundReport`].

use crate::coefficients::{a1, e_coeff, holder_factor, weight_moments};
use crate::integrator::{integrate, QuadError, DEFAULT_TOL};
use crate::model::{
    BoundReport, ConvexityParams, HolderBranch, HolderReport, ParamError, PowerMeanBranch,
    RuleParams,
};
use thiserror::Error;

/// Failures while assembling a bound.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("derivative evaluated to a non-finite value at x = {x}")]
    NonFiniteDerivative { x: f64 },
}

/// The three classical `(theta, lambda)` choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `(2/3, 1/2)`: weights `1/6, 4/6, 1/6` at `ma`, midpoint, `mb`.
    Simpson,
    /// `(0, 1/2)`: the endpoint average; the interior node gets no weight.
    Trapezoid,
    /// `(1, 1/2)`: all weight on the midpoint.
    Midpoint,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Simpson, Preset::Trapezoid, Preset::Midpoint];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Simpson => "simpson",
            Preset::Trapezoid => "trapezoid",
            Preset::Midpoint => "midpoint",
        }
    }

    pub fn theta(&self) -> f64 {
        match self {
            Preset::Simpson => 2.0 / 3.0,
            Preset::Trapezoid => 0.0,
            Preset::Midpoint => 1.0,
        }
    }

    pub fn lambda(&self) -> f64 {
        0.5
    }

    /// Instantiates the preset on `[a, b]` with scale `m`.
    pub fn rule_params(&self, m: f64, a: f64, b: f64) -> Result<RuleParams, ParamError> {
        RuleParams::new(self.theta(), self.lambda(), m, a, b)
    }
}

impl std::str::FromStr for Preset {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "simpson" => Ok(Preset::Simpson),
            "trapezoid" => Ok(Preset::Trapezoid),
            "midpoint" => Ok(Preset::Midpoint),
            other => Err(ParamError::new(format!(
                "unknown preset `{other}`; expected simpson, trapezoid or midpoint"
            ))),
        }
    }
}

impl std::fmt::Display for Preset {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fm.write_str(self.name())
    }
}

fn node_value<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64, QuadError> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(QuadError::NonFinite { x })
    }
}

/// Signed defect of the rule against the oracle integral, at tolerance
/// `tol` for the integral.
pub fn defect_with_tol<F: Fn(f64) -> f64>(
    f: F,
    rp: &RuleParams,
    tol: f64,
) -> Result<f64, QuadError> {
    let theta = rp.theta();
    let lambda = rp.lambda();
    let rule = (1.0 - theta) * (lambda * node_value(&f, rp.ma())? + (1.0 - lambda) * node_value(&f, rp.mb())?)
        + theta * node_value(&f, rp.mc())?;
    let integral = integrate(&f, rp.ma(), rp.mb(), tol)?;
    Ok(rule - integral.value / rp.scaled_len())
}

/// [`defect_with_tol`] at [`DEFAULT_TOL`].
pub fn defect<F: Fn(f64) -> f64>(f: F, rp: &RuleParams) -> Result<f64, QuadError> {
    defect_with_tol(f, rp, DEFAULT_TOL)
}

fn check_m_agreement(rp: &RuleParams, cp: &ConvexityParams) -> Result<(), ParamError> {
    if rp.m() == cp.m() {
        Ok(())
    } else {
        Err(ParamError::new(format!(
            "rule and convexity assumption must share m, got {} and {}",
            rp.m(),
            cp.m()
        )))
    }
}

fn abs_pow<F: Fn(f64) -> f64>(fprime: &F, x: f64, q: f64) -> Result<f64, BoundsError> {
    let v = fprime(x);
    if v.is_finite() {
        Ok(v.abs().powf(q))
    } else {
        Err(BoundsError::NonFiniteDerivative { x })
    }
}

/// The two power-mean branch values `(B1, B2)`.
///
/// `B1` samples `|f'|^q` at the scaled endpoints `ma`, `mb` against the
/// moments `a2`, with the unscaled interior node `C` against `a3`; `B2`
/// swaps roles, sampling the scaled interior node `mC` against `a4` and
/// the unscaled endpoints `a`, `b` against `a5`. The unscaled slots are
/// where the `(alpha, m)`-convexity envelope is anchored, which is why
/// they appear multiplied by `m`.
pub fn b_pair_powermean<F: Fn(f64) -> f64>(
    fprime: F,
    rp: &RuleParams,
    cp: &ConvexityParams,
) -> Result<(f64, f64), BoundsError> {
    check_m_agreement(rp, cp)?;
    let q = cp.q();
    let m = cp.m();
    let w = weight_moments(rp.theta(), cp.alpha())?;
    let lam2 = rp.lambda() * rp.lambda();
    let mu2 = (1.0 - rp.lambda()) * (1.0 - rp.lambda());

    let d_ma = abs_pow(&fprime, rp.ma(), q)?;
    let d_mb = abs_pow(&fprime, rp.mb(), q)?;
    let d_c = abs_pow(&fprime, rp.c(), q)?;
    let d_mc = abs_pow(&fprime, rp.mc(), q)?;
    let d_a = abs_pow(&fprime, rp.a(), q)?;
    let d_b = abs_pow(&fprime, rp.b(), q)?;

    let inv_q = 1.0 / q;
    // The moments are nonnegative in exact arithmetic; clamp tiny negative
    // roundoff so the q-th roots stay real.
    let root = |s: f64| s.max(0.0).powf(inv_q);
    let b1 = lam2 * root(d_ma * w.a2 + m * d_c * w.a3) + mu2 * root(d_mb * w.a2 + m * d_c * w.a3);
    let b2 = lam2 * root(d_mc * w.a4 + m * d_a * w.a5) + mu2 * root(d_mc * w.a4 + m * d_b * w.a5);
    Ok((b1, b2))
}

/// Power-mean-route bound: `m (b-a) a1(theta)^(1-1/q) min(B1, B2)`.
pub fn bound_powermean<F: Fn(f64) -> f64>(
    fprime: F,
    rp: &RuleParams,
    cp: &ConvexityParams,
) -> Result<f64, BoundsError> {
    let (b1, b2) = b_pair_powermean(fprime, rp, cp)?;
    let lead = a1(rp.theta())?.powf(1.0 - 1.0 / cp.q());
    Ok(rp.scaled_len() * lead * b1.min(b2))
}

/// The two Hölder branch values `(B3, B4)`; requires `q > 1`.
///
/// Branch slots mirror the power-mean pair: `B3` anchors the envelope at
/// the unscaled interior node, `B4` at the unscaled endpoints.
pub fn b_pair_holder<F: Fn(f64) -> f64>(
    fprime: F,
    rp: &RuleParams,
    cp: &ConvexityParams,
) -> Result<(f64, f64), BoundsError> {
    check_m_agreement(rp, cp)?;
    if cp.q() <= 1.0 {
        return Err(ParamError::new("Hölder route requires q > 1").into());
    }
    let q = cp.q();
    let alpha = cp.alpha();
    let m = cp.m();
    let lam2 = rp.lambda() * rp.lambda();
    let mu2 = (1.0 - rp.lambda()) * (1.0 - rp.lambda());

    let d_ma = abs_pow(&fprime, rp.ma(), q)?;
    let d_mb = abs_pow(&fprime, rp.mb(), q)?;
    let d_c = abs_pow(&fprime, rp.c(), q)?;
    let d_mc = abs_pow(&fprime, rp.mc(), q)?;
    let d_a = abs_pow(&fprime, rp.a(), q)?;
    let d_b = abs_pow(&fprime, rp.b(), q)?;

    let e1 = e_coeff(d_ma, d_c, alpha, m)?;
    let e2 = e_coeff(d_mb, d_c, alpha, m)?;
    let e3 = e_coeff(d_mc, d_a, alpha, m)?;
    let e4 = e_coeff(d_mc, d_b, alpha, m)?;

    let inv_q = 1.0 / q;
    let b3 = lam2 * e1.powf(inv_q) + mu2 * e2.powf(inv_q);
    let b4 = lam2 * e3.powf(inv_q) + mu2 * e4.powf(inv_q);
    Ok((b3, b4))
}

/// Hölder-route bound:
/// `m (b-a) holder_factor(theta, p)^(1/p) min(B3, B4)` with `p` conjugate
/// to `q`; requires `q > 1`.
pub fn bound_holder<F: Fn(f64) -> f64>(
    fprime: F,
    rp: &RuleParams,
    cp: &ConvexityParams,
) -> Result<f64, BoundsError> {
    let (b3, b4) = b_pair_holder(&fprime, rp, cp)?;
    let p = cp
        .p()
        .expect("b_pair_holder already rejected q = 1, so the conjugate exists");
    let lead = holder_factor(rp.theta(), p)?.powf(1.0 / p);
    Ok(rp.scaled_len() * lead * b3.min(b4))
}

/// Assembles every applicable bound around an already-computed defect.
/// Callers that sweep many `(alpha, q)` assumptions over one rule can
/// compute the defect once and reuse it here; [`report_with_tol`] is the
/// one-shot wrapper. The Hölder half of the report is `None` exactly when
/// `q = 1`.
pub fn report_with_defect<G>(
    defect: f64,
    fprime: G,
    rp: &RuleParams,
    cp: &ConvexityParams,
) -> Result<BoundReport, BoundsError>
where
    G: Fn(f64) -> f64,
{
    check_m_agreement(rp, cp)?;
    let (b1, b2) = b_pair_powermean(&fprime, rp, cp)?;
    let lead = a1(rp.theta())?.powf(1.0 - 1.0 / cp.q());
    let bound_powermean = rp.scaled_len() * lead * b1.min(b2);
    let pm_argmin = if b1 <= b2 {
        PowerMeanBranch::B1
    } else {
        PowerMeanBranch::B2
    };
    let holder = if cp.q() > 1.0 {
        let (b3, b4) = b_pair_holder(&fprime, rp, cp)?;
        let p = cp.p().expect("q > 1");
        let lead = holder_factor(rp.theta(), p)?.powf(1.0 / p);
        let bound = rp.scaled_len() * lead * b3.min(b4);
        Some(HolderReport {
            bound,
            b3,
            b4,
            argmin: if b3 <= b4 {
                HolderBranch::B3
            } else {
                HolderBranch::B4
            },
            margin: bound - defect.abs(),
        })
    } else {
        None
    };
    Ok(BoundReport {
        defect,
        bound_powermean,
        b1,
        b2,
        pm_argmin,
        margin_powermean: bound_powermean - defect.abs(),
        holder,
    })
}

/// Runs the defect and every applicable bound for one rule/assumption
/// pair, at integral tolerance `tol`.
pub fn report_with_tol<F, G>(
    f: F,
    fprime: G,
    rp: &RuleParams,
    cp: &ConvexityParams,
    tol: f64,
) -> Result<BoundReport, BoundsError>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let defect = defect_with_tol(&f, rp, tol)?;
    report_with_defect(defect, fprime, rp, cp)
}

/// [`report_with_tol`] at [`DEFAULT_TOL`].
pub fn report<F, G>(
    f: F,
    fprime: G,
    rp: &RuleParams,
    cp: &ConvexityParams,
) -> Result<BoundReport, BoundsError>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    report_with_tol(f, fprime, rp, cp, DEFAULT_TOL)
}

/// The three quantities of the midpoint/mean/endpoint sandwich for `f` on
/// `[a, b]`:
///
/// ```text
/// f((a+b)/2)   <=   mean of f over [a, b]   <=   (f(a) + f(b)) / 2
/// ```
///
/// Returns `(left, mean, right)`; the ordering holds whenever `f` is
/// convex on `[a, b]`, and the caller is expected to pair this with a
/// convexity certificate before reading it as an inequality check.
pub fn hermite_hadamard_with_tol<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<(f64, f64, f64), QuadError> {
    let left = node_value(&f, 0.5 * (a + b))?;
    let right = 0.5 * (node_value(&f, a)? + node_value(&f, b)?);
    let mean = integrate(&f, a, b, tol)?.value / (b - a);
    Ok((left, mean, right))
}

/// [`hermite_hadamard_with_tol`] at [`DEFAULT_TOL`].
pub fn hermite_hadamard<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
) -> Result<(f64, f64, f64), QuadError> {
    hermite_hadamard_with_tol(f, a, b, DEFAULT_TOL)
}

/// The classical fourth-derivative bound for the Simpson defect on
/// `[a, b]`:
///
/// ```text
/// |D_simpson| <= f4_sup (b - a)^4 / 2880
/// ```
///
/// where `f4_sup` bounds `|f''''|` on `[a, b]`. The fourth power of the
/// interval length is what makes the bound sharp: `f(x) = x^4` on `[0, 1]`
/// attains it exactly (both sides equal `1/120`). Note the bound concerns
/// the *mean-normalised* defect, matching [`defect`] at `m = 1`.
pub fn classical_simpson_bound(f4_sup: f64, a: f64, b: f64) -> Result<f64, ParamError> {
    if !(f4_sup.is_finite() && f4_sup >= 0.0) {
        return Err(ParamError::new(format!(
            "f4_sup must be a nonnegative bound, got {f4_sup}"
        )));
    }
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(ParamError::new("a < b required"));
    }
    let len = b - a;
    Ok(f4_sup * len.powi(4) / 2880.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients;

    fn simpson01() -> RuleParams {
        Preset::Simpson.rule_params(1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn defect_vanishes_where_the_rule_is_exact() {
        // Affine functions are reproduced for lambda = 1/2 and every theta.
        for theta in [0.0, 1.0 / 3.0, 0.5, 1.0] {
            let rp = RuleParams::new(theta, 0.5, 1.0, 0.0, 1.0).unwrap();
            let d = defect(|x| 3.0 * x - 1.0, &rp).unwrap();
            assert!(d.abs() <= 1e-10, "theta = {theta}: defect {d}");
        }
        // The Simpson preset is exact on cubics.
        let d = defect(|x| x.powi(3) - x, &simpson01()).unwrap();
        assert!(d.abs() <= 1e-10);
    }

    #[test]
    fn defect_frozen_value_for_square_under_trapezoid() {
        let rp = Preset::Trapezoid.rule_params(1.0, 0.0, 1.0).unwrap();
        let d = defect(|x| x * x, &rp).unwrap();
        assert!((d - 1.0 / 6.0).abs() < 1e-10, "defect {d}");
    }

    #[test]
    fn defect_is_linear_in_f() {
        let rp = RuleParams::new(0.3, 0.25, 0.75, 0.5, 2.0).unwrap();
        let base = defect(|x| x.exp(), &rp).unwrap();
        for c in [-2.0, 0.5, 7.0] {
            // Adding an affine part shifts nothing: lambda != 1/2 still
            // cancels constants, and the scale c passes straight through.
            let d = defect(move |x| c * x.exp() + 4.0, &rp).unwrap();
            assert!(
                (d - c * base).abs() <= 1e-9 * c.abs().max(1.0),
                "c = {c}: {d} vs {}",
                c * base
            );
        }
    }

    #[test]
    fn presets_reproduce_their_textbook_weights() {
        let f = |x: f64| (x + 0.3).exp();
        for m in [0.5, 1.0] {
            let rp = Preset::Simpson.rule_params(m, 0.0, 1.0).unwrap();
            let mean = integrate(f, rp.ma(), rp.mb(), 1e-12).unwrap().value / rp.scaled_len();
            let direct = (f(rp.ma()) + 4.0 * f(rp.mc()) + f(rp.mb())) / 6.0 - mean;
            let d = defect(f, &rp).unwrap();
            assert!((d - direct).abs() < 1e-12, "simpson, m = {m}");

            let rp = Preset::Trapezoid.rule_params(m, 0.0, 1.0).unwrap();
            let direct = 0.5 * (f(rp.ma()) + f(rp.mb())) - mean;
            let d = defect(f, &rp).unwrap();
            assert!((d - direct).abs() < 1e-12, "trapezoid, m = {m}");

            let rp = Preset::Midpoint.rule_params(m, 0.0, 1.0).unwrap();
            let direct = f(rp.mc()) - mean;
            let d = defect(f, &rp).unwrap();
            assert!((d - direct).abs() < 1e-12, "midpoint, m = {m}");
        }
    }

    #[test]
    fn preset_parsing() {
        assert_eq!("simpson".parse::<Preset>().unwrap(), Preset::Simpson);
        assert_eq!("trapezoid".parse::<Preset>().unwrap(), Preset::Trapezoid);
        assert_eq!("midpoint".parse::<Preset>().unwrap(), Preset::Midpoint);
        let err = "gauss".parse::<Preset>().unwrap_err();
        assert!(err.to_string().contains("unknown preset `gauss`"));
    }

    #[test]
    fn powermean_branch_values_for_square_under_trapezoid() {
        // f(x) = x^2, q = 1, alpha = m = 1 under the trapezoid preset on
        // [0, 1]: both branches reduce to 1/4 and the bound is 1/4, which
        // dominates the defect 1/6.
        let rp = Preset::Trapezoid.rule_params(1.0, 0.0, 1.0).unwrap();
        let cp = ConvexityParams::new(1.0, 1.0, 1.0).unwrap();
        let (b1, b2) = b_pair_powermean(|x| 2.0 * x, &rp, &cp).unwrap();
        assert!((b1 - 0.25).abs() < 1e-12, "b1 = {b1}");
        assert!((b2 - 0.25).abs() < 1e-12, "b2 = {b2}");
        let bound = bound_powermean(|x| 2.0 * x, &rp, &cp).unwrap();
        assert!((bound - 0.25).abs() < 1e-12);
        let d = defect(|x| x * x, &rp).unwrap();
        assert!(d.abs() <= bound + 1e-9);
    }

    #[test]
    fn powermean_bound_vanishes_with_the_derivative() {
        let rp = simpson01();
        for q in [1.0, 2.0, 3.0] {
            let cp = ConvexityParams::new(1.0, 1.0, q).unwrap();
            let bound = bound_powermean(|_| 0.0, &rp, &cp).unwrap();
            assert_eq!(bound, 0.0, "q = {q}");
        }
    }

    #[test]
    fn powermean_branches_coincide_for_constant_derivative_magnitude() {
        // |f'| = 1 everywhere: both branches collapse to
        // (lambda^2 + (1-lambda)^2) * a1-split moments with equal totals.
        let cp = ConvexityParams::new(1.0, 1.0, 1.0).unwrap();
        for theta in [0.0, 0.25, 2.0 / 3.0, 1.0] {
            for lambda in [0.0, 0.3, 0.5, 1.0] {
                let rp = RuleParams::new(theta, lambda, 1.0, 0.0, 1.0).unwrap();
                let (b1, b2) = b_pair_powermean(|_| 1.0, &rp, &cp).unwrap();
                let weights = lambda * lambda + (1.0 - lambda) * (1.0 - lambda);
                let expect = weights * coefficients::a1(theta).unwrap();
                assert!((b1 - expect).abs() < 1e-12, "theta={theta}, lambda={lambda}");
                assert!((b2 - expect).abs() < 1e-12, "theta={theta}, lambda={lambda}");
            }
        }
    }

    #[test]
    fn holder_branch_values_frozen_for_square_under_simpson() {
        // f(x) = x^2, q = 2, alpha = m = 1 under the Simpson preset on
        // [0, 1]: e-means are (1/2, 5/2) on both branches, so
        // b3 = b4 = (sqrt(0.5) + sqrt(2.5)) / 4.
        let rp = simpson01();
        let cp = ConvexityParams::new(1.0, 1.0, 2.0).unwrap();
        let (b3, b4) = b_pair_holder(|x| 2.0 * x, &rp, &cp).unwrap();
        let expect = (0.5f64.sqrt() + 2.5f64.sqrt()) / 4.0;
        assert!((b3 - expect).abs() < 1e-12, "b3 = {b3}");
        assert!((b4 - expect).abs() < 1e-12, "b4 = {b4}");
        assert!((expect - 0.5720614028176844).abs() < 1e-15);
    }

    #[test]
    fn holder_route_requires_q_above_one() {
        let rp = simpson01();
        let cp = ConvexityParams::new(1.0, 1.0, 1.0).unwrap();
        let err = b_pair_holder(|x| 2.0 * x, &rp, &cp).unwrap_err();
        assert_eq!(err.to_string(), "Hölder route requires q > 1");
        let err = bound_holder(|x| 2.0 * x, &rp, &cp).unwrap_err();
        assert_eq!(err.to_string(), "Hölder route requires q > 1");
    }

    #[test]
    fn holder_bound_matches_the_pulled_in_simpson_prefactor() {
        // At (theta, lambda) = (2/3, 1/2) the leading factor can be pulled
        // inside: the bound equals
        // (m (b-a) / 12) ((2^(p+1) + 1) / (3 (p+1)))^(1/p) * min of the
        // unweighted e-sum branches. fp is the derivative of exp(x) - 1.
        let fp = |x: f64| x.exp();
        for (m, q) in [(1.0, 2.0), (0.5, 3.0), (1.0, 5.0)] {
            let rp = Preset::Simpson.rule_params(m, 0.0, 1.0).unwrap();
            let cp = ConvexityParams::new(1.0, m, q).unwrap();
            let p = cp.p().unwrap();
            let d = |x: f64| fp(x).abs().powf(q);
            let e1 = e_coeff(d(rp.ma()), d(rp.c()), 1.0, m).unwrap();
            let e2 = e_coeff(d(rp.mb()), d(rp.c()), 1.0, m).unwrap();
            let e3 = e_coeff(d(rp.mc()), d(rp.a()), 1.0, m).unwrap();
            let e4 = e_coeff(d(rp.mc()), d(rp.b()), 1.0, m).unwrap();
            let sum_a = e1.powf(1.0 / q) + e2.powf(1.0 / q);
            let sum_b = e3.powf(1.0 / q) + e4.powf(1.0 / q);
            let prefactor = (rp.scaled_len() / 12.0)
                * ((2f64.powf(p + 1.0) + 1.0) / (3.0 * (p + 1.0))).powf(1.0 / p);
            let expect = prefactor * sum_a.min(sum_b);
            let got = bound_holder(fp, &rp, &cp).unwrap();
            assert!(
                (got - expect).abs() < 1e-12,
                "m={m}, q={q}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn holder_bound_matches_the_pulled_in_endpoint_prefactors() {
        // For theta in {0, 1} the leading factor is (1/(p+1))^(1/p) and the
        // lambda^2 = 1/4 weights pull out to m (b-a) / 4.
        let fp = |x: f64| x.exp();
        for preset in [Preset::Trapezoid, Preset::Midpoint] {
            for (m, q) in [(1.0, 2.0), (0.25, 3.0)] {
                let rp = preset.rule_params(m, 0.0, 1.0).unwrap();
                let cp = ConvexityParams::new(1.0, m, q).unwrap();
                let p = cp.p().unwrap();
                let d = |x: f64| fp(x).abs().powf(q);
                let e1 = e_coeff(d(rp.ma()), d(rp.c()), 1.0, m).unwrap();
                let e2 = e_coeff(d(rp.mb()), d(rp.c()), 1.0, m).unwrap();
                let e3 = e_coeff(d(rp.mc()), d(rp.a()), 1.0, m).unwrap();
                let e4 = e_coeff(d(rp.mc()), d(rp.b()), 1.0, m).unwrap();
                let sum_a = e1.powf(1.0 / q) + e2.powf(1.0 / q);
                let sum_b = e3.powf(1.0 / q) + e4.powf(1.0 / q);
                let prefactor = (rp.scaled_len() / 4.0) * (1.0 / (p + 1.0)).powf(1.0 / p);
                let expect = prefactor * sum_a.min(sum_b);
                let got = bound_holder(fp, &rp, &cp).unwrap();
                assert!(
                    (got - expect).abs() < 1e-12,
                    "{preset}, m={m}, q={q}: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn powermean_bound_matches_the_pulled_in_simpson_constants() {
        // Same pull-in exercise on the power-mean route at alpha = m = 1:
        // (5/18)^(1-1/q) with the outer 1/4 absorbed becomes
        // (5/72)^(1-1/q) against moments a2/4 = 2/81 and a3/4 = 29/648.
        let fp = |x: f64| x.exp();
        let rp = simpson01();
        for q in [1.0, 2.0, 4.0] {
            let cp = ConvexityParams::new(1.0, 1.0, q).unwrap();
            let d = |x: f64| fp(x).abs().powf(q);
            let branch_a = (2.0 / 81.0 * d(rp.ma()) + 29.0 / 648.0 * d(rp.c())).powf(1.0 / q)
                + (2.0 / 81.0 * d(rp.mb()) + 29.0 / 648.0 * d(rp.c())).powf(1.0 / q);
            let branch_b = (29.0 / 648.0 * d(rp.mc()) + 2.0 / 81.0 * d(rp.a())).powf(1.0 / q)
                + (29.0 / 648.0 * d(rp.mc()) + 2.0 / 81.0 * d(rp.b())).powf(1.0 / q);
            let expect =
                rp.scaled_len() * (5.0f64 / 72.0).powf(1.0 - 1.0 / q) * branch_a.min(branch_b);
            let got = bound_powermean(fp, &rp, &cp).unwrap();
            assert!((got - expect).abs() < 1e-12, "q = {q}: {got} vs {expect}");
        }
    }

    #[test]
    fn report_combines_routes_consistently() {
        let rp = simpson01();
        let cp = ConvexityParams::new(1.0, 1.0, 2.0).unwrap();
        let r = report(|x| x * x, |x| 2.0 * x, &rp, &cp).unwrap();
        assert!((r.bound_powermean
            - rp.scaled_len() * a1(rp.theta()).unwrap().powf(0.5) * r.b1.min(r.b2))
        .abs()
            < 1e-15);
        let h = r.holder.expect("q = 2 has a Hölder half");
        assert!(h.bound > 0.0);
        assert!((r.margin_powermean - (r.bound_powermean - r.defect.abs())).abs() < 1e-15);
        assert!((h.margin - (h.bound - r.defect.abs())).abs() < 1e-15);
        assert!(r.defect.abs() <= r.bound_powermean + 1e-9);
        assert!(r.defect.abs() <= h.bound + 1e-9);

        let cp1 = ConvexityParams::new(1.0, 1.0, 1.0).unwrap();
        let r1 = report(|x| x * x, |x| 2.0 * x, &rp, &cp1).unwrap();
        assert!(r1.holder.is_none(), "no Hölder half at q = 1");
    }

    #[test]
    fn report_rejects_mismatched_m() {
        let rp = Preset::Simpson.rule_params(0.5, 0.0, 1.0).unwrap();
        let cp = ConvexityParams::new(1.0, 1.0, 2.0).unwrap();
        let err = report(|x| x * x, |x| 2.0 * x, &rp, &cp).unwrap_err();
        assert!(err.to_string().contains("must share m"));
        assert!(b_pair_powermean(|x| 2.0 * x, &rp, &cp).is_err());
        assert!(b_pair_holder(|x| 2.0 * x, &rp, &cp).is_err());
    }

    #[test]
    fn argmin_tags_point_at_the_smaller_branch() {
        // A strongly asymmetric derivative separates the branches.
        let rp = RuleParams::new(0.5, 0.2, 1.0, 0.0, 1.0).unwrap();
        let cp = ConvexityParams::new(1.0, 1.0, 2.0).unwrap();
        let r = report(|x| x.exp(), |x| x.exp(), &rp, &cp).unwrap();
        match r.pm_argmin {
            PowerMeanBranch::B1 => assert!(r.b1 <= r.b2),
            PowerMeanBranch::B2 => assert!(r.b2 < r.b1),
        }
        let h = r.holder.unwrap();
        match h.argmin {
            HolderBranch::B3 => assert!(h.b3 <= h.b4),
            HolderBranch::B4 => assert!(h.b4 < h.b3),
        }
    }

    #[test]
    fn dominance_smoke_grid_for_certified_assumptions() {
        // x^3 has |f'| = 3x^2 convex on [0, 1], so (1, 1, q) assumptions
        // genuinely hold and both bounds must dominate the defect.
        for q in [1.0, 2.0] {
            let cp = ConvexityParams::new(1.0, 1.0, q).unwrap();
            for theta in [0.0, 0.5, 2.0 / 3.0, 1.0] {
                for lambda in [0.0, 0.5, 2.0 / 3.0, 1.0] {
                    let rp = RuleParams::new(theta, lambda, 1.0, 0.0, 1.0).unwrap();
                    let r = report(|x| x.powi(3), |x| 3.0 * x * x, &rp, &cp).unwrap();
                    assert!(
                        r.defect.abs() <= r.bound_powermean + 1e-9,
                        "power-mean dominance fails at theta={theta}, lambda={lambda}, q={q}"
                    );
                    if let Some(h) = r.holder {
                        assert!(
                            r.defect.abs() <= h.bound + 1e-9,
                            "Hölder dominance fails at theta={theta}, lambda={lambda}, q={q}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn sandwich_frozen_values_for_square() {
        let (l, mid, r) = hermite_hadamard(|x| x * x, 0.0, 1.0).unwrap();
        assert!((l - 0.25).abs() < 1e-12);
        assert!((mid - 1.0 / 3.0).abs() < 1e-10);
        assert!((r - 0.5).abs() < 1e-12);
        assert!(l <= mid + 1e-10 && mid <= r + 1e-10);
    }

    #[test]
    fn sandwich_collapses_for_affine_functions() {
        let (l, mid, r) = hermite_hadamard(|x| 2.0 * x + 1.0, 0.25, 2.0).unwrap();
        assert!((l - mid).abs() < 1e-10);
        assert!((mid - r).abs() < 1e-10);
    }

    #[test]
    fn classical_fourth_derivative_bound() {
        // Sharpness witness: f(x) = x^4 on [0, 1] has Simpson defect
        // exactly 1/120, and the bound with f4_sup = 24 is 24/2880 = 1/120.
        let bound = classical_simpson_bound(24.0, 0.0, 1.0).unwrap();
        assert!((bound - 1.0 / 120.0).abs() < 1e-15);
        let d = defect(|x| x.powi(4), &simpson01()).unwrap();
        assert!((d.abs() - 1.0 / 120.0).abs() < 1e-10);
        assert!(d.abs() <= bound + 1e-9);

        // Cubics: f4_sup = 0 forces a (numerically) zero defect.
        let bound = classical_simpson_bound(0.0, 0.0, 1.0).unwrap();
        assert_eq!(bound, 0.0);

        // Quartic scaling in the interval length.
        let b1 = classical_simpson_bound(24.0, 0.0, 1.0).unwrap();
        let b2 = classical_simpson_bound(24.0, 0.0, 2.0).unwrap();
        assert!((b2 - 16.0 * b1).abs() < 1e-12);

        assert!(classical_simpson_bound(-1.0, 0.0, 1.0).is_err());
        assert_eq!(
            classical_simpson_bound(1.0, 1.0, 0.0).unwrap_err().to_string(),
            "a < b required"
        );
    }
}
