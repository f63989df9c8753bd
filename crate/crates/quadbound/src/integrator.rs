//! Adaptive numerical integration built on an embedded 7-point Gauss /
//! 15-point Kronrod pair.
//!
//! This is the oracle every closed-form quantity in the crate is tested
//! against, so it is deliberately boring: fixed tabulated nodes, bisection
//! with proportional tolerance splitting, a hard depth cap, and not a
//! single source of nondeterminism. Integrating the same closure over the
//! same interval twice returns bit-identical results.
//!
//! The error estimate for a panel is `|K15 - G7|`, the difference between
//! the embedded rules. A panel is accepted when that estimate meets its
//! share of the tolerance budget (half the budget per half on bisection);
//! panels that reach the depth or work cap are accepted with whatever
//! estimate they have. At the end the run converges exactly when the
//! summed estimates still meet the requested tolerance — otherwise the
//! caller gets a [`QuadError::NonConvergence`] carrying the best estimate
//! instead of a silently untrusted number.
//!
//! [`integrate_with_breakpoints`] pre-splits the interval at known interior
//! kinks. The weight `t -> |t - theta|` that shows up throughout the bound
//! derivations is the motivating case: splitting at `theta` turns a slowly
//! converging panel chase into two smooth integrals.

use crate::model::RuleParams;
use thiserror::Error;

/// Absolute tolerance used by the `*_with_tol`-less convenience wrappers.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Bisection depth cap. `2^-60` of the original interval is far below the
/// spacing of adjacent floats for any interval of interest, so hitting the
/// cap means the integrand, not the budget, is the problem.
pub const MAX_DEPTH: u32 = 60;

/// Work cap: once this many integrand evaluations have been spent, pending
/// panels are accepted with whatever estimate they have, which then fails
/// the final tolerance check. This turns integrands that are rough at
/// every scale (which would otherwise subdivide exponentially) into a
/// fast, explicit error.
pub const MAX_EVALS: u64 = 2_000_000;

/// Positive Kronrod abscissae for the (G7, K15) pair on `[-1, 1]`,
/// descending; the eighth node is the centre. Entries at odd indices are
/// also the Gauss-7 nodes. Table values are kept at published precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 7] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
];

/// Kronrod weights matching `XGK`, plus the centre weight last.
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Gauss-7 weights for the nodes at `XGK[1]`, `XGK[3]`, `XGK[5]`, centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Result of a successful adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    /// The integral estimate (Kronrod sum over all accepted panels).
    pub value: f64,
    /// Sum of per-panel `|K15 - G7|` estimates; at most the requested
    /// tolerance whenever `converged` is true.
    pub est_error: f64,
    /// Number of integrand evaluations performed.
    pub evaluations: u64,
    /// Whether `est_error` met the requested tolerance. Always true on
    /// the `Ok` path; non-convergence is reported as an error instead.
    pub converged: bool,
}

/// Why an integration could not produce a trusted value.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("integrand evaluated to a non-finite value at x = {x}")]
    NonFinite { x: f64 },
    #[error(
        "integral did not converge: best estimate {best} (estimated error \
         {est_error} after {evaluations} evaluations)"
    )]
    NonConvergence {
        best: f64,
        est_error: f64,
        evaluations: u64,
    },
    #[error("integration interval requires lo < hi, got [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("integration tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
}

/// One (G7, K15) evaluation over `[lo, hi]`: returns the Kronrod value and
/// the `|K15 - G7|` error estimate, already scaled to the interval.
fn gk15<F: Fn(f64) -> f64>(g: &F, lo: f64, hi: f64) -> Result<(f64, f64), QuadError> {
    let half = 0.5 * (hi - lo);
    let center = 0.5 * (lo + hi);
    let sample = |x: f64| -> Result<f64, QuadError> {
        let v = g(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite { x })
        }
    };
    let fc = sample(center)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, &xj) in XGK.iter().enumerate() {
        let dx = half * xj;
        let f1 = sample(center - dx)?;
        let f2 = sample(center + dx)?;
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Ok((kronrod * half, (kronrod - gauss).abs() * half))
}

#[derive(Default)]
struct Accumulator {
    value: f64,
    est_error: f64,
    evaluations: u64,
}

fn adapt<F: Fn(f64) -> f64>(
    g: &F,
    lo: f64,
    hi: f64,
    tol: f64,
    depth: u32,
    acc: &mut Accumulator,
) -> Result<(), QuadError> {
    let (value, err) = gk15(g, lo, hi)?;
    acc.evaluations += 15;
    if err <= tol || depth >= MAX_DEPTH || acc.evaluations >= MAX_EVALS {
        acc.value += value;
        acc.est_error += err;
        return Ok(());
    }
    let mid = 0.5 * (lo + hi);
    adapt(g, lo, mid, 0.5 * tol, depth + 1, acc)?;
    adapt(g, mid, hi, 0.5 * tol, depth + 1, acc)
}

fn check_inputs(lo: f64, hi: f64, tol: f64) -> Result<(), QuadError> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(QuadError::InvalidInterval { lo, hi });
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(QuadError::InvalidTolerance(tol));
    }
    Ok(())
}

fn finish(acc: Accumulator, tol: f64) -> Result<QuadResult, QuadError> {
    if acc.est_error <= tol {
        Ok(QuadResult {
            value: acc.value,
            est_error: acc.est_error,
            evaluations: acc.evaluations,
            converged: true,
        })
    } else {
        Err(QuadError::NonConvergence {
            best: acc.value,
            est_error: acc.est_error,
            evaluations: acc.evaluations,
        })
    }
}

/// Adaptively integrates `g` over `[lo, hi]` to absolute tolerance `tol`.
///
/// On success, `est_error <= tol`. When the depth or work cap forces
/// panels to stop subdividing while the summed estimates still exceed
/// `tol`, the call returns [`QuadError::NonConvergence`], which carries
/// the best available estimate rather than silently returning it.
pub fn integrate<F: Fn(f64) -> f64>(
    g: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<QuadResult, QuadError> {
    check_inputs(lo, hi, tol)?;
    let mut acc = Accumulator::default();
    adapt(&g, lo, hi, tol, 0, &mut acc)?;
    finish(acc, tol)
}

/// Like [`integrate`], but pre-splits `[lo, hi]` at the given interior
/// breakpoints (non-interior entries are ignored). Each resulting segment
/// receives a tolerance share proportional to its length, so the accepted
/// error estimates still sum to at most `tol`.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    g: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    tol: f64,
) -> Result<QuadResult, QuadError> {
    check_inputs(lo, hi, tol)?;
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&b| b > lo && b < hi)
        .collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();

    let mut acc = Accumulator::default();
    let total = hi - lo;
    let mut left = lo;
    for cut in cuts.into_iter().chain(std::iter::once(hi)) {
        let seg_tol = tol * (cut - left) / total;
        adapt(&g, left, cut, seg_tol, 0, &mut acc)?;
        left = cut;
    }
    finish(acc, tol)
}

/// The weighted-derivative side of the defect identity:
///
/// ```text
/// m (b - a) * [ -lambda^2   * ∫₀¹ (t - theta) f'(t·ma + (1-t)·mC) dt
///               + (1-lambda)^2 * ∫₀¹ (t - theta) f'(t·mb + (1-t)·mC) dt ]
/// ```
///
/// Both integrals are split at `t = theta`, the kink of the weight's
/// absolute value and the point where the sign information concentrates.
/// For differentiable `f` this equals the defect of the rule exactly;
/// [`lemma_residual`] measures how far the two oracle evaluations are from
/// honouring that.
pub fn lemma_rhs_with_tol<F: Fn(f64) -> f64>(
    fprime: F,
    rp: &RuleParams,
    tol: f64,
) -> Result<f64, QuadError> {
    let theta = rp.theta();
    let lambda = rp.lambda();
    let (ma, mb, mc) = (rp.ma(), rp.mb(), rp.mc());
    let i1 = integrate_with_breakpoints(
        |t| (t - theta) * fprime(t * ma + (1.0 - t) * mc),
        0.0,
        1.0,
        &[theta],
        tol,
    )?;
    let i2 = integrate_with_breakpoints(
        |t| (t - theta) * fprime(t * mb + (1.0 - t) * mc),
        0.0,
        1.0,
        &[theta],
        tol,
    )?;
    Ok(rp.scaled_len() * (-lambda * lambda * i1.value + (1.0 - lambda) * (1.0 - lambda) * i2.value))
}

/// [`lemma_rhs_with_tol`] at [`DEFAULT_TOL`].
pub fn lemma_rhs<F: Fn(f64) -> f64>(fprime: F, rp: &RuleParams) -> Result<f64, QuadError> {
    lemma_rhs_with_tol(fprime, rp, DEFAULT_TOL)
}

/// Absolute difference between the rule's defect (computed from `f` and
/// the oracle integral) and [`lemma_rhs_with_tol`] (computed from `f'`).
/// Small residuals certify the identity numerically; both sides are
/// evaluated at tolerance `tol`, so residuals are expected to sit within a
/// small multiple of it.
pub fn lemma_residual_with_tol<F, G>(
    f: F,
    fprime: G,
    rp: &RuleParams,
    tol: f64,
) -> Result<f64, QuadError>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let defect = crate::bounds::defect_with_tol(&f, rp, tol)?;
    let rhs = lemma_rhs_with_tol(&fprime, rp, tol)?;
    Ok((defect - rhs).abs())
}

/// [`lemma_residual_with_tol`] at [`DEFAULT_TOL`].
pub fn lemma_residual<F, G>(f: F, fprime: G, rp: &RuleParams) -> Result<f64, QuadError>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    lemma_residual_with_tol(f, fprime, rp, DEFAULT_TOL)
}
