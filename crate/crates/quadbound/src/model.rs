//! Core parameter types shared by every other module.
//!
//! Two small structs carry all the knobs:
//!
//! * [`RuleParams`] — the quadrature rule itself: interior weight `theta`,
//!   node placement `lambda`, scale `m`, and the base interval `[a, b]`.
//!   The rule mixes the endpoint values `f(m a)`, `f(m b)` and the interior
//!   value `f(m C)` with `C = (1 - lambda) a + lambda b`, and is compared
//!   against the mean of `f` over `[m a, m b]`.
//! * [`ConvexityParams`] — the regularity assumption on the derivative:
//!   `|f'|^q` is assumed `(alpha, m)`-convex. For `q > 1` the Hölder
//!   conjugate `p = q / (q - 1)` is derived once at construction.
//!
//! Constructors validate eagerly and return a [`ParamError`] naming the
//! offending field, so downstream code can assume the invariants hold.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A parameter fell outside its admissible range.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct ParamError(pub String);

impl ParamError {
    pub(crate) fn new(msg: impl Into<String>) -> Self {
        ParamError(msg.into())
    }
}

fn require_finite(name: &str, v: f64) -> Result<(), ParamError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(ParamError::new(format!("{name} must be finite, got {v}")))
    }
}

/// Parameters of a three-point quadrature rule on the scaled interval
/// `[m a, m b]`.
///
/// The rule's defect (see [`crate::bounds::defect`]) is
///
/// ```text
/// (1 - theta) * (lambda f(m a) + (1 - lambda) f(m b)) + theta f(m C)
///     - mean of f over [m a, m b]
/// ```
///
/// with interior node `C = (1 - lambda) a + lambda b`. Familiar rules are
/// recovered at `(theta, lambda) = (2/3, 1/2)` (Simpson), `(0, 1/2)`
/// (trapezoid) and `(1, 1/2)` (midpoint); see [`crate::bounds::Preset`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuleParams {
    theta: f64,
    lambda: f64,
    m: f64,
    a: f64,
    b: f64,
}

impl RuleParams {
    /// Validates and builds a parameter set.
    ///
    /// Requirements: `theta, lambda` in `[0, 1]`, `m` in `(0, 1]`,
    /// `0 <= a < b`, everything finite.
    pub fn new(theta: f64, lambda: f64, m: f64, a: f64, b: f64) -> Result<Self, ParamError> {
        require_finite("theta", theta)?;
        require_finite("lambda", lambda)?;
        require_finite("m", m)?;
        require_finite("a", a)?;
        require_finite("b", b)?;
        if !(0.0..=1.0).contains(&theta) {
            return Err(ParamError::new(format!(
                "theta must lie in [0,1], got {theta}"
            )));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(ParamError::new(format!(
                "lambda must lie in [0,1], got {lambda}"
            )));
        }
        if !(m > 0.0 && m <= 1.0) {
            return Err(ParamError::new("m must lie in (0,1]"));
        }
        if a < 0.0 {
            return Err(ParamError::new(format!("a must be nonnegative, got {a}")));
        }
        if a >= b {
            return Err(ParamError::new("a < b required"));
        }
        Ok(RuleParams {
            theta,
            lambda,
            m,
            a,
            b,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// The interior node `C = (1 - lambda) a + lambda b` before scaling.
    pub fn c(&self) -> f64 {
        (1.0 - self.lambda) * self.a + self.lambda * self.b
    }

    /// Left endpoint of the scaled interval, `m a`.
    pub fn ma(&self) -> f64 {
        self.m * self.a
    }

    /// Right endpoint of the scaled interval, `m b`.
    pub fn mb(&self) -> f64 {
        self.m * self.b
    }

    /// The scaled interior node `m C`.
    pub fn mc(&self) -> f64 {
        self.m * self.c()
    }

    /// Length of the scaled interval, `m (b - a)`. This is the prefactor
    /// appearing in every closed-form bound.
    pub fn scaled_len(&self) -> f64 {
        self.m * (self.b - self.a)
    }
}

/// Regularity assumption: `|f'|^q` is `(alpha, m)`-convex on `[0, b]`.
///
/// `alpha` in `[0, 1]`, `m` in `(0, 1]`, `q >= 1`. For `q > 1` the Hölder
/// conjugate `p = q / (q - 1)` is available through [`ConvexityParams::p`];
/// at `q = 1` there is no conjugate and the Hölder-route bound is undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityParams {
    alpha: f64,
    m: f64,
    q: f64,
    p: Option<f64>,
}

impl ConvexityParams {
    /// Validates and builds an assumption set.
    pub fn new(alpha: f64, m: f64, q: f64) -> Result<Self, ParamError> {
        require_finite("alpha", alpha)?;
        require_finite("m", m)?;
        require_finite("q", q)?;
        if !(0.0..=1.0).contains(&alpha) {
            return Err(ParamError::new(format!(
                "alpha must lie in [0,1], got {alpha}"
            )));
        }
        if !(m > 0.0 && m <= 1.0) {
            return Err(ParamError::new("m must lie in (0,1]"));
        }
        if q < 1.0 {
            return Err(ParamError::new(format!("q must satisfy q >= 1, got {q}")));
        }
        let p = if q > 1.0 { Some(q / (q - 1.0)) } else { None };
        Ok(ConvexityParams { alpha, m, q, p })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Hölder conjugate of `q`; `None` exactly when `q = 1`.
    pub fn p(&self) -> Option<f64> {
        self.p
    }
}

/// One convexity claim attached to a corpus function: `|f'|^q` is claimed
/// `(alpha, m)`-convex on `[0, domain_b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub alpha: f64,
    pub m: f64,
    pub q: f64,
}

impl Claim {
    /// Converts the raw claim into validated [`ConvexityParams`].
    pub fn to_params(&self) -> Result<ConvexityParams, ParamError> {
        ConvexityParams::new(self.alpha, self.m, self.q)
    }
}

/// A corpus entry: a named function given as expression source text, its
/// derivative, the domain bound `b` for convexity checks, claimed convexity
/// parameters, and optionally a sup bound on `|f''''|` over `[0, domain_b]`
/// (used by the classical fourth-derivative Simpson bound).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub name: String,
    pub f: String,
    pub fprime: String,
    pub domain_b: f64,
    pub claims: Vec<Claim>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f4_sup: Option<f64>,
}

/// Which of the two branch values attained the min in a power-mean bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerMeanBranch {
    B1,
    B2,
}

impl std::fmt::Display for PowerMeanBranch {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PowerMeanBranch::B1 => write!(fm, "b1"),
            PowerMeanBranch::B2 => write!(fm, "b2"),
        }
    }
}

/// Which of the two branch values attained the min in a Hölder bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HolderBranch {
    B3,
    B4,
}

impl std::fmt::Display for HolderBranch {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HolderBranch::B3 => write!(fm, "b3"),
            HolderBranch::B4 => write!(fm, "b4"),
        }
    }
}

/// The Hölder half of a [`BoundReport`]; present only for `q > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderReport {
    /// The assembled bound.
    pub bound: f64,
    /// First branch value (endpoint slots `m a`, `m b`).
    pub b3: f64,
    /// Second branch value (interior slot `m C`).
    pub b4: f64,
    /// Which branch attained the min.
    pub argmin: HolderBranch,
    /// `bound - |defect|`; nonnegative whenever the assumption really holds.
    pub margin: f64,
}

/// Everything both closed-form routes say about one rule/assumption pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    /// Signed defect of the rule against the oracle integral.
    pub defect: f64,
    /// Power-mean-route bound (defined for every `q >= 1`).
    pub bound_powermean: f64,
    /// First power-mean branch value.
    pub b1: f64,
    /// Second power-mean branch value.
    pub b2: f64,
    /// Which power-mean branch attained the min.
    pub pm_argmin: PowerMeanBranch,
    /// `bound_powermean - |defect|`.
    pub margin_powermean: f64,
    /// Hölder-route half; `None` exactly when `q = 1`.
    pub holder: Option<HolderReport>,
}

/// A sampled triple `(x, y, t)` violating the convexity inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    /// Violation `g(t x + m (1 - t) y) - t^alpha g(x) - m (1 - t^alpha) g(y)`
    /// at the witness triple.
    pub violation: f64,
}

/// Outcome of a sampling run of the convexity inequality.
///
/// A passing certificate means no sampled triple violated the inequality
/// beyond numerical slack — evidence, not proof. A failing certificate is a
/// genuine refutation: it carries a concrete [`Witness`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    pub passed: bool,
    /// Number of `(x, y, t)` triples evaluated.
    pub samples_checked: u64,
    /// Largest violation encountered (negative when the inequality held
    /// strictly everywhere).
    pub worst_violation: f64,
    /// Tolerance the violation was compared against,
    /// `1e-9 * max(1, sup sampled |g|)`.
    pub slack: f64,
    /// Present exactly when `passed` is false.
    pub witness: Option<Witness>,
}
