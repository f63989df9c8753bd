//! Defect and error bounds for a parameterised family of three-point
//! quadrature rules, specialised to integrands whose derivative power
//! `|f'|^q` is `(alpha, m)`-convex.
//!
//! The rule family is indexed by `theta, lambda` in `[0, 1]` and a scale
//! `m` in `(0, 1]`. On the interval `[m a, m b]` it blends the two
//! endpoint values with one interior node `m C`, `C = (1 - lambda) a +
//! lambda b`, and its *defect* is the rule value minus the integral mean:
//!
//! ```text
//! D = (1 - theta) (lambda f(m a) + (1 - lambda) f(m b)) + theta f(m C)
//!     - 1 / (m (b - a)) * integral of f over [m a, m b]
//! ```
//!
//! `(theta, lambda) = (2/3, 1/2)` is Simpson's rule, `(0, 1/2)` the
//! trapezoid rule, `(1, 1/2)` the midpoint rule. The crate computes `D`
//! against a high-accuracy adaptive integrator, re-derives it from `f'`
//! alone through a weighted-derivative identity, and caps `|D|` with two
//! closed-form routes — a power-mean bound for every `q >= 1` and a
//! Hölder bound for `q > 1` — each valid whenever `|f'|^q` is
//! `(alpha, m)`-convex. A sampling certifier checks that hypothesis and
//! produces a concrete witness when it fails.
//!
//! # Modules
//!
//! - [`model`] — validated parameter sets, reports, certificates.
//! - [`coefficients`] — the closed-form weight moments (`a1` … `a5`) and
//!   Hölder kernel integrals behind the bounds.
//! - [`integrator`] — adaptive Gauss–Kronrod (G7/K15) oracle with
//!   breakpoint support and honest non-convergence errors.
//! - [`convexity`] — grid-plus-random sampling certifier for
//!   `(alpha, m)`-convexity, plus a taxonomy classifier.
//! - [`bounds`] — defect, identity right-hand side, both bound routes,
//!   presets, the endpoint/midpoint sandwich for convex `f`, and the
//!   classical fourth-derivative Simpson cap.
//! - [`expr`] — the tiny expression language corpus files are written in.
//! - [`corpus`] — JSON corpus loading with derivative cross-checking.
//! - [`cli`] — the `quadbound` binary: `verify`, `sweep`, `preset`,
//!   `check-convexity`, `lemma`.
//!
//! # Example
//!
//! The trapezoid rule on `[0, 1]` applied to `f = x^2` (so `|f'| = 2x`
//! is convex and `q = 1, alpha = m = 1` applies) has defect exactly
//! `1/6`, and the power-mean route caps it at `1/4`:
//!
//! ```
//! use quadbound::bounds::{report, Preset};
//! use quadbound::model::ConvexityParams;
//!
//! let rp = Preset::Trapezoid.rule_params(1.0, 0.0, 1.0)?;
//! let cp = ConvexityParams::new(1.0, 1.0, 1.0)?;
//! let r = report(|x| x * x, |x| 2.0 * x, &rp, &cp)?;
//!
//! assert!((r.defect - 1.0 / 6.0).abs() < 1e-12);
//! assert!((r.bound_powermean - 0.25).abs() < 1e-12);
//! assert!(r.margin_powermean >= 0.0);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! # Runnable examples
//!
//! Each major capability has a program under `examples/`:
//!
//! | example | shows |
//! |---|---|
//! | `lemma_identity` | defect recomputed from `f'` alone; residuals at machine scale |
//! | `theorem_bounds` | both bound routes, branch selection, margins over `q` and `alpha` |
//! | `presets` | Simpson/trapezoid/midpoint shapes and their exact constants |
//! | `classical_simpson` | fourth-derivative cap, sharp at `x^4` |
//! | `hermite_hadamard` | midpoint/mean/endpoint sandwich for convex `f` |
//! | `convexity_certificates` | certified claims and a replayed refutation witness |
//! | `expressions` | parsing, precedence, located errors, derivative cross-check |
//! | `sweep_csv` | the sweep engine as a library call, CSV out |

pub mod bounds;
pub mod cli;
pub mod coefficients;
pub mod convexity;
pub mod corpus;
pub mod expr;
pub mod integrator;
pub mod model;
