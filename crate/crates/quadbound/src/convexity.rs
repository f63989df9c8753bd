//! Sampling-based certification of `(alpha, m)`-convexity on `[0, b]`.
//!
//! A function `g` is `(alpha, m)`-convex on `[0, b]` when
//!
//! ```text
//! g(t x + m (1 - t) y)  <=  t^alpha g(x) + m (1 - t^alpha) g(y)
//! ```
//!
//! for all `x, y` in `[0, b]` and `t` in `[0, 1]`. The checker evaluates
//! this inequality on a deterministic inclusive grid over `(x, y, t)` plus
//! a seeded stream of random triples, and issues a [`Certificate`]:
//!
//! * **fail** is a refutation — the certificate carries a concrete
//!   [`Witness`] triple whose violation exceeds the slack;
//! * **pass** means no sampled triple violated the inequality; it is
//!   evidence of membership, not a proof.
//!
//! The comparison slack is `1e-9 * max(1, sup |g|)` over the grid samples,
//! so certificates scale with the size of the function rather than
//! penalising large ranges. Everything is deterministic for a fixed
//! [`SamplingSpec`]; growing the grid (keeping old points nested) or the
//! random stream can only surface more violations, never hide one.
//!
//! Two conventions worth spelling out: `t^alpha` at `t = 0, alpha = 0` is
//! taken as `1` (the IEEE `powf` convention), which makes `(0, 0)`-convexity
//! the "value at 0 never exceeds the value elsewhere" reading used by the
//! taxonomy in [`classify`]; and `m = 0` is admitted here — several classes
//! in the taxonomy live at `m = 0` even though quadrature rules require
//! `m > 0`.

use crate::model::{Certificate, ParamError, Witness};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Default seed for the random phase of the sampler.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// Sampling effort for one certification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingSpec {
    /// Points per axis of the deterministic `(x, y, t)` grid (inclusive of
    /// both endpoints), so the grid contributes `grid_points^3` triples.
    pub grid_points: usize,
    /// Number of additional uniformly random triples.
    pub random_triples: u64,
    /// Seed for the random phase.
    pub seed: u64,
}

impl Default for SamplingSpec {
    fn default() -> Self {
        SamplingSpec {
            grid_points: 64,
            random_triples: 10_000,
            seed: DEFAULT_SEED,
        }
    }
}

/// Failures while certifying.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConvexityError {
    #[error("function evaluated to a non-finite value at x = {x}")]
    NonFinite { x: f64 },
    #[error(transparent)]
    Param(#[from] ParamError),
}

fn finite(v: f64, x: f64) -> Result<f64, ConvexityError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ConvexityError::NonFinite { x })
    }
}

fn validate(alpha: f64, m: f64, b: f64, spec: &SamplingSpec) -> Result<(), ConvexityError> {
    if !(alpha.is_finite() && (0.0..=1.0).contains(&alpha)) {
        return Err(ParamError::new(format!("alpha must lie in [0,1], got {alpha}")).into());
    }
    if !(m.is_finite() && (0.0..=1.0).contains(&m)) {
        return Err(ParamError::new(format!("m must lie in [0,1], got {m}")).into());
    }
    if !(b.is_finite() && b > 0.0) {
        return Err(ParamError::new(format!("b must be positive, got {b}")).into());
    }
    if spec.grid_points < 2 {
        return Err(ParamError::new(format!(
            "grid must have at least 2 points per axis, got {}",
            spec.grid_points
        ))
        .into());
    }
    Ok(())
}

/// Certifies (or refutes) `(alpha, m)`-convexity of `g` on `[0, b]` by
/// sampling. See the module docs for semantics and determinism guarantees.
pub fn check_alpha_m_convex<G: Fn(f64) -> f64>(
    g: G,
    alpha: f64,
    m: f64,
    b: f64,
    spec: &SamplingSpec,
) -> Result<Certificate, ConvexityError> {
    validate(alpha, m, b, spec)?;
    let n = spec.grid_points;
    let last = (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| b * i as f64 / last).collect();
    let ts: Vec<f64> = (0..n).map(|i| i as f64 / last).collect();
    let gx: Vec<f64> = xs
        .iter()
        .map(|&x| finite(g(x), x))
        .collect::<Result<_, _>>()?;
    // Slack scales with the sampled magnitude of g, frozen before the
    // random phase so enlarging the random stream never loosens it.
    let scale = gx.iter().fold(1.0_f64, |s, &v| s.max(v.abs()));
    let slack = 1e-9 * scale;

    let mut worst = f64::NEG_INFINITY;
    let mut at = (0.0, 0.0, 0.0);
    let mut samples: u64 = 0;

    for &t in &ts {
        let ta = t.powf(alpha);
        let my = m * (1.0 - t);
        let mya = m * (1.0 - ta);
        for (i, &x) in xs.iter().enumerate() {
            let tx = t * x;
            let left = ta * gx[i];
            for (j, &y) in xs.iter().enumerate() {
                let u = tx + my * y;
                let gu = finite(g(u), u)?;
                let v = gu - left - mya * gx[j];
                samples += 1;
                if v > worst {
                    worst = v;
                    at = (x, y, t);
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..spec.random_triples {
        let x = b * rng.gen::<f64>();
        let y = b * rng.gen::<f64>();
        let t = rng.gen::<f64>();
        let gxv = finite(g(x), x)?;
        let gyv = finite(g(y), y)?;
        let u = t * x + m * (1.0 - t) * y;
        let gu = finite(g(u), u)?;
        let ta = t.powf(alpha);
        let v = gu - ta * gxv - m * (1.0 - ta) * gyv;
        samples += 1;
        if v > worst {
            worst = v;
            at = (x, y, t);
        }
    }

    let passed = worst <= slack;
    Ok(Certificate {
        passed,
        samples_checked: samples,
        worst_violation: worst,
        slack,
        witness: (!passed).then_some(Witness {
            x: at.0,
            y: at.1,
            t: at.2,
            violation: worst,
        }),
    })
}

/// Points of the `(alpha, m)` taxonomy probed by [`classify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassTag {
    /// `(0, 0)`: the value at any contraction `t x` never exceeds `g(x)`.
    Increasing,
    /// `(alpha, 0)` for a probe `alpha` in `(0, 1)`.
    AlphaStarshaped { alpha: f64 },
    /// `(1, 0)`: `g(t x) <= t g(x)`.
    Starshaped,
    /// `(1, m)` for a probe `m` in `(0, 1)`.
    MConvex { m: f64 },
    /// `(1, 1)`: ordinary convexity.
    Convex,
    /// `(alpha, 1)` for a probe `alpha` in `(0, 1)`.
    AlphaConvex { alpha: f64 },
}

impl ClassTag {
    /// The `(alpha, m)` pair this tag certifies.
    pub fn params(&self) -> (f64, f64) {
        match *self {
            ClassTag::Increasing => (0.0, 0.0),
            ClassTag::AlphaStarshaped { alpha } => (alpha, 0.0),
            ClassTag::Starshaped => (1.0, 0.0),
            ClassTag::MConvex { m } => (1.0, m),
            ClassTag::Convex => (1.0, 1.0),
            ClassTag::AlphaConvex { alpha } => (alpha, 1.0),
        }
    }
}

impl std::fmt::Display for ClassTag {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassTag::Increasing => write!(fm, "increasing"),
            ClassTag::AlphaStarshaped { alpha } => write!(fm, "alpha-starshaped(alpha={alpha})"),
            ClassTag::Starshaped => write!(fm, "starshaped"),
            ClassTag::MConvex { m } => write!(fm, "m-convex(m={m})"),
            ClassTag::Convex => write!(fm, "convex"),
            ClassTag::AlphaConvex { alpha } => write!(fm, "alpha-convex(alpha={alpha})"),
        }
    }
}

/// Result of probing the whole taxonomy for one function.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    /// One `(tag, certificate)` pair per probed taxonomy point, in probe
    /// order.
    pub entries: Vec<(ClassTag, Certificate)>,
    /// The sampled value `g(0)`.
    pub g_at_zero: f64,
    /// `g(0) <= 0` together with at least one passing certificate: the
    /// extra condition carving out the starshaped-with-nonpositive-origin
    /// cone inside each certified class.
    pub k_membership: bool,
}

impl Classification {
    /// Tags whose certificates passed.
    pub fn passing_tags(&self) -> Vec<ClassTag> {
        self.entries
            .iter()
            .filter(|(_, c)| c.passed)
            .map(|(t, _)| *t)
            .collect()
    }
}

/// Runs [`check_alpha_m_convex`] at every point of the taxonomy:
/// `(0,0)`, `(alpha,0)`, `(1,0)`, `(1,m)`, `(1,1)` and `(alpha,1)`, with
/// `alpha` and `m` drawn from the same `probes` list (entries outside
/// `(0, 1)` are skipped — the endpoints are already covered).
pub fn classify<G: Fn(f64) -> f64>(
    g: G,
    b: f64,
    probes: &[f64],
    spec: &SamplingSpec,
) -> Result<Classification, ConvexityError> {
    let interior: Vec<f64> = probes
        .iter()
        .copied()
        .filter(|&p| p > 0.0 && p < 1.0)
        .collect();
    let mut tags = vec![ClassTag::Increasing];
    tags.extend(
        interior
            .iter()
            .map(|&alpha| ClassTag::AlphaStarshaped { alpha }),
    );
    tags.push(ClassTag::Starshaped);
    tags.extend(interior.iter().map(|&m| ClassTag::MConvex { m }));
    tags.push(ClassTag::Convex);
    tags.extend(interior.iter().map(|&alpha| ClassTag::AlphaConvex { alpha }));

    let mut entries = Vec::with_capacity(tags.len());
    for tag in tags {
        let (alpha, m) = tag.params();
        let cert = check_alpha_m_convex(&g, alpha, m, b, spec)?;
        entries.push((tag, cert));
    }
    let g_at_zero = finite(g(0.0), 0.0)?;
    let k_membership = g_at_zero <= 0.0 && entries.iter().any(|(_, c)| c.passed);
    Ok(Classification {
        entries,
        g_at_zero,
        k_membership,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SamplingSpec {
        SamplingSpec {
            grid_points: 33,
            random_triples: 2_000,
            seed: DEFAULT_SEED,
        }
    }

    #[test]
    fn linear_function_is_convex() {
        let cert = check_alpha_m_convex(|x| x, 1.0, 1.0, 1.0, &SamplingSpec::default()).unwrap();
        assert!(cert.passed);
        assert!(cert.witness.is_none());
        assert_eq!(cert.samples_checked, 64 * 64 * 64 + 10_000);
        assert!(cert.worst_violation <= cert.slack);
    }

    #[test]
    fn concave_function_is_refuted_with_a_witness() {
        let cert =
            check_alpha_m_convex(|x| -x * x, 1.0, 1.0, 1.0, &SamplingSpec::default()).unwrap();
        assert!(!cert.passed);
        let w = cert.witness.expect("refutation must carry a witness");
        // The worst violation of midpoint concavity sits near x=0, y=1,
        // t=1/2 (or the mirrored triple), with violation about 1/4.
        assert!(w.violation > 0.2);
        assert_eq!(w.violation, cert.worst_violation);
        // The witness reproduces the reported violation from scratch.
        let g = |x: f64| -x * x;
        let lhs = g(w.t * w.x + (1.0 - w.t) * w.y);
        let rhs = w.t * g(w.x) + (1.0 - w.t) * g(w.y);
        assert_eq!(lhs - rhs, cert.worst_violation);
        assert!(lhs - rhs > cert.slack);
    }

    #[test]
    fn square_is_m_convex_but_not_alpha_convex_for_small_alpha() {
        let spec = small();
        let sq = |x: f64| x * x;
        assert!(check_alpha_m_convex(sq, 1.0, 1.0, 1.0, &spec).unwrap().passed);
        assert!(check_alpha_m_convex(sq, 1.0, 0.5, 1.0, &spec).unwrap().passed);
        // x^2 violates the (1/2, 1) inequality: near x=0, y=1, t=1/4 the
        // envelope sits at 1/2 while the function value is about 9/16.
        let cert = check_alpha_m_convex(sq, 0.5, 1.0, 1.0, &spec).unwrap();
        assert!(!cert.passed);
        assert!(cert.witness.unwrap().violation > 0.03);
    }

    #[test]
    fn certification_is_deterministic() {
        let spec = SamplingSpec {
            grid_points: 16,
            random_triples: 5_000,
            seed: 42,
        };
        let a = check_alpha_m_convex(|x| x.exp() - 1.0, 0.75, 1.0, 2.0, &spec).unwrap();
        let b = check_alpha_m_convex(|x| x.exp() - 1.0, 0.75, 1.0, 2.0, &spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn nested_grids_never_hide_violations() {
        let g = |x: f64| -(x - 0.3) * (x - 0.3);
        let coarse = SamplingSpec {
            grid_points: 33,
            random_triples: 1_000,
            seed: 7,
        };
        let fine = SamplingSpec {
            grid_points: 65,
            random_triples: 1_000,
            seed: 7,
        };
        let a = check_alpha_m_convex(g, 1.0, 1.0, 1.0, &coarse).unwrap();
        let b = check_alpha_m_convex(g, 1.0, 1.0, 1.0, &fine).unwrap();
        // 65 points refine 33 (both inclusive, spacing halved), so every
        // coarse triple is re-checked and the worst can only grow.
        assert!(b.worst_violation >= a.worst_violation);
    }

    #[test]
    fn m_zero_taxonomy_points_are_admitted() {
        let spec = small();
        // x + 1 increases, so contractions never beat the endpoint value.
        assert!(check_alpha_m_convex(|x| x + 1.0, 0.0, 0.0, 1.0, &spec)
            .unwrap()
            .passed);
        // 1 - x decreases: g(0) = 1 > g(1) = 0 refutes the (0,0) reading.
        assert!(!check_alpha_m_convex(|x| 1.0 - x, 0.0, 0.0, 1.0, &spec)
            .unwrap()
            .passed);
    }

    #[test]
    fn non_finite_samples_are_reported() {
        let err = check_alpha_m_convex(
            |x| if x > 0.9 { f64::NAN } else { x },
            1.0,
            1.0,
            1.0,
            &small(),
        )
        .unwrap_err();
        match err {
            ConvexityError::NonFinite { x } => assert!(x > 0.9),
            other => panic!("expected NonFinite, got {other:?}"),
        }
    }

    #[test]
    fn parameter_validation() {
        let spec = small();
        assert!(check_alpha_m_convex(|x| x, 1.5, 1.0, 1.0, &spec).is_err());
        assert!(check_alpha_m_convex(|x| x, 1.0, -0.1, 1.0, &spec).is_err());
        assert!(check_alpha_m_convex(|x| x, 1.0, 1.1, 1.0, &spec).is_err());
        assert!(check_alpha_m_convex(|x| x, 1.0, 1.0, 0.0, &spec).is_err());
        let tiny = SamplingSpec {
            grid_points: 1,
            ..spec
        };
        assert!(check_alpha_m_convex(|x| x, 1.0, 1.0, 1.0, &tiny).is_err());
    }

    #[test]
    fn classify_square() {
        let cls = classify(|x: f64| x * x, 1.0, &[0.25, 0.5], &small()).unwrap();
        let passing = cls.passing_tags();
        assert!(passing.contains(&ClassTag::Convex));
        assert!(passing.contains(&ClassTag::Starshaped));
        assert!(passing.contains(&ClassTag::Increasing));
        assert!(passing.contains(&ClassTag::MConvex { m: 0.5 }));
        assert!(passing.contains(&ClassTag::AlphaStarshaped { alpha: 0.25 }));
        // But x^2 is not alpha-convex for alpha < 1.
        assert!(!passing.contains(&ClassTag::AlphaConvex { alpha: 0.5 }));
        assert!(cls.k_membership, "g(0) = 0 and certificates pass");
    }

    #[test]
    fn classify_respects_the_origin_condition() {
        // x + 1 is convex but its value at 0 is positive.
        let cls = classify(|x: f64| x + 1.0, 1.0, &[0.5], &small()).unwrap();
        assert!(cls.passing_tags().contains(&ClassTag::Convex));
        assert_eq!(cls.g_at_zero, 1.0);
        assert!(!cls.k_membership);

        // exp(x) - 1 is convex with value 0 at the origin.
        let cls = classify(|x: f64| x.exp() - 1.0, 1.0, &[0.5], &small()).unwrap();
        assert!(cls.passing_tags().contains(&ClassTag::Convex));
        assert!(cls.k_membership);

        // -x^2 has g(0) = 0 but nothing certifies.
        let cls = classify(|x: f64| -x * x, 1.0, &[0.5], &small()).unwrap();
        assert!(cls.passing_tags().is_empty());
        assert!(!cls.k_membership);
    }

    #[test]
    fn probe_order_is_stable() {
        let cls = classify(|x: f64| x * x, 1.0, &[0.25, 0.5], &small()).unwrap();
        let tags: Vec<ClassTag> = cls.entries.iter().map(|(t, _)| *t).collect();
        assert_eq!(
            tags,
            vec![
                ClassTag::Increasing,
                ClassTag::AlphaStarshaped { alpha: 0.25 },
                ClassTag::AlphaStarshaped { alpha: 0.5 },
                ClassTag::Starshaped,
                ClassTag::MConvex { m: 0.25 },
                ClassTag::MConvex { m: 0.5 },
                ClassTag::Convex,
                ClassTag::AlphaConvex { alpha: 0.25 },
                ClassTag::AlphaConvex { alpha: 0.5 },
            ]
        );
    }
}
