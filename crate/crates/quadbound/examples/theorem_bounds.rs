//! The two closed-form error bounds. For `|f'|^q` `(alpha, m)`-convex on
//! `[0, b]`, the rule defect is bounded by
//!
//! * the power-mean route (any `q >= 1`):
//!   `m(b-a) a1(theta)^(1-1/q) min(B1, B2)`, and
//! * the Hölder route (`q > 1`):
//!   `m(b-a) holder_factor(theta, p)^(1/p) min(B3, B4)`.
//!
//! Each route offers two branch values because the convexity envelope can
//! be anchored either at the scaled endpoints or at the scaled interior
//! node; the crate always reports both and takes the smaller. Run with
//! `cargo run --example theorem_bounds`.

use quadbound::bounds::report;
use quadbound::convexity::{check_alpha_m_convex, SamplingSpec};
use quadbound::model::{ConvexityParams, RuleParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = |x: f64| x.powi(4);
    let fprime = |x: f64| 4.0 * x.powi(3);

    // Simpson weights, full scaling, |f'|^q assumed (1, 1)-convex
    // (i.e. ordinarily convex) with varying q.
    let rp = RuleParams::new(2.0 / 3.0, 0.5, 1.0, 0.0, 1.0)?;
    println!("f = x^4, simpson rule on [0, 1], assumption (alpha, m) = (1, 1):\n");
    println!(
        "{:>3} | {:>12} {:>12} {:>7} | {:>12} {:>7} | {:>12}",
        "q", "|defect|", "power-mean", "branch", "Hölder", "branch", "best margin"
    );
    for q in [1.0, 2.0, 3.0, 5.0, 10.0] {
        let cp = ConvexityParams::new(1.0, 1.0, q)?;
        // The hypothesis must hold for the bound to be meaningful:
        // |f'(x)|^q = (4x^3)^q is convex on [0, 1] for every q >= 1.
        let cert = check_alpha_m_convex(
            |x: f64| fprime(x).abs().powf(q),
            1.0,
            1.0,
            1.0,
            &SamplingSpec::default(),
        )?;
        assert!(cert.passed, "hypothesis must certify");

        let rep = report(f, fprime, &rp, &cp)?;
        let (holder, hbranch, best) = match rep.holder {
            Some(h) => (
                format!("{:.10}", h.bound),
                h.argmin.to_string(),
                rep.margin_powermean.min(h.margin),
            ),
            None => ("—".to_string(), "—".to_string(), rep.margin_powermean),
        };
        println!(
            "{q:>3} | {:>12.10} {:>12.10} {:>7} | {:>12} {:>7} | {best:>12.10}",
            rep.defect.abs(),
            rep.bound_powermean,
            rep.pm_argmin,
            holder,
            hbranch,
        );
    }

    // Tightening the assumption changes the bound: the same rule under
    // alpha-convexity with alpha < 1 reweights the envelope moments.
    println!("\nsame rule, q = 2, sweeping alpha at m = 1:");
    for alpha in [0.25, 0.5, 0.75, 1.0] {
        let cp = ConvexityParams::new(alpha, 1.0, 2.0)?;
        let cert = check_alpha_m_convex(
            |x: f64| fprime(x).abs().powi(2),
            alpha,
            1.0,
            1.0,
            &SamplingSpec::default(),
        )?;
        let rep = report(f, fprime, &rp, &cp)?;
        println!(
            "  alpha = {alpha:<5} power-mean {:.10}  Hölder {:.10}  (hypothesis {})",
            rep.bound_powermean,
            rep.holder.expect("q > 1").bound,
            if cert.passed { "certified" } else { "NOT certified" },
        );
    }
    Ok(())
}
