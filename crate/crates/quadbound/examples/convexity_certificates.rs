//! Sampling certificates for `(alpha, m)`-convexity:
//!
//! ```text
//! g(t x + m (1-t) y) <= t^alpha g(x) + m (1 - t^alpha) g(y)
//! ```
//!
//! for all `x, y` in `[0, b]` and `t` in `[0, 1]`. A certificate is a
//! non-refutation over a deterministic grid plus a seeded random stream;
//! a refutation carries a reproducible witness triple. Run with
//! `cargo run --example convexity_certificates`.

use quadbound::convexity::{check_alpha_m_convex, classify, SamplingSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SamplingSpec::default();

    // Ordinary convexity of x^2 is the point (alpha, m) = (1, 1) — but
    // x^2 is *not* (1/2, 1)-convex: the envelope with t^(1/2) weights
    // dips below the parabola. The certifier finds that.
    println!("g = x^2 on [0, 1]:");
    for (alpha, m) in [(1.0, 1.0), (0.5, 1.0), (0.5, 0.5), (1.0, 0.25)] {
        let cert = check_alpha_m_convex(|x: f64| x * x, alpha, m, 1.0, &spec)?;
        match &cert.witness {
            None => println!(
                "  (alpha={alpha}, m={m}): certified over {} samples (worst violation {:.2e})",
                cert.samples_checked, cert.worst_violation,
            ),
            Some(w) => println!(
                "  (alpha={alpha}, m={m}): REFUTED, witness x={}, y={}, t={} violates by {:.4e}",
                w.x, w.y, w.t, w.violation,
            ),
        }
    }

    // The witness is an ordinary (x, y, t) triple — anyone can replay it.
    let cert = check_alpha_m_convex(|x: f64| x * x, 0.5, 1.0, 1.0, &spec)?;
    if let Some(w) = &cert.witness {
        let g = |x: f64| x * x;
        let lhs = g(w.t * w.x + (1.0 - w.t) * w.y);
        let rhs = w.t.sqrt() * g(w.x) + (1.0 - w.t.sqrt()) * g(w.y);
        println!(
            "\nreplaying the (1/2, 1) witness: g(lhs point) = {lhs:.6} > envelope = {rhs:.6}"
        );
    }

    // `classify` probes the whole taxonomy: (0,0) increasing-style,
    // (alpha,0) alpha-starshaped, (1,0) starshaped, (1,m) m-convex,
    // (1,1) convex, (alpha,1) alpha-convex.
    println!("\nclassifying g = exp(x) - 1 on [0, 1] (probes 1/4, 1/2, 3/4):");
    let cls = classify(|x: f64| x.exp() - 1.0, 1.0, &[0.25, 0.5, 0.75], &spec)?;
    for (tag, cert) in &cls.entries {
        println!(
            "  {:<34} {}",
            tag.to_string(),
            if cert.passed {
                "certified".to_string()
            } else {
                format!("refuted (violation {:.3e})", cert.worst_violation)
            },
        );
    }
    println!(
        "  g(0) = {}; g(0) <= 0 holds, so the certified classes admit it as a member",
        cls.g_at_zero
    );
    Ok(())
}
