//! The midpoint/mean/endpoint sandwich: for a convex function the value
//! at the interval midpoint never exceeds the interval mean, which never
//! exceeds the endpoint average. Run with
//! `cargo run --example hermite_hadamard`.

use quadbound::bounds::hermite_hadamard;
use quadbound::convexity::{check_alpha_m_convex, SamplingSpec};

type Integrand = fn(f64) -> f64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SamplingSpec::default();
    let functions: [(&str, Integrand); 3] = [
        ("x^2", |x| x * x),
        ("exp(x) - 1", |x| x.exp() - 1.0),
        ("x^(5/2)", |x| x.powf(2.5)),
    ];

    for (name, f) in functions {
        // The ordering is only promised for convex integrands, so pair
        // every check with a certificate (here: ordinary convexity on
        // [0, 2], which covers both intervals below).
        let cert = check_alpha_m_convex(f, 1.0, 1.0, 2.0, &spec)?;
        println!(
            "f = {name}: convexity on [0, 2] {} ({} samples, worst violation {:.2e})",
            if cert.passed { "certified" } else { "REFUTED" },
            cert.samples_checked,
            cert.worst_violation,
        );
        for (a, b) in [(0.0, 1.0), (0.5, 2.0)] {
            let (midpoint, mean, endpoints) = hermite_hadamard(f, a, b)?;
            let ordered = midpoint <= mean && mean <= endpoints;
            println!(
                "  [{a}, {b}]: f(mid) = {midpoint:.12} <= mean = {mean:.12} <= ends = \
                 {endpoints:.12}  {}",
                if ordered { "ok" } else { "VIOLATED" },
            );
        }
    }

    // For x^2 on [0, 1] the sandwich is exactly (1/4, 1/3, 1/2).
    let (l, m, r) = hermite_hadamard(|x| x * x, 0.0, 1.0)?;
    println!("\nx^2 on [0, 1] gives the exact triple (1/4, 1/3, 1/2):");
    println!("  ({l}, {m}, {r})");
    Ok(())
}
