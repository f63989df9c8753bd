//! The identity behind every bound in this crate: the defect of the
//! three-point rule equals a weighted integral of the derivative,
//!
//! ```text
//! D = m(b-a) [ -lambda^2 I1 + (1-lambda)^2 I2 ],
//! Ik = integral of (t - theta) f'(...) over [0, 1]
//! ```
//!
//! Both sides are computed independently — the left from `f` and the
//! oracle, the right from `f'` — so a small residual is numerical
//! evidence for the identity. Run with
//! `cargo run --example lemma_identity`.

use quadbound::bounds::defect;
use quadbound::integrator::{lemma_residual, lemma_rhs};
use quadbound::model::RuleParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = |x: f64| x.exp() - 1.0;
    let fprime = |x: f64| x.exp();

    println!("f = exp(x) - 1 on [0, 1], several (theta, lambda, m) rules:\n");
    println!(
        "{:>6} {:>7} {:>5} | {:>22} {:>22} {:>12}",
        "theta", "lambda", "m", "defect (from f)", "rhs (from f')", "residual"
    );
    for (theta, lambda, m) in [
        (0.0, 0.5, 1.0),
        (1.0, 0.5, 1.0),
        (2.0 / 3.0, 0.5, 1.0),
        (0.25, 0.75, 1.0),
        (2.0 / 3.0, 0.5, 0.5),
        (0.5, 0.25, 0.25),
    ] {
        let rp = RuleParams::new(theta, lambda, m, 0.0, 1.0)?;
        let lhs = defect(f, &rp)?;
        let rhs = lemma_rhs(fprime, &rp)?;
        let residual = lemma_residual(f, fprime, &rp)?;
        println!(
            "{:>6.3} {:>7.3} {:>5.2} | {:>22.15e} {:>22.15e} {:>12.3e}",
            theta, lambda, m, lhs, rhs, residual
        );
    }

    // Feeding a wrong derivative breaks the identity and the residual
    // reports it: with fprime scaled by 1/2 the right-hand side halves,
    // so the residual equals half the defect.
    let rp = RuleParams::new(0.0, 0.5, 1.0, 0.0, 1.0)?;
    let residual = lemma_residual(f, |x| 0.5 * x.exp(), &rp)?;
    let half_defect = 0.5 * defect(f, &rp)?.abs();
    println!(
        "\nwrong derivative (f' scaled by 1/2): residual {residual:.6} = |defect|/2 = \
         {half_defect:.6}"
    );
    Ok(())
}
