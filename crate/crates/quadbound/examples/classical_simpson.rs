//! The classical fourth-derivative bound for Simpson's rule, with `x^4`
//! as the function that makes it sharp, and a comparison against the
//! first-derivative convexity route on shrinking intervals.
//! Run with `cargo run --example classical_simpson`.

use quadbound::bounds::{bound_powermean, classical_simpson_bound, defect, Preset};
use quadbound::model::ConvexityParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Sharpness: for f = x^4 the defect of the Simpson preset on [0, 1]
    // equals sup|f''''| (b-a)^4 / 2880 = 24/2880 = 1/120 exactly.
    let rp = Preset::Simpson.rule_params(1.0, 0.0, 1.0)?;
    let d = defect(|x: f64| x.powi(4), &rp)?;
    let cap = classical_simpson_bound(24.0, 0.0, 1.0)?;
    println!("x^4 on [0, 1]:");
    println!("  |defect|               = {:.15}", d.abs());
    println!("  24 (b-a)^4 / 2880      = {cap:.15}");
    println!("  1/120                  = {:.15}", 1.0 / 120.0);
    println!("  gap                    = {:.3e}\n", (d.abs() - cap).abs());

    // exp(x) - 1 has sup|f''''| = e^2 on [0, 2]; the same cap applies on
    // every subinterval. Shrinking the interval shows the h^4 decay of
    // the fourth-derivative route next to the h^1-style decay of the
    // first-derivative convexity route (|f'| = e^x is convex, so q = 1,
    // alpha = m = 1 applies on all of [0, 2]).
    let f = |x: f64| x.exp() - 1.0;
    let fp = |x: f64| x.exp();
    let f4_sup = (2.0_f64).exp();
    let cp = ConvexityParams::new(1.0, 1.0, 1.0)?;
    println!("exp(x) - 1, Simpson preset on [0, h]:");
    println!(
        "  {:>8} {:>14} {:>18} {:>18}",
        "h", "|defect|", "4th-deriv bound", "convexity bound"
    );
    for k in 0..6 {
        let h = 1.0 / f64::powi(2.0, k);
        let rp = Preset::Simpson.rule_params(1.0, 0.0, h)?;
        let d = defect(f, &rp)?.abs();
        let classical = classical_simpson_bound(f4_sup, 0.0, h)?;
        let convexity = bound_powermean(fp, &rp, &cp)?;
        println!("  {h:>8.4} {d:>14.3e} {classical:>18.3e} {convexity:>18.3e}");
    }
    println!(
        "\nBoth are valid caps; the fourth-derivative route needs f'''' and \
         gains h^4, the convexity route needs only |f'|^q structure."
    );
    Ok(())
}
