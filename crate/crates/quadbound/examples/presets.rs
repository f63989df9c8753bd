//! The three classical specialisations of the `(theta, lambda)` family
//! and their closed-form constants:
//!
//! * trapezoid: `theta = 0`, rule = endpoint average,
//! * midpoint: `theta = 1`, rule = centre value,
//! * simpson: `theta = 2/3`, rule = `(f(ma) + 4 f(mC) + f(mb)) / 6`.
//!
//! Run with `cargo run --example presets`.

use quadbound::bounds::{defect, report, Preset};
use quadbound::coefficients::{a1, weight_moments};
use quadbound::model::ConvexityParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = |x: f64| x * x;
    let fprime = |x: f64| 2.0 * x;
    let cp = ConvexityParams::new(1.0, 1.0, 1.0)?;

    println!("f = x^2 on [0, 1], m = 1, assumption (1, 1), q = 1:\n");
    for preset in Preset::ALL {
        let rp = preset.rule_params(1.0, 0.0, 1.0)?;
        let rep = report(f, fprime, &rp, &cp)?;
        println!(
            "{:>9}: theta = {:<18} defect = {:<22} bound = {:.12}",
            preset.name(),
            rp.theta(),
            format!("{:.12}", rep.defect),
            rep.bound_powermean,
        );
    }

    // Simpson's defect formula really is the classical 1/6, 4/6, 1/6
    // weighting: reproduce it by hand.
    let rp = Preset::Simpson.rule_params(1.0, 0.0, 1.0)?;
    let by_hand = (f(0.0) + 4.0 * f(0.5) + f(1.0)) / 6.0 - 1.0 / 3.0;
    let by_defect = defect(f, &rp)?;
    println!("\nsimpson weights check: (f(0) + 4 f(1/2) + f(1))/6 - mean = {by_hand:.15}");
    println!("defect functional gives                                   {by_defect:.15}");

    // The closed constants attached to the simpson preset: a1(2/3) is
    // 5/18, and with lambda^2 = 1/4 extracted, the alpha = 1 moments
    // produce 5/72, 29/648 and 2/81.
    let s = 2.0 / 3.0;
    let w = weight_moments(s, 1.0)?;
    println!("\nsimpson constants:");
    println!("  a1(2/3)      = {:<22} (= 5/18  = {})", a1(s)?, 5.0 / 18.0);
    println!("  a1(2/3)/4    = {:<22} (= 5/72  = {})", a1(s)? / 4.0, 5.0 / 72.0);
    println!("  a4(2/3,1)/4  = {:<22} (= 29/648 = {})", w.a4 / 4.0, 29.0 / 648.0);
    println!("  a5(2/3,1)/4  = {:<22} (= 2/81  = {})", w.a5 / 4.0, 2.0 / 81.0);

    // Scaling by m < 1 moves the rule onto [ma, mb] and rescales the
    // defect; presets accept any m in (0, 1].
    println!("\nsimpson at m = 1/2 (rule lives on [0, 1/2]):");
    let rp_half = Preset::Simpson.rule_params(0.5, 0.0, 1.0)?;
    let cp_half = ConvexityParams::new(1.0, 0.5, 1.0)?;
    let rep = report(f, fprime, &rp_half, &cp_half)?;
    println!(
        "  defect = {:.12}, power-mean bound = {:.12}",
        rep.defect, rep.bound_powermean
    );
    Ok(())
}
