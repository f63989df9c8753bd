//! The corpus expression language: one variable `x`, the constants `e`
//! and `pi`, the functions `exp`, `ln`, `sqrt`, `abs`, `pow`, and the
//! operators `+ - * / ^` with `^` binding tightest and associating to
//! the right. Run with `cargo run --example expressions`.

use quadbound::expr::{parse, validate_derivative};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Precedence: ^ over unary minus over * / over + -.
    for src in ["2+3*4^2", "2^3^2", "-x^2", "2^-3", "pow(x, 3) - x^3"] {
        let ast = parse(src)?;
        let value = ast.eval(1.5)?;
        println!("{src:<16} parses as {:<24} = {value} at x = 1.5", format!("{ast}"));
    }

    // Parse errors carry a byte offset into the source.
    for bad in ["pow(x)", "2e", "x +", "foo(x)"] {
        match parse(bad) {
            Ok(_) => println!("{bad:<16} unexpectedly parsed"),
            Err(e) => println!("{bad:<16} rejected: {e}"),
        }
    }

    // Evaluation errors are located too: ln of a negative number names
    // the offending subexpression's offset.
    let ast = parse("ln(x - 2)")?;
    match ast.eval(1.0) {
        Ok(v) => println!("ln(-1) = {v}?!"),
        Err(e) => println!("ln(x - 2) at x = 1 fails: {e}"),
    }

    // Corpus entries pair f with a hand-written f'; the loader replays
    // a centred difference against f' before accepting the pair.
    let f = parse("x^3")?;
    let good = parse("3*x^2")?;
    let bad = parse("2*x^2")?;
    let ok = validate_derivative(&f, &good, 2.0, 64);
    let not_ok = validate_derivative(&f, &bad, 2.0, 64);
    println!(
        "\nf = x^3 with f' = 3x^2: accepted = {} (worst relative deviation {:.2e})",
        ok.passed, ok.worst_rel_dev
    );
    println!(
        "f = x^3 with f' = 2x^2: accepted = {} (worst relative deviation {:.2e} at x = {:.4})",
        not_ok.passed, not_ok.worst_rel_dev, not_ok.worst_at
    );
    Ok(())
}
