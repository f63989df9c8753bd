//! The acceptance gate: ten numbered criteria covering the closed-form
//! constants, the defect identity, both bound routes over the full stock
//! grid, the coefficient oracle, the classical checks, the convexity
//! certifier and the expression parser. Each test prints one
//! `criterion N: PASS/FAIL` line (visible under `--nocapture`).

use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use quadbound::bounds::{self, Preset};
use quadbound::cli::{self, SweepGrid, SweepRow};
use quadbound::coefficients::{a1, e_coeff, weight_moments};
use quadbound::convexity::{check_alpha_m_convex, SamplingSpec};
use quadbound::corpus::{demo_corpus, LoadedFunction};
use quadbound::expr;
use quadbound::integrator::integrate_with_breakpoints;
use quadbound::model::{ConvexityParams, RuleParams};

fn conclude(n: u32, desc: &str, ok: bool, detail: String) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("criterion {n}: {verdict} - {desc} ({detail})");
    assert!(ok, "criterion {n} failed: {detail}");
}

/// Rows of the full stock grid over the demo corpus, computed once and
/// shared by the dominance criteria.
fn stock_rows() -> &'static [SweepRow] {
    static ROWS: OnceLock<Vec<SweepRow>> = OnceLock::new();
    ROWS.get_or_init(|| {
        let fns = demo_corpus();
        let grid = SweepGrid::default();
        cli::run_cells(&fns, &grid)
            .expect("the stock sweep computes")
            .rows
    })
}

fn demo_by_name<'c>(fns: &'c [LoadedFunction], name: &str) -> &'c LoadedFunction {
    fns.iter()
        .find(|f| f.name() == name)
        .unwrap_or_else(|| panic!("demo corpus has `{name}`"))
}

#[test]
fn criterion_01_closed_form_corollary_constants() {
    let tol = 1e-12;
    let a1_s = a1(2.0 / 3.0).unwrap();
    let w = weight_moments(2.0 / 3.0, 1.0).unwrap();
    let checks = [
        (a1_s, 5.0 / 18.0, "a1(2/3) = 5/18"),
        (0.25 * a1_s, 5.0 / 72.0, "a1(2/3)/4 = 5/72"),
        (0.25 * w.a4, 29.0 / 648.0, "a4(2/3,1)/4 = 29/648"),
        (0.25 * w.a5, 2.0 / 81.0, "a5(2/3,1)/4 = 2/81"),
    ];
    let worst = checks
        .iter()
        .map(|(got, want, _)| (got - want).abs())
        .fold(0.0f64, f64::max);
    conclude(
        1,
        "corollary constants 5/18, 5/72, 29/648, 2/81 reproduced",
        worst <= tol,
        format!("worst deviation {worst:.3e}, tolerance {tol:.0e}"),
    );
}

#[test]
fn criterion_02_defect_identity_residuals() {
    let fns = demo_corpus();
    let grid = SweepGrid {
        thetas: vec![0.0, 0.25, 0.5, 2.0 / 3.0, 1.0],
        lambdas: vec![0.0, 0.25, 0.5, 2.0 / 3.0, 1.0],
        ms: vec![0.25, 0.5, 1.0],
        alphas: vec![1.0],
        qs: vec![1.0],
        ..SweepGrid::default()
    };
    let cells = cli::base_cells(&fns, &grid).expect("identity cells compute");
    let max = cells.iter().fold(0.0f64, |acc, c| acc.max(c.residual));
    conclude(
        2,
        "weighted-derivative identity over 375 cells",
        cells.len() == 375 && max <= 1e-8,
        format!("{} cells, max residual {max:.3e}, limit 1e-8", cells.len()),
    );
}

#[test]
fn criterion_03_power_mean_dominance_on_the_stock_grid() {
    let rows: Vec<&SweepRow> = stock_rows()
        .iter()
        .filter(|r| r.certified && r.q <= 3.0)
        .collect();
    let violations = rows
        .iter()
        .filter(|r| r.report.margin_powermean < -1e-9)
        .count();
    conclude(
        3,
        "|defect| <= power-mean bound + 1e-9 on certified cells, q in {1,2,3}",
        !rows.is_empty() && violations == 0,
        format!("{} certified cells, {violations} violations", rows.len()),
    );
}

#[test]
fn criterion_04_holder_dominance_on_the_stock_grid() {
    let rows: Vec<&SweepRow> = stock_rows()
        .iter()
        .filter(|r| r.certified && r.q > 1.0)
        .collect();
    let violations = rows
        .iter()
        .filter(|r| {
            r.report
                .holder
                .expect("q > 1 rows carry the Hölder half")
                .margin
                < -1e-9
        })
        .count();
    conclude(
        4,
        "|defect| <= Hölder bound + 1e-9 on certified cells, q in {2,3,5}",
        !rows.is_empty() && violations == 0,
        format!("{} certified cells, {violations} violations", rows.len()),
    );
}

#[test]
fn criterion_05_coefficients_match_their_defining_integrals() {
    // The weight moments integrate t^alpha against |t - theta|; the
    // substitution t = u^4 turns the alpha < 1 endpoint singularity of
    // the derivative into a polynomial-smooth integrand for the oracle.
    let oracle_tol = 1e-12;
    let moment_t4 = |alpha: f64, at: f64| -> f64 {
        let g = move |u: f64| {
            let t = u.powi(4);
            4.0 * u.powi(3) * t.powf(alpha) * (t - at).abs()
        };
        integrate_with_breakpoints(g, 0.0, 1.0, &[at.powf(0.25)], oracle_tol)
            .expect("moment oracle converges")
            .value
    };

    let grid: Vec<f64> = (0..21).map(|i| i as f64 / 20.0).collect();
    let mut worst_oracle = 0.0f64;
    let mut worst_identity = 0.0f64;
    for &theta in &grid {
        let base = a1(theta).unwrap();
        for &alpha in &grid {
            let w = weight_moments(theta, alpha).unwrap();
            worst_oracle = worst_oracle
                .max((w.a2 - moment_t4(alpha, theta)).abs())
                .max((w.a4 - moment_t4(alpha, 1.0 - theta)).abs());
            worst_identity = worst_identity
                .max((w.a2 + w.a3 - base).abs())
                .max((w.a4 + w.a5 - base).abs());
            let r = weight_moments(1.0 - theta, alpha).unwrap();
            worst_identity = worst_identity
                .max((w.a4 - r.a2).abs())
                .max((w.a5 - r.a3).abs());
        }
    }
    // The envelope average behind the Hölder route: integrate the
    // (alpha, m)-convex upper envelope directly.
    for &alpha in &grid {
        for (x_q, y_q, m) in [(1.0, 0.7, 1.0), (0.3, 2.0, 0.25)] {
            let closed = e_coeff(x_q, y_q, alpha, m).unwrap();
            let g = move |u: f64| {
                let t = u.powi(4);
                let ta = t.powf(alpha);
                4.0 * u.powi(3) * (ta * x_q + m * (1.0 - ta) * y_q)
            };
            let numeric = integrate_with_breakpoints(g, 0.0, 1.0, &[], oracle_tol)
                .expect("envelope oracle converges")
                .value;
            worst_oracle = worst_oracle.max((closed - numeric).abs());
        }
    }
    conclude(
        5,
        "closed-form moments and envelope average equal their integrals",
        worst_oracle <= 1e-9 && worst_identity <= 1e-12,
        format!(
            "worst oracle deviation {worst_oracle:.3e} (limit 1e-9), worst identity deviation \
             {worst_identity:.3e} (limit 1e-12)"
        ),
    );
}

#[test]
fn criterion_06_classical_simpson_sharpness_at_x4() {
    let fns = demo_corpus();
    let quart = demo_by_name(&fns, "quart");
    let rp = Preset::Simpson.rule_params(1.0, 0.0, 1.0).unwrap();
    let defect = bounds::defect(quart.f(), &rp).unwrap();
    let bound = bounds::classical_simpson_bound(24.0, 0.0, 1.0).unwrap();
    let ok = (defect.abs() - 1.0 / 120.0).abs() <= 1e-10 && (bound - 1.0 / 120.0).abs() <= 1e-10;
    conclude(
        6,
        "x^4 attains the fourth-derivative Simpson bound 1/120 exactly",
        ok,
        format!("|defect| = {:.12}, bound = {bound:.12}", defect.abs()),
    );
}

#[test]
fn criterion_07_midpoint_mean_endpoint_ordering() {
    let fns = demo_corpus();
    let spec = SamplingSpec::default();
    let mut ok = true;
    let mut detail = String::new();
    for f in &fns {
        let cert = check_alpha_m_convex(f.f(), 1.0, 1.0, 2.0, &spec).unwrap();
        if !cert.passed {
            ok = false;
            detail = format!("`{}` failed its convexity certificate", f.name());
            break;
        }
        for (a, b) in [(0.0, 1.0), (0.5, 2.0)] {
            let (left, mean, right) = bounds::hermite_hadamard(f.f(), a, b).unwrap();
            if !(left <= mean + 1e-9 && mean <= right + 1e-9) {
                ok = false;
                detail = format!(
                    "`{}` violates the ordering on [{a}, {b}]: {left} / {mean} / {right}",
                    f.name()
                );
            }
        }
    }
    if ok {
        let sq = demo_by_name(&fns, "sq");
        let (left, mean, right) = bounds::hermite_hadamard(sq.f(), 0.0, 1.0).unwrap();
        let worst = (left - 0.25)
            .abs()
            .max((mean - 1.0 / 3.0).abs())
            .max((right - 0.5).abs());
        ok = worst <= 1e-10;
        detail = format!(
            "all 5 functions ordered on [0,1] and [1/2,2]; x^2 triple deviates by {worst:.3e}"
        );
    }
    conclude(
        7,
        "midpoint <= mean <= endpoint average for certified-convex functions",
        ok,
        detail,
    );
}

#[test]
fn criterion_08_trapezoid_worked_instance() {
    let fns = demo_corpus();
    let sq = demo_by_name(&fns, "sq");
    let rp = RuleParams::new(0.0, 0.5, 1.0, 0.0, 1.0).unwrap();
    let cp = ConvexityParams::new(1.0, 1.0, 1.0).unwrap();
    let report = bounds::report(sq.f(), sq.fprime(), &rp, &cp).unwrap();
    let tol = 1e-10;
    let ok = (report.defect - 1.0 / 6.0).abs() <= tol
        && (report.b1 - 0.25).abs() <= tol
        && (report.b2 - 0.25).abs() <= tol
        && (report.bound_powermean - 0.25).abs() <= tol;
    conclude(
        8,
        "x^2 trapezoid instance: defect 1/6, b1 = b2 = bound = 1/4",
        ok,
        format!(
            "defect {:.12}, b1 {:.12}, b2 {:.12}, bound {:.12}",
            report.defect, report.b1, report.b2, report.bound_powermean
        ),
    );
}

#[test]
fn criterion_09_convexity_checker_verdicts_and_determinism() {
    let spec = SamplingSpec::default();
    let neg_sq = |x: f64| -x * x;
    let first = check_alpha_m_convex(neg_sq, 1.0, 1.0, 1.0, &spec).unwrap();
    let second = check_alpha_m_convex(neg_sq, 1.0, 1.0, 1.0, &spec).unwrap();
    let mut ok = !first.passed && first == second;
    let mut detail;
    match &first.witness {
        Some(w) => {
            // The witness must reproduce: recompute the definition gap at
            // the recorded triple.
            let lhs = neg_sq(w.t * w.x + (1.0 - w.t) * w.y);
            let rhs = w.t * neg_sq(w.x) + (1.0 - w.t) * neg_sq(w.y);
            let gap = lhs - rhs;
            ok = ok && (gap - w.violation).abs() <= 1e-12 && gap > first.slack;
            detail = format!(
                "-x^2 refuted, witness (x={}, y={}, t={}) reproduces violation {:.3e}",
                w.x, w.y, w.t, w.violation
            );
        }
        None => {
            ok = false;
            detail = "refutation carried no witness".to_string();
        }
    }
    for (name, g) in [
        ("x", (|x: f64| x) as fn(f64) -> f64),
        ("x^2", |x: f64| x * x),
        ("x^3", |x: f64| x * x * x),
    ] {
        let cert = check_alpha_m_convex(g, 1.0, 1.0, 1.0, &spec).unwrap();
        if !cert.passed {
            ok = false;
            detail = format!("`{name}` unexpectedly refuted");
        }
    }
    conclude(
        9,
        "certifier refutes -x^2 with a reproducible witness, passes x, x^2, x^3, deterministic",
        ok,
        detail,
    );
}

#[test]
fn criterion_10_parser_goldens_and_fuzz() {
    let eval_at = |src: &str, x: f64| -> f64 {
        let ast = expr::parse(src).unwrap();
        expr::eval(&ast, x).unwrap()
    };
    let goldens_ok = eval_at("2+3*4^2", 0.0) == 50.0
        && eval_at("2^3^2", 0.0) == 512.0
        && eval_at("-x^2", 3.0) == -9.0
        && eval_at("2^-3", 0.0) == 0.125
        && eval_at("pow(2, 10)", 0.0) == 1024.0;

    // Fuzz: no panic on arbitrary input, and Display round-trips whatever
    // parses. Two populations: token soup (drives the parser deep) and
    // raw unicode (drives the lexer).
    let fuzz = |strategy: BoxedStrategy<String>, cases: u32| {
        let mut runner = TestRunner::new(Config {
            cases,
            ..Config::default()
        });
        runner
            .run(&strategy, |src| {
                prop_assume!(src.len() <= 4096);
                if let Ok(ast) = expr::parse(&src) {
                    let _ = expr::eval(&ast, 0.7);
                    let printed = format!("{ast}");
                    let reparsed = expr::parse(&printed).map_err(|e| {
                        TestCaseError::fail(format!("`{printed}` failed to reparse: {e}"))
                    })?;
                    prop_assert_eq!(&reparsed, &ast, "round-trip changed `{}`", printed);
                }
                Ok(())
            })
            .map_err(|e| format!("{e}"))
    };
    let tokens = prop::sample::select(vec![
        "x", "pi", "e", "1", "2.5", "3e2", ".5", "+", "-", "*", "/", "^", "(", ")", ",", "pow",
        "exp", "ln", "sqrt", "abs", " ",
    ])
    .prop_map(str::to_string);
    let soup = prop::collection::vec(tokens, 0..40)
        .prop_map(|v| v.concat())
        .boxed();
    let unicode = prop::collection::vec(any::<char>(), 0..128)
        .prop_map(String::from_iter)
        .boxed();
    let soup_result = fuzz(soup, 5_000);
    let unicode_result = fuzz(unicode, 5_000);
    let ok = goldens_ok && soup_result.is_ok() && unicode_result.is_ok();
    conclude(
        10,
        "precedence goldens hold; 10k-case fuzz runs without a crash",
        ok,
        format!(
            "goldens {goldens_ok}, token soup {:?}, unicode {:?}",
            soup_result.err().unwrap_or_default(),
            unicode_result.err().unwrap_or_default()
        ),
    );
}
