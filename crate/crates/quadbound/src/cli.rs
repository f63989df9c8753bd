//! Command-line front end: corpus ingestion, verification campaigns,
//! parameter sweeps, and report emission.
//!
//! Five subcommands share one corpus/grid vocabulary:
//!
//! * `verify` — certify corpus claims, check the midpoint/mean/endpoint
//!   ordering for certified-convex functions, drive the defect identity
//!   residuals, and confirm that every certified cell respects both error
//!   bounds. Exit status 1 when a mathematical check fails.
//! * `sweep` — emit one CSV row per `(function, theta, lambda, alpha, m,
//!   q)` cell, byte-deterministic for a fixed corpus, grid and seed.
//! * `preset` — evaluate one named rule (`simpson`, `trapezoid`,
//!   `midpoint`) and print the closed-form corollary constants next to the
//!   assembled bounds.
//! * `check-convexity` — certify or refute `(alpha, m)`-convexity of an
//!   ad-hoc expression, optionally classifying it against the whole
//!   parameter taxonomy.
//! * `lemma` — run only the defect identity residuals over the grid.
//!
//! Exit statuses: `0` all checks pass, `1` a mathematical check failed,
//! `2` usage or I/O error. Reports go to standard output (or `--out`);
//! diagnostics and warnings go to standard error.

use std::collections::HashMap;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::{self, Preset};
use crate::coefficients;
use crate::convexity::{self, SamplingSpec, DEFAULT_SEED};
use crate::corpus::{self, CorpusError, LoadedFunction};
use crate::expr;
use crate::integrator::{self, DEFAULT_TOL};
use crate::model::{BoundReport, ConvexityParams, ParamError, RuleParams};

/// Additive slack for every dominance comparison `|defect| <= bound`:
/// both sides carry oracle and rounding error of this order.
pub const DOMINANCE_SLACK: f64 = 1e-9;

/// The identity residual limit is this multiple of the oracle tolerance
/// (both sides of the identity are themselves integrals at that
/// tolerance).
pub const RESIDUAL_LIMIT_FACTOR: f64 = 100.0;

/// Additive slack for the midpoint/mean/endpoint ordering check.
pub const ORDERING_SLACK: f64 = 1e-9;

/// The exact CSV column list produced by `sweep`.
pub const CSV_HEADER: [&str; 17] = [
    "name",
    "theta",
    "lambda",
    "alpha",
    "m",
    "q",
    "defect",
    "bound_pm",
    "b1",
    "b2",
    "pm_argmin",
    "bound_holder",
    "b3",
    "b4",
    "h_argmin",
    "lemma_residual",
    "certified",
];

/// Anything that should stop a run with exit status 2 (usage or I/O).
/// Mathematical check failures are not errors; they set exit status 1 via
/// the report functions.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("write error: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
    /// A cell computation failed (oracle non-convergence, non-finite
    /// values); the message names the function and cell.
    #[error("{0}")]
    Compute(String),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn compute_error(name: &str, context: &str, err: impl std::fmt::Display) -> CliError {
    CliError::Compute(format!("function `{name}`, {context}: {err}"))
}

/// The cartesian sweep: parameter lists, the base interval, the oracle
/// tolerance and the certifier seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub thetas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub ms: Vec<f64>,
    pub qs: Vec<f64>,
    pub a: f64,
    pub b: f64,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SweepGrid {
    /// The stock campaign grid: every preset's theta plus the quartile
    /// points, all taxonomy-relevant alpha and m values, and q covering
    /// both bound routes.
    fn default() -> Self {
        SweepGrid {
            thetas: vec![0.0, 0.25, 0.5, 2.0 / 3.0, 0.75, 1.0],
            lambdas: vec![0.0, 0.25, 0.5, 2.0 / 3.0, 0.75, 1.0],
            alphas: vec![0.25, 0.5, 0.75, 1.0],
            ms: vec![0.25, 0.5, 1.0],
            qs: vec![1.0, 2.0, 3.0, 5.0],
            a: 0.0,
            b: 1.0,
            tol: DEFAULT_TOL,
            seed: DEFAULT_SEED,
        }
    }
}

impl SweepGrid {
    /// Checks emptiness, parameter ranges and the interval; the error
    /// string is ready for exit-status-2 reporting.
    pub fn validate(&self) -> Result<(), String> {
        fn list(name: &str, vs: &[f64], lo: f64, hi: f64, lo_open: bool) -> Result<(), String> {
            if vs.is_empty() {
                return Err(format!("empty sweep: no values for `{name}`"));
            }
            for &v in vs {
                let above = if lo_open { v > lo } else { v >= lo };
                if !(v.is_finite() && above && v <= hi) {
                    let bracket = if lo_open { '(' } else { '[' };
                    return Err(format!(
                        "grid value {name} = {v} lies outside {bracket}{lo}, {hi}]"
                    ));
                }
            }
            Ok(())
        }
        list("theta", &self.thetas, 0.0, 1.0, false)?;
        list("lambda", &self.lambdas, 0.0, 1.0, false)?;
        list("alpha", &self.alphas, 0.0, 1.0, false)?;
        list("m", &self.ms, 0.0, 1.0, true)?;
        if self.qs.is_empty() {
            return Err("empty sweep: no values for `q`".into());
        }
        for &q in &self.qs {
            if !(q.is_finite() && q >= 1.0) {
                return Err(format!("grid value q = {q} must be >= 1"));
            }
        }
        if !(self.a.is_finite() && self.b.is_finite() && self.a >= 0.0 && self.a < self.b) {
            return Err(format!(
                "interval requires 0 <= a < b, got [{}, {}]",
                self.a, self.b
            ));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(format!(
                "tolerance must be positive and finite, got {}",
                self.tol
            ));
        }
        Ok(())
    }

    fn cell_count(&self) -> usize {
        self.thetas.len()
            * self.lambdas.len()
            * self.alphas.len()
            * self.ms.len()
            * self.qs.len()
    }
}

/// Applies `--grid` override strings (`key=v1,v2,...`, parts separable by
/// `;`) on top of `grid`. Keys: `theta`, `lambda`, `alpha`, `m`, `q`
/// (lists) and `a`, `b` (single values).
pub fn apply_grid_specs(specs: &[String], grid: &mut SweepGrid) -> Result<(), CliError> {
    for spec in specs {
        for part in spec.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, vals) = part
                .split_once('=')
                .ok_or_else(|| usage(format!("grid spec `{part}` is not of the form key=v1,v2,...")))?;
            let values: Vec<f64> = vals
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|_| usage(format!("grid value `{s}` is not a number")))
                })
                .collect::<Result<_, _>>()?;
            let single = |values: &[f64], key: &str| -> Result<f64, CliError> {
                match values {
                    [v] => Ok(*v),
                    _ => Err(usage(format!("grid key `{key}` takes exactly one value"))),
                }
            };
            match key.trim() {
                "theta" => grid.thetas = values,
                "lambda" => grid.lambdas = values,
                "alpha" => grid.alphas = values,
                "m" => grid.ms = values,
                "q" => grid.qs = values,
                "a" => grid.a = single(&values, "a")?,
                "b" => grid.b = single(&values, "b")?,
                other => {
                    return Err(usage(format!(
                        "unknown grid key `{other}` (expected theta, lambda, alpha, m, q, a or b)"
                    )))
                }
            }
        }
    }
    Ok(())
}

/// One sweep cell: the rule/assumption coordinates, the assembled bound
/// report, the identity residual and the certification verdict for
/// `|f'|^q` under `(alpha, m)` on `[0, b]`.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub name: String,
    pub theta: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub m: f64,
    pub q: f64,
    pub report: BoundReport,
    pub lemma_residual: f64,
    pub certified: bool,
}

/// The `(alpha, q)`-independent part of a cell: defect and identity
/// residual for one `(function, theta, lambda, m)`.
#[derive(Debug, Clone)]
pub struct BaseCell {
    pub name: String,
    pub theta: f64,
    pub lambda: f64,
    pub m: f64,
    pub defect: f64,
    pub residual: f64,
}

/// One certification verdict for `|f'|^q` under `(alpha, m)` on `[0, b]`.
#[derive(Debug, Clone)]
pub struct CertCell {
    pub name: String,
    pub alpha: f64,
    pub m: f64,
    pub q: f64,
    pub passed: bool,
    pub worst_violation: f64,
}

/// Everything a campaign needs: per-cell rows plus the two cached layers
/// they were assembled from.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub base_cells: Vec<BaseCell>,
    pub cert_cells: Vec<CertCell>,
}

fn ensure_domain(fns: &[LoadedFunction], grid: &SweepGrid) -> Result<(), CliError> {
    for f in fns {
        if grid.b > f.spec().domain_b {
            return Err(usage(format!(
                "interval end b = {} exceeds the domain [0, {}] of function `{}`",
                grid.b,
                f.spec().domain_b,
                f.name()
            )));
        }
    }
    Ok(())
}

fn rule_params(grid: &SweepGrid, theta: f64, lambda: f64, m: f64) -> Result<RuleParams, CliError> {
    RuleParams::new(theta, lambda, m, grid.a, grid.b).map_err(|e| usage(e.to_string()))
}

/// Computes defect and identity residual for every `(function, theta,
/// lambda, m)` combination, in parallel, sorted by `(name, theta, lambda,
/// m)`.
pub fn base_cells(fns: &[LoadedFunction], grid: &SweepGrid) -> Result<Vec<BaseCell>, CliError> {
    grid.validate().map_err(CliError::Usage)?;
    ensure_domain(fns, grid)?;
    let mut keys = Vec::new();
    for fi in 0..fns.len() {
        for &theta in &grid.thetas {
            for &lambda in &grid.lambdas {
                for &m in &grid.ms {
                    keys.push((fi, theta, lambda, m));
                }
            }
        }
    }
    let mut cells: Vec<BaseCell> = keys
        .into_par_iter()
        .map(|(fi, theta, lambda, m)| {
            let f = &fns[fi];
            let context = format!("cell (theta={theta}, lambda={lambda}, m={m})");
            let rp = rule_params(grid, theta, lambda, m)?;
            let defect = bounds::defect_with_tol(f.f(), &rp, grid.tol)
                .map_err(|e| compute_error(f.name(), &context, e))?;
            let residual = integrator::lemma_residual_with_tol(f.f(), f.fprime(), &rp, grid.tol)
                .map_err(|e| compute_error(f.name(), &context, e))?;
            Ok(BaseCell {
                name: f.name().to_string(),
                theta,
                lambda,
                m,
                defect,
                residual,
            })
        })
        .collect::<Result<_, CliError>>()?;
    cells.sort_by(|x, y| {
        x.name
            .cmp(&y.name)
            .then(x.theta.total_cmp(&y.theta))
            .then(x.lambda.total_cmp(&y.lambda))
            .then(x.m.total_cmp(&y.m))
    });
    Ok(cells)
}

/// Certifies `|f'|^q` under `(alpha, m)` on `[0, grid.b]` for every
/// `(function, alpha, m, q)` combination, in parallel, sorted by `(name,
/// alpha, m, q)`.
pub fn cert_cells(fns: &[LoadedFunction], grid: &SweepGrid) -> Result<Vec<CertCell>, CliError> {
    grid.validate().map_err(CliError::Usage)?;
    ensure_domain(fns, grid)?;
    let spec = SamplingSpec {
        seed: grid.seed,
        ..SamplingSpec::default()
    };
    let mut keys = Vec::new();
    for fi in 0..fns.len() {
        for &alpha in &grid.alphas {
            for &m in &grid.ms {
                for &q in &grid.qs {
                    keys.push((fi, alpha, m, q));
                }
            }
        }
    }
    let mut cells: Vec<CertCell> = keys
        .into_par_iter()
        .map(|(fi, alpha, m, q)| {
            let f = &fns[fi];
            let fp = f.fprime();
            let g = move |x: f64| fp(x).abs().powf(q);
            let cert = convexity::check_alpha_m_convex(g, alpha, m, grid.b, &spec).map_err(|e| {
                compute_error(
                    f.name(),
                    &format!("certifying |f'|^q under (alpha={alpha}, m={m}, q={q})"),
                    e,
                )
            })?;
            Ok(CertCell {
                name: f.name().to_string(),
                alpha,
                m,
                q,
                passed: cert.passed,
                worst_violation: cert.worst_violation,
            })
        })
        .collect::<Result<_, CliError>>()?;
    cells.sort_by(|x, y| {
        x.name
            .cmp(&y.name)
            .then(x.alpha.total_cmp(&y.alpha))
            .then(x.m.total_cmp(&y.m))
            .then(x.q.total_cmp(&y.q))
    });
    Ok(cells)
}

/// Runs the full sweep: certificates per `(function, alpha, m, q)`,
/// defects and residuals per `(function, theta, lambda, m)`, then one
/// assembled row per cell, sorted by `(name, theta, lambda, alpha, m, q)`.
/// Parallel, but the output is independent of the worker count.
pub fn run_cells(fns: &[LoadedFunction], grid: &SweepGrid) -> Result<SweepOutcome, CliError> {
    let base = base_cells(fns, grid)?;
    let certs = cert_cells(fns, grid)?;

    let key = |v: f64| v.to_bits();
    let base_map: HashMap<(String, u64, u64, u64), (f64, f64)> = base
        .iter()
        .map(|c| {
            (
                (c.name.clone(), key(c.theta), key(c.lambda), key(c.m)),
                (c.defect, c.residual),
            )
        })
        .collect();
    let cert_map: HashMap<(String, u64, u64, u64), bool> = certs
        .iter()
        .map(|c| ((c.name.clone(), key(c.alpha), key(c.m), key(c.q)), c.passed))
        .collect();

    let mut cells = Vec::with_capacity(fns.len() * grid.cell_count());
    for fi in 0..fns.len() {
        for &theta in &grid.thetas {
            for &lambda in &grid.lambdas {
                for &alpha in &grid.alphas {
                    for &m in &grid.ms {
                        for &q in &grid.qs {
                            cells.push((fi, theta, lambda, alpha, m, q));
                        }
                    }
                }
            }
        }
    }
    let mut rows: Vec<SweepRow> = cells
        .into_par_iter()
        .map(|(fi, theta, lambda, alpha, m, q)| {
            let f = &fns[fi];
            let name = f.name().to_string();
            let context =
                format!("cell (theta={theta}, lambda={lambda}, alpha={alpha}, m={m}, q={q})");
            let rp = rule_params(grid, theta, lambda, m)?;
            let cp = ConvexityParams::new(alpha, m, q).map_err(|e| usage(e.to_string()))?;
            let (defect, residual) = base_map[&(name.clone(), key(theta), key(lambda), key(m))];
            let report = bounds::report_with_defect(defect, f.fprime(), &rp, &cp)
                .map_err(|e| compute_error(f.name(), &context, e))?;
            let certified = cert_map[&(name.clone(), key(alpha), key(m), key(q))];
            Ok(SweepRow {
                name,
                theta,
                lambda,
                alpha,
                m,
                q,
                report,
                lemma_residual: residual,
                certified,
            })
        })
        .collect::<Result<_, CliError>>()?;
    rows.sort_by(|x, y| {
        x.name
            .cmp(&y.name)
            .then(x.theta.total_cmp(&y.theta))
            .then(x.lambda.total_cmp(&y.lambda))
            .then(x.alpha.total_cmp(&y.alpha))
            .then(x.m.total_cmp(&y.m))
            .then(x.q.total_cmp(&y.q))
    });
    Ok(SweepOutcome {
        rows,
        base_cells: base,
        cert_cells: certs,
    })
}

/// Writes rows in the [`CSV_HEADER`] layout. Floats use Rust's shortest
/// round-trip formatting, so output is byte-deterministic; the Hölder
/// columns are empty exactly when `q = 1`.
pub fn write_csv<W: Write>(rows: &[SweepRow], w: W) -> Result<(), CliError> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(CSV_HEADER)?;
    let d = |v: f64| format!("{v}");
    for row in rows {
        let (bh, b3, b4, ha) = match &row.report.holder {
            Some(h) => (
                d(h.bound),
                d(h.b3),
                d(h.b4),
                h.argmin.to_string(),
            ),
            None => Default::default(),
        };
        wtr.write_record([
            row.name.clone(),
            d(row.theta),
            d(row.lambda),
            d(row.alpha),
            d(row.m),
            d(row.q),
            d(row.report.defect),
            d(row.report.bound_powermean),
            d(row.report.b1),
            d(row.report.b2),
            row.report.pm_argmin.to_string(),
            bh,
            b3,
            b4,
            ha,
            d(row.lemma_residual),
            row.certified.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Human-friendly but `f64::from_str`-parseable number formatting:
/// scientific notation once plain decimal stops being readable.
fn fmt_g(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 1e-4 && v.abs() < 1e7 {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn fmt_list(vs: &[f64]) -> String {
    let parts: Vec<String> = vs.iter().map(|v| format!("{v}")).collect();
    parts.join(", ")
}

/// The `verify` campaign. Returns the process exit status: 0 when every
/// mathematical check holds, 1 otherwise.
pub fn verify_report(
    fns: &[LoadedFunction],
    corpus_label: &str,
    grid: &SweepGrid,
    outcome: &SweepOutcome,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let spec = SamplingSpec {
        seed: grid.seed,
        ..SamplingSpec::default()
    };
    let mut failures = 0usize;

    writeln!(out, "corpus: {corpus_label} ({} functions)", fns.len())?;
    writeln!(
        out,
        "grid: theta {{{}}} x lambda {{{}}} x alpha {{{}}} x m {{{}}} x q {{{}}} on [{}, {}]",
        fmt_list(&grid.thetas),
        fmt_list(&grid.lambdas),
        fmt_list(&grid.alphas),
        fmt_list(&grid.ms),
        fmt_list(&grid.qs),
        grid.a,
        grid.b
    )?;
    writeln!(
        out,
        "oracle tolerance {}, certifier seed {:#x}",
        fmt_g(grid.tol),
        grid.seed
    )?;
    writeln!(out)?;

    // Corpus claims, certified on each function's native domain. A failed
    // claim is a warning, not a failure: gating below uses the per-cell
    // certificates, never the claims.
    let mut claims_total = 0usize;
    let mut claims_ok = 0usize;
    for f in fns {
        for claim in &f.spec().claims {
            claims_total += 1;
            let fp = f.fprime();
            let q = claim.q;
            let g = move |x: f64| fp(x).abs().powf(q);
            let cert = convexity::check_alpha_m_convex(
                g,
                claim.alpha,
                claim.m,
                f.spec().domain_b,
                &spec,
            )
            .map_err(|e| compute_error(f.name(), "certifying a corpus claim", e))?;
            if cert.passed {
                claims_ok += 1;
            } else {
                let detail = cert
                    .witness
                    .map(|w| format!(" at x={}, y={}, t={}", w.x, w.y, w.t))
                    .unwrap_or_default();
                eprintln!(
                    "warning: function `{}`: claim (alpha={}, m={}, q={}) failed certification \
                     (violation {}{detail})",
                    f.name(),
                    claim.alpha,
                    claim.m,
                    claim.q,
                    fmt_g(cert.worst_violation),
                );
            }
        }
    }
    writeln!(
        out,
        "claims: {claims_ok}/{claims_total} certified on native domains"
    )?;

    // Midpoint/mean/endpoint ordering, gated on an ordinary-convexity
    // certificate for f itself; uncertified functions are skipped with a
    // warning rather than failed, since the ordering is only promised for
    // convex functions.
    let mut hh_ordered = 0usize;
    let mut hh_checked = 0usize;
    let mut hh_skipped = 0usize;
    for f in fns {
        let cert = convexity::check_alpha_m_convex(f.f(), 1.0, 1.0, grid.b, &spec)
            .map_err(|e| compute_error(f.name(), "certifying convexity of f", e))?;
        if !cert.passed {
            hh_skipped += 1;
            eprintln!(
                "warning: function `{}` is not certified convex on [0, {}] (violation {}); \
                 skipping the midpoint/mean/endpoint ordering check",
                f.name(),
                grid.b,
                fmt_g(cert.worst_violation),
            );
            continue;
        }
        hh_checked += 1;
        let (left, mean, right) = bounds::hermite_hadamard_with_tol(f.f(), grid.a, grid.b, grid.tol)
            .map_err(|e| compute_error(f.name(), "midpoint/mean/endpoint check", e))?;
        if left <= mean + ORDERING_SLACK && mean <= right + ORDERING_SLACK {
            hh_ordered += 1;
        } else {
            failures += 1;
            eprintln!(
                "FAIL: function `{}`: ordering violated on [{}, {}]: midpoint {}, mean {}, \
                 endpoints {}",
                f.name(),
                grid.a,
                grid.b,
                fmt_g(left),
                fmt_g(mean),
                fmt_g(right),
            );
        }
    }
    writeln!(
        out,
        "midpoint/mean/endpoint ordering: {hh_ordered}/{hh_checked} ordered, {hh_skipped} skipped"
    )?;

    // Defect identity residuals.
    let residual_limit = RESIDUAL_LIMIT_FACTOR * grid.tol;
    let mut max_residual = 0.0f64;
    let mut residual_ok = 0usize;
    for cell in &outcome.base_cells {
        max_residual = max_residual.max(cell.residual);
        if cell.residual <= residual_limit {
            residual_ok += 1;
        } else {
            failures += 1;
            eprintln!(
                "FAIL: function `{}`: identity residual {} exceeds {} at (theta={}, lambda={}, \
                 m={})",
                cell.name,
                fmt_g(cell.residual),
                fmt_g(residual_limit),
                cell.theta,
                cell.lambda,
                cell.m,
            );
        }
    }
    writeln!(
        out,
        "identity residuals: {residual_ok}/{} cells within {} (max {})",
        outcome.base_cells.len(),
        fmt_g(residual_limit),
        fmt_g(max_residual),
    )?;

    // Dominance, power-mean and Hölder routes, on certified cells only.
    let mut pm_cells = 0usize;
    let mut pm_bad = 0usize;
    let mut ho_cells = 0usize;
    let mut ho_bad = 0usize;
    for row in &outcome.rows {
        if !row.certified {
            continue;
        }
        pm_cells += 1;
        if row.report.margin_powermean < -DOMINANCE_SLACK {
            pm_bad += 1;
            failures += 1;
            eprintln!(
                "FAIL: function `{}`: power-mean bound {} below |defect| {} at (theta={}, \
                 lambda={}, alpha={}, m={}, q={})",
                row.name,
                fmt_g(row.report.bound_powermean),
                fmt_g(row.report.defect.abs()),
                row.theta,
                row.lambda,
                row.alpha,
                row.m,
                row.q,
            );
        }
        if let Some(h) = &row.report.holder {
            ho_cells += 1;
            if h.margin < -DOMINANCE_SLACK {
                ho_bad += 1;
                failures += 1;
                eprintln!(
                    "FAIL: function `{}`: Hölder bound {} below |defect| {} at (theta={}, \
                     lambda={}, alpha={}, m={}, q={})",
                    row.name,
                    fmt_g(h.bound),
                    fmt_g(row.report.defect.abs()),
                    row.theta,
                    row.lambda,
                    row.alpha,
                    row.m,
                    row.q,
                );
            }
        }
    }
    writeln!(
        out,
        "power-mean dominance: {}/{} certified cells hold ({} of {} cells certified)",
        pm_cells - pm_bad,
        pm_cells,
        pm_cells,
        outcome.rows.len(),
    )?;
    writeln!(
        out,
        "Hölder dominance: {}/{} certified q > 1 cells hold",
        ho_cells - ho_bad,
        ho_cells,
    )?;

    // The classical fourth-derivative check for functions shipping an
    // |f''''| bound: at m = 1 the simpson-preset defect must respect
    // f4_sup (b-a)^4 / 2880.
    let mut cls_total = 0usize;
    let mut cls_ok = 0usize;
    for f in fns {
        let Some(f4_sup) = f.spec().f4_sup else {
            continue;
        };
        cls_total += 1;
        let rp = Preset::Simpson
            .rule_params(1.0, grid.a, grid.b)
            .map_err(|e| usage(e.to_string()))?;
        let defect = bounds::defect_with_tol(f.f(), &rp, grid.tol)
            .map_err(|e| compute_error(f.name(), "fourth-derivative check", e))?;
        let bound = bounds::classical_simpson_bound(f4_sup, grid.a, grid.b)
            .map_err(|e| usage(e.to_string()))?;
        if defect.abs() <= bound + DOMINANCE_SLACK {
            cls_ok += 1;
        } else {
            failures += 1;
            eprintln!(
                "FAIL: function `{}`: |simpson defect| {} exceeds fourth-derivative bound {}",
                f.name(),
                fmt_g(defect.abs()),
                fmt_g(bound),
            );
        }
    }
    writeln!(
        out,
        "fourth-derivative check (simpson, m=1): {cls_ok}/{cls_total} functions within bound"
    )?;

    writeln!(out)?;
    if failures == 0 {
        writeln!(out, "verify: PASS")?;
        Ok(0)
    } else {
        writeln!(out, "verify: FAIL ({failures} check(s) failed)")?;
        Ok(1)
    }
}

/// The `lemma` report: residuals only, against the grid's theta, lambda
/// and m lists.
pub fn lemma_report(
    fns: &[LoadedFunction],
    cells: &[BaseCell],
    grid: &SweepGrid,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    writeln!(
        out,
        "defect identity check: {} functions x {} theta x {} lambda x {} m = {} cells on [{}, {}] \
         (oracle tolerance {})",
        fns.len(),
        grid.thetas.len(),
        grid.lambdas.len(),
        grid.ms.len(),
        cells.len(),
        grid.a,
        grid.b,
        fmt_g(grid.tol),
    )?;
    let mut max_residual = 0.0f64;
    for f in fns {
        let fn_max = cells
            .iter()
            .filter(|c| c.name == f.name())
            .fold(0.0f64, |acc, c| acc.max(c.residual));
        max_residual = max_residual.max(fn_max);
        writeln!(out, "  {}: max residual {}", f.name(), fmt_g(fn_max))?;
    }
    let limit = RESIDUAL_LIMIT_FACTOR * grid.tol;
    let pass = max_residual <= limit;
    writeln!(
        out,
        "max residual {} (limit {}): {}",
        fmt_g(max_residual),
        fmt_g(limit),
        if pass { "PASS" } else { "FAIL" },
    )?;
    Ok(if pass { 0 } else { 1 })
}

fn preset_theta_display(preset: Preset) -> &'static str {
    match preset {
        Preset::Simpson => "2/3",
        Preset::Trapezoid => "0",
        Preset::Midpoint => "1",
    }
}

fn preset_a1_display(preset: Preset) -> &'static str {
    match preset {
        Preset::Simpson => "5/18",
        Preset::Trapezoid | Preset::Midpoint => "1/2",
    }
}

/// The `preset` report: the fixed `(theta, lambda)` pair, the closed-form
/// corollary constants, and defect/bounds for every corpus function.
pub fn preset_report(
    preset: Preset,
    alpha: f64,
    m: f64,
    q: f64,
    fns: &[LoadedFunction],
    grid: &SweepGrid,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let rp = preset
        .rule_params(m, grid.a, grid.b)
        .map_err(|e| usage(e.to_string()))?;
    let cp = ConvexityParams::new(alpha, m, q).map_err(|e| usage(e.to_string()))?;
    let spec = SamplingSpec {
        seed: grid.seed,
        ..SamplingSpec::default()
    };

    writeln!(
        out,
        "preset {}: theta = {}, lambda = 1/2",
        preset.name(),
        preset_theta_display(preset),
    )?;
    writeln!(
        out,
        "assumption: |f'|^q is (alpha, m)-convex with alpha = {alpha}, m = {m}, q = {q}"
    )?;
    writeln!(
        out,
        "interval [{}, {}], scaled by m to [{}, {}]",
        grid.a,
        grid.b,
        rp.ma(),
        rp.mb(),
    )?;

    let a1 = coefficients::a1(rp.theta()).map_err(|e| usage(e.to_string()))?;
    writeln!(
        out,
        "power-mean leading constant: a1 = {} = {}; a1^(1-1/q) = {}",
        preset_a1_display(preset),
        fmt_g(a1),
        fmt_g(a1.powf(1.0 - 1.0 / q)),
    )?;
    if let Some(p) = cp.p() {
        // The corollary prefactor extracts lambda^2 = 1/4 into the
        // closed form; equality with the route factor
        // m(b-a) holder_factor^(1/p) lambda^2 is pinned by tests.
        let closed = match preset {
            Preset::Simpson => {
                rp.scaled_len() / 12.0
                    * ((2f64.powf(p + 1.0) + 1.0) / (3.0 * (p + 1.0))).powf(1.0 / p)
            }
            Preset::Trapezoid | Preset::Midpoint => {
                rp.scaled_len() / 4.0 * (1.0 / (p + 1.0)).powf(1.0 / p)
            }
        };
        let formula = match preset {
            Preset::Simpson => "(m(b-a)/12) ((2^(p+1)+1)/(3(p+1)))^(1/p)",
            Preset::Trapezoid | Preset::Midpoint => "(m(b-a)/4) (1/(p+1))^(1/p)",
        };
        writeln!(
            out,
            "Hölder prefactor (p = {}): {formula} = {}",
            fmt_g(p),
            fmt_g(closed),
        )?;
    } else {
        writeln!(out, "Hölder route: requires q > 1, skipped")?;
    }

    for f in fns {
        let fp = f.fprime();
        let g = move |x: f64| fp(x).abs().powf(q);
        let cert = convexity::check_alpha_m_convex(g, alpha, m, grid.b, &spec)
            .map_err(|e| compute_error(f.name(), "certifying |f'|^q", e))?;
        let report = bounds::report_with_tol(f.f(), f.fprime(), &rp, &cp, grid.tol)
            .map_err(|e| compute_error(f.name(), "assembling the bound report", e))?;
        writeln!(out)?;
        writeln!(out, "function {} (f = {}):", f.name(), f.spec().f)?;
        writeln!(out, "  defect = {}", fmt_g(report.defect))?;
        writeln!(
            out,
            "  power-mean bound = {} (branch {}, margin {})",
            fmt_g(report.bound_powermean),
            report.pm_argmin,
            fmt_g(report.margin_powermean),
        )?;
        if let Some(h) = &report.holder {
            writeln!(
                out,
                "  Hölder bound = {} (branch {}, margin {})",
                fmt_g(h.bound),
                h.argmin,
                fmt_g(h.margin),
            )?;
        }
        writeln!(
            out,
            "  hypothesis certified on [0, {}]: {}",
            grid.b,
            if cert.passed {
                "yes"
            } else {
                "no (bound not guaranteed)"
            },
        )?;
    }
    Ok(0)
}

/// The `check-convexity` report. Exit status 1 when the definition is
/// refuted, 0 when certified.
pub fn check_convexity_report(
    src: &str,
    alpha: f64,
    m: f64,
    b: f64,
    with_classification: bool,
    seed: u64,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let ast = expr::parse(src).map_err(|e| usage(format!("cannot parse --expr: {e}")))?;
    let g = |x: f64| expr::eval(&ast, x).unwrap_or(f64::NAN);
    let spec = SamplingSpec {
        seed,
        ..SamplingSpec::default()
    };
    let cert = convexity::check_alpha_m_convex(g, alpha, m, b, &spec)
        .map_err(|e| CliError::Compute(format!("expression `{src}`: {e}")))?;

    writeln!(out, "expression: {ast}")?;
    writeln!(
        out,
        "(alpha, m) = ({alpha}, {m}) on [0, {b}]; {} samples, seed {:#x}",
        cert.samples_checked, seed,
    )?;
    if cert.passed {
        writeln!(
            out,
            "certified: no violation beyond slack {} (worst observed {})",
            fmt_g(cert.slack),
            fmt_g(cert.worst_violation),
        )?;
    } else {
        let w = cert
            .witness
            .expect("a refuted certificate always carries its witness");
        let lhs = g(w.t * w.x + m * (1.0 - w.t) * w.y);
        let rhs = w.t.powf(alpha) * g(w.x) + m * (1.0 - w.t.powf(alpha)) * g(w.y);
        writeln!(
            out,
            "REFUTED: violation {} beyond slack {}",
            fmt_g(w.violation),
            fmt_g(cert.slack),
        )?;
        writeln!(out, "  witness: x = {}, y = {}, t = {}", w.x, w.y, w.t)?;
        writeln!(
            out,
            "  g(t x + m (1-t) y) = {} > {} = t^alpha g(x) + m (1 - t^alpha) g(y)",
            fmt_g(lhs),
            fmt_g(rhs),
        )?;
    }

    if with_classification {
        let probes = [0.25, 0.5, 0.75];
        let cls = convexity::classify(g, b, &probes, &spec)
            .map_err(|e| CliError::Compute(format!("expression `{src}`: {e}")))?;
        writeln!(out)?;
        writeln!(out, "classification (probes {}):", fmt_list(&probes))?;
        for (tag, c) in &cls.entries {
            let verdict = if c.passed {
                "certified".to_string()
            } else {
                format!("refuted (violation {})", fmt_g(c.worst_violation))
            };
            writeln!(out, "  {:<34} {verdict}", tag.to_string())?;
        }
        writeln!(
            out,
            "g(0) = {}; membership in the certified classes with g(0) <= 0: {}",
            fmt_g(cls.g_at_zero),
            cls.k_membership,
        )?;
    }
    Ok(if cert.passed { 0 } else { 1 })
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let hex = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .unwrap_or(t);
    u64::from_str_radix(hex, 16).map_err(|_| format!("`{s}` is not a hex seed (e.g. 0x5EED)"))
}

#[derive(Parser)]
#[command(
    name = "quadbound",
    version,
    about = "Quadrature defect and error bounds for functions with (alpha, m)-convex |f'|^q"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Corpus JSON file (defaults to the built-in demo corpus)
    #[arg(long, global = true, value_name = "PATH")]
    corpus: Option<PathBuf>,
    /// Absolute tolerance for the integration oracle
    #[arg(long, global = true, value_name = "REAL", default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Seed for the sampling certifier, in hex
    #[arg(long, global = true, value_name = "HEX", value_parser = parse_seed, default_value = "0x5EED")]
    seed: u64,
    /// Write the report to PATH instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Override grid values: "key=v1,v2,..." with keys theta, lambda,
    /// alpha, m, q (lists) and a, b (scalars); repeatable, parts
    /// separable by ';'
    #[arg(long, global = true, value_name = "SPEC")]
    grid: Vec<String>,
    /// Number of worker threads (default: all cores)
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Certify claims, check orderings, residuals and bound dominance
    Verify,
    /// Emit one CSV row per (function, theta, lambda, alpha, m, q) cell
    Sweep,
    /// Evaluate one named rule with its closed-form corollary constants
    Preset {
        /// simpson | trapezoid | midpoint
        name: String,
        /// Convexity parameter alpha of the assumption on |f'|^q
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Scaling parameter m (shared by the rule and the assumption)
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        /// Exponent q of the assumption on |f'|^q
        #[arg(long, default_value_t = 1.0)]
        q: f64,
    },
    /// Certify or refute (alpha, m)-convexity of an expression
    CheckConvexity {
        /// Expression in x (see GRAMMAR.md)
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        /// Right end of the domain [0, b]
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        /// Additionally probe the whole (alpha, m) taxonomy
        #[arg(long)]
        classify: bool,
    },
    /// Check the weighted-derivative identity for the defect over the grid
    Lemma,
}

fn build_grid(g: &GlobalOpts) -> Result<SweepGrid, CliError> {
    let mut grid = SweepGrid {
        tol: g.tol,
        seed: g.seed,
        ..SweepGrid::default()
    };
    apply_grid_specs(&g.grid, &mut grid)?;
    grid.validate().map_err(CliError::Usage)?;
    Ok(grid)
}

fn load_corpus_arg(g: &GlobalOpts) -> Result<(Vec<LoadedFunction>, String), CliError> {
    match &g.corpus {
        Some(path) => Ok((corpus::load_corpus(path)?, path.display().to_string())),
        None => Ok((corpus::demo_corpus(), "built-in demo corpus".to_string())),
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write + Send>, CliError> {
    match path {
        Some(p) => {
            let file = File::create(p)
                .map_err(|e| usage(format!("cannot write `{}`: {e}", p.display())))?;
            Ok(Box::new(std::io::BufWriter::new(file)))
        }
        None => Ok(Box::new(std::io::stdout())),
    }
}

fn with_pool<T: Send>(
    jobs: Option<usize>,
    work: impl FnOnce() -> T + Send,
) -> Result<T, CliError> {
    match jobs {
        None => Ok(work()),
        Some(0) => Err(usage("--jobs must be at least 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| usage(format!("cannot build a {n}-thread pool: {e}")))?;
            Ok(pool.install(work))
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, CliError> {
    let grid = build_grid(&cli.global)?;
    let mut out = open_out(&cli.global.out)?;
    let code = match cli.command {
        Command::Verify => {
            let (fns, label) = load_corpus_arg(&cli.global)?;
            let outcome = with_pool(cli.global.jobs, || run_cells(&fns, &grid))??;
            verify_report(&fns, &label, &grid, &outcome, out.as_mut())?
        }
        Command::Sweep => {
            let (fns, _) = load_corpus_arg(&cli.global)?;
            let outcome = with_pool(cli.global.jobs, || run_cells(&fns, &grid))??;
            write_csv(&outcome.rows, out.as_mut())?;
            0
        }
        Command::Preset { name, alpha, m, q } => {
            let preset: Preset = name
                .parse()
                .map_err(|e: ParamError| usage(e.to_string()))?;
            let (fns, _) = load_corpus_arg(&cli.global)?;
            ensure_domain(&fns, &grid)?;
            preset_report(preset, alpha, m, q, &fns, &grid, out.as_mut())?
        }
        Command::CheckConvexity {
            expr,
            alpha,
            m,
            b,
            classify,
        } => check_convexity_report(&expr, alpha, m, b, classify, grid.seed, out.as_mut())?,
        Command::Lemma => {
            let (fns, _) = load_corpus_arg(&cli.global)?;
            let cells = with_pool(cli.global.jobs, || base_cells(&fns, &grid))??;
            lemma_report(&fns, &cells, &grid, out.as_mut())?
        }
    };
    out.flush()?;
    Ok(code)
}

/// Parses the command line, runs the requested subcommand and returns the
/// process exit status (0 ok, 1 mathematical check failed, 2 usage/I-O).
pub fn run() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too; they print to stdout
            // and exit 0, everything else is a usage error.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
