//! Loading and validating corpora of test functions.
//!
//! A corpus is a JSON file with a `schema` version and a list of
//! [`FunctionSpec`] records:
//!
//! ```json
//! {
//!   "schema": 1,
//!   "functions": [
//!     {
//!       "name": "sq",
//!       "f": "x^2",
//!       "fprime": "2*x",
//!       "domain_b": 2.0,
//!       "claims": [ { "alpha": 1.0, "m": 1.0, "q": 2.0 } ],
//!       "f4_sup": 0.0
//!     }
//!   ]
//! }
//! ```
//!
//! Loading is strict: unknown schema versions, empty corpora, duplicate
//! names, non-positive domains, malformed claims and unparseable
//! expressions are all rejected up front. Crucially, `fprime` is checked
//! against a centered difference of `f` at load time, so a transposed
//! derivative never makes it into a verification run.
//!
//! The crate ships a small built-in corpus ([`demo_corpus`]) whose claims
//! have all been certified by the sampler; it is what the command-line
//! tool uses when no `--corpus` is given.

use crate::expr::{self, Expr, ExprError};
use crate::model::FunctionSpec;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// The corpus schema version this build reads.
pub const SCHEMA_VERSION: u32 = 1;

/// Number of sample points for the load-time derivative cross-check.
pub const DERIVATIVE_SAMPLES: usize = 64;

/// The JSON shape of a corpus file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusFile {
    pub schema: u32,
    pub functions: Vec<FunctionSpec>,
}

/// Why a corpus could not be loaded.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("failed to read corpus file {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("corpus is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported corpus schema {found}; this build reads schema {expected}")]
    Schema { found: u32, expected: u32 },
    #[error("corpus contains no functions")]
    Empty,
    #[error("function name must not be empty")]
    EmptyName,
    #[error("duplicate function name `{0}`")]
    DuplicateName(String),
    #[error("function `{name}`: domain_b must be positive and finite, got {domain_b}")]
    InvalidDomain { name: String, domain_b: f64 },
    #[error("function `{name}`: claim (alpha={alpha}, m={m}, q={q}) is invalid: {source}")]
    InvalidClaim {
        name: String,
        alpha: f64,
        m: f64,
        q: f64,
        source: crate::model::ParamError,
    },
    #[error("function `{name}`: f4_sup must be nonnegative and finite, got {value}")]
    InvalidF4Sup { name: String, value: f64 },
    #[error("function `{name}`: field `{field}` does not parse: {source}")]
    Expr {
        name: String,
        field: &'static str,
        source: ExprError,
    },
    #[error(
        "function `{name}`: fprime disagrees with the centered difference of f \
         (worst relative deviation {worst:.3e} at x = {at})"
    )]
    DerivativeMismatch { name: String, worst: f64, at: f64 },
    #[error("function `{name}`: derivative check failed to evaluate at x = {at}: {source}")]
    DerivativeEval {
        name: String,
        at: f64,
        source: ExprError,
    },
}

/// A validated corpus entry with its expressions parsed once.
///
/// The closure views returned by [`LoadedFunction::f`] and
/// [`LoadedFunction::fprime`] map evaluation errors to NaN: every numeric
/// consumer in this crate (integrator, sampler, bound assembly) detects
/// non-finite samples and reports the offending abscissa, which keeps the
/// closure interface a plain `Fn(f64) -> f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedFunction {
    spec: FunctionSpec,
    f_ast: Expr,
    fprime_ast: Expr,
}

impl LoadedFunction {
    pub fn spec(&self) -> &FunctionSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    /// The function itself, as a closure (evaluation errors become NaN).
    pub fn f(&self) -> impl Fn(f64) -> f64 + Sync + '_ {
        let ast = &self.f_ast;
        move |x| expr::eval(ast, x).unwrap_or(f64::NAN)
    }

    /// The derivative, as a closure (evaluation errors become NaN).
    pub fn fprime(&self) -> impl Fn(f64) -> f64 + Sync + '_ {
        let ast = &self.fprime_ast;
        move |x| expr::eval(ast, x).unwrap_or(f64::NAN)
    }
}

fn validate_function(spec: FunctionSpec) -> Result<LoadedFunction, CorpusError> {
    let name = spec.name.clone();
    if name.is_empty() {
        return Err(CorpusError::EmptyName);
    }
    if !(spec.domain_b.is_finite() && spec.domain_b > 0.0) {
        return Err(CorpusError::InvalidDomain {
            name,
            domain_b: spec.domain_b,
        });
    }
    for claim in &spec.claims {
        if let Err(source) = claim.to_params() {
            return Err(CorpusError::InvalidClaim {
                name,
                alpha: claim.alpha,
                m: claim.m,
                q: claim.q,
                source,
            });
        }
    }
    if let Some(v) = spec.f4_sup {
        if !(v.is_finite() && v >= 0.0) {
            return Err(CorpusError::InvalidF4Sup { name, value: v });
        }
    }
    let f_ast = expr::parse(&spec.f).map_err(|source| CorpusError::Expr {
        name: name.clone(),
        field: "f",
        source,
    })?;
    let fprime_ast = expr::parse(&spec.fprime).map_err(|source| CorpusError::Expr {
        name: name.clone(),
        field: "fprime",
        source,
    })?;
    let rep = expr::validate_derivative(&f_ast, &fprime_ast, spec.domain_b, DERIVATIVE_SAMPLES);
    if let Some((at, source)) = rep.error {
        return Err(CorpusError::DerivativeEval { name, at, source });
    }
    if !rep.passed {
        return Err(CorpusError::DerivativeMismatch {
            name,
            worst: rep.worst_rel_dev,
            at: rep.worst_at,
        });
    }
    Ok(LoadedFunction {
        spec,
        f_ast,
        fprime_ast,
    })
}

/// Parses and fully validates a corpus from JSON text.
pub fn parse_corpus(json: &str) -> Result<Vec<LoadedFunction>, CorpusError> {
    let file: CorpusFile = serde_json::from_str(json)?;
    if file.schema != SCHEMA_VERSION {
        return Err(CorpusError::Schema {
            found: file.schema,
            expected: SCHEMA_VERSION,
        });
    }
    if file.functions.is_empty() {
        return Err(CorpusError::Empty);
    }
    let mut seen = BTreeSet::new();
    for spec in &file.functions {
        if !seen.insert(spec.name.clone()) {
            return Err(CorpusError::DuplicateName(spec.name.clone()));
        }
    }
    file.functions.into_iter().map(validate_function).collect()
}

/// Reads and validates a corpus file from disk.
pub fn load_corpus(path: &Path) -> Result<Vec<LoadedFunction>, CorpusError> {
    let json = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_corpus(&json)
}

/// JSON text of the built-in corpus.
pub const DEMO_CORPUS_JSON: &str = include_str!("../data/demo_corpus.json");

/// The built-in corpus: a handful of functions on `[0, 2]` whose convexity
/// claims the sampler certifies, covering slow and fast growth, a
/// fractional power, and both zero and nonzero fourth derivatives.
pub fn demo_corpus() -> Vec<LoadedFunction> {
    parse_corpus(DEMO_CORPUS_JSON).expect("the built-in corpus must validate")
}
