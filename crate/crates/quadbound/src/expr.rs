//! A tiny, deterministic expression language for corpus functions of one
//! variable `x`.
//!
//! The full grammar lives in `GRAMMAR.md` at the repository root. In short:
//!
//! * binary operators `+ - * / ^`, with `^` binding tightest and grouping
//!   right-to-left (`2^3^2 = 2^(3^2) = 512`);
//! * unary minus binds tighter than `*` but looser than `^`, so `-x^2`
//!   means `-(x^2)`;
//! * functions `exp`, `ln`, `abs`, `sqrt` and the two-argument `pow`
//!   (`pow(u, v)` parses to the same node as `u^v`);
//! * constants `e` and `pi`, decimal literals with optional exponent
//!   (`2e3`), and no implicit multiplication (`2x` is a syntax error).
//!
//! Every error — lexical, syntactic, or a domain error during evaluation —
//! carries the byte offset into the source text where it occurred.
//! Parsing, printing and evaluation are all exact functions of their
//! inputs: no locale, no global state.

use thiserror::Error;

/// Named constants recognised by the parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedConst {
    E,
    Pi,
}

impl NamedConst {
    pub fn value(self) -> f64 {
        match self {
            NamedConst::E => std::f64::consts::E,
            NamedConst::Pi => std::f64::consts::PI,
        }
    }

    fn name(self) -> &'static str {
        match self {
            NamedConst::E => "e",
            NamedConst::Pi => "pi",
        }
    }
}

/// Built-in one-argument functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryFunc {
    Exp,
    Ln,
    Abs,
    Sqrt,
}

impl UnaryFunc {
    fn name(self) -> &'static str {
        match self {
            UnaryFunc::Exp => "exp",
            UnaryFunc::Ln => "ln",
            UnaryFunc::Abs => "abs",
            UnaryFunc::Sqrt => "sqrt",
        }
    }
}

/// Binary operators. `pow(u, v)` and `u ^ v` both construct [`BinOp::Pow`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

/// A parsed expression node. Carries the byte offset of the token that
/// introduced it, for error reporting.
#[derive(Debug, Clone)]
pub struct Expr {
    kind: ExprKind,
    offset: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Num(f64),
    /// The free variable `x`.
    Var,
    Const(NamedConst),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(UnaryFunc, Box<Expr>),
}

impl Expr {
    fn new(kind: ExprKind, offset: usize) -> Self {
        Expr { kind, offset }
    }

    pub fn kind(&self) -> &ExprKind {
        &self.kind
    }

    /// Byte offset of the token that introduced this node.
    pub fn offset(&self) -> usize {
        self.offset
    }

    /// Evaluates the expression at `x`. See [`eval`].
    pub fn eval(&self, x: f64) -> Result<f64, ExprError> {
        eval(self, x)
    }
}

/// Structural equality: two expressions are equal when their trees match,
/// regardless of where their tokens sat in the source. This is what makes
/// the parse → print → parse round trip an identity.
impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

/// Fully parenthesised rendering; reparsing it reproduces the same tree.
impl std::fmt::Display for Expr {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.kind {
            ExprKind::Num(v) => write!(fm, "{v}"),
            ExprKind::Var => write!(fm, "x"),
            ExprKind::Const(c) => write!(fm, "{}", c.name()),
            ExprKind::Neg(a) => write!(fm, "(-{a})"),
            ExprKind::Bin(op, a, b) => write!(fm, "({a} {} {b})", op.symbol()),
            ExprKind::Call(f, a) => write!(fm, "{}({a})", f.name()),
        }
    }
}

/// What went wrong during evaluation, independent of position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EvalErrorKind {
    #[error("logarithm of a non-positive value")]
    LogDomain,
    #[error("square root of a negative value")]
    SqrtDomain,
    #[error("division by zero")]
    DivByZero,
    #[error("non-finite result")]
    NonFinite,
}

/// Any failure while parsing or evaluating, with its byte offset.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdent { name: String, offset: usize },
    #[error("{kind} at byte {offset}")]
    Eval { kind: EvalErrorKind, offset: usize },
}

impl ExprError {
    fn syntax(offset: usize, message: impl Into<String>) -> Self {
        ExprError::Syntax {
            offset,
            message: message.into(),
        }
    }

    /// Byte offset into the original source text.
    pub fn offset(&self) -> usize {
        match self {
            ExprError::Syntax { offset, .. } => *offset,
            ExprError::UnknownIdent { offset, .. } => *offset,
            ExprError::Eval { offset, .. } => *offset,
        }
    }
}

// ---------------------------------------------------------------- lexing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number `{v}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            b'/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            b'^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b',' => {
                toks.push((Tok::Comma, i));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i == start + 1 && bytes[start] == b'.' {
                    return Err(ExprError::syntax(start, "expected digits in number"));
                }
                // Optional exponent: only consume `e`/`E` when digits follow,
                // so `2e` stays an error and `2e3` is one literal.
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    } else {
                        return Err(ExprError::syntax(
                            i,
                            "exponent marker must be followed by digits",
                        ));
                    }
                }
                let text = &src[start..i];
                let value: f64 = text
                    .parse()
                    .map_err(|_| ExprError::syntax(start, format!("invalid number `{text}`")))?;
                toks.push((Tok::Num(value), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => {
                // Report the whole character, not just its lead byte.
                let ch = src[i..].chars().next().unwrap();
                return Err(ExprError::syntax(i, format!("unexpected character `{ch}`")));
            }
        }
    }
    Ok(toks)
}

// --------------------------------------------------------------- parsing

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    src_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(Tok, usize)> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eof_offset(&self) -> usize {
        self.src_len
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<usize, ExprError> {
        match self.next() {
            Some((tok, off)) if tok == want => Ok(off),
            Some((tok, off)) => Err(ExprError::syntax(
                off,
                format!("expected {what}, found {}", tok.describe()),
            )),
            None => Err(ExprError::syntax(
                self.eof_offset(),
                format!("expected {what}, found end of input"),
            )),
        }
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        while let Some((tok, off)) = self.peek() {
            let op = match tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            let off = *off;
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::new(ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), off);
        }
        Ok(lhs)
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while let Some((tok, off)) = self.peek() {
            let op = match tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            let off = *off;
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::new(ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), off);
        }
        Ok(lhs)
    }

    // unary := '-' unary | power
    // Unary minus binds looser than `^`, so `-x^2` parses as `-(x^2)`.
    fn unary(&mut self) -> Result<Expr, ExprError> {
        if let Some((Tok::Minus, off)) = self.peek() {
            let off = *off;
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), off));
        }
        self.power()
    }

    // power := atom ('^' unary)?    (right-associative; exponent may be signed)
    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if let Some((Tok::Caret, off)) = self.peek() {
            let off = *off;
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Expr::new(
                ExprKind::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)),
                off,
            ));
        }
        Ok(base)
    }

    // atom := number | 'x' | 'e' | 'pi' | func '(' args ')' | '(' expr ')'
    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.next() {
            Some((Tok::Num(v), off)) => Ok(Expr::new(ExprKind::Num(v), off)),
            Some((Tok::LParen, _)) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some((Tok::Ident(name), off)) => self.ident(name, off),
            Some((tok, off)) => Err(ExprError::syntax(
                off,
                format!("expected an operand, found {}", tok.describe()),
            )),
            None => Err(ExprError::syntax(
                self.eof_offset(),
                "expected an operand, found end of input",
            )),
        }
    }

    fn ident(&mut self, name: String, off: usize) -> Result<Expr, ExprError> {
        match name.as_str() {
            "x" => return Ok(Expr::new(ExprKind::Var, off)),
            "e" => return Ok(Expr::new(ExprKind::Const(NamedConst::E), off)),
            "pi" => return Ok(Expr::new(ExprKind::Const(NamedConst::Pi), off)),
            _ => {}
        }
        let func = match name.as_str() {
            "exp" => Some(UnaryFunc::Exp),
            "ln" => Some(UnaryFunc::Ln),
            "abs" => Some(UnaryFunc::Abs),
            "sqrt" => Some(UnaryFunc::Sqrt),
            _ => None,
        };
        if let Some(func) = func {
            self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
            let arg = self.expr()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(Expr::new(ExprKind::Call(func, Box::new(arg)), off));
        }
        if name == "pow" {
            self.expect(Tok::LParen, "`(` after `pow`")?;
            let base = self.expr()?;
            self.expect(Tok::Comma, "`,` between the two arguments of `pow`")?;
            let exponent = self.expr()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(Expr::new(
                ExprKind::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)),
                off,
            ));
        }
        Err(ExprError::UnknownIdent { name, offset: off })
    }
}

/// Parses source text into an [`Expr`].
pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let toks = lex(src)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        src_len: src.len(),
    };
    let expr = parser.expr()?;
    if let Some((tok, off)) = parser.peek() {
        return Err(ExprError::syntax(
            *off,
            format!("unexpected trailing {}", tok.describe()),
        ));
    }
    Ok(expr)
}

// ------------------------------------------------------------- evaluation

/// Evaluates `expr` at the point `x`.
///
/// Domain violations are reported as typed errors with the offset of the
/// offending node: `ln` of a non-positive value, `sqrt` of a negative
/// value, division by zero, and any operation whose result is not finite
/// (overflow, `0^-1`, a fractional power of a negative base, ...).
pub fn eval(expr: &Expr, x: f64) -> Result<f64, ExprError> {
    let finite = |v: f64, off: usize| {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ExprError::Eval {
                kind: EvalErrorKind::NonFinite,
                offset: off,
            })
        }
    };
    let off = expr.offset;
    match &expr.kind {
        ExprKind::Num(v) => Ok(*v),
        ExprKind::Var => Ok(x),
        ExprKind::Const(c) => Ok(c.value()),
        ExprKind::Neg(a) => Ok(-eval(a, x)?),
        ExprKind::Bin(op, a, b) => {
            let va = eval(a, x)?;
            let vb = eval(b, x)?;
            match op {
                BinOp::Add => finite(va + vb, off),
                BinOp::Sub => finite(va - vb, off),
                BinOp::Mul => finite(va * vb, off),
                BinOp::Div => {
                    if vb == 0.0 {
                        Err(ExprError::Eval {
                            kind: EvalErrorKind::DivByZero,
                            offset: off,
                        })
                    } else {
                        finite(va / vb, off)
                    }
                }
                BinOp::Pow => finite(va.powf(vb), off),
            }
        }
        ExprKind::Call(func, a) => {
            let va = eval(a, x)?;
            match func {
                UnaryFunc::Exp => finite(va.exp(), off),
                UnaryFunc::Ln => {
                    if va <= 0.0 {
                        Err(ExprError::Eval {
                            kind: EvalErrorKind::LogDomain,
                            offset: off,
                        })
                    } else {
                        finite(va.ln(), off)
                    }
                }
                UnaryFunc::Abs => Ok(va.abs()),
                UnaryFunc::Sqrt => {
                    if va < 0.0 {
                        Err(ExprError::Eval {
                            kind: EvalErrorKind::SqrtDomain,
                            offset: off,
                        })
                    } else {
                        Ok(va.sqrt())
                    }
                }
            }
        }
    }
}

// --------------------------------------------- derivative cross-checking

/// Outcome of checking a claimed derivative against central differences.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeReport {
    pub passed: bool,
    /// Largest relative deviation `|centered difference - fprime(x)| /
    /// max(1, |fprime(x)|)` over the sample points.
    pub worst_rel_dev: f64,
    /// Sample point where the worst deviation occurred.
    pub worst_at: f64,
    /// Evaluation failure, if one aborted the check.
    pub error: Option<(f64, ExprError)>,
}

/// Tolerance for [`validate_derivative`]: with step `h ~ 1e-5` the centered
/// difference carries `O(h^2) ~ 1e-10` truncation error, so a genuine
/// derivative sits far below this and a wrong one sits far above.
pub const DERIVATIVE_TOL: f64 = 1e-6;

/// Checks that `fprime` matches the centered difference of `f` at `samples`
/// interior points of `(0, b)`.
///
/// This is a smoke test against transcription mistakes in a corpus file,
/// not a symbolic differentiation: it samples `x = b (i + 1/2) / n` and
/// compares `(f(x+h) - f(x-h)) / 2h` with `fprime(x)` at relative tolerance
/// [`DERIVATIVE_TOL`], using `h = 1e-5 * max(1, x)`. Deterministic.
pub fn validate_derivative(f: &Expr, fprime: &Expr, b: f64, samples: usize) -> DerivativeReport {
    let mut worst = 0.0_f64;
    let mut worst_at = f64::NAN;
    for i in 0..samples {
        let x = b * (i as f64 + 0.5) / samples as f64;
        let h = 1e-5 * x.abs().max(1.0);
        let step = |p: f64| eval(f, p);
        let (hi, lo, dp) = match (step(x + h), step(x - h), eval(fprime, x)) {
            (Ok(hi), Ok(lo), Ok(dp)) => (hi, lo, dp),
            (Err(e), ..) => {
                return DerivativeReport {
                    passed: false,
                    worst_rel_dev: f64::INFINITY,
                    worst_at: x + h,
                    error: Some((x + h, e)),
                }
            }
            (_, Err(e), _) => {
                return DerivativeReport {
                    passed: false,
                    worst_rel_dev: f64::INFINITY,
                    worst_at: x - h,
                    error: Some((x - h, e)),
                }
            }
            (_, _, Err(e)) => {
                return DerivativeReport {
                    passed: false,
                    worst_rel_dev: f64::INFINITY,
                    worst_at: x,
                    error: Some((x, e)),
                }
            }
        };
        let centered = (hi - lo) / (2.0 * h);
        let dev = (centered - dp).abs() / dp.abs().max(1.0);
        if dev > worst || worst_at.is_nan() {
            worst = dev;
            worst_at = x;
        }
    }
    DerivativeReport {
        passed: worst <= DERIVATIVE_TOL,
        worst_rel_dev: worst,
        worst_at,
        error: None,
    }
}
