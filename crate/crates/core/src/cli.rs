//! Problem files, mode dispatch and report rendering for the `fsig` binary.
//!
//! A problem file is line oriented; `#` starts a comment:
//!
//! ```text
//! p = 3
//! vars = x, y, z
//! order = degrevlex
//! system = quotient { J = [x^2 - y^2*z] }
//! mode = ratio
//! emax = 3
//! ```
//!
//! The `system` value may continue over several lines until its brackets
//! balance.

use std::fmt;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::is_prime;
use crate::groebner::Limits;
use crate::newton::{decimal, monomial_signature, NewtonError};
use crate::poly::{Polynomial, Ring, TermOrder};
use crate::signature::{
    is_f_pure, signature_sequence, splitting_prime_candidate, splitting_ratio, Compatibility, FPurity, Method, Options,
    SignatureError, SplittingReport,
};
use crate::systems::{make_system, CeilingConvention, SystemError, SystemExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: {msg}")]
    Semantic { line: usize, msg: String },
}

impl ProblemError {
    fn syntax(pos: Pos, msg: impl Into<String>) -> ProblemError {
        ProblemError::Syntax {
            line: pos.line,
            col: pos.col,
            msg: msg.into(),
        }
    }

    fn semantic(line: usize, msg: impl Into<String>) -> ProblemError {
        ProblemError::Semantic { line, msg: msg.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Signature,
    Ratio,
    Prime,
    Fpure,
    Monomial,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Signature => "signature",
            Mode::Ratio => "ratio",
            Mode::Prime => "prime",
            Mode::Fpure => "fpure",
            Mode::Monomial => "monomial",
        }
    }
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    match s {
        "signature" => Ok(Mode::Signature),
        "ratio" => Ok(Mode::Ratio),
        "prime" => Ok(Mode::Prime),
        "fpure" => Ok(Mode::Fpure),
        "monomial" => Ok(Mode::Monomial),
        _ => Err(format!("unknown mode `{s}`; expected signature, ratio, prime, fpure or monomial")),
    }
}

/// `start : step : end`, inclusive of `end` when it lies on the grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sweep {
    pub start: BigRational,
    pub step: BigRational,
    pub end: BigRational,
}

impl Sweep {
    pub fn points(&self) -> Vec<BigRational> {
        let mut out = Vec::new();
        let mut t = self.start.clone();
        while t <= self.end {
            out.push(t.clone());
            t += &self.step;
        }
        out
    }
}

/// A validated problem. Polynomials in `system` are stored in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub p: u64,
    pub vars: Vec<String>,
    pub order: TermOrder,
    pub system: SystemExpr,
    pub mode: Mode,
    pub emax: u32,
    pub t_sweep: Option<Sweep>,
    pub ceiling: CeilingConvention,
    pub threshold_deg: Option<u64>,
}

pub const DEFAULT_EMAX: u32 = 2;

impl Problem {
    pub fn ring(&self) -> Ring {
        Ring::new(self.p, &self.vars, self.order.clone()).expect("validated problem")
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, gens: &[String]) -> fmt::Result {
    write!(f, "[{}]", gens.join(", "))
}

fn write_expr(f: &mut fmt::Formatter<'_>, expr: &SystemExpr) -> fmt::Result {
    match expr {
        SystemExpr::Quotient { j } => {
            f.write_str("quotient { J = ")?;
            write_list(f, j)?;
            f.write_str(" }")
        }
        SystemExpr::Pair { a, t } => {
            f.write_str("pair { a = ")?;
            write_list(f, a)?;
            write!(f, ", t = {t} }}")
        }
        SystemExpr::Product(parts) => {
            f.write_str("product [")?;
            for (i, part) in parts.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write_expr(f, part)?;
            }
            f.write_str("]")
        }
    }
}

/// Canonical problem-file text; parsing it gives back the same problem.
impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p = {}", self.p)?;
        writeln!(f, "vars = {}", self.vars.join(", "))?;
        let order = match self.order {
            TermOrder::Lex => "lex",
            _ => "degrevlex",
        };
        writeln!(f, "order = {order}")?;
        f.write_str("system = ")?;
        write_expr(f, &self.system)?;
        writeln!(f)?;
        writeln!(f, "mode = {}", self.mode.name())?;
        writeln!(f, "emax = {}", self.emax)?;
        if let Some(s) = &self.t_sweep {
            writeln!(f, "t_sweep = {} : {} : {}", s.start, s.step, s.end)?;
        }
        let ceiling = match self.ceiling {
            CeilingConvention::PMinusOne => "pminusone",
            CeilingConvention::Pe => "pe",
        };
        writeln!(f, "ceiling = {ceiling}")?;
        if let Some(d) = self.threshold_deg {
            writeln!(f, "threshold_deg = {d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

/// A value with the source position of each of its characters.
#[derive(Debug, Clone)]
struct Span {
    chars: Vec<(char, Pos)>,
    /// Position just past the end, for "unexpected end" errors.
    end: Pos,
}

impl Span {
    fn text(&self) -> String {
        self.chars.iter().map(|(c, _)| *c).collect()
    }

    fn start(&self) -> Pos {
        self.chars.first().map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn trimmed(&self) -> Span {
        let s = self.chars.iter().position(|(c, _)| !c.is_whitespace());
        let e = self.chars.iter().rposition(|(c, _)| !c.is_whitespace());
        match (s, e) {
            (Some(s), Some(e)) => Span {
                chars: self.chars[s..=e].to_vec(),
                end: self.end,
            },
            _ => Span {
                chars: Vec::new(),
                end: self.end,
            },
        }
    }

    /// Position of byte offset `off` in `self.text()`.
    fn pos_at_byte(&self, off: usize) -> Pos {
        let mut bytes = 0;
        for (c, p) in &self.chars {
            if bytes >= off {
                return *p;
            }
            bytes += c.len_utf8();
        }
        self.end
    }
}

#[derive(Debug, Clone)]
struct Entry {
    key: String,
    key_pos: Pos,
    value: Span,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn bracket_balance(chars: &[(char, Pos)]) -> i64 {
    chars
        .iter()
        .map(|(c, _)| match c {
            '[' | '{' | '(' => 1,
            ']' | '}' | ')' => -1,
            _ => 0,
        })
        .sum()
}

fn split_entries(text: &str) -> Result<Vec<Entry>, ProblemError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut entries = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let line_no = i + 1;
        let content = strip_comment(lines[i]);
        i += 1;
        if content.trim().is_empty() {
            continue;
        }
        let eq = content.find('=').ok_or_else(|| {
            let col = content.len() - content.trim_start().len() + 1;
            ProblemError::syntax(Pos { line: line_no, col }, "expected `key = value`")
        })?;
        let key = content[..eq].trim();
        let key_col = content.len() - content.trim_start().len() + 1;
        let key_pos = Pos { line: line_no, col: key_col };
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(ProblemError::syntax(key_pos, format!("invalid key `{key}`")));
        }
        let value_col = content[..=eq].chars().count() + 1;
        let mut chars: Vec<(char, Pos)> = content[eq + 1..]
            .chars()
            .enumerate()
            .map(|(k, c)| (c, Pos { line: line_no, col: value_col + k }))
            .collect();
        let mut end = Pos {
            line: line_no,
            col: content.chars().count() + 1,
        };
        if key == "system" {
            while bracket_balance(&chars) > 0 && i < lines.len() {
                let more = strip_comment(lines[i]);
                chars.push(('\n', end));
                chars.extend(more.chars().enumerate().map(|(k, c)| (c, Pos { line: i + 1, col: k + 1 })));
                end = Pos {
                    line: i + 1,
                    col: more.chars().count() + 1,
                };
                i += 1;
            }
        }
        entries.push(Entry {
            key: key.to_string(),
            key_pos,
            value: Span { chars, end }.trimmed(),
        });
    }
    Ok(entries)
}

#[derive(Debug, Clone)]
struct RawPoly {
    span: Span,
}

#[derive(Debug, Clone)]
enum RawSystem {
    Quotient(Vec<RawPoly>),
    Pair(Vec<RawPoly>, BigRational, Pos),
    Product(Vec<RawSystem>),
}

struct Cursor<'a> {
    span: &'a Span,
    at: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.at < self.span.chars.len() && self.span.chars[self.at].0.is_whitespace() {
            self.at += 1;
        }
    }

    fn pos(&self) -> Pos {
        self.span.chars.get(self.at).map(|(_, p)| *p).unwrap_or(self.span.end)
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.span.chars.get(self.at).map(|(c, _)| *c)
    }

    fn expect(&mut self, want: char) -> Result<(), ProblemError> {
        match self.peek() {
            Some(c) if c == want => {
                self.at += 1;
                Ok(())
            }
            Some(c) => Err(ProblemError::syntax(self.pos(), format!("expected `{want}`, found `{c}`"))),
            None => Err(ProblemError::syntax(self.pos(), format!("expected `{want}`, found end of input"))),
        }
    }

    fn word(&mut self) -> Result<(String, Pos), ProblemError> {
        self.skip_ws();
        let pos = self.pos();
        let mut w = String::new();
        while let Some((c, _)) = self.span.chars.get(self.at) {
            if c.is_alphanumeric() || *c == '_' {
                w.push(*c);
                self.at += 1;
            } else {
                break;
            }
        }
        if w.is_empty() {
            return Err(ProblemError::syntax(pos, "expected a keyword"));
        }
        Ok((w, pos))
    }

    fn keyword(&mut self, want: &str) -> Result<(), ProblemError> {
        let (w, pos) = self.word()?;
        if w != want {
            return Err(ProblemError::syntax(pos, format!("expected `{want}`, found `{w}`")));
        }
        Ok(())
    }

    fn poly_list(&mut self) -> Result<Vec<RawPoly>, ProblemError> {
        self.expect('[')?;
        let mut out = Vec::new();
        if self.peek() == Some(']') {
            self.at += 1;
            return Ok(out);
        }
        loop {
            let start = self.at;
            let mut depth = 0i64;
            while let Some((c, _)) = self.span.chars.get(self.at) {
                match c {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    ',' | ']' if depth == 0 => break,
                    _ => {}
                }
                self.at += 1;
            }
            let span = Span {
                chars: self.span.chars[start..self.at].to_vec(),
                end: self.pos(),
            }
            .trimmed();
            if span.chars.is_empty() {
                return Err(ProblemError::syntax(self.pos(), "expected a polynomial"));
            }
            out.push(RawPoly { span });
            match self.peek() {
                Some(',') => self.at += 1,
                Some(']') => {
                    self.at += 1;
                    return Ok(out);
                }
                _ => return Err(ProblemError::syntax(self.pos(), "unterminated polynomial list")),
            }
        }
    }

    fn rational(&mut self) -> Result<(BigRational, Pos), ProblemError> {
        self.skip_ws();
        let pos = self.pos();
        let start = self.at;
        while let Some((c, _)) = self.span.chars.get(self.at) {
            if matches!(c, '}' | ',' | ']') {
                break;
            }
            self.at += 1;
        }
        let text: String = self.span.chars[start..self.at].iter().map(|(c, _)| *c).collect();
        parse_rational(&text).map(|r| (r, pos)).map_err(|msg| ProblemError::syntax(pos, msg))
    }

    fn system(&mut self) -> Result<RawSystem, ProblemError> {
        let (w, pos) = self.word()?;
        match w.as_str() {
            "quotient" => {
                self.expect('{')?;
                self.keyword("J")?;
                self.expect('=')?;
                let j = self.poly_list()?;
                self.expect('}')?;
                Ok(RawSystem::Quotient(j))
            }
            "pair" => {
                self.expect('{')?;
                self.keyword("a")?;
                self.expect('=')?;
                let a = self.poly_list()?;
                self.expect(',')?;
                self.keyword("t")?;
                self.expect('=')?;
                let (t, tpos) = self.rational()?;
                self.expect('}')?;
                Ok(RawSystem::Pair(a, t, tpos))
            }
            "product" => {
                self.expect('[')?;
                let mut parts = vec![self.system()?];
                loop {
                    match self.peek() {
                        Some(',') => {
                            self.at += 1;
                            parts.push(self.system()?);
                        }
                        Some(']') => {
                            self.at += 1;
                            return Ok(RawSystem::Product(parts));
                        }
                        _ => return Err(ProblemError::syntax(self.pos(), "expected `,` or `]` in product")),
                    }
                }
            }
            other => Err(ProblemError::syntax(
                pos,
                format!("unknown system `{other}`; expected quotient, pair or product"),
            )),
        }
    }
}

fn parse_rational(text: &str) -> Result<BigRational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("invalid rational `{text}`"))?;
    let den: BigInt = den.parse().map_err(|_| format!("invalid rational `{text}`"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in `{text}`"));
    }
    Ok(BigRational::new(num, den))
}

fn parse_system_value(span: &Span) -> Result<RawSystem, ProblemError> {
    let mut cur = Cursor { span, at: 0 };
    let sys = cur.system()?;
    if let Some(c) = cur.peek() {
        return Err(ProblemError::syntax(cur.pos(), format!("unexpected `{c}` after system")));
    }
    Ok(sys)
}

fn canonical_polys(ring: &Ring, polys: &[RawPoly]) -> Result<(Vec<String>, Vec<Polynomial>), ProblemError> {
    let mut texts = Vec::new();
    let mut parsed = Vec::new();
    for raw in polys {
        let f = ring.parse(&raw.span.text()).map_err(|e| {
            let pos = raw.span.pos_at_byte(e.offset());
            let msg = match &e {
                crate::poly::ParseError::Syntax { msg, .. } => msg.clone(),
                crate::poly::ParseError::UnknownVariable { name, .. } => format!("unknown variable `{name}`"),
            };
            ProblemError::syntax(pos, msg)
        })?;
        texts.push(f.to_string());
        parsed.push(f);
    }
    Ok((texts, parsed))
}

fn resolve_system(ring: &Ring, raw: &RawSystem, line: usize) -> Result<SystemExpr, ProblemError> {
    match raw {
        RawSystem::Quotient(j) => {
            let (texts, parsed) = canonical_polys(ring, j)?;
            if parsed.iter().all(|f| f.is_zero()) {
                return Err(ProblemError::semantic(line, "quotient ideal J is zero"));
            }
            Ok(SystemExpr::Quotient { j: texts })
        }
        RawSystem::Pair(a, t, tpos) => {
            let (texts, parsed) = canonical_polys(ring, a)?;
            if parsed.iter().all(|f| f.is_zero()) {
                return Err(ProblemError::semantic(line, "pair ideal a is zero"));
            }
            if t.is_negative() {
                return Err(ProblemError::semantic(tpos.line, format!("t = {t} must be nonnegative")));
            }
            Ok(SystemExpr::Pair { a: texts, t: t.clone() })
        }
        RawSystem::Product(parts) => Ok(SystemExpr::Product(
            parts
                .iter()
                .map(|p| resolve_system(ring, p, line))
                .collect::<Result<_, _>>()?,
        )),
    }
}

fn parse_uint<T: FromStr>(entry: &Entry) -> Result<T, ProblemError> {
    entry
        .value
        .text()
        .trim()
        .parse()
        .map_err(|_| ProblemError::syntax(entry.value.start(), format!("`{}` expects a nonnegative integer", entry.key)))
}

/// Parse and validate a problem file.
pub fn parse_problem_file(text: &str) -> Result<Problem, ProblemError> {
    let entries = split_entries(text)?;
    let mut seen: Vec<&str> = Vec::new();
    for e in &entries {
        const KEYS: [&str; 9] = [
            "p",
            "vars",
            "order",
            "system",
            "mode",
            "emax",
            "t_sweep",
            "ceiling",
            "threshold_deg",
        ];
        if !KEYS.contains(&e.key.as_str()) {
            return Err(ProblemError::syntax(e.key_pos, format!("unknown key `{}`", e.key)));
        }
        if seen.contains(&e.key.as_str()) {
            return Err(ProblemError::syntax(e.key_pos, format!("duplicate key `{}`", e.key)));
        }
        seen.push(&e.key);
    }
    let get = |k: &str| entries.iter().find(|e| e.key == k);
    let last_line = text.lines().count().max(1);
    let require = |k: &str| get(k).ok_or_else(|| ProblemError::semantic(last_line, format!("missing `{k}`")));

    let p_entry = require("p")?;
    let p: u64 = parse_uint(p_entry)?;
    if !is_prime(p) {
        return Err(ProblemError::semantic(p_entry.key_pos.line, format!("p = {p} is not prime")));
    }

    let vars_entry = require("vars")?;
    let mut vars = Vec::new();
    let text_vars = vars_entry.value.text();
    let mut offset = 0;
    for piece in text_vars.split(',') {
        let name = piece.trim();
        let lead = piece.len() - piece.trim_start().len();
        let pos = vars_entry.value.pos_at_byte(offset + lead);
        let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(ProblemError::syntax(pos, format!("invalid variable name `{name}`")));
        }
        if vars.iter().any(|v: &String| v == name) {
            return Err(ProblemError::semantic(vars_entry.key_pos.line, format!("duplicate variable `{name}`")));
        }
        vars.push(name.to_string());
        offset += piece.len() + 1;
    }

    let order = match get("order") {
        None => TermOrder::DegRevLex,
        Some(e) => match e.value.text().trim() {
            "degrevlex" => TermOrder::DegRevLex,
            "lex" => TermOrder::Lex,
            other => {
                return Err(ProblemError::syntax(
                    e.value.start(),
                    format!("unknown order `{other}`; expected degrevlex or lex"),
                ))
            }
        },
    };
    let ring = Ring::new(p, &vars, order.clone())
        .map_err(|err| ProblemError::semantic(vars_entry.key_pos.line, err.to_string()))?;

    let sys_entry = require("system")?;
    let raw = parse_system_value(&sys_entry.value)?;
    let system = resolve_system(&ring, &raw, sys_entry.key_pos.line)?;

    let mode = match get("mode") {
        None => Mode::Signature,
        Some(e) => parse_mode(e.value.text().trim()).map_err(|m| ProblemError::syntax(e.value.start(), m))?,
    };
    let emax = match get("emax") {
        None => DEFAULT_EMAX,
        Some(e) => {
            let v: u32 = parse_uint(e)?;
            if v == 0 {
                return Err(ProblemError::semantic(e.key_pos.line, "emax must be at least 1"));
            }
            v
        }
    };
    let ceiling = match get("ceiling") {
        None => CeilingConvention::PMinusOne,
        Some(e) => match e.value.text().trim() {
            "pminusone" => CeilingConvention::PMinusOne,
            "pe" => CeilingConvention::Pe,
            other => {
                return Err(ProblemError::syntax(
                    e.value.start(),
                    format!("unknown ceiling `{other}`; expected pminusone or pe"),
                ))
            }
        },
    };
    let threshold_deg = get("threshold_deg").map(parse_uint).transpose()?;
    let t_sweep = match get("t_sweep") {
        None => None,
        Some(e) => {
            if mode != Mode::Monomial {
                return Err(ProblemError::semantic(e.key_pos.line, "t_sweep is only valid in monomial mode"));
            }
            let text = e.value.text();
            let parts: Vec<&str> = text.split(':').collect();
            if parts.len() != 3 {
                return Err(ProblemError::syntax(e.value.start(), "t_sweep expects start : step : end"));
            }
            let r = |s: &str| parse_rational(s).map_err(|m| ProblemError::syntax(e.value.start(), m));
            let sweep = Sweep {
                start: r(parts[0])?,
                step: r(parts[1])?,
                end: r(parts[2])?,
            };
            if sweep.start.is_negative() {
                return Err(ProblemError::semantic(e.key_pos.line, "t_sweep start must be nonnegative"));
            }
            if !sweep.step.is_positive() {
                return Err(ProblemError::semantic(e.key_pos.line, "t_sweep step must be positive"));
            }
            Some(sweep)
        }
    };
    if mode == Mode::Monomial {
        let ok = match &system {
            SystemExpr::Pair { a, .. } => a.iter().all(|g| ring.parse(g).map(|f| f.is_monomial()).unwrap_or(false)),
            _ => false,
        };
        if !ok {
            return Err(ProblemError::semantic(
                sys_entry.key_pos.line,
                "monomial mode needs a single pair system with monomial generators",
            ));
        }
    }
    Ok(Problem {
        p,
        vars,
        order,
        system,
        mode,
        emax,
        t_sweep,
        ceiling,
        threshold_deg,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum MethodArg {
    Groebner,
    #[default]
    Linear,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Groebner => Method::Groebner,
            MethodArg::Linear => Method::Linear,
            MethodArg::Both => Method::Both,
        }
    }
}

/// Command-line interface of `fsig`.
#[derive(Debug, Clone, Parser)]
#[command(name = "fsig", version, about = "F-splitting numbers, F-signatures and F-splitting ratios over F_p")]
pub struct Args {
    /// Problem file
    pub file: std::path::PathBuf,
    /// Emit JSON instead of a table
    #[arg(long)]
    pub json: bool,
    /// Override `emax` from the problem file
    #[arg(long)]
    pub emax: Option<u32>,
    /// Degree threshold for splitting-prime candidates
    #[arg(long = "threshold-deg")]
    pub threshold_deg: Option<u64>,
    /// Algorithm for splitting numbers
    #[arg(long, value_enum, default_value_t = MethodArg::Linear)]
    pub method: MethodArg,
}

/// Overrides applied on top of a parsed problem.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub emax: Option<u32>,
    pub threshold_deg: Option<u64>,
    pub method: Method,
    pub limits: Option<Limits>,
}

#[derive(Debug, Clone)]
pub struct MonomialResult {
    pub t: BigRational,
    pub value: BigRational,
    pub sweep: Option<Vec<(BigRational, BigRational)>>,
}

#[derive(Debug, Clone)]
pub enum Body {
    Splitting {
        report: Box<SplittingReport>,
        purity: Option<FPurity>,
        compatibility: Option<Compatibility>,
        diagnostics: Vec<String>,
    },
    Monomial(MonomialResult),
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub p: u64,
    pub vars: Vec<String>,
    pub mode: Mode,
    pub emax: u32,
    pub body: Body,
    /// Set when the requested mode cannot be carried out on this input.
    pub infeasible: Option<String>,
}

impl Outcome {
    pub fn partial(&self) -> Option<&str> {
        match &self.body {
            Body::Splitting { report, .. } => report.partial.as_deref(),
            Body::Monomial(_) => None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.partial().is_some() {
            3
        } else if self.infeasible.is_some() {
            2
        } else {
            0
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

impl From<SystemError> for RunError {
    fn from(e: SystemError) -> Self {
        RunError::Signature(e.into())
    }
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Problem(_) | RunError::Io { .. } => 1,
            RunError::Signature(e) if e.is_resource_cap() => 3,
            RunError::Signature(SignatureError::NoPrimeCandidate(_)) => 2,
            RunError::Signature(SignatureError::System(_)) => 1,
            RunError::Signature(_) => 4,
            RunError::Newton(NewtonError::DimensionCap(_)) => 3,
            RunError::Newton(_) => 1,
        }
    }
}

/// Dispatch on the problem's mode.
pub fn run(problem: &Problem, opts: &RunOptions) -> Result<Outcome, RunError> {
    let emax = opts.emax.unwrap_or(problem.emax);
    let ring = match &opts.limits {
        Some(l) => problem.ring().with_limits(l.clone()),
        None => problem.ring(),
    };
    let outcome = |body, infeasible| Outcome {
        p: problem.p,
        vars: problem.vars.clone(),
        mode: problem.mode,
        emax,
        body,
        infeasible,
    };
    if problem.mode == Mode::Monomial {
        let SystemExpr::Pair { a, t } = &problem.system else {
            unreachable!("validated by the parser");
        };
        let exps: Vec<Vec<u32>> = a
            .iter()
            .map(|g| {
                let f = ring.parse(g).expect("canonical");
                f.leading_monomial().expect("nonzero").exponents().to_vec()
            })
            .collect();
        let value = monomial_signature(&exps, t)?;
        let sweep = match &problem.t_sweep {
            None => None,
            Some(s) => Some(
                s.points()
                    .into_iter()
                    .map(|t| monomial_signature(&exps, &t).map(|v| (t, v)))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        return Ok(outcome(
            Body::Monomial(MonomialResult {
                t: t.clone(),
                value,
                sweep,
            }),
            None,
        ));
    }

    let sys = make_system(&problem.system, &ring, problem.ceiling)?;
    let sig_opts = Options {
        method: opts.method,
        threshold_degree: opts.threshold_deg.or(problem.threshold_deg),
        dimension: None,
    };
    let mut report = signature_sequence(&sys, emax, &sig_opts)?;
    let mut purity = None;
    let mut compatibility = None;
    let mut diagnostics = Vec::new();
    let mut infeasible = None;
    if report.partial.is_none() {
        match problem.mode {
            Mode::Fpure => {
                purity = Some(is_f_pure(&sys, emax, opts.method)?);
            }
            Mode::Prime | Mode::Ratio => {
                if !report.f_pure {
                    infeasible = Some(format!("not F-pure up to e = {emax}; no splitting prime"));
                } else {
                    let cand = splitting_prime_candidate(&sys, emax, &sig_opts)?;
                    diagnostics = cand.diagnostics;
                    compatibility = cand.compatibility;
                    match cand.ideal {
                        None => infeasible = Some("no compatible splitting-prime candidate".into()),
                        Some(prime) => {
                            if problem.mode == Mode::Ratio {
                                report.ratio = Some(splitting_ratio(&sys, &report.rows, &prime)?);
                            }
                            report.prime_candidate = Some(prime.generators().to_vec());
                        }
                    }
                }
            }
            Mode::Signature | Mode::Monomial => {}
        }
    }
    Ok(outcome(
        Body::Splitting {
            report: Box::new(report),
            purity,
            compatibility,
            diagnostics,
        },
        infeasible,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
}

fn frac_dec(x: &BigRational) -> String {
    format!("{x} ≈ {}", decimal(x, 6))
}

fn int_value(n: impl ToString) -> Value {
    serde_json::from_str(&n.to_string()).expect("integer literal")
}

fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..headers.len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let line = |cells: Vec<String>| {
        cells
            .iter()
            .enumerate()
            .map(|(c, s)| {
                if c + 1 == cells.len() {
                    s.clone()
                } else {
                    format!("{s:<w$}", w = widths[c])
                }
            })
            .collect::<Vec<_>>()
            .join(" | ")
    };
    let mut out = line(headers.iter().map(|h| h.to_string()).collect());
    out.push('\n');
    for r in rows {
        out.push_str(&line(r.clone()));
        out.push('\n');
    }
    out
}

fn emit_table(o: &Outcome) -> String {
    let mut out = String::new();
    out.push_str(&format!("p = {}\nvars = {}\nmode = {}\n", o.p, o.vars.join(", "), o.mode.name()));
    match &o.body {
        Body::Monomial(m) => {
            if let Some(sweep) = &m.sweep {
                out.clear();
                out.push_str("t,exact,decimal\n");
                for (t, v) in sweep {
                    out.push_str(&format!("{t},{v},{}\n", decimal(v, 6)));
                }
                return out;
            }
            out.push_str(&format!("t = {}\ns = {}\n", m.t, frac_dec(&m.value)));
        }
        Body::Splitting {
            report,
            purity,
            compatibility,
            diagnostics,
        } => {
            out.push_str(&format!("system = {}\nd = {}\n\n", report.system, report.d));
            let rows: Vec<Vec<String>> = report
                .rows
                .iter()
                .map(|r| vec![r.e.to_string(), r.a_e.to_string(), frac_dec(&r.s_e)])
                .collect();
            out.push_str(&table(&["e", "a_e", "s_e"], &rows));
            out.push('\n');
            out.push_str(&format!("estimate = {}\n", frac_dec(&report.estimate)));
            out.push_str(&format!("error_envelope = {}\n", frac_dec(&report.error_envelope)));
            if report.fit_period > 1 {
                out.push_str(&format!("fit_period = {}\n", report.fit_period));
            }
            let gamma: Vec<String> = report.gamma.iter().map(|g| g.to_string()).collect();
            out.push_str(&format!("gamma = {{{}}}\n", gamma.join(", ")));
            match report.index {
                Some(i) => out.push_str(&format!("index = {i}\n")),
                None => out.push_str("index = none\n"),
            }
            match purity {
                Some(FPurity {
                    f_pure: true,
                    witness: Some(w),
                    ..
                }) => out.push_str(&format!("f_pure = true (witness e = {w})\n")),
                Some(FPurity {
                    f_pure: false,
                    checked_up_to,
                    ..
                }) => out.push_str(&format!("f_pure = false (not F-pure up to e = {checked_up_to})\n")),
                _ => out.push_str(&format!("f_pure = {}\n", report.f_pure)),
            }
            if let Some(c) = &report.prime_candidate {
                let gens: Vec<String> = c.iter().map(|g| g.to_string()).collect();
                out.push_str(&format!("prime_candidate = [{}]\n", gens.join(", ")));
            }
            if let Some(c) = compatibility {
                for (e, ok) in &c.transcript {
                    out.push_str(&format!("compatible at e = {e}: {}\n", if *ok { "yes" } else { "no" }));
                }
            }
            for d in diagnostics {
                out.push_str(&format!("note: {d}\n"));
            }
            if let Some(r) = &report.ratio {
                out.push_str(&format!("\nd' = {}\n", r.d_prime));
                let rows: Vec<Vec<String>> = r.rows.iter().map(|(e, v)| vec![e.to_string(), frac_dec(v)]).collect();
                out.push_str(&table(&["e", "r_e"], &rows));
                out.push_str(&format!(
                    "ratio_estimate = {}\nratio_error_envelope = {}\n",
                    frac_dec(&r.estimate),
                    frac_dec(&r.error_envelope)
                ));
            }
            if let Some(p) = &report.partial {
                out.push_str(&format!("partial: {p}\n"));
            }
        }
    }
    if let Some(msg) = &o.infeasible {
        out.push_str(&format!("infeasible: {msg}\n"));
    }
    out
}

fn emit_json(o: &Outcome) -> String {
    let mut obj = serde_json::Map::new();
    obj.insert("p".into(), int_value(o.p));
    obj.insert("vars".into(), json!(o.vars));
    obj.insert("mode".into(), json!(o.mode.name()));
    match &o.body {
        Body::Monomial(m) => {
            obj.insert("d".into(), int_value(o.vars.len()));
            obj.insert("rows".into(), json!([]));
            obj.insert("estimate".into(), json!(m.value.to_string()));
            obj.insert("estimate_num".into(), int_value(m.value.numer()));
            obj.insert("estimate_den".into(), int_value(m.value.denom()));
            obj.insert("error_envelope".into(), json!("0"));
            obj.insert("gamma".into(), json!([]));
            obj.insert("index".into(), Value::Null);
            obj.insert("f_pure".into(), Value::Null);
            let points: Vec<(BigRational, BigRational)> = match &m.sweep {
                Some(s) => s.clone(),
                None => vec![(m.t.clone(), m.value.clone())],
            };
            let exact: Vec<Value> = points
                .iter()
                .map(|(t, v)| {
                    json!({
                        "t": t.to_string(),
                        "value": v.to_string(),
                        "decimal": decimal(v, 6),
                    })
                })
                .collect();
            obj.insert("exact".into(), Value::Array(exact));
            obj.insert("partial".into(), json!(false));
        }
        Body::Splitting {
            report,
            purity,
            compatibility,
            ..
        } => {
            obj.insert("system".into(), json!(report.system));
            obj.insert("d".into(), int_value(report.d));
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| {
                    let mut row = serde_json::Map::new();
                    row.insert("e".into(), int_value(r.e));
                    row.insert("a_e".into(), int_value(&r.a_e));
                    row.insert("s_e_num".into(), int_value(r.s_e.numer()));
                    row.insert("s_e_den".into(), int_value(r.s_e.denom()));
                    Value::Object(row)
                })
                .collect();
            obj.insert("rows".into(), Value::Array(rows));
            obj.insert("estimate".into(), json!(report.estimate.to_string()));
            obj.insert("estimate_num".into(), int_value(report.estimate.numer()));
            obj.insert("estimate_den".into(), int_value(report.estimate.denom()));
            obj.insert("error_envelope".into(), json!(report.error_envelope.to_string()));
            obj.insert("fit_period".into(), int_value(report.fit_period));
            obj.insert("gamma".into(), json!(report.gamma));
            obj.insert(
                "index".into(),
                report.index.map(int_value).unwrap_or(Value::Null),
            );
            let f_pure = purity.as_ref().map(|p| p.f_pure).unwrap_or(report.f_pure);
            obj.insert("f_pure".into(), json!(f_pure));
            if let Some(w) = purity.as_ref().and_then(|p| p.witness) {
                obj.insert("witness".into(), int_value(w));
            }
            if let Some(c) = &report.prime_candidate {
                let gens: Vec<String> = c.iter().map(|g| g.to_string()).collect();
                obj.insert("prime_candidate".into(), json!(gens));
            }
            if let Some(c) = compatibility {
                let t: Vec<Value> = c.transcript.iter().map(|(e, ok)| json!({"e": e, "compatible": ok})).collect();
                obj.insert("compatibility".into(), Value::Array(t));
            }
            if let Some(r) = &report.ratio {
                obj.insert("d_prime".into(), int_value(r.d_prime));
                let rows: Vec<Value> = r
                    .rows
                    .iter()
                    .map(|(e, v)| {
                        let mut row = serde_json::Map::new();
                        row.insert("e".into(), int_value(e));
                        row.insert("r_e_num".into(), int_value(v.numer()));
                        row.insert("r_e_den".into(), int_value(v.denom()));
                        Value::Object(row)
                    })
                    .collect();
                obj.insert("ratio_rows".into(), Value::Array(rows));
                obj.insert("ratio_estimate_num".into(), int_value(r.estimate.numer()));
                obj.insert("ratio_estimate_den".into(), int_value(r.estimate.denom()));
                obj.insert("ratio_error_envelope".into(), json!(r.error_envelope.to_string()));
            }
            obj.insert("partial".into(), json!(report.partial.is_some()));
            if let Some(p) = &report.partial {
                obj.insert("partial_reason".into(), json!(p));
            }
        }
    }
    if let Some(msg) = &o.infeasible {
        obj.insert("infeasible".into(), json!(msg));
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable");
    s.push('\n');
    s
}

/// Render an outcome. Output depends only on the outcome, so identical
/// inputs give identical bytes.
pub fn emit_report(o: &Outcome, format: Format) -> String {
    match format {
        Format::Table => emit_table(o),
        Format::Json => emit_json(o),
    }
}

/// Everything the binary does, with captured output.
pub struct Execution {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn execute(args: &Args) -> Execution {
    let fail = |err: RunError| Execution {
        stdout: String::new(),
        stderr: format!("error: {err}\n"),
        code: err.exit_code(),
    };
    let text = match std::fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => {
            return fail(RunError::Io {
                path: args.file.display().to_string(),
                msg: e.to_string(),
            })
        }
    };
    let problem = match parse_problem_file(&text) {
        Ok(p) => p,
        Err(e) => return fail(e.into()),
    };
    if args.emax == Some(0) {
        return fail(ProblemError::semantic(0, "--emax must be at least 1").into());
    }
    let opts = RunOptions {
        emax: args.emax,
        threshold_deg: args.threshold_deg,
        method: args.method.into(),
        limits: None,
    };
    match run(&problem, &opts) {
        Ok(outcome) => {
            let format = if args.json { Format::Json } else { Format::Table };
            let mut stderr = String::new();
            if let Some(p) = outcome.partial() {
                stderr.push_str(&format!("warning: partial result: {p}\n"));
            }
            if let Some(msg) = &outcome.infeasible {
                stderr.push_str(&format!("error: {msg}\n"));
            }
            Execution {
                stdout: emit_report(&outcome, format),
                stderr,
                code: outcome.exit_code(),
            }
        }
        Err(e) => fail(e),
    }
}
