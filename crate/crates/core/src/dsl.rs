//! The `.nsp` text format for declaring nested spaces.
//!
//! ```text
//! # the extended Sierpinski gasket
//! space gasket {
//!     parts 3;
//!     rule 0.(1) = 1.(0);
//!     rule 0.(2) = 2.(0);
//!     rule 1.(2) = 2.(1);
//!     corner 0.(0);
//!     corner 1.(1);
//!     corner 2.(2);
//! }
//! ```
//!
//! Grammar:
//!
//! ```text
//! document := space+
//! space    := "space" IDENT "{" item* "}"
//! item     := "parts" INT ";" | "rule" addr "=" addr ";"
//!           | "corner" addr ";" | "restrict" ("left" | "right") INT ";"
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use std::fmt;

use crate::address::Address;
use crate::error::Error;
use crate::rules::SpaceSpec;

/// Byte range into the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagnosticKind {
    SyntaxError,
    DigitOutOfRange,
    NotCanonicalizable,
    ConflictingRestriction,
    /// Warning: a rule or restriction repeats an earlier one.
    Duplicate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub kind: DiagnosticKind,
    pub span: Span,
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {sev}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for Diagnostic {}

/// A parse failure: the first error diagnostic.
pub type DslError = Diagnostic;

/// Result of parsing a whole document.
#[derive(Clone, Debug)]
pub struct SpecDocument {
    pub source: String,
    /// Spaces parsed before the first error.
    pub specs: Vec<SpaceSpec>,
    pub diagnostics: Vec<Diagnostic>,
}

impl SpecDocument {
    pub fn first_error(&self) -> Option<&Diagnostic> {
        self.diagnostics
            .iter()
            .find(|d| d.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics
            .iter()
            .filter(|d| d.severity == Severity::Warning)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok<'a> {
    Word(&'a str),
    Punct(char),
}

#[derive(Clone, Debug)]
struct Token<'a> {
    tok: Tok<'a>,
    span: Span,
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | ':' | '(' | ')')
}

struct Failure {
    kind: DiagnosticKind,
    span: Span,
    message: String,
}

impl Failure {
    fn syntax(span: Span, message: impl Into<String>) -> Failure {
        Failure {
            kind: DiagnosticKind::SyntaxError,
            span,
            message: message.into(),
        }
    }

    fn from_error(e: Error, span: Span) -> Failure {
        let kind = match e {
            Error::DigitOutOfRange { .. } => DiagnosticKind::DigitOutOfRange,
            Error::NotCanonicalizable { .. } | Error::ScaleInvariantSide { .. } => {
                DiagnosticKind::NotCanonicalizable
            }
            _ => DiagnosticKind::SyntaxError,
        };
        Failure {
            kind,
            span,
            message: e.to_string(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<Token<'_>>, Failure> {
    let mut tokens = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_ascii_whitespace() {
            chars.next();
        } else if c == '#' {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
        } else if matches!(c, '{' | '}' | ';' | '=') {
            chars.next();
            tokens.push(Token {
                tok: Tok::Punct(c),
                span: Span::new(i, i + 1),
            });
        } else if is_word_char(c) {
            let mut end = i;
            while let Some(&(j, c)) = chars.peek() {
                if !is_word_char(c) {
                    break;
                }
                end = j + c.len_utf8();
                chars.next();
            }
            tokens.push(Token {
                tok: Tok::Word(&src[i..end]),
                span: Span::new(i, end),
            });
        } else {
            return Err(Failure::syntax(
                Span::new(i, i + c.len_utf8()),
                format!("unexpected character {c:?}"),
            ));
        }
    }
    Ok(tokens)
}

struct RawRule<'a> {
    left: (&'a str, Span),
    right: (&'a str, Span),
    span: Span,
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token<'a>>,
    pos: usize,
    warnings: Vec<(DiagnosticKind, Span, String)>,
}

impl<'a> Parser<'a> {
    fn eof_span(&self) -> Span {
        Span::new(self.src.len(), self.src.len())
    }

    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self, expected: &str) -> Result<Token<'a>, Failure> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => Err(Failure::syntax(
                self.eof_span(),
                format!("unexpected end of input, expected {expected}"),
            )),
        }
    }

    fn word(&mut self, expected: &str) -> Result<(&'a str, Span), Failure> {
        let t = self.next(expected)?;
        match t.tok {
            Tok::Word(w) => Ok((w, t.span)),
            Tok::Punct(c) => Err(Failure::syntax(
                t.span,
                format!("expected {expected}, found {c:?}"),
            )),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Span, Failure> {
        let (w, span) = self.word(&format!("\"{kw}\""))?;
        if w == kw {
            Ok(span)
        } else {
            Err(Failure::syntax(
                span,
                format!("expected \"{kw}\", found {w:?}"),
            ))
        }
    }

    fn punct(&mut self, p: char) -> Result<Span, Failure> {
        let t = self.next(&format!("{p:?}"))?;
        match t.tok {
            Tok::Punct(c) if c == p => Ok(t.span),
            Tok::Punct(c) => Err(Failure::syntax(
                t.span,
                format!("expected {p:?}, found {c:?}"),
            )),
            Tok::Word(w) => Err(Failure::syntax(
                t.span,
                format!("expected {p:?}, found {w:?}"),
            )),
        }
    }

    fn int(&mut self) -> Result<(u32, Span), Failure> {
        let (w, span) = self.word("an integer")?;
        if !w.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Failure::syntax(
                span,
                format!("expected an integer, found {w:?}"),
            ));
        }
        w.parse::<u32>()
            .map(|v| (v, span))
            .map_err(|_| Failure::syntax(span, format!("integer {w:?} is too large")))
    }

    fn space(&mut self) -> Result<SpaceSpec, Failure> {
        self.keyword("space")?;
        let (name, name_span) = self.word("a space name")?;
        let ident_ok = name.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ident_ok {
            return Err(Failure::syntax(
                name_span,
                format!("invalid space name {name:?}"),
            ));
        }
        self.punct('{')?;

        let mut parts: Option<(u32, Span)> = None;
        let mut left: Option<(u32, Span)> = None;
        let mut right: Option<(u32, Span)> = None;
        let mut rules: Vec<RawRule<'a>> = Vec::new();
        loop {
            let t = self.peek().cloned().ok_or_else(|| {
                Failure::syntax(self.eof_span(), "unclosed space block, expected \"}\"")
            })?;
            match t.tok {
                Tok::Punct('}') => {
                    self.pos += 1;
                    break;
                }
                Tok::Punct(c) => {
                    return Err(Failure::syntax(
                        t.span,
                        format!("expected an item, found {c:?}"),
                    ));
                }
                Tok::Word("parts") => {
                    self.pos += 1;
                    let (n, span) = self.int()?;
                    self.punct(';')?;
                    if parts.is_some() {
                        return Err(Failure::syntax(span, "duplicate parts declaration"));
                    }
                    if n < 2 {
                        return Err(Failure::syntax(
                            span,
                            format!("part count must be at least 2, got {n}"),
                        ));
                    }
                    parts = Some((n, span));
                }
                Tok::Word("rule") => {
                    self.pos += 1;
                    let l = self.word("an address")?;
                    self.punct('=')?;
                    let r = self.word("an address")?;
                    let end = self.punct(';')?;
                    rules.push(RawRule {
                        left: l,
                        right: r,
                        span: t.span.join(end),
                    });
                }
                Tok::Word("corner") => {
                    self.pos += 1;
                    let c = self.word("an address")?;
                    let end = self.punct(';')?;
                    rules.push(RawRule {
                        left: c,
                        right: c,
                        span: t.span.join(end),
                    });
                }
                Tok::Word("restrict") => {
                    self.pos += 1;
                    let (dir, dir_span) = self.word("\"left\" or \"right\"")?;
                    let (k, span) = self.int()?;
                    self.punct(';')?;
                    let slot = match dir {
                        "left" => {
                            if k < 1 {
                                return Err(Failure::syntax(span, "left limit must be at least 1"));
                            }
                            &mut left
                        }
                        "right" => &mut right,
                        _ => {
                            return Err(Failure::syntax(
                                dir_span,
                                format!("expected \"left\" or \"right\", found {dir:?}"),
                            ))
                        }
                    };
                    match *slot {
                        Some((prev, _)) if prev != k => {
                            return Err(Failure {
                                kind: DiagnosticKind::ConflictingRestriction,
                                span: t.span.join(span),
                                message: format!("restrict {dir} {k} conflicts with earlier restrict {dir} {prev}"),
                            });
                        }
                        Some(_) => self.warnings.push((
                            DiagnosticKind::Duplicate,
                            t.span.join(span),
                            format!("duplicate restrict {dir} {k}"),
                        )),
                        None => *slot = Some((k, span)),
                    }
                }
                Tok::Word(w) => {
                    return Err(Failure::syntax(
                        t.span,
                        format!("expected parts, rule, corner, restrict or \"}}\", found {w:?}"),
                    ));
                }
            }
        }

        let (n, _) = parts.ok_or_else(|| {
            Failure::syntax(name_span, format!("space {name} has no parts declaration"))
        })?;
        let mut spec = SpaceSpec::new(name, n).map_err(|e| Failure::from_error(e, name_span))?;
        spec.set_left_limit(left.map(|(k, _)| k));
        spec.set_right_limit(right.map(|(k, _)| k));
        for raw in rules {
            let l =
                Address::parse(raw.left.0, n).map_err(|e| Failure::from_error(e, raw.left.1))?;
            let r =
                Address::parse(raw.right.0, n).map_err(|e| Failure::from_error(e, raw.right.1))?;
            let fresh = spec
                .add_rule(&l, &r)
                .map_err(|e| Failure::from_error(e, raw.span))?;
            if !fresh {
                self.warnings.push((
                    DiagnosticKind::Duplicate,
                    raw.span,
                    "rule repeats an earlier one up to scaling and side order".to_string(),
                ));
            }
        }
        Ok(spec)
    }
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(src.len());
    let before = &src.as_bytes()[..offset];
    let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
    let line_start = before
        .iter()
        .rposition(|&b| b == b'\n')
        .map_or(0, |p| p + 1);
    let column = String::from_utf8_lossy(&before[line_start..])
        .chars()
        .count()
        + 1;
    (line, column)
}

fn diagnostic(
    src: &str,
    severity: Severity,
    kind: DiagnosticKind,
    span: Span,
    message: String,
) -> Diagnostic {
    let (line, column) = line_col(src, span.start);
    Diagnostic {
        severity,
        kind,
        span,
        line,
        column,
        message,
    }
}

/// Parses a document, collecting every space up to the first error.
pub fn parse_document(text: &str) -> SpecDocument {
    let mut doc = SpecDocument {
        source: text.to_string(),
        specs: Vec::new(),
        diagnostics: Vec::new(),
    };
    let fail = |doc: &mut SpecDocument, f: Failure| {
        doc.diagnostics
            .push(diagnostic(text, Severity::Error, f.kind, f.span, f.message));
    };
    let tokens = match lex(text) {
        Ok(t) => t,
        Err(f) => {
            fail(&mut doc, f);
            return doc;
        }
    };
    let mut parser = Parser {
        src: text,
        tokens,
        pos: 0,
        warnings: Vec::new(),
    };
    if parser.tokens.is_empty() {
        fail(
            &mut doc,
            Failure::syntax(parser.eof_span(), "expected at least one space"),
        );
        return doc;
    }
    while parser.peek().is_some() {
        let start = parser.peek().map(|t| t.span).unwrap_or(parser.eof_span());
        match parser.space() {
            Ok(spec) => {
                if doc.specs.iter().any(|s| s.name() == spec.name()) {
                    let msg = format!("duplicate space name {}", spec.name());
                    fail(&mut doc, Failure::syntax(start, msg));
                    break;
                }
                doc.specs.push(spec);
            }
            Err(f) => {
                fail(&mut doc, f);
                break;
            }
        }
    }
    for (kind, span, message) in parser.warnings {
        doc.diagnostics
            .push(diagnostic(text, Severity::Warning, kind, span, message));
    }
    doc.diagnostics
        .sort_by_key(|d| (d.span.start, d.severity == Severity::Warning));
    doc
}

/// Parses every space in a document.
pub fn parse_specs(text: &str) -> Result<Vec<SpaceSpec>, DslError> {
    let doc = parse_document(text);
    match doc.first_error() {
        Some(e) => Err(e.clone()),
        None => Ok(doc.specs),
    }
}

/// Parses a document that declares exactly one space.
pub fn parse_spec(text: &str) -> Result<SpaceSpec, DslError> {
    let mut specs = parse_specs(text)?;
    if specs.len() != 1 {
        return Err(diagnostic(
            text,
            Severity::Error,
            DiagnosticKind::SyntaxError,
            Span::new(0, text.len()),
            format!("expected exactly one space, found {}", specs.len()),
        ));
    }
    Ok(specs.remove(0))
}

/// Canonical rendering: parts, restrictions, identifying rules, then corners,
/// each group in rule order.
pub fn format_spec(spec: &SpaceSpec) -> String {
    let n = spec.n_parts();
    let mut out = format!("space {} {{\n    parts {n};\n", spec.name());
    if let Some(k) = spec.left_limit() {
        out.push_str(&format!("    restrict left {k};\n"));
    }
    if let Some(k) = spec.right_limit() {
        out.push_str(&format!("    restrict right {k};\n"));
    }
    for r in spec.identifying_rules() {
        out.push_str(&format!(
            "    rule {} = {};\n",
            r.left().format(n),
            r.right().format(n)
        ));
    }
    for c in spec.corners() {
        out.push_str(&format!("    corner {};\n", c.format(n)));
    }
    out.push_str("}\n");
    out
}

pub fn format_document(specs: &[SpaceSpec]) -> String {
    specs.iter().map(format_spec).collect::<Vec<_>>().join("\n")
}
