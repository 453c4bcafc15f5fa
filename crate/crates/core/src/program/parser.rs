// Copyright 2026 The zfspin Authors
// SPDX-License-Identifier: Apache-2.0

//! Line-oriented parser for pulse programs.
//!
//! ```text
//! program := line*
//! line    := [stmt] ['#' comment] NEWLINE
//! stmt    := 'init' state | 'pulse' axis angle ['phase' angle] | 'zrot' angle
//!          | 'gate' gate | 'expect' obs
//! state   := 'T0' | 'A' | 'B' | 'custom' cnum cnum cnum
//! axis    := 'X' | 'Y'
//! gate    := 'NOT' | 'S' '(' angle ')' | 'RZ' '(' angle ',' angle ',' ('A'|'B') ')'
//! obs     := 'sz' | 'populations' | 'statevector' | 'moment'
//! angle   := term (('*'|'/') term)* ; term := number | 'pi' | slot | '-' term
//! slot    := 'theta' | 'delta'
//! cnum    := '(' ['-'] number ',' ['-'] number ')'
//! ```

use std::fmt;

use thiserror::Error;

use super::ast::{AngleExpr, GateStmt, InitState, Observable, Program, Slot, Statement};
use crate::compiler::RzTarget;
use crate::spin::Axis;

/// Tolerance on `|‖c‖ − 1|` for custom initial amplitudes.
pub const CUSTOM_INIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    UnknownStatement(String),
    UnknownAxis(String),
    UnknownState(String),
    UnknownGate(String),
    UnknownObservable(String),
    MalformedAngle(String),
    MalformedNumber(String),
    Expected { expected: String, found: String },
    TrailingInput(String),
    InitNotFirst,
    DuplicateInit,
    UnnormalizedInit(f64),
    UnexpectedChar(char),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnknownStatement(s) => write!(f, "unknown statement `{s}`"),
            ParseErrorKind::UnknownAxis(s) => write!(f, "unknown axis `{s}` (expected X or Y)"),
            ParseErrorKind::UnknownState(s) => write!(f, "unknown initial state `{s}`"),
            ParseErrorKind::UnknownGate(s) => write!(f, "unknown gate `{s}`"),
            ParseErrorKind::UnknownObservable(s) => write!(f, "unknown observable `{s}`"),
            ParseErrorKind::MalformedAngle(s) => write!(f, "malformed angle expression: {s}"),
            ParseErrorKind::MalformedNumber(s) => write!(f, "malformed number `{s}`"),
            ParseErrorKind::Expected { expected, found } => write!(f, "expected {expected}, found {found}"),
            ParseErrorKind::TrailingInput(s) => write!(f, "unexpected trailing input `{s}`"),
            ParseErrorKind::InitNotFirst => f.write_str("init must be the first statement"),
            ParseErrorKind::DuplicateInit => f.write_str("duplicate init statement"),
            ParseErrorKind::UnnormalizedInit(n) => write!(f, "custom amplitudes have norm {n}, expected 1"),
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Number(String),
    Punct(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) | Tok::Number(w) => write!(f, "`{w}`"),
            Tok::Punct(c) => write!(f, "`{c}`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    column: usize,
}

fn tokenize(line: &str, line_no: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let column = i + 1;
        if ch == '#' {
            break;
        } else if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Word(chars[start..i].iter().collect()), column });
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            out.push(Token { tok: Tok::Number(chars[start..i].iter().collect()), column });
        } else if "()*/,-".contains(ch) {
            out.push(Token { tok: Tok::Punct(ch), column });
            i += 1;
        } else {
            return Err(ParseError { line: line_no, column, kind: ParseErrorKind::UnexpectedChar(ch) });
        }
    }
    Ok(out)
}

struct LineParser {
    tokens: Vec<Token>,
    pos: usize,
    line: usize,
    end_column: usize,
}

impl LineParser {
    fn err(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, column, kind }
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_column, |t| t.column)
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn found(&self) -> String {
        self.peek().map_or_else(|| "end of line".to_string(), |t| t.to_string())
    }

    fn expect_punct(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(
                self.column(),
                ParseErrorKind::Expected { expected: format!("`{c}`"), found: self.found() },
            ))
        }
    }

    fn word(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        match self.next() {
            Some(Token { tok: Tok::Word(w), column }) => Ok((w, column)),
            Some(t) => {
                Err(self.err(t.column, ParseErrorKind::Expected { expected: what.into(), found: t.tok.to_string() }))
            }
            None => Err(self.err(
                self.end_column,
                ParseErrorKind::Expected { expected: what.into(), found: "end of line".into() },
            )),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.tokens.get(self.pos) {
            None => Ok(()),
            Some(t) => Err(self.err(t.column, ParseErrorKind::TrailingInput(t.tok.to_string()))),
        }
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        match self.next() {
            Some(Token { tok: Tok::Number(s), column }) => s
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| self.err(column, ParseErrorKind::MalformedNumber(s))),
            Some(t) => {
                Err(self.err(t.column, ParseErrorKind::Expected { expected: "a number".into(), found: t.tok.to_string() }))
            }
            None => Err(self.err(
                self.end_column,
                ParseErrorKind::Expected { expected: "a number".into(), found: "end of line".into() },
            )),
        }
    }

    fn signed_number(&mut self) -> Result<f64, ParseError> {
        if self.peek() == Some(&Tok::Punct('-')) {
            self.pos += 1;
            Ok(-self.number()?)
        } else {
            self.number()
        }
    }

    fn term(&mut self) -> Result<AngleExpr, ParseError> {
        let column = self.column();
        match self.next() {
            Some(Token { tok: Tok::Number(s), .. }) => s
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(AngleExpr::Num)
                .ok_or_else(|| self.err(column, ParseErrorKind::MalformedAngle(format!("bad number `{s}`")))),
            Some(Token { tok: Tok::Word(w), .. }) => match w.as_str() {
                "pi" => Ok(AngleExpr::Pi),
                "theta" => Ok(AngleExpr::Slot(Slot::Theta)),
                "delta" => Ok(AngleExpr::Slot(Slot::Delta)),
                _ => Err(self.err(column, ParseErrorKind::MalformedAngle(format!("unexpected `{w}`")))),
            },
            Some(Token { tok: Tok::Punct('-'), .. }) => Ok(AngleExpr::Neg(Box::new(self.term()?))),
            Some(t) => Err(self.err(column, ParseErrorKind::MalformedAngle(format!("unexpected {}", t.tok)))),
            None => Err(self.err(column, ParseErrorKind::MalformedAngle("missing angle".into()))),
        }
    }

    fn angle(&mut self) -> Result<AngleExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Punct('*')) => {
                    self.pos += 1;
                    lhs = AngleExpr::Mul(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Punct('/')) => {
                    self.pos += 1;
                    lhs = AngleExpr::Div(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn cnum(&mut self) -> Result<(f64, f64), ParseError> {
        self.expect_punct('(')?;
        let re = self.signed_number()?;
        self.expect_punct(',')?;
        let im = self.signed_number()?;
        self.expect_punct(')')?;
        Ok((re, im))
    }

    fn init_state(&mut self) -> Result<InitState, ParseError> {
        let (w, column) = self.word("an initial state")?;
        match w.as_str() {
            "T0" => Ok(InitState::T0),
            "A" => Ok(InitState::A),
            "B" => Ok(InitState::B),
            "custom" => {
                let amps = [self.cnum()?, self.cnum()?, self.cnum()?];
                let norm = amps.iter().map(|(re, im)| re * re + im * im).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > CUSTOM_INIT_TOL {
                    return Err(self.err(column, ParseErrorKind::UnnormalizedInit(norm)));
                }
                Ok(InitState::Custom(amps))
            }
            _ => Err(self.err(column, ParseErrorKind::UnknownState(w))),
        }
    }

    fn gate(&mut self) -> Result<GateStmt, ParseError> {
        let (w, column) = self.word("a gate")?;
        match w.as_str() {
            "NOT" => Ok(GateStmt::Not),
            "S" => {
                self.expect_punct('(')?;
                let d = self.angle()?;
                self.expect_punct(')')?;
                Ok(GateStmt::S(d))
            }
            "RZ" => {
                self.expect_punct('(')?;
                let t = self.angle()?;
                self.expect_punct(',')?;
                let d = self.angle()?;
                self.expect_punct(',')?;
                let (l, lc) = self.word("A or B")?;
                let target = match l.as_str() {
                    "A" => RzTarget::A,
                    "B" => RzTarget::B,
                    _ => {
                        return Err(self.err(lc, ParseErrorKind::Expected { expected: "A or B".into(), found: format!("`{l}`") }))
                    }
                };
                self.expect_punct(')')?;
                Ok(GateStmt::Rz(t, d, target))
            }
            _ => Err(self.err(column, ParseErrorKind::UnknownGate(w))),
        }
    }

    fn statement(&mut self) -> Result<Option<(Statement, usize)>, ParseError> {
        let Some(first) = self.tokens.first().cloned() else {
            return Ok(None);
        };
        let (keyword, column) = self.word("a statement")?;
        let stmt = match keyword.as_str() {
            "init" => Statement::Init(self.init_state()?),
            "pulse" => {
                let (a, ac) = self.word("an axis")?;
                let axis = match a.as_str() {
                    "X" => Axis::X,
                    "Y" => Axis::Y,
                    _ => return Err(self.err(ac, ParseErrorKind::UnknownAxis(a))),
                };
                let theta = self.angle()?;
                let phase = if self.peek() == Some(&Tok::Word("phase".into())) {
                    self.pos += 1;
                    Some(self.angle()?)
                } else {
                    None
                };
                Statement::Pulse { axis, theta, phase }
            }
            "zrot" => Statement::IdealZ(self.angle()?),
            "gate" => Statement::Gate(self.gate()?),
            "expect" => {
                let (o, oc) = self.word("an observable")?;
                Statement::Expect(
                    Observable::from_name(&o).ok_or_else(|| self.err(oc, ParseErrorKind::UnknownObservable(o)))?,
                )
            }
            _ => return Err(self.err(first.column, ParseErrorKind::UnknownStatement(keyword))),
        };
        self.finish()?;
        Ok(Some((stmt, column)))
    }
}

fn line_parser(text: &str, line: usize) -> Result<LineParser, ParseError> {
    Ok(LineParser { tokens: tokenize(text, line)?, pos: 0, line, end_column: text.chars().count() + 1 })
}

pub fn parse(text: &str) -> Result<Program, ParseError> {
    let mut statements = Vec::new();
    let mut seen_init = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut p = line_parser(raw, line)?;
        let Some((stmt, column)) = p.statement()? else {
            continue;
        };
        if matches!(stmt, Statement::Init(_)) {
            if seen_init {
                return Err(ParseError { line, column, kind: ParseErrorKind::DuplicateInit });
            }
            if !statements.is_empty() {
                return Err(ParseError { line, column, kind: ParseErrorKind::InitNotFirst });
            }
            seen_init = true;
        }
        statements.push(stmt);
    }
    Ok(Program { statements })
}

/// Parse a standalone angle expression such as `pi/4` or `-0.5*pi`.
pub fn parse_angle(text: &str) -> Result<AngleExpr, ParseError> {
    let mut p = line_parser(text, 1)?;
    let e = p.angle()?;
    p.finish()?;
    Ok(e)
}

/// Parse a gate such as `NOT`, `S(pi/3)` or `RZ(pi/4,pi/2,B)`.
pub fn parse_gate(text: &str) -> Result<GateStmt, ParseError> {
    let mut p = line_parser(text, 1)?;
    let g = p.gate()?;
    p.finish()?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn kind(text: &str) -> (usize, usize, ParseErrorKind) {
        let e = parse(text).unwrap_err();
        (e.line, e.column, e.kind)
    }

    #[test]
    fn empty_program() {
        assert_eq!(parse("").unwrap(), Program::default());
        assert_eq!(parse("\n  # only a comment\n\n").unwrap(), Program::default());
    }

    #[test]
    fn pulse_statement() {
        let p = parse("pulse X pi/2 phase pi/4").unwrap();
        assert_eq!(p.statements.len(), 1);
        match &p.statements[0] {
            Statement::Pulse { axis, theta, phase } => {
                assert_eq!(*axis, Axis::X);
                assert_eq!(theta.eval(&Default::default()).unwrap(), PI / 2.0);
                assert_eq!(phase.as_ref().unwrap().eval(&Default::default()).unwrap(), PI / 4.0);
            }
            s => panic!("unexpected {s:?}"),
        }
        let p = parse("pulse Y -pi/2   # comment").unwrap();
        assert!(matches!(&p.statements[0], Statement::Pulse { phase: None, .. }));
    }

    #[test]
    fn unknown_axis() {
        let (line, col, k) = kind("pulse W 1.0");
        assert_eq!((line, col), (1, 7));
        assert_eq!(k, ParseErrorKind::UnknownAxis("W".into()));
    }

    #[test]
    fn init_rules() {
        let (line, _, k) = kind("pulse X pi\ninit T0");
        assert_eq!((line, k), (2, ParseErrorKind::InitNotFirst));
        let (line, _, k) = kind("init T0\ninit A");
        assert_eq!((line, k), (2, ParseErrorKind::DuplicateInit));
        let (_, _, k) = kind("init custom (1,0) (1,0) (0,0)");
        assert!(matches!(k, ParseErrorKind::UnnormalizedInit(_)));
        let p = parse("init custom (0.6,0) (0,-0.8) (0,0)").unwrap();
        assert_eq!(p.statements[0], Statement::Init(InitState::Custom([(0.6, 0.0), (0.0, -0.8), (0.0, 0.0)])));
    }

    #[test]
    fn malformed_angles() {
        assert!(matches!(kind("pulse X pi/").2, ParseErrorKind::MalformedAngle(_)));
        assert!(matches!(kind("zrot foo").2, ParseErrorKind::MalformedAngle(_)));
        assert!(matches!(kind("pulse X pi pi").2, ParseErrorKind::TrailingInput(_)));
        assert!(matches!(kind("frobnicate").2, ParseErrorKind::UnknownStatement(_)));
        assert!(matches!(kind("expect spin").2, ParseErrorKind::UnknownObservable(_)));
        assert!(matches!(kind("gate H").2, ParseErrorKind::UnknownGate(_)));
        assert!(matches!(kind("pulse X 1 $").2, ParseErrorKind::UnexpectedChar('$')));
    }

    #[test]
    fn gates_and_errors_carry_location() {
        let p = parse("gate NOT\ngate S(pi/3)\ngate RZ(pi/4, pi/2, B)\nexpect sz").unwrap();
        assert_eq!(p.statements.len(), 4);
        let (line, col, _) = kind("init T0\n\ngate RZ(pi, 1, C)");
        assert_eq!((line, col), (3, 16));
    }

    #[test]
    fn round_trip_examples() {
        let text = "init custom (0.6,0) (0,-0.8) (0,0)\npulse X -pi/2 phase 0\npulse Y theta*2/pi phase --delta\nzrot 0.25\ngate S(pi/3)\ngate RZ(1.5,-pi,A)\nexpect moment\n";
        let p = parse(text).unwrap();
        assert_eq!(p.to_string(), text);
        assert_eq!(parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn standalone_helpers() {
        assert_eq!(parse_angle("pi/4").unwrap().eval(&Default::default()).unwrap(), PI / 4.0);
        assert!(parse_angle("pi pi").is_err());
        assert_eq!(parse_gate("NOT").unwrap(), GateStmt::Not);
        assert!(parse_gate("S(").is_err());
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_angle("1e-3").unwrap(), AngleExpr::Num(1e-3));
        assert_eq!(parse_angle(".5").unwrap(), AngleExpr::Num(0.5));
        assert!(parse_angle("1.2.3").is_err());
    }
}
