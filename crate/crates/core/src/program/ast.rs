// Copyright 2026 The zfspin Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::fmt;

use crate::compiler::{GateSpec, RzTarget};
use crate::error::Error;
use crate::spin::Axis;

/// Free angle variable filled in by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Theta,
    Delta,
}

impl Slot {
    pub fn name(self) -> &'static str {
        match self {
            Slot::Theta => "theta",
            Slot::Delta => "delta",
        }
    }
}

/// Values for the sweep slots; `None` leaves a slot unbound.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Bindings {
    pub theta: Option<f64>,
    pub delta: Option<f64>,
}

impl Bindings {
    pub fn new(theta: f64, delta: f64) -> Self {
        Self { theta: Some(theta), delta: Some(delta) }
    }

    fn get(&self, slot: Slot) -> Option<f64> {
        match slot {
            Slot::Theta => self.theta,
            Slot::Delta => self.delta,
        }
    }
}

/// `angle := term (('*' | '/') term)*`, `term := number | pi | slot | '-' term`
#[derive(Debug, Clone, PartialEq)]
pub enum AngleExpr {
    Num(f64),
    Pi,
    Slot(Slot),
    Neg(Box<AngleExpr>),
    Mul(Box<AngleExpr>, Box<AngleExpr>),
    Div(Box<AngleExpr>, Box<AngleExpr>),
}

impl AngleExpr {
    /// Literal that prints back to exactly `x`.
    pub fn from_value(x: f64) -> Self {
        if x.is_sign_negative() && x != 0.0 {
            AngleExpr::Neg(Box::new(AngleExpr::Num(-x)))
        } else {
            AngleExpr::Num(x.abs())
        }
    }

    pub fn eval(&self, b: &Bindings) -> Result<f64, Error> {
        let v = match self {
            AngleExpr::Num(x) => *x,
            AngleExpr::Pi => PI,
            AngleExpr::Slot(s) => b.get(*s).ok_or(Error::UnboundSlot(s.name()))?,
            AngleExpr::Neg(e) => -e.eval(b)?,
            AngleExpr::Mul(l, r) => l.eval(b)? * r.eval(b)?,
            AngleExpr::Div(l, r) => l.eval(b)? / r.eval(b)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite("angle expression"))
        }
    }

    pub fn visit_slots(&self, f: &mut impl FnMut(Slot)) {
        match self {
            AngleExpr::Slot(s) => f(*s),
            AngleExpr::Neg(e) => e.visit_slots(f),
            AngleExpr::Mul(l, r) | AngleExpr::Div(l, r) => {
                l.visit_slots(f);
                r.visit_slots(f);
            }
            AngleExpr::Num(_) | AngleExpr::Pi => {}
        }
    }

    fn is_term(&self) -> bool {
        !matches!(self, AngleExpr::Mul(..) | AngleExpr::Div(..))
    }
}

impl fmt::Display for AngleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngleExpr::Num(x) => write!(f, "{x}"),
            AngleExpr::Pi => f.write_str("pi"),
            AngleExpr::Slot(s) => f.write_str(s.name()),
            AngleExpr::Neg(e) => write!(f, "-{e}"),
            AngleExpr::Mul(l, r) => write!(f, "{l}*{r}"),
            AngleExpr::Div(l, r) => write!(f, "{l}/{r}"),
        }
    }
}

impl AngleExpr {
    /// True when the tree has the left-leaning shape the parser produces,
    /// i.e. printing it and parsing the text gives the same tree back.
    pub fn is_canonical(&self) -> bool {
        match self {
            AngleExpr::Num(x) => x.is_finite() && !x.is_sign_negative(),
            AngleExpr::Pi | AngleExpr::Slot(_) => true,
            AngleExpr::Neg(e) => e.is_term() && e.is_canonical(),
            AngleExpr::Mul(l, r) | AngleExpr::Div(l, r) => r.is_term() && l.is_canonical() && r.is_canonical(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitState {
    T0,
    A,
    B,
    /// Amplitudes `(re, im)` on `|0⟩`, `|A⟩`, `|B⟩`.
    Custom([(f64, f64); 3]),
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateStmt {
    Not,
    S(AngleExpr),
    Rz(AngleExpr, AngleExpr, RzTarget),
}

impl GateStmt {
    pub fn resolve(&self, b: &Bindings) -> Result<GateSpec, Error> {
        Ok(match self {
            GateStmt::Not => GateSpec::Not,
            GateStmt::S(d) => GateSpec::PhaseShift { delta: d.eval(b)? },
            GateStmt::Rz(t, d, target) => GateSpec::EffectiveRz { theta: t.eval(b)?, delta: d.eval(b)?, target: *target },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Observable {
    Sz,
    Populations,
    Statevector,
    Moment,
}

impl Observable {
    pub const ALL: [Observable; 4] = [Observable::Sz, Observable::Populations, Observable::Statevector, Observable::Moment];

    pub fn name(self) -> &'static str {
        match self {
            Observable::Sz => "sz",
            Observable::Populations => "populations",
            Observable::Statevector => "statevector",
            Observable::Moment => "moment",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Init(InitState),
    Pulse { axis: Axis, theta: AngleExpr, phase: Option<AngleExpr> },
    IdealZ(AngleExpr),
    Gate(GateStmt),
    Expect(Observable),
}

impl Statement {
    fn visit_slots(&self, f: &mut impl FnMut(Slot)) {
        match self {
            Statement::Pulse { theta, phase, .. } => {
                theta.visit_slots(f);
                if let Some(p) = phase {
                    p.visit_slots(f);
                }
            }
            Statement::IdealZ(t) => t.visit_slots(f),
            Statement::Gate(GateStmt::S(d)) => d.visit_slots(f),
            Statement::Gate(GateStmt::Rz(t, d, _)) => {
                t.visit_slots(f);
                d.visit_slots(f);
            }
            Statement::Init(_) | Statement::Gate(GateStmt::Not) | Statement::Expect(_) => {}
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Program {
    pub statements: Vec<Statement>,
}

impl Program {
    pub fn slots(&self) -> Vec<Slot> {
        let mut found = Vec::new();
        for s in &self.statements {
            s.visit_slots(&mut |slot| {
                if !found.contains(&slot) {
                    found.push(slot);
                }
            });
        }
        found
    }
}

fn fmt_cnum(f: &mut fmt::Formatter<'_>, (re, im): (f64, f64)) -> fmt::Result {
    write!(f, "({re},{im})")
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Init(InitState::T0) => f.write_str("init T0"),
            Statement::Init(InitState::A) => f.write_str("init A"),
            Statement::Init(InitState::B) => f.write_str("init B"),
            Statement::Init(InitState::Custom(amps)) => {
                f.write_str("init custom")?;
                for a in amps {
                    f.write_str(" ")?;
                    fmt_cnum(f, *a)?;
                }
                Ok(())
            }
            Statement::Pulse { axis, theta, phase } => {
                write!(f, "pulse {axis} {theta}")?;
                if let Some(p) = phase {
                    write!(f, " phase {p}")?;
                }
                Ok(())
            }
            Statement::IdealZ(t) => write!(f, "zrot {t}"),
            Statement::Gate(GateStmt::Not) => f.write_str("gate NOT"),
            Statement::Gate(GateStmt::S(d)) => write!(f, "gate S({d})"),
            Statement::Gate(GateStmt::Rz(t, d, target)) => {
                let l = match target {
                    RzTarget::A => "A",
                    RzTarget::B => "B",
                };
                write!(f, "gate RZ({t},{d},{l})")
            }
            Statement::Expect(o) => write!(f, "expect {}", o.name()),
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
