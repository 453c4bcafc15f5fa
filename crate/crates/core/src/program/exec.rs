// Copyright 2026 The zfspin Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use rayon::prelude::*;

use super::ast::{Bindings, InitState, Observable, Program, Statement};
use super::parser::{parse_angle, ParseError};
use crate::compiler::compile;
use crate::error::Error;
use crate::linalg::{c, Complex64, Matrix4};
use crate::pulse::{rotation, r_z, Pulse, PulseSequence, Step};
use crate::rwa::{propagate, DriveConfig, IntegratorConfig, UNITARITY_THRESHOLD};
use crate::spin::{moment_vector, populations, sz_expectation, BellLabel, PhysicalParams, Populations, SpinState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Closed-form pulse operators.
    Closed,
    /// Full lab-frame dynamics, reported in the interaction frame.
    Full,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Closed => "closed",
            Mode::Full => "full",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub params: Option<PhysicalParams>,
    pub integrator: IntegratorConfig,
    /// Largest lab-propagator unitarity defect accepted in full mode.
    pub unitarity_threshold: f64,
}

impl RunConfig {
    pub fn closed() -> Self {
        Self {
            mode: Mode::Closed,
            params: None,
            integrator: IntegratorConfig::default(),
            unitarity_threshold: UNITARITY_THRESHOLD,
        }
    }

    pub fn full(params: PhysicalParams) -> Self {
        Self { mode: Mode::Full, params: Some(params), ..Self::closed() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExpectationValue {
    Sz(f64),
    Populations(Populations),
    Statevector([Complex64; 4]),
    Moment([f64; 3]),
}

impl ExpectationValue {
    pub fn measure(obs: Observable, s: &SpinState) -> Self {
        match obs {
            Observable::Sz => ExpectationValue::Sz(sz_expectation(s)),
            Observable::Populations => ExpectationValue::Populations(populations(s)),
            Observable::Statevector => {
                let a = s.amplitudes();
                ExpectationValue::Statevector([a[0], a[1], a[2], a[3]])
            }
            Observable::Moment => ExpectationValue::Moment(moment_vector(s)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub mode: Mode,
    pub final_state: SpinState,
    /// Keyed by observable name, in program order. A repeated observable
    /// gets a `_2`, `_3`, ... suffix.
    pub expectations: Vec<(String, ExpectationValue)>,
    /// Worst lab-propagator unitarity defect seen (full mode only).
    pub max_unitarity_defect: Option<f64>,
}

impl ResultRecord {
    pub fn expectation(&self, key: &str) -> Option<&ExpectationValue> {
        self.expectations.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

fn initial_state(init: &InitState) -> Result<SpinState, Error> {
    match init {
        InitState::T0 => Ok(BellLabel::T0.state()),
        InitState::A => Ok(BellLabel::A.state()),
        InitState::B => Ok(BellLabel::B.state()),
        InitState::Custom(amps) => {
            let coeffs: Vec<(BellLabel, Complex64)> = BellLabel::TRIPLET
                .iter()
                .zip(amps)
                .map(|(&l, &(re, im))| (l, c(re, im)))
                .collect();
            let v = coeffs.iter().fold(crate::linalg::Vector4::zeros(), |acc, &(l, a)| acc + l.vector() * a);
            SpinState::normalized(v)
        }
    }
}

struct Runner<'a> {
    cfg: &'a RunConfig,
    state: SpinState,
    worst_defect: f64,
}

impl Runner<'_> {
    fn pulse(&mut self, p: &Pulse) -> Result<(), Error> {
        match self.cfg.mode {
            Mode::Closed => {
                self.state = self.state.evolve(&rotation(p.axis, p.theta, p.delta))?;
            }
            Mode::Full => {
                if p.theta == 0.0 {
                    return Ok(());
                }
                let params = self.cfg.params.ok_or(Error::MissingParams)?;
                let drive = DriveConfig::for_angle(p.axis, p.theta, p.delta, params)?;
                let r = propagate(&drive, &self.cfg.integrator)?;
                self.worst_defect = self.worst_defect.max(r.unitarity_defect);
                if r.unitarity_defect > self.cfg.unitarity_threshold {
                    return Err(Error::UnitarityDefect {
                        defect: r.unitarity_defect,
                        threshold: self.cfg.unitarity_threshold,
                    });
                }
                let u: Matrix4 = r.interaction_propagator;
                self.state = self.state.evolve_with_tolerance(&u, self.cfg.unitarity_threshold)?;
            }
        }
        Ok(())
    }

    fn sequence(&mut self, seq: &PulseSequence) -> Result<(), Error> {
        for step in &seq.steps {
            match step {
                Step::Pulse(p) => self.pulse(p)?,
                Step::IdealZ(z) => self.ideal_z(z.theta)?,
            }
        }
        Ok(())
    }

    fn ideal_z(&mut self, theta: f64) -> Result<(), Error> {
        if self.cfg.mode == Mode::Full {
            return Err(Error::IdealZInFullMode);
        }
        self.state = self.state.evolve(&r_z(theta))?;
        Ok(())
    }
}

/// Run `p` with sweep slots taken from `bindings`.
pub fn execute_with(p: &Program, cfg: &RunConfig, bindings: &Bindings) -> Result<ResultRecord, Error> {
    if cfg.mode == Mode::Full {
        let params = cfg.params.ok_or(Error::MissingParams)?;
        params.validate()?;
        // fail before doing any work
        if p.statements.iter().any(|s| matches!(s, Statement::IdealZ(_))) {
            return Err(Error::IdealZInFullMode);
        }
    }
    let mut runner = Runner { cfg, state: SpinState::ground(), worst_defect: 0.0 };
    let mut expectations: Vec<(String, ExpectationValue)> = Vec::new();
    for stmt in &p.statements {
        match stmt {
            Statement::Init(init) => runner.state = initial_state(init)?,
            Statement::Pulse { axis, theta, phase } => {
                let delta = match phase {
                    Some(e) => e.eval(bindings)?,
                    None => 0.0,
                };
                runner.pulse(&Pulse::new(*axis, theta.eval(bindings)?, delta))?;
            }
            Statement::IdealZ(theta) => runner.ideal_z(theta.eval(bindings)?)?,
            Statement::Gate(g) => {
                let gate = compile(&g.resolve(bindings)?)?;
                runner.sequence(&gate.sequence)?;
            }
            Statement::Expect(obs) => {
                let base = obs.name();
                let count = expectations.iter().filter(|(k, _)| k == base || k.starts_with(&format!("{base}_"))).count();
                let key = if count == 0 { base.to_string() } else { format!("{base}_{}", count + 1) };
                expectations.push((key, ExpectationValue::measure(*obs, &runner.state)));
            }
        }
    }
    Ok(ResultRecord {
        mode: cfg.mode,
        final_state: runner.state,
        expectations,
        max_unitarity_defect: (cfg.mode == Mode::Full).then_some(runner.worst_defect),
    })
}

pub fn execute(p: &Program, cfg: &RunConfig) -> Result<ResultRecord, Error> {
    execute_with(p, cfg, &Bindings::default())
}

/// Scalar observable tabulated by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepObservable {
    Sz,
    Population(BellLabel),
    Moment(usize),
}

impl SweepObservable {
    /// `sz`, `pop:<T0|A|B|S>` or `moment:<x|y|z>`.
    pub fn parse(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidGrid(format!("unknown sweep observable `{s}` (use sz, pop:<T0|A|B|S>, moment:<x|y|z>)"));
        if s == "sz" {
            return Ok(SweepObservable::Sz);
        }
        if let Some(l) = s.strip_prefix("pop:") {
            return BellLabel::from_name(l).map(SweepObservable::Population).ok_or_else(bad);
        }
        if let Some(a) = s.strip_prefix("moment:") {
            return match a {
                "x" => Ok(SweepObservable::Moment(0)),
                "y" => Ok(SweepObservable::Moment(1)),
                "z" => Ok(SweepObservable::Moment(2)),
                _ => Err(bad()),
            };
        }
        Err(bad())
    }

    pub fn name(&self) -> String {
        match self {
            SweepObservable::Sz => "sz".into(),
            SweepObservable::Population(l) => format!("pop:{l}"),
            SweepObservable::Moment(i) => format!("moment:{}", ["x", "y", "z"][*i]),
        }
    }

    pub fn measure(&self, s: &SpinState) -> f64 {
        match self {
            SweepObservable::Sz => sz_expectation(s),
            SweepObservable::Population(l) => populations(s).get(*l),
            SweepObservable::Moment(i) => moment_vector(s)[*i],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub delta: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub observable: String,
    pub rows: Vec<SweepRow>,
}

/// Evaluate `template` at every `(θ, δ)` of the grid, row-major in θ.
pub fn sweep(
    template: &Program,
    thetas: &[f64],
    deltas: &[f64],
    observable: SweepObservable,
    cfg: &RunConfig,
) -> Result<SweepTable, Error> {
    if template.slots().is_empty() {
        return Err(Error::NoFreeSlots);
    }
    if thetas.is_empty() || deltas.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    let points: Vec<(f64, f64)> = thetas
        .iter()
        .flat_map(|&t| deltas.iter().map(move |&d| (t, d)))
        .collect();
    let rows = points
        .into_par_iter()
        .map(|(theta, delta)| {
            let r = execute_with(template, cfg, &Bindings::new(theta, delta))?;
            Ok(SweepRow { theta, delta, value: observable.measure(&r.final_state) })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(SweepTable { observable: observable.name(), rows })
}

/// `a:b:n`, `n` equally spaced points from `a` to `b` inclusive; `a` and
/// `b` are angle expressions.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(Error::InvalidGrid(format!("`{spec}` is not of the form start:stop:count")));
    };
    let eval = |s: &str| -> Result<f64, Error> {
        parse_angle(s.trim())
            .map_err(|e: ParseError| Error::InvalidGrid(format!("`{s}`: {}", e.kind)))?
            .eval(&Bindings::default())
    };
    let (a, b) = (eval(a)?, eval(b)?);
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| Error::InvalidGrid(format!("bad point count `{n}`")))?;
    if n == 0 {
        return Err(Error::InvalidGrid("point count must be positive".into()));
    }
    Ok(linspace(a, b, n))
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;
    use crate::linalg::TOL;
    use std::f64::consts::PI;

    #[test]
    fn populations_of_initial_state() {
        let r = execute(&parse("init T0\nexpect populations").unwrap(), &RunConfig::closed()).unwrap();
        let Some(ExpectationValue::Populations(p)) = r.expectation("populations") else { panic!() };
        assert_eq!(p.get(BellLabel::T0), 1.0);
        assert_eq!(r.max_unitarity_defect, None);
    }

    #[test]
    fn x_half_pi_transfers_to_b() {
        let r = execute(&parse("init T0\npulse X pi/2 phase 0\nexpect populations").unwrap(), &RunConfig::closed()).unwrap();
        let Some(ExpectationValue::Populations(p)) = r.expectation("populations") else { panic!() };
        assert!((p.get(BellLabel::B) - 1.0).abs() <= TOL);
    }

    #[test]
    fn moment_maximum() {
        let text = "init T0\npulse X pi/4 phase 0\npulse Y pi/2 phase pi/2\nexpect sz";
        let r = execute(&parse(text).unwrap(), &RunConfig::closed()).unwrap();
        let Some(ExpectationValue::Sz(v)) = r.expectation("sz") else { panic!() };
        assert!((v - 2.0).abs() <= TOL);
    }

    #[test]
    fn repeated_expectations_get_suffixes() {
        let r = execute(&parse("expect sz\npulse X pi/2\nexpect sz\nexpect sz").unwrap(), &RunConfig::closed()).unwrap();
        let keys: Vec<_> = r.expectations.iter().map(|(k, _)| k.as_str()).collect();
        assert_eq!(keys, ["sz", "sz_2", "sz_3"]);
    }

    #[test]
    fn full_mode_rules() {
        let p = parse("zrot pi").unwrap();
        let params = crate::rwa::unit_params(1e-2).unwrap();
        assert_eq!(execute(&p, &RunConfig::full(params)), Err(Error::IdealZInFullMode));
        let mut cfg = RunConfig::closed();
        cfg.mode = Mode::Full;
        assert_eq!(execute(&parse("pulse X 1").unwrap(), &cfg), Err(Error::MissingParams));
        assert!(execute(&p, &RunConfig::closed()).is_ok());
    }

    #[test]
    fn unbound_slot() {
        let p = parse("pulse X theta").unwrap();
        assert_eq!(execute(&p, &RunConfig::closed()), Err(Error::UnboundSlot("theta")));
    }

    #[test]
    fn sweep_basics() {
        let cfg = RunConfig::closed();
        assert_eq!(
            sweep(&parse("pulse X pi").unwrap(), &[0.0], &[0.0], SweepObservable::Sz, &cfg),
            Err(Error::NoFreeSlots)
        );
        let t = parse("pulse X theta\npulse Y pi/2 phase delta").unwrap();
        let table = sweep(&t, &[0.3], &[1.1], SweepObservable::Sz, &cfg).unwrap();
        let direct = execute_with(&t, &cfg, &Bindings::new(0.3, 1.1)).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.rows[0].value, sz_expectation(&direct.final_state));
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("pi/4:pi/4:1").unwrap(), vec![PI / 4.0]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:foo:3").is_err());
    }

    #[test]
    fn sweep_observables() {
        assert_eq!(SweepObservable::parse("pop:B").unwrap(), SweepObservable::Population(BellLabel::B));
        assert_eq!(SweepObservable::parse("moment:y").unwrap(), SweepObservable::Moment(1));
        assert!(SweepObservable::parse("pop:Q").is_err());
        assert_eq!(SweepObservable::parse("moment:z").unwrap().name(), "moment:z");
    }
}
