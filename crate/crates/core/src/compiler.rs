// Copyright 2026 The zfspin Authors
// SPDX-License-Identifier: Apache-2.0

//! Lowering of logical gates to X/Y pulse sequences, with every result
//! checked by multiplying the pulses out and restricting to the block of
//! Bell states the gate is defined on.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::Error;
use crate::linalg::{block_distance, c, cis, real, Complex64, DistanceMode, Matrix4, ONE, TOL, ZERO};
use crate::pulse::{apply, sequence_unitary, Pulse, PulseSequence};
use crate::spin::{sz_expectation, BellLabel, SpinState};

/// Carrier phase of the single-pulse NOT, `X(π/2, 0)`.
pub const NOT_PHASE: f64 = 0.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateSpec {
    /// Swap `|0⟩ ↔ |B⟩`.
    Not,
    /// `diag(1, e^{iδ})` on `(|A⟩, |0⟩)`.
    PhaseShift { delta: f64 },
    /// Pulse-pair imitation of a Z rotation acting on `target`.
    EffectiveRz { theta: f64, delta: f64, target: RzTarget },
    /// Prepare `−i·sinθ|B⟩ − cosθ·e^{iδ}|A⟩` from `|0⟩`.
    Prepare { theta: f64, delta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RzTarget {
    A,
    B,
}

impl RzTarget {
    pub fn label(self) -> BellLabel {
        match self {
            RzTarget::A => BellLabel::A,
            RzTarget::B => BellLabel::B,
        }
    }
}

impl fmt::Display for GateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateSpec::Not => f.write_str("NOT"),
            GateSpec::PhaseShift { delta } => write!(f, "S({delta})"),
            GateSpec::EffectiveRz { theta, delta, target } => {
                write!(f, "RZ({theta},{delta},{})", target.label())
            }
            GateSpec::Prepare { theta, delta } => write!(f, "PREP({theta},{delta})"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CompileOptions {
    /// Compile NOT exactly up to one global phase on the whole triplet.
    pub exact_phase: bool,
}

/// Rows and columns of a block restriction, as Bell labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub rows: Vec<BellLabel>,
    pub cols: Vec<BellLabel>,
}

impl Block {
    pub fn square(labels: &[BellLabel]) -> Self {
        Self { rows: labels.to_vec(), cols: labels.to_vec() }
    }

    pub fn new(rows: &[BellLabel], cols: &[BellLabel]) -> Self {
        Self { rows: rows.to_vec(), cols: cols.to_vec() }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ls: &[BellLabel]| ls.iter().map(|l| l.name()).collect::<Vec<_>>().join(",");
        if self.rows == self.cols {
            write!(f, "({})", join(&self.rows))
        } else {
            write!(f, "({}) <- ({})", join(&self.rows), join(&self.cols))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub target_block: Block,
    pub mode: DistanceMode,
    pub exact_distance: f64,
    pub phase_distance: f64,
    /// `exact_distance ≤ TOL`
    pub phase_exact: bool,
    /// Largest norm any block column loses to states outside the rows.
    pub leakage: f64,
}

impl EquivalenceReport {
    /// Distance in the report's comparison mode.
    pub fn distance(&self) -> f64 {
        match self.mode {
            DistanceMode::Exact => self.exact_distance,
            DistanceMode::UpToGlobalPhase => self.phase_distance,
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.distance() <= tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompiledGate {
    pub spec: GateSpec,
    pub sequence: PulseSequence,
    pub achieved: Matrix4,
    pub report: EquivalenceReport,
    /// Phases picked up by triplet states outside the block columns that
    /// the gate maps onto themselves.
    pub spectator_phases: Vec<(BellLabel, Complex64)>,
}

/// `⟨row|U|col⟩` over the block.
pub fn block_matrix(u: &Matrix4, block: &Block) -> DMatrix<Complex64> {
    DMatrix::from_fn(block.rows.len(), block.cols.len(), |i, j| {
        block.rows[i].vector().dotc(&(u * block.cols[j].vector()))
    })
}

fn leakage(u: &Matrix4, block: &Block) -> f64 {
    block
        .cols
        .iter()
        .map(|col| {
            let v = u * col.vector();
            let inside = block
                .rows
                .iter()
                .fold(v * ZERO, |acc, r| acc + r.vector() * r.vector().dotc(&v));
            (v - inside).norm()
        })
        .fold(0.0, f64::max)
}

/// Compare `achieved` restricted to `block` with `target`.
///
/// Leakage out of the block above `TOL` is an error: the restriction would
/// not describe what the operator does to the block states.
pub fn verify_equivalence(
    target: &DMatrix<Complex64>,
    achieved: &Matrix4,
    block: &Block,
    mode: DistanceMode,
) -> Result<EquivalenceReport, Error> {
    assert_eq!(
        target.shape(),
        (block.rows.len(), block.cols.len()),
        "target shape does not match block"
    );
    let leak = leakage(achieved, block);
    if leak > TOL {
        return Err(Error::Leakage(leak));
    }
    let restricted = block_matrix(achieved, block);
    let exact_distance = block_distance(&restricted, target, DistanceMode::Exact);
    let phase_distance = block_distance(&restricted, target, DistanceMode::UpToGlobalPhase).min(exact_distance);
    Ok(EquivalenceReport {
        target_block: block.clone(),
        mode,
        exact_distance,
        phase_distance,
        phase_exact: exact_distance <= TOL,
        leakage: leak,
    })
}

fn spectator_phases(u: &Matrix4, block: &Block) -> Vec<(BellLabel, Complex64)> {
    BellLabel::TRIPLET
        .into_iter()
        .filter(|l| !block.cols.contains(l) && !block.rows.contains(l))
        .filter_map(|l| {
            let v = l.vector();
            let w = u * v;
            let phase = v.dotc(&w);
            ((w - v * phase).norm() <= TOL).then_some((l, phase))
        })
        .collect()
}

/// `[X(−π/2, 0), X(π/2, δ)]`
pub fn phase_shift_sequence(delta: f64) -> PulseSequence {
    PulseSequence::from_pulses([Pulse::x(-FRAC_PI_2, 0.0), Pulse::x(FRAC_PI_2, delta)])
}

/// `[X(θ, 0), Y(π/2, δ)]` for `|B⟩`, `[Y(θ, 0), X(π/2, δ)]` for `|A⟩`.
pub fn effective_rz_sequence(theta: f64, delta: f64, target: RzTarget) -> PulseSequence {
    match target {
        RzTarget::B => PulseSequence::from_pulses([Pulse::x(theta, 0.0), Pulse::y(FRAC_PI_2, delta)]),
        RzTarget::A => PulseSequence::from_pulses([Pulse::y(theta, 0.0), Pulse::x(FRAC_PI_2, delta)]),
    }
}

pub fn prepare_sequence(theta: f64, delta: f64) -> PulseSequence {
    effective_rz_sequence(theta, delta, RzTarget::B)
}

/// Amplitudes `(c₁ on |B⟩, c₂ on |A⟩)` reached by [`prepare_sequence`].
pub fn prepared_amplitudes(theta: f64, delta: f64) -> (Complex64, Complex64) {
    (c(0.0, -theta.sin()), -cis(delta) * theta.cos())
}

fn not_block_target() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

fn exact_not_target() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(3, 3, &[ZERO, ONE, ZERO, ONE, ZERO, ZERO, ZERO, ZERO, ONE])
}

/// Y-axis analogue of the phase-shift pair.
fn y_phase_pair(delta: f64) -> [Pulse; 2] {
    [Pulse::y(-FRAC_PI_2, 0.0), Pulse::y(FRAC_PI_2, delta)]
}

const SEARCH_PHASES: usize = 24;

/// Search X(π/2, δx) combined with a Y phase pair for an exact NOT on the
/// triplet, `(|0⟩, |B⟩, |A⟩)`, up to a single global phase.
fn search_exact_not() -> Result<(PulseSequence, EquivalenceReport), Error> {
    let block = Block::square(&[BellLabel::T0, BellLabel::B, BellLabel::A]);
    let target = exact_not_target();
    let step = 2.0 * PI / SEARCH_PHASES as f64;
    for pair_after in [true, false] {
        for kx in 0..SEARCH_PHASES {
            for ky in 0..SEARCH_PHASES {
                let x = Pulse::x(FRAC_PI_2, kx as f64 * step);
                let pair = y_phase_pair(ky as f64 * step);
                let seq = if pair_after {
                    PulseSequence::from_pulses([x, pair[0], pair[1]])
                } else {
                    PulseSequence::from_pulses([pair[0], pair[1], x])
                };
                let u = sequence_unitary(&seq);
                if let Ok(report) = verify_equivalence(&target, &u, &block, DistanceMode::UpToGlobalPhase) {
                    if report.phase_distance <= TOL {
                        return Ok((seq, report));
                    }
                }
            }
        }
    }
    Err(Error::NoVerifiedDecomposition("NOT with exact phase".into()))
}

pub fn compile(spec: &GateSpec) -> Result<CompiledGate, Error> {
    compile_with(spec, CompileOptions::default())
}

pub fn compile_with(spec: &GateSpec, opts: CompileOptions) -> Result<CompiledGate, Error> {
    let (sequence, target, block, mode) = match *spec {
        GateSpec::PhaseShift { delta } => (
            phase_shift_sequence(delta),
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, cis(delta)])),
            Block::square(&[BellLabel::A, BellLabel::T0]),
            DistanceMode::Exact,
        ),
        GateSpec::Not if opts.exact_phase => {
            let (sequence, _) = search_exact_not()?;
            (
                sequence,
                exact_not_target(),
                Block::square(&[BellLabel::T0, BellLabel::B, BellLabel::A]),
                DistanceMode::UpToGlobalPhase,
            )
        }
        GateSpec::Not => (
            PulseSequence::from_pulses([Pulse::x(FRAC_PI_2, NOT_PHASE)]),
            not_block_target(),
            Block::square(&[BellLabel::T0, BellLabel::B]),
            DistanceMode::UpToGlobalPhase,
        ),
        GateSpec::EffectiveRz { theta, delta, target } => {
            let (st, ct) = theta.sin_cos();
            let (other, moved) = match target {
                RzTarget::B => (BellLabel::A, c(0.0, st) * cis(delta)),
                RzTarget::A => (BellLabel::B, c(0.0, -st) * cis(-delta)),
            };
            (
                effective_rz_sequence(theta, delta, target),
                DMatrix::from_column_slice(2, 1, &[real(ct), moved]),
                Block::new(&[target.label(), other], &[target.label()]),
                DistanceMode::Exact,
            )
        }
        GateSpec::Prepare { theta, delta } => {
            let (c1, c2) = prepared_amplitudes(theta, delta);
            (
                prepare_sequence(theta, delta),
                DMatrix::from_column_slice(3, 1, &[ZERO, c2, c1]),
                Block::new(&[BellLabel::T0, BellLabel::A, BellLabel::B], &[BellLabel::T0]),
                DistanceMode::Exact,
            )
        }
    };
    let achieved = sequence_unitary(&sequence);
    let report = verify_equivalence(&target, &achieved, &block, mode)?;
    if !report.passes(TOL) {
        return Err(Error::NoVerifiedDecomposition(format!(
            "{spec}: distance {:e} on block {}",
            report.distance(),
            report.target_block
        )));
    }
    let spectator_phases = spectator_phases(&achieved, &block);
    Ok(CompiledGate { spec: *spec, sequence, achieved, report, spectator_phases })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub theta: f64,
    pub delta: f64,
    pub sz: f64,
}

/// `⟨σ1z + σ2z⟩` after preparing each `(θ, δ)` from `|0⟩`, in row-major
/// `(θ index, δ index)` order.
pub fn sz_surface(thetas: &[f64], deltas: &[f64]) -> Result<Vec<SurfacePoint>, Error> {
    if thetas.is_empty() || deltas.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    let points: Vec<(f64, f64)> = thetas
        .iter()
        .flat_map(|&t| deltas.iter().map(move |&d| (t, d)))
        .collect();
    points
        .into_par_iter()
        .map(|(theta, delta)| {
            let gate = compile(&GateSpec::Prepare { theta, delta })?;
            let state = apply(&gate.sequence, &SpinState::ground())?;
            Ok(SurfacePoint { theta, delta, sz: sz_expectation(&state) })
        })
        .collect()
}
