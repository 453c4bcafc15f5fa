// Copyright 2026 The zfspin Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form propagators of resonant, phase-shifted microwave pulses.
//!
//! A pulse of angle `θ` and carrier phase `δ` polarized along `a ∈ {X, Y}`
//! acts as the trigonometric Pauli polynomial
//!
//! ```text
//! U_a(θ, δ) = cos²(θ/2)·II − sin²(θ/2)·aa
//!             − i·sin(θ/2)cos(θ/2)·[(aI + Ia)·cos δ + (bZ + Zb)·sin δ]
//! ```
//!
//! with partner `b = Y` for `a = X` and `b = X` for `a = Y`. Equivalently
//! `U_a(θ, δ) = exp(−i(θ/2)·P_a(δ))` for the bracketed generator `P_a(δ)`,
//! which satisfies `P³ = 4P`.

use std::fmt;

use crate::error::Error;
use crate::linalg::{c, pauli_sum_matrix, real, Matrix4, PauliLabel, PauliSum};
use crate::spin::{Axis, SpinState};

use PauliLabel::{I as PI_, X as PX, Y as PY, Z as PZ};

/// A rectangular resonant pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    pub axis: Axis,
    /// Rotation angle `θ = gβH₁τ`; negative values reverse the rotation.
    pub theta: f64,
    /// Carrier phase shift.
    pub delta: f64,
}

impl Pulse {
    pub fn new(axis: Axis, theta: f64, delta: f64) -> Self {
        debug_assert!(theta.is_finite() && delta.is_finite());
        Self { axis, theta, delta }
    }

    pub fn x(theta: f64, delta: f64) -> Self {
        Self::new(Axis::X, theta, delta)
    }

    pub fn y(theta: f64, delta: f64) -> Self {
        Self::new(Axis::Y, theta, delta)
    }

    pub fn unitary(&self) -> Matrix4 {
        rotation(self.axis, self.theta, self.delta)
    }
}

impl fmt::Display for Pulse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.axis, self.theta, self.delta)
    }
}

/// Reference rotation about the quantization axis. Not realizable with
/// the transverse drives, so it is never lowered to pulses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealZRotation {
    pub theta: f64,
}

impl IdealZRotation {
    pub fn unitary(&self) -> Matrix4 {
        r_z(self.theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Pulse(Pulse),
    IdealZ(IdealZRotation),
}

impl Step {
    pub fn unitary(&self) -> Matrix4 {
        match self {
            Step::Pulse(p) => p.unitary(),
            Step::IdealZ(z) => z.unitary(),
        }
    }
}

impl From<Pulse> for Step {
    fn from(p: Pulse) -> Self {
        Step::Pulse(p)
    }
}

impl From<IdealZRotation> for Step {
    fn from(z: IdealZRotation) -> Self {
        Step::IdealZ(z)
    }
}

/// Steps in chronological order: `steps[0]` acts first.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PulseSequence {
    pub steps: Vec<Step>,
}

impl PulseSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pulses(pulses: impl IntoIterator<Item = Pulse>) -> Self {
        Self { steps: pulses.into_iter().map(Step::Pulse).collect() }
    }

    pub fn then(mut self, step: impl Into<Step>) -> Self {
        self.steps.push(step.into());
        self
    }

    pub fn extend(&mut self, other: &PulseSequence) {
        self.steps.extend_from_slice(&other.steps);
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn pulses(&self) -> impl Iterator<Item = &Pulse> {
        self.steps.iter().filter_map(|s| match s {
            Step::Pulse(p) => Some(p),
            Step::IdealZ(_) => None,
        })
    }
}

fn partner(axis: Axis) -> PauliLabel {
    match axis {
        Axis::X => PY,
        Axis::Y => PX,
    }
}

/// `P_a(δ) = (aI + Ia)·cos δ + (bZ + Zb)·sin δ` as a Pauli sum.
pub fn generator_sum(axis: Axis, delta: f64) -> PauliSum {
    let a = axis.label();
    let b = partner(axis);
    let (s, co) = delta.sin_cos();
    PauliSum::new()
        .with(a, PI_, real(co))
        .with(PI_, a, real(co))
        .with(b, PZ, real(s))
        .with(PZ, b, real(s))
}

pub fn generator(axis: Axis, delta: f64) -> Matrix4 {
    pauli_sum_matrix(&generator_sum(axis, delta))
}

/// Closed-form pulse propagator as a Pauli polynomial.
pub fn rotation_polynomial(axis: Axis, theta: f64, delta: f64) -> PauliSum {
    let a = axis.label();
    let (sh, ch) = (theta / 2.0).sin_cos();
    let mut poly = PauliSum::new()
        .with(PI_, PI_, real(ch * ch))
        .with(a, a, real(-sh * sh));
    for t in generator_sum(axis, delta).terms() {
        let mut t = *t;
        t.coeff *= c(0.0, -sh * ch);
        poly.add(t);
    }
    poly
}

pub fn rotation(axis: Axis, theta: f64, delta: f64) -> Matrix4 {
    pauli_sum_matrix(&rotation_polynomial(axis, theta, delta))
}

pub fn u_x(theta: f64, delta: f64) -> Matrix4 {
    rotation(Axis::X, theta, delta)
}

pub fn u_y(theta: f64, delta: f64) -> Matrix4 {
    rotation(Axis::Y, theta, delta)
}

/// `R_Z(θ) = exp(−i(θ/2)(σ1z + σ2z))` as a Pauli polynomial.
pub fn r_z_polynomial(theta: f64) -> PauliSum {
    let (sh, ch) = (theta / 2.0).sin_cos();
    PauliSum::new()
        .with(PI_, PI_, real(ch * ch))
        .with(PZ, PI_, c(0.0, -sh * ch))
        .with(PI_, PZ, c(0.0, -sh * ch))
        .with(PZ, PZ, real(-sh * sh))
}

pub fn r_z(theta: f64) -> Matrix4 {
    pauli_sum_matrix(&r_z_polynomial(theta))
}

/// Product of step unitaries, last step leftmost.
pub fn sequence_unitary(seq: &PulseSequence) -> Matrix4 {
    seq.steps
        .iter()
        .fold(Matrix4::identity(), |acc, step| step.unitary() * acc)
}

/// Apply the steps one by one; norm drift above `TOL` is an error.
pub fn apply(seq: &PulseSequence, s: &SpinState) -> Result<SpinState, Error> {
    seq.steps
        .iter()
        .try_fold(*s, |state, step| state.evolve(&step.unitary()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cis, distance, pauli2, DistanceMode, I, TOL};
    use crate::spin::BellLabel;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

    fn close(a: &Matrix4, b: &Matrix4) -> bool {
        distance(a, b, DistanceMode::Exact) <= TOL
    }

    #[test]
    fn zero_angle_is_identity() {
        for d in [0.0, 0.3, 2.0] {
            assert!(close(&u_x(0.0, d), &Matrix4::identity()));
            assert!(close(&u_y(0.0, d), &Matrix4::identity()));
        }
        assert!(close(&r_z(0.0), &Matrix4::identity()));
    }

    #[test]
    fn pi_pulses() {
        assert!(close(&u_x(PI, 0.37), &(-pauli2(PX, PX))));
        assert!(close(&u_y(PI, 1.1), &(-pauli2(PY, PY))));
    }

    #[test]
    fn x_pulse_on_ground_state() {
        let (theta, delta) = (FRAC_PI_3, FRAC_PI_4);
        let out = SpinState::ground().evolve(&u_x(theta, delta)).unwrap();
        let expected_b = -I * (3f64.sqrt() / 2.0) * cis(-FRAC_PI_4);
        assert!((out.bell_component(BellLabel::B) - expected_b).norm() <= TOL);
        assert!((out.bell_component(BellLabel::T0) - real(0.5)).norm() <= TOL);
    }

    #[test]
    fn y_pulse_on_ground_state() {
        let out = SpinState::ground().evolve(&u_y(FRAC_PI_2, FRAC_PI_6)).unwrap();
        let expected = BellLabel::A.vector() * (-cis(FRAC_PI_6));
        assert!((out.amplitudes() - expected).norm() <= TOL);
    }

    #[test]
    fn generator_examples() {
        let g = generator(Axis::X, 0.0);
        assert!(close(&g, &(pauli2(PX, PI_) + pauli2(PI_, PX))));
        for d in [0.0, 0.4, 2.9] {
            for axis in [Axis::X, Axis::Y] {
                let p = generator(axis, d);
                assert!(close(&(p * p * p), &(p * real(4.0))));
            }
        }
    }

    #[test]
    fn r_z_is_diagonal() {
        let t = 0.83;
        let expected = Matrix4::from_diagonal(&crate::linalg::Vector4::new(
            cis(-t),
            real(1.0),
            real(1.0),
            cis(t),
        ));
        assert!(close(&r_z(t), &expected));
        let out = BellLabel::B.state().evolve(&r_z(FRAC_PI_2)).unwrap();
        assert!((out.amplitudes() - BellLabel::A.vector() * (-I)).norm() <= TOL);
    }

    #[test]
    fn sequences() {
        let s = SpinState::ground();
        assert_eq!(apply(&PulseSequence::new(), &s).unwrap(), s);
        assert_eq!(sequence_unitary(&PulseSequence::new()), Matrix4::identity());
        let d = 0.7;
        let inv = PulseSequence::from_pulses([Pulse::x(FRAC_PI_2, d), Pulse::x(-FRAC_PI_2, d)]);
        assert!(close(&sequence_unitary(&inv), &Matrix4::identity()));
        // chronological order: last step leftmost
        let seq = PulseSequence::from_pulses([Pulse::x(0.3, 0.0), Pulse::y(FRAC_PI_2, 0.5)]);
        assert!(close(&sequence_unitary(&seq), &(u_y(FRAC_PI_2, 0.5) * u_x(0.3, 0.0))));
        let seq = seq.then(IdealZRotation { theta: 0.2 });
        assert!(close(
            &sequence_unitary(&seq),
            &(r_z(0.2) * u_y(FRAC_PI_2, 0.5) * u_x(0.3, 0.0))
        ));
    }

    #[test]
    fn prepare_pair_on_ground_state() {
        let (theta, delta) = (0.6, 1.2);
        let seq = PulseSequence::from_pulses([Pulse::x(theta, 0.0), Pulse::y(FRAC_PI_2, delta)]);
        let out = apply(&seq, &SpinState::ground()).unwrap();
        let expected = BellLabel::A.vector() * (-cis(delta) * theta.cos())
            + BellLabel::B.vector() * c(0.0, -theta.sin());
        assert!((out.amplitudes() - expected).norm() <= TOL);
    }
}
