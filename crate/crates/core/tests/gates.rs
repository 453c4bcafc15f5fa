// Copyright 2026 The zfspin Authors
// SPDX-License-Identifier: Apache-2.0

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use common::*;
use nalgebra::DMatrix;
use zfspin::compiler::{
    block_matrix, compile, compile_with, sz_surface, verify_equivalence, Block, CompileOptions, GateSpec, RzTarget,
};
use zfspin::linalg::{DistanceMode, Matrix4, Vector4};
use zfspin::program::linspace;
use zfspin::pulse::{sequence_unitary, u_x, Pulse, PulseSequence};
use zfspin::spin::{moment_vector, populations, BellLabel, SpinState};
use zfspin::Error;

const TOL: f64 = 1e-12;

fn state(v: Vector4) -> SpinState {
    SpinState::from_amplitudes(v, 1e-9).unwrap()
}

#[test]
fn phase_gate_is_diagonal_on_a_and_ground() {
    for delta in circle(25) {
        let g = compile(&GateSpec::PhaseShift { delta }).unwrap();
        let pulses: Vec<_> = g.sequence.pulses().copied().collect();
        assert_eq!(pulses, vec![Pulse::x(-FRAC_PI_2, 0.0), Pulse::x(FRAC_PI_2, delta)]);
        let u = g.achieved;
        assert!((u * bell_a() - bell_a()).norm() <= TOL);
        assert!((u * t0() - t0() * cis(delta)).norm() <= TOL);
        // the partner level picks up the opposite phase
        assert!((u * bell_b() - bell_b() * cis(-delta)).norm() <= TOL);
        assert_eq!(g.spectator_phases.len(), 1);
        assert_eq!(g.spectator_phases[0].0, BellLabel::B);
        assert!((g.spectator_phases[0].1 - cis(-delta)).norm() <= TOL);
        assert!(g.report.exact_distance <= TOL);
    }
}

#[test]
fn phase_gate_on_superposition() {
    let (c1, c2, delta) = (z(0.6, 0.0), z(0.0, 0.8), 1.2);
    let psi = bell_a() * c1 + t0() * c2;
    let out = compile(&GateSpec::PhaseShift { delta }).unwrap().achieved * psi;
    assert!((out - (bell_a() * c1 + t0() * (c2 * cis(delta)))).norm() <= TOL);
}

#[test]
fn not_gate_swaps_ground_and_b() {
    let g = compile(&GateSpec::Not).unwrap();
    let u = g.achieved;
    for (from, to) in [(t0(), bell_b()), (bell_b(), t0())] {
        let p = populations(&state(u * from));
        let target = if to == t0() { BellLabel::T0 } else { BellLabel::B };
        assert!((p.get(target) - 1.0).abs() <= TOL);
    }
    assert!(g.report.phase_distance <= TOL);
    assert_eq!(g.report.mode, DistanceMode::UpToGlobalPhase);
    // single X(π/2) pulse: −i on the swapped pair
    assert!((u * t0() - bell_b() * z(0.0, -1.0)).norm() <= TOL);
    assert!((u * bell_b() - t0() * z(0.0, -1.0)).norm() <= TOL);
    assert!(!g.report.phase_exact);
}

#[test]
fn exact_phase_not_on_whole_triplet() {
    let g = compile_with(&GateSpec::Not, CompileOptions { exact_phase: true }).unwrap();
    assert!(g.report.phase_distance <= TOL);
    let u = g.achieved;
    let phase = (t0().adjoint() * u * bell_b())[(0, 0)];
    assert!((phase.norm() - 1.0).abs() <= TOL);
    for (from, to) in [(t0(), bell_b()), (bell_b(), t0()), (bell_a(), bell_a())] {
        assert!((u * from - to * phase).norm() <= TOL);
    }
    assert!((u * singlet() - singlet()).norm() <= TOL);
}

#[test]
fn two_pulse_walkthrough_of_not() {
    // X(θ, 0) prepares c1|0⟩ + c2|B⟩, then X(−π/2, δ) acts on it
    for (theta, delta) in sample_angles(20, 31) {
        let (c1, c2) = (z(theta.cos(), 0.0), z(0.0, -theta.sin()));
        let psi = t0() * c1 + bell_b() * c2;
        assert!((u_x(theta, 0.0) * t0() - psi).norm() <= TOL);
        let out = u_x(-FRAC_PI_2, delta) * psi;
        let expect = t0() * (c2 * z(0.0, 1.0) * cis(delta)) + bell_b() * (c1 * z(0.0, 1.0) * cis(-delta));
        assert!((out - expect).norm() <= TOL);
    }
}

#[test]
fn effective_rotations() {
    for (theta, delta) in sample_angles(50, 32) {
        let g = compile(&GateSpec::EffectiveRz { theta, delta, target: RzTarget::B }).unwrap();
        let expect = bell_b() * z(theta.cos(), 0.0) + bell_a() * (z(0.0, theta.sin()) * cis(delta));
        assert!((g.achieved * bell_b() - expect).norm() <= TOL);
        let g = compile(&GateSpec::EffectiveRz { theta, delta, target: RzTarget::A }).unwrap();
        let expect = bell_a() * z(theta.cos(), 0.0) + bell_b() * (z(0.0, -theta.sin()) * cis(-delta));
        assert!((g.achieved * bell_a() - expect).norm() <= TOL);
    }
}

#[test]
fn prepare_gate() {
    for (theta, delta) in sample_angles(50, 33) {
        let g = compile(&GateSpec::Prepare { theta, delta }).unwrap();
        let expect = bell_b() * z(0.0, -theta.sin()) - bell_a() * (cis(delta) * theta.cos());
        assert!((g.achieved * t0() - expect).norm() <= TOL);
    }
}

#[test]
fn block_extraction_and_leakage() {
    let u = u_x(0.9, 0.3);
    let m = block_matrix(&u, &Block::square(&[BellLabel::T0, BellLabel::B]));
    assert!((m[(1, 0)] - (bell_b().adjoint() * u * t0())[(0, 0)]).norm() <= TOL);
    // a Y pulse moves |0⟩ into |A⟩, outside the chosen rows
    let y = sequence_unitary(&PulseSequence::from_pulses([Pulse::y(0.9, 0.0)]));
    let target = DMatrix::identity(2, 2);
    let r = verify_equivalence(&target, &y, &Block::square(&[BellLabel::T0, BellLabel::B]), DistanceMode::Exact);
    assert!(matches!(r, Err(Error::Leakage(_))));
    let ok = verify_equivalence(&target, &Matrix4::identity(), &Block::square(&[BellLabel::A, BellLabel::B]), DistanceMode::Exact);
    assert!(ok.unwrap().passes(TOL));
}

#[test]
fn moment_surface() {
    let thetas = linspace(0.0, FRAC_PI_2, 17);
    let deltas = linspace(0.0, PI, 17);
    let pts = sz_surface(&thetas, &deltas).unwrap();
    assert_eq!(pts.len(), 17 * 17);
    let mut best = f64::NEG_INFINITY;
    for (k, p) in pts.iter().enumerate() {
        assert_eq!((p.theta, p.delta), (thetas[k / 17], deltas[k % 17]));
        assert!((p.sz - 2.0 * (2.0 * p.theta).sin() * p.delta.sin()).abs() <= TOL);
        if p.delta == 0.0 {
            assert!(p.sz.abs() <= TOL);
        }
        best = best.max(p.sz);
    }
    let peak = pts.iter().find(|p| p.theta == FRAC_PI_4 && p.delta == FRAC_PI_2).unwrap();
    assert!((peak.sz - 2.0).abs() <= TOL);
    assert!(best <= 2.0 + TOL);
    assert!(sz_surface(&[], &deltas).is_err());
}

#[test]
fn eigenstates_have_no_moment() {
    for l in BellLabel::TRIPLET {
        assert!(moment_vector(&l.state()).iter().all(|x| x.abs() <= TOL));
    }
}
