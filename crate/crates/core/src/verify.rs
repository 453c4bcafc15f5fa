// Copyright 2026 The zfspin Authors
// SPDX-License-Identifier: Apache-2.0

//! Self-check suite behind the `verify` command.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::compiler::{compile, compile_with, sz_surface, CompileOptions, GateSpec};
use crate::linalg::{distance, expm_generator, pauli2, unitarity_defect, DistanceMode, Matrix4, PauliLabel};
use crate::program::{linspace, parse};
use crate::pulse::{generator, rotation};
use crate::rwa::{propagate, rwa_error, unit_params, DriveConfig, IntegratorConfig, RWA_ERROR_BOUND};
use crate::spin::{moment_vector, Axis, BellLabel};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    /// Worst value observed.
    pub value: f64,
    pub bound: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.value <= self.bound
    }
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |a, b| if b.is_nan() { f64::NAN } else { a.max(b) })
}

fn angles(n: usize) -> Vec<f64> {
    (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect()
}

fn grid(n: usize) -> Vec<(f64, f64)> {
    let a = angles(n);
    a.iter().flat_map(|&t| a.iter().map(move |&d| (t, d))).collect()
}

fn axis_grid(n: usize) -> impl Iterator<Item = (Axis, f64, f64)> {
    [Axis::X, Axis::Y].into_iter().flat_map(move |ax| grid(n).into_iter().map(move |(t, d)| (ax, t, d)))
}

/// Largest amplitude carried between the triplet and the singlet.
fn singlet_leak(u: &Matrix4) -> f64 {
    let s = BellLabel::S.vector();
    worst(BellLabel::TRIPLET.iter().map(|l| {
        let a = (s.adjoint() * u * l.vector())[(0, 0)].norm();
        let b = (l.vector().adjoint() * u * s)[(0, 0)].norm();
        a.max(b)
    }))
}

/// Run every check. `tol` bounds the exact-arithmetic checks; dynamics
/// checks carry their own bounds.
pub fn run_suite(tol: f64) -> Vec<Check> {
    let mut out = Vec::new();
    let mut push = |name, value, bound| out.push(Check { name, value, bound });

    push(
        "closed form equals exponential of generator",
        worst(axis_grid(12).map(|(ax, t, d)| {
            expm_generator(&generator(ax, d), t / 2.0)
                .map(|e| distance(&rotation(ax, t, d), &e, DistanceMode::Exact))
                .unwrap_or(f64::INFINITY)
        })),
        tol,
    );
    push("pulse unitarity", worst(axis_grid(12).map(|(ax, t, d)| unitarity_defect(&rotation(ax, t, d)))), tol);
    push(
        "dark states (A under X, B under Y)",
        worst(grid(12).into_iter().flat_map(|(t, d)| {
            let a = BellLabel::A.vector();
            let b = BellLabel::B.vector();
            [(rotation(Axis::X, t, d) * a - a).norm(), (rotation(Axis::Y, t, d) * b - b).norm()]
        })),
        tol,
    );
    push("singlet decoupling (closed form)", worst(axis_grid(12).map(|(ax, t, d)| singlet_leak(&rotation(ax, t, d)))), tol);
    push(
        "pi pulses equal minus the doubled Pauli",
        worst(angles(10).into_iter().flat_map(|d| {
            [
                distance(&rotation(Axis::X, PI, d), &-pauli2(PauliLabel::X, PauliLabel::X), DistanceMode::Exact),
                distance(&rotation(Axis::Y, PI, d), &-pauli2(PauliLabel::Y, PauliLabel::Y), DistanceMode::Exact),
            ]
        })),
        tol,
    );
    push(
        "S gate block",
        worst(angles(25).into_iter().map(|d| {
            compile(&GateSpec::PhaseShift { delta: d }).map_or(f64::INFINITY, |g| g.report.exact_distance)
        })),
        tol,
    );
    push("NOT gate block up to phase", compile(&GateSpec::Not).map_or(f64::INFINITY, |g| g.report.phase_distance), tol);
    push(
        "NOT gate on full triplet up to phase",
        compile_with(&GateSpec::Not, CompileOptions { exact_phase: true }).map_or(f64::INFINITY, |g| g.report.phase_distance),
        tol,
    );

    let thetas = linspace(0.0, FRAC_PI_2, 17);
    let deltas = linspace(0.0, PI, 17);
    push(
        "moment surface",
        sz_surface(&thetas, &deltas).map_or(f64::INFINITY, |pts| {
            worst(pts.iter().map(|p| (p.sz - 2.0 * (2.0 * p.theta).sin() * p.delta.sin()).abs()))
        }),
        tol,
    );
    push(
        "moment surface maximum",
        sz_surface(&[FRAC_PI_4], &[FRAC_PI_2]).map_or(f64::INFINITY, |p| (p[0].sz - 2.0).abs()),
        tol,
    );
    push(
        "eigenstates carry no moment",
        worst(BellLabel::TRIPLET.iter().flat_map(|l| moment_vector(&l.state()).map(f64::abs))),
        tol,
    );
    push(
        "parser round trip",
        worst(
            [
                "init T0\npulse X pi/2 phase 0\nexpect populations",
                "init custom (0.6,0) (0,-0.8) (0,0)\npulse Y -pi/4 phase 3*pi/2\nzrot 0.25\n",
                "gate NOT\ngate S(pi/3)\ngate RZ(theta,delta,A)\nexpect moment\nexpect statevector\nexpect sz",
            ]
            .map(|text| match parse(text) {
                Ok(p) => match parse(&p.to_string()) {
                    Ok(q) if q == p => 0.0,
                    _ => f64::INFINITY,
                },
                Err(_) => f64::INFINITY,
            }),
        ),
        0.0,
    );

    let cfg = IntegratorConfig::default();
    push(
        "full dynamics matches closed form at drive ratio 1e-3",
        worst(
            [(Axis::X, FRAC_PI_2, 0.0), (Axis::Y, PI, 1.0), (Axis::X, 1.0, 2.5)]
                .map(|(ax, t, d)| rwa_error(t, d, ax, 1e-3, &cfg).unwrap_or(f64::INFINITY)),
        ),
        RWA_ERROR_BOUND,
    );
    push(
        "full dynamics singlet decoupling",
        worst([(Axis::X, FRAC_PI_2, 0.3), (Axis::Y, 2.0, 1.7)].map(|(ax, t, d)| {
            unit_params(1e-2)
                .and_then(|p| DriveConfig::for_angle(ax, t, d, p))
                .and_then(|drive| propagate(&drive, &cfg))
                .map_or(f64::INFINITY, |r| singlet_leak(&r.lab_propagator))
        })),
        1e-8,
    );
    out
}
