// Copyright 2026 The zfspin Authors
// SPDX-License-Identifier: Apache-2.0

//! Spin-1 ion at zero field, written as two fictitious spins-1/2.
//!
//! The triplet `|0⟩ = |T0⟩`, `|A⟩`, `|B⟩` and the singlet `|S⟩` span the
//! product space. The static Hamiltonian is the Ising form
//! `(D/2)·σ1z σ2z`, which puts `|A⟩`, `|B⟩` at `+D/2` and `|0⟩`, `|S⟩` at
//! `−D/2`; only the gap `D` is physical.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{pauli2, real, Complex64, Matrix4, PauliLabel, Vector4, TOL, ZERO};

/// Drive polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn label(self) -> PauliLabel {
        match self {
            Axis::X => PauliLabel::X,
            Axis::Y => PauliLabel::Y,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "X",
            Axis::Y => "Y",
        })
    }
}

/// Physical parameters, all frequencies angular (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Zero-field splitting `D`.
    pub d_split: f64,
    pub g_factor: f64,
    /// `gβH₁ / D`; zero switches the drive off.
    pub h1_ratio: f64,
    /// Microwave carrier `ω_G`.
    pub omega_g: f64,
}

pub const FREE_ELECTRON_G: f64 = 2.0023;

impl PhysicalParams {
    /// Resonant drive (`ω_G = D`).
    pub fn resonant(d_split: f64, h1_ratio: f64) -> Result<Self, Error> {
        Self::new(d_split, FREE_ELECTRON_G, h1_ratio, d_split)
    }

    pub fn new(d_split: f64, g_factor: f64, h1_ratio: f64, omega_g: f64) -> Result<Self, Error> {
        let p = Self { d_split, g_factor, h1_ratio, omega_g };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let fields = [self.d_split, self.g_factor, self.h1_ratio, self.omega_g];
        if fields.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("physical parameters"));
        }
        if self.d_split <= 0.0 {
            return Err(Error::InvalidParams(format!("splitting must be positive, got {}", self.d_split)));
        }
        if self.h1_ratio < 0.0 {
            return Err(Error::InvalidParams(format!("drive ratio must be non-negative, got {}", self.h1_ratio)));
        }
        if self.omega_g <= 0.0 {
            return Err(Error::InvalidParams(format!("carrier must be positive, got {}", self.omega_g)));
        }
        Ok(())
    }

    pub fn with_h1_ratio(self, h1_ratio: f64) -> Result<Self, Error> {
        Self::new(self.d_split, self.g_factor, h1_ratio, self.omega_g)
    }

    /// Rabi-scale drive strength `gβH₁` in rad/s.
    pub fn drive_strength(&self) -> f64 {
        self.h1_ratio * self.d_split
    }

    pub fn is_resonant(&self) -> bool {
        self.omega_g == self.d_split
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellLabel {
    T0,
    A,
    B,
    S,
}

impl BellLabel {
    /// Canonical output order.
    pub const ALL: [BellLabel; 4] = [BellLabel::T0, BellLabel::A, BellLabel::B, BellLabel::S];
    pub const TRIPLET: [BellLabel; 3] = [BellLabel::T0, BellLabel::A, BellLabel::B];

    pub fn name(self) -> &'static str {
        match self {
            BellLabel::T0 => "T0",
            BellLabel::A => "A",
            BellLabel::B => "B",
            BellLabel::S => "S",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|l| l.name() == s)
    }

    pub fn vector(self) -> Vector4 {
        let h = real(FRAC_1_SQRT_2);
        match self {
            BellLabel::S => Vector4::new(ZERO, h, -h, ZERO),
            BellLabel::T0 => Vector4::new(ZERO, h, h, ZERO),
            BellLabel::A => Vector4::new(h, ZERO, ZERO, -h),
            BellLabel::B => Vector4::new(h, ZERO, ZERO, h),
        }
    }

    pub fn state(self) -> SpinState {
        SpinState { amplitudes: self.vector() }
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Change of basis whose columns are `|T0⟩, |A⟩, |B⟩, |S⟩`; maps Bell
/// coordinates to product coordinates.
pub fn bell_basis_matrix() -> Matrix4 {
    let mut m = Matrix4::zeros();
    for (k, l) in BellLabel::ALL.iter().enumerate() {
        m.set_column(k, &l.vector());
    }
    m
}

/// Normalized pure state in the product basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinState {
    amplitudes: Vector4,
}

impl SpinState {
    /// Ground state `|0⟩`, the only populated level at `kT ≪ D`.
    pub fn ground() -> Self {
        BellLabel::T0.state()
    }

    /// Accepts `v` only if it is already normalized to within `tol`.
    pub fn from_amplitudes(v: Vector4, tol: f64) -> Result<Self, Error> {
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("state amplitudes"));
        }
        let n = v.norm();
        if (n - 1.0).abs() > tol {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { amplitudes: v / real(n) })
    }

    pub fn normalized(v: Vector4) -> Result<Self, Error> {
        let n = v.norm();
        if !n.is_finite() || n == 0.0 {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { amplitudes: v / real(n) })
    }

    /// Superposition over the Bell basis.
    pub fn from_bell(coeffs: &[(BellLabel, Complex64)], tol: f64) -> Result<Self, Error> {
        let v = coeffs
            .iter()
            .fold(Vector4::zeros(), |acc, &(l, a)| acc + l.vector() * a);
        Self::from_amplitudes(v, tol)
    }

    pub fn amplitudes(&self) -> &Vector4 {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨label|ψ⟩`
    pub fn bell_component(&self, label: BellLabel) -> Complex64 {
        label.vector().dotc(&self.amplitudes)
    }

    pub fn overlap(&self, other: &SpinState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn expectation(&self, op: &Matrix4) -> Complex64 {
        self.amplitudes.dotc(&(op * self.amplitudes))
    }

    /// Apply a unitary. Fails if the norm drifts by more than `TOL`.
    pub fn evolve(&self, u: &Matrix4) -> Result<Self, Error> {
        let v = u * self.amplitudes;
        let n = v.norm();
        if (n - 1.0).abs() > TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { amplitudes: v })
    }

    /// Like [`SpinState::evolve`] but with a caller-chosen drift tolerance.
    pub fn evolve_with_tolerance(&self, u: &Matrix4, tol: f64) -> Result<Self, Error> {
        let v = u * self.amplitudes;
        let n = v.norm();
        if (n - 1.0).abs() > tol {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { amplitudes: v })
    }

    /// `‖ψ − φ‖`
    pub fn distance(&self, other: &SpinState) -> f64 {
        (self.amplitudes - other.amplitudes).norm()
    }
}

pub fn h0_ising(p: &PhysicalParams) -> Matrix4 {
    pauli2(PauliLabel::Z, PauliLabel::Z) * real(p.d_split / 2.0)
}

/// `σ1a + σ2a`
pub fn total_spin(label: PauliLabel) -> Matrix4 {
    pauli2(label, PauliLabel::I) + pauli2(PauliLabel::I, label)
}

/// Lab-frame Hamiltonian with a linearly polarized drive
/// `2·gβH₁·(σ1a + σ2a)·cos(ω_G t + carrier_phase)`.
pub fn h_lab_frame(t: f64, p: &PhysicalParams, axis: Axis, carrier_phase: f64) -> Matrix4 {
    let amp = 2.0 * p.drive_strength() * (p.omega_g * t + carrier_phase).cos();
    h0_ising(p) + total_spin(axis.label()) * real(amp)
}

/// Energy of a Bell level relative to `|0⟩`.
pub fn level_energy(p: &PhysicalParams, label: BellLabel) -> f64 {
    let h = h0_ising(p);
    let e = |l: BellLabel| l.state().expectation(&h).re;
    e(label) - e(BellLabel::T0)
}

/// `⟨σ1z + σ2z⟩`
pub fn sz_expectation(s: &SpinState) -> f64 {
    let v = s.expectation(&total_spin(PauliLabel::Z));
    debug_assert!(v.im.abs() <= TOL, "imaginary residue {}", v.im);
    v.re
}

/// `(⟨σ1x+σ2x⟩, ⟨σ1y+σ2y⟩, ⟨σ1z+σ2z⟩)`
pub fn moment_vector(s: &SpinState) -> [f64; 3] {
    [PauliLabel::X, PauliLabel::Y, PauliLabel::Z].map(|l| {
        let v = s.expectation(&total_spin(l));
        debug_assert!(v.im.abs() <= TOL, "imaginary residue {}", v.im);
        v.re
    })
}

/// Bell-basis populations, indexed by [`BellLabel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Populations([f64; 4]);

impl Populations {
    /// Values in `BellLabel::ALL` order.
    pub fn from_values(p: [f64; 4]) -> Self {
        Self(p)
    }

    pub fn get(&self, label: BellLabel) -> f64 {
        self.0[label as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (BellLabel, f64)> + '_ {
        BellLabel::ALL.into_iter().map(|l| (l, self.get(l)))
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn max_diff(&self, other: &Populations) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Squared Bell components, rescaled to sum to one so that round-off in
/// the `1/√2` factors does not leak into eigenstate populations.
pub fn populations(s: &SpinState) -> Populations {
    let raw = BellLabel::ALL.map(|l| s.bell_component(l).norm_sqr());
    let total: f64 = raw.iter().sum();
    Populations(raw.map(|p| p / total))
}

/// A tabulated zero-field splitting.
#[derive(Debug, Clone, PartialEq)]
pub struct IonPreset {
    pub name: &'static str,
    pub host: &'static str,
    /// Ordinary frequency in Hz.
    pub d_frequency: f64,
}

impl IonPreset {
    pub fn d_split(&self) -> f64 {
        2.0 * PI * self.d_frequency
    }

    pub fn params(&self, h1_ratio: f64) -> Result<PhysicalParams, Error> {
        PhysicalParams::resonant(self.d_split(), h1_ratio)
    }
}

pub fn ion_presets() -> Vec<IonPreset> {
    vec![
        IonPreset { name: "Cr3+_K3Co(CN)6", host: "K3Co(CN)6", d_frequency: 4.98e9 },
        // Fe3+ is quoted only as a 12-20 GHz range; both ends are offered.
        IonPreset { name: "Fe3+_12GHz", host: "unspecified", d_frequency: 12.0e9 },
        IonPreset { name: "Fe3+_20GHz", host: "unspecified", d_frequency: 20.0e9 },
        IonPreset { name: "Ni2+_Al2O3", host: "Al2O3 (sapphire)", d_frequency: 26.24e9 },
        IonPreset { name: "Ni2+_CdCl2", host: "CdCl2", d_frequency: 42.0e9 },
    ]
}

/// Case-insensitive lookup by preset name.
pub fn find_preset(name: &str) -> Result<IonPreset, Error> {
    ion_presets()
        .into_iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

/// `c₁|B⟩ + c₂|A⟩`, normalized.
pub fn ab_superposition(c1: Complex64, c2: Complex64) -> Result<SpinState, Error> {
    SpinState::from_bell(&[(BellLabel::B, c1), (BellLabel::A, c2)], 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, distance, DistanceMode, I, ONE};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn params(d: f64) -> PhysicalParams {
        PhysicalParams::resonant(d, 1e-3).unwrap()
    }

    #[test]
    fn bell_basis_orthonormal() {
        let m = bell_basis_matrix();
        let gram = m.adjoint() * m;
        assert!(distance(&gram, &Matrix4::identity(), DistanceMode::Exact) <= TOL);
    }

    #[test]
    fn ising_hamiltonian() {
        let h = h0_ising(&params(2.0));
        let expected = Matrix4::from_diagonal(&Vector4::new(ONE, -ONE, -ONE, ONE));
        assert_eq!(h, expected);
        let p = params(3.7);
        assert!((level_energy(&p, BellLabel::A) - 3.7).abs() <= TOL);
        assert!((level_energy(&p, BellLabel::B) - 3.7).abs() <= TOL);
        // singlet is an eigenstate at −D/2
        let hs = h0_ising(&p) * BellLabel::S.vector();
        assert!((hs - BellLabel::S.vector() * real(-3.7 / 2.0)).norm() <= TOL);
    }

    #[test]
    fn bell_states_are_eigenstates() {
        let p = params(1.3);
        let h = h0_ising(&p);
        for l in BellLabel::ALL {
            let v = l.vector();
            let e = v.dotc(&(h * v));
            assert!((h * v - v * e).norm() <= TOL, "{l}");
        }
    }

    #[test]
    fn lab_frame_hamiltonian() {
        let p0 = PhysicalParams::resonant(1.0, 0.0).unwrap();
        assert_eq!(h_lab_frame(0.37, &p0, Axis::X, 0.2), h0_ising(&p0));
        let p = params(1.0);
        // drive node
        let t = FRAC_PI_2 - 0.3;
        let h = h_lab_frame(t, &p, Axis::Y, 0.3);
        assert!(distance(&h, &h0_ising(&p), DistanceMode::Exact) <= TOL);
        let h = h_lab_frame(0.0, &p, Axis::X, 0.0);
        let expected = h0_ising(&p) + total_spin(PauliLabel::X) * real(2.0 * 1e-3);
        assert!(distance(&h, &expected, DistanceMode::Exact) <= TOL);
        assert!(crate::linalg::hermiticity_defect(&h_lab_frame(0.91, &p, Axis::Y, 1.0)) <= TOL);
    }

    #[test]
    fn sz_values() {
        assert!(sz_expectation(&BellLabel::B.state()).abs() <= TOL);
        let up = SpinState::from_amplitudes(Vector4::new(ONE, ZERO, ZERO, ZERO), TOL).unwrap();
        assert!((sz_expectation(&up) - 2.0).abs() <= TOL);
        let (theta, delta) = (FRAC_PI_4, FRAC_PI_2);
        let c1 = c(0.0, -theta.sin());
        let c2 = -crate::linalg::cis(delta) * theta.cos();
        let s = ab_superposition(c1, c2).unwrap();
        assert!((sz_expectation(&s) - 2.0).abs() <= TOL);
    }

    #[test]
    fn eigenstates_carry_no_moment() {
        for l in BellLabel::ALL {
            let m = moment_vector(&l.state());
            assert!(m.iter().all(|x| x.abs() <= TOL), "{l}: {m:?}");
        }
        let h = real(FRAC_1_SQRT_2);
        let s = SpinState::from_amplitudes(Vector4::new(h, h, ZERO, ZERO), TOL).unwrap();
        let m = moment_vector(&s);
        assert!((m[0] - 1.0).abs() <= TOL && m[1].abs() <= TOL && (m[2] - 1.0).abs() <= TOL);
    }

    #[test]
    fn populations_basic() {
        let p = populations(&SpinState::ground());
        assert_eq!(p.get(BellLabel::T0), 1.0);
        assert!(p.get(BellLabel::A).abs() <= TOL);
        let h = real(FRAC_1_SQRT_2);
        let s = SpinState::from_bell(&[(BellLabel::A, h), (BellLabel::B, h)], TOL).unwrap();
        let p = populations(&s);
        assert!((p.get(BellLabel::A) - 0.5).abs() <= TOL);
        assert!((p.get(BellLabel::B) - 0.5).abs() <= TOL);
        assert!((p.total() - 1.0).abs() <= TOL);
        let s = SpinState::from_bell(&[(BellLabel::S, I)], TOL).unwrap();
        assert!((populations(&s).get(BellLabel::S) - 1.0).abs() <= TOL);
    }

    #[test]
    fn presets() {
        assert_eq!(find_preset("Cr3+_K3Co(CN)6").unwrap().d_frequency, 4.98e9);
        assert_eq!(find_preset("ni2+_al2o3").unwrap().d_frequency, 26.24e9);
        assert_eq!(find_preset("Ni2+_CdCl2").unwrap().d_frequency, 42.0e9);
        let p = find_preset("Ni2+_CdCl2").unwrap().params(1e-3).unwrap();
        assert!((p.d_split - 2.0 * PI * 42.0e9).abs() < 1e-3);
        assert!(p.is_resonant());
        assert!(matches!(find_preset("Gd3+"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn param_validation() {
        assert!(PhysicalParams::resonant(0.0, 1e-3).is_err());
        assert!(PhysicalParams::resonant(1.0, -1e-3).is_err());
        assert!(PhysicalParams::resonant(f64::NAN, 1e-3).is_err());
        assert!(PhysicalParams::resonant(1.0, 0.0).is_ok());
    }

    #[test]
    fn state_construction() {
        assert!(matches!(
            SpinState::from_amplitudes(Vector4::new(ONE, ONE, ZERO, ZERO), TOL),
            Err(Error::NotNormalized(_))
        ));
        assert!(SpinState::normalized(Vector4::zeros()).is_err());
        let s = SpinState::normalized(Vector4::new(ONE, ONE, ZERO, ZERO)).unwrap();
        assert!((s.norm() - 1.0).abs() <= TOL);
    }
}
