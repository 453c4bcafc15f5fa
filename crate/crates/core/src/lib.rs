// Copyright 2026 The zfspin Authors
// SPDX-License-Identifier: Apache-2.0

//! Simulator and pulse-sequence compiler for spin-1 ions at zero magnetic
//! field.
//!
//! The ion is modelled as two spins-1/2 with the Ising Hamiltonian
//! `(D/2)·σ1z σ2z`. Resonant microwave pulses polarized along X or Y with
//! a carrier phase `δ` act as finite Pauli polynomials ([`pulse`]); these
//! closed forms are checked against full time-dependent dynamics
//! ([`rwa`]) and composed into logical gates ([`compiler`]). A small
//! line-oriented pulse language drives everything from the command line
//! ([`program`]).

pub mod compiler;
pub mod error;
pub mod linalg;
pub mod program;
pub mod pulse;
pub mod rwa;
pub mod spin;
pub mod verify;

pub use error::Error;
