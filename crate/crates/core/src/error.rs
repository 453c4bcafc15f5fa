// Copyright 2026 The zfspin Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::program::ParseError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (entrywise defect {0:e})")]
    NotHermitian(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),

    #[error("unknown ion preset `{0}`")]
    UnknownPreset(String),

    #[error("pulse duration must be positive (got {0})")]
    NonPositiveDuration(f64),

    #[error("integrator needs at least {min} steps per carrier period (got {got})")]
    TooFewSteps { min: usize, got: usize },

    #[error("unitarity defect {defect:e} exceeds threshold {threshold:e}")]
    UnitarityDefect { defect: f64, threshold: f64 },

    #[error("block leakage {0:e} exceeds tolerance")]
    Leakage(f64),

    #[error("no verified pulse decomposition found for {0}")]
    NoVerifiedDecomposition(String),

    #[error("ideal Z rotations cannot be driven by microwave pulses; use closed mode")]
    IdealZInFullMode,

    #[error("full mode requires physical parameters")]
    MissingParams,

    #[error("angle slot `{0}` has no value outside of a sweep")]
    UnboundSlot(&'static str),

    #[error("sweep template has no free theta/delta slots")]
    NoFreeSlots,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("{0}")]
    Io(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::UnitarityDefect { .. } => 4,
            _ => 3,
        }
    }
}
