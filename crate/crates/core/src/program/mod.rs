// Copyright 2026 The zfspin Authors
// SPDX-License-Identifier: Apache-2.0

//! Pulse-program language: parsing, execution, sweeps and output.

mod ast;
mod emit;
mod exec;
mod params;
mod parser;

pub use ast::{AngleExpr, Bindings, GateStmt, InitState, Observable, Program, Slot, Statement};
pub use emit::{
    read_record_json, read_table_json, record_csv, record_json, table_csv, table_json, RecordSnapshot,
};
pub use exec::{
    execute, execute_with, linspace, parse_grid, sweep, ExpectationValue, Mode, ResultRecord, RunConfig,
    SweepObservable, SweepRow, SweepTable,
};
pub use params::{params_from_json, params_from_preset, DEFAULT_H1_RATIO};
pub use parser::{parse, parse_angle, parse_gate, ParseError, ParseErrorKind, CUSTOM_INIT_TOL};
