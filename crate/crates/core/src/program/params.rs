// Copyright 2026 The zfspin Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use serde::Deserialize;

use crate::error::Error;
use crate::spin::{find_preset, PhysicalParams, FREE_ELECTRON_G};

/// Drive ratio used when a preset does not say otherwise.
pub const DEFAULT_H1_RATIO: f64 = 1e-3;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsDoc {
    preset: Option<String>,
    d_hz: Option<f64>,
    g: Option<f64>,
    h1_ratio: Option<f64>,
    omega_g_hz: Option<f64>,
}

pub fn params_from_preset(name: &str, h1_ratio: Option<f64>) -> Result<PhysicalParams, Error> {
    find_preset(name)?.params(h1_ratio.unwrap_or(DEFAULT_H1_RATIO))
}

/// `{"preset": name}` (optionally with `h1_ratio`), or explicit
/// `{"d_hz", "g", "h1_ratio", "omega_g_hz"?}` in ordinary Hz.
pub fn params_from_json(text: &str) -> Result<PhysicalParams, Error> {
    let doc: ParamsDoc = serde_json::from_str(text).map_err(|e| Error::InvalidParams(e.to_string()))?;
    if let Some(name) = &doc.preset {
        if doc.d_hz.is_some() || doc.g.is_some() || doc.omega_g_hz.is_some() {
            return Err(Error::InvalidParams("`preset` cannot be combined with d_hz, g or omega_g_hz".into()));
        }
        return params_from_preset(name, doc.h1_ratio);
    }
    let d_hz = doc.d_hz.ok_or_else(|| Error::InvalidParams("missing `d_hz`".into()))?;
    let h1_ratio = doc.h1_ratio.ok_or_else(|| Error::InvalidParams("missing `h1_ratio`".into()))?;
    let g = doc.g.unwrap_or(FREE_ELECTRON_G);
    let omega_hz = doc.omega_g_hz.unwrap_or(d_hz);
    PhysicalParams::new(2.0 * PI * d_hz, g, h1_ratio, 2.0 * PI * omega_hz)
}
