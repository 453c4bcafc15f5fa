// Copyright 2026 The zfspin Authors
// SPDX-License-Identifier: Apache-2.0

//! Reference implementations written independently of the library.

#![allow(dead_code)]

use num_complex::Complex64;
use zfspin::linalg::{Matrix4, Vector4};

pub const R: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub fn z(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cis(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, phi)
}

pub type M2 = [[Complex64; 2]; 2];

pub fn sigma(label: char) -> M2 {
    let o = z(0.0, 0.0);
    let l = z(1.0, 0.0);
    let i = z(0.0, 1.0);
    match label {
        'I' => [[l, o], [o, l]],
        'X' => [[o, l], [l, o]],
        'Y' => [[o, -i], [i, o]],
        'Z' => [[l, o], [o, -l]],
        _ => unreachable!(),
    }
}

/// `a ⊗ b` with the first spin as the slow index, written out entrywise.
pub fn tensor(a: &M2, b: &M2) -> Matrix4 {
    Matrix4::from_fn(|r, c| a[r / 2][c / 2] * b[r % 2][c % 2])
}

pub fn pp(a: char, b: char) -> Matrix4 {
    tensor(&sigma(a), &sigma(b))
}

/// Product-basis amplitudes `(αα, αβ, βα, ββ)`.
pub fn ket(a: [Complex64; 4]) -> Vector4 {
    Vector4::new(a[0], a[1], a[2], a[3])
}

pub fn t0() -> Vector4 {
    ket([z(0.0, 0.0), z(R, 0.0), z(R, 0.0), z(0.0, 0.0)])
}

pub fn bell_a() -> Vector4 {
    ket([z(R, 0.0), z(0.0, 0.0), z(0.0, 0.0), z(-R, 0.0)])
}

pub fn bell_b() -> Vector4 {
    ket([z(R, 0.0), z(0.0, 0.0), z(0.0, 0.0), z(R, 0.0)])
}

pub fn singlet() -> Vector4 {
    ket([z(0.0, 0.0), z(R, 0.0), z(-R, 0.0), z(0.0, 0.0)])
}

/// `exp(m)` by scaling and squaring a truncated Taylor series.
pub fn taylor_expm(m: &Matrix4) -> Matrix4 {
    let norm = m.norm();
    let mut s = 0u32;
    while norm / f64::from(1u32 << s.min(30)) > 0.25 {
        s += 1;
    }
    let a = m / z(f64::from(1u32 << s), 0.0);
    let mut term = Matrix4::identity();
    let mut sum = Matrix4::identity();
    for k in 1..=24 {
        term = term * a / z(k as f64, 0.0);
        sum += term;
    }
    for _ in 0..s {
        sum = sum * sum;
    }
    sum
}

pub fn fro(a: &Matrix4) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vdist(a: &Vector4, b: &Vector4) -> f64 {
    (a - b).norm()
}

/// `n` evenly spaced points in `[0, 2π)`.
pub fn circle(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * std::f64::consts::PI * k as f64 / n as f64).collect()
}

/// Deterministic pseudo-random angle pairs in `[0, 2π)²`.
pub fn sample_angles(n: usize, seed: u64) -> Vec<(f64, f64)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let tau = 2.0 * std::f64::consts::PI;
    (0..n).map(|_| (rng.gen_range(0.0..tau), rng.gen_range(0.0..tau))).collect()
}
