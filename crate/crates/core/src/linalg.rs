// Copyright 2026 The zfspin Authors
// SPDX-License-Identifier: Apache-2.0

//! Complex linear algebra for a pair of spin-1/2 particles.
//!
//! Every 4×4 object in this crate lives in the fixed product basis
//! `(|αα⟩, |αβ⟩, |βα⟩, |ββ⟩)`, i.e. index `2·s1 + s2` with `α = 0` and
//! `β = 1`. Pauli `Z` has eigenvalue `+1` on `α`. Units have `ħ = 1`.

use std::fmt;

use nalgebra::DMatrix;
pub use num_complex::Complex64;

use crate::error::Error;

pub type Matrix2 = nalgebra::Matrix2<Complex64>;
pub type Matrix4 = nalgebra::Matrix4<Complex64>;
pub type Vector4 = nalgebra::Vector4<Complex64>;

/// Shared absolute tolerance for exact-arithmetic checks.
pub const TOL: f64 = 1e-12;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `e^{iφ}`
#[inline]
pub fn cis(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, phi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliLabel {
    I,
    X,
    Y,
    Z,
}

impl PauliLabel {
    pub const ALL: [PauliLabel; 4] = [PauliLabel::I, PauliLabel::X, PauliLabel::Y, PauliLabel::Z];
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PauliLabel::I => "I",
            PauliLabel::X => "X",
            PauliLabel::Y => "Y",
            PauliLabel::Z => "Z",
        };
        f.write_str(s)
    }
}

pub fn pauli(label: PauliLabel) -> Matrix2 {
    match label {
        PauliLabel::I => Matrix2::new(ONE, ZERO, ZERO, ONE),
        PauliLabel::X => Matrix2::new(ZERO, ONE, ONE, ZERO),
        PauliLabel::Y => Matrix2::new(ZERO, -I, I, ZERO),
        PauliLabel::Z => Matrix2::new(ONE, ZERO, ZERO, -ONE),
    }
}

pub fn kron(a: &Matrix2, b: &Matrix2) -> Matrix4 {
    a.kronecker(b)
}

/// `pauli(a) ⊗ pauli(b)`
pub fn pauli2(a: PauliLabel, b: PauliLabel) -> Matrix4 {
    kron(&pauli(a), &pauli(b))
}

/// One term `coeff · (σ_first ⊗ σ_second)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliString {
    pub first: PauliLabel,
    pub second: PauliLabel,
    pub coeff: Complex64,
}

impl PauliString {
    pub fn new(first: PauliLabel, second: PauliLabel, coeff: Complex64) -> Self {
        Self { first, second, coeff }
    }

    pub fn matrix(&self) -> Matrix4 {
        pauli2(self.first, self.second) * self.coeff
    }

    fn key(&self) -> (PauliLabel, PauliLabel) {
        (self.first, self.second)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:+.6}{:+.6}i)·{}{}",
            self.coeff.re, self.coeff.im, self.first, self.second
        )
    }
}

/// Linear combination of two-spin Pauli strings.
///
/// Terms are kept canonical: at most one term per label pair, sorted by
/// `(first, second)` in `I < X < Y < Z` order, with exact zeros removed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PauliSum {
    terms: Vec<PauliString>,
}

impl PauliSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = PauliString>) -> Self {
        let mut sum = Self::new();
        for t in terms {
            sum.add(t);
        }
        sum
    }

    /// Add `coeff · σ_first σ_second`, merging with an existing term.
    pub fn add(&mut self, term: PauliString) {
        match self.terms.binary_search_by_key(&term.key(), PauliString::key) {
            Ok(pos) => {
                self.terms[pos].coeff += term.coeff;
                if self.terms[pos].coeff == ZERO {
                    self.terms.remove(pos);
                }
            }
            Err(pos) => {
                if term.coeff != ZERO {
                    self.terms.insert(pos, term);
                }
            }
        }
    }

    pub fn with(mut self, first: PauliLabel, second: PauliLabel, coeff: Complex64) -> Self {
        self.add(PauliString::new(first, second, coeff));
        self
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `σ_first σ_second`, zero if absent.
    pub fn coefficient(&self, first: PauliLabel, second: PauliLabel) -> Complex64 {
        self.terms
            .binary_search_by_key(&(first, second), PauliString::key)
            .map(|pos| self.terms[pos].coeff)
            .unwrap_or(ZERO)
    }

    /// Largest coefficient-wise difference over all 16 label pairs.
    pub fn max_coeff_diff(&self, other: &PauliSum) -> f64 {
        let mut worst = 0.0_f64;
        for a in PauliLabel::ALL {
            for b in PauliLabel::ALL {
                worst = worst.max((self.coefficient(a, b) - other.coefficient(a, b)).norm());
            }
        }
        worst
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

pub fn pauli_sum_matrix(s: &PauliSum) -> Matrix4 {
    s.terms
        .iter()
        .fold(Matrix4::zeros(), |acc, t| acc + t.matrix())
}

/// Coefficients below this magnitude are treated as numerical zeros.
const DECOMPOSE_CUTOFF: f64 = 1e-14;

/// Expand `m` in the Pauli basis: `c_ab = tr((σ_a⊗σ_b)† m) / 4`.
pub fn pauli_decompose(m: &Matrix4) -> PauliSum {
    let mut sum = PauliSum::new();
    for a in PauliLabel::ALL {
        for b in PauliLabel::ALL {
            let p = pauli2(a, b);
            let coeff = (p.adjoint() * m).trace() / 4.0;
            if coeff.norm() > DECOMPOSE_CUTOFF {
                sum.add(PauliString::new(a, b, coeff));
            }
        }
    }
    sum
}

pub fn is_finite(m: &Matrix4) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Largest entrywise deviation `|h_ij − conj(h_ji)|`.
pub fn hermiticity_defect(h: &Matrix4) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(h: &Matrix4) -> Result<([f64; 4], Matrix4), Error> {
    check_hermitian(h)?;
    let eig = h.symmetric_eigen();
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut values = [0.0; 4];
    let mut vectors = Matrix4::zeros();
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = eig.eigenvalues[src];
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

fn check_hermitian(h: &Matrix4) -> Result<(), Error> {
    if !is_finite(h) {
        return Err(Error::NonFinite("generator"));
    }
    let defect = hermiticity_defect(h);
    if defect > TOL {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

/// `exp(−i·angle·h)` for Hermitian `h`, via its spectral decomposition.
pub fn expm_generator(h: &Matrix4, angle: f64) -> Result<Matrix4, Error> {
    if !angle.is_finite() {
        return Err(Error::NonFinite("angle"));
    }
    let (values, vectors) = hermitian_eigen(h)?;
    let phases = Vector4::from_iterator(values.iter().map(|&l| cis(-angle * l)));
    Ok(vectors * Matrix4::from_diagonal(&phases) * vectors.adjoint())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceMode {
    Exact,
    UpToGlobalPhase,
}

fn frobenius_slices(a: &[Complex64], b: &[Complex64], phase: Complex64) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - phase * y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Optimal unit phase `φ` minimising `‖a − φ·b‖`.
fn best_phase(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    // tr(b†a)
    let overlap: Complex64 = a.iter().zip(b).map(|(x, y)| y.conj() * x).sum();
    if overlap.norm() == 0.0 {
        ONE
    } else {
        overlap / overlap.norm()
    }
}

fn distance_slices(a: &[Complex64], b: &[Complex64], mode: DistanceMode) -> f64 {
    match mode {
        DistanceMode::Exact => frobenius_slices(a, b, ONE),
        // Equal to sqrt(‖a‖² + ‖b‖² − 2|tr(b†a)|), evaluated without the
        // cancellation that formula suffers near zero.
        DistanceMode::UpToGlobalPhase => frobenius_slices(a, b, best_phase(a, b)),
    }
}

pub fn distance(a: &Matrix4, b: &Matrix4, mode: DistanceMode) -> f64 {
    distance_slices(a.as_slice(), b.as_slice(), mode)
}

/// [`distance`] for arbitrary equally-shaped blocks.
pub fn block_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, mode: DistanceMode) -> f64 {
    assert_eq!(a.shape(), b.shape(), "block shapes differ");
    distance_slices(a.as_slice(), b.as_slice(), mode)
}

/// The global phase `φ` for which `a ≈ φ·b`.
pub fn relative_phase(a: &Matrix4, b: &Matrix4) -> Complex64 {
    best_phase(a.as_slice(), b.as_slice())
}

/// `‖U·U† − I‖_F`
pub fn unitarity_defect(u: &Matrix4) -> f64 {
    distance(&(u * u.adjoint()), &Matrix4::identity(), DistanceMode::Exact)
}
