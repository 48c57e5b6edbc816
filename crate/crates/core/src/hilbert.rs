//! Dense finite-dimensional complex linear algebra.
//!
//! States are plain amplitude vectors (global phase is not quotiented out),
//! projectors and unitaries are square row-major matrices that are validated
//! on construction. Tensor products use big-endian factor order: the first
//! factor varies slowest, so `e_i ⊗ e_j` is basis index `i * d_2 + j`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::{Error, Result};

/// Tolerance on `|<v|v> - 1|` for a state to count as normalized.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Max-norm tolerance for the Hermitian, idempotent and unitary checks.
pub const OPERATOR_TOLERANCE: f64 = 1e-10;
/// Gram-Schmidt residual below which an input vector is treated as dependent.
pub const SPAN_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps raw amplitudes. The result may be unnormalized.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Dimension { expected: 1, found: 0 });
        }
        Ok(Self { amplitudes })
    }

    /// Real amplitudes, convenient for tests and examples.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Computational basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::Dimension {
                expected: dim,
                found: index + 1,
            });
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(Self { amplitudes })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            amplitudes: vec![ZERO; dim.max(1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    /// Errors unless the state is normalized within [`NORM_TOLERANCE`].
    pub fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::Normalization {
                norm_sqr: self.norm_sqr(),
            })
        }
    }

    /// Rescales to unit norm. A zero vector cannot be normalized.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Normalization { norm_sqr: norm * norm });
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Ray equality: `|<u|v>| = 1` for normalized vectors.
    pub fn same_ray(&self, other: &StateVector, tolerance: f64) -> Result<bool> {
        Ok((self.inner(other)?.norm() - 1.0).abs() <= tolerance)
    }

    fn kron(&self, other: &StateVector) -> StateVector {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        StateVector { amplitudes }
    }
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension { expected: 1, found: 0 });
        }
        check_dim(dim * dim, data.len())?;
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            check_dim(dim, row.len())?;
            data.extend_from_slice(row);
        }
        Self::from_vec(dim, data)
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * m.dim + i] = Complex64::new(e, 0.0);
        }
        m
    }

    /// `|u><v|`.
    pub fn outer(u: &StateVector, v: &StateVector) -> Result<Self> {
        check_dim(u.dim(), v.dim())?;
        let dim = u.dim();
        let mut data = Vec::with_capacity(dim * dim);
        for a in u.amplitudes() {
            for b in v.amplitudes() {
                data.push(a * b.conj());
            }
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.dim)
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self.data[j * n + i].conj());
            }
        }
        Self { dim: n, data }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise modulus.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> Result<f64> {
        check_dim(self.dim, other.dim)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn mul_vec(&self, v: &StateVector) -> Result<StateVector> {
        check_dim(self.dim, v.dim())?;
        let amplitudes = self
            .rows()
            .map(|row| row.iter().zip(v.amplitudes()).map(|(m, a)| m * a).sum())
            .collect();
        Ok(StateVector { amplitudes })
    }

    pub fn try_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        check_dim(self.dim, rhs.dim)?;
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Ok(Matrix { dim: n, data })
    }

    fn zip_with(&self, rhs: &Matrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Matrix> {
        check_dim(self.dim, rhs.dim)?;
        Ok(Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    /// Kronecker product, `self` varying slowest.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let (n, m) = (self.dim, rhs.dim);
        let dim = n * m;
        let mut data = vec![ZERO; dim * dim];
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        data[(i * m + k) * dim + (j * m + l)] = a * rhs.data[k * m + l];
                    }
                }
            }
        }
        Matrix { dim, data }
    }

    fn is_hermitian(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (i..n).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= OPERATOR_TOLERANCE))
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    /// Panics on dimension mismatch; use [`Matrix::try_mul`] otherwise.
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).expect("matrix dimensions must agree")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        self.try_sub(rhs).expect("matrix dimensions must agree")
    }
}

/// Hermitian idempotent matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    matrix: Matrix,
}

impl Projector {
    /// Validates Hermiticity and idempotence to [`OPERATOR_TOLERANCE`].
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_hermitian() {
            return Err(Error::NotProjector("not Hermitian"));
        }
        let square = &matrix * &matrix;
        if square.max_abs_diff(&matrix)? > OPERATOR_TOLERANCE {
            return Err(Error::NotProjector("not idempotent"));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_trusted(matrix: Matrix) -> Self {
        debug_assert!(matrix.is_hermitian());
        Self { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_trusted(Matrix::identity(dim))
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_trusted(Matrix::zeros(dim))
    }

    /// Orthogonal projector onto the span of linearly independent vectors.
    ///
    /// Runs modified Gram-Schmidt; a vector whose residual norm after
    /// removing the previous directions is at most [`SPAN_TOLERANCE`] is
    /// rejected as degenerate.
    pub fn from_span(vectors: &[StateVector]) -> Result<Self> {
        let first = vectors.first().ok_or(Error::DegenerateSpan { index: 0 })?;
        let dim = first.dim();
        let mut basis: Vec<StateVector> = Vec::with_capacity(vectors.len());
        for (index, v) in vectors.iter().enumerate() {
            check_dim(dim, v.dim())?;
            let mut residual = v.normalized().map_err(|_| Error::DegenerateSpan { index })?;
            for b in &basis {
                let overlap = b.inner(&residual)?;
                for (r, e) in residual.amplitudes.iter_mut().zip(b.amplitudes()) {
                    *r -= overlap * e;
                }
            }
            if residual.norm() <= SPAN_TOLERANCE {
                return Err(Error::DegenerateSpan { index });
            }
            basis.push(residual.normalized()?);
        }
        let mut matrix = Matrix::zeros(dim);
        for b in &basis {
            matrix = &matrix + &Matrix::outer(b, b)?;
        }
        Ok(Self::from_trusted(matrix))
    }

    /// Projector onto the computational basis vectors `e_i`, `i ∈ indices`.
    pub fn basis_span(dim: usize, indices: &[usize]) -> Result<Self> {
        let vectors = indices
            .iter()
            .map(|&i| StateVector::basis(dim, i))
            .collect::<Result<Vec<_>>>()?;
        Self::from_span(&vectors)
    }

    /// Rank-one projector `|v><v|` onto the ray of `v`.
    pub fn ketbra(v: &StateVector) -> Result<Self> {
        Self::from_span(core::slice::from_ref(v))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Rank, read off the trace.
    pub fn rank(&self) -> usize {
        libm::round(self.matrix.trace().re) as usize
    }

    /// `Pv`, generally unnormalized.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        self.matrix.mul_vec(v)
    }

    /// `I - P`.
    pub fn complement(&self) -> Projector {
        Self::from_trusted(&Matrix::identity(self.dim()) - &self.matrix)
    }

    /// `U P U†`.
    pub fn conjugate(&self, unitary: &UnitaryMap) -> Result<Projector> {
        check_dim(self.dim(), unitary.dim())?;
        let conjugated = &(&unitary.matrix * &self.matrix) * &unitary.matrix.adjoint();
        Ok(Self::from_trusted(conjugated))
    }

    /// Whether `range(other) ⊆ range(self)`, i.e. `self · other = other`.
    pub fn dominates(&self, other: &Projector) -> Result<bool> {
        let product = self.matrix.try_mul(&other.matrix)?;
        Ok(product.max_abs_diff(&other.matrix)? <= OPERATOR_TOLERANCE)
    }

    /// Whether `self · other = 0`.
    pub fn orthogonal_to(&self, other: &Projector) -> Result<bool> {
        Ok(self.matrix.try_mul(&other.matrix)?.max_norm() <= OPERATOR_TOLERANCE)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMap {
    matrix: Matrix,
}

impl UnitaryMap {
    /// Validates `U†U = I` to [`OPERATOR_TOLERANCE`].
    pub fn new(matrix: Matrix) -> Result<Self> {
        let gram = &matrix.adjoint() * &matrix;
        if gram.max_abs_diff(&Matrix::identity(matrix.dim()))? > OPERATOR_TOLERANCE {
            return Err(Error::NotUnitary);
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: Matrix::identity(dim),
        }
    }

    pub fn pauli_x() -> Self {
        Self {
            matrix: Matrix::from_vec(2, vec![ZERO, ONE, ONE, ZERO]).expect("2x2"),
        }
    }

    /// General qubit unitary `e^{iφ} Rz(α) Ry(β) Rz(γ)`.
    pub fn qubit(phase: f64, alpha: f64, beta: f64, gamma: f64) -> Self {
        let (c, s) = (libm::cos(beta / 2.0), libm::sin(beta / 2.0));
        let e = |angle: f64| Complex64::from_polar(1.0, angle);
        let g = e(phase);
        let data = vec![
            g * e(-(alpha + gamma) / 2.0) * c,
            -g * e(-(alpha - gamma) / 2.0) * s,
            g * e((alpha - gamma) / 2.0) * s,
            g * e((alpha + gamma) / 2.0) * c,
        ];
        Self {
            matrix: Matrix { dim: 2, data },
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        self.matrix.mul_vec(v)
    }

    pub fn adjoint(&self) -> UnitaryMap {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }
}

/// Factor dimensions of a tensor-product space, first factor slowest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorFactorization {
    factor_dims: Vec<usize>,
}

impl TensorFactorization {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self> {
        if factor_dims.is_empty() {
            return Err(Error::EmptyTensor);
        }
        if let Some(&d) = factor_dims.iter().find(|&&d| d == 0) {
            return Err(Error::Dimension { expected: 1, found: d });
        }
        Ok(Self { factor_dims })
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn total_dim(&self) -> usize {
        self.factor_dims.iter().product()
    }

    /// Flat index of the basis tensor `e_{i_1} ⊗ … ⊗ e_{i_n}`.
    pub fn flat_index(&self, indices: &[usize]) -> Result<usize> {
        check_dim(self.factor_dims.len(), indices.len())?;
        let mut flat = 0;
        for (&i, &d) in indices.iter().zip(&self.factor_dims) {
            if i >= d {
                return Err(Error::Dimension {
                    expected: d,
                    found: i + 1,
                });
            }
            flat = flat * d + i;
        }
        Ok(flat)
    }
}

/// Born probability `<p|P p> = ‖P p‖²` of a normalized state.
pub fn born_probability(state: &StateVector, projector: &Projector) -> Result<f64> {
    state.require_normalized()?;
    Ok(projector.apply(state)?.norm_sqr())
}

pub fn tensor_vectors(factors: &[StateVector]) -> Result<(StateVector, TensorFactorization)> {
    let (first, rest) = factors.split_first().ok_or(Error::EmptyTensor)?;
    let product = rest.iter().fold(first.clone(), |acc, v| acc.kron(v));
    let factorization = TensorFactorization::new(factors.iter().map(StateVector::dim).collect())?;
    Ok((product, factorization))
}

pub fn tensor_projectors(factors: &[Projector]) -> Result<Projector> {
    let (first, rest) = factors.split_first().ok_or(Error::EmptyTensor)?;
    let matrix = rest.iter().fold(first.matrix.clone(), |acc, p| acc.kron(&p.matrix));
    Ok(Projector::from_trusted(matrix))
}

pub fn tensor_unitaries(factors: &[UnitaryMap]) -> Result<UnitaryMap> {
    let (first, rest) = factors.split_first().ok_or(Error::EmptyTensor)?;
    let matrix = rest.iter().fold(first.matrix.clone(), |acc, u| acc.kron(&u.matrix));
    Ok(UnitaryMap { matrix })
}
