//! Small dense complex matrices and vectors, plus the structural operations
//! every other module builds on: Kronecker products, partial traces over
//! labeled factors, Gram-Schmidt orthonormalization, and density-operator
//! validation.
//!
//! All dimensions in this crate are tiny (products of coin and die faces), so
//! the representation is a plain row-major `Vec<Complex64>` and the algorithms
//! favor clarity over asymptotics.

use crate::error::{Error, Result};
use crate::space::CompositeSpace;
use num_complex::Complex;
use std::ops::{Index, IndexMut};

pub type Complex64 = Complex<f64>;

/// Default structural tolerance for hermiticity, idempotency, normalization
/// and positivity checks.
pub const DEFAULT_TOL: f64 = 1e-10;

pub const C_ZERO: Complex64 = Complex::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex::new(1.0, 0.0);

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting length mismatches and
    /// non-finite components.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyInput("matrix dimensions must be positive"));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix entries",
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        if let Some(index) = entries
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFiniteEntry { index });
        }
        Ok(ComplexMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            entries: vec![C_ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C_ONE;
        }
        m
    }

    /// Diagonal matrix from the given entries.
    pub fn diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Builds a square matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&x| Complex::new(x, 0.0)).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn require_square(&self, context: &'static str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                context,
                expected: self.rows,
                actual: self.cols,
            })
        }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                actual: other.rows,
            });
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C_ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix sum",
                expected: self.rows * self.cols,
                actual: other.rows * other.cols,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.add(&other.scale(Complex::new(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Result<Complex64> {
        self.require_square("trace")?;
        Ok((0..self.rows).map(|i| self[(i, i)]).sum())
    }

    /// Largest entrywise absolute value.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise absolute difference against `other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        debug_assert_eq!(self.rows, other.rows);
        debug_assert_eq!(self.cols, other.cols);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Deviation from hermiticity, `max |m - m\u{2020}|`.
    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// The hermitized matrix `(m + m\u{2020}) / 2`.
    pub fn hermitize(&self) -> ComplexMatrix {
        self.add(&self.adjoint())
            .expect("adjoint has identical shape")
            .scale(Complex::new(0.5, 0.0))
    }

    /// Real eigenvalues of a (nearly) hermitian matrix, ascending. The input
    /// is hermitized first, so small antihermitian noise is tolerated.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        self.require_square("hermitian eigenvalues")?;
        let h = self.hermitize();
        let na = nalgebra::DMatrix::from_row_slice(h.rows, h.cols, &h.entries);
        let mut eigs: Vec<f64> = na.symmetric_eigen().eigenvalues.iter().copied().collect();
        eigs.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
        Ok(eigs)
    }

    /// Whether `U\u{2020}U = I` within `tol`.
    pub fn unitarity_residual(&self) -> Result<f64> {
        self.require_square("unitarity check")?;
        let product = self.adjoint().matmul(self)?;
        Ok(product.max_abs_diff(&ComplexMatrix::identity(self.rows)))
    }

    /// Extracts column `j` as a vector.
    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector {
            entries: (0..self.rows).map(|i| self[(i, j)]).collect(),
        }
    }

    /// Matrix-vector product `M v`.
    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                actual: v.dim(),
            });
        }
        let entries = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self[(i, j)] * v.entries[j])
                    .sum::<Complex64>()
            })
            .collect();
        Ok(ComplexVector { entries })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

/// Dense complex vector (a ket when it appears in bra-ket formulas).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyInput("vector must have positive dimension"));
        }
        if let Some(index) = entries
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFiniteEntry { index });
        }
        Ok(ComplexVector { entries })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexVector {
            entries: vec![C_ZERO; dim],
        }
    }

    /// Standard basis ket `|index\u{27e9}` in the given dimension.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[index] = C_ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Inner product `\u{27e8}self|other\u{27e9}` (conjugate-linear in `self`).
    pub fn inner(&self, other: &ComplexVector) -> Complex64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> ComplexVector {
        ComplexVector {
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &ComplexVector) -> ComplexVector {
        debug_assert_eq!(self.dim(), other.dim());
        ComplexVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &ComplexVector) -> ComplexVector {
        self.add(&other.scale(Complex::new(-1.0, 0.0)))
    }

    pub fn normalized(&self) -> Result<ComplexVector> {
        let n = self.norm();
        if n <= 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(Complex::new(1.0 / n, 0.0)))
    }

    /// Outer product `|self\u{27e9}\u{27e8}other|`.
    pub fn outer(&self, other: &ComplexVector) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim(), other.dim());
        for i in 0..self.dim() {
            for j in 0..other.dim() {
                m[(i, j)] = self.entries[i] * other.entries[j].conj();
            }
        }
        m
    }

    /// The vector viewed as a `dim x 1` matrix.
    pub fn as_column(&self) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.dim(),
            cols: 1,
            entries: self.entries.clone(),
        }
    }
}

/// Kronecker product `a \u{2297} b`; entry `((i\u{b7}br + k), (j\u{b7}bc + l))`
/// equals `a[i,j] \u{b7} b[k,l]`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = (a.rows(), a.cols());
    let (br, bc) = (b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == C_ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of kets with the same lexicographic entry order as
/// [`tensor_product`].
pub fn tensor_product_vec(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    let mut entries = Vec::with_capacity(a.dim() * b.dim());
    for x in a.entries() {
        for y in b.entries() {
            entries.push(x * y);
        }
    }
    ComplexVector { entries }
}

/// Kronecker product of a whole list of square factor operators, in order.
pub fn tensor_product_all(factors: &[&ComplexMatrix]) -> ComplexMatrix {
    let mut iter = factors.iter();
    let first = iter.next().expect("at least one factor");
    iter.fold((*first).clone(), |acc, m| tensor_product(&acc, m))
}

/// Traces out the factors named in `traced_labels` from an operator on the
/// full space, keeping the remaining factors in declaration order.
///
/// The trace of the result equals the trace of the input, and for a product
/// operator `x \u{2297} y` tracing the `y` factor returns `trace(y) \u{b7} x`.
pub fn partial_trace(
    m: &ComplexMatrix,
    space: &CompositeSpace,
    traced_labels: &[&str],
) -> Result<ComplexMatrix> {
    if !m.is_square() || m.rows() != space.total_dim() {
        return Err(Error::DimensionMismatch {
            context: "partial trace operand",
            expected: space.total_dim(),
            actual: m.rows(),
        });
    }
    if traced_labels.is_empty() {
        return Err(Error::InvalidPartialTrace("no factors to trace out"));
    }
    let mut traced_positions = Vec::with_capacity(traced_labels.len());
    for label in traced_labels {
        let pos = space.position(label)?;
        if traced_positions.contains(&pos) {
            return Err(Error::DuplicateLabel((*label).to_string()));
        }
        traced_positions.push(pos);
    }
    if traced_positions.len() == space.factor_count() {
        return Err(Error::InvalidPartialTrace(
            "tracing out every factor leaves no operator; use trace()",
        ));
    }

    let dims = space.dims();
    let kept_positions: Vec<usize> = (0..dims.len())
        .filter(|p| !traced_positions.contains(p))
        .collect();
    let kept_dim: usize = kept_positions.iter().map(|&p| dims[p]).product();
    let traced_dim: usize = traced_positions.iter().map(|&p| dims[p]).product();

    // digits of a flat kept/traced index in the order of kept/traced positions
    let split = |mut idx: usize, positions: &[usize]| -> Vec<usize> {
        let mut digits = vec![0usize; positions.len()];
        for (slot, &p) in positions.iter().enumerate().rev() {
            digits[slot] = idx % dims[p];
            idx /= dims[p];
        }
        digits
    };

    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
    let mut full = vec![0usize; dims.len()];
    for r in 0..kept_dim {
        let r_digits = split(r, &kept_positions);
        for c in 0..kept_dim {
            let c_digits = split(c, &kept_positions);
            let mut sum = C_ZERO;
            for t in 0..traced_dim {
                let t_digits = split(t, &traced_positions);
                for (slot, &p) in kept_positions.iter().enumerate() {
                    full[p] = r_digits[slot];
                }
                for (slot, &p) in traced_positions.iter().enumerate() {
                    full[p] = t_digits[slot];
                }
                let row = space.merge_index(&full);
                for (slot, &p) in kept_positions.iter().enumerate() {
                    full[p] = c_digits[slot];
                }
                let col = space.merge_index(&full);
                sum += m[(row, col)];
            }
            out[(r, c)] = sum;
        }
    }
    Ok(out)
}

/// Orthonormalizes `vectors` in order. The first output is parallel to the
/// first input, and a residual below `DEFAULT_TOL` (relative to the input
/// norm) reports the offending index as linearly dependent.
pub fn gram_schmidt(vectors: &[ComplexVector]) -> Result<Vec<ComplexVector>> {
    if vectors.is_empty() {
        return Err(Error::EmptyInput("gram_schmidt needs at least one vector"));
    }
    let dim = vectors[0].dim();
    let mut out: Vec<ComplexVector> = Vec::with_capacity(vectors.len());
    for (index, v) in vectors.iter().enumerate() {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                context: "gram_schmidt input",
                expected: dim,
                actual: v.dim(),
            });
        }
        let mut residual = v.clone();
        for q in &out {
            let overlap = q.inner(&residual);
            residual = residual.sub(&q.scale(overlap));
        }
        let scale = v.norm().max(1.0);
        if residual.norm() <= DEFAULT_TOL * scale {
            return Err(Error::LinearlyDependent { index });
        }
        out.push(residual.normalized()?);
    }
    Ok(out)
}

/// Structural report produced by [`validate_density`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub hermitian: bool,
    pub hermiticity_residual: f64,
    pub positive_semidefinite: bool,
    pub min_eigenvalue: f64,
    pub trace_one: bool,
    pub trace: Complex64,
}

impl DensityReport {
    pub fn all_pass(&self) -> bool {
        self.hermitian && self.positive_semidefinite && self.trace_one
    }

    /// Human-readable list of failed checks, empty when everything passes.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.hermitian {
            out.push(format!(
                "not hermitian (residual {:.3e})",
                self.hermiticity_residual
            ));
        }
        if !self.positive_semidefinite {
            out.push(format!(
                "not positive semi-definite (min eigenvalue {:.3e})",
                self.min_eigenvalue
            ));
        }
        if !self.trace_one {
            out.push(format!("trace is {} instead of 1", self.trace));
        }
        out
    }
}

/// Checks hermiticity, positive semi-definiteness (via eigenvalues of the
/// hermitized matrix), and unit trace, each within `tol`.
pub fn validate_density(m: &ComplexMatrix, tol: f64) -> Result<DensityReport> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            context: "density operator",
            expected: m.rows(),
            actual: m.cols(),
        });
    }
    let hermiticity_residual = m.hermiticity_residual();
    let eigs = m.hermitian_eigenvalues()?;
    let min_eigenvalue = eigs.first().copied().unwrap_or(0.0);
    let trace = m.trace()?;
    Ok(DensityReport {
        hermitian: hermiticity_residual <= tol,
        hermiticity_residual,
        positive_semidefinite: min_eigenvalue >= -tol,
        min_eigenvalue,
        trace_one: (trace - C_ONE).norm() <= tol,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex::new(re, im)
    }

    /// Independent entry-formula oracle for the Kronecker product.
    fn kron_oracle(a: &ComplexMatrix, b: &ComplexMatrix, r: usize, cidx: usize) -> Complex64 {
        let (br, bc) = (b.rows(), b.cols());
        a[(r / br, cidx / bc)] * b[(r % br, cidx % bc)]
    }

    #[test]
    fn tensor_identity_times_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor_product(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn tensor_sigma_z_sigma_x() {
        let sigma_z = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
        let sigma_x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let prod = tensor_product(&sigma_z, &sigma_x);
        assert_eq!(prod.rows(), 4);
        for r in 0..4 {
            for cidx in 0..4 {
                let expected = kron_oracle(&sigma_z, &sigma_x, r, cidx);
                assert!((prod[(r, cidx)] - expected).norm() < 1e-15);
            }
        }
        // block structure [[sigma_x, 0], [0, -sigma_x]]
        assert_eq!(prod[(0, 1)], c(1.0, 0.0));
        assert_eq!(prod[(2, 3)], c(-1.0, 0.0));
    }

    #[test]
    fn tensor_of_column_vectors_is_lexicographic() {
        let a = ComplexMatrix::from_real(2, 1, &[1.0, 2.0]).unwrap();
        let b = ComplexMatrix::from_real(3, 1, &[3.0, 4.0, 5.0]).unwrap();
        let prod = tensor_product(&a, &b);
        assert_eq!(prod.rows(), 6);
        assert_eq!(prod.cols(), 1);
        let expected = [3.0, 4.0, 5.0, 6.0, 8.0, 10.0];
        for (r, &x) in expected.iter().enumerate() {
            assert!((prod[(r, 0)] - c(x, 0.0)).norm() < 1e-15);
            assert!((prod[(r, 0)] - kron_oracle(&a, &b, r, 0)).norm() < 1e-15);
        }
    }

    #[test]
    fn partial_trace_of_product_returns_kept_factor() {
        let rho_a = ComplexMatrix::from_real(2, 2, &[0.7, 0.1, 0.1, 0.3]).unwrap();
        let rho_b = ComplexMatrix::from_real(2, 2, &[0.5, 0.2, 0.2, 0.5]).unwrap();
        let space = CompositeSpace::compose(&[("A", 2), ("B", 2)]).unwrap();
        let full = tensor_product(&rho_a, &rho_b);
        let reduced = partial_trace(&full, &space, &["B"]).unwrap();
        assert!(reduced.max_abs_diff(&rho_a) < 1e-14);
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        // |00> + |11> over sqrt(2)
        let amp = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi = ComplexVector::new(vec![amp, C_ZERO, C_ZERO, amp]).unwrap();
        let rho = psi.outer(&psi);
        let space = CompositeSpace::compose(&[("A", 2), ("B", 2)]).unwrap();

        // brute-force double-index oracle: out[i][j] = sum_k rho[(i,k),(j,k)]
        let mut oracle = ComplexMatrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let e = oracle[(i, j)] + rho[(i * 2 + k, j * 2 + k)];
                    oracle[(i, j)] = e;
                }
            }
        }

        let reduced = partial_trace(&rho, &space, &["B"]).unwrap();
        assert!(reduced.max_abs_diff(&oracle) < 1e-14);
        let half_identity = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        assert!(reduced.max_abs_diff(&half_identity) < 1e-14);
    }

    #[test]
    fn partial_trace_keeps_three_dim_factor() {
        let rho_s = ComplexMatrix::from_real(2, 2, &[0.25, 0.0, 0.0, 0.75]).unwrap();
        let rho_a =
            ComplexMatrix::from_real(3, 3, &[0.5, 0.0, 0.1, 0.0, 0.3, 0.0, 0.1, 0.0, 0.2]).unwrap();
        let space = CompositeSpace::compose(&[("S", 2), ("A", 3)]).unwrap();
        let full = tensor_product(&rho_s, &rho_a);
        let reduced = partial_trace(&full, &space, &["S"]).unwrap();
        assert!(reduced.max_abs_diff(&rho_a) < 1e-14);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let space = CompositeSpace::compose(&[("S", 2), ("A", 3)]).unwrap();
        let mut m = ComplexMatrix::zeros(6, 6);
        for i in 0..6 {
            for j in 0..6 {
                m[(i, j)] = c((i * 7 + j) as f64 * 0.01, (i as f64 - j as f64) * 0.02);
            }
        }
        let reduced = partial_trace(&m, &space, &["S"]).unwrap();
        let diff = (reduced.trace().unwrap() - m.trace().unwrap()).norm();
        assert!(diff < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_inputs() {
        let space = CompositeSpace::compose(&[("S", 2), ("A", 3)]).unwrap();
        let wrong = ComplexMatrix::identity(5);
        assert!(partial_trace(&wrong, &space, &["S"]).is_err());
        let m = ComplexMatrix::identity(6);
        assert!(partial_trace(&m, &space, &[]).is_err());
        assert!(partial_trace(&m, &space, &["S", "A"]).is_err());
        assert!(partial_trace(&m, &space, &["X"]).is_err());
    }

    #[test]
    fn gram_schmidt_keeps_orthonormal_input() {
        let e1 = ComplexVector::basis(2, 0);
        let e2 = ComplexVector::basis(2, 1);
        let out = gram_schmidt(&[e1.clone(), e2.clone()]).unwrap();
        assert!(out[0].sub(&e1).norm() < 1e-14);
        assert!(out[1].sub(&e2).norm() < 1e-14);
    }

    #[test]
    fn gram_schmidt_orthonormalizes_skewed_pair() {
        let v1 = ComplexVector::from_real(&[1.0, 0.0]).unwrap();
        let v2 = ComplexVector::from_real(&[1.0, 1.0]).unwrap();
        let out = gram_schmidt(&[v1, v2]).unwrap();
        // hand result: {(1,0), (0,1)}
        assert!(out[0].sub(&ComplexVector::basis(2, 0)).norm() < 1e-14);
        assert!(out[1].sub(&ComplexVector::basis(2, 1)).norm() < 1e-14);
        for a in &out {
            for b in &out {
                let ip = a.inner(b);
                let expected = if a == b { C_ONE } else { C_ZERO };
                assert!((ip - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn gram_schmidt_rejects_dependent_vectors() {
        let v = ComplexVector::from_real(&[1.0, 1.0, 0.0])
            .unwrap()
            .normalized()
            .unwrap();
        let err = gram_schmidt(&[v.clone(), v]).unwrap_err();
        assert!(matches!(err, Error::LinearlyDependent { index: 1 }));
    }

    #[test]
    fn validate_density_accepts_maximally_mixed() {
        let m = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        let report = validate_density(&m, DEFAULT_TOL).unwrap();
        assert!(report.all_pass(), "failures: {:?}", report.failures());
    }

    #[test]
    fn validate_density_accepts_pure_projector() {
        let ket = ComplexVector::basis(2, 0);
        let report = validate_density(&ket.outer(&ket), DEFAULT_TOL).unwrap();
        assert!(report.all_pass());
    }

    #[test]
    fn validate_density_flags_wrong_trace() {
        let m = ComplexMatrix::from_real(2, 2, &[0.6, 0.0, 0.0, 0.6]).unwrap();
        let report = validate_density(&m, DEFAULT_TOL).unwrap();
        assert!(report.hermitian);
        assert!(report.positive_semidefinite);
        assert!(!report.trace_one);
    }

    #[test]
    fn hermitian_eigenvalues_of_complex_matrix() {
        let m = ComplexMatrix::new(
            2,
            2,
            vec![c(1.0, 0.0), c(0.0, -0.5), c(0.0, 0.5), c(2.0, 0.0)],
        )
        .unwrap();
        let eigs = m.hermitian_eigenvalues().unwrap();
        // (3 +- sqrt(2)) / 2
        let lo = (3.0 - 2.0_f64.sqrt()) / 2.0;
        let hi = (3.0 + 2.0_f64.sqrt()) / 2.0;
        assert!((eigs[0] - lo).abs() < 1e-12);
        assert!((eigs[1] - hi).abs() < 1e-12);
    }

    #[test]
    fn matrix_rejects_non_finite_entries() {
        let err = ComplexMatrix::new(1, 2, vec![C_ONE, c(f64::NAN, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::NonFiniteEntry { index: 1 }));
    }
}
