//! Dense exact linear algebra over a single [`FieldSpec`]: determinants by
//! two independent routes (fraction-free elimination and cofactor
//! expansion), kernels by row reduction, eigenvectors for known eigenvalues,
//! and change of basis.
//!
//! Matrices here are square with rows and columns indexed `0..=d`. Pivoting
//! picks the first nonzero entry in a column; abstract fields have no
//! magnitudes to compare.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use crate::scalar::{FieldElement, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinalgError {
    NotSquare { rows: usize, cols: usize },
    FieldMismatch { row: usize, col: usize },
    DimensionTooLarge { dim: usize, limit: usize },
    NotAnEigenvalue,
    DegenerateEigenspace { kernel_dim: usize },
    SingularBasisMatrix,
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::NotSquare { rows, cols } => {
                write!(f, "matrix is {rows}x{cols}, expected square")
            }
            LinalgError::FieldMismatch { row, col } => {
                write!(f, "entry ({row},{col}) belongs to a different field")
            }
            LinalgError::DimensionTooLarge { dim, limit } => {
                write!(f, "dimension {dim} exceeds the limit {limit} for this routine")
            }
            LinalgError::NotAnEigenvalue => write!(f, "value is not an eigenvalue"),
            LinalgError::DegenerateEigenspace { kernel_dim } => {
                write!(f, "eigenspace has dimension {kernel_dim}, expected 1")
            }
            LinalgError::SingularBasisMatrix => write!(f, "basis matrix is singular"),
        }
    }
}

impl core::error::Error for LinalgError {}

/// A dense square matrix of exact field elements, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    spec: FieldSpec,
    dim: usize,
    entries: Vec<FieldElement>,
}

/// A column vector of exact field elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactVector {
    spec: FieldSpec,
    entries: Vec<FieldElement>,
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = FieldElement;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElement {
        assert!(i < self.dim && j < self.dim);
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElement {
        assert!(i < self.dim && j < self.dim);
        &mut self.entries[i * self.dim + j]
    }
}

impl ExactMatrix {
    pub fn zeros(spec: FieldSpec, dim: usize) -> Self {
        assert!(dim > 0, "matrices have positive dimension");
        ExactMatrix {
            spec,
            dim,
            entries: vec![spec.zero(); dim * dim],
        }
    }

    pub fn identity(spec: FieldSpec, dim: usize) -> Self {
        let mut m = Self::zeros(spec, dim);
        for i in 0..dim {
            m[(i, i)] = spec.one();
        }
        m
    }

    pub fn from_fn(spec: FieldSpec, dim: usize, mut f: impl FnMut(usize, usize) -> FieldElement) -> Self {
        let mut m = Self::zeros(spec, dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from rows, checking squareness and that every entry
    /// lives in `spec`.
    pub fn from_rows(spec: FieldSpec, rows: Vec<Vec<FieldElement>>) -> Result<Self, LinalgError> {
        let dim = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(LinalgError::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
            for (j, e) in row.iter().enumerate() {
                if e.spec() != spec {
                    return Err(LinalgError::FieldMismatch { row: i, col: j });
                }
            }
        }
        if dim == 0 {
            return Err(LinalgError::NotSquare { rows: 0, cols: 0 });
        }
        Ok(ExactMatrix {
            spec,
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal(spec: FieldSpec, entries: &[FieldElement]) -> Self {
        let mut m = Self::zeros(spec, entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn diagonal_entries(&self) -> Vec<FieldElement> {
        (0..self.dim).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldElement::is_zero)
    }

    /// True when every entry strictly below (resp. above) the diagonal is
    /// zero, so the diagonal carries the spectrum with multiplicity.
    pub fn is_triangular(&self) -> bool {
        let lower_zero = (0..self.dim)
            .all(|i| (0..i).all(|j| self[(i, j)].is_zero()));
        let upper_zero = (0..self.dim)
            .all(|i| (i + 1..self.dim).all(|j| self[(i, j)].is_zero()));
        lower_zero || upper_zero
    }

    pub fn is_tridiagonal(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| i.abs_diff(j) <= 1 || self[(i, j)].is_zero())
        })
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.dim, other.dim);
        assert_eq!(self.spec, other.spec);
        let n = self.dim;
        ExactMatrix::from_fn(self.spec, n, |i, j| {
            let mut acc = self.spec.zero();
            for k in 0..n {
                acc = &acc + &(&self[(i, k)] * &other[(k, j)]);
            }
            acc
        })
    }

    pub fn sub(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.dim, other.dim);
        assert_eq!(self.spec, other.spec);
        ExactMatrix::from_fn(self.spec, self.dim, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn apply(&self, v: &ExactVector) -> ExactVector {
        assert_eq!(self.dim, v.dim());
        let n = self.dim;
        let entries = (0..n)
            .map(|i| {
                let mut acc = self.spec.zero();
                for k in 0..n {
                    acc = &acc + &(&self[(i, k)] * v.entry(k));
                }
                acc
            })
            .collect();
        ExactVector {
            spec: self.spec,
            entries,
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination with
    /// first-nonzero pivoting. Singular matrices return zero.
    pub fn determinant_bareiss(&self) -> FieldElement {
        let n = self.dim;
        if n == 1 {
            return self[(0, 0)].clone();
        }
        let mut m = self.entries.clone();
        let mut negate = false;
        let mut prev = self.spec.one();
        for k in 0..n - 1 {
            let pivot_row = match (k..n).find(|&r| !m[r * n + k].is_zero()) {
                Some(r) => r,
                None => return self.spec.zero(),
            };
            if pivot_row != k {
                for j in 0..n {
                    m.swap(pivot_row * n + j, k * n + j);
                }
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[i * n + j] * &m[k * n + k]) - &(&m[i * n + k] * &m[k * n + j]);
                    // Bareiss: this division is exact.
                    m[i * n + j] = num.div(&prev).expect("previous pivot is nonzero");
                }
                m[i * n + k] = self.spec.zero();
            }
            prev = m[k * n + k].clone();
        }
        let det = m[n * n - 1].clone();
        if negate {
            -det
        } else {
            det
        }
    }

    /// Independent determinant oracle by cofactor expansion along the first
    /// row. Factorial cost, so the dimension is capped.
    pub fn determinant_cofactor(&self) -> Result<FieldElement, LinalgError> {
        const LIMIT: usize = 8;
        if self.dim > LIMIT {
            return Err(LinalgError::DimensionTooLarge {
                dim: self.dim,
                limit: LIMIT,
            });
        }
        Ok(self.cofactor_rec())
    }

    fn cofactor_rec(&self) -> FieldElement {
        let n = self.dim;
        if n == 1 {
            return self[(0, 0)].clone();
        }
        let mut acc = self.spec.zero();
        for j in 0..n {
            if self[(0, j)].is_zero() {
                continue;
            }
            let minor = ExactMatrix::from_fn(self.spec, n - 1, |r, c| {
                let col = if c < j { c } else { c + 1 };
                self[(r + 1, col)].clone()
            });
            let term = &self[(0, j)] * &minor.cofactor_rec();
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    /// Reduced row echelon form; returns the reduced entries and the pivot
    /// columns.
    fn rref(&self) -> (Vec<FieldElement>, Vec<usize>) {
        let n = self.dim;
        let mut m = self.entries.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let pivot_row = match (row..n).find(|&r| !m[r * n + col].is_zero()) {
                Some(r) => r,
                None => continue,
            };
            if pivot_row != row {
                for j in 0..n {
                    m.swap(pivot_row * n + j, row * n + j);
                }
            }
            let inv = m[row * n + col].inv().expect("pivot is nonzero");
            for j in col..n {
                m[row * n + j] = &m[row * n + j] * &inv;
            }
            for i in 0..n {
                if i != row && !m[i * n + col].is_zero() {
                    let factor = m[i * n + col].clone();
                    for j in col..n {
                        let delta = &factor * &m[row * n + j];
                        m[i * n + j] = &m[i * n + j] - &delta;
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == n {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the null space; the empty list means the matrix is
    /// invertible.
    pub fn kernel_basis(&self) -> Vec<ExactVector> {
        let n = self.dim;
        let (m, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..n).filter(|c| !pivots.contains(c)) {
            let mut v = vec![self.spec.zero(); n];
            v[free] = self.spec.one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -&m[prow * n + free];
            }
            basis.push(ExactVector {
                spec: self.spec,
                entries: v,
            });
        }
        basis
    }

    pub fn inverse(&self) -> Option<ExactMatrix> {
        let n = self.dim;
        // Gauss-Jordan on [M | I].
        let w = 2 * n;
        let mut m: Vec<FieldElement> = Vec::with_capacity(n * w);
        for i in 0..n {
            for j in 0..n {
                m.push(self[(i, j)].clone());
            }
            for j in 0..n {
                m.push(if i == j { self.spec.one() } else { self.spec.zero() });
            }
        }
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !m[r * w + col].is_zero())?;
            if pivot_row != col {
                for j in 0..w {
                    m.swap(pivot_row * w + j, col * w + j);
                }
            }
            let inv = m[col * w + col].inv().expect("pivot is nonzero");
            for j in col..w {
                m[col * w + j] = &m[col * w + j] * &inv;
            }
            for i in 0..n {
                if i != col && !m[i * w + col].is_zero() {
                    let factor = m[i * w + col].clone();
                    for j in col..w {
                        let delta = &factor * &m[col * w + j];
                        m[i * w + j] = &m[i * w + j] - &delta;
                    }
                }
            }
        }
        Some(ExactMatrix::from_fn(self.spec, n, |i, j| {
            m[i * w + n + j].clone()
        }))
    }

    /// A basis vector for a one-dimensional eigenspace, normalized so its
    /// first nonzero entry is 1.
    pub fn eigenvector_for(&self, lambda: &FieldElement) -> Result<ExactVector, LinalgError> {
        let shifted = ExactMatrix::from_fn(self.spec, self.dim, |i, j| {
            if i == j {
                &self[(i, j)] - lambda
            } else {
                self[(i, j)].clone()
            }
        });
        let mut kernel = shifted.kernel_basis();
        match kernel.len() {
            0 => Err(LinalgError::NotAnEigenvalue),
            1 => Ok(kernel.pop().unwrap().normalized()),
            k => Err(LinalgError::DegenerateEigenspace { kernel_dim: k }),
        }
    }

    /// Conjugation `P^-1 M P`.
    pub fn change_basis(&self, p: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        assert_eq!(self.dim, p.dim);
        let p_inv = p.inverse().ok_or(LinalgError::SingularBasisMatrix)?;
        Ok(p_inv.mul(self).mul(p))
    }
}

impl ExactVector {
    pub fn from_entries(spec: FieldSpec, entries: Vec<FieldElement>) -> Result<Self, LinalgError> {
        for (i, e) in entries.iter().enumerate() {
            if e.spec() != spec {
                return Err(LinalgError::FieldMismatch { row: i, col: 0 });
            }
        }
        Ok(ExactVector { spec, entries })
    }

    /// The standard basis vector with a 1 in the given position.
    pub fn basis_vector(spec: FieldSpec, dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut entries = vec![spec.zero(); dim];
        entries[index] = spec.one();
        ExactVector { spec, entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn entry(&self, i: usize) -> &FieldElement {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldElement::is_zero)
    }

    /// Rescales so the first nonzero entry is 1; zero vectors are unchanged.
    pub fn normalized(&self) -> ExactVector {
        match self.entries.iter().find(|e| !e.is_zero()) {
            None => self.clone(),
            Some(first) => {
                let inv = first.inv().expect("nonzero");
                ExactVector {
                    spec: self.spec,
                    entries: self.entries.iter().map(|e| e * &inv).collect(),
                }
            }
        }
    }

    /// Scaling-free proportionality test via cross products:
    /// `x_i y_j == x_j y_i` for all i < j.
    pub fn proportional_to(&self, other: &ExactVector) -> bool {
        assert_eq!(self.dim(), other.dim());
        let n = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                if &self.entries[i] * other.entry(j) != &self.entries[j] * other.entry(i) {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for ExactVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}
