//! Small dense matrices: standardization, Pearson correlation and a cyclic
//! Jacobi eigensolver for symmetric input.

use std::fmt;
use std::ops::{Index, IndexMut};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("column {label} has zero variance")]
    DegenerateColumn { index: usize, label: String },
    #[error("matrix is not symmetric: |a[{row}][{col}] - a[{col}][{row}]| = {gap:e}")]
    NotSymmetric { row: usize, col: usize, gap: f64 },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("need at least {needed} rows, got {got}")]
    TooFewRows { needed: usize, got: usize },
    #[error(
        "Jacobi iteration did not converge in {sweeps} sweeps (off-diagonal norm {off_norm:e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_columns<C: AsRef<[f64]>>(columns: &[C]) -> Self {
        let rows = columns.first().map_or(0, |c| c.as_ref().len());
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            let c = c.as_ref();
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// First `k` columns.
    pub fn leading_columns(&self, k: usize) -> Matrix {
        let mut m = Matrix::zeros(self.rows, k);
        for i in 0..self.rows {
            m.data[i * k..(i + 1) * k].copy_from_slice(&self.row(i)[..k]);
        }
        m
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Largest `|a_ij - a_ji|`.
    pub fn asymmetry(&self) -> (usize, usize, f64) {
        let mut worst = (0, 0, 0.0);
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let gap = (self[(i, j)] - self[(j, i)]).abs();
                if gap > worst.2 {
                    worst = (i, j, gap);
                }
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x:>10.4}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population (divide by n) standard deviation.
pub fn population_sd(xs: &[f64]) -> f64 {
    let mu = mean(xs);
    (xs.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / xs.len() as f64).sqrt()
}

/// A column whose spread is below this fraction of its magnitude is treated
/// as constant; rounding noise in symmetric graphs would otherwise be
/// amplified into spurious correlations.
const RELATIVE_VARIANCE_FLOOR: f64 = 1e-12;

fn is_degenerate(xs: &[f64]) -> bool {
    let scale = xs.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    population_sd(xs) <= RELATIVE_VARIANCE_FLOOR * scale
}

/// Z-scores every column (mean 0, population sd 1).
pub fn standardize_columns(m: &Matrix) -> Result<Matrix, LinalgError> {
    standardize_labeled(m, &[])
}

pub(crate) fn standardize_labeled(m: &Matrix, labels: &[&str]) -> Result<Matrix, LinalgError> {
    if !m.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let mut out = m.clone();
    for j in 0..m.cols {
        let col = m.column(j);
        if col.is_empty() || is_degenerate(&col) {
            let label = labels
                .get(j)
                .map_or_else(|| format!("#{j}"), |s| s.to_string());
            return Err(LinalgError::DegenerateColumn { index: j, label });
        }
        let mu = mean(&col);
        let sd = population_sd(&col);
        for (i, x) in col.iter().enumerate() {
            out[(i, j)] = (x - mu) / sd;
        }
    }
    Ok(out)
}

/// Pearson correlation matrix of the columns of a data matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix(Matrix);

impl CorrelationMatrix {
    /// Wraps a square, finite, symmetric matrix. Use [`validate`](Self::validate)
    /// for the remaining invariants.
    pub fn new(m: Matrix) -> Result<Self, LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare {
                rows: m.rows,
                cols: m.cols,
            });
        }
        if !m.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        let (row, col, gap) = m.asymmetry();
        if gap > 1e-12 {
            return Err(LinalgError::NotSymmetric { row, col, gap });
        }
        Ok(CorrelationMatrix(m))
    }

    fn check_entries(&self) -> Result<(), String> {
        for i in 0..self.0.rows {
            if (self.0[(i, i)] - 1.0).abs() > 1e-12 {
                return Err(format!("diagonal entry {i} is {}", self.0[(i, i)]));
            }
            for j in 0..self.0.cols {
                if self.0[(i, j)].abs() > 1.0 + 1e-12 {
                    return Err(format!(
                        "entry ({i},{j}) = {} outside [-1, 1]",
                        self.0[(i, j)]
                    ));
                }
            }
        }
        Ok(())
    }

    /// Full invariant check, including positive semidefiniteness.
    pub fn validate(&self) -> Result<(), String> {
        self.check_entries()?;
        let p = self.0.rows as f64;
        if (self.0.trace() - p).abs() > 1e-9 {
            return Err(format!("trace {} differs from {p}", self.0.trace()));
        }
        let eig = jacobi_eigen(&self.0, DEFAULT_JACOBI_TOL).map_err(|e| e.to_string())?;
        let smallest = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if smallest < -1e-9 {
            return Err(format!("smallest eigenvalue {smallest} is negative"));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }
}

/// Pearson correlation of every pair of columns, computed as `(1/n) ZᵀZ`
/// over the standardized matrix.
pub fn correlation_matrix(m: &Matrix) -> Result<CorrelationMatrix, LinalgError> {
    correlation_labeled(m, &[])
}

pub(crate) fn correlation_labeled(
    m: &Matrix,
    labels: &[&str],
) -> Result<CorrelationMatrix, LinalgError> {
    if m.rows < 3 {
        return Err(LinalgError::TooFewRows {
            needed: 3,
            got: m.rows,
        });
    }
    let z = standardize_labeled(m, labels)?;
    let n = m.rows as f64;
    let p = m.cols;
    let mut c = Matrix::zeros(p, p);
    for a in 0..p {
        c[(a, a)] = 1.0;
        for b in (a + 1)..p {
            let s: f64 = (0..m.rows).map(|i| z[(i, a)] * z[(i, b)]).sum();
            let r = (s / n).clamp(-1.0, 1.0);
            c[(a, b)] = r;
            c[(b, a)] = r;
        }
    }
    CorrelationMatrix::new(c)
}

/// Eigenpairs of a symmetric matrix, sorted by descending eigenvalue.
///
/// Column `j` of `eigenvectors` pairs with `eigenvalues[j]`. A decomposition
/// may be truncated to fewer pairs than the matrix dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvectors.rows()
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvector(&self, j: usize) -> Vec<f64> {
        self.eigenvectors.column(j)
    }

    /// `V Λ Vᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let v = &self.eigenvectors;
        let mut vl = v.clone();
        for i in 0..v.rows() {
            for j in 0..v.cols() {
                vl[(i, j)] *= self.eigenvalues[j];
            }
        }
        vl.matmul(&v.transpose())
    }
}

pub const DEFAULT_JACOBI_TOL: f64 = 1e-12;
const MAX_JACOBI_SWEEPS: usize = 100;

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let mut s = 0.0;
    for i in 0..a.rows {
        for j in 0..a.cols {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi eigendecomposition.
///
/// Sweeps over all `(p, q)` pairs until the off-diagonal Frobenius norm drops
/// below `tol`. Eigenvectors are sign-canonicalized with
/// [`canonicalize_sign`].
pub fn jacobi_eigen(a: &Matrix, tol: f64) -> Result<EigenDecomposition, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let (row, col, gap) = a.asymmetry();
    if gap > 1e-12 {
        return Err(LinalgError::NotSymmetric { row, col, gap });
    }

    let n = a.rows;
    let mut m = a.clone();
    // Start exactly symmetric.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
    let mut v = Matrix::identity(n);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&m);
        if off < tol {
            break;
        }
        if sweeps == MAX_JACOBI_SWEEPS {
            return Err(LinalgError::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut m, &mut v, p, q, c, s);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| m[(i, i)]).collect();
    let mut columns: Vec<Vec<f64>> = order.iter().map(|&i| v.column(i)).collect();
    for c in &mut columns {
        canonicalize_sign(c);
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: Matrix::from_columns(&columns),
    })
}

/// Applies the rotation `Jᵀ M J` in the (p, q) plane and accumulates `V J`.
fn rotate(m: &mut Matrix, v: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = m.rows;
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = c * mkp - s * mkq;
        m[(k, q)] = s * mkp + c * mkq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = c * mpk - s * mqk;
        m[(q, k)] = s * mpk + c * mqk;
    }
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Entries within this distance of the largest magnitude count as tied.
const SIGN_TIE_TOL: f64 = 1e-12;

/// Sign (±1) that makes the largest-magnitude entry of `v` positive; among
/// entries tied for largest magnitude the lowest index decides.
pub fn canonical_sign(v: &[f64]) -> f64 {
    let max = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    match v.iter().find(|x| x.abs() >= max - SIGN_TIE_TOL) {
        Some(&lead) if lead < 0.0 => -1.0,
        _ => 1.0,
    }
}

/// Multiplies `v` by [`canonical_sign`].
pub fn canonicalize_sign(v: &mut [f64]) {
    if canonical_sign(v) < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}
