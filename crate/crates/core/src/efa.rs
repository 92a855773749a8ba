//! Exploratory factor analysis over a correlation matrix.
//!
//! Initial loadings are principal-component eigenvectors scaled by the square
//! root of their eigenvalues. They are rotated with Varimax, and the factor
//! count is the smallest `m ≤ max_factors` for which every feature keeps a
//! communality of at least the configured threshold. A rotation never changes
//! a communality, so the count depends only on the eigenstructure; the
//! rotation decides which factor dominates each feature.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::centrality::Metric;
use crate::linalg::{self, CorrelationMatrix, EigenDecomposition, LinalgError, Matrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EfaError {
    #[error("no model with at most {max_factors} factors reaches communality {threshold}; communalities at m = {tried}: {communalities:?}")]
    ModelNotFound {
        max_factors: usize,
        tried: usize,
        threshold: f64,
        communalities: Vec<f64>,
    },
    #[error("eigenvalue {value} at position {index} is negative")]
    NegativeEigenvalue { index: usize, value: f64 },
    #[error("invalid factor analysis input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Eigenvalues down to this are rounding noise of a PSD matrix and clamp to 0.
const NEGATIVE_EIGENVALUE_SLACK: f64 = 1e-9;

/// Feature-by-factor loading matrix (rows are features, columns factors).
#[derive(Debug, Clone, PartialEq)]
pub struct LoadingMatrix(pub Matrix);

impl LoadingMatrix {
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        LoadingMatrix(Matrix::from_rows(rows))
    }

    pub fn features(&self) -> usize {
        self.0.rows()
    }

    pub fn factors(&self) -> usize {
        self.0.cols()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }
}

/// Fraction of the total variance `dimension` covered by the first `m` eigenvalues.
pub fn cumulative_variance_fraction(eigenvalues: &[f64], dimension: usize, m: usize) -> f64 {
    eigenvalues.iter().take(m).sum::<f64>() / dimension as f64
}

/// Smallest `m` whose leading eigenvalues sum to at least `threshold · dimension`.
/// Falls back to the number of eigenvalues supplied when none reaches it.
pub fn retained_factor_count_by_variance(
    eigenvalues: &[f64],
    dimension: usize,
    threshold: f64,
) -> usize {
    let target = threshold * dimension as f64;
    let mut sum = 0.0;
    for (i, &l) in eigenvalues.iter().enumerate() {
        sum += l;
        if sum >= target - 1e-12 {
            return i + 1;
        }
    }
    eigenvalues.len()
}

/// `loadings(i, j) = v_j(i) · √λ_j` for the first `m` eigenpairs.
pub fn initial_loadings(e: &EigenDecomposition, m: usize) -> Result<LoadingMatrix, EfaError> {
    if m == 0 || m > e.len() {
        return Err(EfaError::InvalidInput(format!(
            "factor count {m} outside 1..={}",
            e.len()
        )));
    }
    let mut out = e.eigenvectors.leading_columns(m);
    for j in 0..m {
        let l = e.eigenvalues[j];
        if l < -NEGATIVE_EIGENVALUE_SLACK {
            return Err(EfaError::NegativeEigenvalue { index: j, value: l });
        }
        let scale = l.max(0.0).sqrt();
        for i in 0..out.rows() {
            out[(i, j)] *= scale;
        }
    }
    Ok(LoadingMatrix(out))
}

/// Row sums of squared loadings.
pub fn communalities(l: &LoadingMatrix) -> Vec<f64> {
    (0..l.features())
        .map(|i| l.0.row(i).iter().map(|x| x * x).sum())
        .collect()
}

/// Kaiser's varimax criterion `Σ_j [ (1/p) Σ_i ℓ⁴ − ((1/p) Σ_i ℓ²)² ]`.
pub fn varimax_criterion(l: &Matrix) -> f64 {
    let p = l.rows() as f64;
    (0..l.cols())
        .map(|j| {
            let (mut s2, mut s4) = (0.0, 0.0);
            for i in 0..l.rows() {
                let sq = l[(i, j)] * l[(i, j)];
                s2 += sq;
                s4 += sq * sq;
            }
            s4 / p - (s2 / p) * (s2 / p)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarimaxOptions {
    pub tol: f64,
    pub max_sweeps: usize,
    pub kaiser_normalize: bool,
}

impl Default for VarimaxOptions {
    fn default() -> Self {
        VarimaxOptions {
            tol: 1e-10,
            max_sweeps: 500,
            kaiser_normalize: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarimaxResult {
    pub loadings: LoadingMatrix,
    /// Orthogonal m×m matrix with `input · rotation = loadings`.
    pub rotation: Matrix,
    pub sweeps: usize,
    pub warning: Option<String>,
}

/// Optimal planar angle for columns `a` and `b`; rotating by it maximizes the
/// pair's share of the criterion.
fn pair_angle(l: &Matrix, a: usize, b: usize) -> f64 {
    let p = l.rows() as f64;
    let (mut sa, mut sb, mut sc, mut sd) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..l.rows() {
        let (x, y) = (l[(i, a)], l[(i, b)]);
        let u = x * x - y * y;
        let v = 2.0 * x * y;
        sa += u;
        sb += v;
        sc += u * u - v * v;
        sd += 2.0 * u * v;
    }
    let num = sd - 2.0 * sa * sb / p;
    let den = sc - (sa * sa - sb * sb) / p;
    num.atan2(den) / 4.0
}

/// Rotates columns `a`, `b` of `m` by `phi`: x' = x cos φ + y sin φ, y' = −x sin φ + y cos φ.
fn rotate_columns(m: &mut Matrix, a: usize, b: usize, phi: f64) {
    let (s, c) = phi.sin_cos();
    for i in 0..m.rows() {
        let (x, y) = (m[(i, a)], m[(i, b)]);
        m[(i, a)] = c * x + s * y;
        m[(i, b)] = -s * x + c * y;
    }
}

/// Varimax rotation by cyclic pairwise planar rotations.
///
/// Every sweep visits each column pair once and applies its closed-form
/// optimal angle; sweeping stops when the criterion gains less than `tol`.
/// Output columns are ordered by descending sum of squares and each is
/// flipped so its largest-magnitude entry is positive.
pub fn varimax(l: &LoadingMatrix, opts: &VarimaxOptions) -> VarimaxResult {
    let (p, m) = (l.features(), l.factors());
    if m < 2 {
        return VarimaxResult {
            loadings: l.clone(),
            rotation: Matrix::identity(m),
            sweeps: 0,
            warning: None,
        };
    }

    let row_norms: Vec<f64> = communalities(l).iter().map(|h| h.sqrt()).collect();
    let mut work = l.0.clone();
    if opts.kaiser_normalize {
        for (i, &h) in row_norms.iter().enumerate() {
            if h > 0.0 {
                for j in 0..m {
                    work[(i, j)] /= h;
                }
            }
        }
    }

    let mut rotation = Matrix::identity(m);
    let mut criterion = varimax_criterion(&work);
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < opts.max_sweeps {
        sweeps += 1;
        for a in 0..m {
            for b in (a + 1)..m {
                let phi = pair_angle(&work, a, b);
                if phi.abs() > 1e-15 {
                    rotate_columns(&mut work, a, b, phi);
                    rotate_columns(&mut rotation, a, b, phi);
                }
            }
        }
        let next = varimax_criterion(&work);
        let gain = next - criterion;
        criterion = next;
        if gain < opts.tol {
            converged = true;
            break;
        }
    }

    if opts.kaiser_normalize {
        for (i, &h) in row_norms.iter().enumerate() {
            if h > 0.0 {
                for j in 0..m {
                    work[(i, j)] *= h;
                }
            }
        }
    }

    // Order and orient the factors.
    let ss: Vec<f64> = (0..m)
        .map(|j| work.column(j).iter().map(|x| x * x).sum())
        .collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| ss[b].total_cmp(&ss[a]).then(a.cmp(&b)));
    let mut cols = Vec::with_capacity(m);
    let mut rot_cols = Vec::with_capacity(m);
    for &j in &order {
        let mut c = work.column(j);
        let mut r = rotation.column(j);
        let sign = linalg::canonical_sign(&c);
        c.iter_mut().for_each(|x| *x *= sign);
        r.iter_mut().for_each(|x| *x *= sign);
        cols.push(c);
        rot_cols.push(r);
    }

    let warning = (!converged).then(|| {
        format!(
            "varimax stopped after {} sweeps without converging (p = {p})",
            opts.max_sweeps
        )
    });
    VarimaxResult {
        loadings: LoadingMatrix(Matrix::from_columns(&cols)),
        rotation: Matrix::from_columns(&rot_cols),
        sweeps,
        warning,
    }
}

pub const DEFAULT_TIE_TOL: f64 = 1e-6;

/// For each feature, the factor(s) with the largest absolute loading. Factors
/// within `tie_tol` of the maximum are all included. Indices are 0-based.
pub fn dominant_factor_map(l: &LoadingMatrix, tie_tol: f64) -> Vec<BTreeSet<usize>> {
    (0..l.features())
        .map(|i| {
            let row = l.0.row(i);
            let max = row.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
            row.iter()
                .enumerate()
                .filter(|(_, x)| x.abs() >= max - tie_tol)
                .map(|(j, _)| j)
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub communality_threshold: f64,
    pub variance_threshold: f64,
    pub max_factors: usize,
    pub tie_tol: f64,
    pub varimax: VarimaxOptions,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            communality_threshold: 0.98,
            variance_threshold: 0.99,
            max_factors: 3,
            tie_tol: DEFAULT_TIE_TOL,
            varimax: VarimaxOptions::default(),
        }
    }
}

/// An accepted factor solution for the four centrality metrics.
///
/// Factor indices in `dominant` are 1-based ("Factor-1", "Factor-2", ...).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorModel {
    pub m: usize,
    pub variance_retention_m: usize,
    pub loadings: Vec<Vec<f64>>,
    pub communalities: Vec<f64>,
    pub dominant: BTreeMap<Metric, Vec<usize>>,
    pub rotation: Vec<Vec<f64>>,
    pub kaiser_normalize: bool,
    pub warnings: Vec<String>,
}

impl FactorModel {
    pub fn min_communality(&self) -> f64 {
        self.communalities
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn loading_matrix(&self) -> LoadingMatrix {
        LoadingMatrix::from_rows(&self.loadings)
    }

    /// Whether two metrics share at least one dominant factor.
    pub fn share_factor(&self, a: Metric, b: Metric) -> bool {
        match (self.dominant.get(&a), self.dominant.get(&b)) {
            (Some(x), Some(y)) => x.iter().any(|f| y.contains(f)),
            _ => false,
        }
    }

    /// Checks the model's internal consistency against `threshold`.
    pub fn validate(&self, threshold: f64) -> Result<(), String> {
        if !(1..=3).contains(&self.m) {
            return Err(format!("factor count {} outside 1..=3", self.m));
        }
        if self.loadings.len() != Metric::ALL.len() || self.communalities.len() != Metric::ALL.len()
        {
            return Err("expected one loading row and communality per metric".into());
        }
        for (row, &h) in self.loadings.iter().zip(&self.communalities) {
            if row.len() != self.m {
                return Err(format!(
                    "loading row has {} entries, expected {}",
                    row.len(),
                    self.m
                ));
            }
            let ss: f64 = row.iter().map(|x| x * x).sum();
            if (ss - h).abs() > 1e-12 {
                return Err(format!(
                    "communality {h} differs from row sum of squares {ss}"
                ));
            }
            if h > 1.0 + 1e-9 {
                return Err(format!("communality {h} exceeds 1"));
            }
        }
        for metric in Metric::ALL {
            let set = self
                .dominant
                .get(&metric)
                .ok_or(format!("{metric} has no dominant factor"))?;
            if set.is_empty() || set.iter().any(|&f| f == 0 || f > self.m) {
                return Err(format!("{metric} maps to invalid factors {set:?}"));
            }
        }
        if self.min_communality() < threshold {
            return Err(format!(
                "min communality {} below {threshold}",
                self.min_communality()
            ));
        }
        Ok(())
    }
}

/// Eigendecomposes `c` and fits the factor model; see [`fit_from_eigen`].
pub fn fit_factor_model(c: &CorrelationMatrix, opts: &FitOptions) -> Result<FactorModel, EfaError> {
    let e = linalg::jacobi_eigen(c.matrix(), linalg::DEFAULT_JACOBI_TOL)?;
    fit_from_eigen(&e, opts)
}

/// Tries `m = 1, 2, …, max_factors` and accepts the first whose rotated
/// loadings keep every communality at or above the threshold.
///
/// `e` may hold fewer eigenpairs than its dimension; `m` is then also bounded
/// by the number of pairs available.
pub fn fit_from_eigen(e: &EigenDecomposition, opts: &FitOptions) -> Result<FactorModel, EfaError> {
    if e.dim() != Metric::ALL.len() {
        return Err(EfaError::InvalidInput(format!(
            "expected {} features, got {}",
            Metric::ALL.len(),
            e.dim()
        )));
    }
    if opts.max_factors == 0 {
        return Err(EfaError::InvalidInput(
            "max_factors must be at least 1".into(),
        ));
    }
    let variance_retention_m =
        retained_factor_count_by_variance(&e.eigenvalues, e.dim(), opts.variance_threshold);

    let upper = opts.max_factors.min(e.len());
    let mut last = Vec::new();
    for m in 1..=upper {
        let initial = initial_loadings(e, m)?;
        let rotated = varimax(&initial, &opts.varimax);
        let h = communalities(&rotated.loadings);
        if h.iter().all(|&x| x >= opts.communality_threshold) {
            let dominant = dominant_factor_map(&rotated.loadings, opts.tie_tol)
                .into_iter()
                .zip(Metric::ALL)
                .map(|(set, metric)| (metric, set.into_iter().map(|j| j + 1).collect()))
                .collect();
            return Ok(FactorModel {
                m,
                variance_retention_m,
                loadings: rotated.loadings.0.to_rows(),
                communalities: h,
                dominant,
                rotation: rotated.rotation.to_rows(),
                kaiser_normalize: opts.varimax.kaiser_normalize,
                warnings: rotated.warning.into_iter().collect(),
            });
        }
        last = h;
    }
    Err(EfaError::ModelNotFound {
        max_factors: opts.max_factors,
        tried: upper,
        threshold: opts.communality_threshold,
        communalities: last,
    })
}
