//! First canonical correlation between two sets of two variables.
//!
//! Columns are standardized first, so the weights refer to z-scored columns.
//! The 2×2 eigenproblem is solved in closed form.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, LinalgError, Matrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CcaError {
    #[error("within-set covariance of {set} is singular (condition number {condition:e})")]
    DegenerateSet { set: String, condition: f64 },
    #[error("need at least {needed} observations, got {got}")]
    TooFewRows { needed: usize, got: usize },
    #[error("expected n×2 inputs with matching rows, got {x_rows}x{x_cols} and {y_rows}x{y_cols}")]
    Shape {
        x_rows: usize,
        x_cols: usize,
        y_rows: usize,
        y_cols: usize,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Condition number above which a within-set covariance counts as singular.
pub const MAX_CONDITION: f64 = 1e12;
pub const DEFAULT_STRONG_THRESHOLD: f64 = 0.79;
const MIN_ROWS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Regime {
    StrongPositive,
    StrongNegative,
    WeakModerate,
}

impl Regime {
    pub const ALL: [Regime; 3] = [
        Regime::StrongPositive,
        Regime::StrongNegative,
        Regime::WeakModerate,
    ];

    pub fn is_strong(self) -> bool {
        self != Regime::WeakModerate
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::StrongPositive => "StrongPositive",
            Regime::StrongNegative => "StrongNegative",
            Regime::WeakModerate => "WeakModerate",
        })
    }
}

pub fn classify_regime(ccc: f64, strong_threshold: f64) -> Regime {
    if ccc >= strong_threshold {
        Regime::StrongPositive
    } else if ccc <= -strong_threshold {
        Regime::StrongNegative
    } else {
        Regime::WeakModerate
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CcaResult {
    /// Signed first canonical correlation under the orientation convention.
    pub ccc: f64,
    pub weights_x: [f64; 2],
    pub weights_y: [f64; 2],
    pub regime: Regime,
}

impl CcaResult {
    pub fn validate(&self, strong_threshold: f64) -> Result<(), String> {
        if !self.ccc.is_finite() || self.ccc.abs() > 1.0 + 1e-12 {
            return Err(format!("ccc {} outside [-1, 1]", self.ccc));
        }
        for (name, w) in [("weights_x", self.weights_x), ("weights_y", self.weights_y)] {
            if (linalg::norm(&w) - 1.0).abs() > 1e-9 {
                return Err(format!("{name} {w:?} not unit length"));
            }
            if w[0] < 0.0 || (w[0] == 0.0 && w[1] < 0.0) {
                return Err(format!("{name} {w:?} violates orientation"));
            }
        }
        if self.regime != classify_regime(self.ccc, strong_threshold) {
            return Err(format!(
                "regime {} inconsistent with ccc {}",
                self.regime, self.ccc
            ));
        }
        Ok(())
    }
}

type M2 = [[f64; 2]; 2];

fn mul(a: &M2, b: &M2) -> M2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

fn apply(a: &M2, v: [f64; 2]) -> [f64; 2] {
    [
        a[0][0] * v[0] + a[0][1] * v[1],
        a[1][0] * v[0] + a[1][1] * v[1],
    ]
}

fn transpose(a: &M2) -> M2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

fn inverse(a: &M2) -> M2 {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [
        [a[1][1] / det, -a[0][1] / det],
        [-a[1][0] / det, a[0][0] / det],
    ]
}

fn quad(w: [f64; 2], a: &M2, v: [f64; 2]) -> f64 {
    let av = apply(a, v);
    w[0] * av[0] + w[1] * av[1]
}

/// Cross-product `(1/n) AᵀB` of two standardized n×2 matrices.
fn cross(a: &Matrix, b: &Matrix) -> M2 {
    let n = a.rows() as f64;
    let mut out = [[0.0; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..a.rows()).map(|r| a[(r, i)] * b[(r, j)]).sum::<f64>() / n;
        }
    }
    out
}

/// Condition number of a 2×2 correlation matrix `[[1, r], [r, 1]]`.
fn condition(c: &M2) -> f64 {
    let r = c[0][1].abs().min(1.0);
    if r >= 1.0 {
        f64::INFINITY
    } else {
        (1.0 + r) / (1.0 - r)
    }
}

fn orient(mut w: [f64; 2]) -> [f64; 2] {
    if w[0] < 0.0 || (w[0] == 0.0 && w[1] < 0.0) {
        w = [-w[0], -w[1]];
    }
    // normalize -0.0
    [w[0] + 0.0, w[1] + 0.0]
}

fn unit(w: [f64; 2]) -> Option<[f64; 2]> {
    let len = linalg::norm(&w);
    (len > 1e-300).then(|| [w[0] / len, w[1] / len])
}

/// Largest eigenvalue of a 2×2 matrix with real spectrum, and an eigenvector.
fn leading_eigenpair(m: &M2) -> (f64, [f64; 2]) {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr / 4.0 - det).max(0.0);
    let lambda = tr / 2.0 + disc.sqrt();
    let a = [m[0][1], lambda - m[0][0]];
    let b = [lambda - m[1][1], m[1][0]];
    let pick = if linalg::norm(&a) >= linalg::norm(&b) {
        a
    } else {
        b
    };
    let scale = m
        .iter()
        .flatten()
        .fold(0.0_f64, |s, x| s.max(x.abs()))
        .max(1e-300);
    let v = if linalg::norm(&pick) <= 1e-12 * scale {
        [1.0, 0.0]
    } else {
        pick
    };
    (lambda, v)
}

/// First canonical correlation between the columns of `x` and of `y`.
pub fn cca_first(x: &Matrix, y: &Matrix, strong_threshold: f64) -> Result<CcaResult, CcaError> {
    cca_first_labeled(x, y, ["x1", "x2"], ["y1", "y2"], strong_threshold)
}

pub(crate) fn cca_first_labeled(
    x: &Matrix,
    y: &Matrix,
    x_labels: [&str; 2],
    y_labels: [&str; 2],
    strong_threshold: f64,
) -> Result<CcaResult, CcaError> {
    if x.cols() != 2 || y.cols() != 2 || x.rows() != y.rows() {
        return Err(CcaError::Shape {
            x_rows: x.rows(),
            x_cols: x.cols(),
            y_rows: y.rows(),
            y_cols: y.cols(),
        });
    }
    if x.rows() < MIN_ROWS {
        return Err(CcaError::TooFewRows {
            needed: MIN_ROWS,
            got: x.rows(),
        });
    }
    let zx = linalg::standardize_labeled(x, &x_labels)?;
    let zy = linalg::standardize_labeled(y, &y_labels)?;
    let rxx = cross(&zx, &zx);
    let ryy = cross(&zy, &zy);
    let rxy = cross(&zx, &zy);
    for (c, labels) in [(&rxx, x_labels), (&ryy, y_labels)] {
        let cond = condition(c);
        if cond >= MAX_CONDITION {
            return Err(CcaError::DegenerateSet {
                set: format!("({}, {})", labels[0], labels[1]),
                condition: cond,
            });
        }
    }
    let ryx = transpose(&rxy);
    let rxx_inv = inverse(&rxx);
    let ryy_inv = inverse(&ryy);
    let product = mul(&mul(&rxx_inv, &rxy), &mul(&ryy_inv, &ryx));

    let (_, vx) = leading_eigenpair(&product);
    let weights_x = orient(unit(vx).unwrap_or([1.0, 0.0]));
    let weights_y = orient(unit(apply(&mul(&ryy_inv, &ryx), weights_x)).unwrap_or([1.0, 0.0]));

    let cov = quad(weights_x, &rxy, weights_y);
    let var_x = quad(weights_x, &rxx, weights_x);
    let var_y = quad(weights_y, &ryy, weights_y);
    let ccc = (cov / (var_x * var_y).sqrt()).clamp(-1.0, 1.0);
    Ok(CcaResult {
        ccc,
        weights_x,
        weights_y,
        regime: classify_regime(ccc, strong_threshold),
    })
}

/// Largest eigenvalue of `Rxx⁻¹ Rxy Ryy⁻¹ Ryx`, the squared first canonical
/// correlation.
pub fn squared_canonical_correlation(x: &Matrix, y: &Matrix) -> Result<f64, CcaError> {
    let zx = linalg::standardize_columns(x)?;
    let zy = linalg::standardize_columns(y)?;
    let rxy = cross(&zx, &zy);
    let product = mul(
        &mul(&inverse(&cross(&zx, &zx)), &rxy),
        &mul(&inverse(&cross(&zy, &zy)), &transpose(&rxy)),
    );
    Ok(leading_eigenpair(&product).0)
}
