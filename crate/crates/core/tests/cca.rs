mod common;

use centrafactor::cca::{
    cca_first, classify_regime, squared_canonical_correlation, CcaError, Regime,
    DEFAULT_STRONG_THRESHOLD,
};
use centrafactor::linalg::{jacobi_eigen, Matrix};
use common::*;

const THR: f64 = DEFAULT_STRONG_THRESHOLD;

fn swap_sets(x: &Matrix, y: &Matrix) -> (Matrix, Matrix) {
    (y.clone(), x.clone())
}

#[test]
fn symmetric_in_the_two_sets() {
    let mut rng = rng(41);
    for _ in 0..30 {
        let (x, y) = cca_instance(&mut rng, 200);
        let a = cca_first(&x, &y, THR).unwrap();
        let (x2, y2) = swap_sets(&x, &y);
        let b = cca_first(&x2, &y2, THR).unwrap();
        assert!((a.ccc.abs() - b.ccc.abs()).abs() < 1e-10);
    }
}

#[test]
fn grid_oracle_on_small_samples() {
    let mut rng = rng(42);
    for _ in 0..5 {
        let (x, y) = cca_instance(&mut rng, 40);
        let r = cca_first(&x, &y, THR).unwrap();
        assert!((r.ccc.abs() - cca_grid(&x, &y)).abs() < 1e-4);
    }
}

/// Cholesky factor of a symmetric positive definite matrix.
fn cholesky(a: &Matrix) -> Matrix {
    let n = a.rows();
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[(i, k)] * l[(j, k)]).sum();
            if i == j {
                l[(i, i)] = (a[(i, i)] - s).sqrt();
            } else {
                l[(i, j)] = (a[(i, j)] - s) / l[(j, j)];
            }
        }
    }
    l
}

fn inverse_lower(l: &Matrix) -> Matrix {
    let n = l.rows();
    let mut inv = Matrix::zeros(n, n);
    for col in 0..n {
        for i in 0..n {
            let target = if i == col { 1.0 } else { 0.0 };
            let s: f64 = (0..i).map(|k| l[(i, k)] * inv[(k, col)]).sum();
            inv[(i, col)] = (target - s) / l[(i, i)];
        }
    }
    inv
}

#[test]
fn closed_form_matches_symmetrized_eigenproblem() {
    // ρ² is the top eigenvalue of Lx⁻¹ Rxy Ryy⁻¹ Ryx Lx⁻ᵀ, a symmetric matrix.
    let mut rng = rng(43);
    for _ in 0..20 {
        let (x, y) = cca_instance(&mut rng, 300);
        let z = centrafactor::linalg::correlation_matrix(&Matrix::from_columns(&[
            x.column(0),
            x.column(1),
            y.column(0),
            y.column(1),
        ]))
        .unwrap();
        let r = z.matrix();
        let block = |a: usize, b: usize| {
            Matrix::from_rows(&[
                [r[(a, b)], r[(a, b + 1)]],
                [r[(a + 1, b)], r[(a + 1, b + 1)]],
            ])
        };
        let (rxx, ryy, rxy) = (block(0, 0), block(2, 2), block(0, 2));
        let lx_inv = inverse_lower(&cholesky(&rxx));
        let ly_inv = inverse_lower(&cholesky(&ryy));
        let ryy_inv = ly_inv.transpose().matmul(&ly_inv);
        let mut s = lx_inv
            .matmul(&rxy)
            .matmul(&ryy_inv)
            .matmul(&rxy.transpose())
            .matmul(&lx_inv.transpose());
        let avg = 0.5 * (s[(0, 1)] + s[(1, 0)]);
        s[(0, 1)] = avg;
        s[(1, 0)] = avg;
        let top = jacobi_eigen(&s, 1e-14).unwrap().eigenvalues[0];
        let ours = squared_canonical_correlation(&x, &y).unwrap();
        assert!((top - ours).abs() < 1e-10, "{top} vs {ours}");
        let r = cca_first(&x, &y, THR).unwrap();
        assert!((r.ccc * r.ccc - ours).abs() < 1e-10);
    }
}

#[test]
fn weights_are_oriented_unit_vectors() {
    let mut rng = rng(44);
    for _ in 0..50 {
        let (x, y) = cca_instance(&mut rng, 100);
        cca_first(&x, &y, THR).unwrap().validate(THR).unwrap();
    }
}

#[test]
fn collinear_set_is_degenerate() {
    let mut rng = rng(45);
    let (x, y) = cca_instance(&mut rng, 50);
    let dup = Matrix::from_columns(&[
        x.column(0),
        x.column(0).iter().map(|v| 3.0 * v + 1.0).collect(),
    ]);
    assert!(matches!(
        cca_first(&dup, &y, THR),
        Err(CcaError::DegenerateSet { .. })
    ));
}

#[test]
fn shape_and_size_errors() {
    let a = Matrix::zeros(10, 3);
    let b = Matrix::zeros(10, 2);
    assert!(matches!(
        cca_first(&a, &b, THR),
        Err(CcaError::Shape { .. })
    ));
    let c = Matrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]);
    assert!(matches!(
        cca_first(&c, &c, THR),
        Err(CcaError::TooFewRows { .. })
    ));
}

#[test]
fn regime_boundaries() {
    assert_eq!(classify_regime(0.79, 0.79), Regime::StrongPositive);
    assert_eq!(classify_regime(-0.79, 0.79), Regime::StrongNegative);
    assert_eq!(classify_regime(0.7899, 0.79), Regime::WeakModerate);
    assert_eq!(classify_regime(-0.2, 0.79), Regime::WeakModerate);
}
