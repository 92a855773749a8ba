//! Reference implementations used as oracles by the integration tests.
//! They favor obviousness over speed and share no code with the library.
#![allow(dead_code)]

use std::collections::VecDeque;

use centrafactor::graph::{is_connected, Graph};
use centrafactor::linalg::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A connected G(n, p) sample, retried until connected.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let labels: Vec<String> = (0..n).map(|i| format!("v{i:03}")).collect();
    loop {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::from_index_edges(labels.clone(), edges);
        if is_connected(&g) {
            return g;
        }
    }
}

pub fn bfs(g: &Graph, s: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; g.node_count()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(v) = q.pop_front() {
        for &w in g.neighbors(v) {
            if d[w] == usize::MAX {
                d[w] = d[v] + 1;
                q.push_back(w);
            }
        }
    }
    d
}

/// Betweenness by listing every shortest path explicitly. Unordered pairs,
/// no normalization.
pub fn brute_force_betweenness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let dist: Vec<Vec<usize>> = (0..n).map(|s| bfs(g, s)).collect();
    let mut out = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            if dist[s][t] == usize::MAX {
                continue;
            }
            let mut paths = Vec::new();
            let mut stack = vec![vec![s]];
            while let Some(path) = stack.pop() {
                let v = *path.last().unwrap();
                if v == t {
                    paths.push(path);
                    continue;
                }
                for &w in g.neighbors(v) {
                    if dist[s][w] == dist[s][v] + 1 && dist[w][t] + 1 == dist[v][t] {
                        let mut next = path.clone();
                        next.push(w);
                        stack.push(next);
                    }
                }
            }
            let total = paths.len() as f64;
            for path in &paths {
                for &v in &path[1..path.len() - 1] {
                    out[v] += 1.0 / total;
                }
            }
        }
    }
    out
}

/// Kaiser's raw varimax criterion: sum over columns of the variance of
/// squared loadings.
pub fn varimax_value(rows: &[Vec<f64>]) -> f64 {
    let p = rows.len() as f64;
    let m = rows[0].len();
    (0..m)
        .map(|j| {
            let sq: Vec<f64> = rows.iter().map(|r| r[j] * r[j]).collect();
            let mean = sq.iter().sum::<f64>() / p;
            sq.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / p
        })
        .sum()
}

/// Best varimax value over planar rotations of a p×2 loading matrix,
/// scanning [0°, 90°) in 0.01° steps. The criterion has period 90° and is
/// invariant to column sign flips, so this covers all orthogonal 2×2
/// transforms.
pub fn varimax_grid_2d(rows: &[Vec<f64>]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for step in 0..9000 {
        let t = (step as f64 * 0.01).to_radians();
        let (s, c) = t.sin_cos();
        let rotated: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| vec![c * r[0] + s * r[1], -s * r[0] + c * r[1]])
            .collect();
        best = best.max(varimax_value(&rotated));
    }
    best
}

pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

fn covariance(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - ma) * (y - mb))
        .sum::<f64>()
        / n
}

/// Max |corr(a·x, b·y)| over unit weight directions on a 0.1° × 0.1° grid
/// (directions modulo sign cover [0°, 180°)).
pub fn cca_grid(x: &Matrix, y: &Matrix) -> f64 {
    let (x0, x1, y0, y1) = (x.column(0), x.column(1), y.column(0), y.column(1));
    let sxx = [
        covariance(&x0, &x0),
        covariance(&x0, &x1),
        covariance(&x1, &x1),
    ];
    let syy = [
        covariance(&y0, &y0),
        covariance(&y0, &y1),
        covariance(&y1, &y1),
    ];
    let sxy = [
        [covariance(&x0, &y0), covariance(&x0, &y1)],
        [covariance(&x1, &y0), covariance(&x1, &y1)],
    ];
    let dirs: Vec<(f64, f64)> = (0..1800)
        .map(|k| (k as f64 * 0.1).to_radians().sin_cos())
        .map(|(s, c)| (c, s))
        .collect();
    let var = |s: &[f64; 3], (a, b): (f64, f64)| a * a * s[0] + 2.0 * a * b * s[1] + b * b * s[2];
    let vy: Vec<f64> = dirs.iter().map(|&d| var(&syy, d).sqrt()).collect();
    let mut best = 0.0_f64;
    for &(a0, a1) in &dirs {
        let vx = var(&sxx, (a0, a1)).sqrt();
        let r0 = a0 * sxy[0][0] + a1 * sxy[1][0];
        let r1 = a0 * sxy[0][1] + a1 * sxy[1][1];
        for (k, &(b0, b1)) in dirs.iter().enumerate() {
            best = best.max(((r0 * b0 + r1 * b1) / (vx * vy[k])).abs());
        }
    }
    best
}

/// n×2 standard normal sample.
pub fn normal_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = rng.sample(StandardNormal);
        }
    }
    m
}

/// A (x, y) pair of n×2 sets with a random amount of shared signal.
pub fn cca_instance(rng: &mut ChaCha8Rng, n: usize) -> (Matrix, Matrix) {
    let x = normal_matrix(rng, n, 2);
    let noise = normal_matrix(rng, n, 2);
    let mix: [[f64; 2]; 2] = [
        [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)],
        [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)],
    ];
    let level: f64 = rng.random_range(0.1..2.0);
    let mut y = Matrix::zeros(n, 2);
    for i in 0..n {
        for j in 0..2 {
            y[(i, j)] = mix[j][0] * x[(i, 0)] + mix[j][1] * x[(i, 1)] + level * noise[(i, j)];
        }
    }
    (x, y)
}

/// `m` multiplied on the right by a 2×2 matrix `t`.
pub fn transform(m: &Matrix, t: [[f64; 2]; 2]) -> Matrix {
    m.matmul(&Matrix::from_rows(&t))
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v: f64 = rng.random_range(-1.0..1.0);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}

pub fn random_loadings(rng: &mut ChaCha8Rng, p: usize, m: usize) -> Vec<Vec<f64>> {
    (0..p)
        .map(|_| (0..m).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect()
}

pub fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |a, x| a.max(x.abs()))
}
