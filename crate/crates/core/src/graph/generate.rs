use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

/// Synthetic network model with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum GeneratorModel {
    /// Erdős–Rényi G(n, p).
    Random { n: usize, p: f64 },
    /// Barabási–Albert preferential attachment, `m` edges per new node.
    ScaleFree { n: usize, m: usize },
    /// Watts–Strogatz ring lattice of even degree `k`, rewired with probability `beta`.
    SmallWorld { n: usize, k: usize, beta: f64 },
}

/// A model plus the seed for its ChaCha8 stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub model: GeneratorModel,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(model: GeneratorModel, seed: u64) -> Self {
        GeneratorSpec { model, seed }
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let bad = |msg: String| Err(GraphError::Config(msg));
        match self.model {
            GeneratorModel::Random { n, p } => {
                if n == 0 {
                    return bad("random: n must be at least 1".into());
                }
                if !(0.0..=1.0).contains(&p) {
                    return bad(format!("random: p = {p} outside [0, 1]"));
                }
            }
            GeneratorModel::ScaleFree { n, m } => {
                if m == 0 {
                    return bad("scale-free: m must be at least 1".into());
                }
                if n <= m {
                    return bad(format!("scale-free: n = {n} must exceed m = {m}"));
                }
            }
            GeneratorModel::SmallWorld { n, k, beta } => {
                if k % 2 != 0 {
                    return bad(format!("small-world: k = {k} must be even"));
                }
                if k >= n {
                    return bad(format!("small-world: k = {k} must be below n = {n}"));
                }
                if !(0.0..=1.0).contains(&beta) {
                    return bad(format!("small-world: beta = {beta} outside [0, 1]"));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for GeneratorSpec {
    /// `<model>:<params>:<seed>`, e.g. `small-world:n=100,k=4,beta=0.1:7`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.model {
            GeneratorModel::Random { n, p } => write!(f, "random:n={n},p={p}:{}", self.seed),
            GeneratorModel::ScaleFree { n, m } => write!(f, "scale-free:n={n},m={m}:{}", self.seed),
            GeneratorModel::SmallWorld { n, k, beta } => {
                write!(f, "small-world:n={n},k={k},beta={beta}:{}", self.seed)
            }
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |msg: &str| GraphError::Config(format!("{msg} in generator spec {s:?}"));
        let mut parts = s.trim().split(':');
        let (Some(model), Some(params), Some(seed), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(err("expected <model>:<params>:<seed>"));
        };
        let seed: u64 = seed.trim().parse().map_err(|_| err("bad seed"))?;

        let mut kv = std::collections::BTreeMap::new();
        for item in params.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| err("parameter without '='"))?;
            if kv.insert(k.trim(), v.trim()).is_some() {
                return Err(err("repeated parameter"));
            }
        }
        let mut take = |key: &str| kv.remove(key).ok_or_else(|| err(&format!("missing {key}")));
        let int = |v: &str| v.parse::<usize>().map_err(|_| err("bad integer"));
        let real = |v: &str| {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| err("bad number"))
        };

        let model = match model.trim() {
            "random" => GeneratorModel::Random {
                n: int(take("n")?)?,
                p: real(take("p")?)?,
            },
            "scale-free" => GeneratorModel::ScaleFree {
                n: int(take("n")?)?,
                m: int(take("m")?)?,
            },
            "small-world" => GeneratorModel::SmallWorld {
                n: int(take("n")?)?,
                k: int(take("k")?)?,
                beta: real(take("beta")?)?,
            },
            _ => return Err(err("unknown model")),
        };
        if let Some(extra) = kv.keys().next() {
            return Err(err(&format!("unexpected parameter {extra}")));
        }
        let spec = GeneratorSpec { model, seed };
        spec.validate()?;
        Ok(spec)
    }
}

/// Generates a graph. Labels are zero-padded decimal ids so that their
/// lexicographic order matches generation order.
pub fn generate(spec: &GeneratorSpec) -> Result<Graph, GraphError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (n, edges) = match spec.model {
        GeneratorModel::Random { n, p } => (n, erdos_renyi(n, p, &mut rng)),
        GeneratorModel::ScaleFree { n, m } => (n, preferential_attachment(n, m, &mut rng)),
        GeneratorModel::SmallWorld { n, k, beta } => (n, ring_rewiring(n, k, beta, &mut rng)),
    };
    let width = (n.saturating_sub(1)).to_string().len();
    let labels = (0..n).map(|i| format!("{i:0width$}")).collect();
    Ok(Graph::from_index_edges(labels, edges))
}

fn erdos_renyi(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    edges
}

fn preferential_attachment(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    // Each node appears once per incident edge end.
    let mut pool: Vec<usize> = Vec::new();
    for i in 0..=m {
        for j in (i + 1)..=m {
            edges.push((i, j));
            pool.push(i);
            pool.push(j);
        }
    }
    for v in (m + 1)..n {
        let mut targets = BTreeSet::new();
        while targets.len() < m {
            targets.insert(pool[rng.random_range(0..pool.len())]);
        }
        for &t in &targets {
            edges.push((t, v));
            pool.push(t);
            pool.push(v);
        }
    }
    edges
}

fn ring_rewiring(n: usize, k: usize, beta: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for u in 0..n {
        for j in 1..=k / 2 {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if !adj[u].contains(&v) || !rng.random_bool(beta) {
                continue;
            }
            if adj[u].len() >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.random_range(0..n);
                if w != u && !adj[u].contains(&w) {
                    break w;
                }
            };
            adj[u].remove(&v);
            adj[v].remove(&u);
            adj[u].insert(w);
            adj[w].insert(u);
        }
    }
    adj.iter()
        .enumerate()
        .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
        .collect()
}
