//! Seeded instance generators.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// The generator used everywhere: ChaCha8 seeded from a `u64`, with one
/// stream per trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Two noisy point communities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManifoldKind {
    TwoSpirals,
    Rings,
    Hyperspheres,
}

impl ManifoldKind {
    /// Standard deviation of the additive Gaussian noise.
    pub fn noise(self) -> f64 {
        match self {
            ManifoldKind::TwoSpirals => 1.0,
            ManifoldKind::Rings => 0.2,
            ManifoldKind::Hyperspheres => 0.1,
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            ManifoldKind::Hyperspheres => 5,
            _ => 2,
        }
    }
}

impl fmt::Display for ManifoldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ManifoldKind::TwoSpirals => "two-spirals",
            ManifoldKind::Rings => "rings",
            ManifoldKind::Hyperspheres => "hyperspheres",
        })
    }
}

impl FromStr for ManifoldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-spirals" => Ok(ManifoldKind::TwoSpirals),
            "rings" => Ok(ManifoldKind::Rings),
            "hyperspheres" => Ok(ManifoldKind::Hyperspheres),
            other => Err(Error::InvalidParameter(format!(
                "unknown generator '{other}' (expected two-spirals, rings or hyperspheres)"
            ))),
        }
    }
}

/// `per_community` points from community 1 followed by as many from
/// community 2; labels are `+1` and `-1`.
pub fn manifold_points(kind: ManifoldKind, per_community: usize, rng: &mut impl Rng) -> Result<(Vec<Vec<f64>>, Vec<i8>)> {
    if per_community == 0 {
        return Err(Error::InvalidParameter("need at least one point per community".into()));
    }
    let noise = Normal::new(0.0, kind.noise()).expect("positive noise");
    let mut points = Vec::with_capacity(2 * per_community);
    let mut labels = Vec::with_capacity(2 * per_community);
    for (community, label) in [(0, 1i8), (1, -1i8)] {
        for _ in 0..per_community {
            let mut p = match kind {
                ManifoldKind::TwoSpirals => {
                    let theta = rng.random_range(PI / 2.0..=3.0 * PI);
                    let sign = if community == 0 { 1.0 } else { -1.0 };
                    vec![sign * 3.0 * theta * theta.cos(), sign * 3.0 * theta * theta.sin()]
                }
                ManifoldKind::Rings => {
                    let theta = rng.random_range(0.0..=2.0 * PI);
                    if community == 0 {
                        vec![2.0 * theta.cos(), 2.0 * theta.sin()]
                    } else {
                        vec![3.0 * theta.cos() + 3.0, 3.0 * theta.sin()]
                    }
                }
                ManifoldKind::Hyperspheres => {
                    let direction = unit_vector(5, rng);
                    let radius = if community == 0 {
                        2.0
                    } else {
                        1.3 * rng.random::<f64>().powf(1.0 / 5.0)
                    };
                    direction.iter().map(|v| radius * v).collect()
                }
            };
            for v in &mut p {
                *v += noise.sample(rng);
            }
            points.push(p);
            labels.push(label);
        }
    }
    Ok((points, labels))
}

fn unit_vector(dim: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

/// `m` unit-weight hyperedges with sizes uniform in `2..=max_rank`, plus
/// bridging edges joining consecutive components so the result is connected.
pub fn random_hypergraph(n: usize, m: usize, max_rank: usize, rng: &mut impl Rng) -> Result<Hypergraph> {
    if n < 2 || max_rank < 2 {
        return Err(Error::InvalidParameter("need n >= 2 and max_rank >= 2".into()));
    }
    let max_rank = max_rank.min(n);
    let mut edges: Vec<(Vec<usize>, f64)> = (0..m)
        .map(|_| {
            let k = rng.random_range(2..=max_rank);
            (sample(rng, n, k).into_vec(), 1.0)
        })
        .collect();
    let first = Hypergraph::build(n, edges.clone())?;
    let labels = first.components();
    let mut representatives: Vec<usize> = Vec::new();
    for (v, &c) in labels.iter().enumerate() {
        if c == representatives.len() {
            representatives.push(v);
        }
    }
    for pair in representatives.windows(2) {
        edges.push((vec![pair[0], pair[1]], 1.0));
    }
    Hypergraph::build(n, edges)
}

/// Two clusters `0..size` and `size..2 size`, each with `per_cluster` random
/// hyperedges of rank `rank` inside it, joined by `crossing` hyperedges that
/// take half their vertices from each side.
pub fn planted_clusters(
    size: usize,
    per_cluster: usize,
    rank: usize,
    crossing: usize,
    rng: &mut impl Rng,
) -> Result<Hypergraph> {
    if rank < 2 || rank > size {
        return Err(Error::InvalidParameter(format!("rank must lie in 2..={size}")));
    }
    let mut edges = Vec::new();
    for offset in [0, size] {
        let mut cluster_edges: Vec<(Vec<usize>, f64)> = (0..per_cluster)
            .map(|_| (sample(rng, size, rank).into_iter().map(|v| v + offset).collect(), 1.0))
            .collect();
        // a ring keeps each cluster connected
        for v in 0..size {
            cluster_edges.push((vec![offset + v, offset + (v + 1) % size], 1.0));
        }
        edges.extend(cluster_edges);
    }
    for _ in 0..crossing {
        let left = rank / 2;
        let mut e: Vec<usize> = sample(rng, size, left.max(1)).into_vec();
        e.extend(sample(rng, size, (rank - left).max(1)).into_iter().map(|v| v + size));
        edges.push((e, 1.0));
    }
    Hypergraph::build(2 * size, edges)
}
