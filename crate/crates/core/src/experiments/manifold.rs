//! Semi-supervised community recovery on noisy point clouds, comparing heat
//! diffusion on the k-NN hypergraph with heat diffusion on the k-NN graph.

use std::fmt;
use std::io::Write;

use rand::seq::index::sample;
use rayon::prelude::*;

use super::generators::{manifold_points, trial_rng, ManifoldKind};
use super::{auc, median, min_max_rescale};
use crate::diffusion::{diffuse, MinNormOptions};
use crate::error::{Error, Result};
use crate::hypergraph::{knn_graph, knn_hypergraph, Hypergraph};
use crate::potentials::{EdgeNorm, PotentialModel};

#[derive(Debug, Clone)]
pub struct ManifoldConfig {
    pub kind: ManifoldKind,
    pub per_community: usize,
    pub k: usize,
    /// Number of revealed labels.
    pub revealed: usize,
    pub trials: usize,
    /// Diffusion step counts at which both methods are scored.
    pub steps: Vec<usize>,
    pub norm: EdgeNorm,
    pub tol: f64,
    pub seed: u64,
}

impl ManifoldConfig {
    pub fn new(kind: ManifoldKind) -> Self {
        Self {
            kind,
            per_community: 300,
            k: 5,
            revealed: 30,
            trials: 20,
            steps: vec![30],
            norm: EdgeNorm::LInf,
            tol: 1e-8,
            seed: 0,
        }
    }

    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let steps: Vec<String> = self.steps.iter().map(|s| s.to_string()).collect();
        vec![
            ("experiment", "bench-manifold".into()),
            ("generator", self.kind.to_string()),
            ("per_community", self.per_community.to_string()),
            ("noise_std", self.kind.noise().to_string()),
            ("k", self.k.to_string()),
            ("revealed", self.revealed.to_string()),
            ("trials", self.trials.to_string()),
            ("steps", steps.join(",")),
            ("norm", norm_name(&self.norm).into()),
            ("tol", self.tol.to_string()),
            ("seed", self.seed.to_string()),
            ("rng", "ChaCha8, stream = trial index".into()),
        ]
    }

    fn validate(&self) -> Result<()> {
        let n = 2 * self.per_community;
        if self.k == 0 || self.k >= n {
            return Err(Error::InvalidParameter(format!("k = {} needs 1 <= k < {n}", self.k)));
        }
        if self.revealed == 0 || self.revealed > n {
            return Err(Error::InvalidParameter(format!("revealed = {} out of 1..={n}", self.revealed)));
        }
        if self.steps.is_empty() {
            return Err(Error::InvalidParameter("no step counts given".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter("tolerance must be positive".into()));
        }
        Ok(())
    }
}

pub(crate) fn norm_name(norm: &EdgeNorm) -> &'static str {
    match norm {
        EdgeNorm::LInf => "linf",
        EdgeNorm::L2 => "l2",
        EdgeNorm::Lovasz(_) => "lovasz",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Graph,
    Hypergraph,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Graph => "graph",
            Method::Hypergraph => "hypergraph",
        })
    }
}

/// Scores and thresholded labels derived from one diffused vector.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelRun {
    /// True labels in `{+1, -1}`.
    pub labels: Vec<i8>,
    pub revealed: Vec<usize>,
    /// `x_t` rescaled to `[0, 1]`.
    pub scores: Vec<f64>,
    /// AUC with community `+1` as the positive class.
    pub auc: f64,
    pub tau: f64,
    /// `1` where `x_t > tau`.
    pub predicted: Vec<f64>,
    /// Vertices whose predicted label differs from the true one.
    pub errors: usize,
}

impl LabelRun {
    pub fn evaluate(
        labels: &[i8],
        revealed: &[usize],
        x: &[f64],
        degrees: &[f64],
        potential: impl Fn(&[f64]) -> f64,
    ) -> Result<Self> {
        let scores = min_max_rescale(x);
        let positive: Vec<bool> = labels.iter().map(|&l| l > 0).collect();
        let auc = auc(&scores, &positive)?;
        let (tau, predicted) = select_threshold(x, degrees, potential);
        let errors = predicted
            .iter()
            .zip(labels)
            .filter(|(p, &l)| (**p > 0.5) != (l > 0))
            .count();
        Ok(Self {
            labels: labels.to_vec(),
            revealed: revealed.to_vec(),
            scores,
            auc,
            tau,
            predicted,
            errors,
        })
    }
}

/// Picks `tau` minimizing `potential(1[x > tau])` among thresholds whose
/// penalty `rho = <1[x > tau], 1>_D / n` lies within a factor 1.1 of the
/// penalty at `tau = 0`, skipping empty and full sets. Falls back to
/// `tau = 0` when no threshold qualifies.
pub fn select_threshold(x: &[f64], degrees: &[f64], potential: impl Fn(&[f64]) -> f64) -> (f64, Vec<f64>) {
    let n = x.len() as f64;
    let indicator = |tau: f64| -> Vec<f64> { x.iter().map(|&v| if v > tau { 1.0 } else { 0.0 }).collect() };
    let rho = |ell: &[f64]| ell.iter().zip(degrees).map(|(l, d)| l * d).sum::<f64>() / n;
    let base = indicator(0.0);
    let rho0 = rho(&base);

    let mut candidates: Vec<f64> = x.to_vec();
    candidates.push(0.0);
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let mut best: Option<(f64, f64, Vec<f64>)> = None;
    for tau in candidates {
        let ell = indicator(tau);
        let size = ell.iter().filter(|&&l| l > 0.0).count();
        if size == 0 || size == x.len() {
            continue;
        }
        let r = rho(&ell);
        if r > 1.1 * rho0 || r < rho0 / 1.1 {
            continue;
        }
        let u = potential(&ell);
        if best.as_ref().is_none_or(|(_, b, _)| u < *b) {
            best = Some((tau, u, ell));
        }
    }
    match best {
        Some((tau, _, ell)) => (tau, ell),
        None => (0.0, base),
    }
}

/// One `(trial, method, steps)` outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldRow {
    pub trial: usize,
    pub method: Method,
    pub steps: usize,
    pub auc: f64,
    pub errors: usize,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldReport {
    pub rows: Vec<ManifoldRow>,
}

impl ManifoldReport {
    pub fn median_auc(&self, method: Method, steps: usize) -> f64 {
        let mut v: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.method == method && r.steps == steps)
            .map(|r| r.auc)
            .collect();
        median(&mut v)
    }

    pub fn median_errors(&self, method: Method, steps: usize) -> f64 {
        let mut v: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.method == method && r.steps == steps)
            .map(|r| r.errors as f64)
            .collect();
        median(&mut v)
    }

    /// `trial,method,steps,auc,errors,tau`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "trial,method,steps,auc,errors,tau")?;
        for r in &self.rows {
            writeln!(out, "{},{},{},{},{},{}", r.trial, r.method, r.steps, r.auc, r.errors, r.tau)?;
        }
        Ok(())
    }

    /// `method,steps,median_auc,median_errors`.
    pub fn write_summary<W: Write>(&self, mut out: W, steps: &[usize]) -> Result<()> {
        writeln!(out, "method,steps,median_auc,median_errors")?;
        for method in [Method::Graph, Method::Hypergraph] {
            for &t in steps {
                writeln!(out, "{method},{t},{},{}", self.median_auc(method, t), self.median_errors(method, t))?;
            }
        }
        Ok(())
    }
}

/// `x <- x - D^-1 L x` on a graph, returning the iterates at `checkpoints`.
pub fn graph_diffusion(graph: &Hypergraph, x0: &[f64], checkpoints: &[usize]) -> Vec<Vec<f64>> {
    let last = checkpoints.iter().copied().max().unwrap_or(0);
    let mut x = x0.to_vec();
    let mut stored = vec![Vec::new(); checkpoints.len()];
    for t in 0..=last {
        for (slot, &c) in stored.iter_mut().zip(checkpoints) {
            if c == t {
                slot.clone_from(&x);
            }
        }
        if t < last {
            let step = graph.d_inv_apply(&graph.laplacian_apply(&x));
            for (a, b) in x.iter_mut().zip(step) {
                *a -= b;
            }
        }
    }
    stored
}

fn run_trial(config: &ManifoldConfig, trial: usize) -> Result<Vec<ManifoldRow>> {
    let mut rng = trial_rng(config.seed, trial as u64);
    let (points, labels) = manifold_points(config.kind, config.per_community, &mut rng)?;
    let n = points.len();
    let mut revealed = sample(&mut rng, n, config.revealed).into_vec();
    revealed.sort_unstable();
    let mut x0 = vec![0.0; n];
    for &i in &revealed {
        x0[i] = f64::from(labels[i]);
    }

    let hyper = knn_hypergraph(&points, config.k)?;
    let graph = knn_graph(&points, config.k)?;
    let model = PotentialModel::uniform(hyper, config.norm.clone())?;
    let last = config.steps.iter().copied().max().unwrap_or(0);
    let trace = diffuse(&model, &x0, last, &MinNormOptions::with_tol(config.tol)).map_err(Error::from)?;
    let graph_iterates = graph_diffusion(&graph, &x0, &config.steps);

    let mut rows = Vec::with_capacity(2 * config.steps.len());
    for (i, &t) in config.steps.iter().enumerate() {
        let x_graph = &graph_iterates[i];
        let run = LabelRun::evaluate(&labels, &revealed, x_graph, graph.degrees(), |ell| {
            ell.iter().zip(graph.laplacian_apply(ell)).map(|(a, b)| a * b).sum()
        })?;
        rows.push(ManifoldRow {
            trial,
            method: Method::Graph,
            steps: t,
            auc: run.auc,
            errors: run.errors,
            tau: run.tau,
        });
        let x_hyper = trace.iterate(t).expect("every step is stored for these sizes");
        let run = LabelRun::evaluate(&labels, &revealed, x_hyper, model.graph().degrees(), |ell| model.potential(ell))?;
        rows.push(ManifoldRow {
            trial,
            method: Method::Hypergraph,
            steps: t,
            auc: run.auc,
            errors: run.errors,
            tau: run.tau,
        });
    }
    Ok(rows)
}

/// Runs all trials in parallel; rows come back in trial order.
pub fn bench_manifold(config: &ManifoldConfig) -> Result<ManifoldReport> {
    config.validate()?;
    let per_trial: Vec<Vec<ManifoldRow>> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect::<Result<_>>()?;
    Ok(ManifoldReport {
        rows: per_trial.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_prefers_low_potential() {
        // path 0-1-2-3: cutting between 1 and 2 is cheapest among balanced sets
        let x = [0.9, 0.8, -0.1, -0.9];
        let pot = |ell: &[f64]| ell.windows(2).map(|w| (w[0] - w[1]).abs()).sum::<f64>();
        let (tau, ell) = select_threshold(&x, &[1.0, 2.0, 2.0, 1.0], pot);
        assert_eq!(ell, vec![1.0, 1.0, 0.0, 0.0]);
        assert!(tau >= -0.1 && tau < 0.8);
    }

    #[test]
    fn zero_steps_scores_are_revealed_labels() {
        let labels = [1i8, 1, -1, -1];
        let x = [1.0, 0.0, -1.0, 0.0];
        let run = LabelRun::evaluate(&labels, &[0, 2], &x, &[1.0; 4], |_| 0.0).unwrap();
        // positives score {1, 1/2}, negatives {0, 1/2}: 3.5 wins of 4
        assert_eq!(run.auc, 0.875);
    }

    #[test]
    fn graph_diffusion_checkpoints() {
        let g = Hypergraph::build(2, [([0, 1], 1.0)]).unwrap();
        let it = graph_diffusion(&g, &[1.0, 0.0], &[0, 1, 2]);
        assert_eq!(it[0], vec![1.0, 0.0]);
        assert_eq!(it[1], vec![0.0, 1.0]);
        assert_eq!(it[2], vec![1.0, 0.0]);
    }

    #[test]
    fn small_run_is_deterministic() {
        let mut config = ManifoldConfig::new(ManifoldKind::Rings);
        config.per_community = 40;
        config.revealed = 6;
        config.trials = 3;
        config.steps = vec![0, 5];
        let a = bench_manifold(&config).unwrap();
        let b = bench_manifold(&config).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 12);
        assert!(a.rows.iter().all(|r| (0.0..=1.0).contains(&r.auc)));
    }
}
