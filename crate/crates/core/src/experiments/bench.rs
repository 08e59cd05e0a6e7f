//! Averaged output versus last iterate on resolvent problems seeded at
//! random vertices, with a clique-expansion series baseline for timing.

use std::io::Write;
use std::time::Instant;

use rand::seq::index::sample;
use rayon::prelude::*;

use super::generators::trial_rng;
use super::median;
use crate::error::{Error, Result};
use crate::hypergraph::CliqueScaling;
use crate::potentials::PotentialModel;
use crate::resolvent::{graph_resolvent_series_until, solve_pair, OracleChoice, ProxChoice, ResolventProblem};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub lambda: f64,
    /// Sets the step size `eta = eps / (2 u_R)`.
    pub epsilon: f64,
    pub iterations: usize,
    pub seeds: usize,
    pub seed: u64,
    /// Early-stopping threshold for the series baseline.
    pub series_tol: f64,
    pub oracle: OracleChoice,
    pub prox: ProxChoice,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            lambda: 0.12,
            epsilon: 0.1,
            iterations: 100,
            seeds: 20,
            seed: 0,
            series_tol: 1e-6,
            oracle: OracleChoice::Any,
            prox: ProxChoice::Degree,
        }
    }
}

impl BenchConfig {
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        vec![
            ("experiment", "bench-resolvent".into()),
            ("lambda", self.lambda.to_string()),
            ("epsilon", self.epsilon.to_string()),
            ("iterations", self.iterations.to_string()),
            ("seeds", self.seeds.to_string()),
            ("seed", self.seed.to_string()),
            ("series_tol", self.series_tol.to_string()),
            ("oracle", self.oracle.to_string()),
            ("prox", self.prox.to_string()),
            ("rng", "ChaCha8, stream 0".into()),
        ]
    }
}

/// Deterministic per-seed outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub index: usize,
    pub vertex: usize,
    pub objective_averaged: f64,
    pub objective_last: f64,
    /// `objective_averaged / objective_last - 1`; positive when the averaged
    /// output reaches a lower objective.
    pub improvement: f64,
    pub iterations: usize,
    pub series_terms: usize,
    pub error: Option<String>,
}

/// Wall-clock measurements, kept apart from the deterministic rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchTiming {
    pub index: usize,
    pub hypergraph_seconds: f64,
    pub series_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub timings: Vec<BenchTiming>,
}

impl BenchReport {
    pub fn median_improvement(&self) -> f64 {
        let mut v: Vec<f64> = self.rows.iter().filter(|r| r.error.is_none()).map(|r| r.improvement).collect();
        median(&mut v)
    }

    /// `seed_index,vertex,objective_averaged,objective_last,improvement,iterations,series_terms,status`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "seed_index,vertex,objective_averaged,objective_last,improvement,iterations,series_terms,status"
        )?;
        for r in &self.rows {
            let status = r.error.as_deref().unwrap_or("ok").replace(',', ";");
            writeln!(
                out,
                "{},{},{},{},{},{},{},{status}",
                r.index, r.vertex, r.objective_averaged, r.objective_last, r.improvement, r.iterations, r.series_terms
            )?;
        }
        Ok(())
    }

    /// Per-seed and total seconds, with per-iteration averages.
    pub fn write_timing_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "seed_index,hypergraph_seconds,hypergraph_seconds_per_iter,series_seconds,series_seconds_per_iter"
        )?;
        let (mut h_total, mut s_total, mut h_iters, mut s_iters) = (0.0, 0.0, 0usize, 0usize);
        for (t, r) in self.timings.iter().zip(&self.rows) {
            let per = |secs: f64, n: usize| if n > 0 { secs / n as f64 } else { f64::NAN };
            writeln!(
                out,
                "{},{},{},{},{}",
                t.index,
                t.hypergraph_seconds,
                per(t.hypergraph_seconds, r.iterations),
                t.series_seconds,
                per(t.series_seconds, r.series_terms)
            )?;
            h_total += t.hypergraph_seconds;
            s_total += t.series_seconds;
            h_iters += r.iterations;
            s_iters += r.series_terms;
        }
        let per = |secs: f64, n: usize| if n > 0 { secs / n as f64 } else { f64::NAN };
        writeln!(out, "total,{h_total},{},{s_total},{}", per(h_total, h_iters), per(s_total, s_iters))?;
        Ok(())
    }
}

/// The seed vertices drawn for `config`.
pub fn bench_vertices(n: usize, config: &BenchConfig) -> Result<Vec<usize>> {
    if config.seeds > n {
        return Err(Error::InvalidParameter(format!(
            "{} seeds requested from {n} vertices",
            config.seeds
        )));
    }
    Ok(sample(&mut trial_rng(config.seed, 0), n, config.seeds).into_vec())
}

pub fn bench_resolvent(model: &PotentialModel, config: &BenchConfig) -> Result<BenchReport> {
    let graph = model.graph();
    let n = graph.num_vertices();
    let vertices = bench_vertices(n, config)?;
    let clique = graph.clique_expansion(CliqueScaling::Unit);
    let vol = graph.volume();

    let results: Vec<(BenchRow, BenchTiming)> = vertices
        .par_iter()
        .enumerate()
        .map(|(index, &v)| {
            // s = e_v - pi(e_v)
            let shift = graph.degree(v) / vol;
            let mut s = vec![-shift; n];
            s[v] += 1.0;
            let mut row = BenchRow {
                index,
                vertex: v,
                objective_averaged: f64::NAN,
                objective_last: f64::NAN,
                improvement: f64::NAN,
                iterations: 0,
                series_terms: 0,
                error: None,
            };
            let mut timing = BenchTiming {
                index,
                hypergraph_seconds: 0.0,
                series_seconds: 0.0,
            };
            let start = Instant::now();
            let solved = ResolventProblem::new(model, config.lambda, &s, config.epsilon).and_then(|mut p| {
                p.iterations = Some(config.iterations);
                p.oracle = config.oracle;
                p.prox = config.prox;
                solve_pair(&p)
            });
            timing.hypergraph_seconds = start.elapsed().as_secs_f64();
            match solved {
                Ok(pair) => {
                    row.objective_averaged = pair.averaged.objective;
                    row.objective_last = pair.last.objective;
                    row.improvement = pair.averaged.objective / pair.last.objective - 1.0;
                    row.iterations = pair.averaged.iterations;
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            let start = Instant::now();
            match graph_resolvent_series_until(&clique, config.lambda, &s, config.iterations, config.series_tol) {
                Ok(series) => row.series_terms = series.terms,
                Err(e) => row.error = Some(row.error.take().unwrap_or_else(|| e.to_string())),
            }
            timing.series_seconds = start.elapsed().as_secs_f64();
            (row, timing)
        })
        .collect();
    let (rows, timings) = results.into_iter().unzip();
    Ok(BenchReport { rows, timings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::random_hypergraph;
    use crate::potentials::EdgeNorm;

    #[test]
    fn report_shape_and_determinism() {
        let g = random_hypergraph(60, 80, 4, &mut trial_rng(11, 0)).unwrap();
        let m = PotentialModel::uniform(g, EdgeNorm::LInf).unwrap();
        let config = BenchConfig {
            iterations: 20,
            seeds: 5,
            ..BenchConfig::default()
        };
        let a = bench_resolvent(&m, &config).unwrap();
        let b = bench_resolvent(&m, &config).unwrap();
        assert_eq!(a.rows, b.rows);
        assert_eq!(a.rows.len(), 5);
        assert!(a.rows.iter().all(|r| r.error.is_none() && r.iterations == 20));
        let mut csv = Vec::new();
        a.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 6);
    }

    #[test]
    fn too_many_seeds() {
        let g = random_hypergraph(5, 3, 3, &mut trial_rng(1, 0)).unwrap();
        let m = PotentialModel::uniform(g, EdgeNorm::LInf).unwrap();
        assert!(bench_resolvent(&m, &BenchConfig::default()).is_err());
    }
}
