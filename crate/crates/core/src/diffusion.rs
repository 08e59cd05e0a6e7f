//! Discrete-time heat diffusion `x_{t+1} = x_t - D^-1 L^D(x_t)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::hypergraph::VertexVector;
use crate::laplacian::{nearest_subgradient, FaceState, MinNormResult};
use crate::potentials::PotentialModel;

pub use crate::laplacian::MinNormOptions;

/// Iterates are kept in full while `n * (T + 1)` stays below this.
pub const FULL_TRACE_LIMIT: usize = 1_000_000;

/// One heat diffusion step with the default oracle settings and the given
/// duality-gap tolerance.
pub fn heat_step(model: &PotentialModel, x: &[f64], tol: f64) -> Result<VertexVector> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let (next, _) = heat_step_with(model, x, &MinNormOptions::with_tol(tol), None)?;
    Ok(VertexVector::from_vec_unchecked(next))
}

/// One heat diffusion step, also returning the minimum-norm subgradient that
/// drove it. `warm` seeds the Frank-Wolfe solve with a previous face state.
pub fn heat_step_with(
    model: &PotentialModel,
    x: &[f64],
    options: &MinNormOptions,
    warm: Option<&FaceState>,
) -> Result<(Vec<f64>, MinNormResult)> {
    let result = nearest_subgradient(model, x, None, options, warm)?;
    let step = model.graph().d_inv_apply(result.z());
    let next = x.iter().zip(&step).map(|(a, b)| a - b).collect();
    Ok((next, result))
}

/// Diagnostics for the state `x_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub t: usize,
    /// `U(x_t)`.
    pub potential: f64,
    /// `||x_t - pi(x_0)||_D^2`.
    pub variance: f64,
    /// Rayleigh quotient of `x_t`; NaN once `x_t` is constant.
    pub rayleigh: f64,
    /// Duality gap of the oracle call that produced `x_{t+1}`; NaN on the
    /// final state.
    pub dual_gap: f64,
    /// `<x_t, 1>_D`.
    pub mass: f64,
}

/// Iterates and per-step diagnostics of a heat diffusion run.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionTrace {
    /// Stored `(t, x_t)` pairs: every step for small runs, otherwise
    /// checkpoints plus the final state.
    pub iterates: Vec<(usize, VertexVector)>,
    pub records: Vec<StepRecord>,
    /// The conserved D-mean `pi(x_0)` (as a scalar multiple of the ones vector).
    pub pi0: f64,
}

impl DiffusionTrace {
    pub fn last(&self) -> &VertexVector {
        &self.iterates.last().expect("trace holds x_0").1
    }

    pub fn steps(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    pub fn iterate(&self, t: usize) -> Option<&VertexVector> {
        self.iterates.iter().find(|(s, _)| *s == t).map(|(_, x)| x)
    }
}

/// A diffusion that stopped early, with everything computed so far.
#[derive(Debug, Clone)]
pub struct DiffusionFailure {
    pub error: Error,
    pub trace: DiffusionTrace,
}

impl fmt::Display for DiffusionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "diffusion stopped after {} steps: {}", self.trace.steps(), self.error)
    }
}

impl std::error::Error for DiffusionFailure {}

impl From<DiffusionFailure> for Error {
    fn from(f: DiffusionFailure) -> Self {
        f.error
    }
}

/// Runs `steps` heat diffusion steps from `x0`.
pub fn diffuse(
    model: &PotentialModel,
    x0: &[f64],
    steps: usize,
    options: &MinNormOptions,
) -> std::result::Result<DiffusionTrace, DiffusionFailure> {
    let graph = model.graph();
    let n = graph.num_vertices();
    let pi0 = graph.d_mean(x0);
    let keep_all = n.saturating_mul(steps + 1) <= FULL_TRACE_LIMIT;
    let every = if keep_all { 1 } else { steps.div_ceil(100).max(1) };

    let mut trace = DiffusionTrace {
        iterates: Vec::new(),
        records: Vec::with_capacity(steps + 1),
        pi0,
    };
    if let Err(error) = graph.check_vector(x0) {
        return Err(DiffusionFailure { error, trace });
    }

    let record = |t: usize, x: &[f64]| {
        let centered: Vec<f64> = x.iter().map(|v| v - pi0).collect();
        StepRecord {
            t,
            potential: model.potential(x),
            variance: graph.d_norm_sq(&centered),
            rayleigh: model.rayleigh(x).unwrap_or(f64::NAN),
            dual_gap: f64::NAN,
            mass: graph.d_inner(x, &vec![1.0; n]),
        }
    };

    let mut x = x0.to_vec();
    let mut warm: Option<FaceState> = None;
    for t in 0..=steps {
        let mut rec = record(t, &x);
        if t == steps || t % every == 0 {
            trace.iterates.push((t, VertexVector::from_vec_unchecked(x.clone())));
        }
        if t == steps {
            trace.records.push(rec);
            break;
        }
        match heat_step_with(model, &x, options, warm.as_ref()) {
            Ok((next, result)) => {
                rec.dual_gap = result.dual_gap;
                trace.records.push(rec);
                warm = Some(result.state);
                x = next;
            }
            Err(error) => {
                trace.records.push(rec);
                if trace.iterates.last().map(|(s, _)| *s) != Some(t) {
                    trace.iterates.push((t, VertexVector::from_vec_unchecked(x.clone())));
                }
                return Err(DiffusionFailure { error, trace });
            }
        }
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;
    use crate::potentials::EdgeNorm;

    fn single_hyperedge() -> PotentialModel {
        let g = Hypergraph::build(4, [(vec![0, 1, 2, 3], 1.0)]).unwrap();
        PotentialModel::uniform(g, EdgeNorm::LInf).unwrap()
    }

    #[test]
    fn single_hyperedge_step() {
        let x = heat_step(&single_hyperedge(), &[-1.0, -1.0, 1.0, 2.0], 1e-10).unwrap();
        let expect = [-5.0 / 8.0, -5.0 / 8.0, 1.0, 5.0 / 4.0];
        for (a, b) in x.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12, "{x:?}");
        }
    }

    #[test]
    fn single_hyperedge_step_scales_with_weight() {
        // D = w I and L^D = w (...), so the step is weight independent
        let g = Hypergraph::build(4, [(vec![0, 1, 2, 3], 7.0)]).unwrap();
        let m = PotentialModel::uniform(g, EdgeNorm::LInf).unwrap();
        let x = heat_step(&m, &[-1.0, -1.0, 1.0, 2.0], 1e-10).unwrap();
        assert!((x[0] + 0.625).abs() < 1e-12 && (x[3] - 1.25).abs() < 1e-12);
    }

    #[test]
    fn constant_is_fixed_point() {
        let x = heat_step(&single_hyperedge(), &[3.0; 4], 1e-8).unwrap();
        assert_eq!(x.as_slice(), &[3.0; 4]);
    }

    #[test]
    fn two_vertex_averages() {
        let g = Hypergraph::build(2, [(vec![0, 1], 1.0)]).unwrap();
        let m = PotentialModel::uniform(g, EdgeNorm::L2).unwrap();
        let x = heat_step(&m, &[0.0, 1.0], 1e-8).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-15 && (x[1] - 0.5).abs() < 1e-15);

        let trace = diffuse(&m, &[3.0, -1.0], 1, &MinNormOptions::default()).unwrap();
        assert_eq!(trace.last().as_slice(), &[1.0, 1.0]);
        assert_eq!(trace.records[1].variance, 0.0);
        assert_eq!(trace.pi0, 1.0);
    }

    #[test]
    fn zero_steps() {
        let trace = diffuse(&single_hyperedge(), &[1.0, 0.0, 0.0, 0.0], 0, &MinNormOptions::default()).unwrap();
        assert_eq!(trace.iterates.len(), 1);
        assert_eq!(trace.records.len(), 1);
        assert_eq!(trace.last().as_slice(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn single_hyperedge_trace() {
        let trace = diffuse(&single_hyperedge(), &[-1.0, -1.0, 1.0, 2.0], 1, &MinNormOptions::default()).unwrap();
        assert_eq!(trace.records[0].potential, 9.0 / 8.0);
        let last = trace.last();
        assert!((last[1] + 0.625).abs() < 1e-12 && (last[3] - 1.25).abs() < 1e-12);
    }

    #[test]
    fn long_runs_keep_checkpoints() {
        let n = 2000;
        let g = Hypergraph::build(n, (1..n).map(|i| ([i - 1, i], 1.0))).unwrap();
        let m = PotentialModel::uniform(g, EdgeNorm::L2).unwrap();
        let n_steps = 600; // n * (T + 1) > limit
        let mut x0 = vec![0.0; n];
        x0[0] = 1.0;
        let trace = diffuse(&m, &x0, n_steps, &MinNormOptions::default()).unwrap();
        assert!(trace.iterates.len() <= 102);
        assert_eq!(trace.iterates.last().unwrap().0, n_steps);
        assert_eq!(trace.records.len(), n_steps + 1);
    }

    #[test]
    fn bad_input_is_reported_with_trace() {
        let err = diffuse(&single_hyperedge(), &[1.0, 2.0], 3, &MinNormOptions::default()).unwrap_err();
        assert!(matches!(err.error, Error::LengthMismatch { .. }));
    }
}
