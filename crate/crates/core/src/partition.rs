//! Sweep-cut rounding and diffusion-based local partitioning.

use crate::diffusion::{heat_step_with, MinNormOptions};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexVector};
use crate::laplacian::FaceState;
use crate::potentials::PotentialModel;

/// Best prefix of a sorted vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Vertices by descending value, ties by index.
    pub ordering: Vec<usize>,
    /// The best prefix, sorted by vertex index.
    pub set: Vec<usize>,
    pub conductance: f64,
    /// `profile[i]` is the conductance of the first `i + 1` vertices;
    /// infinite when one side has zero volume.
    pub profile: Vec<f64>,
}

/// Scans all proper prefixes of the descending order of `x` and keeps the
/// first one of minimum conductance.
pub fn sweep_cut(graph: &Hypergraph, x: &[f64]) -> Result<SweepResult> {
    graph.check_vector(x)?;
    let n = graph.num_vertices();
    let (lo, hi) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if n < 2 || hi == lo {
        return Err(Error::ConstantVector);
    }
    let mut ordering: Vec<usize> = (0..n).collect();
    ordering.sort_by(|&a, &b| x[b].total_cmp(&x[a]).then(a.cmp(&b)));

    let total = graph.volume();
    let mut inside_count = vec![0usize; graph.num_edges()];
    let mut boundary = 0.0;
    let mut volume = 0.0;
    let mut profile = Vec::with_capacity(n - 1);
    let mut best: Option<(usize, f64)> = None;
    for (rank, &v) in ordering[..n - 1].iter().enumerate() {
        volume += graph.degree(v);
        for &e in graph.incident_edges(v) {
            let size = graph.edge(e).len();
            let before = inside_count[e];
            inside_count[e] += 1;
            let was_cut = before > 0 && before < size;
            let is_cut = inside_count[e] < size;
            match (was_cut, is_cut) {
                (false, true) => boundary += graph.weight(e),
                (true, false) => boundary -= graph.weight(e),
                _ => {}
            }
        }
        let denom = volume.min(total - volume);
        let phi = if denom > 0.0 { boundary.max(0.0) / denom } else { f64::INFINITY };
        profile.push(phi);
        if phi.is_finite() && best.is_none_or(|(_, b)| phi < b) {
            best = Some((rank, phi));
        }
    }
    let (rank, _) = best.ok_or(Error::DegenerateCut)?;
    let mut set = ordering[..=rank].to_vec();
    set.sort_unstable();
    let conductance = graph.conductance(&set)?.conductance;
    Ok(SweepResult {
        ordering,
        set,
        conductance,
        profile,
    })
}

/// Outcome of [`local_partition`].
#[derive(Debug, Clone, PartialEq)]
pub struct LocalPartition {
    pub sweep: SweepResult,
    /// Number of diffusion steps `T`.
    pub steps: usize,
    /// The step whose iterate had the smallest Rayleigh quotient.
    pub t_star: usize,
    /// Rayleigh quotient of `x_t` for `t = 1..=T`; NaN for constant iterates.
    pub rayleigh: Vec<f64>,
}

/// `ceil(1 / (3 phi))`.
pub fn partition_steps(phi_target: f64) -> usize {
    (1.0 / (3.0 * phi_target) - 1e-9).ceil().max(1.0) as usize
}

/// Diffuses heat from `1_v` for `ceil(1/(3 phi))` steps and sweeps the iterate
/// with the smallest Rayleigh quotient.
pub fn local_partition(model: &PotentialModel, v: usize, phi_target: f64) -> Result<LocalPartition> {
    local_partition_with(model, v, phi_target, &MinNormOptions::default())
}

pub fn local_partition_with(
    model: &PotentialModel,
    v: usize,
    phi_target: f64,
    options: &MinNormOptions,
) -> Result<LocalPartition> {
    let n = model.num_vertices();
    if v >= n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    if !(phi_target > 0.0 && phi_target <= 1.0) {
        return Err(Error::InvalidParameter(format!("target conductance must lie in (0, 1], got {phi_target}")));
    }
    let steps = partition_steps(phi_target);
    let mut x = VertexVector::indicator(n, v).into_inner();
    let mut warm: Option<FaceState> = None;
    let mut rayleigh = Vec::with_capacity(steps);
    let mut best: Option<(usize, f64, Vec<f64>)> = None;
    for t in 1..=steps {
        let (next, result) = heat_step_with(model, &x, options, warm.as_ref())?;
        warm = Some(result.state);
        x = next;
        let r = model.rayleigh(&x).unwrap_or(f64::NAN);
        rayleigh.push(r);
        if !r.is_nan() && best.as_ref().is_none_or(|(_, b, _)| r < *b) {
            best = Some((t, r, x.clone()));
        }
    }
    let (t_star, _, x_star) = best.ok_or(Error::ConstantVector)?;
    Ok(LocalPartition {
        sweep: sweep_cut(model.graph(), &x_star)?,
        steps,
        t_star,
        rayleigh,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::EdgeNorm;

    #[test]
    fn single_hyperedge_profile() {
        let g = Hypergraph::build(4, [(vec![0, 1, 2, 3], 1.0)]).unwrap();
        let r = sweep_cut(&g, &[-1.0, -1.0, 1.0, 2.0]).unwrap();
        assert_eq!(r.ordering, vec![3, 2, 0, 1]);
        assert_eq!(r.profile, vec![1.0, 0.5, 1.0]);
        assert_eq!(r.set, vec![2, 3]);
        assert_eq!(r.conductance, 0.5);
    }

    #[test]
    fn planted_component() {
        let g = Hypergraph::build(5, [(vec![0, 1], 1.0), (vec![2, 3, 4], 1.0)]).unwrap();
        let x = VertexVector::indicator_of(5, &[2, 3, 4]);
        let r = sweep_cut(&g, &x).unwrap();
        assert_eq!(r.set, vec![2, 3, 4]);
        assert_eq!(r.conductance, 0.0);
    }

    #[test]
    fn shift_invariant() {
        let g = Hypergraph::build(4, [(vec![0, 1, 2], 1.0), (vec![2, 3], 2.0)]).unwrap();
        let x = [0.1, 0.7, -0.3, 0.4];
        let shifted: Vec<f64> = x.iter().map(|v| v + 5.0).collect();
        assert_eq!(sweep_cut(&g, &x).unwrap(), sweep_cut(&g, &shifted).unwrap());
    }

    #[test]
    fn constant_rejected() {
        let g = Hypergraph::build(2, [(vec![0, 1], 1.0)]).unwrap();
        assert_eq!(sweep_cut(&g, &[1.0, 1.0]).unwrap_err(), Error::ConstantVector);
    }

    #[test]
    fn step_count() {
        assert_eq!(partition_steps(1.0 / 30.0), 10);
        assert_eq!(partition_steps(0.1), 4);
        assert_eq!(partition_steps(1.0), 1);
    }

    #[test]
    fn seed_in_small_component() {
        let g = Hypergraph::build(
            6,
            [(vec![0, 1, 2], 1.0), (vec![1, 2, 3], 1.0), (vec![4, 5], 1.0)],
        )
        .unwrap();
        let m = PotentialModel::uniform(g, EdgeNorm::LInf).unwrap();
        let r = local_partition(&m, 4, 0.2).unwrap();
        assert_eq!(r.sweep.conductance, 0.0);
        assert_eq!(r.steps, 2);
        assert!(r.rayleigh.iter().all(|q| q.is_nan() || *q >= r.rayleigh[r.t_star - 1]));
    }
}
