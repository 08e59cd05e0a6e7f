//! Hyperedge norms and the quadratic potential
//! `U(x) = 1/2 sum_h w_h min_u ||x_h - u 1_h||_h^2`.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::diffusion::{heat_step_with, MinNormOptions};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Largest hyperedge a cut-function table may describe.
pub const MAX_CUT_FUNCTION_SIZE: usize = 12;

/// Relative tolerance used when grouping near-equal coordinates of `x_h`.
pub fn tie_tolerance(x_h: &[f64]) -> f64 {
    let inf = x_h.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    1e-9 * (1.0 + inf)
}

/// A symmetric submodular set function on the vertices of one hyperedge,
/// stored as a full table indexed by bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct CutFunction {
    size: usize,
    values: Vec<f64>,
}

impl CutFunction {
    /// Validates symmetry, normalization, submodularity and positivity on
    /// singletons before accepting the table.
    pub fn new(size: usize, values: Vec<f64>) -> Result<Self> {
        if !(2..=MAX_CUT_FUNCTION_SIZE).contains(&size) {
            return Err(Error::InvalidCutFunction(format!(
                "ground set size {size} outside 2..={MAX_CUT_FUNCTION_SIZE}"
            )));
        }
        if values.len() != 1 << size {
            return Err(Error::InvalidCutFunction(format!(
                "expected {} table entries, got {}",
                1usize << size,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidCutFunction("non-finite entry".into()));
        }
        let full = (1usize << size) - 1;
        let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let tol = 1e-12 * scale;
        if values[0].abs() > tol || values[full].abs() > tol {
            return Err(Error::InvalidCutFunction(
                "value on the empty set and the full set must be 0".into(),
            ));
        }
        for mask in 0..=full {
            if (values[mask] - values[full ^ mask]).abs() > tol {
                return Err(Error::InvalidCutFunction(format!(
                    "not symmetric at subset {mask:#b}"
                )));
            }
        }
        for v in 0..size {
            if values[1 << v] <= 0.0 {
                return Err(Error::InvalidCutFunction(format!(
                    "singleton {{{v}}} must have positive value"
                )));
            }
        }
        // local exchange form of submodularity, equivalent to the pairwise one
        for mask in 0..=full {
            for i in 0..size {
                if mask & (1 << i) != 0 {
                    continue;
                }
                for j in (i + 1)..size {
                    if mask & (1 << j) != 0 {
                        continue;
                    }
                    let lhs = values[mask | 1 << i] + values[mask | 1 << j];
                    let rhs = values[mask] + values[mask | 1 << i | 1 << j];
                    if lhs < rhs - tol {
                        return Err(Error::InvalidCutFunction(format!(
                            "not submodular at subset {mask:#b} with elements {i}, {j}"
                        )));
                    }
                }
            }
        }
        Ok(Self { size, values })
    }

    /// `delta(S) = profile[min(|S|, k - |S|)]` for a concave profile with
    /// `profile[0] = 0`.
    pub fn cardinality_based(size: usize, profile: &[f64]) -> Result<Self> {
        if profile.len() < size / 2 + 1 {
            return Err(Error::InvalidCutFunction(format!(
                "profile needs {} entries",
                size / 2 + 1
            )));
        }
        let values = (0..1usize << size)
            .map(|mask| {
                let c = mask.count_ones() as usize;
                profile[c.min(size - c)]
            })
            .collect();
        Self::new(size, values)
    }

    /// The all-or-nothing cut: cost 1 whenever the hyperedge is split.
    pub fn standard(size: usize) -> Result<Self> {
        let mut profile = vec![1.0; size / 2 + 1];
        profile[0] = 0.0;
        Self::cardinality_based(size, &profile)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn value(&self, mask: usize) -> f64 {
        self.values[mask]
    }

    pub fn table(&self) -> &[f64] {
        &self.values
    }

    /// Lovász extension as a sum over the upper level sets of `x`:
    /// `sum_j (x_(j) - x_(j+1)) delta(S_j)`, exact on indicator vectors.
    pub fn lovasz(&self, x: &[f64]) -> f64 {
        let order = descending_order(x);
        let mut mask = 0usize;
        let mut total = 0.0;
        for pair in order.windows(2) {
            mask |= 1 << pair[0];
            let gap = x[pair[0]] - x[pair[1]];
            if gap != 0.0 {
                total += gap * self.values[mask];
            }
        }
        total
    }

    /// The vertex of the base polytope produced by the greedy algorithm for
    /// the given ordering of the ground set.
    pub fn greedy_vertex(&self, order: &[usize]) -> Vec<f64> {
        let mut y = vec![0.0; self.size];
        let mut mask = 0usize;
        let mut prev = 0.0;
        for &v in order {
            mask |= 1 << v;
            let cur = self.values[mask];
            y[v] = cur - prev;
            prev = cur;
        }
        y
    }

    /// `max ||y||_2^2` over the vertices of the base polytope. Exact by
    /// enumeration up to 8 elements, otherwise the bound `sum_v delta({v})^2`
    /// (every greedy marginal lies in `[-delta({v}), delta({v})]`).
    pub fn max_vertex_norm_sq(&self) -> f64 {
        if self.size <= 8 {
            let mut order: Vec<usize> = (0..self.size).collect();
            let mut best = 0.0f64;
            permute(&mut order, 0, &mut |perm| {
                let y = self.greedy_vertex(perm);
                best = best.max(y.iter().map(|v| v * v).sum());
            });
            best
        } else {
            (0..self.size).map(|v| self.values[1 << v].powi(2)).sum()
        }
    }
}

fn permute(items: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Indices sorted by decreasing value, ties by ascending index.
pub(crate) fn descending_order(x: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[b].total_cmp(&x[a]).then(a.cmp(&b)));
    order
}

/// The norm `c * (lovasz(x) + |<1, x>|)` built from a cut function, with `c`
/// chosen so that `||x||_h <= ||x||_2` for every `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct LovaszNorm {
    cut: CutFunction,
    scale: f64,
}

impl LovaszNorm {
    /// The unit ball of the unscaled norm has support points `y +- 1` for
    /// base-polytope vertices `y`, and `<y, 1> = 0`, so its largest value on
    /// the Euclidean sphere is `sqrt(k + max ||y||^2)`.
    pub fn new(cut: CutFunction) -> Self {
        let k = cut.size() as f64;
        let scale = 1.0 / (k + cut.max_vertex_norm_sq()).sqrt();
        Self { cut, scale }
    }

    pub fn cut(&self) -> &CutFunction {
        &self.cut
    }

    /// Factor applied to the raw Lovász construction.
    pub fn scale(&self) -> f64 {
        self.scale
    }
}

/// Norm attached to a single hyperedge.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeNorm {
    LInf,
    L2,
    Lovasz(Arc<LovaszNorm>),
}

impl EdgeNorm {
    pub fn lovasz(cut: CutFunction) -> Self {
        EdgeNorm::Lovasz(Arc::new(LovaszNorm::new(cut)))
    }

    /// `||x||_h` itself (not shift-minimized).
    pub fn norm(&self, x: &[f64]) -> f64 {
        match self {
            EdgeNorm::LInf => x.iter().fold(0.0f64, |m, v| m.max(v.abs())),
            EdgeNorm::L2 => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            EdgeNorm::Lovasz(l) => {
                l.scale * (l.cut.lovasz(x) + x.iter().sum::<f64>().abs())
            }
        }
    }

    /// `min_u ||x_h - u 1_h||_h`.
    pub fn min_shift_norm(&self, x_h: &[f64]) -> f64 {
        match self {
            EdgeNorm::LInf => {
                let (lo, hi) = min_max(x_h);
                (hi - lo) / 2.0
            }
            EdgeNorm::L2 => {
                let mean = x_h.iter().sum::<f64>() / x_h.len() as f64;
                x_h.iter().map(|v| (v - mean).powi(2)).sum::<f64>().sqrt()
            }
            // the raw Lovász extension is shift invariant since delta(h) = 0
            EdgeNorm::Lovasz(l) => (l.scale * l.cut.lovasz(x_h)).max(0.0),
        }
    }

    pub fn check_size(&self, size: usize) -> Result<()> {
        if let EdgeNorm::Lovasz(l) = self {
            if l.cut.size() != size {
                return Err(Error::NormMismatch(format!(
                    "cut function on {} elements assigned to a hyperedge of size {size}",
                    l.cut.size()
                )));
            }
        }
        Ok(())
    }
}

pub(crate) fn min_max(x: &[f64]) -> (f64, f64) {
    x.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

/// A hypergraph together with one norm per hyperedge.
#[derive(Debug, Clone)]
pub struct PotentialModel {
    graph: Hypergraph,
    norms: Vec<EdgeNorm>,
}

impl PotentialModel {
    pub fn uniform(graph: Hypergraph, norm: EdgeNorm) -> Result<Self> {
        let norms = vec![norm; graph.num_edges()];
        Self::new(graph, norms)
    }

    /// A global default norm with per-edge overrides.
    pub fn with_overrides(
        graph: Hypergraph,
        default: EdgeNorm,
        overrides: &[(usize, EdgeNorm)],
    ) -> Result<Self> {
        let mut norms = vec![default; graph.num_edges()];
        for (e, norm) in overrides {
            if *e >= norms.len() {
                return Err(Error::NormMismatch(format!(
                    "override for edge {e} but only {} edges",
                    norms.len()
                )));
            }
            norms[*e] = norm.clone();
        }
        Self::new(graph, norms)
    }

    pub fn new(graph: Hypergraph, norms: Vec<EdgeNorm>) -> Result<Self> {
        if norms.len() != graph.num_edges() {
            return Err(Error::NormMismatch(format!(
                "{} norms for {} edges",
                norms.len(),
                graph.num_edges()
            )));
        }
        for (e, norm) in norms.iter().enumerate() {
            norm.check_size(graph.edge(e).len())?;
        }
        Ok(Self { graph, norms })
    }

    pub fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    pub fn norms(&self) -> &[EdgeNorm] {
        &self.norms
    }

    pub fn norm(&self, e: usize) -> &EdgeNorm {
        &self.norms[e]
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn is_two_uniform_l2(&self) -> bool {
        self.graph.is_two_uniform() && self.norms.iter().all(|n| *n == EdgeNorm::L2)
    }

    /// `x_h`, the restriction of `x` to the vertices of edge `e`.
    pub fn restrict(&self, e: usize, x: &[f64]) -> Vec<f64> {
        self.graph.edge(e).iter().map(|&v| x[v]).collect()
    }

    /// Per-edge shift-minimized norms `f_h(x)`.
    pub fn edge_values(&self, x: &[f64]) -> Vec<f64> {
        (0..self.graph.num_edges())
            .map(|e| self.norms[e].min_shift_norm(&self.restrict(e, x)))
            .collect()
    }

    /// `U(x)`.
    pub fn potential(&self, x: &[f64]) -> f64 {
        0.5 * self
            .edge_values(x)
            .iter()
            .zip(self.graph.weights())
            .map(|(f, w)| w * f * f)
            .sum::<f64>()
    }

    /// `U(x) + lambda/2 ||x||_D^2`.
    pub fn regularized_potential(&self, x: &[f64], lambda: f64) -> f64 {
        self.potential(x) + 0.5 * lambda * self.graph.d_norm_sq(x)
    }

    /// `U(x) / (1/2 ||x - pi(x)||_D^2)`.
    pub fn rayleigh(&self, x: &[f64]) -> Result<f64> {
        self.graph.check_vector(x)?;
        let centered = self.graph.center(x);
        let denom = 0.5 * self.graph.d_norm_sq(&centered);
        if denom <= 0.0 || !denom.is_finite() {
            return Err(Error::ConstantVector);
        }
        Ok(self.potential(&centered) / denom)
    }

    /// Smallest Rayleigh quotient seen along heat diffusions started from
    /// random D-orthogonal vectors.
    ///
    /// This is an upper bound on the Poincaré constant, useful only for
    /// reporting and sizing iteration budgets.
    pub fn estimate_lambda(&self, iterations: usize, restarts: usize, seed: u64) -> Result<f64> {
        if !self.graph.connected() {
            return Err(Error::DisconnectedGraph);
        }
        let n = self.num_vertices();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let options = MinNormOptions::default();
        let mut best = f64::INFINITY;
        for _ in 0..restarts.max(1) {
            let start: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            let mut x = self.graph.center(&start);
            for _ in 0..=iterations {
                match self.rayleigh(&x) {
                    Ok(r) => best = best.min(r),
                    Err(_) => break,
                }
                x = match heat_step_with(self, &x, &options, None) {
                    Ok((next, _)) => next,
                    Err(Error::ToleranceNotReached { best, .. }) => self
                        .graph
                        .d_inv_apply(&best)
                        .iter()
                        .zip(&x)
                        .map(|(dz, xi)| xi - dz)
                        .collect(),
                    Err(e) => return Err(e),
                };
                // re-center to keep rounding drift out of the constant direction
                x = self.graph.center(&x);
            }
        }
        Ok(best)
    }

    /// Exact Poincaré constant of the 2-uniform l2 potential of the clique
    /// expansion, `1/2 * lambda_2(D^-1/2 L D^-1/2)`, measured against this
    /// hypergraph's degrees. Dense eigensolve; meant for moderate sizes.
    pub fn clique_pencil_lambda(&self) -> Result<f64> {
        if !self.graph.connected() {
            return Err(Error::DisconnectedGraph);
        }
        Ok(0.5 * normalized_laplacian_eigenvalues(&self.graph)[1])
    }

    /// Conservative lower estimate of the Poincaré constant: the clique
    /// pencil value divided by `r(r-1)` for maximum rank `r`.
    ///
    /// For l-infinity and l2 edges `U(x) >= U_clique(x) / (r(r-1))`, so the
    /// estimate is a true lower bound there; with Lovász norms it is a
    /// heuristic.
    pub fn lambda_lower_heuristic(&self) -> Result<f64> {
        let r = self.graph.max_rank().max(2) as f64;
        Ok(self.clique_pencil_lambda()? / (r * (r - 1.0)))
    }
}

/// Sorted eigenvalues of `D^-1/2 L D^-1/2` for the clique expansion
/// Laplacian `L` and this hypergraph's degree matrix `D`.
pub fn normalized_laplacian_eigenvalues(graph: &Hypergraph) -> Vec<f64> {
    let n = graph.num_vertices();
    let lap = graph.dense_laplacian();
    let inv_sqrt: Vec<f64> = graph
        .degrees()
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 })
        .collect();
    let m = DMatrix::from_fn(n, n, |i, j| lap[i][j] * inv_sqrt[i] * inv_sqrt[j]);
    let mut eig: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_hyperedge() -> PotentialModel {
        let g = Hypergraph::build(4, [(vec![0, 1, 2, 3], 1.0)]).unwrap();
        PotentialModel::uniform(g, EdgeNorm::LInf).unwrap()
    }

    fn pair(norm: EdgeNorm) -> PotentialModel {
        PotentialModel::uniform(Hypergraph::build(2, [(vec![0, 1], 1.0)]).unwrap(), norm).unwrap()
    }

    #[test]
    fn min_shift_examples() {
        assert_eq!(EdgeNorm::LInf.min_shift_norm(&[-1.0, -1.0, 1.0, 2.0]), 1.5);
        assert_eq!(EdgeNorm::L2.min_shift_norm(&[0.0, 2.0]), 2f64.sqrt());
        assert_eq!(EdgeNorm::LInf.min_shift_norm(&[3.0; 5]), 0.0);
        assert_eq!(EdgeNorm::L2.min_shift_norm(&[3.0; 5]), 0.0);
        let lov = EdgeNorm::lovasz(CutFunction::standard(4).unwrap());
        assert!(lov.min_shift_norm(&[0.7; 4]).abs() < 1e-15);
    }

    #[test]
    fn lovasz_examples() {
        let cut = CutFunction::standard(2).unwrap();
        assert_eq!(cut.lovasz(&[0.0, 1.0]), 1.0);
        let cut = CutFunction::cardinality_based(4, &[0.0, 1.0, 1.5]).unwrap();
        for mask in 0..16usize {
            let x: Vec<f64> = (0..4).map(|i| ((mask >> i) & 1) as f64).collect();
            assert_eq!(cut.lovasz(&x), cut.value(mask));
        }
        assert!(cut.lovasz(&[2.5; 4]).abs() < 1e-15);
    }

    #[test]
    fn cut_function_validation() {
        // not symmetric
        assert!(CutFunction::new(2, vec![0.0, 1.0, 2.0, 0.0]).is_err());
        // nonzero on the empty set
        assert!(CutFunction::new(2, vec![1.0, 1.0, 1.0, 1.0]).is_err());
        // convex profile is not submodular
        assert!(CutFunction::cardinality_based(4, &[0.0, 1.0, 3.0]).is_err());
        // zero singleton
        assert!(CutFunction::cardinality_based(4, &[0.0, 0.0, 1.0]).is_err());
        assert!(CutFunction::new(13, vec![0.0; 1 << 13]).is_err());
        assert!(CutFunction::new(3, vec![0.0; 7]).is_err());
    }

    #[test]
    fn lovasz_scale_is_tight_for_pairs() {
        // standard cut on 2 elements: vertices (1,-1),(-1,1): scale 1/sqrt(4)
        let norm = LovaszNorm::new(CutFunction::standard(2).unwrap());
        assert!((norm.scale() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn potential_examples() {
        let m = single_hyperedge();
        assert_eq!(m.potential(&[-1.0, -1.0, 1.0, 2.0]), 9.0 / 8.0);
        assert_eq!(m.potential(&[4.0; 4]), 0.0);
        assert!((pair(EdgeNorm::L2).potential(&[0.0, 1.0]) - 0.25).abs() < 1e-15);
        let g = Hypergraph::build(4, [(vec![0, 1, 2, 3], 3.0)]).unwrap();
        let m = PotentialModel::uniform(g, EdgeNorm::LInf).unwrap();
        assert_eq!(m.potential(&[-1.0, -1.0, 1.0, 2.0]), 27.0 / 8.0);
        assert_eq!(m.regularized_potential(&[1.0, 0.0, 0.0, 0.0], 2.0), 0.5 * 0.25 * 3.0 + 3.0);
    }

    #[test]
    fn rayleigh_examples() {
        let m = pair(EdgeNorm::L2);
        assert!((m.rayleigh(&[1.0, -1.0]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(m.rayleigh(&[2.0, 2.0]), Err(Error::ConstantVector));
        let x = [0.3, -1.2];
        let x5: Vec<f64> = x.iter().map(|v| 5.0 * v).collect();
        assert!((m.rayleigh(&x).unwrap() - m.rayleigh(&x5).unwrap()).abs() < 1e-14);

        let g = Hypergraph::build(4, [(vec![0, 1], 1.0), (vec![2, 3], 1.0)]).unwrap();
        let m = PotentialModel::uniform(g, EdgeNorm::LInf).unwrap();
        assert_eq!(m.rayleigh(&[1.0, 1.0, -1.0, -1.0]).unwrap(), 0.0);
    }

    #[test]
    fn estimate_lambda_examples() {
        let m = pair(EdgeNorm::L2);
        assert!((m.estimate_lambda(5, 2, 7).unwrap() - 1.0).abs() < 1e-12);

        let g = Hypergraph::build(4, [(vec![0, 1], 1.0), (vec![2, 3], 1.0)]).unwrap();
        let m = PotentialModel::uniform(g, EdgeNorm::LInf).unwrap();
        assert_eq!(m.estimate_lambda(5, 2, 7), Err(Error::DisconnectedGraph));
    }

    #[test]
    fn estimate_lambda_is_monotone_in_iterations() {
        let g = Hypergraph::build(
            6,
            [(vec![0, 1, 2], 1.0), (vec![2, 3], 1.0), (vec![3, 4, 5], 2.0), (vec![0, 5], 0.5)],
        )
        .unwrap();
        let m = PotentialModel::uniform(g, EdgeNorm::LInf).unwrap();
        let mut prev = f64::INFINITY;
        for it in [0, 1, 3, 10] {
            let est = m.estimate_lambda(it, 3, 11).unwrap();
            assert!(est <= prev);
            prev = est;
        }
    }

    #[test]
    fn clique_pencil_matches_two_vertex_case() {
        let m = pair(EdgeNorm::L2);
        // D = I, L = [[1,-1],[-1,1]], eigenvalues 0, 2 -> lambda_G = 1
        assert!((m.clique_pencil_lambda().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overrides_check_sizes() {
        let g = Hypergraph::build(4, [(vec![0, 1, 2], 1.0), (vec![2, 3], 1.0)]).unwrap();
        let cut3 = CutFunction::standard(3).unwrap();
        assert!(PotentialModel::with_overrides(
            g.clone(),
            EdgeNorm::LInf,
            &[(0, EdgeNorm::lovasz(cut3.clone()))]
        )
        .is_ok());
        assert!(matches!(
            PotentialModel::with_overrides(g.clone(), EdgeNorm::LInf, &[(1, EdgeNorm::lovasz(cut3))]),
            Err(Error::NormMismatch(_))
        ));
        assert!(PotentialModel::with_overrides(g, EdgeNorm::LInf, &[(5, EdgeNorm::L2)]).is_err());
    }
}
