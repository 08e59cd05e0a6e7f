//! Weighted hypergraphs, degree accounting, conductance and the conversions
//! between bipartite graphs, clique expansions and k-NN point clouds.

use std::collections::HashMap;
use std::ops::Deref;

use crate::error::{Error, Result};

/// A dense real vector indexed by vertices. Entries are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexVector(Vec<f64>);

impl VertexVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self(values))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![1.0; n])
    }

    /// The indicator vector of a single vertex.
    pub fn indicator(n: usize, v: usize) -> Self {
        let mut values = vec![0.0; n];
        values[v] = 1.0;
        Self(values)
    }

    pub fn indicator_of(n: usize, set: &[usize]) -> Self {
        let mut values = vec![0.0; n];
        for &v in set {
            values[v] = 1.0;
        }
        Self(values)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Self(values)
    }
}

impl Deref for VertexVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<VertexVector> for Vec<f64> {
    fn from(v: VertexVector) -> Self {
        v.0
    }
}

/// Boundary weight and conductance of a vertex subset.
#[derive(Debug, Clone, PartialEq)]
pub struct CutProfile {
    /// Sorted, deduplicated members of the cut side.
    pub set: Vec<usize>,
    pub boundary_weight: f64,
    pub volume: f64,
    pub complement_volume: f64,
    pub conductance: f64,
}

/// How clique expansion distributes a hyperedge weight over its pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CliqueScaling {
    /// Every pair of `h` receives `w_h`.
    #[default]
    Unit,
    /// Every pair of `h` receives `w_h / (|h| - 1)`, so degrees are preserved.
    DegreePreserving,
}

/// An immutable weighted hypergraph with cached degrees.
///
/// Hyperedges are stored with sorted, distinct vertex lists. Duplicate
/// hyperedges are merged at build time by summing weights; the merged edge
/// keeps the position of its first occurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
    weights: Vec<f64>,
    degrees: Vec<f64>,
    volume: f64,
    incidence: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds a hypergraph over `n` vertices from `(vertices, weight)` pairs.
    pub fn build<I, E>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (E, f64)>,
        E: AsRef<[usize]>,
    {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut merged: Vec<Vec<usize>> = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        for (edge, (vertices, weight)) in edges.into_iter().enumerate() {
            let vertices = vertices.as_ref();
            if !(weight.is_finite() && weight > 0.0) {
                return Err(Error::NonpositiveWeight { edge, weight });
            }
            if vertices.is_empty() {
                return Err(Error::EmptyHyperedge { edge });
            }
            if let Some(&vertex) = vertices.iter().find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange { vertex, n });
            }
            let mut key = vertices.to_vec();
            key.sort_unstable();
            key.dedup();
            if key.len() < 2 {
                return Err(Error::SingletonHyperedge { edge });
            }
            match index.get(&key) {
                Some(&i) => weights[i] += weight,
                None => {
                    index.insert(key.clone(), merged.len());
                    merged.push(key);
                    weights.push(weight);
                }
            }
        }
        Ok(Self::from_canonical(n, merged, weights))
    }

    fn from_canonical(n: usize, edges: Vec<Vec<usize>>, weights: Vec<f64>) -> Self {
        let mut degrees = vec![0.0; n];
        let mut incidence = vec![Vec::new(); n];
        for (e, (edge, &w)) in edges.iter().zip(&weights).enumerate() {
            for &v in edge {
                degrees[v] += w;
                incidence[v].push(e);
            }
        }
        let volume = degrees.iter().sum();
        Self {
            n,
            edges,
            weights,
            degrees,
            volume,
            incidence,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &[usize] {
        &self.edges[e]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, e: usize) -> f64 {
        self.weights[e]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn degree(&self, v: usize) -> f64 {
        self.degrees[v]
    }

    /// Total volume `sum_i d_i`.
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Hyperedges incident to `v`, in edge order.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    /// Largest hyperedge cardinality (0 if there are no edges).
    pub fn max_rank(&self) -> usize {
        self.edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_two_uniform(&self) -> bool {
        self.edges.iter().all(|e| e.len() == 2)
    }

    pub fn vol(&self, set: &[usize]) -> f64 {
        set.iter().map(|&v| self.degrees[v]).sum()
    }

    pub fn check_vector(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        if let Some(index) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(())
    }

    /// `<x, y>_D`.
    pub fn d_inner(&self, x: &[f64], y: &[f64]) -> f64 {
        self.degrees
            .iter()
            .zip(x)
            .zip(y)
            .map(|((d, a), b)| d * a * b)
            .sum()
    }

    /// `||x||_D^2`.
    pub fn d_norm_sq(&self, x: &[f64]) -> f64 {
        self.d_inner(x, x)
    }

    /// `||z||_{D^-1}^2`, skipping isolated vertices.
    pub fn d_inv_norm_sq(&self, z: &[f64]) -> f64 {
        self.degrees
            .iter()
            .zip(z)
            .filter(|(d, _)| **d > 0.0)
            .map(|(d, v)| v * v / d)
            .sum()
    }

    /// The scalar `c` with `pi(x) = c * 1`, the D-projection of `x` onto the
    /// ones vector.
    pub fn d_mean(&self, x: &[f64]) -> f64 {
        if self.volume > 0.0 {
            self.d_inner(x, &vec![1.0; self.n]) / self.volume
        } else {
            0.0
        }
    }

    /// `x - pi(x)`.
    pub fn center(&self, x: &[f64]) -> Vec<f64> {
        let m = self.d_mean(x);
        x.iter().map(|v| v - m).collect()
    }

    /// `D^-1 z`, with zero on isolated vertices.
    pub fn d_inv_apply(&self, z: &[f64]) -> Vec<f64> {
        self.degrees
            .iter()
            .zip(z)
            .map(|(&d, &v)| if d > 0.0 { v / d } else { 0.0 })
            .collect()
    }

    /// Conductance `w(dS) / min(Vol(S), Vol(V \ S))` of a vertex subset.
    pub fn conductance(&self, set: &[usize]) -> Result<CutProfile> {
        let mut inside = vec![false; self.n];
        for &v in set {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
            inside[v] = true;
        }
        self.conductance_of_mask(&inside)
    }

    pub(crate) fn conductance_of_mask(&self, inside: &[bool]) -> Result<CutProfile> {
        let members: Vec<usize> = (0..self.n).filter(|&v| inside[v]).collect();
        if members.is_empty() || members.len() == self.n {
            return Err(Error::DegenerateCut);
        }
        let mut volume = 0.0;
        let mut complement_volume = 0.0;
        for v in 0..self.n {
            if inside[v] {
                volume += self.degrees[v];
            } else {
                complement_volume += self.degrees[v];
            }
        }
        let boundary_weight: f64 = self
            .edges
            .iter()
            .zip(&self.weights)
            .filter(|(edge, _)| {
                let first = inside[edge[0]];
                edge.iter().any(|&v| inside[v] != first)
            })
            .map(|(_, w)| w)
            .sum();
        let denom = volume.min(complement_volume);
        if denom <= 0.0 {
            return Err(Error::DegenerateCut);
        }
        Ok(CutProfile {
            set: members,
            boundary_weight,
            volume,
            complement_volume,
            conductance: boundary_weight / denom,
        })
    }

    /// Connected component label of every vertex in the vertex-hyperedge
    /// incidence structure, numbered in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for edge in &self.edges {
            let root = find(&mut parent, edge[0]);
            for &v in &edge[1..] {
                let r = find(&mut parent, v);
                if r != root {
                    parent[r] = root;
                }
            }
        }
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut out = vec![0; self.n];
        for v in 0..self.n {
            let r = find(&mut parent, v);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            out[v] = label[r];
        }
        out
    }

    /// True iff the incidence structure forms a single connected component.
    pub fn connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// Replaces every hyperedge by a complete graph over its vertices.
    pub fn clique_expansion(&self, scaling: CliqueScaling) -> Hypergraph {
        let mut pairs: Vec<([usize; 2], f64)> = Vec::new();
        for (edge, &w) in self.edges.iter().zip(&self.weights) {
            let pair_weight = match scaling {
                CliqueScaling::Unit => w,
                CliqueScaling::DegreePreserving => w / (edge.len() - 1) as f64,
            };
            for (a, &i) in edge.iter().enumerate() {
                for &j in &edge[a + 1..] {
                    pairs.push(([i, j], pair_weight));
                }
            }
        }
        Hypergraph::build(self.n, pairs).expect("clique expansion of a valid hypergraph")
    }

    /// The weighted graph Laplacian `L` of a 2-uniform hypergraph, as a dense
    /// row-major matrix. Hyperedges of larger rank are expanded into cliques.
    pub fn dense_laplacian(&self) -> Vec<Vec<f64>> {
        let mut lap = vec![vec![0.0; self.n]; self.n];
        for (edge, &w) in self.edges.iter().zip(&self.weights) {
            for (a, &i) in edge.iter().enumerate() {
                for &j in &edge[a + 1..] {
                    lap[i][i] += w;
                    lap[j][j] += w;
                    lap[i][j] -= w;
                    lap[j][i] -= w;
                }
            }
        }
        lap
    }

    /// `L x` for the clique-expanded graph Laplacian, without forming `L`.
    pub fn laplacian_apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (edge, &w) in self.edges.iter().zip(&self.weights) {
            if edge.len() == 2 {
                let (i, j) = (edge[0], edge[1]);
                let diff = w * (x[i] - x[j]);
                out[i] += diff;
                out[j] -= diff;
            } else {
                // sum_j w (x_i - x_j) = w (|h| x_i - sum_h x)
                let k = edge.len() as f64;
                let total: f64 = edge.iter().map(|&v| x[v]).sum();
                for &v in edge {
                    out[v] += w * (k * x[v] - total);
                }
            }
        }
        out
    }
}

/// Result of converting a bipartite graph into a hypergraph.
#[derive(Debug, Clone)]
pub struct BipartiteConversion {
    pub hypergraph: Hypergraph,
    /// Right nodes with fewer than two distinct neighbours.
    pub skipped_degenerate: usize,
    /// Right nodes whose neighbourhood exceeded the size cap.
    pub skipped_oversize: usize,
}

/// Keeps the left nodes and turns each right node into a hyperedge over its
/// neighbours. Repeated neighbourhoods add up their weights.
pub fn bipartite_to_hypergraph(
    num_left: usize,
    right_adjacency: &[Vec<usize>],
    max_edge_size: Option<usize>,
) -> Result<BipartiteConversion> {
    let mut skipped_degenerate = 0;
    let mut skipped_oversize = 0;
    let mut edges = Vec::new();
    for row in right_adjacency {
        let mut vertices = row.clone();
        vertices.sort_unstable();
        vertices.dedup();
        if vertices.len() < 2 {
            skipped_degenerate += 1;
            continue;
        }
        if max_edge_size.is_some_and(|cap| vertices.len() > cap) {
            skipped_oversize += 1;
            continue;
        }
        edges.push((vertices, 1.0));
    }
    Ok(BipartiteConversion {
        hypergraph: Hypergraph::build(num_left, edges)?,
        skipped_degenerate,
        skipped_oversize,
    })
}

/// The `k` nearest neighbours of every point under the Euclidean metric.
/// Distance ties are broken by ascending point index.
pub fn knn_neighbors(points: &[Vec<f64>], k: usize) -> Result<Vec<Vec<usize>>> {
    let n = points.len();
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "k must satisfy 1 <= k < number of points (k = {k}, points = {n})"
        )));
    }
    let dim = points[0].len();
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                got: p.len(),
            });
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: i });
        }
    }
    let mut out = Vec::with_capacity(n);
    let mut candidates: Vec<(f64, usize)> = Vec::with_capacity(n - 1);
    for (i, p) in points.iter().enumerate() {
        candidates.clear();
        for (j, q) in points.iter().enumerate() {
            if i != j {
                let d: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
                candidates.push((d, j));
            }
        }
        let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        candidates.select_nth_unstable_by(k - 1, cmp);
        let mut nearest = candidates[..k].to_vec();
        nearest.sort_by(cmp);
        out.push(nearest.into_iter().map(|(_, j)| j).collect());
    }
    Ok(out)
}

/// One hyperedge per point containing the point and its `k` nearest
/// neighbours, unit weight before merging.
pub fn knn_hypergraph(points: &[Vec<f64>], k: usize) -> Result<Hypergraph> {
    let neighbors = knn_neighbors(points, k)?;
    let edges = neighbors.into_iter().enumerate().map(|(i, mut nb)| {
        nb.push(i);
        (nb, 1.0)
    });
    Hypergraph::build(points.len(), edges)
}

/// The k-NN graph: a unit edge from each point to each of its neighbours.
/// Mutual neighbours end up with weight 2.
pub fn knn_graph(points: &[Vec<f64>], k: usize) -> Result<Hypergraph> {
    let neighbors = knn_neighbors(points, k)?;
    let edges = neighbors
        .iter()
        .enumerate()
        .flat_map(|(i, nb)| nb.iter().map(move |&j| ([i, j], 1.0)));
    Hypergraph::build(points.len(), edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Hypergraph {
        Hypergraph::build(3, [(vec![0, 1], 1.0), (vec![1, 2], 1.0), (vec![0, 2], 1.0)]).unwrap()
    }

    #[test]
    fn single_edge_degrees() {
        let g = Hypergraph::build(4, [(vec![0, 1, 2, 3], 2.5)]).unwrap();
        assert_eq!(g.degrees(), &[2.5, 2.5, 2.5, 2.5]);
        assert_eq!(g.volume(), 10.0);
    }

    #[test]
    fn triangle_degrees() {
        assert_eq!(triangle().degrees(), &[2.0, 2.0, 2.0]);
    }

    #[test]
    fn build_rejects_bad_edges() {
        assert_eq!(
            Hypergraph::build(2, [(vec![0], 1.0)]),
            Err(Error::SingletonHyperedge { edge: 0 })
        );
        assert_eq!(
            Hypergraph::build(2, [(vec![1, 1], 1.0)]),
            Err(Error::SingletonHyperedge { edge: 0 })
        );
        assert_eq!(
            Hypergraph::build(2, [(Vec::<usize>::new(), 1.0)]),
            Err(Error::EmptyHyperedge { edge: 0 })
        );
        assert!(matches!(
            Hypergraph::build(2, [(vec![0, 1], 0.0)]),
            Err(Error::NonpositiveWeight { .. })
        ));
        assert!(matches!(
            Hypergraph::build(2, [(vec![0, 1], f64::NAN)]),
            Err(Error::NonpositiveWeight { .. })
        ));
        assert_eq!(
            Hypergraph::build(2, [(vec![0, 2], 1.0)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        );
        assert_eq!(Hypergraph::build(0, Vec::<(Vec<usize>, f64)>::new()), Err(Error::NoVertices));
    }

    #[test]
    fn duplicates_merge_in_first_position() {
        let g = Hypergraph::build(
            4,
            [(vec![2, 3], 1.0), (vec![1, 0], 1.0), (vec![0, 1], 0.5), (vec![3, 2, 2], 2.0)],
        )
        .unwrap();
        assert_eq!(g.edges(), &[vec![2, 3], vec![0, 1]]);
        assert_eq!(g.weights(), &[3.0, 1.5]);
    }

    #[test]
    fn conductance_examples() {
        let g = Hypergraph::build(4, [(vec![0, 1, 2, 3], 1.0)]).unwrap();
        let cut = g.conductance(&[0, 1]).unwrap();
        assert_eq!(cut.boundary_weight, 1.0);
        assert_eq!(cut.conductance, 0.5);

        assert_eq!(triangle().conductance(&[0]).unwrap().conductance, 1.0);

        let two = Hypergraph::build(4, [(vec![0, 1], 1.0), (vec![2, 3], 1.0)]).unwrap();
        assert_eq!(two.conductance(&[0, 1]).unwrap().conductance, 0.0);

        assert_eq!(g.conductance(&[]), Err(Error::DegenerateCut));
        assert_eq!(g.conductance(&[0, 1, 2, 3]), Err(Error::DegenerateCut));
    }

    #[test]
    fn connectivity() {
        assert!(triangle().connected());
        let two = Hypergraph::build(4, [(vec![0, 1], 1.0), (vec![2, 3], 1.0)]).unwrap();
        assert!(!two.connected());
        assert_eq!(two.components(), vec![0, 0, 1, 1]);
        let full = Hypergraph::build(5, [(vec![0, 1, 2, 3, 4], 1.0)]).unwrap();
        assert!(full.connected());
        let isolated = Hypergraph::build(3, [(vec![0, 1], 1.0)]).unwrap();
        assert!(!isolated.connected());
    }

    #[test]
    fn bipartite_rules() {
        let conv = bipartite_to_hypergraph(3, &[vec![0, 1]], None).unwrap();
        assert_eq!(conv.hypergraph.edges(), &[vec![0, 1]]);
        assert_eq!(conv.hypergraph.weights(), &[1.0]);

        let conv = bipartite_to_hypergraph(3, &[vec![0, 1], vec![1, 0]], None).unwrap();
        assert_eq!(conv.hypergraph.num_edges(), 1);
        assert_eq!(conv.hypergraph.weights(), &[2.0]);

        let conv = bipartite_to_hypergraph(3, &[vec![0], vec![1, 2]], None).unwrap();
        assert_eq!(conv.skipped_degenerate, 1);
        assert_eq!(conv.hypergraph.num_edges(), 1);

        let conv = bipartite_to_hypergraph(3, &[vec![0, 1, 2], vec![1, 2]], Some(2)).unwrap();
        assert_eq!(conv.skipped_oversize, 1);
        assert_eq!(conv.hypergraph.edges(), &[vec![1, 2]]);
    }

    #[test]
    fn clique_expansion_examples() {
        let g = Hypergraph::build(3, [(vec![0, 1, 2], 1.0)]).unwrap();
        let c = g.clique_expansion(CliqueScaling::Unit);
        assert_eq!(c.edges(), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(c.weights(), &[1.0, 1.0, 1.0]);

        let t = triangle();
        assert_eq!(t.clique_expansion(CliqueScaling::Unit), t);

        let g = Hypergraph::build(4, [(vec![0, 1, 2], 1.0), (vec![1, 2, 3], 1.0)]).unwrap();
        let c = g.clique_expansion(CliqueScaling::Unit);
        let i = c.edges().iter().position(|e| e == &vec![1, 2]).unwrap();
        assert_eq!(c.weight(i), 2.0);

        let scaled = g.clique_expansion(CliqueScaling::DegreePreserving);
        assert_eq!(scaled.degrees(), g.degrees());
    }

    #[test]
    fn laplacian_apply_matches_dense() {
        let g = Hypergraph::build(4, [(vec![0, 1, 2], 1.5), (vec![2, 3], 0.5)]).unwrap();
        let x = [0.3, -1.0, 2.0, 0.7];
        let dense = g.dense_laplacian();
        let lx = g.laplacian_apply(&x);
        for i in 0..4 {
            let expect: f64 = (0..4).map(|j| dense[i][j] * x[j]).sum();
            assert!((expect - lx[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn knn_examples() {
        let pts = vec![vec![0.0], vec![1.0], vec![3.0]];
        let g = knn_hypergraph(&pts, 1).unwrap();
        assert_eq!(g.edges(), &[vec![0, 1], vec![1, 2]]);
        assert_eq!(g.weights(), &[2.0, 1.0]);

        let pts: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64, (i * i) as f64]).collect();
        let g = knn_hypergraph(&pts, 4).unwrap();
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.weights(), &[5.0]);

        // equidistant neighbours resolve to the lower index
        let pts = vec![vec![0.0], vec![-1.0], vec![1.0]];
        assert_eq!(knn_neighbors(&pts, 1).unwrap()[0], vec![1]);
        let dup = vec![vec![0.0], vec![0.0], vec![0.0]];
        assert_eq!(knn_neighbors(&dup, 1).unwrap(), vec![vec![1], vec![0], vec![0]]);

        assert!(knn_neighbors(&pts, 3).is_err());
        assert!(knn_neighbors(&pts, 0).is_err());
    }

    #[test]
    fn knn_graph_merges_mutual_pairs() {
        let pts = vec![vec![0.0], vec![1.0], vec![3.0]];
        let g = knn_graph(&pts, 1).unwrap();
        assert_eq!(g.edges(), &[vec![0, 1], vec![1, 2]]);
        assert_eq!(g.weights(), &[2.0, 1.0]);
    }

    #[test]
    fn vertex_vector_rejects_non_finite() {
        assert_eq!(VertexVector::new(vec![1.0, f64::INFINITY]), Err(Error::NonFinite { index: 1 }));
        assert!(VertexVector::new(vec![1.0, 2.0]).is_ok());
    }
}
