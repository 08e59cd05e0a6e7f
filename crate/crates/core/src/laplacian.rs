//! Subgradient oracles for the hypergraph Laplacian `L(x) = dU(x)`.
//!
//! Every element of `L(x)` has the form `z = sum_h w_h f_h(x) y_h` where
//! `f_h(x) = min_u ||x_h - u 1||_h` and `y_h` maximizes `<y, x_h>` over the
//! dual unit ball intersected with `1^perp`. The maximizers of each hyperedge
//! form a face of a polytope (or a single point for l2), and the oracles here
//! pick elements of the product of those faces.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexVector};
use crate::potentials::{descending_order, min_max, tie_tolerance, EdgeNorm, PotentialModel};

/// How `any_subgradient` picks a witness on l-infinity hyperedges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WitnessRule {
    /// Unit mass on the lowest-index argmax and argmin vertices.
    #[default]
    LowestIndex,
    /// Mass spread uniformly over the argmax and argmin sets.
    Balanced,
}

/// A subgradient `z` together with the per-hyperedge dual witnesses proving
/// membership in `L(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubgradientCertificate {
    pub z: VertexVector,
    /// `y_h`, in the coordinate order of the hyperedge's vertex list.
    pub witnesses: Vec<Vec<f64>>,
    /// `f_h = min_u ||x_h - u 1||_h`.
    pub edge_values: Vec<f64>,
}

/// Residuals of the certificate invariants, see
/// [`SubgradientCertificate::check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateCheck {
    /// `max_h |<y_h, 1>|`.
    pub max_orthogonality: f64,
    /// `max_h ||y_h||_{h,*}`.
    pub max_dual_norm: f64,
    /// Largest entrywise difference between `z` and the re-scattered sum.
    pub scatter_error: f64,
    /// `<x, z>`.
    pub inner_product: f64,
    /// `2 U(x)`.
    pub twice_potential: f64,
}

impl CertificateCheck {
    pub fn is_valid(&self, tol: f64) -> bool {
        let scale = 1.0 + self.twice_potential.abs();
        self.max_orthogonality <= 1e-12
            && self.max_dual_norm <= 1.0 + 1e-9
            && self.scatter_error <= 1e-12 * (1.0 + self.inner_product.abs())
            && (self.inner_product - self.twice_potential).abs() <= tol * scale
    }
}

impl SubgradientCertificate {
    /// Recomputes every certificate invariant from scratch.
    pub fn check(&self, model: &PotentialModel, x: &[f64]) -> CertificateCheck {
        let graph = model.graph();
        let mut max_orthogonality = 0.0f64;
        let mut max_dual_norm = 0.0f64;
        let mut rebuilt = vec![0.0; graph.num_vertices()];
        for (e, y) in self.witnesses.iter().enumerate() {
            max_orthogonality = max_orthogonality.max(y.iter().sum::<f64>().abs());
            max_dual_norm = max_dual_norm.max(dual_norm(model.norm(e), y));
            let c = graph.weight(e) * self.edge_values[e];
            for (&v, &yv) in graph.edge(e).iter().zip(y) {
                rebuilt[v] += c * yv;
            }
        }
        let scatter_error = rebuilt
            .iter()
            .zip(self.z.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        CertificateCheck {
            max_orthogonality,
            max_dual_norm,
            scatter_error,
            inner_product: x.iter().zip(self.z.iter()).map(|(a, b)| a * b).sum(),
            twice_potential: 2.0 * model.potential(x),
        }
    }
}

/// `||y||_{h,*}` for `y` orthogonal to the ones vector.
pub fn dual_norm(norm: &EdgeNorm, y: &[f64]) -> f64 {
    match norm {
        EdgeNorm::LInf => y.iter().map(|v| v.abs()).sum(),
        EdgeNorm::L2 => y.iter().map(|v| v * v).sum::<f64>().sqrt(),
        EdgeNorm::Lovasz(l) => {
            // gauge of scale * B(delta): max_S y(S) / (scale * delta(S))
            let k = y.len();
            let mut worst = 0.0f64;
            for mask in 1..(1usize << k) - 1 {
                let ys: f64 = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| y[i]).sum();
                let cap = l.scale() * l.cut().value(mask);
                if cap > 0.0 {
                    worst = worst.max(ys / cap);
                } else if ys > 1e-15 {
                    return f64::INFINITY;
                }
            }
            worst
        }
    }
}

/// A deterministic element of `L(x)`.
pub fn any_subgradient(model: &PotentialModel, x: &[f64]) -> Result<SubgradientCertificate> {
    any_subgradient_with(model, x, WitnessRule::LowestIndex)
}

pub fn any_subgradient_with(
    model: &PotentialModel,
    x: &[f64],
    rule: WitnessRule,
) -> Result<SubgradientCertificate> {
    model.graph().check_vector(x)?;
    let faces = build_faces(model, x);
    let witnesses: Vec<Vec<f64>> = faces
        .iter()
        .zip(model.graph().edges())
        .map(|(face, edge)| face.witness(edge.len(), rule))
        .collect();
    let edge_values = faces.iter().map(|f| f.value).collect();
    let z = scatter(model.graph(), &faces, &witnesses);
    Ok(SubgradientCertificate {
        z: VertexVector::from_vec_unchecked(z),
        witnesses,
        edge_values,
    })
}

/// Frank-Wolfe controls for the minimum-norm oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinNormOptions {
    /// Stop once the duality gap is at most `tol * (1 + ||z||_{D^-1}^2)`.
    pub tol: f64,
    /// Maximum number of sweeps over the hyperedges.
    pub max_sweeps: usize,
}

impl Default for MinNormOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_sweeps: 20_000,
        }
    }
}

impl MinNormOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

/// Output of the minimum `D^-1`-norm subgradient oracle.
#[derive(Debug, Clone)]
pub struct MinNormResult {
    pub certificate: SubgradientCertificate,
    /// Frank-Wolfe duality gap at the returned point.
    pub dual_gap: f64,
    /// Sweeps over the hyperedges.
    pub iterations: usize,
    pub(crate) state: FaceState,
}

impl MinNormResult {
    pub fn z(&self) -> &VertexVector {
        &self.certificate.z
    }

    /// Face weights of the solution, usable as a warm start at a nearby point.
    pub fn warm_start(&self) -> &FaceState {
        &self.state
    }
}

/// `L^D(x) = argmin_{z in L(x)} ||z||_{D^-1}`.
pub fn min_norm_subgradient(model: &PotentialModel, x: &[f64], tol: f64) -> Result<MinNormResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    nearest_subgradient(model, x, None, &MinNormOptions::with_tol(tol), None)
}

/// `argmin_{z in L(x)} ||z - target||_{D^-1}`; with no target this is the
/// minimum-norm subgradient.
///
/// Solved by block-pairwise Frank-Wolfe over the product of hyperedge faces:
/// each sweep visits every hyperedge, calls its linear minimization oracle on
/// the gradient `D^-1 (z - target)` and moves weight from the worst active
/// atom to the oracle's atom with an exact line search.
pub fn nearest_subgradient(
    model: &PotentialModel,
    x: &[f64],
    target: Option<&[f64]>,
    options: &MinNormOptions,
    warm: Option<&FaceState>,
) -> Result<MinNormResult> {
    let graph = model.graph();
    graph.check_vector(x)?;
    if let Some(t) = target {
        graph.check_vector(t)?;
    }
    let mut faces = build_faces(model, x);
    if let Some(warm) = warm {
        for (face, old) in faces.iter_mut().zip(&warm.faces) {
            face.adopt(old);
        }
    }
    let inv_deg: Vec<f64> = graph
        .degrees()
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d } else { 0.0 })
        .collect();
    let witnesses: Vec<Vec<f64>> = faces
        .iter()
        .zip(graph.edges())
        .map(|(f, e)| f.current(e.len()))
        .collect();
    let mut z = scatter(graph, &faces, &witnesses);
    let free = faces.iter().any(|f| f.is_free());

    let mut iterations = 0;
    let mut gap = 0.0;
    if free {
        loop {
            let grad = gradient(&z, target, &inv_deg);
            gap = total_gap(graph, &faces, &grad);
            let znorm = graph.d_inv_norm_sq(&z);
            if gap <= options.tol * (1.0 + znorm) {
                break;
            }
            if iterations >= options.max_sweeps {
                let witnesses = faces
                    .iter()
                    .zip(graph.edges())
                    .map(|(f, e)| f.current(e.len()))
                    .collect::<Vec<_>>();
                return Err(Error::ToleranceNotReached {
                    iterations,
                    gap,
                    best: scatter(graph, &faces, &witnesses),
                });
            }
            for (e, face) in faces.iter_mut().enumerate() {
                if face.is_free() {
                    face.pairwise_step(graph.weight(e), graph.edge(e), &mut z, target, &inv_deg);
                }
            }
            iterations += 1;
        }
    }

    let witnesses: Vec<Vec<f64>> = faces
        .iter()
        .zip(graph.edges())
        .map(|(f, e)| f.current(e.len()))
        .collect();
    let z = scatter(graph, &faces, &witnesses);
    if free {
        gap = total_gap(graph, &faces, &gradient(&z, target, &inv_deg));
    }
    Ok(MinNormResult {
        certificate: SubgradientCertificate {
            z: VertexVector::from_vec_unchecked(z),
            witnesses,
            edge_values: faces.iter().map(|f| f.value).collect(),
        },
        dual_gap: gap.max(0.0),
        iterations,
        state: FaceState { faces },
    })
}

fn gradient(z: &[f64], target: Option<&[f64]>, inv_deg: &[f64]) -> Vec<f64> {
    match target {
        Some(t) => z.iter().zip(t).zip(inv_deg).map(|((a, b), d)| (a - b) * d).collect(),
        None => z.iter().zip(inv_deg).map(|(a, d)| a * d).collect(),
    }
}

const PARALLEL_EDGE_THRESHOLD: usize = 4096;

fn total_gap(graph: &Hypergraph, faces: &[Face], grad: &[f64]) -> f64 {
    let edge_gap = |(e, face): (usize, &Face)| face.gap(graph.weight(e), graph.edge(e), grad);
    // per-edge gaps are collected in edge order and summed sequentially, so the
    // result does not depend on the thread count
    let gaps: Vec<f64> = if faces.len() >= PARALLEL_EDGE_THRESHOLD {
        faces.par_iter().enumerate().map(edge_gap).collect()
    } else {
        faces.iter().enumerate().map(edge_gap).collect()
    };
    gaps.iter().sum()
}

fn scatter(graph: &Hypergraph, faces: &[Face], witnesses: &[Vec<f64>]) -> Vec<f64> {
    let mut z = vec![0.0; graph.num_vertices()];
    for (e, (face, y)) in faces.iter().zip(witnesses).enumerate() {
        let c = graph.weight(e) * face.value;
        if c == 0.0 {
            continue;
        }
        for (&v, &yv) in graph.edge(e).iter().zip(y) {
            z[v] += c * yv;
        }
    }
    z
}

/// Opaque per-hyperedge face weights carried between oracle calls.
#[derive(Debug, Clone, Default)]
pub struct FaceState {
    faces: Vec<Face>,
}

#[derive(Debug, Clone)]
struct Face {
    /// `f_h(x)`.
    value: f64,
    kind: FaceKind,
}

#[derive(Debug, Clone)]
enum FaceKind {
    /// `f_h = 0`: the hyperedge contributes nothing.
    Zero,
    /// The face is a single point (l2 hyperedges).
    Fixed(Vec<f64>),
    /// `y = (sum p_a e_top[a] - sum q_b e_bottom[b]) / 2`, p and q in simplices.
    LInf {
        top: Vec<usize>,
        bottom: Vec<usize>,
        p: Vec<f64>,
        q: Vec<f64>,
    },
    /// Convex combination of scaled greedy vertices for orders that respect
    /// the tie groups of `x_h`.
    Lovasz {
        cut: std::sync::Arc<crate::potentials::LovaszNorm>,
        groups: Vec<Vec<usize>>,
        atoms: Vec<Atom>,
    },
}

#[derive(Debug, Clone)]
struct Atom {
    order: Vec<usize>,
    y: Vec<f64>,
    weight: f64,
}

fn build_faces(model: &PotentialModel, x: &[f64]) -> Vec<Face> {
    (0..model.graph().num_edges())
        .map(|e| Face::new(model.norm(e), &model.restrict(e, x)))
        .collect()
}

impl Face {
    fn new(norm: &EdgeNorm, x_h: &[f64]) -> Self {
        let eps = tie_tolerance(x_h);
        let (lo, hi) = min_max(x_h);
        if hi - lo <= eps {
            return Face {
                value: 0.0,
                kind: FaceKind::Zero,
            };
        }
        match norm {
            EdgeNorm::LInf => {
                let top: Vec<usize> = (0..x_h.len()).filter(|&i| x_h[i] >= hi - eps).collect();
                let bottom: Vec<usize> = (0..x_h.len()).filter(|&i| x_h[i] <= lo + eps).collect();
                let p = vec![1.0 / top.len() as f64; top.len()];
                let q = vec![1.0 / bottom.len() as f64; bottom.len()];
                Face {
                    value: (hi - lo) / 2.0,
                    kind: FaceKind::LInf { top, bottom, p, q },
                }
            }
            EdgeNorm::L2 => {
                let mean = x_h.iter().sum::<f64>() / x_h.len() as f64;
                let centered: Vec<f64> = x_h.iter().map(|v| v - mean).collect();
                let value = centered.iter().map(|v| v * v).sum::<f64>().sqrt();
                let y = centered.iter().map(|v| v / value).collect();
                Face {
                    value,
                    kind: FaceKind::Fixed(y),
                }
            }
            EdgeNorm::Lovasz(l) => {
                let value = (l.scale() * l.cut().lovasz(x_h)).max(0.0);
                if value == 0.0 {
                    return Face {
                        value,
                        kind: FaceKind::Zero,
                    };
                }
                let order = descending_order(x_h);
                let mut groups: Vec<Vec<usize>> = Vec::new();
                for &v in &order {
                    match groups.last_mut() {
                        Some(g) if x_h[g[0]] - x_h[v] <= eps => g.push(v),
                        _ => groups.push(vec![v]),
                    }
                }
                let y = scaled_greedy(l, &order);
                Face {
                    value,
                    kind: FaceKind::Lovasz {
                        cut: l.clone(),
                        groups,
                        atoms: vec![Atom {
                            order,
                            y,
                            weight: 1.0,
                        }],
                    },
                }
            }
        }
    }

    fn is_free(&self) -> bool {
        match &self.kind {
            FaceKind::Zero | FaceKind::Fixed(_) => false,
            FaceKind::LInf { top, bottom, .. } => top.len() > 1 || bottom.len() > 1,
            FaceKind::Lovasz { groups, .. } => groups.iter().any(|g| g.len() > 1),
        }
    }

    /// Reuses weights from a previous face when the face itself is unchanged.
    fn adopt(&mut self, old: &Face) {
        match (&mut self.kind, &old.kind) {
            (
                FaceKind::LInf { top, bottom, p, q },
                FaceKind::LInf {
                    top: t0,
                    bottom: b0,
                    p: p0,
                    q: q0,
                },
            ) => {
                if top == t0 {
                    p.clone_from(p0);
                }
                if bottom == b0 {
                    q.clone_from(q0);
                }
            }
            (
                FaceKind::Lovasz { groups, atoms, .. },
                FaceKind::Lovasz {
                    groups: g0,
                    atoms: a0,
                    ..
                },
            ) => {
                if groups == g0 {
                    atoms.clone_from(a0);
                }
            }
            _ => {}
        }
    }

    /// The current witness `y_h`.
    fn current(&self, k: usize) -> Vec<f64> {
        match &self.kind {
            FaceKind::Zero => vec![0.0; k],
            FaceKind::Fixed(y) => y.clone(),
            FaceKind::LInf { top, bottom, p, q } => {
                let mut y = vec![0.0; k];
                for (&i, &pi) in top.iter().zip(p) {
                    y[i] += 0.5 * pi;
                }
                for (&i, &qi) in bottom.iter().zip(q) {
                    y[i] -= 0.5 * qi;
                }
                y
            }
            FaceKind::Lovasz { atoms, .. } => {
                let mut y = vec![0.0; k];
                for atom in atoms {
                    for (acc, v) in y.iter_mut().zip(&atom.y) {
                        *acc += atom.weight * v;
                    }
                }
                y
            }
        }
    }

    fn witness(&self, k: usize, rule: WitnessRule) -> Vec<f64> {
        match (&self.kind, rule) {
            (FaceKind::LInf { top, bottom, .. }, WitnessRule::LowestIndex) => {
                let mut y = vec![0.0; k];
                y[top[0]] += 0.5;
                y[bottom[0]] -= 0.5;
                y
            }
            _ => self.current(k),
        }
    }

    /// `c_h (<g_h, y_h> - min_{s in face} <g_h, s>)`.
    fn gap(&self, weight: f64, edge: &[usize], grad: &[f64]) -> f64 {
        let c = weight * self.value;
        match &self.kind {
            FaceKind::Zero | FaceKind::Fixed(_) => 0.0,
            FaceKind::LInf { top, bottom, p, q } => {
                let g = |i: usize| grad[edge[i]];
                let top_cur: f64 = top.iter().zip(p).map(|(&i, pi)| pi * g(i)).sum();
                let top_min = top.iter().map(|&i| g(i)).fold(f64::INFINITY, f64::min);
                let bot_cur: f64 = bottom.iter().zip(q).map(|(&i, qi)| qi * g(i)).sum();
                let bot_max = bottom.iter().map(|&i| g(i)).fold(f64::NEG_INFINITY, f64::max);
                0.5 * c * ((top_cur - top_min) + (bot_max - bot_cur))
            }
            FaceKind::Lovasz {
                cut, groups, atoms, ..
            } => {
                let g: Vec<f64> = edge.iter().map(|&v| grad[v]).collect();
                let best = scaled_greedy(cut, &lmo_order(groups, &g));
                let cur: f64 = atoms
                    .iter()
                    .map(|a| a.weight * dot(&a.y, &g))
                    .sum();
                c * (cur - dot(&best, &g))
            }
        }
    }

    /// One pairwise Frank-Wolfe step on this hyperedge with exact line
    /// search, updating `z` in place.
    fn pairwise_step(
        &mut self,
        weight: f64,
        edge: &[usize],
        z: &mut [f64],
        target: Option<&[f64]>,
        inv_deg: &[f64],
    ) {
        let c = weight * self.value;
        let grad = |z: &[f64], v: usize| match target {
            Some(t) => (z[v] - t[v]) * inv_deg[v],
            None => z[v] * inv_deg[v],
        };
        match &mut self.kind {
            FaceKind::LInf { top, bottom, p, q } => {
                let half = 0.5 * c;
                // top block: mass moves toward the smallest gradient
                simplex_step(top, p, edge, z, inv_deg, half, |z, v| grad(z, v));
                // bottom block enters with a minus sign: mass moves toward the
                // largest gradient
                simplex_step(bottom, q, edge, z, inv_deg, -half, |z, v| -grad(z, v));
            }
            FaceKind::Lovasz {
                cut, groups, atoms, ..
            } => {
                let g: Vec<f64> = edge.iter().map(|&v| grad(z, v)).collect();
                let fw_order = lmo_order(groups, &g);
                let away = atoms
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (i, dot(&a.y, &g)))
                    .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
                    .map(|(i, _)| i)
                    .expect("lovasz face has an active atom");
                if atoms[away].order == fw_order {
                    return;
                }
                let fw_y = scaled_greedy(cut, &fw_order);
                let d: Vec<f64> = fw_y.iter().zip(&atoms[away].y).map(|(a, b)| a - b).collect();
                let slope = dot(&d, &g);
                if slope >= 0.0 {
                    return;
                }
                let curvature: f64 = d
                    .iter()
                    .zip(edge)
                    .map(|(di, &v)| di * di * inv_deg[v])
                    .sum::<f64>()
                    * c;
                if curvature <= 0.0 {
                    return;
                }
                let gamma = (-slope / curvature).min(atoms[away].weight);
                if gamma <= 0.0 {
                    return;
                }
                for (&v, di) in edge.iter().zip(&d) {
                    z[v] += c * gamma * di;
                }
                atoms[away].weight -= gamma;
                match atoms.iter().position(|a| a.order == fw_order) {
                    Some(i) => atoms[i].weight += gamma,
                    None => atoms.push(Atom {
                        order: fw_order,
                        y: fw_y,
                        weight: gamma,
                    }),
                }
                atoms.retain(|a| a.weight > 0.0);
            }
            FaceKind::Zero | FaceKind::Fixed(_) => {}
        }
    }
}

/// Pairwise step on one simplex block whose vertex `i` contributes
/// `coef * e_{edge[i]}` to `z`. `signed_grad` is the gradient seen by the
/// block (already multiplied by the sign of `coef`).
fn simplex_step(
    set: &[usize],
    mass: &mut [f64],
    edge: &[usize],
    z: &mut [f64],
    inv_deg: &[f64],
    coef: f64,
    signed_grad: impl Fn(&[f64], usize) -> f64,
) {
    if set.len() < 2 {
        return;
    }
    let mut to = 0;
    let mut from = usize::MAX;
    let mut g_to = f64::INFINITY;
    let mut g_from = f64::NEG_INFINITY;
    for (a, &i) in set.iter().enumerate() {
        let g = signed_grad(z, edge[i]);
        if g < g_to {
            g_to = g;
            to = a;
        }
        if mass[a] > 0.0 && g > g_from {
            g_from = g;
            from = a;
        }
    }
    if from == usize::MAX || from == to || g_from <= g_to {
        return;
    }
    let (vf, vt) = (edge[set[from]], edge[set[to]]);
    let curvature = coef.abs() * (inv_deg[vf] + inv_deg[vt]);
    let delta = ((g_from - g_to) / curvature).min(mass[from]);
    if !(delta > 0.0) {
        return;
    }
    mass[from] -= delta;
    mass[to] += delta;
    z[vf] -= coef * delta;
    z[vt] += coef * delta;
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn scaled_greedy(norm: &crate::potentials::LovaszNorm, order: &[usize]) -> Vec<f64> {
    let s = norm.scale();
    norm.cut().greedy_vertex(order).into_iter().map(|v| s * v).collect()
}

/// Order minimizing `<g, y>` over the face: tie groups in decreasing `x`
/// order, increasing `g` inside each group.
fn lmo_order(groups: &[Vec<usize>], g: &[f64]) -> Vec<usize> {
    let mut order = Vec::with_capacity(g.len());
    for group in groups {
        let mut grp = group.clone();
        grp.sort_by(|&a, &b| g[a].total_cmp(&g[b]).then(a.cmp(&b)));
        order.extend(grp);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::CutFunction;

    fn single_edge(norm: EdgeNorm, w: f64) -> PotentialModel {
        let g = Hypergraph::build(4, [(vec![0, 1, 2, 3], w)]).unwrap();
        PotentialModel::uniform(g, norm).unwrap()
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    const FIG1: [f64; 4] = [-1.0, -1.0, 1.0, 2.0];

    #[test]
    fn single_hyperedge_min_norm() {
        for w in [1.0, 2.5] {
            let r = min_norm_subgradient(&single_edge(EdgeNorm::LInf, w), &FIG1, 1e-12).unwrap();
            let expect: Vec<f64> = [-0.375, -0.375, 0.0, 0.75].iter().map(|v| v * w).collect();
            assert_close(r.z(), &expect, 1e-10);
            assert!(r.dual_gap <= 1e-12 * (1.0 + w * w));
        }
    }

    #[test]
    fn single_hyperedge_witness_rules() {
        let m = single_edge(EdgeNorm::LInf, 1.0);
        let bal = any_subgradient_with(&m, &FIG1, WitnessRule::Balanced).unwrap();
        assert_close(&bal.z, &[-0.375, -0.375, 0.0, 0.75], 1e-15);
        let low = any_subgradient(&m, &FIG1).unwrap();
        assert_close(&low.z, &[-0.75, 0.0, 0.0, 0.75], 1e-15);
        for c in [&bal, &low] {
            assert!(c.check(&m, &FIG1).is_valid(1e-12));
        }
    }

    #[test]
    fn lovasz_standard_cut_matches_scaled_linf_face() {
        // the standard cut's base polytope is conv(e_i - e_j), scale 1/sqrt(6) at k = 4
        let m = single_edge(EdgeNorm::lovasz(CutFunction::standard(4).unwrap()), 1.0);
        let r = min_norm_subgradient(&m, &FIG1, 1e-14).unwrap();
        assert_close(r.z(), &[-0.25, -0.25, 0.0, 0.5], 1e-7);
        assert!(r.certificate.check(&m, &FIG1).is_valid(1e-9));
    }

    #[test]
    fn l2_graph_is_half_laplacian() {
        let g = Hypergraph::build(4, [([0, 1], 1.0), ([1, 2], 2.0), ([2, 3], 0.5), ([0, 3], 1.5)]).unwrap();
        let m = PotentialModel::uniform(g.clone(), EdgeNorm::L2).unwrap();
        let x = [0.3, -1.2, 2.0, 0.7];
        let half: Vec<f64> = g.laplacian_apply(&x).iter().map(|v| 0.5 * v).collect();
        assert_close(&any_subgradient(&m, &x).unwrap().z, &half, 1e-12);
        let r = min_norm_subgradient(&m, &x, 1e-8).unwrap();
        assert_close(r.z(), &half, 1e-12);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn constant_vector_gives_zero() {
        let m = single_edge(EdgeNorm::LInf, 1.0);
        let r = min_norm_subgradient(&m, &[2.0; 4], 1e-8).unwrap();
        assert_eq!(r.z().as_slice(), &[0.0; 4]);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn nearest_subgradient_tracks_target() {
        // target inside the face of x = FIG1 is its own nearest point
        let m = single_edge(EdgeNorm::LInf, 1.0);
        let target = [-0.6, -0.15, 0.0, 0.75];
        let r = nearest_subgradient(&m, &FIG1, Some(&target), &MinNormOptions::with_tol(1e-14), None).unwrap();
        assert_close(r.z(), &target, 1e-6);
    }

    #[test]
    fn warm_start_reaches_same_point() {
        let g = Hypergraph::build(5, [(vec![0, 1, 2], 1.0), (vec![1, 2, 3, 4], 2.0)]).unwrap();
        let m = PotentialModel::uniform(g, EdgeNorm::LInf).unwrap();
        let x = [1.0, 1.0, 0.0, 0.0, 0.0];
        let cold = min_norm_subgradient(&m, &x, 1e-14).unwrap();
        let warm = nearest_subgradient(&m, &x, None, &MinNormOptions::with_tol(1e-14), Some(cold.warm_start())).unwrap();
        assert_close(cold.z(), warm.z(), 1e-6);
        assert!(warm.iterations <= cold.iterations);
    }

    #[test]
    fn sweep_limit_reports_best_iterate() {
        let g = Hypergraph::build(5, [(vec![0, 1, 2], 1.0), (vec![1, 2, 3, 4], 2.0)]).unwrap();
        let m = PotentialModel::uniform(g, EdgeNorm::LInf).unwrap();
        let opts = MinNormOptions { tol: 1e-300, max_sweeps: 1 };
        match nearest_subgradient(&m, &[1.0, 1.0, 0.0, 0.0, 0.0], None, &opts, None) {
            Err(Error::ToleranceNotReached { iterations, best, .. }) => {
                assert_eq!(iterations, 1);
                assert_eq!(best.len(), 5);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dual_norms() {
        assert_eq!(dual_norm(&EdgeNorm::LInf, &[0.5, -0.25, -0.25]), 1.0);
        assert_eq!(dual_norm(&EdgeNorm::L2, &[0.6, -0.8]), 1.0);
        let lov = EdgeNorm::lovasz(CutFunction::standard(2).unwrap());
        // scale 1/2 at k = 2, B(delta) = [-1, 1] (e_0 - e_1)
        assert!((dual_norm(&lov, &[0.25, -0.25]) - 0.5).abs() < 1e-15);
    }
}
