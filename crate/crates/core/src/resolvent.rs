//! Resolvents `R_lambda(s) = argmin_x U(x) + lambda/2 ||x||_D^2 - <s, x>`
//! computed by mirror descent with a quadratic prox-generating function.

use std::fmt;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexVector};
use crate::laplacian::{
    any_subgradient, nearest_subgradient, FaceState, MinNormOptions, SubgradientCertificate,
};
use crate::potentials::{EdgeNorm, PotentialModel};

/// Early-stopping threshold on `||x_t - x_{t-1}||_R^2`.
pub const EARLY_STOP_THRESHOLD: f64 = 1e-6;

/// A symmetric positive-definite operator `R` with constants
/// `l_R <= F(x) / (1/2 ||x||_R^2) <= u_R` for the objective it is paired with.
pub trait ProxOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, v: &[f64]) -> Vec<f64>;
    fn inverse_apply(&self, v: &[f64]) -> Vec<f64>;
    fn lower(&self) -> f64;
    fn upper(&self) -> f64;

    fn norm_sq(&self, v: &[f64]) -> f64 {
        self.apply(v).iter().zip(v).map(|(a, b)| a * b).sum()
    }
}

/// `R = diag(d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalProx {
    diag: Vec<f64>,
    lower: f64,
    upper: f64,
}

impl DiagonalProx {
    pub fn new(diag: Vec<f64>, lower: f64, upper: f64) -> Result<Self> {
        if let Some(i) = diag.iter().position(|d| !(d.is_finite() && *d > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "prox diagonal entry {i} must be positive, got {}",
                diag[i]
            )));
        }
        check_constants(lower, upper)?;
        Ok(Self { diag, lower, upper })
    }

    pub fn identity(n: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![1.0; n], lower, upper)
    }
}

impl ProxOperator for DiagonalProx {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        v.iter().zip(&self.diag).map(|(a, d)| a * d).collect()
    }

    fn inverse_apply(&self, v: &[f64]) -> Vec<f64> {
        v.iter().zip(&self.diag).map(|(a, d)| a / d).collect()
    }

    fn lower(&self) -> f64 {
        self.lower
    }

    fn upper(&self) -> f64 {
        self.upper
    }
}

/// `R = L_clique + shift * D`, inverted by preconditioned conjugate gradient.
#[derive(Debug, Clone)]
pub struct CliqueProx {
    graph: Hypergraph,
    shift_diag: Vec<f64>,
    jacobi: Vec<f64>,
    lower: f64,
    upper: f64,
}

impl CliqueProx {
    /// `graph` supplies the clique expansion; `degrees` the diagonal `D`.
    pub fn new(graph: &Hypergraph, shift: f64, lower: f64, upper: f64) -> Result<Self> {
        if !(shift > 0.0 && shift.is_finite()) {
            return Err(Error::InvalidParameter(format!("clique prox shift must be positive, got {shift}")));
        }
        if graph.degrees().iter().any(|&d| d <= 0.0) {
            return Err(Error::InvalidParameter("clique prox needs every vertex covered".into()));
        }
        check_constants(lower, upper)?;
        let shift_diag: Vec<f64> = graph.degrees().iter().map(|d| shift * d).collect();
        let mut lap_diag = vec![0.0; graph.num_vertices()];
        for (edge, &w) in graph.edges().iter().zip(graph.weights()) {
            for &v in edge {
                lap_diag[v] += w * (edge.len() - 1) as f64;
            }
        }
        let jacobi = lap_diag.iter().zip(&shift_diag).map(|(a, b)| 1.0 / (a + b)).collect();
        Ok(Self {
            graph: graph.clone(),
            shift_diag,
            jacobi,
            lower,
            upper,
        })
    }
}

impl ProxOperator for CliqueProx {
    fn dim(&self) -> usize {
        self.shift_diag.len()
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = self.graph.laplacian_apply(v);
        for ((o, d), x) in out.iter_mut().zip(&self.shift_diag).zip(v) {
            *o += d * x;
        }
        out
    }

    fn inverse_apply(&self, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let b_norm = dot(b, b).sqrt();
        let mut x = vec![0.0; n];
        if b_norm == 0.0 {
            return x;
        }
        let mut r = b.to_vec();
        let mut z: Vec<f64> = r.iter().zip(&self.jacobi).map(|(a, m)| a * m).collect();
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        for _ in 0..10 * n + 100 {
            let ap = self.apply(&p);
            let alpha = rz / dot(&p, &ap);
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            if dot(&r, &r).sqrt() <= 1e-14 * b_norm {
                break;
            }
            z = r.iter().zip(&self.jacobi).map(|(a, m)| a * m).collect();
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        x
    }

    fn lower(&self) -> f64 {
        self.lower
    }

    fn upper(&self) -> f64 {
        self.upper
    }
}

fn check_constants(lower: f64, upper: f64) -> Result<()> {
    if !(lower > 0.0 && upper >= lower && upper.is_finite()) {
        return Err(Error::NonpositiveConstants { lower, upper });
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A convex function `F` with a subgradient oracle.
pub trait ConvexObjective {
    fn value(&self, x: &[f64]) -> f64;
    /// Any element of `dF(x)`. Takes `&mut self` so oracles can keep warm
    /// starts between calls.
    fn subgradient(&mut self, x: &[f64]) -> Result<Vec<f64>>;
}

/// Mirror-descent controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmdOptions {
    pub epsilon: f64,
    /// Overrides the default budget `ceil(4 u_R / (l_R eps^2))`.
    pub iterations: Option<usize>,
    /// Stop once `||x_t - x_{t-1}||_R^2 < EARLY_STOP_THRESHOLD`.
    pub early_stop: bool,
    /// Record the objective of both outputs after every iteration.
    pub history: bool,
}

impl OmdOptions {
    pub fn new(epsilon: f64) -> Self {
        Self {
            epsilon,
            iterations: None,
            early_stop: false,
            history: false,
        }
    }
}

/// Both outputs of one mirror-descent run.
#[derive(Debug, Clone, PartialEq)]
pub struct OmdOutput {
    /// `(1 - eps/2)` times the average of the `x_hat_t`.
    pub averaged: Vec<f64>,
    /// The last `x_hat_t`, unscaled.
    pub last: Vec<f64>,
    pub iterations: usize,
    pub eta: f64,
    pub stopped_early: bool,
    /// `F(x) - <s, x>` of the averaged output after each iteration.
    pub averaged_history: Vec<f64>,
    /// `F(x) - <s, x>` of `x_hat_t` after each iteration.
    pub last_history: Vec<f64>,
}

/// Default iteration budget `ceil(4 u / (l eps^2))`.
pub fn default_iterations(lower: f64, upper: f64, epsilon: f64) -> usize {
    (4.0 * upper / (lower * epsilon * epsilon)).ceil() as usize
}

/// Approximately minimizes `F(x) - <s, x>` for a squared norm `F`.
pub fn omd_minimize<F: ConvexObjective + ?Sized>(
    objective: &mut F,
    s: &[f64],
    prox: &dyn ProxOperator,
    options: &OmdOptions,
) -> Result<OmdOutput> {
    let eps = options.epsilon;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidEpsilon(eps));
    }
    check_constants(prox.lower(), prox.upper())?;
    if s.len() != prox.dim() {
        return Err(Error::LengthMismatch {
            expected: prox.dim(),
            got: s.len(),
        });
    }
    let n = s.len();
    let eta = eps / (2.0 * prox.upper());
    let budget = options
        .iterations
        .unwrap_or_else(|| default_iterations(prox.lower(), prox.upper(), eps));
    let shrink = 1.0 - eps / 2.0;
    let drift: Vec<f64> = prox.inverse_apply(s).iter().map(|v| eta * v).collect();
    let eval = |x: &[f64], obj: &F| obj.value(x) - dot(s, x);

    let mut x = vec![0.0; n];
    let mut x_hat = vec![0.0; n];
    let mut sum = vec![0.0; n];
    let mut averaged_history = Vec::new();
    let mut last_history = Vec::new();
    let mut iterations = 0;
    let mut stopped_early = false;
    while iterations < budget {
        for i in 0..n {
            x_hat[i] = x[i] + drift[i];
        }
        let z = objective.subgradient(&x_hat)?;
        let step = prox.inverse_apply(&z);
        let next: Vec<f64> = x_hat.iter().zip(&step).map(|(a, b)| a - eta * b).collect();
        for i in 0..n {
            sum[i] += x_hat[i];
        }
        iterations += 1;
        if options.history {
            let avg: Vec<f64> = sum.iter().map(|v| shrink * v / iterations as f64).collect();
            averaged_history.push(eval(&avg, objective));
            last_history.push(eval(&x_hat, objective));
        }
        if options.early_stop {
            let delta: Vec<f64> = next.iter().zip(&x).map(|(a, b)| a - b).collect();
            if prox.norm_sq(&delta) < EARLY_STOP_THRESHOLD {
                stopped_early = true;
                break;
            }
        }
        x = next;
    }
    let averaged = if iterations == 0 {
        vec![0.0; n]
    } else {
        sum.iter().map(|v| shrink * v / iterations as f64).collect()
    };
    Ok(OmdOutput {
        averaged,
        last: x_hat,
        iterations,
        eta,
        stopped_early,
        averaged_history,
        last_history,
    })
}

/// Which element of `L(x)` the resolvent solver queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OracleChoice {
    #[default]
    Any,
    MinNorm,
}

/// Geometry of the mirror-descent step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProxChoice {
    /// `R = D`.
    #[default]
    Degree,
    /// `R = L_clique + eps D`; a heuristic without guarantees.
    Clique,
}

impl fmt::Display for OracleChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleChoice::Any => "any",
            OracleChoice::MinNorm => "minnorm",
        })
    }
}

impl fmt::Display for ProxChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProxChoice::Degree => "degree",
            ProxChoice::Clique => "clique",
        })
    }
}

/// `min_x U(x) + lambda/2 ||x||_D^2 - <s, x>`.
#[derive(Debug, Clone)]
pub struct ResolventProblem<'a> {
    pub model: &'a PotentialModel,
    pub lambda: f64,
    pub seed: VertexVector,
    pub epsilon: f64,
    /// Lower bound on the Poincaré constant; falls back to
    /// [`PotentialModel::lambda_lower_heuristic`] when the default iteration
    /// budget is needed.
    pub lambda_lower: Option<f64>,
    pub iterations: Option<usize>,
    pub early_stop: bool,
    pub prox: ProxChoice,
    pub oracle: OracleChoice,
    pub history: bool,
}

impl<'a> ResolventProblem<'a> {
    pub fn new(model: &'a PotentialModel, lambda: f64, seed: &[f64], epsilon: f64) -> Result<Self> {
        model.graph().check_vector(seed)?;
        Ok(Self {
            model,
            lambda,
            seed: VertexVector::from_vec_unchecked(seed.to_vec()),
            epsilon,
            lambda_lower: None,
            iterations: None,
            early_stop: false,
            prox: ProxChoice::Degree,
            oracle: OracleChoice::Any,
            history: false,
        })
    }

    /// `U(x) + lambda/2 ||x||_D^2 - <s, x>`.
    pub fn objective(&self, x: &[f64]) -> f64 {
        self.model.regularized_potential(x, self.lambda) - dot(&self.seed, x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolventSolution {
    pub x: VertexVector,
    pub objective: f64,
    pub iterations: usize,
    pub eta: f64,
    /// `l_R` used for the budget, when it was needed.
    pub lower: Option<f64>,
    pub upper: f64,
    pub stopped_early: bool,
    /// Objective of the running output after each iteration.
    pub history: Vec<f64>,
}

struct Regularized<'a> {
    model: &'a PotentialModel,
    lambda: f64,
    oracle: OracleChoice,
    warm: Option<FaceState>,
}

impl ConvexObjective for Regularized<'_> {
    fn value(&self, x: &[f64]) -> f64 {
        self.model.regularized_potential(x, self.lambda)
    }

    fn subgradient(&mut self, x: &[f64]) -> Result<Vec<f64>> {
        let mut z = match self.oracle {
            OracleChoice::Any => any_subgradient(self.model, x)?.z.into_inner(),
            OracleChoice::MinNorm => {
                match nearest_subgradient(self.model, x, None, &MinNormOptions::default(), self.warm.as_ref()) {
                    Ok(r) => {
                        let z = r.certificate.z.clone().into_inner();
                        self.warm = Some(r.state);
                        z
                    }
                    // every Frank-Wolfe iterate lies in L(x)
                    Err(Error::ToleranceNotReached { best, .. }) => best,
                    Err(e) => return Err(e),
                }
            }
        };
        for ((zi, d), xi) in z.iter_mut().zip(self.model.graph().degrees()).zip(x) {
            *zi += self.lambda * d * xi;
        }
        Ok(z)
    }
}

/// Averaged and last-iterate solutions from a single run.
pub(crate) struct SolvePair {
    pub averaged: ResolventSolution,
    pub last: ResolventSolution,
}

pub(crate) fn solve_pair(problem: &ResolventProblem) -> Result<SolvePair> {
    let model = problem.model;
    let graph = model.graph();
    let lambda = problem.lambda;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda must be non-negative, got {lambda}")));
    }
    let eps = problem.epsilon;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidEpsilon(eps));
    }
    graph.check_vector(&problem.seed)?;
    let mass: f64 = problem.seed.iter().sum();
    let vol = graph.volume();
    let tiny = 1e-12 * (1.0 + problem.seed.iter().map(|v| v.abs()).sum::<f64>());
    if lambda == 0.0 && mass.abs() > tiny {
        return Err(Error::Unbounded(mass));
    }
    if !graph.connected() {
        return Err(Error::DisconnectedGraph);
    }

    let projected: Vec<f64> = problem
        .seed
        .iter()
        .zip(graph.degrees())
        .map(|(s, d)| s - mass / vol * d)
        .collect();
    let shift = if lambda > 0.0 { mass / (lambda * vol) } else { 0.0 };
    let offset = if lambda > 0.0 { -mass * mass / (2.0 * lambda * vol) } else { 0.0 };

    let need_lower = problem.iterations.is_none();
    let lambda_lower = match (problem.lambda_lower, need_lower) {
        (Some(l), _) => Some(l),
        (None, true) => Some(model.lambda_lower_heuristic()?),
        (None, false) => None,
    };
    let any_lovasz = model.norms().iter().any(|n| matches!(n, EdgeNorm::Lovasz(_)));
    let (lower, upper) = match problem.prox {
        ProxChoice::Degree => (lambda_lower.map(|l| l + lambda), 1.0 + lambda),
        ProxChoice::Clique => {
            let r = graph.max_rank().max(2) as f64;
            let upper = if any_lovasz { (1.0 + lambda) / eps } else { 0.5 + lambda / eps };
            (lambda_lower.map(|l| (l + lambda) / (2.0 * (r - 1.0) + eps)), upper)
        }
    };
    // with a fixed budget l_R only feeds the default T, so any valid value works
    let lower_for_prox = lower.unwrap_or(upper);
    let prox: Box<dyn ProxOperator> = match problem.prox {
        ProxChoice::Degree => Box::new(DiagonalProx::new(graph.degrees().to_vec(), lower_for_prox, upper)?),
        ProxChoice::Clique => Box::new(CliqueProx::new(graph, eps, lower_for_prox, upper)?),
    };
    let mut objective = Regularized {
        model,
        lambda,
        oracle: problem.oracle,
        warm: None,
    };
    let options = OmdOptions {
        epsilon: eps,
        iterations: problem.iterations,
        early_stop: problem.early_stop,
        history: problem.history,
    };
    let out = omd_minimize(&mut objective, &projected, prox.as_ref(), &options)?;

    let finish = |x: &[f64], history: &[f64]| {
        let x: Vec<f64> = x.iter().map(|v| v + shift).collect();
        ResolventSolution {
            objective: problem.objective(&x),
            x: VertexVector::from_vec_unchecked(x),
            iterations: out.iterations,
            eta: out.eta,
            lower,
            upper,
            stopped_early: out.stopped_early,
            history: history.iter().map(|v| v + offset).collect(),
        }
    };
    Ok(SolvePair {
        averaged: finish(&out.averaged, &out.averaged_history),
        last: finish(&out.last, &out.last_history),
    })
}

/// Multiplicative `eps`-approximation of the resolvent problem's optimum.
pub fn resolvent_solve(problem: &ResolventProblem) -> Result<ResolventSolution> {
    solve_pair(problem).map(|p| p.averaged)
}

/// Same loop as [`resolvent_solve`], returning the last `x_hat_T` unscaled.
pub fn last_iterate_heuristic(problem: &ResolventProblem) -> Result<ResolventSolution> {
    solve_pair(problem).map(|p| p.last)
}

/// How far `p` is from satisfying `p + (1-alpha)/(2 alpha) L(D^-1 p) ∋ s`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointResidual {
    /// `s - p - (1-alpha)/(2 alpha) z`.
    pub residual: VertexVector,
    /// `||residual||_{D^-1}`.
    pub norm: f64,
    /// The element `z` of `L(D^-1 p)` closest to making the residual vanish.
    pub certificate: SubgradientCertificate,
    pub dual_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PprResult {
    pub p: VertexVector,
    pub residual: FixedPointResidual,
    pub solution: ResolventSolution,
}

/// Optional solver settings for [`ppr_with`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PprOptions {
    pub lambda_lower: Option<f64>,
    pub iterations: Option<usize>,
    pub oracle: OracleChoice,
    pub prox: ProxChoice,
}

/// Personalized PageRank vector with teleport probability `alpha`.
pub fn ppr(model: &PotentialModel, alpha: f64, s: &[f64], epsilon: f64) -> Result<PprResult> {
    ppr_with(model, alpha, s, epsilon, &PprOptions::default())
}

pub fn ppr_with(
    model: &PotentialModel,
    alpha: f64,
    s: &[f64],
    epsilon: f64,
    options: &PprOptions,
) -> Result<PprResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let lambda = 2.0 * alpha / (1.0 - alpha);
    let seed: Vec<f64> = s.iter().map(|v| lambda * v).collect();
    let mut problem = ResolventProblem::new(model, lambda, &seed, epsilon)?;
    problem.lambda_lower = options.lambda_lower;
    problem.iterations = options.iterations;
    problem.oracle = options.oracle;
    problem.prox = options.prox;
    let solution = resolvent_solve(&problem)?;

    let graph = model.graph();
    let p: Vec<f64> = solution.x.iter().zip(graph.degrees()).map(|(x, d)| x * d).collect();
    let target: Vec<f64> = s.iter().zip(&p).map(|(a, b)| lambda * (a - b)).collect();
    let options = MinNormOptions::with_tol(1e-12);
    let (certificate, dual_gap) = match nearest_subgradient(model, &solution.x, Some(&target), &options, None) {
        Ok(r) => (r.certificate, r.dual_gap),
        Err(Error::ToleranceNotReached { best, gap, .. }) => {
            // fall back to a certified element with the best z attached
            let mut c = any_subgradient(model, &solution.x)?;
            c.z = VertexVector::from_vec_unchecked(best);
            (c, gap)
        }
        Err(e) => return Err(e),
    };
    let residual: Vec<f64> = s
        .iter()
        .zip(&p)
        .zip(certificate.z.iter())
        .map(|((a, b), z)| a - b - z / lambda)
        .collect();
    let norm = graph.d_inv_norm_sq(&residual).sqrt();
    Ok(PprResult {
        p: VertexVector::from_vec_unchecked(p),
        residual: FixedPointResidual {
            residual: VertexVector::from_vec_unchecked(residual),
            norm,
            certificate,
            dual_gap,
        },
        solution,
    })
}

/// Truncated series for a graph resolvent.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesResult {
    pub x: VertexVector,
    pub terms: usize,
    /// `(2/(lambda+2))^K`, the relative size of the discarded tail.
    pub tail_bound: f64,
}

/// `(1/(lambda+2)) sum_{k<K} (2/(lambda+2))^k (I - 1/2 D^-1 L)^k D^-1 s`,
/// which converges to `(lambda D + L)^-1 s`. Hyperedges of rank above two
/// are treated through their clique expansion.
pub fn graph_resolvent_series(graph: &Hypergraph, lambda: f64, s: &[f64], terms: usize) -> Result<SeriesResult> {
    series(graph, lambda, s, terms, None)
}

/// As [`graph_resolvent_series`], stopping after fewer than `max_terms` terms
/// once a new term changes the partial sum by less than `tol` in
/// `||.||_D^2`.
pub fn graph_resolvent_series_until(
    graph: &Hypergraph,
    lambda: f64,
    s: &[f64],
    max_terms: usize,
    tol: f64,
) -> Result<SeriesResult> {
    series(graph, lambda, s, max_terms, Some(tol))
}

fn series(graph: &Hypergraph, lambda: f64, s: &[f64], max_terms: usize, stop: Option<f64>) -> Result<SeriesResult> {
    graph.check_vector(s)?;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda must be non-negative, got {lambda}")));
    }
    let ratio = 2.0 / (lambda + 2.0);
    let mut term = graph.d_inv_apply(s);
    let mut x = vec![0.0; s.len()];
    let mut coef = 1.0 / (lambda + 2.0);
    let mut terms = 0;
    while terms < max_terms {
        for (xi, t) in x.iter_mut().zip(&term) {
            *xi += coef * t;
        }
        terms += 1;
        if let Some(tol) = stop {
            let change: f64 = term
                .iter()
                .zip(graph.degrees())
                .map(|(t, d)| d * (coef * t) * (coef * t))
                .sum();
            if change < tol {
                break;
            }
        }
        if terms == max_terms {
            break;
        }
        let lx = graph.d_inv_apply(&graph.laplacian_apply(&term));
        for (t, l) in term.iter_mut().zip(&lx) {
            *t -= 0.5 * l;
        }
        coef *= ratio;
    }
    Ok(SeriesResult {
        x: VertexVector::from_vec_unchecked(x),
        terms,
        tail_bound: ratio.powi(terms.min(i32::MAX as usize) as i32),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Quadratic(Vec<f64>);

    impl ConvexObjective for Quadratic {
        fn value(&self, x: &[f64]) -> f64 {
            0.5 * x.iter().zip(&self.0).map(|(v, a)| a * v * v).sum::<f64>()
        }

        fn subgradient(&mut self, x: &[f64]) -> Result<Vec<f64>> {
            Ok(x.iter().zip(&self.0).map(|(v, a)| a * v).collect())
        }
    }

    fn two_vertex(norm: EdgeNorm) -> PotentialModel {
        PotentialModel::uniform(Hypergraph::build(2, [([0, 1], 1.0)]).unwrap(), norm).unwrap()
    }

    #[test]
    fn zero_seed_gives_zero() {
        let prox = DiagonalProx::identity(3, 1.0, 1.0).unwrap();
        let out = omd_minimize(&mut Quadratic(vec![1.0; 3]), &[0.0; 3], &prox, &OmdOptions::new(0.1)).unwrap();
        assert_eq!(out.averaged, vec![0.0; 3]);

        let m = two_vertex(EdgeNorm::L2);
        let sol = resolvent_solve(&ResolventProblem::new(&m, 0.5, &[0.0, 0.0], 0.1).unwrap()).unwrap();
        assert_eq!(sol.x.as_slice(), &[0.0, 0.0]);
        assert_eq!(sol.objective, 0.0);
    }

    #[test]
    fn identity_quadratic_gap() {
        let s = [1.0, -2.0, 0.5];
        let prox = DiagonalProx::identity(3, 1.0, 1.0).unwrap();
        let mut f = Quadratic(vec![1.0; 3]);
        let out = omd_minimize(&mut f, &s, &prox, &OmdOptions::new(0.1)).unwrap();
        assert_eq!(out.iterations, 400);
        let opt = -0.5 * dot(&s, &s);
        let val = f.value(&out.averaged) - dot(&s, &out.averaged);
        assert!(val - opt <= 0.1 * opt.abs(), "{val} vs {opt}");
    }

    #[test]
    fn rejects_bad_parameters() {
        let prox = DiagonalProx::identity(1, 1.0, 1.0).unwrap();
        let err = omd_minimize(&mut Quadratic(vec![1.0]), &[1.0], &prox, &OmdOptions::new(1.0)).unwrap_err();
        assert_eq!(err, Error::InvalidEpsilon(1.0));
        assert!(matches!(DiagonalProx::identity(1, 0.0, 1.0), Err(Error::NonpositiveConstants { .. })));
        assert!(matches!(DiagonalProx::identity(1, 2.0, 1.0), Err(Error::NonpositiveConstants { .. })));
    }

    #[test]
    fn unbounded_when_lambda_zero() {
        let m = two_vertex(EdgeNorm::LInf);
        let p = ResolventProblem::new(&m, 0.0, &[1.0, 0.0], 0.1).unwrap();
        assert_eq!(resolvent_solve(&p).unwrap_err(), Error::Unbounded(1.0));
    }

    #[test]
    fn two_vertex_resolvent() {
        // (D + 1/2 L) x = s with s = (1, -1) gives x = (1/2, -1/2)
        let m = two_vertex(EdgeNorm::L2);
        let p = ResolventProblem::new(&m, 1.0, &[1.0, -1.0], 0.05).unwrap();
        let sol = resolvent_solve(&p).unwrap();
        let opt = -0.5;
        assert!(sol.objective - opt <= 0.05 * 0.5);
        assert!((sol.x[0] - 0.5).abs() < 0.05 && (sol.x[0] + sol.x[1]).abs() < 1e-12);
        assert!((sol.objective - p.objective(&sol.x)).abs() < 1e-12);
    }

    #[test]
    fn parallel_component_is_restored() {
        let m = two_vertex(EdgeNorm::L2);
        let p = ResolventProblem::new(&m, 2.0, &[1.0, 1.0], 0.1).unwrap();
        let sol = resolvent_solve(&p).unwrap();
        // s is parallel to D1, so x = s / (lambda d) = 1/2
        assert!((sol.x[0] - 0.5).abs() < 1e-15 && (sol.x[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn two_vertex_ppr() {
        let m = two_vertex(EdgeNorm::L2);
        let r = ppr(&m, 0.5, &[1.0, 0.0], 0.002).unwrap();
        assert!((r.p[0] - 5.0 / 6.0).abs() < 1e-3 && (r.p[1] - 1.0 / 6.0).abs() < 1e-3, "{:?}", r.p);
        assert!((r.p[0] + r.p[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stationary_seed_is_fixed() {
        let g = Hypergraph::build(3, [(vec![0, 1, 2], 1.0), (vec![1, 2], 2.0)]).unwrap();
        let m = PotentialModel::uniform(g.clone(), EdgeNorm::LInf).unwrap();
        let s: Vec<f64> = g.degrees().iter().map(|d| d / g.volume()).collect();
        let r = ppr(&m, 0.3, &s, 0.1).unwrap();
        for (a, b) in r.p.iter().zip(&s) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(r.residual.norm < 1e-12);
    }

    #[test]
    fn series_terms() {
        let g = Hypergraph::build(2, [([0, 1], 1.0)]).unwrap();
        let one = graph_resolvent_series(&g, 1.0, &[1.0, -1.0], 1).unwrap();
        assert_eq!(one.x.as_slice(), &[1.0 / 3.0, -1.0 / 3.0]);
        let many = graph_resolvent_series(&g, 1.0, &[1.0, -1.0], 50).unwrap();
        // (D + L) x = s gives x = (1/3, -1/3)
        assert!((many.x[0] - 1.0 / 3.0).abs() <= (2.0f64 / 3.0).powi(50) * 2f64.sqrt());
        assert_eq!(graph_resolvent_series(&g, 1.0, &[0.0, 0.0], 5).unwrap().x.as_slice(), &[0.0, 0.0]);
        let early = graph_resolvent_series_until(&g, 1.0, &[1.0, -1.0], 50, 1e-6).unwrap();
        assert!(early.terms < 50);
        assert!((early.x[0] - 1.0 / 3.0).abs() < 1e-2);
    }

    #[test]
    fn clique_prox_inverts() {
        let g = Hypergraph::build(4, [(vec![0, 1, 2], 1.0), (vec![2, 3], 2.0)]).unwrap();
        let prox = CliqueProx::new(&g, 0.1, 0.5, 1.0).unwrap();
        let v = [1.0, -0.5, 2.0, 0.25];
        let back = prox.apply(&prox.inverse_apply(&v));
        for (a, b) in back.iter().zip(v) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn last_iterate_is_deterministic() {
        let g = Hypergraph::build(4, [(vec![0, 1, 2], 1.0), (vec![1, 2, 3], 1.0)]).unwrap();
        let m = PotentialModel::uniform(g, EdgeNorm::LInf).unwrap();
        let mut p = ResolventProblem::new(&m, 0.5, &[1.0, 0.0, 0.0, -1.0], 0.2).unwrap();
        p.iterations = Some(50);
        let a = last_iterate_heuristic(&p).unwrap();
        let b = last_iterate_heuristic(&p).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iterations, 50);
    }
}
