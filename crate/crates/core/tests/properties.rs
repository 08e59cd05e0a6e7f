use proptest::prelude::*;

use hyperdiffusion::diffusion::heat_step;
use hyperdiffusion::laplacian::{any_subgradient, min_norm_subgradient};
use hyperdiffusion::partition::sweep_cut;
use hyperdiffusion::{CutFunction, EdgeNorm, Hypergraph, PotentialModel};

#[derive(Debug, Clone)]
struct Instance {
    n: usize,
    edges: Vec<(Vec<usize>, f64)>,
    kinds: Vec<u8>,
}

impl Instance {
    fn model(&self) -> PotentialModel {
        let g = Hypergraph::build(self.n, self.edges.clone()).unwrap();
        let norms = g
            .edges()
            .iter()
            .zip(&self.kinds)
            .map(|(e, k)| match k % 3 {
                0 => EdgeNorm::LInf,
                1 => EdgeNorm::L2,
                _ => EdgeNorm::lovasz(CutFunction::standard(e.len()).unwrap()),
            })
            .collect();
        PotentialModel::new(g, norms).unwrap()
    }

    fn monotone_model(&self) -> PotentialModel {
        let g = Hypergraph::build(self.n, self.edges.clone()).unwrap();
        let norms = self
            .kinds
            .iter()
            .take(g.num_edges())
            .map(|k| if k % 2 == 0 { EdgeNorm::LInf } else { EdgeNorm::L2 })
            .collect();
        PotentialModel::new(g, norms).unwrap()
    }
}

/// A path through all vertices plus random extra hyperedges.
fn instance() -> impl Strategy<Value = Instance> {
    (3usize..10).prop_flat_map(|n| {
        let extra = prop::collection::vec(
            (prop::collection::btree_set(0..n, 2..=n.min(4)), 0.5f64..3.0),
            0..6,
        );
        (Just(n), extra, prop::collection::vec(any::<u8>(), n + 6)).prop_map(|(n, extra, kinds)| {
            let mut edges: Vec<(Vec<usize>, f64)> = (1..n).map(|i| (vec![i - 1, i], 1.0)).collect();
            edges.extend(extra.into_iter().map(|(s, w)| (s.into_iter().collect(), w)));
            Instance { n, edges, kinds }
        })
    })
}

fn with_vector(values: impl Strategy<Value = f64> + Clone) -> impl Strategy<Value = (Instance, Vec<f64>)> {
    instance().prop_flat_map(move |inst| {
        let n = inst.n;
        (Just(inst), prop::collection::vec(values.clone(), n))
    })
}

fn real() -> impl Strategy<Value = f64> + Clone {
    -5.0f64..5.0
}

fn tied() -> impl Strategy<Value = f64> + Clone {
    (-2i32..=2).prop_map(f64::from)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn subgradient_inequality((inst, x) in with_vector(real()), y in prop::collection::vec(real(), 10)) {
        let m = inst.model();
        let y = &y[..inst.n];
        let z = any_subgradient(&m, &x).unwrap().z;
        let diff: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
        let lhs = m.potential(y);
        let rhs = m.potential(&x) + dot(&z, &diff);
        prop_assert!(lhs >= rhs - 1e-9 * (1.0 + lhs.abs()), "{lhs} < {rhs}");
    }

    #[test]
    fn subgradients_sum_to_zero((inst, x) in with_vector(tied())) {
        let m = inst.model();
        for z in [any_subgradient(&m, &x).unwrap().z, min_norm_subgradient(&m, &x, 1e-10).unwrap().z().clone()] {
            let total: f64 = z.iter().sum();
            prop_assert!(total.abs() <= 1e-10, "{total}");
        }
    }

    #[test]
    fn maximum_principle((inst, x) in with_vector(tied())) {
        let m = inst.monotone_model();
        let z = min_norm_subgradient(&m, &x, 1e-10).unwrap();
        let hi = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = x.iter().cloned().fold(f64::INFINITY, f64::min);
        for (i, &zi) in z.z().iter().enumerate() {
            if x[i] == hi {
                prop_assert!(zi >= -1e-12);
            }
            if x[i] == lo {
                prop_assert!(zi <= 1e-12);
            }
        }
    }

    #[test]
    fn min_norm_is_smallest((inst, x) in with_vector(tied())) {
        let m = inst.model();
        let g = m.graph();
        let any = any_subgradient(&m, &x).unwrap().z;
        let min = min_norm_subgradient(&m, &x, 1e-10).unwrap();
        prop_assert!(g.d_inv_norm_sq(min.z()) <= g.d_inv_norm_sq(&any) * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn sweep_returns_best_prefix((inst, x) in with_vector(real())) {
        let g = inst.model().graph().clone();
        prop_assume!(x.iter().any(|v| *v != x[0]));
        let r = sweep_cut(&g, &x).unwrap();
        for k in 1..inst.n {
            let prefix = &r.ordering[..k];
            let phi = g.conductance(prefix).unwrap().conductance;
            prop_assert!(phi >= r.conductance - 1e-12, "prefix {k}: {phi} < {}", r.conductance);
        }
        let best = r.profile.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!((best - r.conductance).abs() <= 1e-12);
    }

    #[test]
    fn heat_step_preserves_mean((inst, x) in with_vector(real())) {
        let m = inst.model();
        let g = m.graph();
        let next = heat_step(&m, &x, 1e-10).unwrap();
        let before = g.d_mean(&x);
        let after = g.d_mean(&next);
        prop_assert!((before - after).abs() <= 1e-9 * (1.0 + before.abs()));
    }
}
