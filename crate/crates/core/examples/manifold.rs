//! Graph versus hypergraph diffusion for labelling points on two spirals.
use hyperdiffusion::experiments::{bench_manifold, ManifoldConfig, ManifoldKind, Method};

fn main() -> hyperdiffusion::Result<()> {
    let mut config = ManifoldConfig::new(ManifoldKind::TwoSpirals);
    config.trials = 5;
    config.steps = vec![10, 30];
    let report = bench_manifold(&config)?;
    for &t in &config.steps {
        println!(
            "t={t}: median AUC graph {:.4} hypergraph {:.4}; median errors graph {} hypergraph {}",
            report.median_auc(Method::Graph, t),
            report.median_auc(Method::Hypergraph, t),
            report.median_errors(Method::Graph, t),
            report.median_errors(Method::Hypergraph, t),
        );
    }
    Ok(())
}
