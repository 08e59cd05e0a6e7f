//! Averaged output versus last iterate over random vertex seeds.
use hyperdiffusion::experiments::{bench_resolvent, random_hypergraph, trial_rng, BenchConfig};
use hyperdiffusion::{EdgeNorm, PotentialModel};

fn main() -> hyperdiffusion::Result<()> {
    let g = random_hypergraph(300, 600, 5, &mut trial_rng(0, 0))?;
    let model = PotentialModel::uniform(g, EdgeNorm::LInf)?;
    let config = BenchConfig {
        seeds: 5,
        ..BenchConfig::default()
    };
    let report = bench_resolvent(&model, &config)?;
    report.write_csv(std::io::stdout().lock())?;
    println!("median improvement {:.4}", report.median_improvement());
    Ok(())
}
