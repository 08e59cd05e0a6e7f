//! Recovering a planted cluster from a single seed vertex.
use hyperdiffusion::experiments::{planted_clusters, trial_rng};
use hyperdiffusion::partition::local_partition;
use hyperdiffusion::{EdgeNorm, PotentialModel};

fn main() -> hyperdiffusion::Result<()> {
    let g = planted_clusters(20, 40, 4, 2, &mut trial_rng(3, 0))?;
    let planted = g.conductance(&(0..20).collect::<Vec<_>>())?.conductance;
    let model = PotentialModel::uniform(g, EdgeNorm::LInf)?;
    let r = local_partition(&model, 5, planted)?;
    let inside = r.sweep.set.iter().filter(|&&v| v < 20).count();
    println!("planted conductance {planted:.4}");
    println!(
        "found conductance {:.4} after {} steps (best at t={}), {} of {} vertices from the planted side",
        r.sweep.conductance,
        r.steps,
        r.t_star,
        inside,
        r.sweep.set.len()
    );
    Ok(())
}
