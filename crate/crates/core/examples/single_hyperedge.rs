//! One heat diffusion step on a single l-infinity hyperedge.
use hyperdiffusion::diffusion::{diffuse, heat_step, MinNormOptions};
use hyperdiffusion::laplacian::min_norm_subgradient;
use hyperdiffusion::{EdgeNorm, Hypergraph, PotentialModel};

fn main() -> hyperdiffusion::Result<()> {
    let g = Hypergraph::build(4, [(vec![0, 1, 2, 3], 1.0)])?;
    let model = PotentialModel::uniform(g, EdgeNorm::LInf)?;
    let x = [-1.0, -1.0, 1.0, 2.0];

    let z = min_norm_subgradient(&model, &x, 1e-12)?;
    println!("U(x)        = {}", model.potential(&x));
    println!("min-norm z  = {:?}", z.z().as_slice());
    println!("next state  = {:?}", heat_step(&model, &x, 1e-12)?.as_slice());

    let trace = diffuse(&model, &x, 5, &MinNormOptions::default())?;
    for r in &trace.records {
        println!("t={} U={:.6} variance={:.6}", r.t, r.potential, r.variance);
    }
    Ok(())
}
