//! Hyperedge norms from submodular cut functions.
use hyperdiffusion::laplacian::min_norm_subgradient;
use hyperdiffusion::{CutFunction, EdgeNorm, Hypergraph, PotentialModel};

fn main() -> hyperdiffusion::Result<()> {
    // cutting one vertex off costs 1, splitting two against two costs 1.5
    let cut = CutFunction::cardinality_based(4, &[0.0, 1.0, 1.5])?;
    let x = [0.3, -1.0, 2.0, 0.5];
    println!("Lovasz extension   = {}", cut.lovasz(&x));
    println!("on indicator {{0,2}} = {}", cut.lovasz(&[1.0, 0.0, 1.0, 0.0]));

    let norm = EdgeNorm::lovasz(cut);
    println!("norm               = {}", norm.norm(&x));
    println!("min over shifts    = {}", norm.min_shift_norm(&x));

    let g = Hypergraph::build(5, [(vec![0, 1, 2, 3], 1.0), (vec![3, 4], 1.0)])?;
    let model = PotentialModel::with_overrides(g, EdgeNorm::L2, &[(0, norm)])?;
    let y = [0.3, -1.0, 2.0, 0.5, 0.0];
    let z = min_norm_subgradient(&model, &y, 1e-10)?;
    println!("U(y) = {}, min-norm subgradient {:?}", model.potential(&y), z.z().as_slice());
    Ok(())
}
