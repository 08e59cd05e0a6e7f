//! Personalized PageRank on a hypergraph with mixed norms.
use hyperdiffusion::resolvent::ppr;
use hyperdiffusion::{EdgeNorm, Hypergraph, PotentialModel};

fn main() -> hyperdiffusion::Result<()> {
    let g = Hypergraph::build(
        6,
        [(vec![0, 1, 2], 1.0), (vec![2, 3], 1.0), (vec![3, 4, 5], 2.0), (vec![1, 5], 0.5)],
    )?;
    let model = PotentialModel::with_overrides(g, EdgeNorm::LInf, &[(1, EdgeNorm::L2)])?;
    let mut s = vec![0.0; 6];
    s[0] = 1.0;
    for eps in [0.1, 0.05, 0.025] {
        let r = ppr(&model, 0.2, &s, eps)?;
        let p: Vec<String> = r.p.iter().map(|v| format!("{v:.4}")).collect();
        println!("eps={eps}: p = [{}], residual {:.2e}", p.join(", "), r.residual.norm);
    }
    Ok(())
}
