//! Approximate resolvents by mirror descent, compared with a graph series.
use hyperdiffusion::experiments::{random_hypergraph, trial_rng};
use hyperdiffusion::resolvent::{graph_resolvent_series, last_iterate_heuristic, resolvent_solve, ProxChoice, ResolventProblem};
use hyperdiffusion::{CliqueScaling, EdgeNorm, PotentialModel};

fn main() -> hyperdiffusion::Result<()> {
    let g = random_hypergraph(60, 80, 4, &mut trial_rng(1, 0))?;
    let model = PotentialModel::uniform(g.clone(), EdgeNorm::LInf)?;
    let mut s = vec![0.0; 60];
    s[0] = 1.0;

    let mut problem = ResolventProblem::new(&model, 0.5, &s, 0.1)?;
    problem.iterations = Some(2000);
    for prox in [ProxChoice::Degree, ProxChoice::Clique] {
        problem.prox = prox;
        let avg = resolvent_solve(&problem)?;
        let last = last_iterate_heuristic(&problem)?;
        println!("{prox}: averaged {:.6}, last iterate {:.6}", avg.objective, last.objective);
    }

    let series = graph_resolvent_series(&g.clique_expansion(CliqueScaling::Unit), 0.5, &s, 200)?;
    println!("clique-expansion series: x[0] = {:.4}, tail bound {:.1e}", series.x[0], series.tail_bound);
    Ok(())
}
