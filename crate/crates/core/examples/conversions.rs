//! Building hypergraphs: bipartite data, k-nearest neighbours and clique
//! expansions.
use hyperdiffusion::hypergraph::{bipartite_to_hypergraph, knn_graph, knn_hypergraph};
use hyperdiffusion::CliqueScaling;

fn main() -> hyperdiffusion::Result<()> {
    // three authors (left) on four papers (right)
    let papers = vec![vec![0, 1], vec![0, 1], vec![1, 2], vec![2]];
    let conv = bipartite_to_hypergraph(3, &papers, None)?;
    println!(
        "co-authorship: {} hyperedges, weights {:?}, {} single-author papers skipped",
        conv.hypergraph.num_edges(),
        conv.hypergraph.weights(),
        conv.skipped_degenerate
    );

    let points: Vec<Vec<f64>> = (0..12).map(|i| vec![(i as f64).cos(), (i as f64).sin()]).collect();
    let h = knn_hypergraph(&points, 3)?;
    let g = knn_graph(&points, 3)?;
    println!("3-NN hypergraph: {} hyperedges of rank {}", h.num_edges(), h.max_rank());
    println!("3-NN graph: {} edges", g.num_edges());

    for scaling in [CliqueScaling::Unit, CliqueScaling::DegreePreserving] {
        let c = h.clique_expansion(scaling);
        println!("{scaling:?} clique expansion: {} edges, volume {}", c.num_edges(), c.volume());
    }
    Ok(())
}
