//! Regularity partition of a planted two-block random graph, followed by the
//! edge discard and the reduced graph.
//!
//! `cargo run --release --example regularity_partition`

use graphpack::graph::Graph;
use graphpack::pipeline::decimal_rational;
use graphpack::regularity::{build_reduced_graph, discard_edges, judge_pairs, regularity_partition, RegularityMethod};
use graphpack::seed::rng;
use rand::Rng as _;

fn main() -> graphpack::Result<()> {
    // Dense inside the two halves, sparse across.
    let n = 400u32;
    let mut r = rng(11);
    let edges: Vec<(u32, u32)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| r.gen_bool(if (u < n / 2) == (v < n / 2) { 0.7 } else { 0.1 }))
        .collect();
    let g = Graph::from_edges(n as usize, edges)?;

    let gamma = 0.3;
    let method = RegularityMethod::default();
    let (p, verdict) = regularity_partition(&g, gamma, 64, method, &mut rng(1))?;
    println!(
        "{} classes after {} rounds; {}/{} pairs irregular; certified = {}",
        verdict.classes, verdict.rounds, verdict.irregular_pairs, verdict.total_pairs, verdict.certified
    );

    let table = judge_pairs(&g, &p, gamma, method, &mut rng(2))?;
    let delta = decimal_rational(0.2)?;
    let (kept, report) = discard_edges(&g, &p, &table, &delta);
    println!(
        "discarded {} of {} edges (internal {}, sparse {}, irregular {}), {} kept",
        report.discarded,
        g.edge_count(),
        report.internal,
        report.sparse,
        report.irregular,
        kept.edge_count()
    );
    let reduced = build_reduced_graph(&p, &table, &delta)?;
    println!("reduced graph: {} vertices, {} edges", p.len(), reduced.densities.len());
    for (e, d) in reduced.densities.iter().take(6) {
        println!("  {e}: density {d}");
    }
    Ok(())
}
