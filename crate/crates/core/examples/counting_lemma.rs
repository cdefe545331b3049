//! Per-edge triangle counts in a random tripartite graph against the
//! counting-lemma prediction t * d^2.
//!
//! `cargo run --release --example counting_lemma`

use graphpack::graph::{named_pattern, Graph};
use graphpack::pipeline::decimal_rational;
use graphpack::regularity::counting_lemma_check;
use graphpack::seed::rng;
use rand::Rng as _;

fn main() -> graphpack::Result<()> {
    let t = 300u32;
    let mut r = rng(5);
    let edges: Vec<(u32, u32)> = (0..3 * t)
        .flat_map(|u| (u + 1..3 * t).map(move |v| (u, v)))
        .filter(|&(u, v)| u / t != v / t && r.gen_bool(0.5))
        .collect();
    let g = Graph::from_edges(3 * t as usize, edges)?;
    let classes: Vec<Vec<u32>> = (0..3).map(|i| (i * t..(i + 1) * t).collect()).collect();
    let report = counting_lemma_check(&g, &named_pattern("K3")?, &classes, 0.25, &decimal_rational(0.2)?)?;
    println!(
        "t = {t}: {} of {} edges within 0.25 t of the prediction ({:.2}%), max relative deviation {:.3}",
        report.satisfied,
        report.edges_checked,
        100.0 * report.fraction,
        report.max_relative_deviation
    );
    for e in report.per_edge.iter().take(5) {
        println!("  {}: {} triangles, expected {:.1}", e.edge, e.count, e.expected);
    }
    Ok(())
}
