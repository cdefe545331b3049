//! Nibble matchings in complete 3-uniform hypergraphs against the
//! (q/3)(1 - beta) guarantee.
//!
//! `cargo run --release --example nibble_matching`

use graphpack::hypergraph::{check_pippenger_conditions, degree_profile, greedy_matching, nibble_matching, NibbleParams, UniformHypergraph};
use graphpack::seed::rng;

fn main() -> graphpack::Result<()> {
    let params = NibbleParams { beta: 0.1, ..NibbleParams::default() };
    for q in [30, 60, 90] {
        let h = UniformHypergraph::complete(q, 3);
        let profile = degree_profile(&h);
        let verdict = check_pippenger_conditions(&h, 0.1, profile.suggested_d);
        let bound = q as f64 / 3.0 * (1.0 - params.beta);
        let sizes: Vec<usize> = (0..10).map(|s| nibble_matching(&h, params, &mut rng(s)).matching.size()).collect();
        let greedy = greedy_matching(&h, &mut rng(0)).size();
        println!(
            "q = {q}: {} edges, max codegree {}, conditions ok = {}, nibble sizes {sizes:?} (bound {bound:.1}), greedy {greedy}",
            h.edge_count(),
            profile.max_codegree,
            verdict.accepted
        );
    }
    Ok(())
}
