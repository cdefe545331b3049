//! Maximum edge-disjoint triangle packings by branch and bound, compared
//! with a random greedy packing.
//!
//! `cargo run --example exact_packing`

use graphpack::copies::DEFAULT_COPY_CAP;
use graphpack::exact::{exact_packing, greedy_packing, verify_integer_packing, DEFAULT_NODE_BUDGET};
use graphpack::family::{parse_family_spec, Family};
use graphpack::graph::Graph;
use graphpack::seed::rng;

fn main() -> graphpack::Result<()> {
    let triangles = Family::single("K3")?;
    for n in [6, 7, 9] {
        let g = Graph::complete(n);
        let best = exact_packing(&g, &triangles, DEFAULT_NODE_BUDGET, DEFAULT_COPY_CAP)?;
        let greedy = greedy_packing(&g, &triangles, &mut rng(0), DEFAULT_COPY_CAP)?;
        println!("K{n}: nu = {} ({:?}, {} nodes), greedy = {}", best.size(), best.status, best.nodes, greedy.size());
    }

    let mixed = parse_family_spec("K3,C4", None)?;
    let g = Graph::gnp(10, 0.6, &mut rng(3));
    let best = exact_packing(&g, &mixed, DEFAULT_NODE_BUDGET, DEFAULT_COPY_CAP)?;
    println!("G(10, 0.6) with {{K3, C4}}: nu = {} ({:?})", best.size(), best.status);
    print!("{}", best.packing.to_dump());
    assert!(verify_integer_packing(&g, &mixed, &best.packing).accepted);
    Ok(())
}
