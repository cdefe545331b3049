//! Labeled, unlabeled and partite copy enumeration.
//!
//! `cargo run --example copy_enumeration`

use graphpack::copies::{automorphism_count, enumerate_labeled_copies, enumerate_partite_copies, enumerate_unlabeled_copies, DEFAULT_COPY_CAP};
use graphpack::graph::{named_pattern, Graph};

fn main() -> graphpack::Result<()> {
    let host = Graph::complete(6);
    for name in ["K3", "C4", "P3", "S3"] {
        let pattern = named_pattern(name)?;
        let labeled = enumerate_labeled_copies(&host, &pattern, DEFAULT_COPY_CAP)?;
        let unlabeled = enumerate_unlabeled_copies(&host, &pattern, DEFAULT_COPY_CAP)?;
        println!(
            "{name} in K6: {} labeled = {} unlabeled x |Aut| = {}",
            labeled.len(),
            unlabeled.len(),
            automorphism_count(&pattern)?
        );
    }

    // Partite copies of K3 across three classes of a complete tripartite graph.
    let classes: Vec<Vec<u32>> = vec![vec![0, 1], vec![2, 3], vec![4, 5]];
    let partite = enumerate_partite_copies(&host, &named_pattern("K3")?, &classes)?;
    println!("partite K3 copies across {{0,1}} {{2,3}} {{4,5}}: {}", partite.len());
    for c in partite.copies() {
        println!("  {}", c.dump_line());
    }
    Ok(())
}
