//! Fractional triangle packings of small graphs in exact arithmetic.
//!
//! `cargo run --example fractional_packing`

use graphpack::copies::DEFAULT_COPY_CAP;
use graphpack::family::Family;
use graphpack::graph::Graph;
use graphpack::lp::{solve_fractional_packing, Arithmetic};
use graphpack::seed::rng;

fn main() -> graphpack::Result<()> {
    let triangles = Family::single("K3")?;
    for n in 3..=9 {
        let res = solve_fractional_packing(&Graph::complete(n), &triangles, Arithmetic::ExactRational, DEFAULT_COPY_CAP)?;
        println!("K{n}: nu* = {}, n(n-1)/6 = {}/6, dual = {}", res.value, n * (n - 1), res.dual_value);
    }

    let g = Graph::gnp(20, 0.5, &mut rng(1));
    let exact = solve_fractional_packing(&g, &triangles, Arithmetic::ExactRational, DEFAULT_COPY_CAP)?;
    let float = solve_fractional_packing(&g, &triangles, Arithmetic::Float, DEFAULT_COPY_CAP)?;
    println!("G(20, 1/2): exact {} ~ {:.6}, float {:.6}, {} copies", exact.value, exact.value_f64(), float.value_f64(), exact.copies);
    for (copy, w) in exact.packing.support().take(5) {
        println!("  {}  weight {w}", copy.dump_line());
    }
    Ok(())
}
