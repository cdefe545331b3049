//! End-to-end randomized packing on G(n, 1/2) with the practical
//! parameters, compared with the LP optimum.
//!
//! `cargo run --release --example pipeline_gnp -- [n] [seed]`

use graphpack::exact::verify_integer_packing;
use graphpack::family::Family;
use graphpack::graph::Graph;
use graphpack::lp::Arithmetic;
use graphpack::pipeline::{run_pipeline, PipelineConfig};
use graphpack::seed::rng;

fn main() -> graphpack::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(40);
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);
    let g = Graph::gnp(n, 0.5, &mut rng(seed));
    let triangles = Family::single("K3")?;
    let config = PipelineConfig { lp: Arithmetic::Float, ..PipelineConfig::practical(1, 3, 0.5, 0.2, 0.1) };

    let (packing, report) = run_pipeline(&g, &triangles, &config, seed)?;
    let lp = report.lp.as_ref().map_or(f64::NAN, |l| l.value_f64);
    println!("G({n}, 1/2): {} edges, nu* ~ {lp:.3}", g.edge_count());
    println!(
        "pipeline packing: {} triangles ({} from colors, {} from leftover), verified = {}",
        packing.size(),
        report.packing.from_colors,
        report.packing.from_leftover,
        verify_integer_packing(&g, &triangles, &packing).accepted
    );
    if let Some(w) = &report.weights {
        println!("weights: psi {:.3}, good {:.3}, on G* {:.3}, projected {:.5}", w.psi_f64, w.psi_good_f64, w.psi_star_f64, w.psi_prime_f64);
        println!("projection identity exact: {}, loads within density: {}", w.identity_exact, w.loads_within_density);
    }
    let used = report.colors.iter().filter(|c| !c.skipped).count();
    println!("{} colors, {used} above the weight threshold", report.colors.len());
    for c in report.colors.iter().filter(|c| !c.skipped).take(5) {
        println!("  color {}: psi' {:.4}, {} edges, {} hyperedges", c.color, c.psi_prime_f64, c.edges, c.hyperedges);
    }
    Ok(())
}
