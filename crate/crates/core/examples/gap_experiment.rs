//! Small integrality-gap experiment on G(n, 1/2), printed as CSV.
//!
//! `cargo run --release --example gap_experiment`

use graphpack::pipeline::{gap_experiment, rows_to_csv, ExperimentSpec};

fn main() -> graphpack::Result<()> {
    let spec = ExperimentSpec::from_json(
        r#"{
            "model": {"kind": "gnp", "p": 0.5},
            "family": "K3",
            "n": [10, 12, 14, 16],
            "seeds": [1, 2, 3]
        }"#,
    )?;
    let rows = gap_experiment(&spec, None, false)?;
    print!("{}", rows_to_csv(&rows));
    Ok(())
}
