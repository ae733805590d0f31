//! Reproduction tables as CSV, the same rows `sentropy experiment` writes.

use structure_entropy::experiment::{run_experiment, to_csv, ExperimentName, ExperimentSpec};

fn main() -> structure_entropy::Result<()> {
    let runs = [
        ExperimentSpec::new(ExperimentName::Tree, (8..=12).collect(), 1, 0),
        ExperimentSpec::new(ExperimentName::Complete, vec![16, 64, 256], 1, 0),
        ExperimentSpec::new(ExperimentName::Security, vec![2000, 4000], 3, 10),
    ];
    for spec in &runs {
        println!("# {}: {}", spec.name, spec.name.bound_formula());
        print!("{}", to_csv(&run_experiment(spec, None)?));
    }
    Ok(())
}
