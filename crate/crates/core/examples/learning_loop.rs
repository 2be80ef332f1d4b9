//! The full learning loop: analysis passes seed a genetic search scored by
//! the time-integrated distance to the wanted generator.
//!
//! ```bash
//! cargo run --release --example learning_loop
//! ```

use bbforge::bb_synthesis::TargetSpec;
use bbforge::models;
use bbforge::optimizer::{learning_loop, write_records_csv, CostFunction, CostSettings, LearningLoopConfig};

fn main() -> bbforge::Result<()> {
    let model = models::dephasing_with_bath_dynamics(1.0, 0.3, [0.3, 0.4, 0.6])?;
    let cost = CostFunction::new(model, TargetSpec::storage(0), CostSettings::default())?;
    let config = LearningLoopConfig {
        seed: 42,
        // a tolerance of zero runs the whole budget
        target_cost: 0.0,
        generations: 10,
        ..LearningLoopConfig::default()
    };
    let out = learning_loop(&cost, &config)?;
    println!("{} analysis passes", out.passes.len());
    write_records_csv(&out.records, std::io::stdout())?;
    println!(
        "best |G| = {}, J = {:.3e}, converged {}",
        out.best_group.len(),
        out.best_cost,
        out.converged
    );
    Ok(())
}
