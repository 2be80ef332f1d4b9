//! Dephasing plus a weak bit flip: the first pass removes the dominant
//! dephasing with an x-kick, the second pass sees the residual x noise and
//! settles on a y-kick that removes both.

use bbforge::bb_synthesis::TargetSpec;
use bbforge::models;
use bbforge::optimizer::{analysis_chain, CostFunction, CostSettings, LearningLoopConfig};

fn main() -> bbforge::Result<()> {
    let model = models::dephasing_bit_flip(1.0, 0.05, [0.3, 0.0, 0.8])?;
    let cost = CostFunction::new(model, TargetSpec::storage(0), CostSettings::default())?;
    for pass in analysis_chain(&cost, &LearningLoopConfig::default())? {
        let aa = pass.candidate.axis_angles().unwrap_or_default();
        println!(
            "pass {}: measured {:.4?} kept {:.4?}",
            pass.pass, pass.measured, pass.thresholded
        );
        println!(
            "  |G| = {}, kick axis {:.6?}, J = {:.3e}",
            pass.candidate.len(),
            aa.get(1).map(|a| a.axis),
            pass.cost
        );
    }
    Ok(())
}
