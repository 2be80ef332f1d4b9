//! The synthesized parity kick checked against exact dynamics: at fixed
//! total time the residual error is first order in the pulse interval.

use bbforge::bb_synthesis::solve_storage;
use bbforge::models;
use bbforge::open_system::{apply_bb_cycle, reduced_state, DensityMatrix, PulseGroup};
use bbforge::optimizer::measure_generator;

fn main() -> bbforge::Result<()> {
    let model = models::dephasing_with_bath_dynamics(1.0, 1.0, [0.0, 0.5, 0.6])?;
    let xi = measure_generator(&model, &PulseGroup::trivial(2, 0.01)?, 1)?.single(0)?;
    let kick = solve_storage(&xi, 0.01, 4)?.group;
    let rho = DensityMatrix::plus(1);
    println!("free evolution to T = 1: error {:.4e}", reduced_state(&model, &rho, 1.0)?.trace_distance(&rho));
    let mut last = None;
    for dt in [0.2, 0.1, 0.05, 0.025, 0.0125] {
        let g = PulseGroup::new(kick.pulses().to_vec(), dt)?;
        let cycles = (1.0 / g.cycle_time()).round() as usize;
        let err = apply_bb_cycle(&model, &g, cycles, &rho)?.trace_distance(&rho);
        match last {
            Some(prev) => println!("dt = {dt:<7} error {err:.4e}  ratio {:.3}", prev / err),
            None => println!("dt = {dt:<7} error {err:.4e}"),
        }
        last = Some(err);
    }
    Ok(())
}
