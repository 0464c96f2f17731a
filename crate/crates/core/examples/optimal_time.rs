// Optimal interrogation time under a time budget and under an energy
// budget, and a joint search over time and readout angles.

use enfreq::channel::NoiseParams;
use enfreq::optimize::{joint_optimum, optimal_time, FisherMode, Objective, TimeSearch};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = NoiseParams::reference();
    let n = 9;
    for objective in [Objective::Time, Objective::Energy] {
        let opt = optimal_time(&params, n, objective, FisherMode::SmallR)?;
        println!(
            "{objective:?}: t* = {:.6}, efficiency = {:.6e}, bracket = [{:.4}, {:.4}], converged = {}",
            opt.t_star, opt.value, opt.bracket.0, opt.bracket.1, opt.converged
        );
    }
    let joint = joint_optimum(&params, n, Objective::Energy, FisherMode::Exact, &TimeSearch::default())?;
    let (z1, z2) = joint.setting.reduced();
    println!("joint: t = {:.6}, zeta1 = {z1:.4}, zeta2 = {z2:.4}, eta_E = {:.6e}", joint.t, joint.value);
    Ok(())
}

fn main() {
    run_example().expect("optimal_time failed");
}
