// Rounds affordable under a fixed energy budget and the resulting
// Cramér–Rao bound, for several probe sizes.

use enfreq::channel::NoiseParams;
use enfreq::energetics::ledger;
use enfreq::metrology::optimal_setting;
use enfreq::optimize::{optimal_time, rounds_and_bound, FisherMode, Objective};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = NoiseParams::reference();
    let budget = 10.0 * params.omega();
    for n in [1, 2, 4, 9, 20] {
        let opt = optimal_time(&params, n, Objective::Energy, FisherMode::SmallR)?;
        let l = ledger(&params, n, opt.t_star, &optimal_setting(n, params.omega(), opt.t_star))?;
        let fisher = FisherMode::SmallR.fisher(&params, n, opt.t_star)?;
        let b = rounds_and_bound(budget, &l, fisher)?;
        println!("n = {n:>2}: t* = {:.3}, cost/round = {:.3e}, rounds = {:>6}, delta_omega >= {:.4e}", opt.t_star, l.cost_per_round, b.rounds, b.delta_omega);
    }
    Ok(())
}

fn main() {
    run_example().expect("energy_budget failed");
}
