// Per-round energy account at the optimal readout, with the closed-form
// pre-measurement energy checked against a sum over outcomes.

use enfreq::blockstate::block_coefficients;
use enfreq::channel::{channel_at, NoiseParams};
use enfreq::energetics::{energy_from_outcomes, energy_rho6, ledger};
use enfreq::metrology::optimal_setting;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = NoiseParams::reference();
    let t = 1.0;
    println!("{:>3} {:>12} {:>13} {:>12} {:>12}", "n", "e_init", "e_rho4", "e_meas", "cost");
    for n in 2..=9 {
        let setting = optimal_setting(n, params.omega(), t);
        let l = ledger(&params, n, t, &setting)?;
        assert!(l.e_meas > 0.0);
        println!("{n:>3} {:>12.6e} {:>13.6e} {:>12.6e} {:>12.6e}", l.e_init, l.e_rho4, l.e_meas, l.cost_per_round);

        let blocks = block_coefficients(n, params.epsilon(), &channel_at(&params, t)?)?;
        let closed = energy_rho6(&blocks, params.omega(), &setting);
        let summed = energy_from_outcomes(&blocks, params.omega(), &setting)?;
        assert!((closed - summed).abs() < 1e-14);
    }
    Ok(())
}

fn main() {
    run_example().expect("energy_ledger failed");
}
