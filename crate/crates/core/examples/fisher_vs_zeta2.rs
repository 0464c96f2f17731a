// Fisher information of the energy readout against the angle ζ2, next to
// the small-R and block-exact quantum bounds.

use enfreq::blockstate::MeasurementSetting;
use enfreq::channel::NoiseParams;
use enfreq::metrology::{fisher_report, optimal_setting};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = NoiseParams::reference();
    let (n, t) = (9, 1.0);
    let zeta1 = optimal_setting(n, params.omega(), t).zeta1;
    println!("{:>8} {:>14} {:>14} {:>14} {:>14}", "zeta2", "cfi_exact", "cfi_small_R", "qfi_exact", "qfi_small_R");
    for k in -4..=4 {
        let zeta2 = k as f64 * std::f64::consts::FRAC_PI_4;
        let r = fisher_report(&params, n, t, &MeasurementSetting::new(zeta1, zeta2, params.omega()))?;
        assert!(r.is_ordered());
        println!("{zeta2:>8.4} {:>14.8e} {:>14.8e} {:>14.8e} {:>14.8e}", r.cfi_exact, r.cfi_small_r, r.qfi_exact, r.qfi_small_r);
    }
    let best = optimal_setting(n, params.omega(), t);
    println!("parity rule for n = {n}: zeta1 = {:.6}, zeta2 = {:.6}", best.zeta1, best.zeta2);
    Ok(())
}

fn main() {
    run_example().expect("fisher_vs_zeta2 failed");
}
