// Optimal efficiencies over probe sizes with power-law fits.

use enfreq::channel::NoiseParams;
use enfreq::optimize::{scaling_fit, scan_size, FisherMode, TimeSearch};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = NoiseParams::reference();
    let sizes: Vec<usize> = (10..=200).step_by(10).collect();
    let rows = scan_size(&params, &sizes, FisherMode::SmallR, &TimeSearch::default())?;
    for r in rows.iter().step_by(4) {
        println!("n = {:>3}: t'* = {:.4}, eta_T = {:.4e}, t* = {:.4}, eta_E = {:.4e}", r.n, r.t_star_time, r.eta_time, r.t_star_energy, r.eta_energy);
    }
    let fit = |f: fn(&enfreq::optimize::SizeRow) -> f64| scaling_fit(&rows.iter().map(|r| (r.n as f64, f(r))).collect::<Vec<_>>());
    let time = fit(|r| r.eta_time)?;
    let energy = fit(|r| r.eta_energy)?;
    let t_star = fit(|r| r.t_star_energy)?;
    println!("eta_T ~ n^{:.3} (r2 {:.4})", time.exponent, time.r_squared);
    println!("eta_E ~ n^{:.3} (r2 {:.4})", energy.exponent, energy.r_squared);
    println!("t*    ~ n^{:.3} (r2 {:.4})", t_star.exponent, t_star.r_squared);
    Ok(())
}

fn main() {
    run_example().expect("size_scaling failed");
}
