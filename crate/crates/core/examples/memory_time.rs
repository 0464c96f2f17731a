// Energy efficiency of a two-atom probe as the bath memory shortens.

use enfreq::channel::NoiseParams;
use enfreq::numeric::log_grid;
use enfreq::optimize::{scan_lambda, FisherMode, TimeSearch};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = NoiseParams::reference();
    let rows = scan_lambda(&params, &log_grid(1.0, 100.0, 9), 2, FisherMode::SmallR, &TimeSearch::default())?;
    for r in &rows {
        println!("lambda = {:>8.3}: t* = {:.5}, eta_E = {:.8}", r.lambda, r.t_star, r.eta_energy);
    }
    assert!(rows.windows(2).all(|w| w[1].eta_energy < w[0].eta_energy));
    Ok(())
}

fn main() {
    run_example().expect("memory_time failed");
}
