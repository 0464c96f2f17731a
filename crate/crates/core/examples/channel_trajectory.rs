// Channel parameters, time-local rates and the CP margin along a trajectory,
// and the first positivity breakdown above the critical memory ratio.

use enfreq::channel::{channel_at, cp_check, first_xi_zero, positivity_threshold, time_local_rates, NoiseParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = NoiseParams::reference();
    println!("epsilon = {:.6e}, R = {:.6e}", params.epsilon(), params.ratio());
    println!("{:>6} {:>12} {:>12} {:>13} {:>12} {:>12}", "t", "eta_par", "eta_perp", "kappa", "gamma_z", "cp_margin");
    for t in [0.0, 0.1, 0.5, 1.0, 2.0, 5.0] {
        let s = channel_at(&params, t)?;
        let rates = time_local_rates(&params, t)?;
        let margin = cp_check(&s).margin;
        println!("{t:>6} {:>12.9} {:>12.9} {:>13.6e} {:>12.4e} {:>12.4e}", s.eta_par, s.eta_perp, s.kappa, rates.gamma_z, margin);
    }

    // above R = 1/4 the kernel oscillates: η∥ crosses zero, the time-local
    // rates blow up there, and for large enough R the map stops being CP
    let lambda = 2.0;
    let eps = (0.5f64).tanh();
    for ratio in [0.5, 2.0, 8.0, 32.0] {
        let p = NoiseParams::new(1.0, 1.0, ratio * lambda * eps, lambda)?;
        assert!(positivity_threshold(&p));
        let t0 = first_xi_zero(p.ratio(), lambda).expect("oscillating kernel");
        assert!(time_local_rates(&p, t0).is_err());
        let worst = (1..=400)
            .map(|k| channel_at(&p, k as f64 * 0.01 * t0 * 4.0).map(|s| cp_check(&s).margin))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        println!("R = {ratio:>4}: first zero of eta_par at t = {t0:.4}, smallest CP margin up to 4t0 = {worst:+.4e}");
    }
    Ok(())
}

fn main() {
    run_example().expect("channel_trajectory failed");
}
