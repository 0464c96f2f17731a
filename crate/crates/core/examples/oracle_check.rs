// Dense simulation of one protocol round against the block formulas, the
// master-equation cross-check, and a short randomised verification.

use enfreq::blockstate::{block_coefficients, readout_probabilities, MeasurementSetting};
use enfreq::channel::{apply_to_qubit, channel_at, NoiseParams, QubitDensity};
use enfreq::oracle::{integrate_time_local, run_pipeline, verify, VerifyConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = NoiseParams::new(1.0, 1.5, 0.05, 2.0)?;
    let (n, t) = (4, 0.8);
    let setting = MeasurementSetting::new(0.3, 1.1, params.omega());
    let pipe = run_pipeline(&params, n, t, &setting)?;
    let snap = channel_at(&params, t)?;
    let dist = readout_probabilities(&block_coefficients(n, params.epsilon(), &snap)?, snap.phi, &setting)?;
    let control = 1usize << (n - 1);
    let worst = (0..control)
        .flat_map(|x| {
            let [p0, p1] = dist.blocks[x.count_ones() as usize].probabilities();
            [(pipe.rho6.get(x, x).re - p0).abs(), (pipe.rho6.get(x | control, x | control).re - p1).abs()]
        })
        .fold(0.0, f64::max);
    println!("n = {n}: max probability deviation {worst:.2e}, E(rho3) = {:.1e}", pipe.rho3.energy(params.omega()));

    let input = QubitDensity::pure(1.1, -0.4);
    let ode = integrate_time_local(&params, &input, t)?;
    let closed = apply_to_qubit(&snap, &input)?;
    println!("master equation vs channel: {:.2e}", ode.max_abs_diff(&closed));

    let report = verify(&VerifyConfig { draws: 25, ..VerifyConfig::default() })?;
    for c in &report.checks {
        println!("{:<14} {:.2e} (tol {:.0e}) {}", c.kind.name(), c.max_deviation, c.tolerance, if c.passed { "ok" } else { "FAIL" });
    }
    assert!(report.passed());
    Ok(())
}

fn main() {
    run_example().expect("oracle_check failed");
}
