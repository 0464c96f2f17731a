//! Average energy bookkeeping for one protocol round, with the probe
//! Hamiltonian `H = (ω/2) Σ_i σz_i` and `σz|0⟩ = +|0⟩`.

use serde::Serialize;

use crate::blockstate::{block_coefficients, readout_probabilities, MeasurementSetting, ProbeBlocks};
use crate::channel::{channel_at, NoiseParams};
use crate::error::{domain, Result};
use crate::numeric::pairwise_sum;

/// Work needed to turn `n` thermal atoms into the GHZ-diagonal probe, `½ωnε`.
pub fn init_cost(n: usize, omega: f64, epsilon: f64) -> f64 {
    0.5 * omega * n as f64 * epsilon
}

/// Energy of `n` thermal atoms, `-½ωnε`.
pub fn thermal_energy(n: usize, omega: f64, epsilon: f64) -> f64 {
    -init_cost(n, omega, epsilon)
}

/// Probe energy after the channel, `½ωnκ`.
pub fn energy_rho4(n: usize, omega: f64, kappa: f64) -> f64 {
    0.5 * omega * n as f64 * kappa
}

/// Probe energy after the pre-measurement unitaries, evaluated at the phase
/// stored in `blocks`:
///
/// ```text
/// (ω/2)(n-1)(ε²η∥² + κ²) + ω Σ_m C(n-1,m) c_m cos(ζ2 - f_m(φ + ζ1))
/// ```
pub fn energy_rho6(blocks: &ProbeBlocks, omega: f64, setting: &MeasurementSetting) -> f64 {
    let snap = blocks.snapshot();
    let eps = blocks.epsilon();
    let n = blocks.n();
    let populations = 0.5 * omega * (n - 1) as f64 * ((eps * snap.eta_par).powi(2) + snap.kappa * snap.kappa);
    let coherent: Vec<f64> = blocks
        .blocks()
        .iter()
        .map(|b| b.weighted().2 * setting.angle(b.f, snap.phi).cos())
        .collect();
    populations + omega * pairwise_sum(&coherent)
}

/// Per-round energy account.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyLedger {
    pub e_init: f64,
    pub e_rho4: f64,
    pub e_rho6: f64,
    /// `e_rho6 - e_rho4`
    pub e_meas: f64,
    /// Constant added per round, zero unless a projection cost is modelled.
    pub surcharge: f64,
    /// `e_init + e_meas + surcharge`
    pub cost_per_round: f64,
}

impl EnergyLedger {
    fn from_parts(e_init: f64, e_rho4: f64, e_rho6: f64, surcharge: f64) -> Self {
        let e_meas = e_rho6 - e_rho4;
        Self { e_init, e_rho4, e_rho6, e_meas, surcharge, cost_per_round: e_init + e_meas + surcharge }
    }
}

pub fn ledger(params: &NoiseParams, n: usize, t: f64, setting: &MeasurementSetting) -> Result<EnergyLedger> {
    ledger_with_surcharge(params, n, t, setting, 0.0)
}

pub fn ledger_with_surcharge(
    params: &NoiseParams,
    n: usize,
    t: f64,
    setting: &MeasurementSetting,
    surcharge: f64,
) -> Result<EnergyLedger> {
    if !(surcharge >= 0.0 && surcharge.is_finite()) {
        return domain(format!("surcharge must be finite and nonnegative, got {surcharge}"));
    }
    let snapshot = channel_at(params, t)?;
    let blocks = block_coefficients(n, params.epsilon(), &snapshot)?;
    let omega = params.omega();
    Ok(EnergyLedger::from_parts(
        init_cost(n, omega, params.epsilon()),
        energy_rho4(n, omega, snapshot.kappa),
        energy_rho6(&blocks, omega, setting),
        surcharge,
    ))
}

/// `Tr(H ρ6)` summed directly over the readout outcomes: a control outcome
/// of 0 (1) on a register of weight `m` carries energy `(ω/2) f_m`
/// (`(ω/2)(f_m - 2)`).
pub fn energy_from_outcomes(blocks: &ProbeBlocks, omega: f64, setting: &MeasurementSetting) -> Result<f64> {
    let dist = readout_probabilities(blocks, blocks.snapshot().phi, setting)?;
    let terms: Vec<f64> = blocks
        .blocks()
        .iter()
        .zip(dist.weighted())
        .map(|(b, [p0, p1])| {
            let f = b.f as f64;
            0.5 * omega * (p0 * f + p1 * (f - 2.0))
        })
        .collect();
    Ok(pairwise_sum(&terms))
}
