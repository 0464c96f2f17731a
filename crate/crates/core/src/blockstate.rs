//! Hamming-weight block representation of the evolved GHZ-diagonal probe.
//!
//! After free evolution, the rotation `𝓤_{ζ1}^{⊗n}` and the fan-out CNOT,
//! the probe is block diagonal in the register basis:
//!
//! ```text
//! ρ5 = Σ_x [[a_x, e^{-iϕ f(x)} c_x], [e^{iϕ f(x)} c_x, b_x]] ⊗ |x⟩⟨x|,   ϕ = ωt + ζ1
//! ```
//!
//! and every coefficient depends on the register string `x` only through its
//! Hamming weight `m`. The `n - 1` register qubits therefore collapse to `n`
//! blocks, each carrying the multiplicity `C(n-1, m)`.
//!
//! Coefficients are kept as logarithms: for a few hundred qubits `a_m`, `b_m`
//! and `c_m` all fall below the smallest positive `f64`, while the
//! multiplicity-weighted values stay representable.

use crate::channel::{cp_check, ChannelSnapshot};
use crate::error::{domain, Error, Result};
use crate::numeric::{log_add_exp, log_sub_exp, pairwise_sum};

const LN_HALF: f64 = -std::f64::consts::LN_2;

/// Probabilities this far below zero are treated as rounding and clamped.
pub const NEGATIVE_PROBABILITY_SLACK: f64 = 1e-14;

/// `ln C(n, m)`.
pub fn binomial_log(n: usize, m: usize) -> Result<f64> {
    if m > n {
        return domain(format!("binomial index {m} exceeds {n}"));
    }
    let k = m.min(n - m);
    let mut acc = 0.0;
    for i in 1..=k {
        acc += ((n - k + i) as f64 / i as f64).ln();
    }
    Ok(acc)
}

/// `ln C(n, m)` for all `m = 0..=n`.
fn binomial_log_row(n: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    row.push(acc);
    for m in 0..n {
        acc += ((n - m) as f64 / (m + 1) as f64).ln();
        row.push(acc);
    }
    row
}

/// `k · l`, with `0 · (-inf) = 0`.
fn xlogy(k: usize, l: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * l
    }
}

/// One Hamming-weight block of the probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    /// Hamming weight of the register string.
    pub m: usize,
    /// `f_m = n - 2m`.
    pub f: i64,
    /// `ln C(n-1, m)`.
    pub log_mult: f64,
    pub log_a: f64,
    pub log_b: f64,
    /// `ln |c_m|`.
    pub log_c: f64,
    /// Sign of `c_m` (0 when `c_m` vanishes).
    pub c_sign: f64,
}

impl Block {
    pub fn a(&self) -> f64 {
        self.log_a.exp()
    }

    pub fn b(&self) -> f64 {
        self.log_b.exp()
    }

    pub fn c(&self) -> f64 {
        self.c_sign * self.log_c.exp()
    }

    pub fn multiplicity(&self) -> f64 {
        self.log_mult.exp()
    }

    /// `ln(a_m + b_m)`.
    pub fn log_sum(&self) -> f64 {
        log_add_exp(self.log_a, self.log_b)
    }

    /// `2 c_m / (a_m + b_m)`, bounded by one in magnitude for a valid state.
    pub fn contrast(&self) -> f64 {
        if self.c_sign == 0.0 {
            return 0.0;
        }
        self.c_sign * (self.log_c + std::f64::consts::LN_2 - self.log_sum()).exp()
    }

    /// `(C a_m, C b_m, C c_m)` with `C = C(n-1, m)`.
    pub fn weighted(&self) -> (f64, f64, f64) {
        (
            (self.log_mult + self.log_a).exp(),
            (self.log_mult + self.log_b).exp(),
            self.c_sign * (self.log_mult + self.log_c).exp(),
        )
    }

    /// `C (a_m + b_m)`, the total probability carried by this block.
    pub fn weight(&self) -> f64 {
        (self.log_mult + self.log_sum()).exp()
    }
}

/// The evolved probe in block form.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeBlocks {
    n: usize,
    epsilon: f64,
    snapshot: ChannelSnapshot,
    blocks: Vec<Block>,
}

impl ProbeBlocks {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn snapshot(&self) -> &ChannelSnapshot {
        &self.snapshot
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// `Σ_m C(n-1, m)(a_m + b_m)`.
    pub fn trace(&self) -> f64 {
        let w: Vec<f64> = self.blocks.iter().map(Block::weight).collect();
        pairwise_sum(&w)
    }

    /// Copy with every `c_m` negated. Used to check that the verification
    /// suite notices a sign error.
    pub fn negate_coherences(&self) -> Self {
        let mut out = self.clone();
        for b in &mut out.blocks {
            b.c_sign = -b.c_sign;
        }
        out
    }
}

/// Build the block coefficients for an `n`-atom probe with polarization bias
/// `epsilon` after the channel `snapshot`.
pub fn block_coefficients(n: usize, epsilon: f64, snapshot: &ChannelSnapshot) -> Result<ProbeBlocks> {
    if n == 0 {
        return domain("probe size must be at least 1");
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return domain(format!("polarization bias must lie in [0, 1], got {epsilon}"));
    }
    let status = cp_check(snapshot);
    if !status.is_cp {
        return Err(Error::NotCompletelyPositive { margin: status.margin });
    }
    let ChannelSnapshot { eta_par, eta_perp, kappa, .. } = *snapshot;

    // ln α_{∓ε}, ln β_{∓ε}
    let ln_alpha_lo = LN_HALF + (-epsilon * eta_par + kappa).ln_1p();
    let ln_beta_lo = LN_HALF + (epsilon * eta_par - kappa).ln_1p();
    let ln_alpha_hi = LN_HALF + (epsilon * eta_par + kappa).ln_1p();
    let ln_beta_hi = LN_HALF + (-epsilon * eta_par - kappa).ln_1p();

    let ln_minus = (-epsilon).ln_1p();
    let ln_plus = epsilon.ln_1p();
    let ln_prefactor = n as f64 * eta_perp.ln() - (n + 1) as f64 * std::f64::consts::LN_2;

    let mults = binomial_log_row(n - 1);
    let blocks = (0..n)
        .map(|m| {
            let k = n - m;
            let log_a = LN_HALF
                + log_add_exp(
                    xlogy(k, ln_alpha_lo) + xlogy(m, ln_beta_lo),
                    xlogy(k, ln_alpha_hi) + xlogy(m, ln_beta_hi),
                );
            let log_b = LN_HALF
                + log_add_exp(
                    xlogy(m, ln_alpha_lo) + xlogy(k, ln_beta_lo),
                    xlogy(m, ln_alpha_hi) + xlogy(k, ln_beta_hi),
                );
            // (1-ε)^{n-m}(1+ε)^m - (1-ε)^m(1+ε)^{n-m}
            let (c_sign, log_bracket) = if epsilon < 1.0 {
                // factor out ((1-ε)(1+ε))^{min} to avoid cancelling large logs
                let lo = m.min(k);
                let common = lo as f64 * (ln_minus + ln_plus);
                let (s, l) = log_sub_exp(xlogy(k - lo, ln_minus) + xlogy(m - lo, ln_plus),
                                         xlogy(m - lo, ln_minus) + xlogy(k - lo, ln_plus));
                (s, common + l)
            } else {
                log_sub_exp(xlogy(k, ln_minus) + xlogy(m, ln_plus),
                            xlogy(m, ln_minus) + xlogy(k, ln_plus))
            };
            let (c_sign, log_c) = if c_sign == 0.0 || eta_perp == 0.0 {
                (0.0, f64::NEG_INFINITY)
            } else {
                (c_sign, ln_prefactor + log_bracket)
            };
            Block { m, f: n as i64 - 2 * m as i64, log_mult: mults[m], log_a, log_b, log_c, c_sign }
        })
        .collect();
    Ok(ProbeBlocks { n, epsilon, snapshot: *snapshot, blocks })
}

/// Readout configuration: the per-qubit pre-rotation `ζ1`, the angle `ζ2` of
/// the generalised Hadamard on the control qubit, and the frequency estimate
/// `ω̄` the rotation was tuned to.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MeasurementSetting {
    pub zeta1: f64,
    pub zeta2: f64,
    pub omega_bar: f64,
}

impl MeasurementSetting {
    pub fn new(zeta1: f64, zeta2: f64, omega_bar: f64) -> Self {
        Self { zeta1, zeta2, omega_bar }
    }

    /// Angles reduced to `[0, 2π)`, for display only.
    pub fn reduced(&self) -> (f64, f64) {
        let tau = std::f64::consts::TAU;
        (self.zeta1.rem_euclid(tau), self.zeta2.rem_euclid(tau))
    }

    /// Phase argument `ζ2 - f (φ + ζ1)` of block weight `f`.
    pub fn angle(&self, f: i64, phi: f64) -> f64 {
        self.zeta2 - f as f64 * (phi + self.zeta1)
    }
}

/// Outcome probabilities of one Hamming-weight block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeBlock {
    pub m: usize,
    pub log_mult: f64,
    /// `ln((a_m + b_m)/2)`.
    pub log_half_sum: f64,
    /// `(1 + 2c cosθ/(a+b), 1 - 2c cosθ/(a+b))` after clamping.
    pub factors: [f64; 2],
}

impl OutcomeBlock {
    /// `(p_{0,m}, p_{1,m})` for a single register string of weight `m`.
    pub fn probabilities(&self) -> [f64; 2] {
        let h = self.log_half_sum.exp();
        [h * self.factors[0], h * self.factors[1]]
    }

    /// Probabilities summed over the `C(n-1, m)` strings of weight `m`.
    pub fn weighted(&self) -> [f64; 2] {
        let h = (self.log_mult + self.log_half_sum).exp();
        [h * self.factors[0], h * self.factors[1]]
    }
}

/// Energy-basis outcome distribution of the final probe state.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    pub n: usize,
    pub blocks: Vec<OutcomeBlock>,
}

impl OutcomeDistribution {
    pub fn total(&self) -> f64 {
        let w: Vec<f64> = self.blocks.iter().flat_map(|b| b.weighted()).collect();
        pairwise_sum(&w)
    }

    /// `Σ_m C(n-1, m)(p_{0,m} - p_{1,m}) = ⟨σz⟩` of the control qubit.
    pub fn control_polarization(&self) -> f64 {
        let d: Vec<f64> = self
            .blocks
            .iter()
            .map(|b| {
                let [p0, p1] = b.weighted();
                p0 - p1
            })
            .collect();
        pairwise_sum(&d)
    }

    /// Weighted `[p0, p1]` pairs in block order.
    pub fn weighted(&self) -> Vec<[f64; 2]> {
        self.blocks.iter().map(OutcomeBlock::weighted).collect()
    }
}

/// `p_{0,m} = ½[a_m + b_m + 2c_m cos(ζ2 - f_m(φ + ζ1))]` and its complement.
pub fn readout_probabilities(
    blocks: &ProbeBlocks,
    phi: f64,
    setting: &MeasurementSetting,
) -> Result<OutcomeDistribution> {
    let out = blocks
        .blocks
        .iter()
        .map(|b| {
            let log_half_sum = LN_HALF + b.log_sum();
            let q = b.contrast() * setting.angle(b.f, phi).cos();
            let scale = (b.log_mult + log_half_sum).exp();
            let mut factors = [1.0 + q, 1.0 - q];
            for fac in &mut factors {
                if *fac < 0.0 {
                    let value = scale * *fac;
                    if value < -NEGATIVE_PROBABILITY_SLACK {
                        return Err(Error::NegativeProbability { m: b.m, value });
                    }
                    *fac = 0.0;
                }
            }
            Ok(OutcomeBlock { m: b.m, log_mult: b.log_mult, log_half_sum, factors })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OutcomeDistribution { n: blocks.n, blocks: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{channel_at, NoiseParams};

    /// Stirling series for ln Γ(z), accurate to ~1e-15 for z ≥ 10.
    fn ln_gamma_large(z: f64) -> f64 {
        let z2 = z * z;
        (z - 0.5) * z.ln() - z + 0.5 * (std::f64::consts::TAU).ln() + 1.0 / (12.0 * z)
            - 1.0 / (360.0 * z * z2)
            + 1.0 / (1260.0 * z * z2 * z2)
            - 1.0 / (1680.0 * z * z2 * z2 * z2)
    }

    /// Direct (non-log) coefficients for small n.
    fn direct(n: usize, eps: f64, s: &ChannelSnapshot, m: usize) -> (f64, f64, f64) {
        let (k, m_) = ((n - m) as i32, m as i32);
        let (al, bl) = (s.alpha(-eps), s.beta(-eps));
        let (ah, bh) = (s.alpha(eps), s.beta(eps));
        let a = 0.5 * (al.powi(k) * bl.powi(m_) + ah.powi(k) * bh.powi(m_));
        let b = 0.5 * (al.powi(m_) * bl.powi(k) + ah.powi(m_) * bh.powi(k));
        let c = s.eta_perp.powi(n as i32) / 2f64.powi(n as i32 + 1)
            * ((1.0 - eps).powi(k) * (1.0 + eps).powi(m_) - (1.0 - eps).powi(m_) * (1.0 + eps).powi(k));
        (a, b, c)
    }

    #[test]
    fn binomial_log_examples() {
        assert!((binomial_log(8, 4).unwrap() - 70f64.ln()).abs() < 1e-14);
        assert_eq!(binomial_log(17, 0).unwrap(), 0.0);
        assert_eq!(binomial_log(17, 17).unwrap(), 0.0);
        assert!(binomial_log(3, 4).is_err());
        let big = binomial_log(2000, 1000).unwrap();
        let oracle = ln_gamma_large(2001.0) - 2.0 * ln_gamma_large(1001.0);
        assert!(big.is_finite());
        assert!((big - oracle).abs() / oracle < 1e-12);
        let mut prev = f64::NEG_INFINITY;
        for m in 0..=1000 {
            let v = binomial_log(2000, m).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn binomial_row_matches_direct() {
        let row = binomial_log_row(40);
        for (m, v) in row.iter().enumerate() {
            let d = binomial_log(40, m).unwrap();
            assert!((v - d).abs() < 1e-12 * d.max(1.0));
        }
    }

    #[test]
    fn single_atom_block() {
        let p = NoiseParams::reference();
        let s = channel_at(&p, 1.0).unwrap();
        let eps = p.epsilon();
        let blocks = block_coefficients(1, eps, &s).unwrap();
        let b = blocks.blocks()[0];
        assert_eq!(b.f, 1);
        assert!((b.a() - 0.5 * (1.0 + s.kappa)).abs() < 1e-15);
        assert!((b.b() - 0.5 * (1.0 - s.kappa)).abs() < 1e-15);
        assert!((b.c() + s.eta_perp * eps / 2.0).abs() < 1e-17);
    }

    #[test]
    fn unbiased_atoms_carry_no_coherence() {
        let s = ChannelSnapshot { t: 0.5, eta_par: 0.8, eta_perp: 0.9, kappa: 0.0, phi: 0.5 };
        let blocks = block_coefficients(7, 0.0, &s).unwrap();
        assert!(blocks.blocks().iter().all(|b| b.c() == 0.0));
        let dist = readout_probabilities(&blocks, 0.5, &MeasurementSetting::new(0.3, 1.1, 1.0)).unwrap();
        for b in &dist.blocks {
            let [p0, p1] = b.probabilities();
            assert_eq!(p0, p1);
        }
    }

    #[test]
    fn log_space_matches_direct_evaluation() {
        let p = NoiseParams::new(1.0, 0.9, 0.02, 2.0).unwrap();
        for n in 1..=10 {
            for &t in &[0.0, 0.4, 2.5] {
                let s = channel_at(&p, t).unwrap();
                let blocks = block_coefficients(n, p.epsilon(), &s).unwrap();
                for b in blocks.blocks() {
                    let (a, bb, c) = direct(n, p.epsilon(), &s, b.m);
                    assert!((b.a() - a).abs() < 1e-14 * a.abs().max(1e-300));
                    assert!((b.b() - bb).abs() < 1e-14 * bb.abs().max(1e-300));
                    assert!((b.c() - c).abs() <= 1e-13 * c.abs() + 1e-300);
                    assert_eq!(b.f, n as i64 - 2 * b.m as i64);
                }
                assert!((blocks.trace() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn coherence_sign_structure() {
        let p = NoiseParams::new(1.0, 1.3, 0.05, 4.0).unwrap();
        let s = channel_at(&p, 0.6).unwrap();
        for n in 2..=10 {
            let blocks = block_coefficients(n, p.epsilon(), &s).unwrap();
            let c: Vec<f64> = blocks.blocks().iter().map(Block::c).collect();
            for m in 0..n {
                // c_m carries the sign of -(n - 2m) and vanishes at m = n/2
                let f = n as i64 - 2 * m as i64;
                if f == 0 {
                    assert_eq!(c[m], 0.0);
                } else {
                    assert!(c[m] * f as f64 <= 0.0 && c[m] != 0.0);
                }
                // antisymmetry under m -> n - m
                if m >= 1 {
                    let mirror = n - m;
                    if mirror < n {
                        assert!((c[mirror] + c[m]).abs() <= 1e-14 * c[m].abs());
                    }
                }
            }
        }
    }

    #[test]
    fn positivity_of_each_block() {
        let p = NoiseParams::new(1.0, 1.2, 0.05, 1.0).unwrap();
        let s = channel_at(&p, 0.9).unwrap();
        let blocks = block_coefficients(12, p.epsilon(), &s).unwrap();
        for b in blocks.blocks() {
            assert!(b.a() > 0.0 && b.b() > 0.0);
            assert!(b.contrast().abs() <= 1.0);
            let gap = ((b.a() - b.b()).powi(2) + 4.0 * b.c() * b.c()).sqrt();
            assert!(gap <= b.a() + b.b());
        }
    }

    #[test]
    fn large_probe_stays_finite() {
        let p = NoiseParams::reference();
        let s = channel_at(&p, 0.3).unwrap();
        let blocks = block_coefficients(2000, p.epsilon(), &s).unwrap();
        for b in blocks.blocks() {
            let (a, bb, c) = b.weighted();
            assert!(a.is_finite() && bb.is_finite() && c.is_finite());
            assert!(a >= 0.0 && bb >= 0.0);
            assert!(b.log_a.is_finite() && b.log_b.is_finite());
        }
        assert!((blocks.trace() - 1.0).abs() < 1e-9);
        let dist = readout_probabilities(&blocks, 0.3, &MeasurementSetting::new(0.2, 0.0, 1.0)).unwrap();
        assert!((dist.total() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn probabilities_sum_to_one() {
        let p = NoiseParams::new(2.0, 2.4, 0.1, 3.0).unwrap();
        let s = channel_at(&p, 0.7).unwrap();
        for n in [1, 2, 5, 9, 30] {
            let blocks = block_coefficients(n, p.epsilon(), &s).unwrap();
            for &(z1, z2) in &[(0.0, 0.0), (1.2, -0.4), (3.0, 2.0)] {
                let d = readout_probabilities(&blocks, s.phi, &MeasurementSetting::new(z1, z2, 2.0)).unwrap();
                assert!((d.total() - 1.0).abs() < 1e-12);
                assert!(d.blocks.iter().all(|b| b.factors.iter().all(|&f| f >= 0.0)));
            }
        }
    }

    #[test]
    fn pure_limit_clamps_rounding_negatives() {
        // ε = 1 with the identity channel is a pure GHZ state; the p1 outcome
        // of the m = 0 block vanishes exactly at θ = 0.
        let blocks = block_coefficients(3, 1.0, &ChannelSnapshot::identity()).unwrap();
        let b0 = blocks.blocks()[0];
        assert!((b0.c() + 0.5).abs() < 1e-15);
        let d = readout_probabilities(&blocks, 0.0, &MeasurementSetting::new(0.0, std::f64::consts::PI, 1.0)).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-14);
        assert!(d.blocks[0].factors.iter().all(|&f| f >= 0.0));
    }

    #[test]
    fn rejects_bad_input() {
        let s = ChannelSnapshot::identity();
        assert!(block_coefficients(0, 0.1, &s).is_err());
        assert!(block_coefficients(3, 1.5, &s).is_err());
        let bad = ChannelSnapshot { t: 1.0, eta_par: 0.9, eta_perp: 0.99, kappa: 0.0, phi: 0.0 };
        assert!(matches!(block_coefficients(3, 0.1, &bad), Err(Error::NotCompletelyPositive { .. })));
    }

    #[test]
    fn reduced_angles() {
        let s = MeasurementSetting::new(-0.5, 7.0, 1.0);
        let (a, b) = s.reduced();
        assert!((a - (std::f64::consts::TAU - 0.5)).abs() < 1e-15);
        assert!((b - (7.0 - std::f64::consts::TAU)).abs() < 1e-15);
        assert_eq!(s.zeta1, -0.5);
    }
}
