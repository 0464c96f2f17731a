//! Classical and quantum Fisher information of the energy-basis readout.
//!
//! Every quantity here is a sum over Hamming-weight blocks and is homogeneous
//! of degree one in the block coefficients, so blocks are evaluated with
//! their multiplicity folded in. This keeps probe sizes in the thousands
//! representable.

use num_complex::Complex64;

use crate::blockstate::{block_coefficients, readout_probabilities, MeasurementSetting, ProbeBlocks};
use crate::channel::{channel_at, NoiseParams};
use crate::error::{domain, Result};
use crate::numeric::pairwise_sum;

/// Relative ω step for central differences.
pub const FD_RELATIVE_STEP: f64 = 1e-6;

/// Probabilities and derivatives below this are treated as absent.
pub const NEGLIGIBLE: f64 = 1e-30;

/// How the ω-derivative of the readout is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeMode {
    /// Central differences through ε(ω), R(ω), the channel and φ = ωt.
    FiniteDifference,
    /// R and ε held fixed: only the accumulated phase depends on ω.
    FrozenRatioBias,
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return domain(format!("interrogation time must be positive and finite, got {t}"));
    }
    Ok(())
}

/// Probe blocks after time `t` with every ω-dependent quantity evaluated at `omega`.
pub(crate) fn blocks_at(params: &NoiseParams, n: usize, t: f64, omega: f64) -> Result<ProbeBlocks> {
    let p = params.with_omega(omega)?;
    let snapshot = channel_at(&p, t)?;
    block_coefficients(n, p.epsilon(), &snapshot)
}

/// Central difference with one Richardson level, `(4 D(h/2) - D(h)) / 3`.
pub(crate) fn richardson<F>(f: F, x: f64, h: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<Vec<f64>>,
{
    let central = |step: f64| -> Result<Vec<f64>> {
        let hi = f(x + step)?;
        let lo = f(x - step)?;
        Ok(hi.iter().zip(&lo).map(|(u, v)| (u - v) / (2.0 * step)).collect())
    };
    let coarse = central(h)?;
    let fine = central(0.5 * h)?;
    Ok(fine.iter().zip(&coarse).map(|(f2, f1)| (4.0 * f2 - f1) / 3.0).collect())
}

/// `(∂p)² / p` with the negligible-term guard.
pub(crate) fn fisher_term(p: f64, dp: f64) -> f64 {
    if p <= NEGLIGIBLE && dp.abs() <= NEGLIGIBLE {
        0.0
    } else {
        dp * dp / p
    }
}

fn weighted_outcomes(params: &NoiseParams, n: usize, t: f64, omega: f64, setting: &MeasurementSetting) -> Result<Vec<f64>> {
    let blocks = blocks_at(params, n, t, omega)?;
    let dist = readout_probabilities(&blocks, blocks.snapshot().phi, setting)?;
    Ok(dist.weighted().into_iter().flatten().collect())
}

/// Classical Fisher information about ω of the energy measurement.
pub fn cfi(params: &NoiseParams, n: usize, t: f64, setting: &MeasurementSetting, mode: DerivativeMode) -> Result<f64> {
    match mode {
        DerivativeMode::FiniteDifference => cfi_with_step(params, n, t, setting, FD_RELATIVE_STEP),
        DerivativeMode::FrozenRatioBias => cfi_frozen(params, n, t, setting),
    }
}

/// Finite-difference CFI with an explicit relative ω step.
pub fn cfi_with_step(params: &NoiseParams, n: usize, t: f64, setting: &MeasurementSetting, rel_step: f64) -> Result<f64> {
    check_time(t)?;
    if !(rel_step > 0.0 && rel_step < 0.5) {
        return domain(format!("relative step must lie in (0, 0.5), got {rel_step}"));
    }
    let omega = params.omega();
    let p = weighted_outcomes(params, n, t, omega, setting)?;
    let dp = richardson(|w| weighted_outcomes(params, n, t, w, setting), omega, rel_step * omega)?;
    let terms: Vec<f64> = p.iter().zip(&dp).map(|(&p, &d)| fisher_term(p, d)).collect();
    Ok(pairwise_sum(&terms))
}

fn cfi_frozen(params: &NoiseParams, n: usize, t: f64, setting: &MeasurementSetting) -> Result<f64> {
    check_time(t)?;
    let blocks = blocks_at(params, n, t, params.omega())?;
    let phi = blocks.snapshot().phi;
    let dist = readout_probabilities(&blocks, phi, setting)?;
    let terms: Vec<f64> = blocks
        .blocks()
        .iter()
        .zip(&dist.blocks)
        .map(|(b, out)| {
            let [p0, p1] = out.weighted();
            // ∂θ/∂ω = -f t
            let half = (out.log_mult + out.log_half_sum).exp();
            let dp0 = half * b.contrast() * b.f as f64 * t * setting.angle(b.f, phi).sin();
            fisher_term(p0, dp0) + fisher_term(p1, -dp0)
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

/// QFI with R and ε frozen: `Σ_m C(n-1,m) 4 f_m² t² c_m² / (a_m + b_m)`.
pub fn qfi_small_r(params: &NoiseParams, n: usize, t: f64) -> Result<f64> {
    check_time(t)?;
    let blocks = blocks_at(params, n, t, params.omega())?;
    let ft2 = |f: i64| (f as f64 * t).powi(2);
    let terms: Vec<f64> = blocks
        .blocks()
        .iter()
        .map(|b| {
            let r = b.contrast();
            b.weight() * ft2(b.f) * r * r
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

/// Spectral decomposition of one (weighted) 2×2 control block
/// `[[a, z], [z*, b]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockEigensystem {
    pub nu_plus: f64,
    pub nu_minus: f64,
    pub gap: f64,
    /// Orthonormal eigenvectors for `nu_plus` and `nu_minus`, in that order.
    pub vectors: [[Complex64; 2]; 2],
}

impl BlockEigensystem {
    pub fn new(a: f64, b: f64, z: Complex64) -> Self {
        let gap = (a - b).hypot(2.0 * z.norm());
        let nu_plus = 0.5 * (a + b + gap);
        let nu_minus = (0.5 * (a + b - gap)).max(0.0);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        if gap == 0.0 {
            return Self { nu_plus, nu_minus, gap, vectors: [[one, zero], [zero, one]] };
        }
        let normalize = |v: [Complex64; 2]| {
            let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            [v[0] / norm, v[1] / norm]
        };
        // pick the branch where a - b and the gap add without cancellation
        let vectors = if a >= b {
            let d = Complex64::new(a - b + gap, 0.0);
            [normalize([d, 2.0 * z.conj()]), normalize([-2.0 * z, d])]
        } else {
            let d = Complex64::new(a - b - gap, 0.0);
            [normalize([2.0 * z, -d]), normalize([d, 2.0 * z.conj()])]
        };
        Self { nu_plus, nu_minus, gap, vectors }
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        [self.nu_plus, self.nu_minus]
    }

    /// `4 Σ_{s,s'} ν_s/(ν_s+ν_s')² |⟨s|D|s'⟩|²` for a Hermitian block derivative `D`.
    pub fn qfi_contribution(&self, derivative: &[[Complex64; 2]; 2]) -> f64 {
        let nu = self.eigenvalues();
        let mut acc = 0.0;
        for (s, vs) in self.vectors.iter().enumerate() {
            for (r, vr) in self.vectors.iter().enumerate() {
                let denom = nu[s] + nu[r];
                if denom <= NEGLIGIBLE {
                    continue;
                }
                let mut elem = Complex64::new(0.0, 0.0);
                for i in 0..2 {
                    for j in 0..2 {
                        elem += vs[i].conj() * derivative[i][j] * vr[j];
                    }
                }
                acc += 4.0 * nu[s] / (denom * denom) * elem.norm_sqr();
            }
        }
        acc
    }
}

/// Weighted control blocks `(a, b, z)` of the probe with ζ1 = 0, where
/// `z = c e^{-i f ω t}`.
fn weighted_control_blocks(blocks: &ProbeBlocks) -> Vec<(f64, f64, Complex64)> {
    let phi = blocks.snapshot().phi;
    blocks
        .blocks()
        .iter()
        .map(|b| {
            let (a, bb, c) = b.weighted();
            (a, bb, Complex64::from_polar(1.0, -(b.f as f64) * phi) * c)
        })
        .collect()
}

/// Eigensystems of every weighted control block of `blocks`.
pub fn block_eigensystems(blocks: &ProbeBlocks) -> Vec<BlockEigensystem> {
    weighted_control_blocks(blocks)
        .into_iter()
        .map(|(a, b, z)| BlockEigensystem::new(a, b, z))
        .collect()
}

/// Block-exact quantum Fisher information about ω.
pub fn qfi_exact(params: &NoiseParams, n: usize, t: f64, mode: DerivativeMode) -> Result<f64> {
    check_time(t)?;
    let omega = params.omega();
    let blocks = blocks_at(params, n, t, omega)?;
    let center = weighted_control_blocks(&blocks);
    let derivatives: Vec<[[Complex64; 2]; 2]> = match mode {
        DerivativeMode::FrozenRatioBias => blocks
            .blocks()
            .iter()
            .zip(&center)
            .map(|(b, &(_, _, z))| {
                let dz = Complex64::new(0.0, -(b.f as f64) * t) * z;
                let zero = Complex64::new(0.0, 0.0);
                [[zero, dz], [dz.conj(), zero]]
            })
            .collect(),
        DerivativeMode::FiniteDifference => {
            let flat = |w: f64| -> Result<Vec<f64>> {
                let bl = blocks_at(params, n, t, w)?;
                Ok(weighted_control_blocks(&bl)
                    .into_iter()
                    .flat_map(|(a, b, z)| [a, b, z.re, z.im])
                    .collect())
            };
            let d = richardson(flat, omega, FD_RELATIVE_STEP * omega)?;
            d.chunks_exact(4)
                .map(|c| {
                    let dz = Complex64::new(c[2], c[3]);
                    [[Complex64::new(c[0], 0.0), dz], [dz.conj(), Complex64::new(c[1], 0.0)]]
                })
                .collect()
        }
    };
    let terms: Vec<f64> = center
        .iter()
        .zip(&derivatives)
        .map(|(&(a, b, z), d)| BlockEigensystem::new(a, b, z).qfi_contribution(d))
        .collect();
    Ok(pairwise_sum(&terms))
}

/// Readout setting that maximises the frozen CFI: `ζ1 = π/2 - ω̄t`, and
/// `ζ2 = π/2` for even `n`, `0` for odd `n`.
pub fn optimal_setting(n: usize, omega_bar: f64, t: f64) -> MeasurementSetting {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let zeta2 = if n.is_multiple_of(2) { half_pi } else { 0.0 };
    MeasurementSetting::new(half_pi - omega_bar * t, zeta2, omega_bar)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FisherReport {
    pub cfi_exact: f64,
    pub cfi_small_r: f64,
    pub qfi_exact: f64,
    pub qfi_small_r: f64,
    /// Mode used for the two exact entries.
    pub derivative_mode: DerivativeMode,
}

impl FisherReport {
    /// Cramér–Rao ordering of both pairs at relative tolerance `1e-9`.
    pub fn is_ordered(&self) -> bool {
        self.cfi_exact <= self.qfi_exact * (1.0 + 1e-9) && self.cfi_small_r <= self.qfi_small_r * (1.0 + 1e-9)
    }
}

pub fn fisher_report(params: &NoiseParams, n: usize, t: f64, setting: &MeasurementSetting) -> Result<FisherReport> {
    let mode = DerivativeMode::FiniteDifference;
    Ok(FisherReport {
        cfi_exact: cfi(params, n, t, setting, mode)?,
        cfi_small_r: cfi(params, n, t, setting, DerivativeMode::FrozenRatioBias)?,
        qfi_exact: qfi_exact(params, n, t, mode)?,
        qfi_small_r: qfi_small_r(params, n, t)?,
        derivative_mode: mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn no_information_without_polarization() {
        let p = NoiseParams::new(1.0, f64::INFINITY, 0.0, 5.0).unwrap();
        assert_eq!(p.epsilon(), 0.0);
        let s = optimal_setting(4, 1.0, 1.0);
        assert_eq!(cfi(&p, 4, 1.0, &s, DerivativeMode::FrozenRatioBias).unwrap(), 0.0);
        assert_eq!(cfi(&p, 4, 1.0, &s, DerivativeMode::FiniteDifference).unwrap(), 0.0);
        assert_eq!(qfi_small_r(&p, 4, 1.0).unwrap(), 0.0);
        assert_eq!(qfi_exact(&p, 4, 1.0, DerivativeMode::FiniteDifference).unwrap(), 0.0);
    }

    #[test]
    fn single_atom_closed_form() {
        let p = NoiseParams::reference();
        let t = 1.3;
        let snap = channel_at(&p, t).unwrap();
        let expect = (t * snap.eta_perp * p.epsilon()).powi(2);
        let s = optimal_setting(1, p.omega(), t);
        assert_eq!(s.zeta2, 0.0);
        assert!(rel(cfi(&p, 1, t, &s, DerivativeMode::FrozenRatioBias).unwrap(), expect) < 1e-12);
        assert!(rel(qfi_small_r(&p, 1, t).unwrap(), expect) < 1e-12);
    }

    #[test]
    fn optimal_setting_examples() {
        let s = optimal_setting(4, 1.0, 1.0);
        assert_eq!((s.zeta1, s.zeta2), (PI / 2.0 - 1.0, PI / 2.0));
        let s = optimal_setting(9, 1.0, 1.0);
        assert_eq!((s.zeta1, s.zeta2), (PI / 2.0 - 1.0, 0.0));
        assert_eq!(optimal_setting(1, 3.0, 0.2).zeta2, 0.0);
    }

    #[test]
    fn frozen_cfi_peaks_at_small_r_qfi() {
        let p = NoiseParams::reference();
        let (n, t) = (9, 1.0);
        let q = qfi_small_r(&p, n, t).unwrap();
        let zeta1 = PI / 2.0 - t;
        let best = (0..=720)
            .map(|k| -PI + k as f64 * PI / 360.0)
            .map(|z2| cfi(&p, n, t, &MeasurementSetting::new(zeta1, z2, 1.0), DerivativeMode::FrozenRatioBias).unwrap())
            .fold(0.0, f64::max);
        assert!(rel(best, q) < 1e-8);
        let at_opt = cfi(&p, n, t, &optimal_setting(n, 1.0, t), DerivativeMode::FrozenRatioBias).unwrap();
        assert!(rel(at_opt, q) < 1e-12);
    }

    #[test]
    fn frozen_qfi_matches_small_r() {
        let p = NoiseParams::reference();
        for n in [1, 2, 5, 9, 40] {
            for t in [0.2, 1.0, 7.0] {
                let exact = qfi_exact(&p, n, t, DerivativeMode::FrozenRatioBias).unwrap();
                assert!(rel(exact, qfi_small_r(&p, n, t).unwrap()) < 1e-10, "n={n} t={t}");
            }
        }
    }

    #[test]
    fn outcome_swap_leaves_cfi_unchanged() {
        let p = NoiseParams::new(1.0, 2.0, 0.05, 2.0).unwrap();
        for mode in [DerivativeMode::FiniteDifference, DerivativeMode::FrozenRatioBias] {
            for z2 in [0.1, 0.9, 2.0] {
                let a = cfi(&p, 5, 0.8, &MeasurementSetting::new(0.3, z2, 1.0), mode).unwrap();
                let b = cfi(&p, 5, 0.8, &MeasurementSetting::new(0.3, z2 + PI, 1.0), mode).unwrap();
                // the swap is exact; differencing adds ~1e-11 noise
                let tol = if mode == DerivativeMode::FrozenRatioBias { 1e-13 } else { 1e-9 };
                assert!(rel(a, b) < tol, "{mode:?} {z2} {}", rel(a, b));
            }
        }
    }

    #[test]
    fn finite_difference_step_is_converged() {
        let p = NoiseParams::reference();
        let s = optimal_setting(9, 1.0, 1.0);
        let full = cfi_with_step(&p, 9, 1.0, &s, FD_RELATIVE_STEP).unwrap();
        let half = cfi_with_step(&p, 9, 1.0, &s, 0.5 * FD_RELATIVE_STEP).unwrap();
        assert!(rel(half, full) < 1e-6);
    }

    /// The full-dependence CFI at the optimal setting exceeds the frozen
    /// value by the information in the block weights `C(a+b)`, which move
    /// with ω through ε and R.
    #[test]
    fn exact_cfi_excess_is_population_information() {
        for (p, n, t) in [
            (NoiseParams::reference(), 9, 1.0),
            (NoiseParams::new(1.0, 2.0, 0.05, 0.5).unwrap(), 4, 2.0),
            (NoiseParams::new(1.0, 3.0, 0.01, 50.0).unwrap(), 7, 0.4),
        ] {
            let s = optimal_setting(n, p.omega(), t);
            let exact = cfi(&p, n, t, &s, DerivativeMode::FiniteDifference).unwrap();
            let small = qfi_small_r(&p, n, t).unwrap();
            let weights = |w: f64| -> Result<Vec<f64>> {
                Ok(blocks_at(&p, n, t, w)?.blocks().iter().map(|b| b.weight()).collect())
            };
            let w0 = weights(p.omega()).unwrap();
            let dw = richardson(weights, p.omega(), 1e-5).unwrap();
            let population: f64 = w0.iter().zip(&dw).map(|(w, d)| d * d / w).sum();
            assert!(exact >= small);
            assert!(rel(exact - small, population) < 1e-3, "n={n}: {} vs {population}", exact - small);
        }
    }

    #[test]
    fn cramer_rao_ordering_over_readout_angles() {
        let p = NoiseParams::new(1.0, 1.5, 0.03, 2.0).unwrap();
        for n in [2, 3, 6] {
            let t = 0.7;
            let q = qfi_exact(&p, n, t, DerivativeMode::FiniteDifference).unwrap();
            for k in 0..40 {
                let s = MeasurementSetting::new(0.4, -PI + k as f64 * PI / 20.0, 1.0);
                let r = fisher_report(&p, n, t, &s).unwrap();
                assert!(r.cfi_exact <= q * (1.0 + 1e-9));
                assert!(r.is_ordered(), "{r:?}");
            }
        }
    }

    #[test]
    fn eigensystem_is_orthonormal_and_diagonalizes() {
        let cases = [
            (0.6, 0.2, Complex64::new(0.1, -0.15)),
            (0.2, 0.6, Complex64::new(-0.05, 0.12)),
            (0.3, 0.3, Complex64::new(0.0, 0.0)),
            (0.5, 0.5, Complex64::new(0.2, 0.0)),
        ];
        for (a, b, z) in cases {
            let e = BlockEigensystem::new(a, b, z);
            assert!(e.nu_plus >= e.nu_minus && e.nu_minus >= 0.0);
            assert!((e.nu_plus + e.nu_minus - (a + b)).abs() < 1e-15);
            let m = [[Complex64::new(a, 0.0), z], [z.conj(), Complex64::new(b, 0.0)]];
            for (v, nu) in e.vectors.iter().zip(e.eigenvalues()) {
                for i in 0..2 {
                    let mv = m[i][0] * v[0] + m[i][1] * v[1];
                    assert!((mv - v[i] * nu).norm() < 1e-14);
                }
            }
            let [u, w] = e.vectors;
            assert!((u[0].conj() * w[0] + u[1].conj() * w[1]).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_nonpositive_time() {
        let p = NoiseParams::reference();
        let s = optimal_setting(2, 1.0, 1.0);
        assert!(cfi(&p, 2, 0.0, &s, DerivativeMode::FrozenRatioBias).is_err());
        assert!(cfi(&p, 2, -1.0, &s, DerivativeMode::FiniteDifference).is_err());
        assert!(qfi_small_r(&p, 2, 0.0).is_err());
        assert!(qfi_exact(&p, 2, f64::NAN, DerivativeMode::FrozenRatioBias).is_err());
    }

    #[test]
    fn large_probe_is_finite() {
        let p = NoiseParams::reference();
        let q = qfi_small_r(&p, 1500, 0.05).unwrap();
        let c = cfi(&p, 1500, 0.05, &optimal_setting(1500, 1.0, 0.05), DerivativeMode::FrozenRatioBias).unwrap();
        assert!(q.is_finite() && q > 0.0);
        assert!(rel(c, q) < 1e-10);
    }
}
