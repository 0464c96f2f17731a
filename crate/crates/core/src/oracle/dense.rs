//! Dense `2ⁿ × 2ⁿ` density-matrix simulation of the full protocol.
//!
//! Qubit 0 is the control and occupies the most significant bit of a basis
//! index. Bit value 0 is the excited state `|0⟩` with `σz|0⟩ = +|0⟩`.

use num_complex::Complex64;

use crate::blockstate::MeasurementSetting;
use crate::channel::{channel_at, cp_check, ChannelSnapshot, NoiseParams};
use crate::error::{domain, Error, Result};
use crate::metrology::{fisher_term, DerivativeMode};
use crate::numeric::pairwise_sum;
use crate::oracle::jacobi::hermitian_eigen;

pub const MAX_DENSE_QUBITS: usize = 12;
pub const MAX_QFI_QUBITS: usize = 8;

/// Relative ω step of the dense central differences.
pub const DENSE_FD_STEP: f64 = 1e-5;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseState {
    /// `ϱ^{⊗n}` with `ϱ = diag((1-ε)/2, (1+ε)/2)`.
    pub fn thermal_product(n: usize, epsilon: f64) -> Result<Self> {
        check_size(n, MAX_DENSE_QUBITS)?;
        let dim = 1usize << n;
        let mut data = vec![ZERO; dim * dim];
        let (up, down) = (0.5 * (1.0 - epsilon), 0.5 * (1.0 + epsilon));
        for i in 0..dim {
            let ones = i.count_ones() as i32;
            data[i * dim + i] = Complex64::new(up.powi(n as i32 - ones) * down.powi(ones), 0.0);
        }
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim() + j]
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, i).re).collect()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in i..dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let e = hermitian_eigen(self.dim(), &self.data)?;
        Ok(e.values.into_iter().fold(f64::INFINITY, f64::min))
    }

    /// `Tr(H ρ)` with `H = (ω/2) Σ_i σz_i`.
    pub fn energy(&self, omega: f64) -> f64 {
        let n = self.n as f64;
        let terms: Vec<f64> = (0..self.dim())
            .map(|i| 0.5 * omega * (n - 2.0 * i.count_ones() as f64) * self.get(i, i).re)
            .collect();
        pairwise_sum(&terms)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    fn bit(&self, qubit: usize) -> usize {
        1 << (self.n - 1 - qubit)
    }

    /// `ρ → U_k ρ U_k†` for a single-qubit `u` on `qubit`.
    fn apply_single(&mut self, qubit: usize, u: &[[Complex64; 2]; 2]) {
        let dim = self.dim();
        let mask = self.bit(qubit);
        for i0 in (0..dim).filter(|i| i & mask == 0) {
            let i1 = i0 | mask;
            for j in 0..dim {
                let (r0, r1) = (self.data[i0 * dim + j], self.data[i1 * dim + j]);
                self.data[i0 * dim + j] = u[0][0] * r0 + u[0][1] * r1;
                self.data[i1 * dim + j] = u[1][0] * r0 + u[1][1] * r1;
            }
        }
        for i in 0..dim {
            for j0 in (0..dim).filter(|j| j & mask == 0) {
                let j1 = j0 | mask;
                let (c0, c1) = (self.data[i * dim + j0], self.data[i * dim + j1]);
                self.data[i * dim + j0] = c0 * u[0][0].conj() + c1 * u[0][1].conj();
                self.data[i * dim + j1] = c0 * u[1][0].conj() + c1 * u[1][1].conj();
            }
        }
    }

    /// `ρ → P ρ Pᵀ` for the basis permutation `perm`.
    fn permute(&mut self, perm: impl Fn(usize) -> usize) {
        let dim = self.dim();
        let mut out = vec![ZERO; dim * dim];
        for i in 0..dim {
            let pi = perm(i);
            for j in 0..dim {
                out[pi * dim + perm(j)] = self.data[i * dim + j];
            }
        }
        self.data = out;
    }

    pub fn apply_gate(&mut self, gate: &GateSpec) {
        match *gate {
            GateSpec::CnotFanout => {
                let control = self.bit(0);
                let register = control - 1;
                self.permute(|i| if i & control != 0 { i ^ register } else { i });
            }
            GateSpec::HadamardControl | GateSpec::GeneralizedHadamard(_) => {
                let u = gate.single_qubit().expect("single-qubit gate");
                self.apply_single(0, &u);
            }
            GateSpec::ZRotation(_) => {
                let u = gate.single_qubit().expect("single-qubit gate");
                for q in 0..self.n {
                    self.apply_single(q, &u);
                }
            }
        }
    }

    /// Apply the channel to every qubit through its Pauli transfer matrix.
    fn apply_channel(&mut self, transfer: &[[f64; 4]; 4]) {
        let dim = self.dim();
        let i_unit = Complex64::new(0.0, 1.0);
        for q in 0..self.n {
            let mask = self.bit(q);
            for i0 in (0..dim).filter(|i| i & mask == 0) {
                let i1 = i0 | mask;
                for j0 in (0..dim).filter(|j| j & mask == 0) {
                    let j1 = j0 | mask;
                    let m00 = self.data[i0 * dim + j0];
                    let m01 = self.data[i0 * dim + j1];
                    let m10 = self.data[i1 * dim + j0];
                    let m11 = self.data[i1 * dim + j1];
                    // (Tr M, Tr Mσx, Tr Mσy, Tr Mσz)
                    let v = [m00 + m11, m01 + m10, i_unit * (m01 - m10), m00 - m11];
                    let mut w = [ZERO; 4];
                    for (r, row) in transfer.iter().enumerate() {
                        w[r] = (0..4).map(|c| v[c] * row[c]).sum();
                    }
                    self.data[i0 * dim + j0] = 0.5 * (w[0] + w[3]);
                    self.data[i1 * dim + j1] = 0.5 * (w[0] - w[3]);
                    self.data[i0 * dim + j1] = 0.5 * (w[1] - i_unit * w[2]);
                    self.data[i1 * dim + j0] = 0.5 * (w[1] + i_unit * w[2]);
                }
            }
        }
    }
}

/// Gates used by the preparation and pre-measurement circuits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateSpec {
    /// `|0⟩⟨0| ⊗ 𝟙 + |1⟩⟨1| ⊗ σx^{⊗(n-1)}` with qubit 0 as control.
    CnotFanout,
    /// Hadamard on the control.
    HadamardControl,
    /// `e^{-iζσz/2} U_H e^{iζσz/2}` on the control.
    GeneralizedHadamard(f64),
    /// `e^{-iζσz/2}` on every qubit.
    ZRotation(f64),
}

impl GateSpec {
    /// The 2×2 unitary of a single-qubit gate.
    pub fn single_qubit(&self) -> Option<[[Complex64; 2]; 2]> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match *self {
            GateSpec::CnotFanout => None,
            GateSpec::HadamardControl => Some([
                [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
                [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
            ]),
            GateSpec::GeneralizedHadamard(z) => Some([
                [Complex64::new(h, 0.0), Complex64::from_polar(h, -z)],
                [Complex64::from_polar(h, z), Complex64::new(-h, 0.0)],
            ]),
            GateSpec::ZRotation(z) => Some([
                [Complex64::from_polar(1.0, -0.5 * z), ZERO],
                [ZERO, Complex64::from_polar(1.0, 0.5 * z)],
            ]),
        }
    }

    /// Full `2ⁿ × 2ⁿ` unitary, row-major.
    pub fn unitary(&self, n: usize) -> Result<Vec<Complex64>> {
        check_size(n, MAX_DENSE_QUBITS)?;
        let dim = 1usize << n;
        let mut out = vec![ZERO; dim * dim];
        for col in 0..dim {
            // U|col⟩ via ρ = |col⟩⟨0…0| would need a pure-state path; build it
            // column by column from basis kets instead
            let ket = self.apply_to_ket(n, col);
            for (row, amp) in ket.into_iter().enumerate() {
                out[row * dim + col] = amp;
            }
        }
        Ok(out)
    }

    fn apply_to_ket(&self, n: usize, basis: usize) -> Vec<Complex64> {
        let dim = 1usize << n;
        let mut ket = vec![ZERO; dim];
        ket[basis] = Complex64::new(1.0, 0.0);
        let apply1 = |ket: &mut Vec<Complex64>, q: usize, u: &[[Complex64; 2]; 2]| {
            let mask = 1usize << (n - 1 - q);
            for i0 in (0..dim).filter(|i| i & mask == 0) {
                let i1 = i0 | mask;
                let (a, b) = (ket[i0], ket[i1]);
                ket[i0] = u[0][0] * a + u[0][1] * b;
                ket[i1] = u[1][0] * a + u[1][1] * b;
            }
        };
        match *self {
            GateSpec::CnotFanout => {
                let control = 1usize << (n - 1);
                let target = if basis & control != 0 { basis ^ (control - 1) } else { basis };
                ket[basis] = ZERO;
                ket[target] = Complex64::new(1.0, 0.0);
            }
            GateSpec::HadamardControl | GateSpec::GeneralizedHadamard(_) => {
                apply1(&mut ket, 0, &self.single_qubit().expect("single-qubit gate"));
            }
            GateSpec::ZRotation(_) => {
                let u = self.single_qubit().expect("single-qubit gate");
                for q in 0..n {
                    apply1(&mut ket, q, &u);
                }
            }
        }
        ket
    }
}

fn check_size(n: usize, max: usize) -> Result<()> {
    if n == 0 {
        return domain("probe size must be at least 1");
    }
    if n > max {
        return Err(Error::Size { n, max });
    }
    Ok(())
}

/// Thermal product state after fan-out CNOT, control Hadamard and fan-out CNOT.
pub fn prepare_rho3_dense(n: usize, epsilon: f64) -> Result<DenseState> {
    let mut s = DenseState::thermal_product(n, epsilon)?;
    for g in [GateSpec::CnotFanout, GateSpec::HadamardControl, GateSpec::CnotFanout] {
        s.apply_gate(&g);
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseEvolution {
    pub state: DenseState,
    /// Set when the snapshot is not completely positive.
    pub cp_warning: bool,
}

/// Apply the channel independently to every qubit.
pub fn evolve_dense(state: &DenseState, snapshot: &ChannelSnapshot) -> DenseEvolution {
    let mut out = state.clone();
    out.apply_channel(&snapshot.transfer_matrix());
    DenseEvolution { state: out, cp_warning: !cp_check(snapshot).is_cp }
}

/// Rotation on every qubit followed by the fan-out CNOT.
pub fn premeasure_partial_dense(state: &DenseState, setting: &MeasurementSetting) -> DenseState {
    let mut out = state.clone();
    out.apply_gate(&GateSpec::ZRotation(setting.zeta1));
    out.apply_gate(&GateSpec::CnotFanout);
    out
}

/// Full pre-measurement: rotation, fan-out CNOT, generalised Hadamard.
pub fn premeasure_dense(state: &DenseState, setting: &MeasurementSetting) -> DenseState {
    let mut out = premeasure_partial_dense(state, setting);
    out.apply_gate(&GateSpec::GeneralizedHadamard(setting.zeta2));
    out
}

/// Every intermediate state of one protocol round.
#[derive(Debug, Clone, PartialEq)]
pub struct DensePipeline {
    pub rho3: DenseState,
    pub rho4: DenseState,
    pub rho5: DenseState,
    pub rho6: DenseState,
    pub cp_warning: bool,
}

pub fn run_pipeline(params: &NoiseParams, n: usize, t: f64, setting: &MeasurementSetting) -> Result<DensePipeline> {
    let rho3 = prepare_rho3_dense(n, params.epsilon())?;
    let evolved = evolve_dense(&rho3, &channel_at(params, t)?);
    let rho5 = premeasure_partial_dense(&evolved.state, setting);
    let mut rho6 = rho5.clone();
    rho6.apply_gate(&GateSpec::GeneralizedHadamard(setting.zeta2));
    Ok(DensePipeline { rho3, rho4: evolved.state, rho5, rho6, cp_warning: evolved.cp_warning })
}

/// Parameters at `omega`; in frozen mode `T` moves with `ω` so that ε and R stay put.
fn shifted(params: &NoiseParams, omega: f64, mode: DerivativeMode) -> Result<NoiseParams> {
    match mode {
        DerivativeMode::FiniteDifference => params.with_omega(omega),
        DerivativeMode::FrozenRatioBias => NoiseParams::new(
            omega,
            params.temperature() * omega / params.omega(),
            params.gamma0(),
            params.lambda(),
        ),
    }
}

/// CFI of the energy readout from dense probabilities, differentiated by
/// plain central differences.
pub fn cfi_dense(params: &NoiseParams, n: usize, t: f64, setting: &MeasurementSetting, mode: DerivativeMode) -> Result<f64> {
    let probs = |omega: f64| -> Result<Vec<f64>> {
        let p = shifted(params, omega, mode)?;
        Ok(run_pipeline(&p, n, t, setting)?.rho6.diagonal())
    };
    let omega = params.omega();
    let h = DENSE_FD_STEP * omega;
    let (hi, lo, mid) = (probs(omega + h)?, probs(omega - h)?, probs(omega)?);
    let terms: Vec<f64> = (0..mid.len()).map(|i| fisher_term(mid[i], (hi[i] - lo[i]) / (2.0 * h))).collect();
    Ok(pairwise_sum(&terms))
}

/// QFI of the full `2ⁿ` state after rotation-free pre-measurement (`ζ1 = 0`,
/// fan-out CNOT), from its eigendecomposition.
pub fn qfi_dense(params: &NoiseParams, n: usize, t: f64, mode: DerivativeMode) -> Result<f64> {
    check_size(n, MAX_QFI_QUBITS)?;
    let setting = MeasurementSetting::new(0.0, 0.0, params.omega());
    let rho5 = |omega: f64| -> Result<DenseState> {
        let p = shifted(params, omega, mode)?;
        Ok(run_pipeline(&p, n, t, &setting)?.rho5)
    };
    let omega = params.omega();
    let h = DENSE_FD_STEP * omega;
    let (hi, lo, mid) = (rho5(omega + h)?, rho5(omega - h)?, rho5(omega)?);
    let dim = mid.dim();
    let d: Vec<Complex64> = hi.data.iter().zip(&lo.data).map(|(a, b)| (a - b) / (2.0 * h)).collect();
    let eig = hermitian_eigen(dim, &mid.data)?;
    let vectors: Vec<Vec<Complex64>> = (0..dim).map(|k| eig.vector(k)).collect();
    // D v_j for every eigenvector
    let dv: Vec<Vec<Complex64>> = vectors
        .iter()
        .map(|v| (0..dim).map(|r| (0..dim).map(|c| d[r * dim + c] * v[c]).sum()).collect())
        .collect();
    let mut terms = Vec::with_capacity(dim * dim);
    for (vi, nu_i) in vectors.iter().zip(&eig.values) {
        for (dvj, nu_j) in dv.iter().zip(&eig.values) {
            let denom = nu_i + nu_j;
            if denom <= 1e-12 {
                continue;
            }
            let elem: Complex64 = vi.iter().zip(dvj).map(|(a, b)| a.conj() * b).sum();
            terms.push(2.0 * elem.norm_sqr() / denom);
        }
    }
    Ok(pairwise_sum(&terms))
}
