//! Phase-covariant dissipative channel generated by a master equation with an
//! exponential memory kernel `f(t) = λ e^{-λ|t|}`.
//!
//! The channel acting on one qubit at time `t` is fixed by three numbers:
//! the longitudinal damping `η_∥`, the transverse damping `η_⊥` and the
//! translation `κ`, plus the free phase `φ = ωt`. Both dampings are values of
//! the same function
//!
//! ```text
//! ξ_R(t) = e^{-λt/2} [ cosh(λt√(1-4R)/2) + sinh(λt√(1-4R)/2) / √(1-4R) ]
//! ```
//!
//! with `η_∥ = ξ_R` and `η_⊥ = ξ_{R/2}`, where `R = γ0/(λε)`. For `R > 1/4`
//! the square root turns imaginary and the hyperbolic functions become
//! trigonometric; at `R = 1/4` the limit `e^{-λt/2}(1 + λt/2)` applies.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Width of the window around `1 - 4R = 0` where ξ is evaluated by its
/// power series in `1 - 4R`.
pub const BRANCH_WINDOW: f64 = 1e-8;

/// Rounding allowance used when classifying a snapshot as completely
/// positive. Channel parameters are O(1) quantities, so a few ulps suffice.
pub const CP_ROUNDING: f64 = 8.0 * f64::EPSILON;

/// Largest polarization bias for which `channel_at` stays completely positive
/// at all times when `R < 1/4`. Above it the cone condition fails at short
/// times: the margin starts as `R²(λt)⁴(1 - 3ε²)/48`.
pub const CP_POLARIZATION_LIMIT: f64 = 0.577_350_269_189_625_8;

/// Polarization bias `ε = tanh(ω / 2T)` of a thermal two-level atom.
pub fn polarization_bias(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return domain(format!("omega must be positive and finite, got {omega}"));
    }
    if !(temperature > 0.0) {
        return domain(format!("temperature must be positive, got {temperature}"));
    }
    Ok((omega / (2.0 * temperature)).tanh())
}

/// Physical configuration of one atom and its bath.
///
/// `epsilon` and `ratio` are derived on construction and cannot be set
/// independently, so any change of `ω` (e.g. for finite differences) goes
/// through [`NoiseParams::with_omega`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    omega: f64,
    temperature: f64,
    gamma0: f64,
    lambda: f64,
    epsilon: f64,
    ratio: f64,
}

impl NoiseParams {
    /// `temperature` may be `+inf` (fully mixed atoms), in which case
    /// `gamma0` must vanish for `R` to be defined.
    pub fn new(omega: f64, temperature: f64, gamma0: f64, lambda: f64) -> Result<Self> {
        let epsilon = polarization_bias(omega, temperature)?;
        if !(gamma0 >= 0.0) || !gamma0.is_finite() {
            return domain(format!("gamma0 must be nonnegative and finite, got {gamma0}"));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return domain(format!("lambda must be positive and finite, got {lambda}"));
        }
        let ratio = if gamma0 == 0.0 {
            0.0
        } else if epsilon == 0.0 {
            return domain("R = gamma0/(lambda*epsilon) diverges for epsilon = 0 and gamma0 > 0");
        } else {
            gamma0 / (lambda * epsilon)
        };
        Ok(Self { omega, temperature, gamma0, lambda, epsilon, ratio })
    }

    /// `ω = 1, T = 200, γ0 = 1e-4, λ = 5`, the reference configuration used
    /// throughout the examples and the acceptance suite.
    pub fn reference() -> Self {
        Self::new(1.0, 200.0, 1e-4, 5.0).expect("reference parameters are valid")
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `R = γ0 / (λ ε)`.
    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(omega, self.temperature, self.gamma0, self.lambda)
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.omega, self.temperature, self.gamma0, lambda)
    }

    /// Markovian emission and absorption rates `(Γ_ω, Γ_{-ω})` of the
    /// generator inside the memory-kernel equation. Not used by the analytic
    /// pipeline.
    pub fn gkls_rates(&self) -> (f64, f64) {
        let x = self.omega / self.temperature;
        let emission = self.gamma0 * (1.0 + 1.0 / x.exp_m1());
        (emission, (-x).exp() * emission)
    }
}

/// ξ together with the auxiliary `S(t) = e^{-λt/2} sinh(λtA/2)/A`, which
/// gives the derivative `ξ'(t) = -2λR S(t)`.
#[derive(Debug, Clone, Copy)]
struct XiParts {
    value: f64,
    s: f64,
}

fn xi_parts(ratio: f64, lambda: f64, t: f64) -> XiParts {
    let half = 0.5 * lambda * t;
    let disc = 1.0 - 4.0 * ratio;
    let damp = (-half).exp();
    let (c, s) = if disc.abs() < BRANCH_WINDOW {
        // cosh(h√d) = Σ (h²d)^k/(2k)!,  sinh(h√d)/√d = h Σ (h²d)^k/(2k+1)!
        let u = half * half * disc;
        let (mut cs, mut ss) = (0.0, 0.0);
        let (mut tc, mut ts) = (1.0, 1.0);
        for k in 0..60 {
            cs += tc;
            ss += ts;
            let k2 = 2.0 * k as f64;
            tc *= u / ((k2 + 1.0) * (k2 + 2.0));
            ts *= u / ((k2 + 2.0) * (k2 + 3.0));
            if tc.abs() <= 1e-18 * cs.abs() && ts.abs() <= 1e-18 * ss.abs() {
                break;
            }
        }
        (damp * cs, damp * half * ss)
    } else if disc > 0.0 {
        let a = disc.sqrt();
        let x = half * a;
        if x < 1.0 {
            (damp * x.cosh(), damp * x.sinh() / a)
        } else {
            let slow = (-half * (1.0 - a)).exp();
            let fast = (-half * (1.0 + a)).exp();
            (0.5 * (slow + fast), 0.5 * (slow - fast) / a)
        }
    } else {
        let b = (-disc).sqrt();
        let y = half * b;
        (damp * y.cos(), damp * y.sin() / b)
    };
    XiParts { value: c + s, s }
}

/// `ξ_R(t)` for any `R ≥ 0`, continued analytically through `R = 1/4`.
pub fn xi(ratio: f64, lambda: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return domain(format!("time must be nonnegative, got {t}"));
    }
    if !(lambda > 0.0) {
        return domain(format!("lambda must be positive, got {lambda}"));
    }
    Ok(xi_parts(ratio, lambda, t).value)
}

/// First positive zero of `ξ_R`, which exists only on the trigonometric
/// branch `R > 1/4`.
pub fn first_xi_zero(ratio: f64, lambda: f64) -> Option<f64> {
    let disc = 1.0 - 4.0 * ratio;
    if disc > -BRANCH_WINDOW {
        return None;
    }
    // cos y + sin y / B = 0  ⇔  tan y = -B
    let b = (-disc).sqrt();
    let y = std::f64::consts::PI - b.atan();
    Some(2.0 * y / (lambda * b))
}

/// The qubit channel at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSnapshot {
    pub t: f64,
    pub eta_par: f64,
    pub eta_perp: f64,
    pub kappa: f64,
    pub phi: f64,
}

impl ChannelSnapshot {
    pub fn identity() -> Self {
        Self { t: 0.0, eta_par: 1.0, eta_perp: 1.0, kappa: 0.0, phi: 0.0 }
    }

    /// Weight `α_s = (1 + s η_∥ + κ)/2` for a real label `s`.
    pub fn alpha(&self, s: f64) -> f64 {
        0.5 * (1.0 + s * self.eta_par + self.kappa)
    }

    /// Weight `β_s = (1 - s η_∥ - κ)/2`.
    pub fn beta(&self, s: f64) -> f64 {
        0.5 * (1.0 - s * self.eta_par - self.kappa)
    }

    /// 4×4 Pauli transfer matrix acting on `(1, ⟨σx⟩, ⟨σy⟩, ⟨σz⟩)`.
    pub fn transfer_matrix(&self) -> [[f64; 4]; 4] {
        let (s, c) = self.phi.sin_cos();
        let p = self.eta_perp;
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, p * c, -p * s, 0.0],
            [0.0, p * s, p * c, 0.0],
            [self.kappa, 0.0, 0.0, self.eta_par],
        ]
    }
}

/// Evaluate the channel at time `t`.
pub fn channel_at(params: &NoiseParams, t: f64) -> Result<ChannelSnapshot> {
    if !(t >= 0.0) || !t.is_finite() {
        return domain(format!("time must be nonnegative and finite, got {t}"));
    }
    let eta_par = xi_parts(params.ratio, params.lambda, t).value;
    let eta_perp = xi_parts(0.5 * params.ratio, params.lambda, t).value;
    Ok(ChannelSnapshot {
        t,
        eta_par,
        eta_perp,
        kappa: -params.epsilon * (1.0 - eta_par),
        phi: params.omega * t,
    })
}

/// Rates of the equivalent time-local master equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeLocalRates {
    /// Rate of the `σ+` (absorption) dissipator.
    pub gamma_plus: f64,
    /// Rate of the `σ-` (emission) dissipator.
    pub gamma_minus: f64,
    /// Dephasing rate.
    pub gamma_z: f64,
}

/// `γ±(t) = -½(1 ∓ ε) d/dt ln ξ_R` and `γz(t) = ¼ d/dt ln(ξ_R / ξ_{R/2}²)`,
/// with analytic derivatives.
pub fn time_local_rates(params: &NoiseParams, t: f64) -> Result<TimeLocalRates> {
    if !(t >= 0.0) {
        return domain(format!("time must be nonnegative, got {t}"));
    }
    let (r, lambda) = (params.ratio, params.lambda);
    let zeros = [first_xi_zero(r, lambda), first_xi_zero(0.5 * r, lambda)];
    if let Some(t0) = zeros.into_iter().flatten().reduce(f64::min) {
        if t >= t0 * (1.0 - 1e-12) {
            return Err(Error::SingularRate { time: t0 });
        }
    }
    let full = xi_parts(r, lambda, t);
    let half = xi_parts(0.5 * r, lambda, t);
    let dlog_full = -2.0 * lambda * r * full.s / full.value;
    let dlog_half = -lambda * r * half.s / half.value;
    let eps = params.epsilon;
    Ok(TimeLocalRates {
        gamma_plus: -0.5 * (1.0 - eps) * dlog_full,
        gamma_minus: -0.5 * (1.0 + eps) * dlog_full,
        gamma_z: 0.25 * (dlog_full - 2.0 * dlog_half),
    })
}

/// Which complete-positivity condition is the binding one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpViolation {
    None,
    EtaPlusKappa,
    EtaMinusKappa,
    Cone,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpStatus {
    pub is_cp: bool,
    /// Smallest `bound - value` over all conditions.
    pub margin: f64,
    pub violated: CpViolation,
}

/// Check `η_∥ ± κ ≤ 1` and `1 + η_∥ ≥ √(4η_⊥² + κ²)`.
///
/// A snapshot counts as CP when the smallest margin is no worse than
/// [`CP_ROUNDING`]; the raw margin is reported unchanged.
pub fn cp_check(snapshot: &ChannelSnapshot) -> CpStatus {
    let ChannelSnapshot { eta_par, eta_perp, kappa, .. } = *snapshot;
    let conditions = [
        (CpViolation::EtaPlusKappa, 1.0 - (eta_par + kappa)),
        (CpViolation::EtaMinusKappa, 1.0 - (eta_par - kappa)),
        (CpViolation::Cone, 1.0 + eta_par - (4.0 * eta_perp * eta_perp + kappa * kappa).sqrt()),
    ];
    let (which, margin) = conditions
        .into_iter()
        .fold((CpViolation::None, f64::INFINITY), |acc, c| if c.1 < acc.1 { c } else { acc });
    let is_cp = margin >= -CP_ROUNDING;
    CpStatus { is_cp, margin, violated: if is_cp { CpViolation::None } else { which } }
}

/// Whether the memory-kernel equation eventually breaks positivity,
/// i.e. `R ≥ 1/4`.
pub fn positivity_threshold(params: &NoiseParams) -> bool {
    params.ratio >= 0.25
}

/// Single-qubit density matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensity(pub [[Complex64; 2]; 2]);

impl QubitDensity {
    /// Thermal state `diag((1-ε)/2, (1+ε)/2)`.
    pub fn thermal(epsilon: f64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self([
            [Complex64::new(0.5 * (1.0 - epsilon), 0.0), z],
            [z, Complex64::new(0.5 * (1.0 + epsilon), 0.0)],
        ])
    }

    /// Pure state `cos(θ/2)|0⟩ + e^{iϕ} sin(θ/2)|1⟩`.
    pub fn pure(theta: f64, azimuth: f64) -> Self {
        let a = Complex64::new((0.5 * theta).cos(), 0.0);
        let b = Complex64::from_polar((0.5 * theta).sin(), azimuth);
        Self([[a * a.conj(), a * b.conj()], [b * a.conj(), b * b.conj()]])
    }

    /// Largest deviation from Hermiticity, unit trace and positivity.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let m = &self.0;
        let herm = (m[0][1] - m[1][0].conj()).norm().max(m[0][0].im.abs()).max(m[1][1].im.abs());
        if herm > tol {
            return domain(format!("qubit state is not Hermitian (deviation {herm:e})"));
        }
        let tr = m[0][0].re + m[1][1].re;
        if (tr - 1.0).abs() > tol {
            return domain(format!("qubit state has trace {tr}"));
        }
        let (a, b) = (m[0][0].re, m[1][1].re);
        let min_eig = 0.5 * (a + b) - (0.25 * (a - b) * (a - b) + m[0][1].norm_sqr()).sqrt();
        if min_eig < -tol {
            return domain(format!("qubit state has negative eigenvalue {min_eig:e}"));
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }
}

/// Apply the channel to a single-qubit density matrix.
pub fn apply_to_qubit(snapshot: &ChannelSnapshot, state: &QubitDensity) -> Result<QubitDensity> {
    state.validate(1e-10)?;
    let m = &state.0;
    let (a, b, c) = (m[0][0].re, m[1][1].re, m[0][1]);
    let top = a * snapshot.alpha(1.0) + b * snapshot.alpha(-1.0);
    let bottom = a * snapshot.beta(1.0) + b * snapshot.beta(-1.0);
    let coh = c * Complex64::from_polar(snapshot.eta_perp, -snapshot.phi);
    Ok(QubitDensity([
        [Complex64::new(top, 0.0), coh],
        [coh.conj(), Complex64::new(bottom, 0.0)],
    ]))
}
