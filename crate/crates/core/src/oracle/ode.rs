//! Adaptive Dormand–Prince 5(4) integration of the single-qubit time-local
//! master equation.

use num_complex::Complex64;

use crate::channel::{time_local_rates, NoiseParams, QubitDensity};
use crate::error::{domain, Error, Result};

/// Local error control for [`dormand_prince`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeTolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for OdeTolerance {
    fn default() -> Self {
        Self { atol: 1e-10, rtol: 1e-10 }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate `dy/dt = f(t, y)` from `t0` to `t1 > t0`.
pub fn dormand_prince<const N: usize, F>(mut f: F, t0: f64, y0: [f64; N], t1: f64, tol: OdeTolerance) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    if !(t1 >= t0) {
        return domain(format!("integration must run forward, got [{t0}, {t1}]"));
    }
    let mut t = t0;
    let mut y = y0;
    let mut h = (t1 - t0) / 64.0;
    while t < t1 {
        if t + h > t1 {
            h = t1 - t;
        }
        if h <= 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepUnderflow { time: t });
        }
        let mut k = [[0.0; N]; 7];
        for s in 0..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            k[s] = f(t + C[s] * h, &ys)?;
        }
        let mut y5 = y;
        let mut err = 0.0;
        for i in 0..N {
            let mut hi = 0.0;
            let mut lo = 0.0;
            for s in 0..7 {
                hi += B5[s] * k[s][i];
                lo += B4[s] * k[s][i];
            }
            y5[i] += h * hi;
            let scale = tol.atol + tol.rtol * y[i].abs().max(y5[i].abs());
            err += (h * (hi - lo) / scale).powi(2);
        }
        let err = (err / N as f64).sqrt();
        if err <= 1.0 {
            t += h;
            y = y5;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
    }
    Ok(y)
}

type Mat2 = [[Complex64; 2]; 2];

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn dagger(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

fn lincomb(terms: &[(Complex64, Mat2)]) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (w, m) in terms {
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] += w * m[i][j];
            }
        }
    }
    out
}

/// `L ρ L† - ½{L†L, ρ}`
fn dissipator(l: &Mat2, rho: &Mat2) -> Mat2 {
    let ldl = mul(&dagger(l), l);
    let one = Complex64::new(1.0, 0.0);
    lincomb(&[
        (one, mul(&mul(l, rho), &dagger(l))),
        (-0.5 * one, mul(&ldl, rho)),
        (-0.5 * one, mul(rho, &ldl)),
    ])
}

fn pack(m: &Mat2) -> [f64; 8] {
    [m[0][0].re, m[0][0].im, m[0][1].re, m[0][1].im, m[1][0].re, m[1][0].im, m[1][1].re, m[1][1].im]
}

fn unpack(y: &[f64; 8]) -> Mat2 {
    [
        [Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3])],
        [Complex64::new(y[4], y[5]), Complex64::new(y[6], y[7])],
    ]
}

/// Evolve a qubit state for time `t` under
/// `dρ/dt = -i[(ω/2)σz, ρ] + γ+ D[σ+]ρ + γ- D[σ-]ρ + γz D[σz]ρ`
/// with the time-dependent rates of `params`.
pub fn integrate_time_local(params: &NoiseParams, state: &QubitDensity, t: f64) -> Result<QubitDensity> {
    integrate_time_local_with(params, state, t, OdeTolerance::default())
}

pub fn integrate_time_local_with(params: &NoiseParams, state: &QubitDensity, t: f64, tol: OdeTolerance) -> Result<QubitDensity> {
    if !(t >= 0.0) || !t.is_finite() {
        return domain(format!("integration time must be nonnegative and finite, got {t}"));
    }
    state.validate(1e-10)?;
    if t == 0.0 {
        return Ok(*state);
    }
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let raise: Mat2 = [[zero, one], [zero, zero]];
    let lower: Mat2 = [[zero, zero], [one, zero]];
    let sz: Mat2 = [[one, zero], [zero, -one]];
    let h: Mat2 = [[Complex64::new(0.5 * params.omega(), 0.0), zero], [zero, Complex64::new(-0.5 * params.omega(), 0.0)]];
    let rhs = |s: f64, y: &[f64; 8]| -> Result<[f64; 8]> {
        let rates = time_local_rates(params, s)?;
        let rho = unpack(y);
        let minus_i = Complex64::new(0.0, -1.0);
        let d = lincomb(&[
            (minus_i, mul(&h, &rho)),
            (-minus_i, mul(&rho, &h)),
            (Complex64::new(rates.gamma_plus, 0.0), dissipator(&raise, &rho)),
            (Complex64::new(rates.gamma_minus, 0.0), dissipator(&lower, &rho)),
            (Complex64::new(rates.gamma_z, 0.0), dissipator(&sz, &rho)),
        ]);
        Ok(pack(&d))
    };
    let y = dormand_prince(rhs, 0.0, pack(&state.0), t, tol)?;
    Ok(QubitDensity(unpack(&y)))
}
