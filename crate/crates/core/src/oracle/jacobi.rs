//! Cyclic Jacobi diagonalisation of small dense Hermitian matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a Hermitian matrix. `vectors` is row-major with the `k`-th
/// eigenvector in column `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub dim: usize,
    pub values: Vec<f64>,
    pub vectors: Vec<Complex64>,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.vectors[i * self.dim + k]).collect()
    }
}

fn off_norm(dim: usize, a: &[Complex64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                acc += a[i * dim + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Diagonalise the Hermitian `dim × dim` row-major matrix `matrix`.
pub fn hermitian_eigen(dim: usize, matrix: &[Complex64]) -> Result<Eigen> {
    assert_eq!(matrix.len(), dim * dim, "matrix size mismatch");
    let mut a = matrix.to_vec();
    let mut v = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        v[i * dim + i] = Complex64::new(1.0, 0.0);
    }
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = 1e-14 * scale;
    let mut sweeps = 0;
    while off_norm(dim, &a) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigenNonConvergence { sweeps, residual: off_norm(dim, &a) });
        }
        sweeps += 1;
        for p in 0..dim {
            for q in p + 1..dim {
                let apq = a[p * dim + q];
                let mag = apq.norm();
                if mag <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / mag;
                let app = a[p * dim + p].re;
                let aqq = a[q * dim + q].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau == 0.0 { 1.0 } else { tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt()) };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // U = D·J with D = diag(.., e^{-iα} at q, ..)
                let u_pp = Complex64::new(c, 0.0);
                let u_pq = Complex64::new(s, 0.0);
                let u_qp = -s * phase.conj();
                let u_qq = c * phase.conj();
                for k in 0..dim {
                    let (akp, akq) = (a[k * dim + p], a[k * dim + q]);
                    a[k * dim + p] = akp * u_pp + akq * u_qp;
                    a[k * dim + q] = akp * u_pq + akq * u_qq;
                    let (vkp, vkq) = (v[k * dim + p], v[k * dim + q]);
                    v[k * dim + p] = vkp * u_pp + vkq * u_qp;
                    v[k * dim + q] = vkp * u_pq + vkq * u_qq;
                }
                for k in 0..dim {
                    let (apk, aqk) = (a[p * dim + k], a[q * dim + k]);
                    a[p * dim + k] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[q * dim + k] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[p * dim + q] = Complex64::new(0.0, 0.0);
                a[q * dim + p] = Complex64::new(0.0, 0.0);
                a[p * dim + p].im = 0.0;
                a[q * dim + q].im = 0.0;
            }
        }
    }
    let values = (0..dim).map(|i| a[i * dim + i].re).collect();
    Ok(Eigen { dim, values, vectors: v })
}
