use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use super::ops::hermiticity_defect;
use crate::error::{LabError, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues at or below this multiple of `f64::EPSILON · max|λ|` are
/// indistinguishable from rounding noise and are treated as zero when taking
/// square roots.
const NOISE_FLOOR_FACTOR: f64 = 64.0;

/// Default clip tolerance for slightly negative eigenvalues.
pub const DEFAULT_CLIP_TOL: f64 = 1e-10;

/// Spectral data of a Hermitian matrix: eigenvalues in descending order and
/// the matching orthonormal eigenvectors as columns.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// `Σ_α f(λ_α) e_α e_α†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let v = self.eigenvectors.as_slice();
        let mut out = ComplexMatrix::zeros(n, n);
        let data = out.as_mut_slice();
        for (a, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = v[i * n + a] * w;
                for j in 0..n {
                    data[i * n + j] += vi * v[j * n + a].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| l)
    }

    /// Magnitude below which an eigenvalue is rounding noise.
    pub fn noise_floor(&self) -> f64 {
        let scale = self.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max);
        NOISE_FLOOR_FACTOR * f64::EPSILON * scale
    }

    /// Spectral square root. Eigenvalues in `[-clip_tol, floor]` map to zero.
    pub fn sqrt(&self, clip_tol: f64) -> Result<ComplexMatrix> {
        if let Some(&worst) = self.eigenvalues.last() {
            if worst < -clip_tol {
                return Err(LabError::NotPsd { eigenvalue: worst, tol: clip_tol });
            }
        }
        let floor = self.noise_floor();
        Ok(self.map(|l| if l <= floor { 0.0 } else { l.sqrt() }))
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// The input must be Hermitian within `tol` in HS norm; the Hermitian part is
/// what gets diagonalized.
pub fn herm_eig(h: &ComplexMatrix, tol: f64) -> Result<SpectralDecomposition> {
    let n = h.check_square()?;
    let deviation = hermiticity_defect(h)?;
    if deviation > tol {
        return Err(LabError::Hermiticity { deviation, tol });
    }

    let mut a: Vec<C64> = {
        let hd = h.dagger();
        h.as_slice().iter().zip(hd.as_slice()).map(|(x, y)| (x + y) * 0.5).collect()
    };
    let mut v = ComplexMatrix::identity(n).as_slice().to_vec();
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    let mut converged = n < 2 || scale == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off: f64 =
            (0..n).flat_map(|p| ((p + 1)..n).map(move |q| (p, q))).map(|(p, q)| a[p * n + q].norm_sqr()).sum::<f64>();
        if (2.0 * off).sqrt() <= f64::EPSILON * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }
    if !converged {
        return Err(LabError::Numerical(format!(
            "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps (n = {n})"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    // stable: ties keep original index order
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let mut vecs = ComplexMatrix::zeros(n, n);
    {
        let out = vecs.as_mut_slice();
        for (col, &src) in order.iter().enumerate() {
            for i in 0..n {
                out[i * n + col] = v[i * n + src];
            }
        }
    }
    Ok(SpectralDecomposition { eigenvalues, eigenvectors: vecs })
}

/// One Jacobi rotation annihilating entry `(p, q)` of the Hermitian matrix `a`.
fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t =
        if theta.abs() > 1e150 { 0.5 / theta } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // G = diag(1, conj(phase)) · [[c, s], [-s, c]]
    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    for k in 0..n {
        let (x, y) = (a[k * n + p], a[k * n + q]);
        a[k * n + p] = x * g_pp + y * g_qp;
        a[k * n + q] = x * g_pq + y * g_qq;
    }
    for k in 0..n {
        let (x, y) = (a[p * n + k], a[q * n + k]);
        a[p * n + k] = g_pp.conj() * x + g_qp.conj() * y;
        a[q * n + k] = g_pq.conj() * x + g_qq.conj() * y;
    }
    for k in 0..n {
        let (x, y) = (v[k * n + p], v[k * n + q]);
        v[k * n + p] = x * g_pp + y * g_qp;
        v[k * n + q] = x * g_pq + y * g_qq;
    }
    a[p * n + q] = C64::new(0.0, 0.0);
    a[q * n + p] = C64::new(0.0, 0.0);
    a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
    a[q * n + q] = C64::new(a[q * n + q].re, 0.0);
}

/// Square root of a positive semidefinite matrix.
///
/// Eigenvalues in `[-clip_tol, 0)` are clipped to zero; anything more negative
/// is rejected.
pub fn sqrt_psd(m: &ComplexMatrix, clip_tol: f64) -> Result<ComplexMatrix> {
    let herm_tol = 1e-10 * m.frobenius().max(1.0);
    herm_eig(m, herm_tol)?.sqrt(clip_tol)
}
