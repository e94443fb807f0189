use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use super::ops::{vdot, vnorm};
use crate::error::{LabError, Result};

/// Extends orthonormal `columns` of `C^dim` to a unitary matrix.
///
/// The given vectors become the leading columns. The remaining columns come
/// from Gram–Schmidt over the canonical basis, taking the lowest-index basis
/// vector whose residual norm exceeds `tol` first.
pub fn complete_unitary<V: AsRef<[C64]>>(dim: usize, columns: &[V], tol: f64) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(LabError::Dimension("unitary completion needs dim >= 1".into()));
    }
    if columns.len() > dim {
        return Err(LabError::Rank(format!("{} columns cannot be orthonormal in C^{dim}", columns.len())));
    }
    for (k, c) in columns.iter().enumerate() {
        if c.as_ref().len() != dim {
            return Err(LabError::Dimension(format!("column {k} has length {}, expected {dim}", c.as_ref().len())));
        }
    }
    for (i, a) in columns.iter().enumerate() {
        for (j, b) in columns.iter().enumerate().skip(i) {
            let g = vdot(a.as_ref(), b.as_ref());
            let target = if i == j { 1.0 } else { 0.0 };
            if (g - C64::new(target, 0.0)).norm() > tol {
                return Err(LabError::Orthonormality(format!("columns {i} and {j} have inner product {g}")));
            }
        }
    }

    let mut basis: Vec<Vec<C64>> = columns.iter().map(|c| c.as_ref().to_vec()).collect();
    let mut k = 0;
    while basis.len() < dim {
        if k == dim {
            return Err(LabError::Rank(format!("canonical basis exhausted with {} of {dim} columns", basis.len())));
        }
        let mut r = vec![C64::new(0.0, 0.0); dim];
        r[k] = C64::new(1.0, 0.0);
        k += 1;
        // two passes of modified Gram–Schmidt keep the result orthogonal to working precision
        for _ in 0..2 {
            for b in &basis {
                let proj = vdot(b, &r);
                for (ri, bi) in r.iter_mut().zip(b) {
                    *ri -= proj * bi;
                }
            }
        }
        let norm = vnorm(&r);
        if norm > tol {
            r.iter_mut().for_each(|z| *z /= norm);
            basis.push(r);
        }
    }
    Ok(ComplexMatrix::from_columns(&basis))
}
