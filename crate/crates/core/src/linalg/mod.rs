//! Dense complex linear algebra: products, Kronecker products, partial
//! traces, Hermitian eigendecomposition, PSD square roots and
//! Hilbert–Schmidt geometry.

mod eig;
mod matrix;
mod ops;
mod unitary;

#[cfg(test)]
pub(crate) mod testutil;

pub use eig::{herm_eig, sqrt_psd, SpectralDecomposition, DEFAULT_CLIP_TOL};
pub use matrix::ComplexMatrix;
pub use ops::{
    dagger, hermiticity_defect, hs_distance, hs_inner, hs_norm, kron, partial_trace, trace, unitarity_defect, vdot,
    vkron, vnorm, Subsystem,
};
pub use unitary::complete_unitary;
