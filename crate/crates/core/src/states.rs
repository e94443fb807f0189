//! Unit vectors, density operators and seeded random state generation.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{LabError, Result};
use crate::linalg::{
    herm_eig, hermiticity_defect, hs_distance, hs_norm, kron, trace, vdot, vkron, vnorm, ComplexMatrix,
    SpectralDecomposition, DEFAULT_CLIP_TOL,
};

/// Norm tolerance for [`StateVector`].
pub const NORM_TOL: f64 = 1e-12;
/// Validation tolerance for density operators.
pub const STATE_TOL: f64 = 1e-10;
/// States with purity at or above `1 - PURE_TOL` count as pure.
pub const PURE_TOL: f64 = 1e-9;

/// Random stream reserved for [`random_pure`].
const STREAM_PURE: u64 = 1;
const STREAM_MIXED: u64 = 2;
const STREAM_PERTURB: u64 = 3;
const STREAM_UNITARY: u64 = 4;

/// Deterministic generator for `(seed, stream)`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Unit vector in `C^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized within [`NORM_TOL`].
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(LabError::Dimension("state vector must have dim >= 1".into()));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LabError::Numerical("state vector has non-finite amplitudes".into()));
        }
        let norm = vnorm(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(LabError::Normalization { norm, tol: NORM_TOL });
        }
        Ok(Self { amps })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        let norm = vnorm(&amps);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(LabError::Normalization { norm, tol: NORM_TOL });
        }
        amps.iter_mut().for_each(|z| *z /= norm);
        Self::new(amps)
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::normalized(amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Canonical basis vector `e_k` of `C^dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(LabError::Dimension(format!("basis index {k} out of range for dim {dim}")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[k] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn inner(&self, other: &Self) -> C64 {
        vdot(&self.amps, &other.amps)
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { amps: vkron(&self.amps, &other.amps) }
    }

    /// `(self + other)/√2` renormalized, i.e. the equal superposition for orthonormal inputs.
    pub fn superpose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(LabError::Dimension("superposition of vectors of different dims".into()));
        }
        Self::normalized(self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect())
    }

    /// The rank-one matrix `v v†`.
    pub fn projector_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amps, &self.amps)
    }
}

impl AsRef<[C64]> for StateVector {
    fn as_ref(&self) -> &[C64] {
        &self.amps
    }
}

/// A validated density operator with its spectral decomposition cached.
///
/// The stored matrix is the Hermitian part of the validated input and the
/// cached eigenvalues are clipped to `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    spectrum: SpectralDecomposition,
}

impl DensityOperator {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        purity(self)
    }

    pub fn is_pure(&self) -> bool {
        self.purity() >= 1.0 - PURE_TOL
    }

    /// Number of eigenvalues above the rounding-noise floor.
    pub fn rank(&self) -> usize {
        let floor = self.spectrum.noise_floor().max(1e-12);
        self.spectrum.eigenvalues.iter().filter(|&&l| l > floor).count()
    }

    /// Eigenvectors with nonzero eigenvalue, in descending eigenvalue order.
    pub fn support(&self) -> Vec<(f64, Vec<C64>)> {
        (0..self.rank()).map(|k| (self.spectrum.eigenvalues[k], self.spectrum.eigenvector(k))).collect()
    }

    pub fn sqrt(&self) -> ComplexMatrix {
        sqrt_state(self)
    }

    /// `ρ ⊗ σ`, revalidated.
    pub fn tensor(&self, other: &DensityOperator) -> Result<DensityOperator> {
        make_density(&kron(&self.matrix, &other.matrix), STATE_TOL)
    }

    /// Convex combination `(1 - t)·self + t·other`.
    pub fn mix(&self, other: &DensityOperator, t: f64) -> Result<DensityOperator> {
        if !(0.0..=1.0).contains(&t) {
            return Err(LabError::Parameter(format!("mixing weight {t} outside [0, 1]")));
        }
        let m = self.matrix.scale_real(1.0 - t).try_add(&other.matrix.scale_real(t))?;
        make_density(&m, STATE_TOL)
    }

    pub fn maximally_mixed(dim: usize) -> Result<DensityOperator> {
        if dim == 0 {
            return Err(LabError::Dimension("dim must be >= 1".into()));
        }
        make_density(&ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64), STATE_TOL)
    }
}

/// Validates `m` as a density operator within `tol`.
pub fn make_density(m: &ComplexMatrix, tol: f64) -> Result<DensityOperator> {
    m.check_square()?;
    let deviation = hermiticity_defect(m)?;
    if deviation > tol {
        return Err(LabError::Hermiticity { deviation, tol });
    }
    let tr = trace(m)?;
    if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
        return Err(LabError::Trace { trace: tr.re, tol });
    }
    let mut spectrum = herm_eig(m, tol)?;
    if let Some(&worst) = spectrum.eigenvalues.last() {
        if worst < -tol {
            return Err(LabError::NotPsd { eigenvalue: worst, tol });
        }
    }
    spectrum.eigenvalues.iter_mut().for_each(|l| *l = l.clamp(0.0, 1.0));
    let matrix = (m + &m.dagger()).scale_real(0.5);
    Ok(DensityOperator { matrix, spectrum })
}

/// The projector `P_v = v v†`.
pub fn pure_projector(v: &StateVector) -> Result<DensityOperator> {
    let norm = vnorm(v.amplitudes());
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(LabError::Normalization { norm, tol: NORM_TOL });
    }
    make_density(&v.projector_matrix(), STATE_TOL)
}

pub fn purity(rho: &DensityOperator) -> f64 {
    // ρ is Hermitian, so Tr(ρ²) = ||ρ||²_HS.
    let n = hs_norm(&rho.matrix).expect("density operators are square");
    n * n
}

/// `√ρ` from the cached spectrum.
pub fn sqrt_state(rho: &DensityOperator) -> ComplexMatrix {
    rho.spectrum.sqrt(DEFAULT_CLIP_TOL).expect("cached spectrum is clipped to [0, 1]")
}

/// Haar-random unit vector in `C^d`.
pub fn random_pure(d: usize, seed: u64) -> Result<StateVector> {
    random_pure_with(d, &mut seeded_rng(seed, STREAM_PURE))
}

pub fn random_pure_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<StateVector> {
    if d == 0 {
        return Err(LabError::Parameter("dimension must be >= 1".into()));
    }
    StateVector::normalized((0..d).map(|_| complex_gaussian(rng)).collect())
}

/// Ginibre random density operator `G G† / Tr(G G†)` with `G` a `d × rank`
/// complex Gaussian matrix.
pub fn random_mixed(d: usize, rank: usize, seed: u64) -> Result<DensityOperator> {
    random_mixed_with(d, rank, &mut seeded_rng(seed, STREAM_MIXED))
}

pub fn random_mixed_with<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> Result<DensityOperator> {
    if rank == 0 || rank > d {
        return Err(LabError::Parameter(format!("rank {rank} outside 1..={d}")));
    }
    let g = ComplexMatrix::new(d, rank, (0..d * rank).map(|_| complex_gaussian(rng)).collect())?;
    let m = &g * &g.dagger();
    let t = trace(&m)?.re;
    make_density(&m.scale_real(1.0 / t), STATE_TOL)
}

/// Haar-random unitary: Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary(d: usize, seed: u64) -> Result<ComplexMatrix> {
    random_unitary_with(d, &mut seeded_rng(seed, STREAM_UNITARY))
}

pub fn random_unitary_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if d == 0 {
        return Err(LabError::Parameter("dimension must be >= 1".into()));
    }
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        for _ in 0..2 {
            for c in &cols {
                let p = vdot(c, &v);
                v.iter_mut().zip(c).for_each(|(vi, ci)| *vi -= p * ci);
            }
        }
        let n = vnorm(&v);
        // a Gaussian draw landing in the span has probability zero; redraw if it happens numerically
        if n > 1e-8 {
            v.iter_mut().for_each(|z| *z /= n);
            cols.push(v);
        }
    }
    Ok(ComplexMatrix::from_columns(&cols))
}

/// A density operator within HS distance `delta` of `rho`.
///
/// Mixes `rho` with a Ginibre state `σ` of random rank:
/// `ρ' = (1 - t)ρ + tσ` with `t = u · min(1, δ / ||σ - ρ||_HS)` and `u`
/// uniform in `[0, 1)`, so `||ρ' - ρ||_HS = t·||σ - ρ||_HS < δ`.
pub fn perturb_density(rho: &DensityOperator, delta: f64, seed: u64) -> Result<DensityOperator> {
    perturb_density_with(rho, delta, &mut seeded_rng(seed, STREAM_PERTURB))
}

pub fn perturb_density_with<R: Rng + ?Sized>(
    rho: &DensityOperator,
    delta: f64,
    rng: &mut R,
) -> Result<DensityOperator> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(LabError::Parameter(format!("perturbation radius {delta} must be positive")));
    }
    let d = rho.dim();
    let rank = rng.random_range(1..=d);
    let sigma = random_mixed_with(d, rank, rng)?;
    let u: f64 = rng.random();
    let dist = hs_distance(sigma.matrix(), rho.matrix())?;
    if dist == 0.0 {
        return Ok(rho.clone());
    }
    let t = u * (delta / dist).min(1.0);
    rho.mix(&sigma, t)
}
