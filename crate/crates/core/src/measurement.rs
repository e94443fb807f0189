//! Measurement models, configuration regions and classification.
//!
//! A [`MeasurementModel`] realizes a premeasurement-to-postmeasurement unitary
//! `U` on `C^{d_s} ⊗ C^{d_e}` that copies the orthonormal pair `ψ₁, ψ₂` into
//! two mutually orthogonal pointer families of the environment:
//! `U(ψᵢ ⊗ f_α) = ψᵢ ⊗ g_{i,α}` for every eigenvector `f_α` of the ready state.
//!
//! [`ConfigurationRegions`] are the sets `A₁, A₂` of density operators whose
//! square roots lie within HS distance `ε/2` of the family
//! `{ √τ ⊗ √Eᵢ : τ a density operator on C^{d_s} }`, where `Eᵢ` is the ready
//! state carried onto pointer family `i`. The two families are HS-orthogonal,
//! so any `ρ₁ ∈ A₁`, `ρ₂ ∈ A₂` satisfy `|⟨√ρ₁, √ρ₂⟩_HS| < ε`.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::io::num17;
use crate::linalg::{
    complete_unitary, herm_eig, hs_inner, hs_norm, kron, partial_trace, trace, unitarity_defect, vdot, vkron, vnorm,
    ComplexMatrix, Subsystem,
};
use crate::states::{make_density, pure_projector, sqrt_state, DensityOperator, StateVector, STATE_TOL};

/// Tolerance for validating user-supplied vectors.
pub const INPUT_TOL: f64 = 1e-12;
/// Tolerance for checks on constructed objects.
pub const CONSTRUCTION_TOL: f64 = 1e-10;
/// Tolerance for quantities propagated through several constructions.
pub const RESULT_TOL: f64 = 1e-9;

/// Residual norm a candidate must keep to enter a pointer family.
const PIVOT_TOL: f64 = 1e-6;

/// Raw ingredients of a model, as read from or written to disk.
#[derive(Clone, Debug)]
pub struct ModelParts {
    pub d_s: usize,
    pub d_e: usize,
    pub psi1: StateVector,
    pub psi2: StateVector,
    pub ready: DensityOperator,
    pub pointer1: StateVector,
    pub pointer2: StateVector,
    pub unitary: ComplexMatrix,
}

#[derive(Clone, Debug)]
pub struct MeasurementModel {
    parts: ModelParts,
    /// `(λ_α, f_α)` for the ready state's support.
    support: Vec<(f64, Vec<C64>)>,
    /// `g_{i,α}` for `i = 1, 2`.
    families: [Vec<Vec<C64>>; 2],
}

impl MeasurementModel {
    /// Checks every model invariant and recovers the pointer families from `U`.
    pub fn from_parts(parts: ModelParts) -> Result<Self> {
        let ModelParts { d_s, d_e, .. } = parts;
        if d_s < 2 || d_e < 2 {
            return Err(LabError::Dimension(format!("need d_s >= 2 and d_e >= 2, got {d_s}, {d_e}")));
        }
        for (name, dim, want) in [
            ("psi1", parts.psi1.dim(), d_s),
            ("psi2", parts.psi2.dim(), d_s),
            ("pointer1", parts.pointer1.dim(), d_e),
            ("pointer2", parts.pointer2.dim(), d_e),
            ("ready", parts.ready.dim(), d_e),
            ("unitary", parts.unitary.rows(), d_s * d_e),
            ("unitary", parts.unitary.cols(), d_s * d_e),
        ] {
            if dim != want {
                return Err(LabError::Dimension(format!("{name} has dimension {dim}, expected {want}")));
            }
        }
        check_orthogonal("psi1", &parts.psi1, "psi2", &parts.psi2)?;
        check_orthogonal("pointer1", &parts.pointer1, "pointer2", &parts.pointer2)?;
        let defect = unitarity_defect(&parts.unitary)?;
        if defect > CONSTRUCTION_TOL {
            return Err(LabError::Construction(format!("U is not unitary: ||U†U - id||_HS = {defect:e}")));
        }

        let support = parts.ready.support();
        let mut families: [Vec<Vec<C64>>; 2] = [Vec::new(), Vec::new()];
        for (i, psi) in [&parts.psi1, &parts.psi2].into_iter().enumerate() {
            for (_, f) in &support {
                let out = parts.unitary.apply(&vkron(psi.amplitudes(), f))?;
                let g = contract_first(psi.amplitudes(), &out, d_e);
                let residual: f64 =
                    vnorm(&out.iter().zip(vkron(psi.amplitudes(), &g)).map(|(a, b)| a - b).collect::<Vec<_>>());
                if residual > CONSTRUCTION_TOL {
                    return Err(LabError::Construction(format!(
                        "U does not map psi{} ⊗ f into psi{} ⊗ C^{d_e} (residual {residual:e})",
                        i + 1,
                        i + 1
                    )));
                }
                families[i].push(g);
            }
        }
        for (i, p) in [&parts.pointer1, &parts.pointer2].into_iter().enumerate() {
            let lead = vdot(p.amplitudes(), &families[i][0]).norm();
            if (lead - 1.0).abs() > CONSTRUCTION_TOL {
                return Err(LabError::Construction(format!(
                    "leading ready eigenvector is not sent to pointer{} (|⟨p, g⟩| = {lead})",
                    i + 1
                )));
            }
        }
        for g1 in &families[0] {
            for g2 in &families[1] {
                let c = vdot(g1, g2).norm();
                if c > CONSTRUCTION_TOL {
                    return Err(LabError::Construction(format!("pointer families overlap: |⟨g1, g2⟩| = {c:e}")));
                }
            }
        }
        Ok(Self { parts, support, families })
    }

    pub fn d_s(&self) -> usize {
        self.parts.d_s
    }

    pub fn d_e(&self) -> usize {
        self.parts.d_e
    }

    pub fn dim(&self) -> usize {
        self.parts.d_s * self.parts.d_e
    }

    pub fn psi(&self, i: usize) -> &StateVector {
        match i {
            1 => &self.parts.psi1,
            2 => &self.parts.psi2,
            _ => panic!("configuration index must be 1 or 2"),
        }
    }

    pub fn pointer(&self, i: usize) -> &StateVector {
        match i {
            1 => &self.parts.pointer1,
            2 => &self.parts.pointer2,
            _ => panic!("configuration index must be 1 or 2"),
        }
    }

    pub fn ready(&self) -> &DensityOperator {
        &self.parts.ready
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.parts.unitary
    }

    pub fn parts(&self) -> &ModelParts {
        &self.parts
    }

    pub fn ready_rank(&self) -> usize {
        self.support.len()
    }

    /// `g_{i,α}` for `α = 1..rank`.
    pub fn pointer_family(&self, i: usize) -> &[Vec<C64>] {
        &self.families[i - 1]
    }

    /// The ready state transported onto pointer family `i`: `Σ_α λ_α P_{g_{i,α}}`.
    pub fn pointer_state(&self, i: usize) -> Result<DensityOperator> {
        let d_e = self.parts.d_e;
        let mut m = ComplexMatrix::zeros(d_e, d_e);
        for ((lambda, _), g) in self.support.iter().zip(&self.families[i - 1]) {
            m = &m + &ComplexMatrix::outer(g, g).scale_real(*lambda);
        }
        let t = trace(&m)?.re;
        make_density(&m.scale_real(1.0 / t), STATE_TOL)
    }

    /// The map `u: ρ ↦ U ρ U†`.
    pub fn evolve(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.dim() != self.dim() {
            return Err(LabError::Dimension(format!(
                "state has dimension {}, model acts on {}",
                rho.dim(),
                self.dim()
            )));
        }
        let u = &self.parts.unitary;
        make_density(&(&(u * rho.matrix()) * &u.dagger()), STATE_TOL)
    }

    /// `u` applied to an arbitrary operator.
    pub fn evolve_operator(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        let u = &self.parts.unitary;
        u.try_matmul(a)?.try_matmul(&u.dagger())
    }

    /// `U x` for a vector on the total space.
    pub fn evolve_vector(&self, x: &StateVector) -> Result<StateVector> {
        StateVector::normalized(self.parts.unitary.apply(x.amplitudes())?)
    }

    /// Equal superposition `(ψ₁ + ψ₂)/√2`.
    pub fn phi(&self) -> StateVector {
        self.parts.psi1.superpose(&self.parts.psi2).expect("psi1 ⊥ psi2")
    }

    /// Premeasurement state `ρ_s ⊗ E`.
    pub fn premeasurement(&self, rho_s: &DensityOperator) -> Result<DensityOperator> {
        if rho_s.dim() != self.parts.d_s {
            return Err(LabError::Dimension(format!(
                "microsystem state has dimension {}, expected {}",
                rho_s.dim(),
                self.parts.d_s
            )));
        }
        rho_s.tensor(&self.parts.ready)
    }

    /// Postmeasurement state `u(ρ_s ⊗ E)`.
    pub fn postmeasurement(&self, rho_s: &DensityOperator) -> Result<DensityOperator> {
        self.evolve(&self.premeasurement(rho_s)?)
    }
}

fn check_orthogonal(na: &str, a: &StateVector, nb: &str, b: &StateVector) -> Result<()> {
    let c = a.inner(b).norm();
    if c > INPUT_TOL {
        return Err(LabError::Orthonormality(format!("|⟨{na}, {nb}⟩| = {c:e}")));
    }
    Ok(())
}

/// `(⟨psi| ⊗ id) x` for `x ∈ C^{d_s} ⊗ C^{d_e}`.
fn contract_first(psi: &[C64], x: &[C64], d_e: usize) -> Vec<C64> {
    (0..d_e).map(|k| psi.iter().enumerate().map(|(j, p)| p.conj() * x[j * d_e + k]).sum()).collect()
}

/// `(id ⊗ ⟨g|) x` for `x ∈ C^{d_s} ⊗ C^{d_e}`.
fn contract_second(g: &[C64], x: &[C64], d_s: usize) -> Vec<C64> {
    let d_e = g.len();
    (0..d_s).map(|j| g.iter().enumerate().map(|(k, gk)| gk.conj() * x[j * d_e + k]).sum()).collect()
}

/// Gram–Schmidt pick of the first candidate with a residual above [`PIVOT_TOL`].
fn next_orthonormal<'a>(chosen: &[Vec<C64>], candidates: impl Iterator<Item = &'a [C64]>) -> Option<Vec<C64>> {
    for c in candidates {
        let mut r = c.to_vec();
        for _ in 0..2 {
            for b in chosen {
                let p = vdot(b, &r);
                r.iter_mut().zip(b).for_each(|(ri, bi)| *ri -= p * bi);
            }
        }
        let n = vnorm(&r);
        if n > PIVOT_TOL {
            r.iter_mut().for_each(|z| *z /= n);
            return Some(r);
        }
    }
    None
}

/// Builds a model with `U(ψᵢ ⊗ f_α) = ψᵢ ⊗ g_{i,α}`.
///
/// `f_α` runs over the ready state's eigenvectors with nonzero eigenvalue in
/// descending order. Family `i` starts with `pointer_i`; family 1 is
/// completed from the remaining ready eigenvectors and then the canonical
/// basis, family 2 from the canonical basis, each orthogonal to everything
/// chosen before. When `pointer1` is the leading ready eigenvector, family 1
/// is the ready eigenbasis itself and `U` leaves `ψ₁ ⊗ E` unchanged.
pub fn build_model(
    d_s: usize,
    d_e: usize,
    psi1: StateVector,
    psi2: StateVector,
    ready: DensityOperator,
    pointer1: StateVector,
    pointer2: StateVector,
) -> Result<MeasurementModel> {
    if psi1.dim() != d_s || psi2.dim() != d_s {
        return Err(LabError::Dimension(format!("microsystem vectors must have dimension {d_s}")));
    }
    if pointer1.dim() != d_e || pointer2.dim() != d_e || ready.dim() != d_e {
        return Err(LabError::Dimension(format!("environment objects must have dimension {d_e}")));
    }
    check_orthogonal("psi1", &psi1, "psi2", &psi2)?;
    check_orthogonal("pointer1", &pointer1, "pointer2", &pointer2)?;
    let support = ready.support();
    let rank = support.len();
    if 2 * rank > d_e {
        return Err(LabError::Dimension(format!(
            "d_e = {d_e} cannot host two orthogonal pointer families for a rank-{rank} ready state"
        )));
    }

    let canonical: Vec<Vec<C64>> =
        (0..d_e).map(|k| StateVector::basis(d_e, k).expect("k < d_e").amplitudes().to_vec()).collect();
    let mut chosen = vec![pointer1.amplitudes().to_vec(), pointer2.amplitudes().to_vec()];
    let mut fam1 = vec![pointer1.amplitudes().to_vec()];
    let mut fam2 = vec![pointer2.amplitudes().to_vec()];
    while fam1.len() < rank {
        let cands = support.iter().map(|(_, f)| f.as_slice()).chain(canonical.iter().map(Vec::as_slice));
        let g = next_orthonormal(&chosen, cands)
            .ok_or_else(|| LabError::Dimension("environment too small for pointer family 1".into()))?;
        chosen.push(g.clone());
        fam1.push(g);
    }
    while fam2.len() < rank {
        let g = next_orthonormal(&chosen, canonical.iter().map(Vec::as_slice))
            .ok_or_else(|| LabError::Dimension("environment too small for pointer family 2".into()))?;
        chosen.push(g.clone());
        fam2.push(g);
    }

    let dim = d_s * d_e;
    let mut inputs = Vec::with_capacity(2 * rank);
    let mut outputs = Vec::with_capacity(2 * rank);
    for (psi, fam) in [(&psi1, &fam1), (&psi2, &fam2)] {
        for ((_, f), g) in support.iter().zip(fam.iter()) {
            inputs.push(vkron(psi.amplitudes(), f));
            outputs.push(vkron(psi.amplitudes(), g));
        }
    }
    let v = complete_unitary(dim, &inputs, CONSTRUCTION_TOL)?;
    let w = complete_unitary(dim, &outputs, CONSTRUCTION_TOL)?;
    let unitary = &w * &v.dagger();

    MeasurementModel::from_parts(ModelParts { d_s, d_e, psi1, psi2, ready, pointer1, pointer2, unitary })
}

/// `|⟨√ρ₁, √ρ₂⟩_HS|`.
pub fn sqrt_overlap(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(LabError::Dimension(format!("states of dimension {} and {}", rho1.dim(), rho2.dim())));
    }
    Ok(hs_inner(&sqrt_state(rho1), &sqrt_state(rho2))?.norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Label {
    Config1,
    Config2,
    Indefinite,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Config1 => "Config1",
            Label::Config2 => "Config2",
            Label::Indefinite => "Indefinite",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub label: Label,
    /// `|⟨√ρ, √anchor₁⟩_HS|`
    #[serde(serialize_with = "num17::serialize")]
    pub overlap1: f64,
    #[serde(serialize_with = "num17::serialize")]
    pub overlap2: f64,
    /// HS distance of `√ρ` to the anchor family of configuration 1
    #[serde(serialize_with = "num17::serialize")]
    pub distance1: f64,
    #[serde(serialize_with = "num17::serialize")]
    pub distance2: f64,
}

impl Classification {
    fn from_parts(overlap1: f64, overlap2: f64, distance1: f64, distance2: f64, radius: f64) -> Self {
        let label = if distance1 < radius {
            Label::Config1
        } else if distance2 < radius {
            Label::Config2
        } else {
            Label::Indefinite
        };
        // The families sit at HS distance √2 from each other and 2·radius < √2.
        debug_assert!(!(distance1 < radius && distance2 < radius));
        Self { label, overlap1, overlap2, distance1, distance2 }
    }

    pub fn min_overlap(&self) -> f64 {
        self.overlap1.min(self.overlap2)
    }
}

/// Vector data for classifying pure total states when the ready state is pure.
#[derive(Clone, Debug)]
struct PureAnchors {
    /// `U(ψᵢ ⊗ e)`
    anchors: [Vec<C64>; 2],
    /// `g_{i,1}`
    pointers: [Vec<C64>; 2],
}

#[derive(Clone, Debug)]
pub struct ConfigurationRegions {
    pub epsilon: f64,
    pub radius: f64,
    pub anchor1: DensityOperator,
    pub anchor2: DensityOperator,
    d_s: usize,
    d_e: usize,
    sqrt_anchors: [ComplexMatrix; 2],
    /// `id ⊗ √Eᵢ`
    lifted_pointer_roots: [ComplexMatrix; 2],
    pure: Option<PureAnchors>,
}

/// Regions `A₁, A₂` of radius `ε/2` around the two anchor families.
pub fn make_regions(model: &MeasurementModel, epsilon: f64) -> Result<ConfigurationRegions> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(LabError::Parameter(format!("epsilon = {epsilon} must lie in (0, 1/2)")));
    }
    let anchor1 = model.postmeasurement(&pure_projector(model.psi(1))?)?;
    let anchor2 = model.postmeasurement(&pure_projector(model.psi(2))?)?;
    let sqrt_anchors = [sqrt_state(&anchor1), sqrt_state(&anchor2)];
    let cross = hs_inner(&sqrt_anchors[0], &sqrt_anchors[1])?.norm();
    if cross > CONSTRUCTION_TOL {
        return Err(LabError::Construction(format!("anchors are not HS-orthogonal: {cross:e}")));
    }
    let e1 = model.pointer_state(1)?;
    let e2 = model.pointer_state(2)?;
    let family_cross = hs_inner(&sqrt_state(&e1), &sqrt_state(&e2))?.norm();
    if family_cross > CONSTRUCTION_TOL {
        return Err(LabError::Construction(format!("pointer states are not HS-orthogonal: {family_cross:e}")));
    }
    let id_s = ComplexMatrix::identity(model.d_s());
    let lifted_pointer_roots = [kron(&id_s, &sqrt_state(&e1)), kron(&id_s, &sqrt_state(&e2))];

    let pure = if model.ready_rank() == 1 {
        let e = &model.support[0].1;
        let a = |i: usize| model.unitary().apply(&vkron(model.psi(i).amplitudes(), e));
        Some(PureAnchors {
            anchors: [a(1)?, a(2)?],
            pointers: [model.families[0][0].clone(), model.families[1][0].clone()],
        })
    } else {
        None
    };

    Ok(ConfigurationRegions {
        epsilon,
        radius: epsilon / 2.0,
        anchor1,
        anchor2,
        d_s: model.d_s(),
        d_e: model.d_e(),
        sqrt_anchors,
        lifted_pointer_roots,
        pure,
    })
}

impl ConfigurationRegions {
    pub fn dim(&self) -> usize {
        self.d_s * self.d_e
    }

    pub fn anchor(&self, i: usize) -> &DensityOperator {
        match i {
            1 => &self.anchor1,
            2 => &self.anchor2,
            _ => panic!("configuration index must be 1 or 2"),
        }
    }

    /// `min_τ ||√ρ − √τ ⊗ √Eᵢ||_HS`, evaluated from a given square root.
    ///
    /// With `M = Tr_E[(id ⊗ √Eᵢ) √ρ]`, the best `√τ` is `M₊ / ||M₊||_HS`, so the
    /// squared distance is `||√ρ||² + 1 − 2 ||M₊||_HS`.
    /// Near zero the result is accurate to about `sqrt(f64::EPSILON)`.
    fn family_distance(&self, sqrt_rho: &ComplexMatrix, i: usize) -> Result<f64> {
        let b = self.lifted_pointer_roots[i - 1].try_matmul(sqrt_rho)?;
        let m = partial_trace(&b, self.d_s, self.d_e, Subsystem::First)?;
        let m = (&m + &m.dagger()).scale_real(0.5);
        let spec = herm_eig(&m, CONSTRUCTION_TOL)?;
        let positive = spec.eigenvalues.iter().filter(|&&l| l > 0.0).map(|l| l * l).sum::<f64>().sqrt();
        let n = hs_norm(sqrt_rho)?;
        Ok((n * n + 1.0 - 2.0 * positive).max(0.0).sqrt())
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim() {
            return Err(LabError::Dimension(format!(
                "state has dimension {d}, regions live on dimension {}",
                self.dim()
            )));
        }
        Ok(())
    }

    /// Classifies a density operator on the total space.
    pub fn classify(&self, rho: &DensityOperator) -> Result<Classification> {
        self.check_dim(rho.dim())?;
        let s = sqrt_state(rho);
        let overlap1 = hs_inner(&s, &self.sqrt_anchors[0])?.norm();
        let overlap2 = hs_inner(&s, &self.sqrt_anchors[1])?.norm();
        let distance1 = self.family_distance(&s, 1)?;
        let distance2 = self.family_distance(&s, 2)?;
        Ok(Classification::from_parts(overlap1, overlap2, distance1, distance2, self.radius))
    }

    /// Classifies the pure total state `P_x` with vector arithmetic only.
    ///
    /// Requires a pure ready state. Overlaps are `|⟨x, U(ψᵢ ⊗ e)⟩|²` and the
    /// family distance is `sqrt(2 − 2 ||(id ⊗ ⟨gᵢ|) x||²)`.
    pub fn classify_vector(&self, x: &StateVector) -> Result<Classification> {
        self.check_dim(x.dim())?;
        let pure = self
            .pure
            .as_ref()
            .ok_or_else(|| LabError::Precondition("vector classification needs a pure ready state".into()))?;
        let ov = |i: usize| vdot(x.amplitudes(), &pure.anchors[i]).norm_sqr();
        let dist = |i: usize| {
            let m = contract_second(&pure.pointers[i], x.amplitudes(), self.d_s);
            let w = m.iter().map(|z| z.norm_sqr()).sum::<f64>();
            (2.0 - 2.0 * w).max(0.0).sqrt()
        };
        Ok(Classification::from_parts(ov(0), ov(1), dist(0), dist(1), self.radius))
    }
}

pub fn classify(rho: &DensityOperator, regions: &ConfigurationRegions) -> Result<Classification> {
    regions.classify(rho)
}

pub fn evolve(model: &MeasurementModel, rho: &DensityOperator) -> Result<DensityOperator> {
    model.evolve(rho)
}

fn check_projection(name: &str, p: &ComplexMatrix, n: usize) -> Result<()> {
    if p.rows() != n || p.cols() != n {
        return Err(LabError::Dimension(format!("{name} must be {n}x{n}")));
    }
    let herm = crate::linalg::hermiticity_defect(p)?;
    let idem = crate::linalg::hs_distance(&(p * p), p)?;
    if herm > CONSTRUCTION_TOL || idem > CONSTRUCTION_TOL {
        return Err(LabError::Precondition(format!(
            "{name} is not an orthogonal projection (||P - P†|| = {herm:e}, ||P² - P|| = {idem:e})"
        )));
    }
    Ok(())
}

fn check_expectation_one(name: &str, obs: &ComplexMatrix, rho: &DensityOperator) -> Result<()> {
    let e = trace(&obs.try_matmul(rho.matrix())?)?;
    if (e - C64::new(1.0, 0.0)).norm() > CONSTRUCTION_TOL {
        return Err(LabError::Precondition(format!("{name} = {e}, expected 1")));
    }
    Ok(())
}

/// Sharp apparatus observables: orthogonal projections `P₁ ⊥ P₂` with
/// `Tr(ρᵢ Pᵢ) = 1`. Returns `|⟨√ρ₁, √ρ₂⟩_HS|`, which must vanish.
pub fn sharp_projection_check(
    p1: &ComplexMatrix,
    p2: &ComplexMatrix,
    rho1: &DensityOperator,
    rho2: &DensityOperator,
) -> Result<f64> {
    let n = rho1.dim();
    check_projection("P1", p1, n)?;
    check_projection("P2", p2, n)?;
    let cross = hs_norm(&(p1 * p2))?;
    if cross > CONSTRUCTION_TOL {
        return Err(LabError::Precondition(format!("P1 P2 != 0 (||P1 P2||_HS = {cross:e})")));
    }
    check_expectation_one("Tr(rho1 P1)", p1, rho1)?;
    check_expectation_one("Tr(rho2 P2)", p2, rho2)?;
    sqrt_overlap(rho1, rho2)
}

/// Outcome of [`effect_pair_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectCheck {
    /// `|⟨√ρ₁, √ρ₂⟩_HS|`
    pub overlap: f64,
    /// `max ||Eᵢ x − x||` over support eigenvectors `x` of `ρᵢ`.
    pub lemma_deviation: f64,
    /// `max |⟨x, y⟩|` over support eigenvectors of `ρ₁` and `ρ₂`.
    pub cross_inner: f64,
}

/// Unsharp apparatus observables: an effect pair `E₁, E₂ = id − E₁` with
/// `Tr(E₁ρ₁) = Tr(E₂ρ₂) = 1`.
pub fn effect_pair_check(e1: &ComplexMatrix, rho1: &DensityOperator, rho2: &DensityOperator) -> Result<EffectCheck> {
    let n = rho1.dim();
    if e1.rows() != n || e1.cols() != n || rho2.dim() != n {
        return Err(LabError::Dimension(format!("effect and states must all be {n}-dimensional")));
    }
    let spec = herm_eig(e1, CONSTRUCTION_TOL).map_err(|e| match e {
        LabError::Hermiticity { deviation, .. } => {
            LabError::Precondition(format!("E1 is not Hermitian (defect {deviation:e})"))
        }
        other => other,
    })?;
    let (hi, lo) = (spec.eigenvalues[0], spec.eigenvalues[n - 1]);
    if lo < -CONSTRUCTION_TOL || hi > 1.0 + CONSTRUCTION_TOL {
        return Err(LabError::Precondition(format!("0 <= E1 <= id violated: spectrum in [{lo}, {hi}]")));
    }
    let e2 = &ComplexMatrix::identity(n) - e1;
    check_expectation_one("Tr(E1 rho1)", e1, rho1)?;
    check_expectation_one("Tr(E2 rho2)", &e2, rho2)?;

    let xs = rho1.support();
    let ys = rho2.support();
    let fixed_point_gap = |e: &ComplexMatrix, v: &[C64]| -> Result<f64> {
        let ev = e.apply(v)?;
        Ok(vnorm(&ev.iter().zip(v).map(|(a, b)| a - b).collect::<Vec<_>>()))
    };
    let mut lemma_deviation: f64 = 0.0;
    for (_, x) in &xs {
        lemma_deviation = lemma_deviation.max(fixed_point_gap(e1, x)?);
    }
    for (_, y) in &ys {
        lemma_deviation = lemma_deviation.max(fixed_point_gap(&e2, y)?);
    }
    let cross_inner = xs.iter().flat_map(|(_, x)| ys.iter().map(move |(_, y)| vdot(x, y).norm())).fold(0.0, f64::max);
    Ok(EffectCheck { overlap: sqrt_overlap(rho1, rho2)?, lemma_deviation, cross_inner })
}
