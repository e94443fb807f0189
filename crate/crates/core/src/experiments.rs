//! Seeded verification suites and their machine-readable reports.
//!
//! Every sample draws from its own generator seeded with
//! `seed ^ sample_index` on a suite-specific stream, so reports do not depend
//! on how samples are scheduled.

use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::io::num17;
use crate::linalg::{hs_distance, hs_inner, hs_norm, vnorm, ComplexMatrix};
use crate::measurement::{
    build_model, effect_pair_check, make_regions, sharp_projection_check, Classification, ConfigurationRegions, Label,
    MeasurementModel, RESULT_TOL,
};
use crate::par::{map_indexed, Execution};
use crate::states::{
    make_density, perturb_density_with, pure_projector, random_mixed_with, random_pure_with, random_unitary_with,
    seeded_rng, StateVector, STATE_TOL,
};

const STREAM_MODEL: u64 = 11;
const STREAM_SWEEP: u64 = 12;
const STREAM_PREMISE: u64 = 13;
const STREAM_AUTOMORPHISM: u64 = 14;
const STREAM_REMARKS: u64 = 15;

/// Random microsystem states audited for the "ready in configuration 1" premise.
pub const PREMISE_SAMPLES: usize = 100;
/// Safety factor applied to the separation margin `1/2 − ε`.
pub const NEIGHBORHOOD_SAFETY: f64 = 0.9;
/// Tolerance on the pure-state center value `|⟨U(φ⊗e), U(ψᵢ⊗e)⟩|² = 1/2`.
pub const PURE_CENTER_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub d_s: usize,
    pub d_e: usize,
    #[serde(serialize_with = "num17::serialize")]
    pub epsilon: f64,
    pub ready_rank: usize,
    pub samples: usize,
    pub seed: u64,
    /// Neighborhood radius; `None` means [`neighborhood_bound`]`(epsilon)`.
    #[serde(serialize_with = "num17::serialize_opt")]
    pub delta: Option<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self { d_s: 2, d_e: 4, epsilon: 0.1, ready_rank: 1, samples: 1000, seed: 42, delta: None }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(LabError::Parameter(format!("epsilon = {} must lie in (0, 1/2)", self.epsilon)));
        }
        if self.samples == 0 {
            return Err(LabError::Parameter("samples must be >= 1".into()));
        }
        if self.ready_rank == 0 {
            return Err(LabError::Parameter("ready rank must be >= 1".into()));
        }
        if self.d_s < 2 {
            return Err(LabError::Parameter(format!("d_s = {} cannot hold two orthonormal vectors", self.d_s)));
        }
        if 2 * self.ready_rank > self.d_e {
            return Err(LabError::Parameter(format!(
                "d_e = {} must be at least twice the ready rank {}",
                self.d_e, self.ready_rank
            )));
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d.is_finite()) {
                return Err(LabError::Parameter(format!("delta = {d} must be positive")));
            }
        }
        Ok(())
    }

    pub fn resolved_delta(&self) -> Result<f64> {
        match self.delta {
            Some(d) => Ok(d),
            None => neighborhood_bound(self.epsilon),
        }
    }
}

/// Radius `δ` of a microsystem neighborhood of `P_φ` whose postmeasurement
/// states are all indefinite.
///
/// For `||ρ_s − P_φ||_HS < δ`, the overlap with either anchor is
/// `⟨ψᵢ|√ρ_s|ψᵢ⟩ ≥ ⟨ψᵢ|ρ_s|ψᵢ⟩ ≥ 1/2 − δ`, which exceeds `ε` whenever
/// `δ < 1/2 − ε`. The same bound holds for unit vectors with `||ψ − φ|| < δ`.
pub fn neighborhood_bound(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(LabError::Parameter(format!("epsilon = {epsilon} must lie in (0, 1/2)")));
    }
    Ok(NEIGHBORHOOD_SAFETY * (0.5 - epsilon))
}

/// The `(d_s, d_e, ready_rank)` grid used by the dimension sweep.
pub fn dimension_grid() -> Vec<(usize, usize, usize)> {
    let mut grid = Vec::new();
    for d_s in [2, 3] {
        for d_e in [2, 4, 8] {
            for rank in [1, 2, 3] {
                if 2 * rank <= d_e {
                    grid.push((d_s, d_e, rank));
                }
            }
        }
    }
    grid
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// Per-sample data of a neighborhood sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub sample_index: usize,
    /// HS distance of the sampled microsystem state from `P_φ`.
    #[serde(serialize_with = "num17::serialize")]
    pub delta_actual: f64,
    #[serde(serialize_with = "num17::serialize")]
    pub overlap1: f64,
    #[serde(serialize_with = "num17::serialize")]
    pub overlap2: f64,
    pub label: Label,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub total: usize,
    pub indefinite: usize,
    pub config1: usize,
    pub config2: usize,
    pub violations: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Extrema {
    #[serde(serialize_with = "num17::serialize_opt")]
    pub min_overlap: Option<f64>,
    #[serde(serialize_with = "num17::serialize_opt")]
    pub max_overlap: Option<f64>,
}

impl Extrema {
    fn over(values: impl Iterator<Item = (f64, f64)>) -> Self {
        values.fold(Extrema::default(), |acc, (lo, hi)| Extrema {
            min_overlap: Some(acc.min_overlap.map_or(lo, |m| m.min(lo))),
            max_overlap: Some(acc.max_overlap.map_or(hi, |m| m.max(hi))),
        })
    }
}

/// One named property checked over a number of instances.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub instances: usize,
    #[serde(serialize_with = "num17::serialize")]
    pub max_deviation: f64,
    #[serde(serialize_with = "num17::serialize")]
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(name: &str, deviations: impl IntoIterator<Item = f64>, tolerance: f64) -> Self {
        let mut instances = 0;
        let mut max_deviation: f64 = 0.0;
        let mut all_ok = true;
        for d in deviations {
            instances += 1;
            max_deviation = max_deviation.max(d);
            all_ok &= d <= tolerance;
        }
        Self { name: name.into(), instances, max_deviation, tolerance, passed: all_ok }
    }

    /// A check whose pass condition is not a deviation bound.
    fn flag(name: &str, instances: usize, max_deviation: f64, tolerance: f64, passed: bool) -> Self {
        Self { name: name.into(), instances, max_deviation, tolerance, passed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub name: String,
    pub config: ExperimentConfig,
    pub verdict: Verdict,
    pub counters: Counters,
    pub extrema: Extrema,
    pub checks: Vec<CheckResult>,
    /// Indices of every sample that broke a property.
    pub violating_samples: Vec<usize>,
    pub duration_ms: u64,
}

impl Report {
    fn finish(
        name: &str,
        config: &ExperimentConfig,
        started: Instant,
        counters: Counters,
        extrema: Extrema,
        checks: Vec<CheckResult>,
        violating_samples: Vec<usize>,
    ) -> Self {
        let ok = checks.iter().all(|c| c.passed) && counters.violations == 0;
        Self {
            name: name.into(),
            config: config.clone(),
            verdict: Verdict::from_bool(ok),
            counters,
            extrema,
            checks,
            violating_samples,
            duration_ms: started.elapsed().as_millis() as u64,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports hold finite numbers")
    }
}

/// A report together with its per-sample records.
#[derive(Clone, Debug)]
pub struct SweepRun {
    pub report: Report,
    pub records: Vec<SweepRecord>,
}

/// CSV with header `sample_index,delta_actual,overlap1,overlap2,label`.
pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from("sample_index,delta_actual,overlap1,overlap2,label\n");
    let mut sorted: Vec<&SweepRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.sample_index);
    for r in sorted {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.sample_index,
            num17::format(r.delta_actual),
            num17::format(r.overlap1),
            num17::format(r.overlap2),
            r.label.as_str()
        ));
    }
    out
}

/// The seeded measurement model shared by both measurement-problem suites.
///
/// `ψ₁, ψ₂` are the first two columns of a Haar unitary on `C^{d_s}`. The
/// ready state has `ready_rank` distinct eigenvalues on the first columns
/// `w_0..w_{r-1}` of a Haar unitary on `C^{d_e}`; `pointer1 = w_0` is its
/// leading eigenvector and `pointer2 = w_r`.
pub fn experiment_model(config: &ExperimentConfig) -> Result<MeasurementModel> {
    config.validate()?;
    let (d_s, d_e, r) = (config.d_s, config.d_e, config.ready_rank);
    let mut rng = seeded_rng(config.seed, STREAM_MODEL);
    let ws = random_unitary_with(d_s, &mut rng)?;
    let we = random_unitary_with(d_e, &mut rng)?;
    let mut weights: Vec<f64> = (0..r).map(|_| 0.5 + rng.random::<f64>()).collect();
    weights.sort_by(|a, b| b.total_cmp(a));
    let total: f64 = weights.iter().sum();
    let mut ready = ComplexMatrix::zeros(d_e, d_e);
    for (k, w) in weights.iter().enumerate() {
        let col = we.column(k);
        ready = &ready + &ComplexMatrix::outer(&col, &col).scale_real(w / total);
    }
    let ready = make_density(&ready, STATE_TOL)?;
    build_model(
        d_s,
        d_e,
        StateVector::normalized(ws.column(0))?,
        StateVector::normalized(ws.column(1))?,
        ready,
        StateVector::normalized(we.column(0))?,
        StateVector::normalized(we.column(r))?,
    )
}

fn tally(records: &[SweepRecord], epsilon: f64) -> (Counters, Vec<usize>) {
    let mut c = Counters { total: records.len(), ..Counters::default() };
    let mut bad = Vec::new();
    for r in records {
        match r.label {
            Label::Config1 => c.config1 += 1,
            Label::Config2 => c.config2 += 1,
            Label::Indefinite => c.indefinite += 1,
        }
        if r.label != Label::Indefinite || r.overlap1.min(r.overlap2) <= epsilon {
            bad.push(r.sample_index);
        }
    }
    c.violations = bad.len();
    (c, bad)
}

fn record(k: usize, delta_actual: f64, c: &Classification) -> SweepRecord {
    SweepRecord { sample_index: k, delta_actual, overlap1: c.overlap1, overlap2: c.overlap2, label: c.label }
}

fn anchor_check(regions: &ConfigurationRegions, c1: &Classification, c2: &Classification) -> CheckResult {
    CheckResult::flag(
        "anchors_classify_to_own_configuration",
        2,
        c1.distance1.max(c2.distance2),
        regions.radius,
        c1.label == Label::Config1 && c2.label == Label::Config2,
    )
}

pub fn run_impure_qmp(config: &ExperimentConfig) -> Result<SweepRun> {
    run_impure_qmp_with(config, Execution::default())
}

/// Impure-state measurement problem.
///
/// Checks the center value `|⟨√u(P_φ⊗E), √u(P_ψᵢ⊗E)⟩_HS| = 1/2`, the anchor
/// hypothesis, the premise that every `ρ_s ⊗ E` is in configuration 1, and
/// then sweeps `ρ_s` over the `δ`-neighborhood of `P_φ` expecting only
/// indefinite postmeasurement states with both overlaps above `ε`.
pub fn run_impure_qmp_with(config: &ExperimentConfig, exec: Execution) -> Result<SweepRun> {
    let started = Instant::now();
    config.validate()?;
    let delta = config.resolved_delta()?;
    let model = experiment_model(config)?;
    let regions = make_regions(&model, config.epsilon)?;
    let p_phi = pure_projector(&model.phi())?;

    let center = regions.classify(&model.postmeasurement(&p_phi)?)?;
    let center_check = CheckResult::flag(
        "center_value",
        2,
        (center.overlap1 - 0.5).abs().max((center.overlap2 - 0.5).abs()),
        RESULT_TOL,
        (center.overlap1 - 0.5).abs() <= RESULT_TOL
            && (center.overlap2 - 0.5).abs() <= RESULT_TOL
            && center.label == Label::Indefinite,
    );
    let a1 = regions.classify(&regions.anchor1)?;
    let a2 = regions.classify(&model.postmeasurement(&pure_projector(model.psi(2))?)?)?;
    let anchors = anchor_check(&regions, &a1, &a2);

    let premise: Vec<Classification> = map_indexed(PREMISE_SAMPLES, exec, |k| {
        let mut rng = seeded_rng(config.seed ^ k as u64, STREAM_PREMISE);
        let rank = rng.random_range(1..=config.d_s);
        let rho_s = random_mixed_with(config.d_s, rank, &mut rng)?;
        regions.classify(&model.premeasurement(&rho_s)?)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let premise_check = CheckResult::flag(
        "premise_ready_in_configuration_1",
        premise.len(),
        premise.iter().map(|c| c.distance1).fold(0.0, f64::max),
        regions.radius,
        premise.iter().all(|c| c.label == Label::Config1),
    );

    let records: Vec<SweepRecord> = map_indexed(config.samples, exec, |k| {
        let mut rng = seeded_rng(config.seed ^ k as u64, STREAM_SWEEP);
        let rho_s = perturb_density_with(&p_phi, delta, &mut rng)?;
        let dist = hs_distance(rho_s.matrix(), p_phi.matrix())?;
        let c = regions.classify(&model.postmeasurement(&rho_s)?)?;
        Ok(record(k, dist, &c))
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let (counters, bad) = tally(&records, config.epsilon);
    let extrema = Extrema::over(records.iter().map(|r| (r.overlap1.min(r.overlap2), r.overlap1.max(r.overlap2))));
    let report = Report::finish(
        "qmp-impure",
        &ExperimentConfig { delta: Some(delta), ..config.clone() },
        started,
        counters,
        extrema,
        vec![center_check, anchors, premise_check],
        bad,
    );
    Ok(SweepRun { report, records })
}

/// Unit vector at Euclidean distance `u·δ` from `phi` (capped at 2) in a
/// random direction, `u` uniform in `[0, 1)`.
pub fn pure_neighbor<R: Rng + ?Sized>(phi: &StateVector, delta: f64, rng: &mut R) -> Result<StateVector> {
    let d = phi.dim();
    if d < 2 {
        return Err(LabError::Dimension("no direction orthogonal to phi in dimension 1".into()));
    }
    let w = loop {
        let g = random_pure_with(d, rng)?;
        let p = phi.inner(&g);
        let perp: Vec<C64> = g.amplitudes().iter().zip(phi.amplitudes()).map(|(a, b)| a - p * b).collect();
        if vnorm(&perp) > 1e-6 {
            break StateVector::normalized(perp)?;
        }
    };
    let r = (rng.random::<f64>() * delta).min(2.0);
    let theta = 2.0 * (r / 2.0).asin();
    let (c, s) = (theta.cos(), theta.sin());
    StateVector::normalized(phi.amplitudes().iter().zip(w.amplitudes()).map(|(a, b)| a * c + b * s).collect())
}

/// The `k`-th microsystem vector of the pure sweep for `config`.
pub fn pure_sweep_state(config: &ExperimentConfig, phi: &StateVector, k: usize) -> Result<StateVector> {
    let mut rng = seeded_rng(config.seed ^ k as u64, STREAM_SWEEP);
    pure_neighbor(phi, config.resolved_delta()?, &mut rng)
}

pub fn run_pure_qmp(config: &ExperimentConfig) -> Result<SweepRun> {
    run_pure_qmp_with(config, Execution::default())
}

/// Pure-state measurement problem, computed with vectors only.
///
/// Overlaps are `|⟨U(ψ⊗e), U(ψᵢ⊗e)⟩|²`. Each swept vector is also pushed
/// through the density-operator route (`classify(u(P_ψ ⊗ E))`) and the two
/// sets of overlaps must agree.
pub fn run_pure_qmp_with(config: &ExperimentConfig, exec: Execution) -> Result<SweepRun> {
    let started = Instant::now();
    config.validate()?;
    if config.ready_rank != 1 {
        return Err(LabError::Parameter(format!("the pure-state suite needs ready rank 1, got {}", config.ready_rank)));
    }
    let delta = config.resolved_delta()?;
    let model = experiment_model(config)?;
    let regions = make_regions(&model, config.epsilon)?;
    let e = StateVector::normalized(model.ready().support()[0].1.clone())?;
    let phi = model.phi();
    let post = |psi: &StateVector| model.evolve_vector(&psi.kron(&e));

    let center = regions.classify_vector(&post(&phi)?)?;
    let center_dev = (center.overlap1 - 0.5).abs().max((center.overlap2 - 0.5).abs());
    let center_check = CheckResult::flag(
        "center_value",
        2,
        center_dev,
        PURE_CENTER_TOL,
        center_dev <= PURE_CENTER_TOL && center.label == Label::Indefinite,
    );
    let a1 = regions.classify_vector(&post(model.psi(1))?)?;
    let a2 = regions.classify_vector(&post(model.psi(2))?)?;
    let anchors = anchor_check(&regions, &a1, &a2);

    let premise: Vec<Classification> = map_indexed(PREMISE_SAMPLES, exec, |k| {
        let mut rng = seeded_rng(config.seed ^ k as u64, STREAM_PREMISE);
        let psi = random_pure_with(config.d_s, &mut rng)?;
        regions.classify_vector(&psi.kron(&e))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let premise_check = CheckResult::flag(
        "premise_ready_in_configuration_1",
        premise.len(),
        premise.iter().map(|c| c.distance1).fold(0.0, f64::max),
        regions.radius,
        premise.iter().all(|c| c.label == Label::Config1),
    );

    let density_center = regions.classify(&model.postmeasurement(&pure_projector(&phi)?)?)?;
    let samples: Vec<(SweepRecord, f64)> = map_indexed(config.samples, exec, |k| {
        let psi = pure_sweep_state(config, &phi, k)?;
        let c = regions.classify_vector(&post(&psi)?)?;
        let dist = (2.0 - 2.0 * psi.inner(&phi).norm_sqr()).max(0.0).sqrt();
        let via_density = regions.classify(&model.postmeasurement(&pure_projector(&psi)?)?)?;
        let gap = (c.overlap1 - via_density.overlap1).abs().max((c.overlap2 - via_density.overlap2).abs());
        Ok((record(k, dist, &c), gap))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let (records, gaps): (Vec<SweepRecord>, Vec<f64>) = samples.into_iter().unzip();
    let center_gap =
        (center.overlap1 - density_center.overlap1).abs().max((center.overlap2 - density_center.overlap2).abs());
    let agreement = CheckResult::new(
        "density_route_agreement",
        std::iter::once(center_gap).chain(gaps.iter().copied()),
        RESULT_TOL,
    );

    let (counters, bad) = tally(&records, config.epsilon);
    let extrema = Extrema::over(records.iter().map(|r| (r.overlap1.min(r.overlap2), r.overlap1.max(r.overlap2))));
    let report = Report::finish(
        "qmp-pure",
        &ExperimentConfig { delta: Some(delta), ..config.clone() },
        started,
        counters,
        extrema,
        vec![center_check, anchors, premise_check, agreement],
        bad,
    );
    Ok(SweepRun { report, records })
}

fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    let cols: Vec<Vec<C64>> =
        (0..n).map(|_| random_pure_with(n, rng).map(|v| v.amplitudes().to_vec())).collect::<Result<_>>()?;
    let m = ComplexMatrix::from_columns(&cols);
    let norm = hs_norm(&m)?;
    Ok(m.scale_real(1.0 / norm))
}

pub fn verify_automorphism(config: &ExperimentConfig) -> Result<Report> {
    verify_automorphism_with(config, Execution::default())
}

/// The map `u(a) = U a U†` is a unitary algebra automorphism: checks
/// `u(ab) = u(a)u(b)`, `⟨u(a), u(b)⟩_HS = ⟨a, b⟩_HS` and `√u(ρ) = u(√ρ)` on
/// random instances of dimension 2..=12.
pub fn verify_automorphism_with(config: &ExperimentConfig, exec: Execution) -> Result<Report> {
    let started = Instant::now();
    config.validate()?;
    let devs: Vec<[f64; 3]> = map_indexed(config.samples, exec, |k| {
        let mut rng = seeded_rng(config.seed ^ k as u64, STREAM_AUTOMORPHISM);
        let d = rng.random_range(2..=12);
        let rank = rng.random_range(1..=d);
        let rho = random_mixed_with(d, rank, &mut rng)?;
        let u = random_unitary_with(d, &mut rng)?;
        let a = ginibre(d, &mut rng)?;
        let b = ginibre(d, &mut rng)?;
        let ud = u.dagger();
        let conj = |m: &ComplexMatrix| &(&u * m) * &ud;
        let mult = hs_distance(&conj(&(&a * &b)), &(&conj(&a) * &conj(&b)))?;
        let inner = (hs_inner(&conj(&a), &conj(&b))? - hs_inner(&a, &b)?).norm();
        let evolved = make_density(&conj(rho.matrix()), STATE_TOL)?;
        let root = hs_distance(&evolved.sqrt(), &conj(&rho.sqrt()))?;
        Ok([mult, inner, root])
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let bad: Vec<usize> =
        devs.iter().enumerate().filter(|(_, d)| d.iter().any(|&x| x > RESULT_TOL)).map(|(k, _)| k).collect();
    let checks = vec![
        CheckResult::new("multiplicative", devs.iter().map(|d| d[0]), RESULT_TOL),
        CheckResult::new("hs_inner_invariant", devs.iter().map(|d| d[1]), RESULT_TOL),
        CheckResult::new("sqrt_commutes_with_u", devs.iter().map(|d| d[2]), RESULT_TOL),
    ];
    let counters = Counters { violations: bad.len(), ..Counters::default() };
    Ok(Report::finish("automorphism", config, started, counters, Extrema::default(), checks, bad))
}

/// `Σ_j ρ_jk w_j w_k†` for the columns `w_j` of `basis` listed in `cols`.
fn embed(basis: &ComplexMatrix, cols: &[usize], small: &ComplexMatrix) -> ComplexMatrix {
    let n = basis.rows();
    let w: Vec<Vec<C64>> = cols.iter().map(|&c| basis.column(c)).collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for (j, wj) in w.iter().enumerate() {
        for (k, wk) in w.iter().enumerate() {
            out = &out + &ComplexMatrix::outer(wj, wk).scale(small[(j, k)]);
        }
    }
    out
}

struct RemarkSample {
    sharp: f64,
    unsharp: f64,
    lemma: f64,
    cross: f64,
}

fn remark_sample(seed: u64) -> Result<RemarkSample> {
    let mut rng = seeded_rng(seed, STREAM_REMARKS);

    // sharp: complementary projections from a random orthonormal basis
    let n = rng.random_range(4..=8);
    let k1 = rng.random_range(1..n);
    let w = random_unitary_with(n, &mut rng)?;
    let first: Vec<usize> = (0..k1).collect();
    let rest: Vec<usize> = (k1..n).collect();
    let p1 = embed(&w, &first, &ComplexMatrix::identity(k1));
    let p2 = embed(&w, &rest, &ComplexMatrix::identity(n - k1));
    let r1 = rng.random_range(1..=k1);
    let r2 = rng.random_range(1..=n - k1);
    let rho1 = make_density(&embed(&w, &first, random_mixed_with(k1, r1, &mut rng)?.matrix()), STATE_TOL)?;
    let rho2 = make_density(&embed(&w, &rest, random_mixed_with(n - k1, r2, &mut rng)?.matrix()), STATE_TOL)?;
    let sharp = sharp_projection_check(&p1, &p2, &rho1, &rho2)?;

    // unsharp: E₁ = W diag(1…1, μ…, 0…0) W†
    let n = rng.random_range(4..=8);
    let k1 = rng.random_range(1..n);
    let k2 = rng.random_range(1..=n - k1);
    let w = random_unitary_with(n, &mut rng)?;
    let spectrum: Vec<f64> = (0..n)
        .map(|j| {
            if j < k1 {
                1.0
            } else if j >= n - k2 {
                0.0
            } else {
                0.05 + 0.9 * rng.random::<f64>()
            }
        })
        .collect();
    let all: Vec<usize> = (0..n).collect();
    let e1 = embed(&w, &all, &ComplexMatrix::from_diag(&spectrum));
    let first: Vec<usize> = (0..k1).collect();
    let last: Vec<usize> = (n - k2..n).collect();
    let r1 = rng.random_range(1..=k1);
    let r2 = rng.random_range(1..=k2);
    let rho1 = make_density(&embed(&w, &first, random_mixed_with(k1, r1, &mut rng)?.matrix()), STATE_TOL)?;
    let rho2 = make_density(&embed(&w, &last, random_mixed_with(k2, r2, &mut rng)?.matrix()), STATE_TOL)?;
    let unsharp = effect_pair_check(&e1, &rho1, &rho2)?;

    Ok(RemarkSample { sharp, unsharp: unsharp.overlap, lemma: unsharp.lemma_deviation, cross: unsharp.cross_inner })
}

pub fn verify_orthogonality_remarks(config: &ExperimentConfig) -> Result<Report> {
    verify_orthogonality_remarks_with(config, Execution::default())
}

/// Sharp projections and unsharp effect pairs both force
/// `⟨√ρ₁, √ρ₂⟩_HS = 0`. Each sample builds one instance of each kind.
pub fn verify_orthogonality_remarks_with(config: &ExperimentConfig, exec: Execution) -> Result<Report> {
    let started = Instant::now();
    config.validate()?;
    let samples: Vec<RemarkSample> = map_indexed(config.samples, exec, |k| remark_sample(config.seed ^ k as u64))
        .into_iter()
        .collect::<Result<_>>()?;
    let bad: Vec<usize> = samples
        .iter()
        .enumerate()
        .filter(|(_, s)| [s.sharp, s.unsharp, s.lemma, s.cross].iter().any(|&x| x > RESULT_TOL))
        .map(|(k, _)| k)
        .collect();
    let checks = vec![
        CheckResult::new("sharp_sqrt_overlap", samples.iter().map(|s| s.sharp), RESULT_TOL),
        CheckResult::new("unsharp_sqrt_overlap", samples.iter().map(|s| s.unsharp), RESULT_TOL),
        CheckResult::new("effect_eigenvector_lemma", samples.iter().map(|s| s.lemma), RESULT_TOL),
        CheckResult::new("support_eigenvectors_orthogonal", samples.iter().map(|s| s.cross), RESULT_TOL),
    ];
    let extrema = Extrema::over(samples.iter().map(|s| (s.sharp.min(s.unsharp), s.sharp.max(s.unsharp))));
    let counters = Counters { violations: bad.len(), ..Counters::default() };
    Ok(Report::finish("orthogonality-remarks", config, started, counters, extrema, checks, bad))
}

/// Everything `verify` runs.
#[derive(Clone, Debug)]
pub struct VerifyOutcome {
    pub verdict: Verdict,
    pub reports: Vec<Report>,
    /// Per-sample records of the impure-state sweep.
    pub impure_records: Vec<SweepRecord>,
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    verdict: Verdict,
    reports: &'a [Report],
}

impl VerifyOutcome {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&VerifyJson { verdict: self.verdict, reports: &self.reports })
            .expect("reports hold finite numbers")
    }
}

/// Automorphism and orthogonality suites, the pure-state suite (rank-1 ready
/// state) and the impure-state suite at the configured rank.
pub fn verify_all(config: &ExperimentConfig, exec: Execution) -> Result<VerifyOutcome> {
    config.validate()?;
    let pure_config = ExperimentConfig { ready_rank: 1, ..config.clone() };
    let impure = run_impure_qmp_with(config, exec)?;
    let reports = vec![
        verify_automorphism_with(config, exec)?,
        verify_orthogonality_remarks_with(config, exec)?,
        run_pure_qmp_with(&pure_config, exec)?.report,
        impure.report,
    ];
    let verdict = Verdict::from_bool(reports.iter().all(|r| r.verdict.passed()));
    Ok(VerifyOutcome { verdict, reports, impure_records: impure.records })
}

/// The impure-state suite at every grid point (and the pure suite where the
/// ready rank is 1), sharing `base`'s epsilon, delta, samples and seed.
pub fn run_grid(base: &ExperimentConfig, exec: Execution) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    for (d_s, d_e, ready_rank) in dimension_grid() {
        let config = ExperimentConfig { d_s, d_e, ready_rank, ..base.clone() };
        out.push(run_impure_qmp_with(&config, exec)?.report);
        if ready_rank == 1 {
            out.push(run_pure_qmp_with(&config, exec)?.report);
        }
    }
    Ok(out)
}

/// One CSV row per grid report.
pub fn grid_csv(reports: &[Report]) -> String {
    let mut out = String::from(
        "name,d_s,d_e,ready_rank,total,indefinite,config1,config2,violations,min_overlap,max_overlap,verdict\n",
    );
    let opt = |x: Option<f64>| x.map(num17::format).unwrap_or_default();
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.name,
            r.config.d_s,
            r.config.d_e,
            r.config.ready_rank,
            r.counters.total,
            r.counters.indefinite,
            r.counters.config1,
            r.counters.config2,
            r.counters.violations,
            opt(r.extrema.min_overlap),
            opt(r.extrema.max_overlap),
            if r.verdict.passed() { "pass" } else { "fail" }
        ));
    }
    out
}
