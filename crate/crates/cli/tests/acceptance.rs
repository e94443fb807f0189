//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use qmplab_core::experiments::{
    dimension_grid, experiment_model, run_impure_qmp, run_pure_qmp, verify_automorphism, verify_orthogonality_remarks,
    ExperimentConfig, Report,
};
use qmplab_core::linalg::{
    complete_unitary, hs_distance, kron, partial_trace, sqrt_psd, trace, unitarity_defect, ComplexMatrix, Subsystem,
    DEFAULT_CLIP_TOL,
};
use qmplab_core::measurement::sqrt_overlap;
use qmplab_core::states::{pure_projector, random_mixed, random_pure, random_unitary};

struct Outcome {
    ok: bool,
    detail: String,
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed <= Duration::from_secs(limit_s)
}

fn check(report: &Report, name: &str) -> f64 {
    let c = report.checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no check {name}"));
    assert!(c.instances > 0);
    if c.passed {
        c.max_deviation
    } else {
        f64::INFINITY
    }
}

fn grid_config(d_s: usize, d_e: usize, rank: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig { d_s, d_e, ready_rank: rank, epsilon: 0.1, samples: 1000, seed, delta: None }
}

fn center_value() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut models = 0;
    for (d_s, d_e, rank) in dimension_grid() {
        for seed in 0..20 {
            let model = experiment_model(&grid_config(d_s, d_e, rank, seed)).unwrap();
            let center = model.postmeasurement(&pure_projector(&model.phi()).unwrap()).unwrap();
            for i in 1..=2 {
                let anchor = model.postmeasurement(&pure_projector(model.psi(i)).unwrap()).unwrap();
                worst = worst.max((sqrt_overlap(&center, &anchor).unwrap() - 0.5).abs());
            }
            models += 1;
        }
    }
    let t = start.elapsed();
    Outcome {
        ok: worst <= 1e-9 && within(t, 10),
        detail: format!("{models} models, max |overlap - 1/2| = {worst:.3e}, {t:.2?}"),
    }
}

fn automorphism() -> Outcome {
    let start = Instant::now();
    let r = verify_automorphism(&ExperimentConfig { samples: 200, ..Default::default() }).unwrap();
    let t = start.elapsed();
    let root = check(&r, "sqrt_commutes_with_u");
    let inner = check(&r, "hs_inner_invariant");
    Outcome {
        ok: root <= 1e-9 && inner <= 1e-9 && within(t, 10),
        detail: format!("200 pairs, sqrt {root:.3e}, inner {inner:.3e}, {t:.2?}"),
    }
}

fn orthogonality() -> Outcome {
    let start = Instant::now();
    let r = verify_orthogonality_remarks(&ExperimentConfig { samples: 100, ..Default::default() }).unwrap();
    let t = start.elapsed();
    let worst = ["sharp_sqrt_overlap", "unsharp_sqrt_overlap", "effect_eigenvector_lemma"]
        .iter()
        .map(|n| check(&r, n))
        .fold(0.0, f64::max);
    Outcome {
        ok: worst <= 1e-9 && r.verdict.passed() && within(t, 5),
        detail: format!("100 sharp + 100 unsharp, max deviation {worst:.3e}, {t:.2?}"),
    }
}

fn impure_sweep() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut min_overlap = f64::INFINITY;
    let grid = dimension_grid();
    for &(d_s, d_e, rank) in &grid {
        let r = run_impure_qmp(&grid_config(d_s, d_e, rank, 42)).unwrap().report;
        min_overlap = min_overlap.min(r.extrema.min_overlap.unwrap());
        let all_indefinite = r.counters.indefinite == r.counters.total && r.counters.total == 1000;
        if !(r.verdict.passed() && all_indefinite) {
            failures.push(format!("({d_s},{d_e},{rank})"));
        }
    }
    let t = start.elapsed();
    Outcome {
        ok: failures.is_empty() && min_overlap > 0.1 && within(t, 30),
        detail: format!(
            "{} configurations x 1000, min overlap {min_overlap:.4}, failing {failures:?}, {t:.2?}",
            grid.len()
        ),
    }
}

fn pure_sweep() -> Outcome {
    let mut failures = Vec::new();
    let mut agreement: f64 = 0.0;
    let mut runs = 0;
    for (d_s, d_e, rank) in dimension_grid() {
        if rank != 1 {
            continue;
        }
        let r = run_pure_qmp(&grid_config(d_s, d_e, 1, 42)).unwrap().report;
        agreement = agreement.max(check(&r, "density_route_agreement"));
        if !(r.verdict.passed() && r.counters.indefinite == r.counters.total) {
            failures.push(format!("({d_s},{d_e})"));
        }
        runs += 1;
    }
    Outcome {
        ok: failures.is_empty() && agreement <= 1e-9,
        detail: format!("{runs} configurations x 1000, vector vs density route {agreement:.3e}, failing {failures:?}"),
    }
}

fn specialization() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..1000u64 {
        let d = 2 + (k as usize % 7);
        let x = random_pure(d, 2 * k).unwrap();
        let y = random_pure(d, 2 * k + 1).unwrap();
        let s = sqrt_overlap(&pure_projector(&x).unwrap(), &pure_projector(&y).unwrap()).unwrap();
        worst = worst.max((s - x.inner(&y).norm_sqr()).abs());
    }
    Outcome { ok: worst <= 1e-12, detail: format!("1000 pairs, max deviation {worst:.3e}") }
}

fn hermitian_observable(d: usize, seed: u64) -> ComplexMatrix {
    let u = random_unitary(d, seed).unwrap();
    let diag: Vec<f64> = (0..d).map(|k| (k as f64 * 0.37 + seed as f64 * 0.11).sin()).collect();
    &(&u * &ComplexMatrix::from_diag(&diag)) * &u.dagger()
}

fn kernels() -> Outcome {
    let mut sqrt_err: f64 = 0.0;
    for (k, d) in [2usize, 3, 8, 16, 32, 64].into_iter().enumerate() {
        let m = random_mixed(d, d, 900 + k as u64).unwrap();
        let s = sqrt_psd(m.matrix(), DEFAULT_CLIP_TOL).unwrap();
        sqrt_err = sqrt_err.max(hs_distance(&(&s * &s), m.matrix()).unwrap());
    }

    // Tr[ρ (A ⊗ 1)] = Tr[Tr₂(ρ) A] and Tr[ρ (1 ⊗ B)] = Tr[Tr₁(ρ) B]
    let mut pt_err: f64 = 0.0;
    for k in 0..50u64 {
        let (d1, d2) = (2 + (k as usize % 3), 2 + (k as usize / 3 % 4));
        let rho = random_mixed(d1 * d2, 1 + (k as usize % (d1 * d2)), 5000 + k).unwrap();
        let a = hermitian_observable(d1, 7000 + k);
        let b = hermitian_observable(d2, 8000 + k);
        let lhs_a = trace(&(rho.matrix() * &kron(&a, &ComplexMatrix::identity(d2)))).unwrap();
        let rhs_a = trace(&(&partial_trace(rho.matrix(), d1, d2, Subsystem::First).unwrap() * &a)).unwrap();
        let lhs_b = trace(&(rho.matrix() * &kron(&ComplexMatrix::identity(d1), &b))).unwrap();
        let rhs_b = trace(&(&partial_trace(rho.matrix(), d1, d2, Subsystem::Second).unwrap() * &b)).unwrap();
        pt_err = pt_err.max((lhs_a - rhs_a).norm()).max((lhs_b - rhs_b).norm());
    }

    let mut unit_err: f64 = 0.0;
    for (k, d) in [2usize, 5, 12, 33, 64].into_iter().enumerate() {
        let u = random_unitary(d, 300 + k as u64).unwrap();
        let given: Vec<Vec<C64>> = (0..d / 2).map(|j| u.column(j)).collect();
        let w = complete_unitary(d, &given, 1e-10).unwrap();
        unit_err = unit_err.max(unitarity_defect(&w).unwrap());
    }
    Outcome {
        ok: sqrt_err <= 1e-10 && pt_err <= 1e-10 && unit_err <= 1e-10,
        detail: format!("sqrt {sqrt_err:.3e}, partial trace {pt_err:.3e}, completion {unit_err:.3e}"),
    }
}

fn run_verify(format: &str) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_qmplab"))
        .args(["verify", "--seed", "42", "--format", format])
        .output()
        .expect("qmplab runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn without_duration(s: &str) -> String {
    s.lines().filter(|l| !l.trim_start().starts_with("\"duration_ms\"")).collect::<Vec<_>>().join("\n")
}

fn determinism() -> Outcome {
    let json = [run_verify("json"), run_verify("json")];
    let csv = [run_verify("csv"), run_verify("csv")];
    let json_same = without_duration(&json[0]) == without_duration(&json[1]);
    let csv_same = csv[0] == csv[1];
    Outcome {
        ok: json_same && csv_same && csv[0].lines().count() == 1001,
        detail: format!("json identical: {json_same}, csv identical: {csv_same}"),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("center value 1/2", center_value),
        ("automorphism suite", automorphism),
        ("orthogonality remarks", orthogonality),
        ("impure neighborhood sweep", impure_sweep),
        ("pure neighborhood sweep", pure_sweep),
        ("pure specialization", specialization),
        ("kernel accuracy", kernels),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.ok {
            failed += 1;
        }
        println!("criterion {} {:<28} {}  {}", k + 1, name, if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
