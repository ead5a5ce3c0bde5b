//! Randomized verification of the closed forms against the oracles and of
//! the structural properties of maps and measures.

use std::fmt::Write as _;

use qreservoir::entanglement::{concurrence_epr, concurrence_wootters, lbc_generic, lbc_w};
use qreservoir::maps::{
    coherence_asymptote, coherence_l1, epr_state, evolve, single_qubit_state, three_qubit_closed_form, three_qubit_evolve,
    two_qubit_closed_form, two_qubit_evolve, w_state, DensityMatrix, DynamicalMap, Label, SubsystemSpec,
};
use qreservoir::model::{amplitude_general, decay_rate, survival_factor, AmplitudeVector, QubitCount, ReservoirSpec};
use qreservoir::ode::SolverConfig;
use qreservoir::oracle::{integrate_modes, integrate_volterra};
use qreservoir::smallmat::ComplexMatrix;
use qreservoir::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};

/// Deliberate defects used to check that the harness catches them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Compare the oracle against -G(t) instead of G(t).
    FlipSurvivalSign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub budget: usize,
    pub fault: Option<Fault>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub samples: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub error: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.max_deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub budget: usize,
    pub results: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(PropertyResult::passed)
    }

    pub fn find(&self, name: &str) -> Option<&PropertyResult> {
        self.results.iter().find(|r| r.name == name)
    }

    /// One line per property and a final `SUMMARY` line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            let _ = write!(out, "{status} {:<36} samples={:<5} max_dev={:.3e} tol={:.0e}", r.name, r.samples, r.max_deviation, r.tolerance);
            if let Some(e) = &r.error {
                let _ = write!(out, " error=\"{e}\"");
            }
            out.push('\n');
        }
        let failed = self.results.iter().filter(|r| !r.passed()).count();
        let _ = writeln!(
            out,
            "SUMMARY status={} passed={} failed={} seed={} budget={}",
            if failed == 0 { "PASS" } else { "FAIL" },
            self.results.len() - failed,
            failed,
            self.seed,
            self.budget
        );
        out
    }
}

type Check = fn(&mut ChaCha8Rng, Option<Fault>) -> qreservoir::Result<f64>;

struct Property {
    name: &'static str,
    tolerance: f64,
    check: Check,
    /// Caps the sample count for expensive properties.
    max_samples: usize,
}

const PROPERTIES: &[Property] = &[
    Property { name: "survival_factor_vs_volterra", tolerance: 1e-6, check: survival_factor_vs_volterra, max_samples: usize::MAX },
    Property { name: "amplitude_general_vs_volterra", tolerance: 1e-6, check: amplitude_general_vs_volterra, max_samples: usize::MAX },
    Property { name: "volterra_self_convergence", tolerance: 1e-8, check: volterra_self_convergence, max_samples: usize::MAX },
    Property { name: "survival_factor_bounded", tolerance: 1e-12, check: survival_factor_bounded, max_samples: usize::MAX },
    Property { name: "decay_rate_log_derivative", tolerance: 1e-4, check: decay_rate_log_derivative, max_samples: usize::MAX },
    Property { name: "coherence_asymptote", tolerance: 1e-8, check: coherence_reaches_asymptote, max_samples: usize::MAX },
    Property { name: "density_physicality", tolerance: 1e-12, check: density_physicality, max_samples: usize::MAX },
    Property { name: "map_linearity", tolerance: 1e-14, check: map_linearity, max_samples: usize::MAX },
    Property { name: "product_map_vs_closed_form", tolerance: 1e-12, check: product_map_vs_closed_form, max_samples: usize::MAX },
    Property { name: "concurrence_generic_vs_analytic", tolerance: 1e-10, check: concurrence_generic_vs_analytic, max_samples: usize::MAX },
    Property { name: "lbc_generic_vs_analytic", tolerance: 1e-8, check: lbc_generic_vs_analytic, max_samples: usize::MAX },
    Property { name: "concurrence_local_unitary_invariance", tolerance: 1e-10, check: concurrence_local_unitary, max_samples: usize::MAX },
    Property { name: "measures_on_evolved_vs_closed_form", tolerance: 1e-12, check: measures_evolved_vs_closed, max_samples: usize::MAX },
    Property { name: "mode_oracle_norm_conservation", tolerance: 1e-7, check: mode_oracle_norm, max_samples: 2 },
];

/// Runs every property `budget` times (fewer for the mode oracle) with
/// randomness drawn from `seed`.
pub fn run_verify(options: &VerifyOptions) -> Result<VerifyReport> {
    if options.budget == 0 {
        return Err(CliError::config("budget", "must be at least 1"));
    }
    let mut results = Vec::with_capacity(PROPERTIES.len());
    for (k, property) in PROPERTIES.iter().enumerate() {
        // independent stream per property so adding one does not reshuffle the others
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        rng.set_stream(k as u64);
        let samples = options.budget.min(property.max_samples);
        let mut max_deviation: f64 = 0.0;
        let mut error = None;
        for _ in 0..samples {
            match (property.check)(&mut rng, options.fault) {
                Ok(dev) if dev.is_nan() => {
                    error = Some("deviation is NaN".to_string());
                    break;
                }
                Ok(dev) => max_deviation = max_deviation.max(dev),
                Err(e) => {
                    error = Some(e.to_string());
                    break;
                }
            }
        }
        log::info!("{}: {samples} samples, max deviation {max_deviation:e}", property.name);
        results.push(PropertyResult { name: property.name, samples, max_deviation, tolerance: property.tolerance, error });
    }
    Ok(VerifyReport { seed: options.seed, budget: options.budget, results })
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn time_grid(t_max: f64, samples: usize) -> Vec<f64> {
    (0..samples).map(|k| t_max * k as f64 / (samples - 1) as f64).collect()
}

fn random_unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    loop {
        let raw: Vec<Complex64> = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return raw.into_iter().map(|z| z / norm).collect();
        }
    }
}

fn random_figure_reservoir(rng: &mut ChaCha8Rng) -> qreservoir::Result<ReservoirSpec> {
    let lambda = [0.5, 15.0][rng.gen_range(0..2)];
    let delta = [0.0, 2.0][rng.gen_range(0..2)];
    let n = [1, 2, 3, 6][rng.gen_range(0..4)];
    ReservoirSpec::new(1.0, lambda, delta, n)
}

fn random_subsystems(rng: &mut ChaCha8Rng, count: usize) -> qreservoir::Result<Vec<SubsystemSpec>> {
    let amps = random_unit_vector(rng, count);
    [Label::A, Label::B, Label::C][..count]
        .iter()
        .zip(amps)
        .map(|(&label, amp)| SubsystemSpec::new(label, random_figure_reservoir(rng)?, amp))
        .collect()
}

fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> qreservoir::Result<DensityMatrix> {
    let a = ComplexMatrix::from_fn(dim, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let p = &a * &a.adjoint();
    let scaled = p.scale(p.trace().inv());
    DensityMatrix::new((&scaled + &scaled.adjoint()).scale(c(0.5, 0.0)))
}

fn random_unitary_2(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
    let (phi, chi, alpha) = (rng.gen_range(0.0..6.3), rng.gen_range(0.0..6.3), rng.gen_range(0.0..6.3));
    let global = Complex64::from_polar(1.0, alpha);
    ComplexMatrix::from_fn(2, |r, col| match (r, col) {
        (0, 0) => global * Complex64::from_polar(theta.cos(), phi),
        (0, 1) => global * Complex64::from_polar(theta.sin(), chi),
        (1, 0) => -global * Complex64::from_polar(theta.sin(), -chi),
        _ => global * Complex64::from_polar(theta.cos(), -phi),
    })
}

fn survival_factor_vs_volterra(rng: &mut ChaCha8Rng, fault: Option<Fault>) -> qreservoir::Result<f64> {
    let n = rng.gen_range(1..=8);
    let spec = ReservoirSpec::new(1.0, rng.gen_range(0.1..30.0), rng.gen_range(-3.0..3.0), n)?;
    let mut amps = vec![c(0.0, 0.0); n];
    amps[0] = c(1.0, 0.0);
    let oracle = integrate_volterra(&spec, &AmplitudeVector::new(c(0.0, 0.0), amps), &time_grid(20.0, 201), &SolverConfig::default())?;
    let mut worst: f64 = 0.0;
    for a in oracle {
        let mut g = survival_factor(a.t, &spec)?;
        if fault == Some(Fault::FlipSurvivalSign) {
            g = -g;
        }
        worst = worst.max((a.c[0] - g).norm());
    }
    Ok(worst)
}

fn amplitude_general_vs_volterra(rng: &mut ChaCha8Rng, _: Option<Fault>) -> qreservoir::Result<f64> {
    let n = rng.gen_range(1..=8);
    let betas = (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect();
    let spec = ReservoirSpec::with_betas(1.0, rng.gen_range(0.1..30.0), rng.gen_range(-3.0..3.0), betas)?;
    let init = AmplitudeVector::new(c(0.0, 0.0), random_unit_vector(rng, n));
    let oracle = integrate_volterra(&spec, &init, &time_grid(20.0, 201), &SolverConfig::default())?;
    oracle.iter().try_fold(0.0f64, |worst, a| Ok(worst.max(amplitude_general(a.t, &init, &spec)?.max_abs_diff(a))))
}

fn volterra_self_convergence(rng: &mut ChaCha8Rng, _: Option<Fault>) -> qreservoir::Result<f64> {
    let n = rng.gen_range(1..=8);
    let spec = ReservoirSpec::new(1.0, rng.gen_range(0.1..30.0), rng.gen_range(-3.0..3.0), n)?;
    let init = AmplitudeVector::new(c(0.0, 0.0), random_unit_vector(rng, n));
    let grid = time_grid(20.0, 41);
    let base = SolverConfig::default();
    let coarse = integrate_volterra(&spec, &init, &grid, &base)?;
    let fine = integrate_volterra(&spec, &init, &grid, &base.scaled(0.5))?;
    Ok(coarse.iter().zip(&fine).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max))
}

fn survival_factor_bounded(rng: &mut ChaCha8Rng, _: Option<Fault>) -> qreservoir::Result<f64> {
    let spec = ReservoirSpec::new(1.0, rng.gen_range(0.05..50.0), rng.gen_range(-5.0..5.0), rng.gen_range(1..=64))?;
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        worst = worst.max(survival_factor(rng.gen_range(0.0..200.0), &spec)?.norm() - 1.0);
    }
    Ok(worst)
}

fn decay_rate_log_derivative(rng: &mut ChaCha8Rng, _: Option<Fault>) -> qreservoir::Result<f64> {
    let spec = random_figure_reservoir(rng)?;
    let log_abs = |t: f64| survival_factor(t, &spec).map(|g| g.norm().ln());
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let t = rng.gen_range(h..30.0);
        if survival_factor(t, &spec)?.norm() <= 1e-3 {
            continue;
        }
        let fd = -(log_abs(t + h)? - log_abs(t - h)?) / h;
        worst = worst.max((decay_rate(t, &spec)? - fd).abs());
    }
    Ok(worst)
}

fn coherence_reaches_asymptote(rng: &mut ChaCha8Rng, _: Option<Fault>) -> qreservoir::Result<f64> {
    // without detuning every mode but the dark one has decayed by e^-25 at t = 100
    let n = [1u32, 2, 3, 6][rng.gen_range(0..4)];
    let spec = ReservoirSpec::new(1.0, [0.5, 15.0][rng.gen_range(0..2)], 0.0, n as usize)?;
    let amps = random_unit_vector(rng, 2);
    let value = coherence_l1(&single_qubit_state(100.0, amps[0], amps[1], &spec)?);
    Ok((value - coherence_asymptote(QubitCount::Finite(n), amps[0], amps[1])?).abs())
}

fn physicality_defect(rho: &DensityMatrix) -> qreservoir::Result<f64> {
    rho.validate()?;
    Ok((rho.matrix().trace() - 1.0).norm().max(rho.matrix().hermiticity_defect()))
}

fn density_physicality(rng: &mut ChaCha8Rng, _: Option<Fault>) -> qreservoir::Result<f64> {
    let t = rng.gen_range(0.0..30.0);
    let subs = random_subsystems(rng, 3)?;
    let amps = random_unit_vector(rng, 2);
    let single = single_qubit_state(t, amps[0], amps[1], &subs[0].reservoir)?;
    let two = two_qubit_evolve(&random_density(rng, 4)?, t, &subs[0], &subs[1])?;
    let three = three_qubit_evolve(&random_density(rng, 8)?, t, &subs[0], &subs[1], &subs[2])?;
    let w = three_qubit_closed_form(t, &subs[0], &subs[1], &subs[2])?;
    [single, two, three, w].iter().try_fold(0.0f64, |worst, rho| Ok(worst.max(physicality_defect(rho)?)))
}

fn map_linearity(rng: &mut ChaCha8Rng, _: Option<Fault>) -> qreservoir::Result<f64> {
    let dim = [2usize, 4, 8][rng.gen_range(0..3)];
    let n = dim.trailing_zeros() as usize;
    let maps: Vec<DynamicalMap> =
        (0..n).map(|_| DynamicalMap { g: Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..6.3)) }).collect();
    let (r1, r2) = (random_density(rng, dim)?, random_density(rng, dim)?);
    let w: f64 = rng.gen_range(0.0..1.0);
    let mixed = DensityMatrix::new(&r1.matrix().scale(c(w, 0.0)) + &r2.matrix().scale(c(1.0 - w, 0.0)))?;
    let lhs = evolve(&mixed, &maps)?;
    let rhs = &evolve(&r1, &maps)?.matrix().scale(c(w, 0.0)) + &evolve(&r2, &maps)?.matrix().scale(c(1.0 - w, 0.0));
    Ok(lhs.matrix().max_abs_diff(&rhs))
}

fn product_map_vs_closed_form(rng: &mut ChaCha8Rng, _: Option<Fault>) -> qreservoir::Result<f64> {
    let t = rng.gen_range(0.0..40.0);
    let s2 = random_subsystems(rng, 2)?;
    let two = two_qubit_evolve(&epr_state(&s2[0], &s2[1])?, t, &s2[0], &s2[1])?;
    let d2 = two.matrix().max_abs_diff(two_qubit_closed_form(t, &s2[0], &s2[1])?.matrix());
    let s3 = random_subsystems(rng, 3)?;
    let three = three_qubit_evolve(&w_state(&s3[0], &s3[1], &s3[2])?, t, &s3[0], &s3[1], &s3[2])?;
    let d3 = three.matrix().max_abs_diff(three_qubit_closed_form(t, &s3[0], &s3[1], &s3[2])?.matrix());
    Ok(d2.max(d3))
}

fn concurrence_generic_vs_analytic(rng: &mut ChaCha8Rng, _: Option<Fault>) -> qreservoir::Result<f64> {
    let t = rng.gen_range(0.0..30.0);
    let s = random_subsystems(rng, 2)?;
    let rho = two_qubit_evolve(&epr_state(&s[0], &s[1])?, t, &s[0], &s[1])?;
    Ok((concurrence_wootters(&rho)? - concurrence_epr(t, &s[0], &s[1])?).abs())
}

fn lbc_generic_vs_analytic(rng: &mut ChaCha8Rng, _: Option<Fault>) -> qreservoir::Result<f64> {
    let t = rng.gen_range(0.0..30.0);
    let s = random_subsystems(rng, 3)?;
    let rho = three_qubit_evolve(&w_state(&s[0], &s[1], &s[2])?, t, &s[0], &s[1], &s[2])?;
    Ok((lbc_generic(&rho)? - lbc_w(t, &s[0], &s[1], &s[2])?).abs())
}

fn concurrence_local_unitary(rng: &mut ChaCha8Rng, _: Option<Fault>) -> qreservoir::Result<f64> {
    let rho = random_density(rng, 4)?;
    let u = random_unitary_2(rng).kron(&random_unitary_2(rng))?;
    let rotated = u.checked_mul(rho.matrix())?.checked_mul(&u.adjoint())?;
    let rotated = DensityMatrix::new((&rotated + &rotated.adjoint()).scale(c(0.5, 0.0)))?;
    Ok((concurrence_wootters(&rho)? - concurrence_wootters(&rotated)?).abs())
}

fn measures_evolved_vs_closed(rng: &mut ChaCha8Rng, _: Option<Fault>) -> qreservoir::Result<f64> {
    let t = rng.gen_range(0.0..30.0);
    let s2 = random_subsystems(rng, 2)?;
    let evolved2 = two_qubit_evolve(&epr_state(&s2[0], &s2[1])?, t, &s2[0], &s2[1])?;
    let d2 = (concurrence_wootters(&evolved2)? - concurrence_wootters(&two_qubit_closed_form(t, &s2[0], &s2[1])?)?).abs();
    let s3 = random_subsystems(rng, 3)?;
    let evolved3 = three_qubit_evolve(&w_state(&s3[0], &s3[1], &s3[2])?, t, &s3[0], &s3[1], &s3[2])?;
    let d3 = (lbc_generic(&evolved3)? - lbc_generic(&three_qubit_closed_form(t, &s3[0], &s3[1], &s3[2])?)?).abs();
    Ok(d2.max(d3))
}

fn mode_oracle_norm(rng: &mut ChaCha8Rng, _: Option<Fault>) -> qreservoir::Result<f64> {
    let lambda = rng.gen_range(0.5..2.0);
    let spec = ReservoirSpec::new(1.0, lambda, rng.gen_range(-2.0..2.0), rng.gen_range(1..=3))?;
    let init = AmplitudeVector::new(c(0.0, 0.0), random_unit_vector(rng, spec.n_qubits()));
    let solution = integrate_modes(&spec, &init, &time_grid(5.0, 11), 401, 20.0 * lambda, &SolverConfig::default())?;
    Ok(solution.states.iter().map(|s| (s.total_norm_sqr() - 1.0).abs()).fold(0.0, f64::max))
}
