//! End-to-end: survival factors taken from the numerical oracle feed the
//! same states and measures as the closed forms.

use qreservoir::entanglement::{concurrence_epr, concurrence_wootters, lbc_generic, lbc_w};
use qreservoir::maps::{epr_state, three_qubit_evolve, two_qubit_evolve, w_state, Label, SubsystemSpec};
use qreservoir::model::{AmplitudeVector, ReservoirSpec};
use qreservoir::ode::SolverConfig;
use qreservoir::oracle::integrate_volterra;
use qreservoir::smallmat::ComplexMatrix;
use qreservoir::Complex64;

fn oracle_g(spec: &ReservoirSpec, t: f64) -> Complex64 {
    let mut c = vec![Complex64::new(0.0, 0.0); spec.n_qubits()];
    c[0] = Complex64::new(1.0, 0.0);
    let init = AmplitudeVector::new(Complex64::new(0.0, 0.0), c);
    let out = integrate_volterra(spec, &init, &[0.0, t], &SolverConfig::default()).unwrap();
    out[1].c[0]
}

/// Σ_k x_k|k⟩ single-excitation block plus the ground population.
fn single_excitation_state(positions: &[usize], x: &[Complex64], dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for (i, &p) in positions.iter().enumerate() {
        for (j, &q) in positions.iter().enumerate() {
            m[(p, q)] = x[i] * x[j].conj();
        }
    }
    let excited: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    m[(dim - 1, dim - 1)] = Complex64::new(1.0 - excited, 0.0);
    m
}

#[test]
fn oracle_survival_factors_reproduce_evolved_states() {
    let amps = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.48), Complex64::new(0.64, 0.0)];
    let specs = [
        ReservoirSpec::new(1.0, 0.5, 2.0, 3).unwrap(),
        ReservoirSpec::new(1.0, 15.0, 0.0, 1).unwrap(),
        ReservoirSpec::new(1.0, 0.8, -1.0, 6).unwrap(),
    ];
    let subs: Vec<SubsystemSpec> = [Label::A, Label::B, Label::C]
        .iter()
        .zip(specs.iter().zip(amps))
        .map(|(&l, (s, a))| SubsystemSpec::new(l, s.clone(), a).unwrap())
        .collect();

    for t in [0.5, 3.0, 11.0] {
        let x: Vec<Complex64> = specs.iter().zip(amps).map(|(s, a)| oracle_g(s, t) * a).collect();

        let three = three_qubit_evolve(&w_state(&subs[0], &subs[1], &subs[2]).unwrap(), t, &subs[0], &subs[1], &subs[2]).unwrap();
        let expected = single_excitation_state(&[3, 5, 6], &x, 8);
        assert!(three.matrix().max_abs_diff(&expected) < 1e-8, "t={t}");
        assert!((lbc_generic(&three).unwrap() - lbc_w(t, &subs[0], &subs[1], &subs[2]).unwrap()).abs() < 1e-8);

        let norm = (amps[0].norm_sqr() + amps[1].norm_sqr()).sqrt();
        let a = SubsystemSpec::new(Label::A, specs[0].clone(), amps[0] / norm).unwrap();
        let b = SubsystemSpec::new(Label::B, specs[1].clone(), amps[1] / norm).unwrap();
        let two = two_qubit_evolve(&epr_state(&a, &b).unwrap(), t, &a, &b).unwrap();
        let expected = single_excitation_state(&[1, 2], &[x[0] / norm, x[1] / norm], 4);
        assert!(two.matrix().max_abs_diff(&expected) < 1e-8, "t={t}");
        let oracle_concurrence = 2.0 * (x[0] * x[1]).norm() / (norm * norm);
        assert!((concurrence_wootters(&two).unwrap() - oracle_concurrence).abs() < 1e-8);
        assert!((concurrence_epr(t, &a, &b).unwrap() - oracle_concurrence).abs() < 1e-8);
    }
}
