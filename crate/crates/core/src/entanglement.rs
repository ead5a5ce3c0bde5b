//! Wootters concurrence for two qubits and the lower bound of concurrence
//! (LBC) for three qubits, each with its closed form along the evolution.
//!
//! Both measures need the square roots of the eigenvalues of `ρ X ρ* X` for
//! a Hermitian operator X. Writing `ρ = B B†`, those roots are the singular
//! values of `B† X B*`, which is how they are computed here: the roots come
//! out directly instead of as square roots of tiny, noisy eigenvalues.
//! [`spin_flip_roots_via_eigenvalues`] keeps the direct route as a cross-check.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::maps::{permute_qubits, Basis, DensityMatrix, SubsystemSpec};
use crate::model::QubitCount;
use crate::smallmat::{eigenvalues_general, eigh, singular_values, sort_descending, ComplexMatrix};

const NEGATIVE_CLAMP: f64 = 1e-9;

/// The six pair generators of SO(4) on two qubits and σ_y for the third.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    generators: Vec<ComplexMatrix>,
    sigma_y: ComplexMatrix,
}

impl GeneratorSet {
    /// `L_(j,k)` (j < k) has -i at (j, k), +i at (k, j) and zeros elsewhere.
    pub fn standard() -> Self {
        let mut generators = Vec::with_capacity(6);
        for j in 0..4 {
            for k in (j + 1)..4 {
                let mut l = ComplexMatrix::zeros(4);
                l[(j, k)] = Complex64::new(0.0, -1.0);
                l[(k, j)] = Complex64::new(0.0, 1.0);
                generators.push(l);
            }
        }
        Self { generators, sigma_y: ComplexMatrix::pauli_y() }
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn sigma_y(&self) -> &ComplexMatrix {
        &self.sigma_y
    }

    /// `L_r ⊗ σ_y` for every generator.
    pub fn three_qubit_operators(&self) -> Result<Vec<ComplexMatrix>> {
        self.generators.iter().map(|l| l.kron(&self.sigma_y)).collect()
    }
}

/// The three cyclic cuts (uv|w) of a three-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bipartition {
    /// (12|3)
    P12_3,
    /// (23|1)
    P23_1,
    /// (31|2)
    P31_2,
}

impl Bipartition {
    pub const ALL: [Bipartition; 3] = [Bipartition::P12_3, Bipartition::P23_1, Bipartition::P31_2];

    /// Qubit order (u, v, w), 0-based.
    pub fn qubit_order(self) -> [usize; 3] {
        match self {
            Bipartition::P12_3 => [0, 1, 2],
            Bipartition::P23_1 => [1, 2, 0],
            Bipartition::P31_2 => [2, 0, 1],
        }
    }
}

/// Factor ρ = B B† with B = V diag(√p); tiny or slightly negative
/// eigenvalues p are set to zero, clearly negative ones are rejected.
fn square_root_factor(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (values, vectors) = eigh(rho)?;
    let trace: f64 = values.iter().sum();
    let floor = 16.0 * f64::EPSILON * trace.abs().max(1.0);
    let mut roots = Vec::with_capacity(values.len());
    for p in values {
        if p < -NEGATIVE_CLAMP {
            return Err(Error::Unphysical(format!("density matrix eigenvalue {p:e}")));
        }
        roots.push(if p <= floor { 0.0 } else { p.sqrt() });
    }
    Ok(ComplexMatrix::from_fn(rho.dim(), |r, c| vectors[(r, c)] * roots[c]))
}

/// Square roots of the eigenvalues of `ρ X ρ* X`, in decreasing order.
pub fn spin_flip_roots(rho: &ComplexMatrix, op: &ComplexMatrix) -> Result<Vec<f64>> {
    if op.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: op.dim() });
    }
    let b = square_root_factor(rho)?;
    let w = b.adjoint().checked_mul(op)?.checked_mul(&b.conj())?;
    singular_values(&w)
}

/// Same roots from the eigenvalues of the non-Hermitian product itself.
/// Accurate to roughly the square root of machine precision near zero.
pub fn spin_flip_roots_via_eigenvalues(rho: &ComplexMatrix, op: &ComplexMatrix) -> Result<Vec<f64>> {
    let product = rho.checked_mul(op)?.checked_mul(&rho.conj())?.checked_mul(op)?;
    let mut values = eigenvalues_general(&product)?;
    sort_descending(&mut values);
    let scale = values.first().map_or(0.0, |v| v.norm()).max(1.0);
    values
        .into_iter()
        .map(|v| {
            if v.re < -NEGATIVE_CLAMP * scale {
                Err(Error::Unphysical(format!("spin-flip eigenvalue {v}")))
            } else {
                Ok(v.re.max(0.0).sqrt())
            }
        })
        .collect()
}

/// max(0, r₁ - Σ_{t>1} r_t) for roots sorted in decreasing order.
fn concurrence_from_roots(roots: &[f64]) -> f64 {
    match roots.split_first() {
        Some((first, rest)) => (first - rest.iter().sum::<f64>()).max(0.0),
        None => 0.0,
    }
}

fn require_basis(rho: &DensityMatrix, basis: Basis) -> Result<()> {
    if rho.basis() != basis {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: rho.dim() });
    }
    Ok(())
}

fn two_qubit_flip() -> ComplexMatrix {
    let y = ComplexMatrix::pauli_y();
    y.kron(&y).expect("4x4 fits")
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence_wootters(rho: &DensityMatrix) -> Result<f64> {
    require_basis(rho, Basis::TwoQubit)?;
    Ok(concurrence_from_roots(&spin_flip_roots(rho.matrix(), &two_qubit_flip())?))
}

/// Wootters concurrence from the eigenvalues of `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn concurrence_wootters_via_eigenvalues(rho: &DensityMatrix) -> Result<f64> {
    require_basis(rho, Basis::TwoQubit)?;
    Ok(concurrence_from_roots(&spin_flip_roots_via_eigenvalues(rho.matrix(), &two_qubit_flip())?))
}

fn check_norm(amplitudes: &[Complex64]) -> Result<()> {
    let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if (norm_sqr - 1.0).abs() > 1e-10 {
        return Err(Error::Normalization { norm_sqr });
    }
    Ok(())
}

/// Concurrence of the evolved EPR-type state: 2|G^A G^B||C^A C^B|.
pub fn concurrence_epr(t: f64, a: &SubsystemSpec, b: &SubsystemSpec) -> Result<f64> {
    check_norm(&[a.c0, b.c0])?;
    let (ga, gb) = (a.survival_factor(t)?, b.survival_factor(t)?);
    Ok(2.0 * (ga * gb).norm() * (a.c0 * b.c0).norm())
}

/// Long-time concurrence 2 (N_A-1)/N_A (N_B-1)/N_B |C^A C^B|.
pub fn concurrence_asymptote(n_a: QubitCount, n_b: QubitCount, c_a: Complex64, c_b: Complex64) -> Result<f64> {
    Ok(2.0 * n_a.retained_fraction()? * n_b.retained_fraction()? * (c_a * c_b).norm())
}

/// One concurrence term per (cut, generator), cut-major.
pub fn lbc_terms(rho: &DensityMatrix) -> Result<Vec<(Bipartition, f64)>> {
    require_basis(rho, Basis::ThreeQubit)?;
    let operators = GeneratorSet::standard().three_qubit_operators()?;
    let mut terms = Vec::with_capacity(18);
    for cut in Bipartition::ALL {
        let arranged = permute_qubits(rho.matrix(), &cut.qubit_order())?;
        let factor = square_root_factor(&arranged)?;
        let (left, right) = (factor.adjoint(), factor.conj());
        for op in &operators {
            let w = left.checked_mul(op)?.checked_mul(&right)?;
            terms.push((cut, concurrence_from_roots(&singular_values(&w)?)));
        }
    }
    Ok(terms)
}

/// Lower bound of concurrence: sqrt((1/3) Σ over cuts and generators of C_r²).
pub fn lbc_generic(rho: &DensityMatrix) -> Result<f64> {
    let sum: f64 = lbc_terms(rho)?.iter().map(|(_, c)| c * c).sum();
    Ok((sum / 3.0).sqrt())
}

fn pair_weight(x: Complex64, y: Complex64) -> f64 {
    (x * y).norm_sqr()
}

/// LBC of the evolved W-type state:
/// √(8/3) (|G^A G^B C^A C^B|² + |G^A G^C C^A C^C|² + |G^B G^C C^B C^C|²)^{1/2}.
pub fn lbc_w(t: f64, a: &SubsystemSpec, b: &SubsystemSpec, c: &SubsystemSpec) -> Result<f64> {
    check_norm(&[a.c0, b.c0, c.c0])?;
    let xa = a.survival_factor(t)? * a.c0;
    let xb = b.survival_factor(t)? * b.c0;
    let xc = c.survival_factor(t)? * c.c0;
    Ok((8.0 / 3.0f64).sqrt() * (pair_weight(xa, xb) + pair_weight(xa, xc) + pair_weight(xb, xc)).sqrt())
}

/// Long-time LBC: the W-type closed form with every |G| replaced by (N-1)/N.
pub fn lbc_asymptote(counts: [QubitCount; 3], c_a: Complex64, c_b: Complex64, c_c: Complex64) -> Result<f64> {
    let [fa, fb, fc] = [counts[0].retained_fraction()?, counts[1].retained_fraction()?, counts[2].retained_fraction()?];
    let (xa, xb, xc) = (c_a * fa, c_b * fb, c_c * fc);
    Ok((8.0 / 3.0f64).sqrt() * (pair_weight(xa, xb) + pair_weight(xa, xc) + pair_weight(xb, xc)).sqrt())
}
