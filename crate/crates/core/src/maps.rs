//! Reduced density matrices, the single-qubit amplitude-damping map χ(t) and
//! its element-wise products for two and three independent subsystems.
//!
//! Basis convention: per qubit index 0 is |e⟩ and 1 is |g⟩, and the first
//! qubit is the most significant, so the two-qubit order is
//! |ee⟩, |eg⟩, |ge⟩, |gg⟩ and the three-qubit order runs |eee⟩ … |ggg⟩.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{survival_factor, QubitCount, ReservoirSpec};
use crate::smallmat::{eigenvalues_hermitian, ComplexMatrix};

const TRACE_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
const EIGEN_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    A,
    B,
    C,
}

/// One subsystem: a reservoir with N unit-weight qubits, one of which (the
/// "active" qubit) carries the initial amplitude `c0` of the shared state.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsystemSpec {
    pub label: Label,
    pub reservoir: ReservoirSpec,
    pub c0: Complex64,
}

impl SubsystemSpec {
    pub fn new(label: Label, reservoir: ReservoirSpec, c0: Complex64) -> Result<Self> {
        if !reservoir.has_unit_betas() {
            return Err(Error::InvalidParameter { name: "betas", reason: "subsystem qubits must all have unit weight".into() });
        }
        if !(c0.re.is_finite() && c0.im.is_finite()) {
            return Err(Error::InvalidParameter { name: "c0", reason: "initial amplitude must be finite".into() });
        }
        Ok(Self { label, reservoir, c0 })
    }

    /// G(t) of this subsystem's reservoir.
    pub fn survival_factor(&self, t: f64) -> Result<Complex64> {
        survival_factor(t, &self.reservoir)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Single,
    TwoQubit,
    ThreeQubit,
}

impl Basis {
    pub fn from_dim(dim: usize) -> Result<Self> {
        match dim {
            2 => Ok(Basis::Single),
            4 => Ok(Basis::TwoQubit),
            8 => Ok(Basis::ThreeQubit),
            other => Err(Error::DimensionMismatch { expected: 8, found: other }),
        }
    }

    pub fn n_qubits(self) -> usize {
        match self {
            Basis::Single => 1,
            Basis::TwoQubit => 2,
            Basis::ThreeQubit => 3,
        }
    }

    pub fn dim(self) -> usize {
        1 << self.n_qubits()
    }

    /// Ket labels in index order, e.g. `["ee", "eg", "ge", "gg"]`.
    pub fn labels(self) -> Vec<String> {
        let n = self.n_qubits();
        (0..self.dim()).map(|idx| (0..n).map(|q| if (idx >> (n - 1 - q)) & 1 == 0 { 'e' } else { 'g' }).collect()).collect()
    }
}

/// A validated density matrix of one, two or three qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    basis: Basis,
}

impl DensityMatrix {
    /// Checks unit trace, hermiticity and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::unchecked(matrix)?;
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn unchecked(matrix: ComplexMatrix) -> Result<Self> {
        let basis = Basis::from_dim(matrix.dim())?;
        Ok(Self { matrix, basis })
    }

    /// |ψ⟩⟨ψ| for a normalized state vector.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization { norm_sqr });
        }
        let m = ComplexMatrix::from_fn(amplitudes.len(), |r, c| amplitudes[r] * amplitudes[c].conj());
        Self::new(m)
    }

    pub fn validate(&self) -> Result<()> {
        let trace = self.matrix.trace();
        if (trace - 1.0).norm() > TRACE_TOL {
            return Err(Error::Unphysical(format!("trace {trace} differs from 1")));
        }
        let defect = self.matrix.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NonHermitian(defect));
        }
        let min = eigenvalues_hermitian(&self.matrix)?.into_iter().fold(f64::INFINITY, f64::min);
        if min < -EIGEN_TOL {
            return Err(Error::Unphysical(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn n_qubits(&self) -> usize {
        self.basis.n_qubits()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// ρ ⊗ σ with `self` on the more significant qubits.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Self::unchecked(self.matrix.kron(&other.matrix)?)
    }

    /// Traces out `qubit` (0-based, 0 = first).
    pub fn partial_trace(&self, qubit: usize) -> Result<Self> {
        let n = self.n_qubits();
        if n < 2 || qubit >= n {
            return Err(Error::InvalidParameter { name: "qubit", reason: format!("cannot trace qubit {qubit} of a {n}-qubit state") });
        }
        let shift = n - 1 - qubit;
        let expand = |idx: usize, bit: usize| {
            let high = (idx >> shift) << (shift + 1);
            let low = idx & ((1 << shift) - 1);
            high | (bit << shift) | low
        };
        let m = ComplexMatrix::from_fn(1 << (n - 1), |r, c| (0..2).map(|bit| self.matrix[(expand(r, bit), expand(c, bit))]).sum());
        Self::unchecked(m)
    }

    /// Reorders qubits so that position `i` of the result holds qubit `perm[i]`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self> {
        Self::unchecked(permute_qubits(&self.matrix, perm)?)
    }
}

pub(crate) fn permute_qubits(m: &ComplexMatrix, perm: &[usize]) -> Result<ComplexMatrix> {
    let n = perm.len();
    if m.dim() != 1 << n {
        return Err(Error::DimensionMismatch { expected: 1 << n, found: m.dim() });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidParameter { name: "perm", reason: format!("{perm:?} is not a permutation") });
        }
    }
    let source = |idx: usize| {
        (0..n).fold(0, |acc, i| {
            let bit = (idx >> (n - 1 - i)) & 1;
            acc | (bit << (n - 1 - perm[i]))
        })
    };
    Ok(ComplexMatrix::from_fn(m.dim(), |r, c| m[(source(r), source(c))]))
}

/// The single-qubit map χ(t), fully described by the survival factor G.
///
/// Element-wise: ρ_ee → |G|²ρ_ee, ρ_eg → Gρ_eg, ρ_ge → G*ρ_ge,
/// ρ_gg → (1 - |G|²)ρ_ee + ρ_gg.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicalMap {
    pub g: Complex64,
}

impl DynamicalMap {
    pub fn identity() -> Self {
        Self { g: Complex64::new(1.0, 0.0) }
    }

    /// Output elements `(row, col, coefficient)` fed by input element (row, col).
    fn transitions(&self, row: usize, col: usize) -> [(usize, usize, Complex64); 2] {
        let p = self.g.norm_sqr();
        match (row, col) {
            (0, 0) => [(0, 0, Complex64::new(p, 0.0)), (1, 1, Complex64::new(1.0 - p, 0.0))],
            (0, 1) => [(0, 1, self.g), (0, 1, ZERO)],
            (1, 0) => [(1, 0, self.g.conj()), (1, 0, ZERO)],
            _ => [(1, 1, Complex64::new(1.0, 0.0)), (1, 1, ZERO)],
        }
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        evolve(rho, &[*self])
    }
}

/// χ(t) of one subsystem.
pub fn chi_map(t: f64, sub: &SubsystemSpec) -> Result<DynamicalMap> {
    Ok(DynamicalMap { g: sub.survival_factor(t)? })
}

/// Applies one single-qubit map per qubit (first map on the first qubit).
pub fn evolve(rho: &DensityMatrix, maps: &[DynamicalMap]) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    if maps.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: maps.len() });
    }
    let dim = rho.dim();
    let mut out = ComplexMatrix::zeros(dim);
    let mut branches: Vec<(usize, usize, Complex64)> = Vec::with_capacity(1 << n);
    let mut next = Vec::with_capacity(1 << n);
    for r in 0..dim {
        for c in 0..dim {
            branches.clear();
            branches.push((0, 0, rho.matrix[(r, c)]));
            for (q, map) in maps.iter().enumerate() {
                let shift = n - 1 - q;
                let terms = map.transitions((r >> shift) & 1, (c >> shift) & 1);
                next.clear();
                for &(ro, co, v) in &branches {
                    for &(m, mp, k) in &terms {
                        if k != ZERO {
                            next.push((ro | (m << shift), co | (mp << shift), v * k));
                        }
                    }
                }
                std::mem::swap(&mut branches, &mut next);
            }
            for &(ro, co, v) in &branches {
                out[(ro, co)] += v;
            }
        }
    }
    DensityMatrix::unchecked(out)
}

pub fn two_qubit_evolve(rho0: &DensityMatrix, t: f64, a: &SubsystemSpec, b: &SubsystemSpec) -> Result<DensityMatrix> {
    if rho0.basis() != Basis::TwoQubit {
        return Err(Error::DimensionMismatch { expected: 4, found: rho0.dim() });
    }
    evolve(rho0, &[chi_map(t, a)?, chi_map(t, b)?])
}

pub fn three_qubit_evolve(rho0: &DensityMatrix, t: f64, a: &SubsystemSpec, b: &SubsystemSpec, c: &SubsystemSpec) -> Result<DensityMatrix> {
    if rho0.basis() != Basis::ThreeQubit {
        return Err(Error::DimensionMismatch { expected: 8, found: rho0.dim() });
    }
    evolve(rho0, &[chi_map(t, a)?, chi_map(t, b)?, chi_map(t, c)?])
}

fn check_norm(amplitudes: &[Complex64]) -> Result<()> {
    let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(Error::Normalization { norm_sqr });
    }
    Ok(())
}

/// Reduced state of an active qubit prepared in C₀|g⟩ + C_j(0)|e⟩.
pub fn single_qubit_state(t: f64, c0: Complex64, cj0: Complex64, spec: &ReservoirSpec) -> Result<DensityMatrix> {
    check_norm(&[c0, cj0])?;
    let g = survival_factor(t, spec)?;
    let excited = g.norm_sqr() * cj0.norm_sqr();
    let coherence = c0.conj() * g * cj0;
    let m =
        ComplexMatrix::from_row_major(vec![Complex64::new(excited, 0.0), coherence, coherence.conj(), Complex64::new(1.0 - excited, 0.0)])?;
    DensityMatrix::unchecked(m)
}

/// l1 norm of coherence: Σ_{m≠n} |ρ_mn|.
pub fn coherence_l1(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let dim = m.dim();
    (0..dim).flat_map(|r| (0..dim).filter(move |&c| c != r).map(move |c| (r, c))).map(|rc| m[rc].norm()).sum()
}

/// Long-time coherence 2|α₁α₂|(N-1)/N.
pub fn coherence_asymptote(n: QubitCount, alpha1: Complex64, alpha2: Complex64) -> Result<f64> {
    Ok(2.0 * (alpha1 * alpha2).norm() * n.retained_fraction()?)
}

/// C^A|eg⟩ + C^B|ge⟩ built from the subsystems' initial amplitudes.
pub fn epr_state(a: &SubsystemSpec, b: &SubsystemSpec) -> Result<DensityMatrix> {
    let mut psi = vec![ZERO; 4];
    psi[1] = a.c0;
    psi[2] = b.c0;
    DensityMatrix::from_pure(&psi)
}

/// C^A|egg⟩ + C^B|geg⟩ + C^C|gge⟩ built from the subsystems' initial amplitudes.
pub fn w_state(a: &SubsystemSpec, b: &SubsystemSpec, c: &SubsystemSpec) -> Result<DensityMatrix> {
    let mut psi = vec![ZERO; 8];
    psi[3] = a.c0;
    psi[5] = b.c0;
    psi[6] = c.c0;
    DensityMatrix::from_pure(&psi)
}

/// Evolved EPR-type state written down directly from the survival factors.
pub fn two_qubit_closed_form(t: f64, a: &SubsystemSpec, b: &SubsystemSpec) -> Result<DensityMatrix> {
    closed_form_single_excitation(t, &[a, b])
}

/// Evolved W-type state written down directly from the survival factors.
pub fn three_qubit_closed_form(t: f64, a: &SubsystemSpec, b: &SubsystemSpec, c: &SubsystemSpec) -> Result<DensityMatrix> {
    closed_form_single_excitation(t, &[a, b, c])
}

/// For Σ_k C_k |g…e_k…g⟩ the evolved state has populations |G_k C_k|² on
/// the single-excitation kets, coherences G_k G_l* C_k C_l* between them, and
/// the remaining weight on |g…g⟩.
fn closed_form_single_excitation(t: f64, subs: &[&SubsystemSpec]) -> Result<DensityMatrix> {
    let amplitudes: Vec<Complex64> = subs.iter().map(|s| s.c0).collect();
    check_norm(&amplitudes)?;
    let n = subs.len();
    let dim = 1 << n;
    let ground = dim - 1;
    let evolved: Vec<Complex64> = subs.iter().map(|s| Ok(s.survival_factor(t)? * s.c0)).collect::<Result<_>>()?;
    // ket with qubit k excited: every bit set except the one for qubit k
    let ket = |k: usize| ground & !(1 << (n - 1 - k));
    let mut m = ComplexMatrix::zeros(dim);
    let mut excited = 0.0;
    for k in 0..n {
        for l in 0..n {
            m[(ket(k), ket(l))] = evolved[k] * evolved[l].conj();
        }
        excited += evolved[k].norm_sqr();
    }
    m[(ground, ground)] = Complex64::new(1.0 - excited, 0.0);
    DensityMatrix::unchecked(m)
}
