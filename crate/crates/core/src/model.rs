//! Closed-form model of N qubits sharing one Lorentzian reservoir.
//!
//! With the reservoir in its vacuum and at most one excitation in the qubits,
//! the memory kernel is a single damped exponential and every amplitude is a
//! combination of the two modes `exp((±D - Λ) t / 2)` with
//! `Λ = λ - iΔ` and `D = sqrt(Λ² - 2 γ₀ λ Σβ²)`.
//!
//! The Laplace-domain amplitudes obtained by transforming the amplitude
//! equations are
//!
//! ```text
//! Ĉ_j(p) = [C_j(0) - β_j F(p) S(p)] / p,    F(p) = γ₀λ / (2 (p + Λ)),
//! S(p)   = Σ_l β_l C_l(0) / (p + Σβ² F(p)),
//! ```
//!
//! whose common denominator `2p(p + Λ) + γ₀λΣβ²` carries the factor γ₀λ on
//! the Σβ² term; [`laplace_amplitude`] evaluates this form and the tests
//! check it against a numerical Laplace transform of [`amplitude_general`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Parameters of one reservoir and the qubits coupled to it.
#[derive(Debug, Clone, PartialEq)]
pub struct ReservoirSpec {
    gamma0: f64,
    lambda: f64,
    delta: f64,
    betas: Vec<f64>,
}

impl ReservoirSpec {
    /// Reservoir with `n_qubits` identically coupled qubits (all β = 1).
    pub fn new(gamma0: f64, lambda: f64, delta: f64, n_qubits: usize) -> Result<Self> {
        Self::with_betas(gamma0, lambda, delta, vec![1.0; n_qubits])
    }

    pub fn with_betas(gamma0: f64, lambda: f64, delta: f64, betas: Vec<f64>) -> Result<Self> {
        if !(gamma0 > 0.0 && gamma0.is_finite()) {
            return Err(invalid("gamma0", format!("must be positive and finite, got {gamma0}")));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(invalid("lambda", format!("must be positive and finite, got {lambda}")));
        }
        if !delta.is_finite() {
            return Err(invalid("delta", format!("must be finite, got {delta}")));
        }
        if betas.is_empty() {
            return Err(invalid("n_qubits", "at least one qubit is required".into()));
        }
        if betas.iter().any(|b| !b.is_finite()) {
            return Err(invalid("betas", "weights must be finite".into()));
        }
        Ok(Self { gamma0, lambda, delta, betas })
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn n_qubits(&self) -> usize {
        self.betas.len()
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn has_unit_betas(&self) -> bool {
        self.betas.iter().all(|&b| b == 1.0)
    }

    /// Σ_l β_l².
    pub fn beta_norm_sqr(&self) -> f64 {
        self.betas.iter().map(|b| b * b).sum()
    }

    /// Λ = λ - iΔ.
    pub fn lambda_rate(&self) -> Complex64 {
        Complex64::new(self.lambda, -self.delta)
    }

    /// D = sqrt(Λ² - 2γ₀λΣβ²), principal branch (Re D ≥ 0).
    pub fn d_rate(&self) -> Complex64 {
        let big_lambda = self.lambda_rate();
        (big_lambda * big_lambda - 2.0 * self.gamma0 * self.lambda * self.beta_norm_sqr()).sqrt()
    }
}

fn invalid(name: &'static str, reason: String) -> Error {
    Error::InvalidParameter { name, reason }
}

/// Coupling regime of a reservoir.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeClass {
    /// λ > 2γ₀Σβ²: irreversible, Markovian decay.
    WeakCoupling,
    /// λ < 2γ₀Σβ²: oscillatory, non-Markovian decay.
    StrongCoupling,
    /// λ = 2γ₀Σβ² to within 1e-12 λ.
    Critical,
}

impl RegimeClass {
    pub fn is_markovian(self) -> bool {
        matches!(self, RegimeClass::WeakCoupling)
    }
}

/// Number of qubits in a reservoir, allowing the N → ∞ limit of the
/// asymptotic formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitCount {
    Finite(u32),
    Infinite,
}

impl QubitCount {
    /// (N - 1)/N, the long-time value of the survival factor; 1 for N → ∞.
    pub fn retained_fraction(self) -> Result<f64> {
        match self {
            QubitCount::Finite(0) => Err(invalid("n_qubits", "at least one qubit is required".into())),
            QubitCount::Finite(n) => Ok((n as f64 - 1.0) / n as f64),
            QubitCount::Infinite => Ok(1.0),
        }
    }
}

impl From<u32> for QubitCount {
    fn from(n: u32) -> Self {
        QubitCount::Finite(n)
    }
}

/// Single-excitation amplitudes at time `t`: the ground amplitude `c0`
/// (time independent) and one excited amplitude per reservoir qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector {
    pub c0: Complex64,
    pub c: Vec<Complex64>,
    pub t: f64,
}

impl AmplitudeVector {
    pub fn new(c0: Complex64, c: Vec<Complex64>) -> Self {
        Self { c0, c, t: 0.0 }
    }

    /// |c0|² + Σ|c_j|².
    pub fn norm_sqr(&self) -> f64 {
        self.c0.norm_sqr() + self.c.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// Σ|c_j|², the excited-state population of the qubits.
    pub fn excited_population(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest |c_j - other.c_j| over all qubits.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.c.iter().zip(&other.c).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Lorentzian spectral density at the shifted frequency `x = ω - Ω`:
/// `γ₀λ² / (2π ((x + Δ)² + λ²))`.
pub fn spectral_density(x: f64, spec: &ReservoirSpec) -> f64 {
    let shifted = x + spec.delta;
    spec.gamma0 * spec.lambda * spec.lambda / (2.0 * PI * (shifted * shifted + spec.lambda * spec.lambda))
}

/// Reservoir correlation function `(γ₀λ/2) exp(-(λ - iΔ) τ)` for τ ≥ 0.
pub fn correlation_kernel(tau: f64, spec: &ReservoirSpec) -> Result<Complex64> {
    if tau.is_nan() || tau < 0.0 {
        return Err(Error::NegativeTime(tau));
    }
    Ok(0.5 * spec.gamma0 * spec.lambda * (-spec.lambda_rate() * tau).exp())
}

pub fn classify_regime(spec: &ReservoirSpec) -> RegimeClass {
    let threshold = 2.0 * spec.gamma0 * spec.beta_norm_sqr();
    if (spec.lambda - threshold).abs() <= 1e-12 * spec.lambda {
        RegimeClass::Critical
    } else if spec.lambda > threshold {
        RegimeClass::WeakCoupling
    } else {
        RegimeClass::StrongCoupling
    }
}

/// Returns `(e^{-Λt/2} cosh(Dt/2), e^{-Λt/2} sinh(Dt/2) / D)`.
///
/// Both are even in D. Small |Dt| uses the Taylor series of cosh and
/// sinh(z)/z; otherwise the exponentials are combined before evaluation so
/// nothing larger than `exp(Re(D - Λ) t / 2)` is ever formed.
fn damped_hyperbolics(big_lambda: Complex64, d: Complex64, t: f64) -> (Complex64, Complex64) {
    let z = d * (0.5 * t);
    if z.norm() < 0.1 {
        let z2 = z * z;
        let (mut cosh, mut sinhc) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        let (mut term_c, mut term_s) = (cosh, sinhc);
        for k in 1..=10 {
            let k = k as f64;
            term_c *= z2 / ((2.0 * k - 1.0) * (2.0 * k));
            term_s *= z2 / ((2.0 * k) * (2.0 * k + 1.0));
            cosh += term_c;
            sinhc += term_s;
        }
        let decay = (-big_lambda * (0.5 * t)).exp();
        (decay * cosh, decay * sinhc * (0.5 * t))
    } else {
        let plus = ((d - big_lambda) * (0.5 * t)).exp();
        let minus = (-(d + big_lambda) * (0.5 * t)).exp();
        ((plus + minus) * 0.5, (plus - minus) / (2.0 * d))
    }
}

/// E(t) = e^{-Λt/2} (cosh(Dt/2) + (Λ/D) sinh(Dt/2)), the relaxation factor of
/// the coupled ("bright") combination Σβ_l C_l.
fn bright_mode_factor(big_lambda: Complex64, d: Complex64, t: f64) -> Complex64 {
    let (c, s) = damped_hyperbolics(big_lambda, d, t);
    c + big_lambda * s
}

fn check_time(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    if t.is_infinite() {
        return Err(Error::TimeGrid("time must be finite".into()));
    }
    Ok(())
}

/// Exact amplitudes at time `t` for arbitrary weights β and initial amplitudes.
///
/// `C_j(t) = E C_j(0) + (1 - E) [Σ_{l≠j} β_l² C_j(0) - β_j Σ_{l≠j} β_l C_l(0)] / Σβ²`.
pub fn amplitude_general(t: f64, init: &AmplitudeVector, spec: &ReservoirSpec) -> Result<AmplitudeVector> {
    check_time(t)?;
    if init.c.len() != spec.n_qubits() {
        return Err(Error::DimensionMismatch { expected: spec.n_qubits(), found: init.c.len() });
    }
    let beta_sqr = spec.beta_norm_sqr();
    if beta_sqr == 0.0 {
        return Ok(AmplitudeVector { c0: init.c0, c: init.c.clone(), t });
    }
    let e = bright_mode_factor(spec.lambda_rate(), spec.d_rate(), t);
    let bright: Complex64 = spec.betas.iter().zip(&init.c).map(|(b, c)| c * b).sum();
    let c = spec
        .betas
        .iter()
        .zip(&init.c)
        .map(|(&beta_j, &c_j)| {
            let others_sqr = beta_sqr - beta_j * beta_j;
            let others_bright = bright - c_j * beta_j;
            e * c_j + (1.0 - e) * (c_j * others_sqr - others_bright * beta_j) / beta_sqr
        })
        .collect();
    Ok(AmplitudeVector { c0: init.c0, c, t })
}

fn require_unit_betas(spec: &ReservoirSpec) -> Result<()> {
    if spec.has_unit_betas() {
        Ok(())
    } else {
        Err(invalid("betas", "the survival factor is defined for unit weights only".into()))
    }
}

/// G(t) = (N-1)/N + E(t)/N, the factor multiplying a lone excited amplitude
/// when every β = 1.
pub fn survival_factor(t: f64, spec: &ReservoirSpec) -> Result<Complex64> {
    check_time(t)?;
    require_unit_betas(spec)?;
    let n = spec.n_qubits() as f64;
    let e = bright_mode_factor(spec.lambda_rate(), spec.d_rate(), t);
    Ok((e + (n - 1.0)) / n)
}

/// Time-local decay rate Γ(t) = -2 Re(Ġ/G) of a qubit with all β = 1.
///
/// Fails with [`Error::DecayRatePole`] where |G(t)| < 1e-12; the rate
/// genuinely diverges at zeros of G.
pub fn decay_rate(t: f64, spec: &ReservoirSpec) -> Result<f64> {
    let g = survival_factor(t, spec)?;
    if g.norm() < 1e-12 {
        return Err(Error::DecayRatePole { t, g_abs: g.norm() });
    }
    let (_, s) = damped_hyperbolics(spec.lambda_rate(), spec.d_rate(), t);
    Ok((2.0 * spec.gamma0 * spec.lambda * s / g).re)
}

/// Laplace transform Ĉ_j(p) of the exact amplitudes, for Re p > 0.
pub fn laplace_amplitude(p: Complex64, init: &AmplitudeVector, spec: &ReservoirSpec) -> Result<Vec<Complex64>> {
    if init.c.len() != spec.n_qubits() {
        return Err(Error::DimensionMismatch { expected: spec.n_qubits(), found: init.c.len() });
    }
    if p.re.is_nan() || p.re <= 0.0 {
        return Err(invalid("p", format!("Re p must be positive, got {p}")));
    }
    let kernel = 0.5 * spec.gamma0 * spec.lambda / (p + spec.lambda_rate());
    let bright: Complex64 = spec.betas.iter().zip(&init.c).map(|(b, c)| c * b).sum();
    let bright_p = bright / (p + kernel * spec.beta_norm_sqr());
    Ok(spec.betas.iter().zip(&init.c).map(|(&beta, &c)| (c - kernel * bright_p * beta) / p).collect())
}
