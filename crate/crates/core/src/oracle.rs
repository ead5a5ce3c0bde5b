//! Numerical ground truth for the closed forms.
//!
//! [`integrate_volterra`] solves the memory-kernel amplitude equations
//! `Ċ_j = -β_j ∫₀ᵗ f(t - s) Σ_l β_l C_l(s) ds`. The kernel is a single
//! exponential, so the convolution `B(t)` obeys its own linear ODE and the
//! system closes without any history.
//!
//! [`integrate_modes`] discards the kernel altogether and integrates the
//! Schrödinger equation of the qubits coupled to a finite, uniformly spaced
//! set of reservoir modes (in the frame rotating at the qubit frequency).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{spectral_density, AmplitudeVector, ReservoirSpec};
use crate::ode::{integrate, SolverConfig};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Qubit amplitudes together with the kernel accumulator
/// `B(t) = ∫₀ᵗ f(t - s) Σ_l β_l C_l(s) ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedState {
    pub c: Vec<Complex64>,
    pub b: Complex64,
}

impl AugmentedState {
    /// State at t = 0, where the accumulator vanishes.
    pub fn initial(c: Vec<Complex64>) -> Self {
        Self { c, b: Complex64::new(0.0, 0.0) }
    }

    /// Time derivative: `Ḃ = (γ₀λ/2) Σβ_l C_l - ΛB`, `Ċ_j = -β_j B`.
    pub fn derivative(&self, spec: &ReservoirSpec) -> Self {
        let (c_dot, b_dot) = augmented_rhs(spec, &self.c, self.b);
        Self { c: c_dot, b: b_dot }
    }
}

fn augmented_rhs(spec: &ReservoirSpec, c: &[Complex64], b: Complex64) -> (Vec<Complex64>, Complex64) {
    let bright: Complex64 = spec.betas().iter().zip(c).map(|(beta, c)| c * beta).sum();
    let b_dot = 0.5 * spec.gamma0() * spec.lambda() * bright - spec.lambda_rate() * b;
    (spec.betas().iter().map(|beta| -b * beta).collect(), b_dot)
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    match t_grid.first() {
        None => return Err(Error::TimeGrid("empty time grid".into())),
        Some(&t0) if t0 != 0.0 => return Err(Error::TimeGrid(format!("grid must start at 0, starts at {t0}"))),
        _ => {}
    }
    if t_grid.iter().any(|t| !t.is_finite()) || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::TimeGrid("grid must be finite and strictly increasing".into()));
    }
    Ok(())
}

fn check_init(init: &AmplitudeVector, spec: &ReservoirSpec) -> Result<()> {
    if init.c.len() != spec.n_qubits() {
        return Err(Error::DimensionMismatch { expected: spec.n_qubits(), found: init.c.len() });
    }
    Ok(())
}

/// Integrates the amplitude equations on `t_grid` (starting at 0).
pub fn integrate_volterra(
    spec: &ReservoirSpec,
    init: &AmplitudeVector,
    t_grid: &[f64],
    cfg: &SolverConfig,
) -> Result<Vec<AmplitudeVector>> {
    check_grid(t_grid)?;
    check_init(init, spec)?;
    let n = spec.n_qubits();
    let mut y0 = init.c.clone();
    y0.push(Complex64::new(0.0, 0.0));
    let traj = integrate(
        |_, y, dy| {
            let (c_dot, b_dot) = augmented_rhs(spec, &y[..n], y[n]);
            dy[..n].copy_from_slice(&c_dot);
            dy[n] = b_dot;
        },
        0.0,
        &y0,
        t_grid,
        cfg,
    )?;
    Ok(traj.times.into_iter().zip(traj.states).map(|(t, y)| AmplitudeVector { c0: init.c0, c: y[..n].to_vec(), t }).collect())
}

/// Discretized reservoir: shifted frequencies `x_k = ω_k - Ω` on a uniform
/// grid centred on the Lorentzian peak, with couplings `g_k = sqrt(J(x_k) Δx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    pub frequencies: Vec<f64>,
    pub couplings: Vec<f64>,
    pub spacing: f64,
    /// Fraction of the spectral weight outside the sampled window.
    pub truncated_weight: f64,
}

impl ModeGrid {
    /// `n_modes` (odd, ≥ 201) points spanning a window of total width `span`.
    pub fn new(spec: &ReservoirSpec, n_modes: usize, span: f64) -> Result<Self> {
        if n_modes < 201 || n_modes.is_multiple_of(2) {
            return Err(Error::InvalidParameter { name: "n_modes", reason: format!("must be odd and at least 201, got {n_modes}") });
        }
        if !span.is_finite() || span < 20.0 * spec.lambda() {
            return Err(Error::InvalidParameter { name: "span", reason: format!("must be at least 20 lambda, got {span}") });
        }
        let spacing = span / (n_modes - 1) as f64;
        let half = (n_modes / 2) as f64;
        let frequencies: Vec<f64> = (0..n_modes).map(|k| -spec.delta() + (k as f64 - half) * spacing).collect();
        let couplings = frequencies.iter().map(|&x| (spectral_density(x, spec) * spacing).sqrt()).collect();
        let truncated_weight = 1.0 - std::f64::consts::FRAC_2_PI * (0.5 * span / spec.lambda()).atan();
        Ok(Self { frequencies, couplings, spacing, truncated_weight })
    }

    pub fn n_modes(&self) -> usize {
        self.frequencies.len()
    }

    /// Time after which the discrete spectrum revives the emitted excitation.
    pub fn recurrence_time(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.spacing
    }
}

/// One sample of the mode-resolved dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeState {
    pub system: AmplitudeVector,
    pub modes: Vec<Complex64>,
}

impl ModeState {
    /// |C₀|² + Σ|C_j|² + Σ|D_k|².
    pub fn total_norm_sqr(&self) -> f64 {
        self.system.norm_sqr() + self.modes.iter().map(|d| d.norm_sqr()).sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSolution {
    pub grid: ModeGrid,
    pub states: Vec<ModeState>,
}

/// Integrates the qubits plus `n_modes` discrete reservoir modes, all modes
/// starting in vacuum.
///
/// Logs a warning when the window misses more than 1e-4 of the spectral
/// weight; the missing weight is reported in [`ModeGrid::truncated_weight`].
pub fn integrate_modes(
    spec: &ReservoirSpec,
    init: &AmplitudeVector,
    t_grid: &[f64],
    n_modes: usize,
    span: f64,
    cfg: &SolverConfig,
) -> Result<ModeSolution> {
    check_grid(t_grid)?;
    check_init(init, spec)?;
    let grid = ModeGrid::new(spec, n_modes, span)?;
    if grid.truncated_weight > 1e-4 {
        log::warn!(
            "mode window of width {span} misses {:.3e} of the spectral weight; short-time memory is underestimated",
            grid.truncated_weight
        );
    }
    if let Some(&t_end) = t_grid.last() {
        if t_end > grid.recurrence_time() {
            log::warn!("grid extends past the mode recurrence time {:.3}", grid.recurrence_time());
        }
    }

    let n = spec.n_qubits();
    let betas = spec.betas();
    let mut y0 = init.c.clone();
    y0.resize(n + n_modes, Complex64::new(0.0, 0.0));
    let traj = integrate(
        |_, y, dy| {
            let (qubits, modes) = y.split_at(n);
            let field: Complex64 = grid.couplings.iter().zip(modes).map(|(g, d)| d * g).sum();
            let bright: Complex64 = betas.iter().zip(qubits).map(|(b, c)| c * b).sum();
            for j in 0..n {
                dy[j] = -I * betas[j] * field;
            }
            for (k, (x, g)) in grid.frequencies.iter().zip(&grid.couplings).enumerate() {
                dy[n + k] = -I * (modes[k] * x + bright * g);
            }
        },
        0.0,
        &y0,
        t_grid,
        cfg,
    )?;
    let states = traj
        .times
        .into_iter()
        .zip(traj.states)
        .map(|(t, mut y)| {
            let modes = y.split_off(n);
            ModeState { system: AmplitudeVector { c0: init.c0, c: y, t }, modes }
        })
        .collect();
    Ok(ModeSolution { grid, states })
}
