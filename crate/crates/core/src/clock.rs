//! The relational clock: oscillator 1 read off against the phase of
//! oscillator 2, its projected symbol and operator, the classical limit, and
//! the amplitude/phase correlation functions with their Gaussian widths.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::classical::{ClassicalConfig, Units};
use crate::coherent::{diagonal_operator, overlap, ReducedLabel};
use crate::error::{Error, Result};
use crate::fit::{fit_gaussian_width, fit_sinusoid, GaussianWidthFit};
use crate::fock::{PhysOperator, Spin};
use crate::quadrature::{RadialGrid, SphereGrid};
use crate::special::clock_gamma_ratio;
use crate::symbols::FullLowerSymbol;

/// Gaussian widths are fitted where `|overlap| > e^{-1/2}`, i.e. within one
/// standard deviation of the peak.
pub const FIT_THRESHOLD: f64 = 0.606_530_659_712_633_4;

/// The radial integral at the gauge slice `θ = ωτ + φ′`:
/// `∫ o(ξ, r, ωτ+φ′) e^{−r} r^{m+1}/(m+1)! dr`.
///
/// Only the root `θ = ωτ + φ′` of `q₂(θ) = B cos(ωτ + φ′)` is taken; the
/// mirror root `−(ωτ + φ′)` belongs to the other half-period.
pub fn deparameterize(
    sym: &FullLowerSymbol,
    xi: Complex64,
    radial: &RadialGrid,
    tau: f64,
    phi_prime: f64,
    omega: f64,
) -> f64 {
    let theta = (omega * tau + phi_prime).rem_euclid(std::f64::consts::TAU);
    radial.integrate(|r| sym.eval(xi, r, theta))
}

/// `Γ(m+5/2)/(m+1)! · (ξe^{iψ} + ξ̄e^{−iψ}) / (1+|ξ|²)^{1/2}` with `ψ = ωτ + φ′`.
pub fn clock_symbol_q1(xi: Complex64, m: u32, tau: f64, phi_prime: f64, omega: f64) -> f64 {
    let psi = omega * tau + phi_prime;
    let wave = 2.0 * (xi * Complex64::from_polar(1.0, psi)).re;
    clock_gamma_ratio(m) * wave / (1.0 + xi.norm_sqr()).sqrt()
}

/// Amplitude of the clock sinusoid, `2Γ(m+5/2)/(m+1)! · |ξ|/(1+|ξ|²)^{1/2}`.
pub fn clock_amplitude(xi: Complex64, m: u32) -> f64 {
    2.0 * clock_gamma_ratio(m) * xi.norm() / (1.0 + xi.norm_sqr()).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClockTrace {
    pub m: u32,
    pub xi: [f64; 2],
    pub phi_prime: f64,
    pub omega: f64,
    pub tau_grid: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn clock_trace(xi: Complex64, m: u32, tau_grid: &[f64], phi_prime: f64, omega: f64) -> ClockTrace {
    ClockTrace {
        m,
        xi: [xi.re, xi.im],
        phi_prime,
        omega,
        tau_grid: tau_grid.to_vec(),
        values: tau_grid
            .iter()
            .map(|&t| clock_symbol_q1(xi, m, t, phi_prime, omega))
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalLimitEntry {
    pub m: u32,
    pub quantum_amplitude: f64,
    pub classical_amplitude: f64,
    pub ratio: f64,
    /// `ratio / limit − 1`.
    pub deviation: f64,
    /// Phase offset of the fitted sinusoid relative to `ωτ + φ′`.
    pub phase_offset: f64,
    pub fit_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalLimitReport {
    pub xi: [f64; 2],
    /// The large-m value of quantum/classical amplitude, `2√(ω/ħ)`.
    pub limit_ratio: f64,
    pub entries: Vec<ClassicalLimitEntry>,
}

impl ClassicalLimitReport {
    /// Ratios `deviation(mᵢ)/deviation(mᵢ₊₁)` against the `1/m` prediction `mᵢ₊₁/mᵢ`.
    pub fn shrink_ratios(&self) -> Vec<(f64, f64)> {
        self.entries
            .windows(2)
            .map(|w| {
                let measured = w[0].deviation / w[1].deviation;
                let predicted = f64::from(w[1].m) / f64::from(w[0].m);
                (measured, predicted)
            })
            .collect()
    }
}

/// Compares the clock symbol with the classical oscillator-1 trajectory of
/// the on-shell configuration carrying the same `ξ` and energy `ħω(m+1)`.
pub fn classical_limit_check(
    xi: Complex64,
    m_list: &[u32],
    tau_grid: &[f64],
    phi_prime: f64,
    units: Units,
) -> Result<ClassicalLimitReport> {
    if xi.norm() == 0.0 {
        return Err(Error::Degenerate("xi = 0 has no oscillator-1 motion to compare"));
    }
    if m_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("m list must be strictly increasing".into()));
    }
    let limit_ratio = 2.0 * (units.omega / units.hbar).sqrt();
    let phases: Vec<f64> = tau_grid.iter().map(|t| units.omega * t + phi_prime).collect();
    let entries = m_list
        .iter()
        .map(|&m| {
            let trace = clock_trace(xi, m, tau_grid, phi_prime, units.omega);
            let fit = fit_sinusoid(&phases, &trace.values)?;
            let classical = ClassicalConfig::on_shell_from_label(xi, m, phi_prime, units);
            let ratio = fit.amplitude / classical.a;
            Ok(ClassicalLimitEntry {
                m,
                quantum_amplitude: fit.amplitude,
                classical_amplitude: classical.a,
                ratio,
                deviation: ratio / limit_ratio - 1.0,
                phase_offset: fit.phase_offset,
                fit_residual: fit.max_residual,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassicalLimitReport {
        xi: [xi.re, xi.im],
        limit_ratio,
        entries,
    })
}

/// `((2j+1)/π) ∫ q₁′(ξ; τ) |ξ⟩⟨ξ| d²ξ/(1+|ξ|²)²` with `m = 2j`.
pub fn clock_operator(spin: Spin, tau: f64, phi_prime: f64, omega: f64, grid: &SphereGrid) -> PhysOperator {
    let m = spin.m_prime();
    diagonal_operator(spin, grid, |xi| clock_symbol_q1(xi, m, tau, phi_prime, omega))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    /// `ξ = α/β`, pole at `Θ = π/2`.
    Primary,
    /// `ξ̃ = β/α = 1/ξ`, so `Θ̃ = π/2 − Θ`; pole at `Θ = 0`.
    Antipodal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationKind {
    /// Sweep over the amplitude-ratio angle `Θ′`.
    AmplitudeRatio,
    /// Sweep over the phase difference `δφ`.
    Phase,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationTrace {
    pub kind: CorrelationKind,
    pub chart: Chart,
    pub spin_two_j: u32,
    /// `Θ` for amplitude sweeps, `|ξ|` for phase sweeps.
    pub reference: f64,
    /// Sweep value at which the overlap is one.
    pub peak_at: f64,
    pub sweep: Vec<f64>,
    /// `|⟨ξ′|ξ⟩|` from the overlap kernel.
    pub overlaps: Vec<f64>,
    /// The same quantity from the trigonometric closed form.
    pub closed_form: Vec<f64>,
    pub fit: GaussianWidthFit,
    pub sigma_sqr_pred: f64,
}

impl CorrelationTrace {
    /// Index of the largest overlap.
    pub fn argmax(&self) -> usize {
        self.overlaps
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &v)| if v > best.1 { (i, v) } else { best })
            .0
    }

    /// The fitted Gaussian evaluated at sweep value `x`.
    pub fn fitted(&self, x: f64) -> f64 {
        self.fit.eval(x - self.peak_at)
    }

    /// `σ²_fit / σ²_pred`.
    pub fn width_ratio(&self) -> f64 {
        self.fit.sigma_sqr / self.sigma_sqr_pred
    }
}

fn require_nontrivial(spin: Spin) -> Result<()> {
    if spin.two_j() == 0 {
        return Err(Error::InvalidParameter("correlation widths need j >= 1/2".into()));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn finish_trace(
    kind: CorrelationKind,
    chart: Chart,
    spin: Spin,
    reference: f64,
    peak_at: f64,
    sweep: &[f64],
    overlaps: Vec<f64>,
    closed_form: Vec<f64>,
    sigma_sqr_pred: f64,
) -> Result<CorrelationTrace> {
    let offsets: Vec<f64> = sweep.iter().map(|x| x - peak_at).collect();
    let fit = fit_gaussian_width(&offsets, &overlaps, FIT_THRESHOLD)?;
    Ok(CorrelationTrace {
        kind,
        chart,
        spin_two_j: spin.two_j(),
        reference,
        peak_at,
        sweep: sweep.to_vec(),
        overlaps,
        closed_form,
        fit,
        sigma_sqr_pred,
    })
}

/// `|⟨ξ′|ξ⟩|` for real `ξ = tan Θ`, `ξ′ = tan Θ′` across a sweep of `Θ′`.
/// Closed form: `|cos(Θ′ − Θ)|^{2j}`; predicted width `σ² = 1/(2j)`.
pub fn amplitude_correlation(theta_ref: f64, spin: Spin, sweep: &[f64]) -> Result<CorrelationTrace> {
    amplitude_correlation_in_chart(theta_ref, spin, sweep, Chart::Primary)
}

/// As [`amplitude_correlation`], evaluating the coherent states in the chart
/// `ξ̃ = 1/ξ`. This is the one to use for references at `Θ = π/2`.
pub fn amplitude_correlation_in_chart(
    theta_ref: f64,
    spin: Spin,
    sweep: &[f64],
    chart: Chart,
) -> Result<CorrelationTrace> {
    require_nontrivial(spin)?;
    let to_chart = |theta: f64| match chart {
        Chart::Primary => theta,
        Chart::Antipodal => FRAC_PI_2 - theta,
    };
    if to_chart(theta_ref).cos().abs() < 1e-9 {
        return Err(Error::ChartPole { theta: theta_ref });
    }
    let label = |theta: f64| ReducedLabel::new(Complex64::new(to_chart(theta).tan(), 0.0), spin);
    let reference = label(theta_ref);
    let two_j = spin.two_j() as i32;
    let (overlaps, closed_form): (Vec<f64>, Vec<f64>) = sweep
        .par_iter()
        .map(|&theta| {
            let o = overlap(&label(theta), &reference).expect("same spin").norm();
            (o, (theta - theta_ref).cos().abs().powi(two_j))
        })
        .unzip();
    finish_trace(
        CorrelationKind::AmplitudeRatio,
        chart,
        spin,
        theta_ref,
        theta_ref,
        sweep,
        overlaps,
        closed_form,
        1.0 / f64::from(spin.two_j()),
    )
}

/// Oscillator energies in quanta, `E₁ = 2j|ξ|²/(1+|ξ|²)`, `E₂ = 2j/(1+|ξ|²)`.
pub fn oscillator_energies(xi_mag: f64, spin: Spin) -> (f64, f64) {
    let two_j = f64::from(spin.two_j());
    let denom = 1.0 + xi_mag * xi_mag;
    (two_j * xi_mag * xi_mag / denom, two_j / denom)
}

/// `|⟨ξe^{iδφ}|ξ⟩|` across a sweep of `δφ` at fixed `|ξ|`.
/// Closed form: `|(1+|ξ|²e^{−iδφ})/(1+|ξ|²)|^{2j}`; predicted width `2j/(E₁E₂)`.
pub fn phase_correlation(xi_mag: f64, spin: Spin, sweep: &[f64]) -> Result<CorrelationTrace> {
    require_nontrivial(spin)?;
    if !(xi_mag > 0.0) || !xi_mag.is_finite() {
        return Err(Error::Degenerate("|xi| must be positive and finite to carry phase information"));
    }
    let reference = ReducedLabel::new(Complex64::new(xi_mag, 0.0), spin);
    let rho2 = xi_mag * xi_mag;
    let two_j = spin.two_j() as i32;
    let (overlaps, closed_form): (Vec<f64>, Vec<f64>) = sweep
        .par_iter()
        .map(|&dphi| {
            let bra = ReducedLabel::new(Complex64::from_polar(xi_mag, dphi), spin);
            let o = overlap(&bra, &reference).expect("same spin").norm();
            let closed = ((1.0 + rho2 * Complex64::from_polar(1.0, -dphi)) / (1.0 + rho2))
                .norm()
                .powi(two_j);
            (o, closed)
        })
        .unzip();
    let (e1, e2) = oscillator_energies(xi_mag, spin);
    finish_trace(
        CorrelationKind::Phase,
        Chart::Primary,
        spin,
        xi_mag,
        0.0,
        sweep,
        overlaps,
        closed_form,
        f64::from(spin.two_j()) / (e1 * e2),
    )
}

pub const DEFAULT_SWEEP_POINTS: usize = 201;

/// `Θ′` grid of [`DEFAULT_SWEEP_POINTS`] points spanning ±4 predicted
/// standard deviations (at most ±π/2) around `theta_ref`.
pub fn default_amplitude_sweep(theta_ref: f64, spin: Spin) -> Vec<f64> {
    let sigma = (1.0 / f64::from(spin.two_j())).sqrt();
    symmetric_sweep(theta_ref, (4.0 * sigma).min(FRAC_PI_2), DEFAULT_SWEEP_POINTS)
}

/// `δφ` grid of [`DEFAULT_SWEEP_POINTS`] points spanning ±4 predicted
/// standard deviations (at most ±π) around zero.
pub fn default_phase_sweep(xi_mag: f64, spin: Spin) -> Vec<f64> {
    let (e1, e2) = oscillator_energies(xi_mag, spin);
    let sigma = (f64::from(spin.two_j()) / (e1 * e2)).sqrt();
    let half = if sigma.is_finite() { (4.0 * sigma).min(PI) } else { PI };
    symmetric_sweep(0.0, half, DEFAULT_SWEEP_POINTS)
}

/// `count` evenly spaced points on `[center − half_width, center + half_width]`;
/// for odd `count` the middle point is exactly `center`.
pub fn symmetric_sweep(center: f64, half_width: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![center];
    }
    let last = (count - 1) as f64;
    (0..count)
        .map(|k| center + half_width * (2.0 * k as f64 / last - 1.0))
        .collect()
}
