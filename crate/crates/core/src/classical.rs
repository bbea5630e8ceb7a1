//! Closed-form classical solution of the constrained double oscillator.
//! Serves as the reference for every classical-limit comparison.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `ħ` and `ω`; both default to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub hbar: f64,
    pub omega: f64,
}

impl Default for Units {
    fn default() -> Self {
        Self { hbar: 1.0, omega: 1.0 }
    }
}

/// Relative tolerance for on-shell checks of [`ClassicalConfig::constraint_residual`].
pub const ON_SHELL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalConfig {
    pub a: f64,
    pub b: f64,
    pub phi: f64,
    pub phi_prime: f64,
    pub omega: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub q1: f64,
    pub p1: f64,
    pub q2: f64,
    pub p2: f64,
}

impl ClassicalConfig {
    pub fn new(a: f64, b: f64, phi: f64, phi_prime: f64, omega: f64, energy: f64) -> Result<Self> {
        if !(a >= 0.0 && b >= 0.0) {
            return Err(Error::InvalidParameter(format!("amplitudes must be nonnegative, got A={a}, B={b}")));
        }
        if !(omega > 0.0) {
            return Err(Error::InvalidParameter(format!("omega must be positive, got {omega}")));
        }
        Ok(Self { a, b, phi, phi_prime, omega, energy })
    }

    /// On-shell configuration for sector `m′`: `E = ħω(m′+1)`, amplitudes split
    /// so that `A/B = |ξ|` and `(Aω)² + (Bω)² = E`, and `φ − φ′ = arg ξ`.
    pub fn on_shell_from_label(xi: Complex64, m_prime: u32, phi_prime: f64, units: Units) -> Self {
        let energy = units.hbar * units.omega * (f64::from(m_prime) + 1.0);
        let total = (energy).sqrt() / units.omega;
        let norm = (1.0 + xi.norm_sqr()).sqrt();
        Self {
            a: total * xi.norm() / norm,
            b: total / norm,
            phi: phi_prime + xi.arg(),
            phi_prime,
            omega: units.omega,
            energy,
        }
    }

    pub fn trajectory(&self, tau: f64) -> PhasePoint {
        let w = self.omega;
        let (s1, c1) = (w * tau + self.phi).sin_cos();
        let (s2, c2) = (w * tau + self.phi_prime).sin_cos();
        PhasePoint {
            q1: self.a * c1,
            p1: self.a * w * s1,
            q2: self.b * c2,
            p2: self.b * w * s2,
        }
    }

    /// `(Aω)² + (Bω)² − E`, taken literally from the amplitude constraint.
    ///
    /// Note the energy function itself carries factors of ½, so the amplitudes
    /// here are √2 smaller than those that put `½(p²+ω²q²)` summed equal to `E`.
    pub fn constraint_residual(&self) -> f64 {
        (self.a * self.omega).powi(2) + (self.b * self.omega).powi(2) - self.energy
    }

    pub fn is_on_shell(&self) -> bool {
        self.constraint_residual().abs() <= ON_SHELL_TOLERANCE * self.energy.abs().max(1.0)
    }

    pub fn phase_difference(&self) -> f64 {
        self.phi - self.phi_prime
    }

    /// `ξ = (A/B) e^{i(φ−φ′)}`, the gauge-invariant label of the orbit.
    pub fn reduced_coordinate(&self) -> Result<Complex64> {
        if self.b == 0.0 {
            return Err(Error::ChartSingularity("B"));
        }
        Ok(Complex64::from_polar(self.a / self.b, self.phase_difference()))
    }

    /// Shifts both phases by the same amount, i.e. a reparameterization.
    pub fn gauge_shift(&self, delta: f64) -> Self {
        Self {
            phi: self.phi + delta,
            phi_prime: self.phi_prime + delta,
            ..*self
        }
    }

    /// `q₁ = A cos(cos⁻¹(q₂/B) − φ′ + φ)` on the principal branch of cos⁻¹,
    /// i.e. valid on the half-periods where `ωτ + φ′ ∈ [0, π] (mod 2π)`.
    pub fn clock_readout(&self, q2: f64) -> Result<f64> {
        if self.b == 0.0 {
            return Err(Error::ChartSingularity("B"));
        }
        if q2.abs() > self.b {
            return Err(Error::ClockOutOfRange { q2, amplitude: self.b });
        }
        Ok(self.a * ((q2 / self.b).acos() - self.phi_prime + self.phi).cos())
    }

    /// `½(p₁²+ω²q₁²) + ½(p₂²+ω²q₂²)` along the trajectory.
    pub fn oscillator_energy(&self, point: &PhasePoint) -> f64 {
        let w2 = self.omega * self.omega;
        0.5 * (point.p1 * point.p1 + w2 * point.q1 * point.q1)
            + 0.5 * (point.p2 * point.p2 + w2 * point.q2 * point.q2)
    }
}
