//! Coherent states: the two-mode labels, their projection onto a constraint
//! sector, the gauge/reduced factorization, SU(2) coherent states and their
//! overlap, and diagonal (P-type) operators built over the sphere grid.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{PhysOperator, PhysicalState, Spin};
use crate::quadrature::SphereGrid;
use crate::special::{integer_phase, ln_factorial, ln_gamma};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A point `(α, β)` of the full (two-oscillator) phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentLabel {
    pub alpha: Complex64,
    pub beta: Complex64,
}

/// The chart `(r, θ, ξ)` with `r = |α|²+|β|²`, `e^{iθ} = β/|β|`, `ξ = α/β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartCoordinates {
    pub r: f64,
    pub theta: f64,
    pub xi: Complex64,
}

impl CoherentLabel {
    pub fn new(alpha: Complex64, beta: Complex64) -> Self {
        Self { alpha, beta }
    }

    pub fn r(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }

    pub fn chart(&self) -> Result<ChartCoordinates> {
        if self.beta == ZERO {
            return Err(Error::ChartSingularity("beta"));
        }
        Ok(ChartCoordinates {
            r: self.r(),
            theta: self.beta.arg().rem_euclid(TAU),
            xi: self.alpha / self.beta,
        })
    }

    /// Inverse of [`CoherentLabel::chart`].
    pub fn from_chart(r: f64, theta: f64, xi: Complex64) -> Self {
        let beta_abs = (r / (1.0 + xi.norm_sqr())).sqrt();
        let beta = Complex64::from_polar(beta_abs, theta);
        Self { alpha: xi * beta, beta }
    }

    /// The gauge flow `α → αe^{iθ₀}`, `β → βe^{iθ₀}`.
    pub fn gauge_rotate(&self, theta0: f64) -> Self {
        let phase = Complex64::from_polar(1.0, theta0);
        Self {
            alpha: self.alpha * phase,
            beta: self.beta * phase,
        }
    }
}

/// A point `ξ` of the reduced phase space at spin `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedLabel {
    pub xi: Complex64,
    pub spin: Spin,
}

impl ReducedLabel {
    pub fn new(xi: Complex64, spin: Spin) -> Self {
        Self { xi, spin }
    }

    pub fn j(&self) -> f64 {
        self.spin.j()
    }

    /// `Θ` with `tan Θ = |ξ|`, in `[0, π/2)`.
    pub fn chart_angle(&self) -> f64 {
        self.xi.norm().atan()
    }

    pub fn from_angles(chart_angle: f64, azimuth: f64, spin: Spin) -> Self {
        Self::new(Complex64::from_polar(chart_angle.tan(), azimuth), spin)
    }
}

/// Draws `ξ` uniformly with respect to the sphere measure.
pub fn sample_xi<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    // u in (-1, 1], so 1 + u never vanishes
    let u = 1.0 - 2.0 * rng.gen::<f64>();
    let azimuth: f64 = rng.gen_range(0.0..TAU);
    // tan(ϑ/2) with cos ϑ = u
    let rho = ((1.0 - u) / (1.0 + u)).sqrt();
    Complex64::from_polar(rho, azimuth)
}

/// `|ξ⟩ = (1+|ξ|²)^{−j} Σₙ √C(2j,n) ξⁿ |n, 2j−n⟩`.
///
/// The coefficients are generated by a ratio recurrence anchored at the end
/// of largest modulus (`n = 0` for `|ξ| ≤ 1`, `n = 2j` otherwise), so neither
/// `ξⁿ` nor the prefactor can over- or underflow at the anchor.
pub fn su2_coherent(label: &ReducedLabel) -> PhysicalState {
    let two_j = label.spin.two_j();
    let m = two_j as usize;
    let xi = label.xi;
    let mut amps = DVector::from_element(m + 1, ZERO);
    let norm = 1.0 + xi.norm_sqr();
    if xi.norm() <= 1.0 {
        amps[0] = Complex64::from(norm.powf(-label.j()));
        for n in 0..m {
            let ratio = ((m - n) as f64 / (n + 1) as f64).sqrt();
            amps[n + 1] = amps[n] * xi * ratio;
        }
    } else {
        // (1+|ξ|²)^{−j} ξ^{2j} = (ξ / √(1+|ξ|²))^{2j}
        amps[m] = (xi / norm.sqrt()).powu(two_j);
        for n in (1..=m).rev() {
            let ratio = (n as f64 / (m - n + 1) as f64).sqrt();
            amps[n - 1] = amps[n] / xi * ratio;
        }
    }
    PhysicalState::new(two_j, amps).expect("length is 2j+1")
}

/// The sector-`m′` projection of the two-mode coherent state.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedCoherent {
    /// Unnormalized components `e^{−r/2} αⁿ β^{m′−n} / √(n!(m′−n)!)`.
    pub state: PhysicalState,
    /// `⟨α,β|P|α,β⟩ = e^{−r} r^{m′}/m′!`.
    pub norm_sqr: f64,
    normalized: Option<PhysicalState>,
}

impl ProjectedCoherent {
    /// The unit vector along the projection, computed in log space so it stays
    /// available when the raw components underflow.
    pub fn normalized(&self) -> Result<&PhysicalState> {
        self.normalized
            .as_ref()
            .ok_or(Error::Degenerate("projection of the vacuum onto an excited sector vanishes"))
    }
}

/// Projects `|α, β⟩` onto the `a†a + b†b = m′` sector.
///
/// The Gaussian prefactor is the one of the unprojected state,
/// `e^{−|α|²/2−|β|²/2}`; selecting a sector cannot change it.
pub fn project_coherent(label: &CoherentLabel, m_prime: u32) -> ProjectedCoherent {
    let m = m_prime as usize;
    let r = label.r();
    let (ln_a, ln_b) = (label.alpha.norm().ln(), label.beta.norm().ln());
    let (arg_a, arg_b) = (label.alpha.arg(), label.beta.arg());
    let power = |k: usize, ln_z: f64| if k == 0 { 0.0 } else { k as f64 * ln_z };

    let mut ln_mag = Vec::with_capacity(m + 1);
    let mut phase = Vec::with_capacity(m + 1);
    for n in 0..=m {
        ln_mag.push(
            power(n, ln_a) + power(m - n, ln_b)
                - 0.5 * (ln_factorial(n as u64) + ln_factorial((m - n) as u64)),
        );
        phase.push(integer_phase(&[(n as u32, arg_a), ((m - n) as u32, arg_b)]));
    }

    let raw = DVector::from_fn(m + 1, |n, _| {
        Complex64::from_polar((ln_mag[n] - 0.5 * r).exp(), phase[n])
    });
    let ln_norm_sqr = -r + power(m, r.ln()) - ln_factorial(m as u64);

    let peak = ln_mag.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let normalized = if peak.is_finite() {
        let shifted = DVector::from_fn(m + 1, |n, _| {
            Complex64::from_polar((ln_mag[n] - peak).exp(), phase[n])
        });
        let norm = shifted.norm();
        Some(PhysicalState::new(m_prime, shifted.unscale(norm)).expect("length is m'+1"))
    } else {
        None
    };

    ProjectedCoherent {
        state: PhysicalState::new(m_prime, raw).expect("length is m'+1"),
        norm_sqr: ln_norm_sqr.exp(),
        normalized,
    }
}

/// The gauge angle and reduced label of a two-mode label in sector `m′`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeFactoring {
    pub theta: f64,
    pub reduced: ReducedLabel,
}

impl GaugeFactoring {
    /// `e^{i m′ θ}`, the phase the normalized projection carries relative to `|ξ⟩`.
    pub fn phase_factor(&self) -> Complex64 {
        Complex64::from_polar(1.0, integer_phase(&[(self.reduced.spin.m_prime(), self.theta)]))
    }

    /// `e^{i m′ θ} |ξ⟩`.
    pub fn physical_state(&self) -> PhysicalState {
        su2_coherent(&self.reduced).scale(self.phase_factor())
    }
}

pub fn factor_gauge_phase(label: &CoherentLabel, m_prime: u32) -> Result<GaugeFactoring> {
    let chart = label.chart()?;
    Ok(GaugeFactoring {
        theta: chart.theta,
        reduced: ReducedLabel::new(chart.xi, Spin::from_m_prime(m_prime)),
    })
}

/// `⟨ξ′|ξ⟩ = (1+|ξ′|²)^{−j}(1+|ξ|²)^{−j}(1+ξ̄′ξ)^{2j}` for `bra = ξ′`, `ket = ξ`.
pub fn overlap(bra: &ReducedLabel, ket: &ReducedLabel) -> Result<Complex64> {
    if bra.spin != ket.spin {
        return Err(Error::SpinMismatch {
            left: bra.spin.two_j(),
            right: ket.spin.two_j(),
        });
    }
    let base = (1.0 + bra.xi.conj() * ket.xi)
        / ((1.0 + bra.xi.norm_sqr()).sqrt() * (1.0 + ket.xi.norm_sqr()).sqrt());
    Ok(base.powu(bra.spin.two_j()))
}

/// `((2j+1)/π) Σ wᵢ f(ξᵢ) |ξᵢ⟩⟨ξᵢ|` over the grid, accumulated in node order.
pub fn diagonal_operator(spin: Spin, grid: &SphereGrid, symbol: impl Fn(Complex64) -> f64) -> PhysOperator {
    let dim = spin.dim();
    let mut acc = DMatrix::from_element(dim, dim, ZERO);
    for node in grid.nodes() {
        let coeff = node.weight * symbol(node.xi);
        if coeff == 0.0 {
            continue;
        }
        let ket = su2_coherent(&ReducedLabel::new(node.xi, spin)).into_amplitudes();
        for col in 0..dim {
            let bra = ket[col].conj() * coeff;
            for row in 0..dim {
                acc[(row, col)] += ket[row] * bra;
            }
        }
    }
    let prefactor = (f64::from(spin.two_j()) + 1.0) / PI;
    let mut op = PhysOperator::zeros(spin.m_prime());
    *op.matrix_mut() = acc.map(|z| z * prefactor);
    op
}

/// `((2j+1)/π) ∫ |ξ⟩⟨ξ| d²ξ/(1+|ξ|²)²`, which should be the identity.
pub fn resolution_of_unity(spin: Spin, grid: &SphereGrid) -> PhysOperator {
    diagonal_operator(spin, grid, |_| 1.0)
}

/// `e^{−r} r^{m+1}/(m+1)!`, the radial weight left after projecting onto sector `m`.
pub fn radial_weight(r: f64, m: u32) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let k = f64::from(m) + 1.0;
    (-r + k * r.ln() - ln_gamma(k + 1.0)).exp()
}

/// The Gaussian the radial weight approaches: mean and variance `m+1`.
pub fn radial_weight_gaussian(r: f64, m: u32) -> f64 {
    let k = f64::from(m) + 1.0;
    (-(r - k).powi(2) / (2.0 * k)).exp() / (TAU * k).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::TwoModeSpace;
    use crate::quadrature::gauss_legendre;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn binomial(n: u64, k: u64) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    #[test]
    fn su2_examples() {
        for two_j in [0u32, 1, 4, 9] {
            let s = su2_coherent(&ReducedLabel::new(ZERO, Spin::from_two_j(two_j)));
            assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
            assert!((s.norm() - 1.0).abs() < 1e-15);
        }
        let s = su2_coherent(&ReducedLabel::new(c(1.0, 0.0), Spin::from_two_j(1)));
        assert!((s.amplitudes()[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((s.amplitudes()[1] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn su2_matches_direct_binomial_formula() {
        // ξ = 2+i, j = 3/2, straight evaluation of the closed form.
        let xi = c(2.0, 1.0);
        let s = su2_coherent(&ReducedLabel::new(xi, Spin::from_two_j(3)));
        let pre = (1.0 + xi.norm_sqr()).powf(-1.5);
        for n in 0..=3u64 {
            let direct = xi.powu(n as u32) * binomial(3, n).sqrt() * pre;
            assert!((s.amplitudes()[n as usize] - direct).norm() < 1e-15);
        }
        assert!((s.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn su2_large_spin_large_xi_stays_finite() {
        let s = su2_coherent(&ReducedLabel::new(c(300.0, -40.0), Spin::from_two_j(800)));
        assert!(s.amplitudes().iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projection_examples() {
        let p = project_coherent(&CoherentLabel::new(ZERO, c(1.0, 0.0)), 2);
        assert!(p.state.amplitudes()[1].norm() == 0.0 && p.state.amplitudes()[2].norm() == 0.0);
        assert!(p.state.amplitudes()[0].norm() > 0.0);

        let label = CoherentLabel::new(c(0.3, -0.8), c(1.1, 0.2));
        let p = project_coherent(&label, 0);
        assert!((p.norm_sqr - (-label.r()).exp()).abs() < 1e-15);
        assert!((p.state.norm().powi(2) - p.norm_sqr).abs() < 1e-15);

        let p = project_coherent(&CoherentLabel::new(c(1.0, 0.0), c(1.0, 0.0)), 2);
        assert!((p.norm_sqr - 2.0 * (-2.0f64).exp()).abs() < 1e-15);
        let target = su2_coherent(&ReducedLabel::new(c(1.0, 0.0), Spin::from_two_j(2)));
        assert!(p.normalized().unwrap().max_abs_diff(&target) < 1e-15);
    }

    #[test]
    fn projection_of_vacuum_onto_excited_sector_is_degenerate() {
        let p = project_coherent(&CoherentLabel::new(ZERO, ZERO), 3);
        assert!(p.normalized().is_err());
        assert_eq!(p.norm_sqr, 0.0);
        let p = project_coherent(&CoherentLabel::new(ZERO, ZERO), 0);
        assert_eq!(p.norm_sqr, 1.0);
    }

    #[test]
    fn projection_agrees_with_truncated_two_mode_state() {
        let label = CoherentLabel::new(c(0.8, 0.5), c(-0.4, 1.3));
        for m_prime in [0u32, 1, 4, 9] {
            let space = TwoModeSpace::new(crate::fock::default_cutoff(m_prime));
            let full = space.coherent(label.alpha, label.beta);
            let sector = space.restrict(&space.select_sector(&full, m_prime), m_prime).unwrap();
            let p = project_coherent(&label, m_prime);
            assert!(sector.max_abs_diff(&p.state) < 1e-14, "m'={m_prime}");
        }
    }

    #[test]
    fn gauge_factoring_examples() {
        let f = factor_gauge_phase(&CoherentLabel::new(ZERO, c(0.0, 1.0)), 1).unwrap();
        assert!((f.theta - PI / 2.0).abs() < 1e-15);
        assert_eq!(f.reduced.xi, ZERO);
        assert!((f.phase_factor() - c(0.0, 1.0)).norm() < 1e-15);

        let label = CoherentLabel::new(c(1.0, 1.0), c(2.0, 0.0));
        let f = factor_gauge_phase(&label, 3).unwrap();
        assert_eq!(f.theta, 0.0);
        assert!((f.reduced.xi - c(0.5, 0.5)).norm() < 1e-16);
        let p = project_coherent(&label, 3);
        assert!(p.normalized().unwrap().max_abs_diff(&f.physical_state()) < 1e-12);

        assert_eq!(
            factor_gauge_phase(&CoherentLabel::new(c(1.0, 0.0), ZERO), 2),
            Err(Error::ChartSingularity("beta"))
        );
    }

    #[test]
    fn gauge_shift_moves_theta_only() {
        let label = CoherentLabel::new(c(0.4, -0.1), c(0.9, 0.3));
        let theta0 = 0.77;
        let a = factor_gauge_phase(&label, 5).unwrap();
        let b = factor_gauge_phase(&label.gauge_rotate(theta0), 5).unwrap();
        assert!(((b.theta - a.theta) - theta0).abs() < 1e-14);
        assert!((b.reduced.xi - a.reduced.xi).norm() < 1e-15);
        let pa = project_coherent(&label, 5);
        let pb = project_coherent(&label.gauge_rotate(theta0), 5);
        let expected = pa.state.scale(Complex64::from_polar(1.0, 5.0 * theta0));
        assert!(pb.state.max_abs_diff(&expected) < 1e-13);
    }

    #[test]
    fn overlap_examples() {
        let spin = Spin::from_two_j(7);
        let a = ReducedLabel::new(c(0.3, 0.9), spin);
        assert!((overlap(&a, &a).unwrap() - c(1.0, 0.0)).norm() < 1e-15);

        let s = Spin::from_two_j(1);
        let z = overlap(&ReducedLabel::new(c(1.0, 0.0), s), &ReducedLabel::new(ZERO, s)).unwrap();
        let explicit = su2_coherent(&ReducedLabel::new(c(1.0, 0.0), s))
            .inner(&su2_coherent(&ReducedLabel::new(ZERO, s)))
            .unwrap();
        assert!((z - explicit).norm() < 1e-15);
        assert!((z.norm() - FRAC_1_SQRT_2).abs() < 1e-15);

        assert!(matches!(
            overlap(&ReducedLabel::new(ZERO, s), &ReducedLabel::new(ZERO, spin)),
            Err(Error::SpinMismatch { .. })
        ));
    }

    #[test]
    fn overlap_real_labels_is_cos_power() {
        for two_j in [2u32, 10, 20] {
            let spin = Spin::from_two_j(two_j);
            for (t, tp) in [(0.3, 0.5), (1.2, 0.1), (0.7, 0.7), (0.0, 1.4)] {
                let a = ReducedLabel::new(c(f64::tan(t), 0.0), spin);
                let b = ReducedLabel::new(c(f64::tan(tp), 0.0), spin);
                let explicit = su2_coherent(&b).inner(&su2_coherent(&a)).unwrap();
                let closed = overlap(&b, &a).unwrap();
                let cos_power = f64::cos(tp - t).powi(two_j as i32);
                assert!((explicit - closed).norm() < 1e-12);
                assert!((closed.re - cos_power).abs() < 1e-12 && closed.im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn resolution_of_unity_small_spins() {
        let one = resolution_of_unity(Spin::from_two_j(0), &SphereGrid::for_spin(Spin::from_two_j(0)));
        assert!((one.matrix()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-14);
        for two_j in [1u32, 2, 4, 10, 20] {
            let spin = Spin::from_two_j(two_j);
            let id = resolution_of_unity(spin, &SphereGrid::for_spin(spin));
            assert!(id.max_abs_diff(&PhysOperator::identity(two_j)) < 1e-12, "2j={two_j}");
        }
    }

    #[test]
    fn under_resolved_grid_breaks_unity() {
        let spin = Spin::from_two_j(20);
        let grid = SphereGrid::for_spin_with_order(spin, 2).unwrap();
        let id = resolution_of_unity(spin, &grid);
        assert!(id.max_abs_diff(&PhysOperator::identity(20)) > 1e-3);
    }

    #[test]
    fn radial_weight_normalization_and_peak() {
        // Normalization by Gauss–Legendre on a generous window around the peak.
        for m in [0u32, 5, 50] {
            let hi = f64::from(m) + 60.0 + 12.0 * f64::from(m + 1).sqrt();
            let (x, w) = gauss_legendre(400);
            let total: f64 = x
                .iter()
                .zip(&w)
                .map(|(t, w)| 0.5 * hi * w * radial_weight(0.5 * hi * (t + 1.0), m))
                .sum();
            assert!((total - 1.0).abs() < 1e-12, "m={m} total={total}");
        }
        for m in [0u32, 10, 100] {
            let peak = f64::from(m) + 1.0;
            let at = radial_weight(peak, m);
            assert!(at > radial_weight(peak - 1e-3, m));
            assert!(at > radial_weight(peak + 1e-3, m));
        }
    }

    #[test]
    fn radial_weight_approaches_gaussian() {
        let sup = |m: u32| {
            let k = f64::from(m) + 1.0;
            (0..=4000)
                .map(|i| k + (f64::from(i) / 4000.0 - 0.5) * 20.0 * k.sqrt())
                .filter(|&r| r > 0.0)
                .map(|r| (radial_weight(r, m) - radial_weight_gaussian(r, m)).abs())
                .fold(0.0, f64::max)
        };
        let d: Vec<f64> = [10u32, 40, 160].iter().map(|&m| sup(m)).collect();
        assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
    }

    #[test]
    fn sampled_labels_cover_both_hemispheres() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<Complex64> = (0..200).map(|_| sample_xi(&mut rng)).collect();
        assert!(xs.iter().any(|z| z.norm() > 1.0));
        assert!(xs.iter().any(|z| z.norm() < 1.0));
    }
}
