//! Quadrature rules: Gauss–Legendre, normalized generalized Gauss–Laguerre,
//! the sphere grid behind the SU(2) resolution of unity, and the uniform
//! gauge-orbit grid.
//!
//! All reductions over a grid run in node order so that results are
//! bit-reproducible.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::Spin;

/// Gauss–Legendre nodes and weights on [-1, 1], ascending.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Generalized Gauss–Laguerre rule for the weight `r^alpha e^{-r}`, with the
/// weights rescaled to sum to one (Golub–Welsch; the first eigenvector
/// components squared are already the normalized weights, so Gamma(alpha+1)
/// never has to be formed).
pub fn gauss_laguerre_normalized(order: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let jacobi = DMatrix::from_fn(n, n, |i, k| {
        if i == k {
            2.0 * i as f64 + alpha + 1.0
        } else if i + 1 == k || k + 1 == i {
            let m = i.max(k) as f64;
            (m * (m + alpha)).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    pairs.into_iter().map(|(x, w)| (x, w / total)).unzip()
}

/// A node of the sphere grid. `chart_angle` is Θ with tan Θ = |ξ|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereNode {
    pub chart_angle: f64,
    pub azimuth: f64,
    pub xi: Complex64,
    pub weight: f64,
}

/// Quadrature for `∫ f(ξ) d²ξ / (1+|ξ|²)²` over the whole chart.
///
/// With `x = cos Θ = (1+|ξ|²)^{-1/2}` the measure becomes `x dx dφ` on
/// `[0,1] × [0,2π)`. Matrix elements of `|ξ⟩⟨ξ|` (and of the clock symbol
/// times it) are polynomials in `x` times trigonometric polynomials in φ,
/// so Gauss–Legendre in `x` with a uniform trapezoid in φ is exact once the
/// orders cover the degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    nodes: Vec<SphereNode>,
    polar_order: usize,
    azimuth_count: usize,
}

impl SphereGrid {
    pub fn new(polar_order: usize, azimuth_count: usize) -> Result<Self> {
        if polar_order == 0 || azimuth_count == 0 {
            return Err(Error::InvalidParameter(
                "sphere grid orders must be positive".into(),
            ));
        }
        let (t, w) = gauss_legendre(polar_order);
        let dphi = 2.0 * PI / azimuth_count as f64;
        let mut nodes = Vec::with_capacity(polar_order * azimuth_count);
        for (&t, &w) in t.iter().zip(&w) {
            let x = 0.5 * (t + 1.0);
            let radial_weight = 0.5 * w * x * dphi;
            let rho = ((1.0 - x) * (1.0 + x)).sqrt() / x;
            let chart_angle = x.acos();
            for k in 0..azimuth_count {
                let azimuth = dphi * k as f64;
                nodes.push(SphereNode {
                    chart_angle,
                    azimuth,
                    xi: Complex64::from_polar(rho, azimuth),
                    weight: radial_weight,
                });
            }
        }
        Ok(Self {
            nodes,
            polar_order,
            azimuth_count,
        })
    }

    /// Exact-degree grid for operators on spin `j`: polar order `2j + 2`,
    /// `4j + 2` azimuth points.
    pub fn for_spin(spin: Spin) -> Self {
        let two_j = spin.two_j() as usize;
        Self::new(two_j + 2, 2 * two_j + 2).expect("orders are positive")
    }

    /// Same as [`SphereGrid::for_spin`] but with the polar order overridden.
    pub fn for_spin_with_order(spin: Spin, polar_order: usize) -> Result<Self> {
        Self::new(polar_order, 2 * spin.two_j() as usize + 2)
    }

    pub fn nodes(&self) -> &[SphereNode] {
        &self.nodes
    }

    pub fn polar_order(&self) -> usize {
        self.polar_order
    }

    pub fn azimuth_count(&self) -> usize {
        self.azimuth_count
    }

    /// Should equal π.
    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }
}

/// Radial rule for `∫₀^∞ f(r) e^{-r} r^{m+1}/(m+1)! dr`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    m: u32,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialGrid {
    pub const DEFAULT_ORDER: usize = 32;

    pub fn new(order: usize, m: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("radial order must be positive".into()));
        }
        let (nodes, weights) = gauss_laguerre_normalized(order, f64::from(m) + 1.0);
        Ok(Self { m, nodes, weights })
    }

    pub fn with_default_order(m: u32) -> Self {
        Self::new(Self::DEFAULT_ORDER, m).expect("default order is positive")
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(r, w)| w * f(r)).sum()
    }
}

/// Uniform trapezoid over the gauge orbit, normalized to `dθ/2π`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeGrid {
    angles: Vec<f64>,
}

impl GaugeGrid {
    pub const DEFAULT_COUNT: usize = 256;

    pub fn new(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidParameter("gauge grid needs at least one point".into()));
        }
        let step = 2.0 * PI / count as f64;
        Ok(Self {
            angles: (0..count).map(|k| step * k as f64).collect(),
        })
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn average(&self, f: impl Fn(f64) -> f64) -> f64 {
        let sum: f64 = self.angles.iter().map(|&t| f(t)).sum();
        sum / self.angles.len() as f64
    }
}

impl Default for GaugeGrid {
    fn default() -> Self {
        Self::new(Self::DEFAULT_COUNT).expect("default count is positive")
    }
}
