//! Upper and lower symbols.
//!
//! Upper symbols are coherent-state expectation values. Lower symbols are the
//! weights of diagonal representations; a full-phase-space lower symbol is
//! projected to the reduced phase space by integrating out the radial
//! (constraint) direction and averaging over the gauge orbit.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::coherent::{diagonal_operator, su2_coherent, CoherentLabel, ReducedLabel};
use crate::error::{Error, Result};
use crate::fock::{spin_operators, PhysOperator, Spin};
use crate::quadrature::{GaugeGrid, RadialGrid, SphereGrid};

type FullFn = dyn Fn(Complex64, f64, f64) -> f64 + Send + Sync;
type ReducedFn = dyn Fn(Complex64) -> f64 + Send + Sync;

/// A lower symbol `o(ξ, r, θ)` on the chart coordinates of the full phase space.
///
/// Evaluation functions must be stateless; they are called concurrently.
#[derive(Clone)]
pub struct FullLowerSymbol {
    f: Arc<FullFn>,
    radial_degree: Option<u32>,
}

impl FullLowerSymbol {
    pub fn new(f: impl Fn(Complex64, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            radial_degree: None,
        }
    }

    /// Declares the symbol polynomial of this degree in `r`, which lets
    /// [`radial_grid_for`] choose an exact Gauss–Laguerre order.
    pub fn with_radial_degree(mut self, degree: u32) -> Self {
        self.radial_degree = Some(degree);
        self
    }

    pub fn radial_degree(&self) -> Option<u32> {
        self.radial_degree
    }

    pub fn eval(&self, xi: Complex64, r: f64, theta: f64) -> f64 {
        (self.f)(xi, r, theta)
    }

    pub fn constant(value: f64) -> Self {
        Self::new(move |_, _, _| value).with_radial_degree(0)
    }

    /// `o = r`, the constraint coordinate itself.
    pub fn radius() -> Self {
        Self::new(|_, r, _| r).with_radial_degree(1)
    }

    /// `(α + ᾱ)/√2 = √2 |β| Re(ξ e^{iθ})`.
    pub fn q1_position() -> Self {
        Self::new(|xi, r, theta| {
            let beta_abs = (r / (1.0 + xi.norm_sqr())).sqrt();
            std::f64::consts::SQRT_2 * beta_abs * (xi * Complex64::from_polar(1.0, theta)).re
        })
    }

    /// `(β + β̄)/√2 = √2 |β| cos θ`.
    pub fn q2_position() -> Self {
        Self::new(|xi, r, theta| {
            let beta_abs = (r / (1.0 + xi.norm_sqr())).sqrt();
            std::f64::consts::SQRT_2 * beta_abs * theta.cos()
        })
    }
}

impl fmt::Debug for FullLowerSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FullLowerSymbol")
            .field("radial_degree", &self.radial_degree)
            .finish_non_exhaustive()
    }
}

/// A lower symbol `o′(ξ)` on the reduced phase space.
#[derive(Clone)]
pub struct ReducedLowerSymbol {
    f: Arc<ReducedFn>,
}

impl ReducedLowerSymbol {
    pub fn new(f: impl Fn(Complex64) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f) }
    }

    pub fn eval(&self, xi: Complex64) -> f64 {
        (self.f)(xi)
    }

    pub fn constant(value: f64) -> Self {
        Self::new(move |_| value)
    }
}

impl fmt::Debug for ReducedLowerSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReducedLowerSymbol").finish_non_exhaustive()
    }
}

/// `⟨ξ|O|ξ⟩`.
pub fn upper_symbol(op: &PhysOperator, label: &ReducedLabel) -> Result<Complex64> {
    if op.m_prime() != label.spin.m_prime() {
        return Err(Error::DimensionMismatch {
            expected: label.spin.dim(),
            found: op.dim(),
        });
    }
    op.expectation(&su2_coherent(label))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinSymbols {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl SpinSymbols {
    pub fn as_array(&self) -> [f64; 3] {
        [self.s1, self.s2, self.s3]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3
    }
}

/// The closed-form spin expectation values
/// `s₁ = 2j Re ξ/(1+|ξ|²)`, `s₂ = 2j Im ξ/(1+|ξ|²)`, `s₃ = −j(1−|ξ|²)/(1+|ξ|²)`.
///
/// `s₂` has the opposite sign to `⟨ξ|S₂|ξ⟩` for the Schwinger `S₂` of
/// [`spin_operators`]; see [`spin_symbols_from_matrices`].
pub fn spin_symbols_closed_form(label: &ReducedLabel) -> SpinSymbols {
    let j = label.j();
    let xi = label.xi;
    let denom = 1.0 + xi.norm_sqr();
    SpinSymbols {
        s1: 2.0 * j * xi.re / denom,
        s2: 2.0 * j * xi.im / denom,
        s3: -j * (1.0 - xi.norm_sqr()) / denom,
    }
}

/// Upper symbols of the Schwinger matrices, evaluated as expectation values.
pub fn spin_symbols_from_matrices(label: &ReducedLabel) -> SpinSymbols {
    let ops = spin_operators(label.spin.m_prime());
    let ket = su2_coherent(label);
    let ev = |op: &PhysOperator| op.expectation(&ket).expect("same sector").re;
    SpinSymbols {
        s1: ev(&ops.s1),
        s2: ev(&ops.s2),
        s3: ev(&ops.s3),
    }
}

/// A radial grid exact for the symbol's declared degree, never below the default order.
pub fn radial_grid_for(sym: &FullLowerSymbol, m: u32) -> RadialGrid {
    let order = sym
        .radial_degree()
        .map(|d| (d as usize / 2 + 1).max(RadialGrid::DEFAULT_ORDER))
        .unwrap_or(RadialGrid::DEFAULT_ORDER);
    RadialGrid::new(order, m).expect("order is positive")
}

/// `o′(ξ) = ∫ o(ξ, r, θ) e^{−r} r^{m+1}/(m+1)! dr dθ/2π`, with `m` taken
/// from the radial grid. The gauge average is taken innermost.
pub fn project_lower_symbol(
    sym: &FullLowerSymbol,
    radial: &RadialGrid,
    gauge: &GaugeGrid,
) -> ReducedLowerSymbol {
    let sym = sym.clone();
    let radial = radial.clone();
    let gauge = gauge.clone();
    ReducedLowerSymbol::new(move |xi| {
        radial.integrate(|r| gauge.average(|theta| sym.eval(xi, r, theta)))
    })
}

/// `((2j+1)/π) ∫ o′(ξ) |ξ⟩⟨ξ| d²ξ/(1+|ξ|²)²`.
pub fn reconstruct_operator(sym: &ReducedLowerSymbol, spin: Spin, grid: &SphereGrid) -> PhysOperator {
    diagonal_operator(spin, grid, |xi| sym.eval(xi))
}

/// The lower symbol of `S₃`: `−(j+1)(1−|ξ|²)/(1+|ξ|²)`.
pub fn s3_lower_symbol(spin: Spin) -> ReducedLowerSymbol {
    let k = spin.j() + 1.0;
    ReducedLowerSymbol::new(move |xi| -k * (1.0 - xi.norm_sqr()) / (1.0 + xi.norm_sqr()))
}

/// The `S₃` upper symbol shape, `−j(1−|ξ|²)/(1+|ξ|²)`, used as if it were a lower symbol.
pub fn s3_upper_shape(spin: Spin) -> ReducedLowerSymbol {
    let k = spin.j();
    ReducedLowerSymbol::new(move |xi| -k * (1.0 - xi.norm_sqr()) / (1.0 + xi.norm_sqr()))
}

/// `(β + β̄)/√2`.
pub fn q2_position_symbol(label: &CoherentLabel) -> f64 {
    std::f64::consts::SQRT_2 * label.beta.re
}
