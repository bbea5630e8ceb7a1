//! Coherent-state quantization of the time-reparameterization-invariant
//! double harmonic oscillator.
//!
//! The constraint `a†a + b†b = m′` selects a `(m′+1)`-dimensional physical
//! sector on which the Schwinger bilinears act as spin `j = m′/2`. Two-mode
//! coherent states project onto SU(2) coherent states `|ξ⟩` with `ξ = α/β`,
//! and operators defined by lower symbols on the full phase space project to
//! diagonal representations on the reduced sphere. Conditioning oscillator 1
//! on the phase of oscillator 2 yields a clock operator whose classical limit
//! is the oscillator trajectory.
//!
//! Modules, bottom-up:
//! - [`classical`]: closed-form classical solution, used as the reference.
//! - [`fock`]: sectors, ladder action, spin operators.
//! - [`coherent`]: projection, gauge factoring, `|ξ⟩`, overlaps, resolution of unity.
//! - [`symbols`]: upper/lower symbols and operator reconstruction.
//! - [`clock`]: the clock symbol/operator and correlation widths.
//! - [`cli`]: the command-line driver behind the `coherent-clock` binary.

// `!(x > 0.0)` is how parameter checks reject NaN along with the bad range
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod cli;
pub mod clock;
pub mod coherent;
pub mod error;
pub mod fit;
pub mod fock;
pub mod quadrature;
pub mod special;
pub mod symbols;

pub use classical::{ClassicalConfig, Units};
pub use coherent::{CoherentLabel, ReducedLabel};
pub use error::{Error, Result};
pub use fock::{PhysOperator, PhysicalState, Spin};
pub use num_complex::Complex64;
pub use quadrature::{GaugeGrid, RadialGrid, SphereGrid};
