//! The truncated two-mode Fock space, its constraint sectors, and the
//! Schwinger spin operators acting on a single sector.
//!
//! A physical sector with `m′` total quanta is spanned by `|n, m′−n⟩`,
//! `n = 0..=m′`, stored at index `n`.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::classical::Units;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A spin `j`, stored as the integer `2j = m′`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Spin(u32);

impl Spin {
    pub const fn from_two_j(two_j: u32) -> Self {
        Spin(two_j)
    }

    /// The physical sector with `m′` quanta carries spin `j = m′/2`.
    pub const fn from_m_prime(m_prime: u32) -> Self {
        Spin(m_prime)
    }

    /// Rounds `j` to the nearest half-integer; rejects negative or non-half-integer input.
    pub fn from_j(j: f64) -> Result<Self> {
        let two_j = 2.0 * j;
        if !(two_j >= 0.0) || (two_j - two_j.round()).abs() > 1e-9 || two_j > f64::from(u32::MAX) {
            return Err(Error::InvalidParameter(format!("j = {j} is not a nonnegative half-integer")));
        }
        Ok(Spin(two_j.round() as u32))
    }

    pub const fn two_j(self) -> u32 {
        self.0
    }

    pub const fn m_prime(self) -> u32 {
        self.0
    }

    pub fn j(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn dim(self) -> usize {
        self.0 as usize + 1
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Orthonormal basis `|n, m′−n⟩` of the constraint sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhysicalBasis {
    pub m_prime: u32,
}

impl PhysicalBasis {
    pub fn new(m_prime: u32) -> Self {
        Self { m_prime }
    }

    pub fn dim(&self) -> usize {
        self.m_prime as usize + 1
    }

    /// Occupation numbers `(n_a, n_b)` of basis vector `n`.
    pub fn occupations(&self, n: usize) -> (u32, u32) {
        let n = n as u32;
        (n, self.m_prime - n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.dim()).map(|n| self.occupations(n))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalState {
    m_prime: u32,
    amplitudes: DVector<Complex64>,
}

impl PhysicalState {
    pub fn new(m_prime: u32, amplitudes: DVector<Complex64>) -> Result<Self> {
        let expected = m_prime as usize + 1;
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: amplitudes.len(),
            });
        }
        Ok(Self { m_prime, amplitudes })
    }

    pub fn basis_vector(m_prime: u32, n: usize) -> Self {
        let mut amplitudes = DVector::from_element(m_prime as usize + 1, ZERO);
        amplitudes[n] = ONE;
        Self { m_prime, amplitudes }
    }

    pub fn m_prime(&self) -> u32 {
        self.m_prime
    }

    pub fn spin(&self) -> Spin {
        Spin::from_m_prime(self.m_prime)
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Degenerate("cannot normalize a zero or non-finite state"));
        }
        Ok(Self {
            m_prime: self.m_prime,
            amplitudes: self.amplitudes.unscale(norm),
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PhysicalState) -> Result<Complex64> {
        if self.m_prime != other.m_prime {
            return Err(Error::SpinMismatch {
                left: self.m_prime,
                right: other.m_prime,
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            m_prime: self.m_prime,
            amplitudes: self.amplitudes.map(|c| c * factor),
        }
    }

    pub fn max_abs_diff(&self, other: &PhysicalState) -> f64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// A dense operator on one constraint sector.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysOperator {
    m_prime: u32,
    entries: DMatrix<Complex64>,
}

impl PhysOperator {
    pub fn new(m_prime: u32, entries: DMatrix<Complex64>) -> Result<Self> {
        let dim = m_prime as usize + 1;
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: entries.nrows().max(entries.ncols()),
            });
        }
        Ok(Self { m_prime, entries })
    }

    pub fn zeros(m_prime: u32) -> Self {
        let dim = m_prime as usize + 1;
        Self {
            m_prime,
            entries: DMatrix::from_element(dim, dim, ZERO),
        }
    }

    pub fn identity(m_prime: u32) -> Self {
        let dim = m_prime as usize + 1;
        Self {
            m_prime,
            entries: DMatrix::identity(dim, dim),
        }
    }

    pub fn m_prime(&self) -> u32 {
        self.m_prime
    }

    pub fn spin(&self) -> Spin {
        Spin::from_m_prime(self.m_prime)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut DMatrix<Complex64> {
        &mut self.entries
    }

    pub fn apply(&self, state: &PhysicalState) -> Result<PhysicalState> {
        self.check_same(state.m_prime)?;
        Ok(PhysicalState {
            m_prime: self.m_prime,
            amplitudes: &self.entries * &state.amplitudes,
        })
    }

    /// `⟨ψ|O|ψ⟩`.
    pub fn expectation(&self, state: &PhysicalState) -> Result<Complex64> {
        self.check_same(state.m_prime)?;
        Ok(state.amplitudes.dotc(&(&self.entries * &state.amplitudes)))
    }

    pub fn adjoint(&self) -> Self {
        Self {
            m_prime: self.m_prime,
            entries: self.entries.adjoint(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            m_prime: self.m_prime,
            entries: self.entries.map(|c| c * factor),
        }
    }

    pub fn add(&self, other: &PhysOperator) -> Result<Self> {
        self.check_same(other.m_prime)?;
        Ok(Self {
            m_prime: self.m_prime,
            entries: &self.entries + &other.entries,
        })
    }

    pub fn sub(&self, other: &PhysOperator) -> Result<Self> {
        self.check_same(other.m_prime)?;
        Ok(Self {
            m_prime: self.m_prime,
            entries: &self.entries - &other.entries,
        })
    }

    pub fn mul(&self, other: &PhysOperator) -> Result<Self> {
        self.check_same(other.m_prime)?;
        Ok(Self {
            m_prime: self.m_prime,
            entries: &self.entries * &other.entries,
        })
    }

    /// `[self, other]`.
    /// `AB − BA`, each entry accumulated with compensated products and sums
    /// so that the cancellation between the two halves costs no accuracy.
    pub fn commutator(&self, other: &PhysOperator) -> Result<Self> {
        self.check_same(other.m_prime)?;
        let (a, b) = (&self.entries, &other.entries);
        let n = a.nrows();
        let entries = DMatrix::from_fn(n, n, |i, j| {
            let mut re = CompensatedSum::default();
            let mut im = CompensatedSum::default();
            for k in 0..n {
                for (x, y, sign) in [(a[(i, k)], b[(k, j)], 1.0), (b[(i, k)], a[(k, j)], -1.0)] {
                    re.add_product(sign * x.re, y.re);
                    re.add_product(-sign * x.im, y.im);
                    im.add_product(sign * x.re, y.im);
                    im.add_product(sign * x.im, y.re);
                }
            }
            Complex64::new(re.value(), im.value())
        });
        Ok(Self {
            m_prime: self.m_prime,
            entries,
        })
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &PhysOperator) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.norm()
    }

    /// `max |O − O†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for k in i..n {
                worst = worst.max((self.entries[(i, k)] - self.entries[(k, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.entries + self.entries.adjoint()).unscale(2.0);
        let mut values: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }

    fn check_same(&self, m_prime: u32) -> Result<()> {
        if self.m_prime != m_prime {
            return Err(Error::SpinMismatch {
                left: self.m_prime,
                right: m_prime,
            });
        }
        Ok(())
    }
}

/// Maps an energy to its constraint sector: `E′ = E/(ħω) − 1` must sit within
/// `tol` of a nonnegative integer, which is returned as `m′`.
/// Dot2-style accumulator: error-free products via FMA, error-free sums via TwoSum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    err: f64,
}

impl CompensatedSum {
    fn add_product(&mut self, x: f64, y: f64) {
        if x == 0.0 || y == 0.0 {
            return;
        }
        let p = x * y;
        let p_err = x.mul_add(y, -p);
        let s = self.sum + p;
        let z = s - self.sum;
        let s_err = (self.sum - (s - z)) + (p - z);
        self.sum = s;
        self.err += p_err + s_err;
    }

    fn value(&self) -> f64 {
        self.sum + self.err
    }
}

pub fn constraint_eigencheck(energy: f64, units: Units, tol: f64) -> Result<u32> {
    if !(energy > 0.0) {
        return Err(Error::InvalidParameter(format!("energy must be positive, got {energy}")));
    }
    let e_prime = energy / (units.hbar * units.omega) - 1.0;
    let nearest = e_prime.round();
    let residual = (e_prime - nearest).abs();
    if residual >= tol || nearest < 0.0 {
        return Err(Error::NullSubspace {
            residual: if nearest < 0.0 { e_prime.abs() } else { residual },
        });
    }
    Ok(nearest as u32)
}

/// Schwinger generators restricted to one sector.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperators {
    pub s1: PhysOperator,
    pub s2: PhysOperator,
    pub s3: PhysOperator,
}

impl SpinOperators {
    pub fn as_array(&self) -> [&PhysOperator; 3] {
        [&self.s1, &self.s2, &self.s3]
    }
}

/// `S₁ = ½(a†b + ab†)`, `S₂ = (1/2i)(a†b − ab†)`, `S₃ = ½(a†a − b†b)`.
pub fn spin_operators(m_prime: u32) -> SpinOperators {
    let dim = m_prime as usize + 1;
    // a†b |n, m′−n⟩ = √((n+1)(m′−n)) |n+1, m′−n−1⟩
    let raise = DMatrix::from_fn(dim, dim, |row, col| {
        if row == col + 1 {
            let n = col as f64;
            Complex64::from(((n + 1.0) * (f64::from(m_prime) - n)).sqrt())
        } else {
            ZERO
        }
    });
    let lower = raise.adjoint();
    let s1 = (&raise + &lower).unscale(2.0);
    let s2 = (&raise - &lower) * Complex64::new(0.0, -0.5);
    let half = f64::from(m_prime) / 2.0;
    let s3 = DMatrix::from_diagonal(&DVector::from_fn(dim, |n, _| {
        Complex64::from(n as f64 - half)
    }));
    SpinOperators {
        s1: PhysOperator { m_prime, entries: s1 },
        s2: PhysOperator { m_prime, entries: s2 },
        s3: PhysOperator { m_prime, entries: s3 },
    }
}

/// `S₁² + S₂² + S₃²`; equals `j(j+1)·I`.
pub fn casimir(m_prime: u32) -> PhysOperator {
    let ops = spin_operators(m_prime);
    let sq = |s: &PhysOperator| &s.entries * &s.entries;
    PhysOperator {
        m_prime,
        entries: sq(&ops.s1) + sq(&ops.s2) + sq(&ops.s3),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    A,
    ADag,
    B,
    BDag,
}

/// Applies a single-mode ladder operator to a sector state. The image lives
/// in the `m′ ± 1` sector, never in the original one; `None` means the image
/// is the zero vector of the (nonexistent) sector below `m′ = 0`.
pub fn apply_full_ladder(state: &PhysicalState, which: Ladder) -> Option<PhysicalState> {
    let m = state.m_prime;
    let amps = &state.amplitudes;
    let (target, entries) = match which {
        Ladder::ADag => {
            let mut out = DVector::from_element(m as usize + 2, ZERO);
            for (n, c) in amps.iter().enumerate() {
                out[n + 1] = c * ((n + 1) as f64).sqrt();
            }
            (m + 1, out)
        }
        Ladder::BDag => {
            let mut out = DVector::from_element(m as usize + 2, ZERO);
            for (n, c) in amps.iter().enumerate() {
                out[n] = c * (f64::from(m) - n as f64 + 1.0).sqrt();
            }
            (m + 1, out)
        }
        Ladder::A => {
            let target = m.checked_sub(1)?;
            let mut out = DVector::from_element(m as usize, ZERO);
            for (n, c) in amps.iter().enumerate().skip(1) {
                out[n - 1] = c * (n as f64).sqrt();
            }
            (target, out)
        }
        Ladder::B => {
            let target = m.checked_sub(1)?;
            let mut out = DVector::from_element(m as usize, ZERO);
            for (n, c) in amps.iter().enumerate().take(m as usize) {
                out[n] = c * (f64::from(m) - n as f64).sqrt();
            }
            (target, out)
        }
    };
    Some(PhysicalState {
        m_prime: target,
        amplitudes: entries,
    })
}

/// Single-mode cutoff used when a full two-mode state has to be materialized
/// for a cross-check of sector `m′`.
pub fn default_cutoff(m_prime: u32) -> u32 {
    m_prime + (10.0 * f64::from(m_prime + 1).sqrt()).ceil() as u32
}

/// The product space of two oscillators, each truncated at `cutoff` quanta.
/// Index of `|n_a, n_b⟩` is `n_a (cutoff+1) + n_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoModeSpace {
    pub cutoff: u32,
}

impl TwoModeSpace {
    pub fn new(cutoff: u32) -> Self {
        Self { cutoff }
    }

    pub fn dim(&self) -> usize {
        let d = self.cutoff as usize + 1;
        d * d
    }

    pub fn index(&self, n_a: u32, n_b: u32) -> usize {
        n_a as usize * (self.cutoff as usize + 1) + n_b as usize
    }

    /// Truncated two-mode coherent state `e^{−|α|²/2−|β|²/2} Σ αⁿβᵐ/√(n!m!) |n,m⟩`.
    pub fn coherent(&self, alpha: Complex64, beta: Complex64) -> DVector<Complex64> {
        let d = self.cutoff as usize + 1;
        let single = |z: Complex64| {
            let mut v = vec![ZERO; d];
            v[0] = Complex64::from((-z.norm_sqr() / 2.0).exp());
            for n in 1..d {
                v[n] = v[n - 1] * z / (n as f64).sqrt();
            }
            v
        };
        let va = single(alpha);
        let vb = single(beta);
        DVector::from_fn(self.dim(), |idx, _| va[idx / d] * vb[idx % d])
    }

    /// Orthogonal projector onto `a†a + b†b = m′`, applied to a vector.
    pub fn select_sector(&self, state: &DVector<Complex64>, m_prime: u32) -> DVector<Complex64> {
        let d = self.cutoff as usize + 1;
        DVector::from_fn(self.dim(), |idx, _| {
            if (idx / d + idx % d) as u32 == m_prime {
                state[idx]
            } else {
                ZERO
            }
        })
    }

    /// Reads off the sector-`m′` components as a [`PhysicalState`].
    pub fn restrict(&self, state: &DVector<Complex64>, m_prime: u32) -> Result<PhysicalState> {
        if m_prime > self.cutoff {
            return Err(Error::InvalidParameter(format!(
                "sector {m_prime} exceeds the cutoff {}",
                self.cutoff
            )));
        }
        let amps = DVector::from_fn(m_prime as usize + 1, |n, _| {
            state[self.index(n as u32, m_prime - n as u32)]
        });
        PhysicalState::new(m_prime, amps)
    }

    /// Annihilators `(a, b)` as dense matrices; only sensible for small cutoffs.
    pub fn ladder_matrices(&self) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
        let d = self.cutoff as usize + 1;
        let single = DMatrix::from_fn(d, d, |r, c| {
            if c == r + 1 {
                Complex64::from((c as f64).sqrt())
            } else {
                ZERO
            }
        });
        let id = DMatrix::<Complex64>::identity(d, d);
        (single.kronecker(&id), id.kronecker(&single))
    }
}
