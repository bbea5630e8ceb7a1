//! Log-space factorials and Gamma ratios, and phase reduction for large
//! integer multiples of an angle.

use statrs::function::{factorial, gamma};

pub fn ln_factorial(n: u64) -> f64 {
    factorial::ln_factorial(n)
}

pub fn ln_gamma(x: f64) -> f64 {
    gamma::ln_gamma(x)
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Gamma(m + 5/2) / (m + 1)!, evaluated through log-Gamma so it does not
/// overflow once m passes ~170.
pub fn clock_gamma_ratio(m: u32) -> f64 {
    let m = f64::from(m);
    (ln_gamma(m + 2.5) - ln_gamma(m + 2.0)).exp()
}

/// `Σ kᵢ aᵢ` reduced to `[−π, π]`, carried in double-double so that integer
/// multiples in the hundreds do not cost the last two digits of the phase.
pub fn integer_phase(terms: &[(u32, f64)]) -> f64 {
    // 2π = TAU_HI + TAU_LO to ~1e-32
    const TAU_HI: f64 = std::f64::consts::TAU;
    const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;
    let (mut hi, mut lo) = (0.0f64, 0.0f64);
    for &(k, a) in terms {
        let k = f64::from(k);
        let p = k * a;
        let p_err = k.mul_add(a, -p);
        let s = hi + p;
        let z = s - hi;
        lo += (hi - (s - z)) + (p - z) + p_err;
        hi = s;
    }
    let q = ((hi + lo) / TAU_HI).round();
    (-q).mul_add(TAU_HI, hi) + (lo - q * TAU_LO)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_phase_is_reduced_and_accurate() {
        use std::f64::consts::{PI, TAU};
        assert!(integer_phase(&[(3, PI)]).abs() - PI < 1e-15);
        assert!((integer_phase(&[(200, 1.0), (7, -0.5)]) - (196.5f64).rem_euclid(TAU)).abs() % TAU < 1e-13);
        // 200 · (π/100) = 2π → 0, where the naive product lands about 1e-13 off
        let v = integer_phase(&[(200, PI / 100.0)]);
        assert!(v.abs() < 5e-14, "{v:e}");
        assert!(integer_phase(&[]).abs() == 0.0);
    }

    #[test]
    fn gamma_ratio_small_m() {
        // Gamma(5/2) = 3 sqrt(pi) / 4
        let expected = 3.0 * std::f64::consts::PI.sqrt() / 4.0;
        assert!((clock_gamma_ratio(0) - expected).abs() < 1e-14);
    }

    #[test]
    fn gamma_ratio_matches_product_recurrence() {
        // R(m+1) = R(m) (m + 5/2) / (m + 2)
        let mut r = clock_gamma_ratio(0);
        for m in 0..1000u32 {
            r *= (f64::from(m) + 2.5) / (f64::from(m) + 2.0);
            let direct = clock_gamma_ratio(m + 1);
            assert!((direct / r - 1.0).abs() < 1e-11, "m={m}");
        }
    }

    #[test]
    fn gamma_ratio_large_m_is_finite() {
        let r = clock_gamma_ratio(100_000);
        assert!(r.is_finite());
        assert!((r / 100_001f64.sqrt() - 1.0).abs() < 1e-4);
    }
}
