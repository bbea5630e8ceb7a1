//! |⟨ξe^{iδφ}|ξ⟩| along a sweep of the phase difference: the clock's timing
//! error. The width follows 2j/(E₁E₂) for equal and unequal energies.

use coherent_clock::clock::{default_phase_sweep, oscillator_energies, phase_correlation};
use coherent_clock::Spin;

fn main() -> coherent_clock::Result<()> {
    for xi_mag in [1.0, 0.5, 2.0, 4.0] {
        for two_j in [40u32, 200] {
            let spin = Spin::from_two_j(two_j);
            let (e1, e2) = oscillator_energies(xi_mag, spin);
            let trace = phase_correlation(xi_mag, spin, &default_phase_sweep(xi_mag, spin))?;
            println!(
                "|xi| = {xi_mag:3}, j = {spin:>3}: E1 = {e1:7.3}, E2 = {e2:7.3}, sigma^2 fit {:.5e}, predicted {:.5e}, ratio {:.5}",
                trace.fit.sigma_sqr,
                trace.sigma_sqr_pred,
                trace.width_ratio()
            );
        }
    }
    Ok(())
}
