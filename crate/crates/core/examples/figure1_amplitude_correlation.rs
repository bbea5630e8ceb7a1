//! |⟨ξ′|ξ⟩| along a sweep of the amplitude-ratio angle Θ′ and its Gaussian
//! width against 1/(2j). Prints a coarse text plot of the j = 50 trace.

use coherent_clock::clock::{amplitude_correlation, amplitude_correlation_in_chart, default_amplitude_sweep, Chart};
use coherent_clock::Spin;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

fn main() -> coherent_clock::Result<()> {
    for two_j in [20u32, 100, 200] {
        let spin = Spin::from_two_j(two_j);
        let trace = amplitude_correlation(FRAC_PI_4, spin, &default_amplitude_sweep(FRAC_PI_4, spin))?;
        println!(
            "j = {spin:>3}: sigma^2 fit {:.6e}, predicted {:.6e}, ratio {:.5} from {} points",
            trace.fit.sigma_sqr,
            trace.sigma_sqr_pred,
            trace.width_ratio(),
            trace.fit.points_used
        );
    }

    // Θ = π/2 sits on the pole of ξ = α/β; the antipodal chart handles it
    let spin = Spin::from_two_j(100);
    let trace = amplitude_correlation_in_chart(FRAC_PI_2, spin, &default_amplitude_sweep(FRAC_PI_2, spin), Chart::Antipodal)?;
    println!("j = 50 at the pole, antipodal chart: width ratio {:.5}", trace.width_ratio());

    let trace = amplitude_correlation(FRAC_PI_4, spin, &default_amplitude_sweep(FRAC_PI_4, spin))?;
    for (x, o) in trace.sweep.iter().zip(&trace.overlaps).step_by(5) {
        println!("{x:7.4} {o:8.5} {}", "#".repeat((o * 60.0).round() as usize));
    }
    Ok(())
}
