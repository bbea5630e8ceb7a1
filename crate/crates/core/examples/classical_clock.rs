//! The classical constrained oscillator pair: trajectory, constraint, gauge
//! invariance of ξ, and reading oscillator 1 off the oscillator-2 clock.

use coherent_clock::{ClassicalConfig, Complex64, Units};

fn main() -> coherent_clock::Result<()> {
    let units = Units::default();
    let xi = Complex64::from_polar(0.8, 0.6);
    let cfg = ClassicalConfig::on_shell_from_label(xi, 10, 0.25, units);
    println!("A = {:.6}, B = {:.6}, E = {}", cfg.a, cfg.b, cfg.energy);
    println!("constraint residual {:e}, on shell: {}", cfg.constraint_residual(), cfg.is_on_shell());

    let shifted = cfg.gauge_shift(1.3);
    let (x0, x1) = (cfg.reduced_coordinate()?, shifted.reduced_coordinate()?);
    println!("xi before / after a gauge shift: {x0:.12} / {x1:.12}");

    println!("{:>8} {:>12} {:>12} {:>12} {:>12}", "tau", "q1", "q2", "readout", "energy");
    for k in 0..12 {
        let tau = 0.25 * f64::from(k);
        let p = cfg.trajectory(tau);
        // the principal branch of acos only covers half of each period
        let readout = match (units.omega * tau + cfg.phi_prime).rem_euclid(std::f64::consts::TAU) {
            s if s <= std::f64::consts::PI => format!("{:12.6}", cfg.clock_readout(p.q2)?),
            _ => format!("{:>12}", "other branch"),
        };
        println!(
            "{tau:8.3} {:12.6} {:12.6} {readout} {:12.6}",
            p.q1,
            p.q2,
            cfg.oscillator_energy(&p)
        );
    }
    Ok(())
}
