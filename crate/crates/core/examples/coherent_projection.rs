//! Projecting a two-mode coherent state onto a constraint sector: the result
//! is an SU(2) coherent state times the gauge phase e^{im′θ}.

use coherent_clock::coherent::{factor_gauge_phase, overlap, project_coherent, su2_coherent};
use coherent_clock::{CoherentLabel, Complex64, ReducedLabel, Spin};

fn main() -> coherent_clock::Result<()> {
    let label = CoherentLabel::new(Complex64::new(1.1, -0.4), Complex64::from_polar(0.9, 2.2));
    for m_prime in [1u32, 4, 12, 40] {
        let projected = project_coherent(&label, m_prime);
        let factoring = factor_gauge_phase(&label, m_prime)?;
        let defect = projected.normalized()?.max_abs_diff(&factoring.physical_state());
        println!(
            "m' = {m_prime:3}: <P> = {:.6e}, theta = {:.6}, |normalized - e^(im'theta)|xi>| = {defect:.1e}",
            projected.norm_sqr, factoring.theta
        );
    }

    // a gauge rotation changes only the overall phase
    let rotated = label.gauge_rotate(0.7);
    let (a, b) = (factor_gauge_phase(&label, 8)?, factor_gauge_phase(&rotated, 8)?);
    println!("xi before / after gauge rotation: {:.12} / {:.12}", a.reduced.xi, b.reduced.xi);

    let spin = Spin::from_two_j(8);
    let ket = ReducedLabel::new(a.reduced.xi, spin);
    let bra = ReducedLabel::new(Complex64::new(0.3, 0.3), spin);
    let explicit = su2_coherent(&bra).inner(&su2_coherent(&ket))?;
    println!("overlap closed form {:.12}, explicit {explicit:.12}", overlap(&bra, &ket)?);
    Ok(())
}
