//! Upper and lower symbols: spin expectation values, the gauge-averaged
//! position, constraint peaking of the radial weight, and the difference
//! between the lower and upper symbol of S₃.

use coherent_clock::fock::spin_operators;
use coherent_clock::symbols::{
    project_lower_symbol, radial_grid_for, reconstruct_operator, s3_lower_symbol, s3_upper_shape,
    spin_symbols_closed_form, spin_symbols_from_matrices, FullLowerSymbol,
};
use coherent_clock::{Complex64, GaugeGrid, ReducedLabel, Spin, SphereGrid};

fn main() -> coherent_clock::Result<()> {
    let spin = Spin::from_two_j(6);
    let label = ReducedLabel::new(Complex64::new(0.5, -1.2), spin);
    let closed = spin_symbols_closed_form(&label);
    let matrix = spin_symbols_from_matrices(&label);
    println!("closed form s = {:?}", closed.as_array());
    println!("matrix      s = {:?}", matrix.as_array());
    println!("|s|^2 = {:.12} (j^2 = {})", closed.norm_sqr(), label.j() * label.j());

    let gauge = GaugeGrid::default();
    for m in [5u32, 50] {
        let q2 = FullLowerSymbol::q2_position();
        let projected = project_lower_symbol(&q2, &radial_grid_for(&q2, m), &gauge);
        let r = FullLowerSymbol::radius();
        let mean_r = project_lower_symbol(&r, &radial_grid_for(&r, m), &gauge).eval(label.xi);
        println!(
            "m = {m:2}: gauge-averaged q2 = {:.1e}, <r> = {mean_r:.10}, rel. offset {:.6} (1/(m+1) = {:.6})",
            projected.eval(label.xi),
            (mean_r - f64::from(m + 1)) / f64::from(m + 1),
            1.0 / f64::from(m + 1)
        );
    }

    for two_j in [1u32, 2, 10, 40] {
        let spin = Spin::from_two_j(two_j);
        let grid = SphereGrid::for_spin(spin);
        let s3 = spin_operators(two_j).s3;
        let lower = reconstruct_operator(&s3_lower_symbol(spin), spin, &grid).max_abs_diff(&s3);
        let upper = reconstruct_operator(&s3_upper_shape(spin), spin, &grid).sub(&s3)?.frobenius_norm()
            / s3.frobenius_norm();
        println!("j = {spin:>4}: lower symbol rebuilds S3 to {lower:.1e}; upper shape misses by {upper:.4}");
    }
    Ok(())
}
