//! The SU(2) coherent states resolve the identity on each sector. The sphere
//! grid is exact at its default order and visibly fails below it.

use coherent_clock::coherent::resolution_of_unity;
use coherent_clock::{PhysOperator, Spin, SphereGrid};

fn main() -> coherent_clock::Result<()> {
    for two_j in [1u32, 2, 4, 10, 20, 60] {
        let spin = Spin::from_two_j(two_j);
        let grid = SphereGrid::for_spin(spin);
        let err = resolution_of_unity(spin, &grid).max_abs_diff(&PhysOperator::identity(two_j));
        println!(
            "j = {spin:>5}: {} x {} nodes, max |R - I| = {err:.1e}",
            grid.polar_order(),
            grid.azimuth_count()
        );
    }
    let spin = Spin::from_two_j(10);
    for order in [2usize, 6, 11, 12] {
        let grid = SphereGrid::for_spin_with_order(spin, order)?;
        let err = resolution_of_unity(spin, &grid).max_abs_diff(&PhysOperator::identity(10));
        println!("j = 5, polar order {order:2}: max |R - I| = {err:.1e}");
    }
    Ok(())
}
