//! Schwinger spin matrices on one constraint sector: the su(2) algebra, the
//! Casimir, and the spectrum of S₃.

use coherent_clock::fock::{casimir, spin_operators};
use coherent_clock::{Complex64, PhysOperator};

fn main() -> coherent_clock::Result<()> {
    let m_prime = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(6u32);
    let ops = spin_operators(m_prime);
    let j = f64::from(m_prime) / 2.0;
    let i = Complex64::i();

    let defect = |a: &PhysOperator, b: &PhysOperator, c: &PhysOperator| -> coherent_clock::Result<f64> {
        Ok(a.commutator(b)?.max_abs_diff(&c.scale(i)))
    };
    println!("m' = {m_prime}, j = {j}");
    println!("[S1,S2] - iS3: {:e}", defect(&ops.s1, &ops.s2, &ops.s3)?);
    println!("[S2,S3] - iS1: {:e}", defect(&ops.s2, &ops.s3, &ops.s1)?);
    println!("[S3,S1] - iS2: {:e}", defect(&ops.s3, &ops.s1, &ops.s2)?);

    let c = casimir(m_prime);
    let expected = PhysOperator::identity(m_prime).scale(Complex64::from(j * (j + 1.0)));
    println!("S^2 - j(j+1): {:e}", c.max_abs_diff(&expected));
    println!("S3 spectrum: {:?}", ops.s3.hermitian_eigenvalues());
    println!("S1 spectrum: {:?}", ops.s1.hermitian_eigenvalues());
    Ok(())
}
