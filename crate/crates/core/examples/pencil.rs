//! Exact linear algebra on a Gram matrix: determinant, inverse, and the
//! pencil det(M - t M^T).

use slk::linalg::{char_pencil, det, inverse, IntMatrix};

fn main() -> slk::Result<()> {
    let m = IntMatrix::from_i64(&[&[1, 2, 1, 5], &[0, 1, 0, 4], &[0, 0, 1, 2], &[0, 0, 0, 1]])?;
    println!("M =\n{m}");
    println!("det M = {}", det(&m)?);
    println!("M^-1 =\n{}", inverse(&m)?);
    let s = &inverse(&m)? * &m.transpose().to_rational();
    println!("s = M^-1 M^T =\n{s}");
    // (1 - t)^4 exactly when the equations hold
    println!("det(M - t M^T) = {}", char_pencil(&m)?);
    Ok(())
}
