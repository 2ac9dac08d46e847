//! Birkhoff factorization on the zero-section restriction: plant a
//! diagonal of z-powers, hide it under unimodular row and column
//! operations, and recover the exponents.

use obk::birkhoff::birkhoff_factorize;
use obk::laurent::LaurentPoly;
use obk::matrix::Mat;
use obk::scalar::int;

fn main() -> Result<(), obk::Error> {
    let planted = [3i64, 1, -2];
    let mut m = Mat::from_fn(3, 3, |r, c| {
        if r == c {
            LaurentPoly::monomial(planted[r], int(1))
        } else {
            LaurentPoly::zero()
        }
    });

    // a few elementary operations that keep the determinant a monomial
    m.row_op(0, 1, &LaurentPoly::monomial(-1, int(2)));
    m.col_op(2, 0, &LaurentPoly::monomial(1, int(-1)));
    m.row_op(2, 1, &LaurentPoly::monomial(0, int(3)));
    m.col_op(1, 2, &LaurentPoly::monomial(2, int(1)));

    println!("scrambled matrix:");
    for r in 0..3 {
        for c in 0..3 {
            println!("  ({},{}) = {}", r + 1, c + 1, m.at(r, c));
        }
    }

    let f = birkhoff_factorize(&m)?;
    println!();
    println!("recovered splitting type: {}", f.splitting());
    f.check(&m)?;
    println!("factor check: Q(z^-1) * diag * P(z) reproduces the input exactly");

    let det = m.det();
    let (exp, _) = det.as_monomial().expect("unimodular scramble keeps a monomial det");
    println!(
        "degree sum {} matches the determinant exponent {}",
        f.exponents.iter().sum::<i64>(),
        exp
    );
    Ok(())
}
