//! The three elimination stages, run one at a time on a rank-3 bundle:
//! diagonalize the u^0 part, clear below the diagonal, normalize the
//! diagonal to monomials, then push the upper part into the window.

use obk::birkhoff::prepare_diagonal;
use obk::normal_form::{eliminate_lower, normalize_diagonal, reduce_upper};
use obk::random::{random_bundle, RandomSpec};
use obk::TransitionMatrix;

fn print_matrix(label: &str, t: &TransitionMatrix) {
    println!("{label}:");
    for r in 0..t.rank() {
        for c in 0..t.rank() {
            println!("  ({},{}) = {}", r + 1, c + 1, t.entry(r, c));
        }
    }
    println!();
}

fn main() -> Result<(), obk::Error> {
    let spec = RandomSpec::new(12, 1, 3, 3);
    let t = random_bundle(&spec)?;
    print_matrix("input", &t);

    let (diagonal, _) = prepare_diagonal(&t)?;
    print_matrix("after stage 0 (u^0 part diagonalized)", &diagonal);

    let (upper, _) = eliminate_lower(&diagonal)?;
    print_matrix("after stage 1 (lower part cleared)", &upper);

    let (monomial, _) = normalize_diagonal(&upper)?;
    print_matrix("after stage 2 (diagonal reduced to monomials)", &monomial);

    let (canon, _) = reduce_upper(&monomial)?;
    print_matrix("after stage 3 (upper part confined to the window)", &canon.to_matrix());

    println!("splitting type: {}", canon.splitting());
    Ok(())
}
