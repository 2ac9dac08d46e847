//! Draw a canonical form with a nonzero window part, hide it behind a
//! random admissible gauge, then normalize the scramble and compare.

use obk::normal_form::normalize;
use obk::random::{random_canonical, random_gauge, RandomSpec};
use obk::TransitionMatrix;

fn print_matrix(label: &str, t: &TransitionMatrix) {
    println!("{label} (k = {}, trunc = {}):", t.k(), t.trunc());
    for r in 0..t.rank() {
        for c in 0..t.rank() {
            println!("  ({},{}) = {}", r + 1, c + 1, t.entry(r, c));
        }
    }
}

fn main() -> Result<(), obk::Error> {
    let mut spec = RandomSpec::new(13, 1, 2, 4);
    spec.max_exp = 6;
    let canon_in = random_canonical(&spec)?;
    println!("planted splitting type: {}", canon_in.splitting());
    for (r, c, u, z, coeff) in canon_in.terms() {
        println!("planted window term at ({},{}): {} u^{} z^{}", r + 1, c + 1, coeff, u, z);
    }
    println!();

    let mut gauge_spec = spec;
    gauge_spec.trunc = canon_in.trunc();
    let scramble = random_gauge(&gauge_spec)?;
    let t = scramble.apply(&canon_in.to_matrix())?;
    print_matrix("scrambled", &t);
    println!();

    let (canon_out, cert) = normalize(&t)?;
    print_matrix("normalized", &canon_out.to_matrix());
    println!();
    println!("recovered splitting type: {}", canon_out.splitting());
    for (r, c, u, z, coeff) in canon_out.terms() {
        println!("recovered window term at ({},{}): {} u^{} z^{}", r + 1, c + 1, coeff, u, z);
    }

    let carried = cert.apply(&t)?;
    assert_eq!(carried, canon_out.to_matrix());
    assert_eq!(canon_in.splitting(), canon_out.splitting());
    println!("certificate verified: left * scrambled * right equals the normalized form");
    println!("(window coefficients may differ by the gauge's diagonal units;");
    println!(" the splitting type and the window support are the invariants)");
    Ok(())
}
