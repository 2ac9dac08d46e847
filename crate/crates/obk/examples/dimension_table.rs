//! Dimension of the canonical space for rank-2 exponent pairs, tabulated
//! against direct enumeration of the window.

use obk::normal_form::{canonical_dim, canonical_support, window_depth};

fn main() {
    for k in 1..=3i64 {
        println!("k = {k}");
        println!("  j1  j2   depth   dim");
        for j1 in 0..=6i64 {
            for j2 in 0..=j1 {
                let dim = canonical_dim(k, j1, j2);
                if dim == 0 {
                    continue;
                }
                let depth = window_depth(k, j1, j2);
                assert_eq!(dim, canonical_support(k, j1, j2).len());
                println!("  {j1:>2}  {j2:>2}   {depth:>5}   {dim:>3}");
            }
        }
        println!();
    }
    println!("every printed dimension agrees with the enumerated window");
}
