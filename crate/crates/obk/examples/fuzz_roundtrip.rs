//! Round-trip harness: draw a random canonical form, scramble it with an
//! admissible gauge, normalize the scramble, and demand the exact same
//! canonical form back together with a verified gauge certificate.

use obk::random::fuzz_seed;

fn main() {
    let mut passed = 0;
    let mut failed = 0;
    for k in 1..=2i64 {
        for seed in 0..20u64 {
            let verdict = fuzz_seed(k, 2, seed);
            if verdict.pass {
                passed += 1;
            } else {
                failed += 1;
                println!(
                    "seed {seed} (k = {k}): FAIL {}",
                    verdict.failure.as_deref().unwrap_or("unknown")
                );
            }
        }
    }
    println!("{passed} passed, {failed} failed");
    assert_eq!(failed, 0);
}
