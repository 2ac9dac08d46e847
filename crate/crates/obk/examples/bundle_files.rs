//! The bundle file format: write a transition matrix to text, parse it
//! back, and do the same for a gauge transform with its four records.

use obk::format::{parse_bundle, parse_gauge, write_bundle, write_gauge};
use obk::normal_form::normalize;
use obk::random::{scrambled_diagonal, RandomSpec};

fn main() -> Result<(), obk::Error> {
    let spec = RandomSpec::new(3, 2, 2, 3);
    let t = scrambled_diagonal(&spec, &[6, 1])?;

    let text = write_bundle(&t);
    println!("bundle file:");
    println!("{text}");
    let back = parse_bundle(&text)?;
    assert_eq!(back, t);
    println!("parse(write(t)) round-trips exactly");
    println!();

    let (_, gauge) = normalize(&t)?;
    let gauge_text = write_gauge(&gauge);
    let blocks = gauge_text
        .lines()
        .filter(|l| l.starts_with("bundle "))
        .count();
    println!("gauge file: {blocks} bundle records, in the order");
    println!("  left, left inverse, right, right inverse");
    assert_eq!(blocks, 4);
    let gauge_back = parse_gauge(&gauge_text)?;
    assert_eq!(gauge_back, gauge);
    println!("parse(write(g)) round-trips exactly, inverses revalidated");
    Ok(())
}
