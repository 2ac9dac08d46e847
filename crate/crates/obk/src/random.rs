//! Seeded generators and the scramble-then-normalize round trip.
//!
//! Everything here is deterministic in the seed: the same [`RandomSpec`]
//! always produces the same bundle, gauge, and verdict. Bundles are built
//! as admissible-gauge scrambles of diagonal matrices, so the transition
//! matrix invariants hold by construction rather than by rejection
//! sampling, and every generated gauge carries its exact inverse.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bundle::{GaugeTransform, TransitionMatrix};
use crate::error::Result;
use crate::jet::UJet;
use crate::normal_form::{normalize, CanonicalForm};
use crate::scalar::{int, rat, Scalar};

/// Parameters for the generators. Coefficients are drawn from the
/// nonzero integers and simple reciprocals in `[-coeff_bound, coeff_bound]`;
/// diagonal exponents from `[min_exp, max_exp]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomSpec {
    pub seed: u64,
    pub k: i64,
    pub rank: usize,
    pub trunc: usize,
    pub min_exp: i64,
    pub max_exp: i64,
    pub coeff_bound: i64,
    pub gauge_ops: usize,
}

impl RandomSpec {
    pub fn new(seed: u64, k: i64, rank: usize, trunc: usize) -> Self {
        RandomSpec {
            seed,
            k,
            rank,
            trunc,
            min_exp: 0,
            max_exp: 5,
            coeff_bound: 3,
            gauge_ops: 6,
        }
    }
}

fn random_coeff(rng: &mut ChaCha8Rng, bound: i64) -> Scalar {
    let n = loop {
        let c = rng.gen_range(-bound..=bound);
        if c != 0 {
            break c;
        }
    };
    if rng.gen_range(0..4) == 0 {
        rat(1, n)
    } else {
        int(n)
    }
}

/// Diagonal exponents for the base matrix, sorted descending.
pub fn random_exponents(spec: &RandomSpec) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    exponents_from(&mut rng, spec)
}

fn exponents_from(rng: &mut ChaCha8Rng, spec: &RandomSpec) -> Vec<i64> {
    let mut exps: Vec<i64> = (0..spec.rank)
        .map(|_| rng.gen_range(spec.min_exp..=spec.max_exp))
        .collect();
    exps.sort_unstable_by(|a, b| b.cmp(a));
    exps
}

/// One admissible elementary factor: a unipotent row or column move, a
/// unit diagonal scaling, or a row permutation.
fn random_factor(rng: &mut ChaCha8Rng, spec: &RandomSpec) -> Result<GaugeTransform> {
    let k = spec.k;
    let rank = spec.rank;
    let trunc = spec.trunc;
    if rank == 1 {
        // only diagonal scalings are available
        let c = random_coeff(rng, spec.coeff_bound);
        let jet = UJet::constant(c, trunc);
        let inv = jet.invert()?;
        return if rng.gen_range(0..2) == 0 {
            GaugeTransform::new(
                k,
                crate::matrix::Mat::from_rows(vec![vec![jet.clone()]])?,
                crate::matrix::Mat::from_rows(vec![vec![inv]])?,
                crate::matrix::Mat::identity(1, &jet),
                crate::matrix::Mat::identity(1, &jet),
            )
        } else {
            GaugeTransform::new(
                k,
                crate::matrix::Mat::identity(1, &jet),
                crate::matrix::Mat::identity(1, &jet),
                crate::matrix::Mat::from_rows(vec![vec![jet.clone()]])?,
                crate::matrix::Mat::from_rows(vec![vec![inv]])?,
            )
        };
    }
    let r = rng.gen_range(0..rank);
    let s = loop {
        let s = rng.gen_range(0..rank);
        if s != r {
            break s;
        }
    };
    match rng.gen_range(0..4) {
        0 => {
            // left factor: coefficient regular on the V chart
            let d = rng.gen_range(0..=trunc);
            let hi = k * d as i64;
            let e = rng.gen_range(hi - 3..=hi);
            let coef = UJet::monomial(d, e, random_coeff(rng, spec.coeff_bound), trunc)?;
            GaugeTransform::elementary_left(k, rank, r, s, &coef)
        }
        1 => {
            // right factor: coefficient regular on the U chart
            let d = rng.gen_range(0..=trunc);
            let e = rng.gen_range(0..=3);
            let coef = UJet::monomial(d, e, random_coeff(rng, spec.coeff_bound), trunc)?;
            GaugeTransform::elementary_right(k, rank, r, s, &coef)
        }
        2 => {
            // unit constant scaling of one row, on a random side
            let c = random_coeff(rng, spec.coeff_bound);
            let jet = UJet::constant(c, trunc);
            let inv = jet.invert()?;
            let mut m = crate::matrix::Mat::identity(rank, &jet);
            let mut m_inv = m.clone();
            m.set(r, r, jet);
            m_inv.set(r, r, inv);
            let id = crate::matrix::Mat::identity(rank, m.at(0, 0));
            if rng.gen_range(0..2) == 0 {
                GaugeTransform::new(k, m, m_inv, id.clone(), id)
            } else {
                GaugeTransform::new(k, id.clone(), id, m, m_inv)
            }
        }
        _ => {
            // transposition of two rows
            let mut sigma: Vec<usize> = (0..rank).collect();
            sigma.swap(r, s);
            GaugeTransform::permutation_left(k, &sigma, trunc)
        }
    }
}

/// A random gauge transform: the composition of `gauge_ops` elementary
/// factors, each validated with its stored inverse.
pub fn random_gauge(spec: &RandomSpec) -> Result<GaugeTransform> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    gauge_from(&mut rng, spec)
}

fn gauge_from(rng: &mut ChaCha8Rng, spec: &RandomSpec) -> Result<GaugeTransform> {
    let mut g = GaugeTransform::identity(spec.k, spec.rank, spec.trunc);
    for _ in 0..spec.gauge_ops {
        let f = random_factor(rng, spec)?;
        g = g.then(&f)?;
    }
    Ok(g)
}

/// A random bundle: a random diagonal matrix scrambled by a random gauge.
pub fn random_bundle(spec: &RandomSpec) -> Result<TransitionMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let exps = exponents_from(&mut rng, spec);
    let base = TransitionMatrix::diagonal(spec.k, &exps, spec.trunc)?;
    let g = gauge_from(&mut rng, spec)?;
    g.apply(&base)
}

/// Scramble of a prescribed diagonal: `diag(z^{j_i})` hit by a random
/// gauge drawn from the seed. The exponent list is taken as given.
pub fn scrambled_diagonal(spec: &RandomSpec, exponents: &[i64]) -> Result<TransitionMatrix> {
    if exponents.len() != spec.rank {
        return Err(crate::error::Error::InvalidParameter(format!(
            "{} exponents for rank {}",
            exponents.len(),
            spec.rank
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let base = TransitionMatrix::diagonal(spec.k, exponents, spec.trunc)?;
    let g = gauge_from(&mut rng, spec)?;
    g.apply(&base)
}

/// A random canonical form: random sorted exponents, then each window
/// slot filled with probability one half. The truncation order is raised
/// to the deepest window if the requested order is smaller. Drawn from a stream
/// decorrelated from the gauge stream of the same seed.
pub fn random_canonical(spec: &RandomSpec) -> Result<CanonicalForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x9e37_79b9_7f4a_7c15);
    let exps = exponents_from(&mut rng, spec);
    let depth = crate::normal_form::window_depth(spec.k, exps[0], exps[spec.rank - 1]);
    let trunc = spec.trunc.max(depth);
    let mut upper = crate::matrix::Mat::filled(spec.rank, spec.rank, UJet::zero(trunc));
    for r in 0..spec.rank {
        for s in r + 1..spec.rank {
            let mut entry = UJet::zero(trunc);
            for (i, l) in crate::normal_form::canonical_support(spec.k, exps[r], exps[s]) {
                if rng.gen_range(0..2) == 1 {
                    entry.add_term(i, l, random_coeff(&mut rng, spec.coeff_bound))?;
                }
            }
            upper.set(r, s, entry);
        }
    }
    CanonicalForm::new(spec.k, exps, upper)
}

/// One fuzz iteration: draw a canonical form from the seed and round-trip
/// it through a scramble and [`normalize`].
pub fn fuzz_seed(k: i64, rank: usize, seed: u64) -> RoundtripVerdict {
    let spec = RandomSpec::new(seed, k, rank, 2);
    match random_canonical(&spec) {
        Ok(c) => roundtrip_check(&c, &spec),
        Err(e) => RoundtripVerdict::fail(seed, Vec::new(), "generator", e.to_string()),
    }
}

/// Outcome of one scramble-then-normalize round trip, with enough detail
/// to reproduce a failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripVerdict {
    pub seed: u64,
    pub pass: bool,
    pub splitting_in: Vec<i64>,
    pub splitting_out: Option<Vec<i64>>,
    pub failure: Option<String>,
}

impl RoundtripVerdict {
    fn fail(seed: u64, splitting_in: Vec<i64>, stage: &str, detail: String) -> Self {
        RoundtripVerdict {
            seed,
            pass: false,
            splitting_in,
            splitting_out: None,
            failure: Some(format!("seed {seed}, {stage}: {detail}")),
        }
    }
}

/// Scramble a canonical form by a random gauge, normalize the scramble,
/// and check that the splitting type comes back and the composed gauge
/// reproduces the new canonical matrix exactly. Window membership is
/// enforced by the [`CanonicalForm`] type itself.
pub fn roundtrip_check(c: &CanonicalForm, spec: &RandomSpec) -> RoundtripVerdict {
    let seed = spec.seed;
    let splitting_in = c.exponents().to_vec();
    let spec = RandomSpec {
        k: c.k(),
        rank: c.rank(),
        trunc: c.trunc(),
        ..spec.clone()
    };
    let g = match random_gauge(&spec) {
        Ok(g) => g,
        Err(e) => return RoundtripVerdict::fail(seed, splitting_in, "generator", e.to_string()),
    };
    let scrambled = match g.apply(&c.to_matrix()) {
        Ok(t) => t,
        Err(e) => return RoundtripVerdict::fail(seed, splitting_in, "scramble", e.to_string()),
    };
    let (out, gauge) = match normalize(&scrambled) {
        Ok(pair) => pair,
        Err(e) => return RoundtripVerdict::fail(seed, splitting_in, "normalize", e.to_string()),
    };
    if out.exponents() != splitting_in.as_slice() {
        return RoundtripVerdict {
            splitting_out: Some(out.exponents().to_vec()),
            ..RoundtripVerdict::fail(
                seed,
                splitting_in.clone(),
                "splitting",
                format!("expected {:?}, got {:?}", splitting_in, out.exponents()),
            )
        };
    }
    match gauge.apply(&scrambled) {
        Ok(t) if t == out.to_matrix() => RoundtripVerdict {
            seed,
            pass: true,
            splitting_in,
            splitting_out: Some(out.exponents().to_vec()),
            failure: None,
        },
        Ok(_) => RoundtripVerdict::fail(
            seed,
            splitting_in,
            "certificate",
            "composed gauge does not reproduce the canonical matrix".into(),
        ),
        Err(e) => RoundtripVerdict::fail(seed, splitting_in, "certificate", e.to_string()),
    }
}
