//! Deterministic, seed-addressed random generation of finite data.
//!
//! Every sampled case draws from its own generator derived from the run seed,
//! a stream label and the case index, so cases can be replayed individually
//! and evaluated in any order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::universe::{FinType, Value};

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn label_hash(label: &str) -> u64 {
    // FNV-1a
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// The generator for case `case` of stream `label` under `seed`.
pub fn case_rng(seed: u64, label: &str, case: u64) -> ChaCha8Rng {
    let s = splitmix(splitmix(seed ^ label_hash(label)) ^ case);
    ChaCha8Rng::seed_from_u64(s)
}

/// A uniformly random value of `ty`.
pub fn value(rng: &mut impl Rng, ty: &FinType) -> Result<Value> {
    let n = ty.cardinality_within(u64::MAX)?;
    ty.unrank(rng.gen_range(0..n))
}

/// A random subset of `elem` including each value with probability `p`.
pub fn subset(rng: &mut impl Rng, elem: &FinType, p: f64, cap: u64) -> Result<Value> {
    let mut out = std::collections::BTreeSet::new();
    for v in elem.enumerate(cap)? {
        if rng.gen_bool(p) {
            out.insert(v);
        }
    }
    Ok(Value::Set(out))
}
