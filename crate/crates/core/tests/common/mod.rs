//! Seeded random Seifert matrices shared by the integration tests.
#![allow(dead_code)]

use dihedral_core::{IntMatrix, SeifertMatrix};
use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 0x5eed_0d1a_2024;

/// `count` valid Seifert matrices of genus 1 or 2 with entries in `[-2, 2]`
/// and `1 < |det| <= max_det`.
pub fn corpus(seed: u64, count: usize, max_det: u64) -> Vec<SeifertMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let size = if rng.gen_bool(0.5) { 2 } else { 4 };
        let entries: Vec<BigInt> = (0..size * size).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect();
        let m = IntMatrix::new(size, size, entries).expect("square");
        let Ok(v) = SeifertMatrix::new(m) else { continue };
        let d = v.knot_determinant().abs();
        if d > BigInt::from(1) && d <= BigInt::from(max_det) {
            out.push(v);
        }
    }
    out
}

pub fn standard_corpus() -> Vec<SeifertMatrix> {
    corpus(CORPUS_SEED, 200, 2000)
}

/// Odd `n > 1` dividing `d`.
pub fn odd_divisors(d: &BigInt) -> Vec<u64> {
    let d: u64 = d.abs().try_into().expect("small determinant");
    (3..=d).step_by(2).filter(|n| d % n == 0).collect()
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
