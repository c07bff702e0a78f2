#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tropbt::bitangent::{bitangent_locus, BitangentClass};
use tropbt::quartic::{newton_subdivision, running_example_valuations, QuarticInput};
use tropbt::sample::{random_smooth_valuations, seed_from_env};
use tropbt::tropcurve::{build_curve, TropicalCurve};

pub struct Sample {
    pub quartic: QuarticInput,
    pub curve: TropicalCurve,
    pub classes: Vec<BitangentClass>,
}

pub fn running_example() -> Sample {
    sample(QuarticInput::from_valuations(&running_example_valuations()).unwrap()).unwrap()
}

pub fn sample(quartic: QuarticInput) -> Option<Sample> {
    let s = newton_subdivision(&quartic.heights());
    let curve = build_curve(&s, 4);
    let classes = bitangent_locus(&curve, &s).ok()?;
    Some(Sample { quartic, curve, classes })
}

pub fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed_from_env(20240611) ^ salt)
}

/// `n` random quartics with smooth tropicalizations whose classes could be built,
/// and the number of draws that were rejected on the way.
pub fn random_suite(n: usize, salt: u64) -> (Vec<Sample>, usize) {
    let mut r = rng(salt);
    let mut out = Vec::with_capacity(n);
    let mut rejected = 0;
    while out.len() < n {
        let q = QuarticInput::from_valuations(&random_smooth_valuations(&mut r)).unwrap();
        match sample(q) {
            Some(s) => out.push(s),
            None => rejected += 1,
        }
    }
    (out, rejected)
}
