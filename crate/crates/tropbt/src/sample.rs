//! Random quartics with smooth tropicalizations, for experiments and test suites.

use std::collections::BTreeMap;

use rand::Rng;

use crate::quartic::{check_smooth, lattice_points, newton_subdivision, Lattice};
use crate::residue::{InitialAssignment, Rational, ResidueField, Symbol};

/// Seed for randomized runs: `TROPBT_SEED` if set, else `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var("TROPBT_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(default)
}

/// Valuations `q(i, j) + noise` for a random positive definite integer quadratic
/// form `q`, redrawn until the subdivision is a unimodular triangulation.
pub fn random_smooth_valuations<R: Rng>(rng: &mut R) -> BTreeMap<Lattice, Rational> {
    loop {
        let (a, c): (i128, i128) = (rng.gen_range(4..=40), rng.gen_range(4..=40));
        // b^2 < 4ac
        let lim = ((4 * a * c) as f64).sqrt().floor() as i128 - 1;
        let b = rng.gen_range(-lim..=lim);
        let vals: BTreeMap<Lattice, Rational> = lattice_points(4)
            .into_iter()
            .map(|(i, j)| {
                let (x, y) = (i as i128, j as i128);
                let noise = rng.gen_range(-40i128..=40);
                ((i, j), Rational::new(4 * (a * x * x + b * x * y + c * y * y) + noise, 4))
            })
            .collect();
        let h = vals.iter().map(|(&p, &v)| (p, -v)).collect();
        if check_smooth(&newton_subdivision(&h)) {
            return vals;
        }
    }
}

/// Random nonzero initials: `±1` over the reals, residues over `F_p`, small
/// integers over the rationals.
pub fn random_assignment<R: Rng>(rng: &mut R, k: ResidueField) -> InitialAssignment {
    let mut asg = InitialAssignment::new();
    for (i, j) in lattice_points(4) {
        let v: i128 = match k {
            ResidueField::Prime(p) => rng.gen_range(1..p as i128),
            ResidueField::Rationals => {
                let v = rng.gen_range(1..=12);
                if rng.gen_bool(0.5) { -v } else { v }
            }
            _ => {
                if rng.gen_bool(0.5) { -1 } else { 1 }
            }
        };
        asg.set(Symbol::new(i as u8, j as u8), Rational::from_integer(v));
    }
    asg
}
