#![allow(dead_code)]

use intervaldyn_core::{fixtures, markovize, MarkovSystem, PLMap};

pub const MARKOV_STEPS: usize = 200;

/// Every corpus map whose breakpoint orbits are finite.
pub fn markov_fixtures() -> Vec<(String, MarkovSystem)> {
    fixtures::corpus()
        .into_iter()
        .filter_map(|(name, map)| markovize(&map, MARKOV_STEPS).map(|ms| (name, ms)))
        .collect()
}

pub fn ms(map: &PLMap) -> MarkovSystem {
    markovize(map, MARKOV_STEPS).expect("Markov fixture")
}

use intervaldyn_core::rat::frac;
use proptest::prelude::*;

/// Knots at `i/n` with values on the same grid; every grid point maps to a grid point, so
/// these maps are always Markov.
pub fn grid_map() -> impl Strategy<Value = PLMap> {
    (2i64..=6).prop_flat_map(|n| {
        proptest::collection::vec(0..=n, (n + 1) as usize).prop_map(move |vals| {
            let knots = vals.iter().enumerate().map(|(i, &v)| (frac(i as i64, n), frac(v, n))).collect();
            PLMap::new(knots).expect("grid knots are valid")
        })
    })
}

/// A rational in `[0,1]` with denominator below 100.
pub fn unit_rat() -> impl Strategy<Value = intervaldyn_core::Rat> {
    (1i64..100).prop_flat_map(|q| (0..=q).prop_map(move |p| frac(p, q)))
}
