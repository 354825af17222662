#![allow(dead_code)]

use gma_core::oracle::random::{random_graph, RandomGraphConfig};
use gma_core::{AllocationGraph, HopRecord, PathView, Rational, Resource};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

/// Positive `p/q` with small terms.
pub fn amount() -> impl Strategy<Value = Rational> {
    (1i64..=12, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

/// Non-negative slack, zero one time in four.
pub fn slack() -> impl Strategy<Value = Rational> {
    prop_oneof![1 => Just(q(0, 1)), 3 => amount()]
}

pub fn hop(allow_zero: bool) -> impl Strategy<Value = HopRecord<Rational>> {
    let m = if allow_zero {
        prop_oneof![1 => Just(q(0, 1)), 9 => amount()].boxed()
    } else {
        amount().boxed()
    };
    (m, slack(), slack()).prop_map(|(m, sc, sd)| HopRecord::new(m.clone(), m.clone() + sc, m + sd))
}

pub fn view(len: std::ops::RangeInclusive<usize>, allow_zero: bool) -> impl Strategy<Value = PathView<Rational>> {
    prop::collection::vec(hop(allow_zero), len).prop_map(|h| PathView::new(h).expect("sums dominate"))
}

/// Random small legal graph from a seed.
pub fn graph_from_seed(seed: u64, cfg: &RandomGraphConfig) -> AllocationGraph<Rational> {
    random_graph(&mut ChaCha8Rng::seed_from_u64(seed), cfg)
}

pub fn small_graph() -> impl Strategy<Value = AllocationGraph<Rational>> {
    any::<u64>().prop_map(|s| graph_from_seed(s, &RandomGraphConfig::default()))
}

pub fn is_non_increasing<R: Resource>(v: &[R]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0])
}
