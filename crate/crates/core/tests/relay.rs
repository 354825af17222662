mod common;

use gma_core::graph::path_view;
use gma_core::oracle::random::{random_valid_path, RandomGraphConfig};
use gma_core::relay::{run_reservation, Reservation};
use gma_core::{fixture, gma_direct, Rational, Resource};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn relay_agrees_with_direct(seed in any::<u64>(), cut in 0usize..4) {
        let g = common::graph_from_seed(seed, &RandomGraphConfig::default());
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31));
        let path = random_valid_path(&mut rng, &g, 8, false);
        prop_assume!(path.is_some());
        let path = path.unwrap();
        let direct = gma_direct(&path_view(&g, &path).unwrap());

        let granted = run_reservation(&g, &path, Rational::from_u64(0)).unwrap();
        let prefixes: Vec<Rational> = granted.trace().iter().map(|t| t.prefix.clone()).collect();
        prop_assert_eq!(&prefixes, &direct.prefix_allocs);
        prop_assert_eq!(granted, Reservation::Granted { value: direct.value.clone(), trace: granted_trace(&g, &path) });

        // threshold strictly between two prefix values, or above the first
        let threshold = match cut {
            0 => direct.prefix_allocs[0].clone() + common::q(1, 1),
            _ => direct.value.clone() + common::q(1, 1000),
        };
        let expected_hop = direct.prefix_allocs.iter().position(|p| *p < threshold);
        match run_reservation(&g, &path, threshold).unwrap() {
            Reservation::Granted { .. } => prop_assert_eq!(expected_hop, None),
            Reservation::Dropped { hop_index, preliminary_value, trace } => {
                prop_assert_eq!(Some(hop_index - 1), expected_hop);
                prop_assert_eq!(&preliminary_value, &direct.prefix_allocs[hop_index - 1]);
                prop_assert_eq!(trace.len(), hop_index);
            }
        }
    }
}

fn granted_trace(g: &gma_core::AllocationGraph<Rational>, path: &gma_core::Path) -> Vec<gma_core::relay::TraceLine<Rational>> {
    run_reservation(g, path, Rational::from_u64(0)).unwrap().trace().to_vec()
}

#[test]
fn fixture_paths_are_granted_their_allocation() {
    let g = fixture::modified_graph();
    let p = fixture::pi2(&g);
    match run_reservation(&g, &p, common::q(9, 20)).unwrap() {
        Reservation::Granted { value, .. } => assert_eq!(value, common::q(9, 20)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        run_reservation(&g, &p, common::q(10, 20)).unwrap(),
        Reservation::Dropped { hop_index: 3, .. }
    ));
}
