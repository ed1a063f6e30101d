use hodgelab_core::charclass::{q, verify_conjugate_identity, FormalClass};
use hodgelab_core::flag::{bott_dim, curvature_index_of_weight, RootSystem, Weight};
use num_traits::Zero;
use proptest::prelude::*;

fn weight_strategy() -> impl Strategy<Value = (usize, Vec<i64>)> {
    (2usize..=3).prop_flat_map(|rank| (Just(rank), prop::collection::vec(-12i64..=12, rank)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn dominant_chamber_word_length_is_index((rank, fund) in weight_strategy()) {
        let rs = RootSystem::a(rank).unwrap();
        let w = Weight::from_fundamental(&fund);
        prop_assume!(rs.require_regular(&w).is_ok());
        let (elt, dom) = rs.to_dominant(&w).unwrap();
        prop_assert!(dom.is_dominant());
        prop_assert_eq!(elt.length(), rs.index_of_weight(&w).unwrap());
        prop_assert_eq!(elt.apply(&w), dom);
        prop_assert_eq!(elt.length(), rs.inversions(&elt));
    }

    #[test]
    fn curvature_index_matches_weight_index((rank, fund) in weight_strategy()) {
        let rs = RootSystem::a(rank).unwrap();
        let w = Weight::from_fundamental(&fund);
        prop_assume!(rs.require_regular(&w).is_ok());
        let sig = curvature_index_of_weight(&rs, &w).unwrap();
        prop_assert_eq!(sig.n_minus, rs.index_of_weight(&w).unwrap());
        prop_assert_eq!(sig.n_minus + sig.n_plus, rs.positive_roots.len());
    }

    #[test]
    fn bott_vanishes_off_index((rank, fund) in weight_strategy()) {
        let rs = RootSystem::a(rank).unwrap();
        let w = Weight::from_fundamental(&fund);
        let nonzero = (0..=rs.positive_roots.len())
            .filter(|&k| bott_dim(&rs, &w, k).unwrap().dim > 0)
            .count();
        prop_assert!(nonzero <= 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugate_todd_identity(
        roots in prop::collection::vec(prop::collection::vec((-5i64..=5, 1i64..=4), 2), 1..=4),
        trunc in 1u32..=6,
    ) {
        let classes: Vec<FormalClass> = roots
            .iter()
            .map(|r| FormalClass::linear(&r.iter().map(|&(n, d)| q(n, d)).collect::<Vec<_>>()))
            .collect();
        prop_assert!(verify_conjugate_identity(&classes, 2, trunc).is_zero());
    }
}
