use extraconn::extremal::{binary_decomposition, ex_hypercube, xi};
use extraconn::oracle::{sample_cuts, xi_bruteforce, OracleConfig, SampleConfig};
use extraconn::{Family, GraphSpec, VertexSet};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = GraphSpec> {
    (2u32..=10).prop_flat_map(|n| {
        prop_oneof![Just(None), (1..n).prop_map(Some)]
            .prop_map(move |k| GraphSpec::new(n, k).unwrap())
    })
}

proptest! {
    #[test]
    fn decomposition_round_trip(m in 1u64..=1 << 20) {
        let d = binary_decomposition(m).unwrap();
        prop_assert!(d.exponents().windows(2).all(|w| w[0] > w[1]));
        prop_assert_eq!(d.exponents().iter().map(|&t| 1u64 << t).sum::<u64>(), m);
        prop_assert_eq!(d.value(), m);
    }

    #[test]
    fn superadditivity_large_n(n in 13u32..=62, a in any::<u64>(), b in any::<u64>()) {
        let total = 1u64 << n;
        let m0 = a % (total / 2) + 1;
        let m1 = m0 + b % (total - 2 * m0 + 1);
        let lhs = ex_hypercube(n, m0 + m1).unwrap();
        let rhs = ex_hypercube(n, m0).unwrap() + ex_hypercube(n, m1).unwrap() + 2 * u128::from(m0);
        prop_assert!(lhs >= rhs);
    }

    #[test]
    fn boundary_identities(spec in spec_strategy(), bits in prop::collection::vec(any::<bool>(), 1024)) {
        let total = spec.vertex_count();
        let ids = (0..total).filter(|&v| bits[v as usize]);
        let set = VertexSet::from_ids(spec.n(), ids).unwrap();
        prop_assume!(!set.is_empty() && set.len() < total);
        let b = spec.boundary_size(&set).unwrap();
        prop_assert_eq!(b, spec.boundary_size(&set.complement()).unwrap());
        let inner = spec.induced_double_edge_count(&set).unwrap();
        prop_assert_eq!(b + inner, u64::from(spec.regularity()) * set.len());
    }

    #[test]
    fn neighbors_are_regular(spec in spec_strategy(), v in any::<u64>()) {
        let v = v % spec.vertex_count();
        let nb = spec.neighbors(v).unwrap();
        prop_assert_eq!(nb.len(), u64::from(spec.regularity()));
        prop_assert!(!nb.contains(v));
        for u in nb.iter() {
            prop_assert!(spec.neighbors(u).unwrap().contains(v));
        }
    }

    #[test]
    fn samples_respect_xi(n in 4u32..=9, seed in any::<u64>()) {
        let spec = GraphSpec::enhanced(n, 2).unwrap();
        let family = Family::enhanced(n).unwrap();
        for s in sample_cuts(spec, SampleConfig::new(200, seed)).unwrap() {
            prop_assert!(s.both_connected);
            prop_assert!(u128::from(s.cut_size) >= xi(family, s.h).unwrap());
        }
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>()) {
        let spec = GraphSpec::enhanced(6, 2).unwrap();
        let a: Vec<_> = sample_cuts(spec, SampleConfig::new(50, seed)).unwrap().collect();
        let b: Vec<_> = sample_cuts(spec, SampleConfig::new(50, seed)).unwrap().collect();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn oracle_witnesses_revalidate(k in prop_oneof![Just(None), Just(Some(1u32)), Just(Some(2u32))], m in 1u64..=8) {
        let spec = GraphSpec::new(4, k).unwrap();
        let r = xi_bruteforce(spec, m, OracleConfig::default()).unwrap();
        let w = &r.witness;
        prop_assert_eq!(w.len(), m);
        prop_assert!(spec.is_connected_subset(w).unwrap());
        prop_assert!(spec.is_connected_subset(&w.complement()).unwrap());
        prop_assert_eq!(spec.boundary_size(w).unwrap(), r.xi_exact);
    }
}
