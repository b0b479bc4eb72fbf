//! Cross-module invariants over seeded random instances.

use std::collections::HashMap;

use csent_core::format::{instance_from_json, instance_to_json, state_from_json, state_to_json};
use csent_core::{
    build_state, entropy_formula, entropy_rank, entropy_rank_of_state, entropy_spectral,
    generate_random, global_factor_state, Caps, Instance, Prime, RandomSpec,
};
use proptest::prelude::*;

fn arb_instance() -> impl Strategy<Value = Instance> {
    (
        prop_oneof![Just(2u32), Just(3u32)],
        proptest::collection::vec(1usize..=2, 1..=2),
        proptest::collection::vec(1usize..=2, 1..=2),
        0usize..=2,
        any::<u64>(),
    )
        .prop_map(|(p, h1, h2, nu, seed)| {
            let spec = RandomSpec {
                p: Prime::new(p).unwrap(),
                side1_halfdims: h1,
                side2_halfdims: h2,
                nu,
                seed,
            };
            generate_random(&spec, &Caps::default()).unwrap()
        })
        .prop_filter("within the global cap", |inst| {
            let st = inst.stats();
            (inst.p().get() as u64).pow(st.d as u32) <= Caps::default().global_states
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stats_identities(inst in arb_instance()) {
        let st = inst.validate().unwrap();
        prop_assert_eq!(st.s1 + st.t1, st.d);
        prop_assert_eq!(st.s2 + st.t2, st.d);
        prop_assert_eq!(st.mu + st.nu, st.d);
        let k = entropy_formula(&inst).unwrap().exact_k.unwrap() as i64;
        prop_assert_eq!(k, st.entropy_exponent());
    }

    #[test]
    fn three_routes_agree(inst in arb_instance()) {
        let caps = Caps::default();
        let f = entropy_formula(&inst).unwrap();
        let (r, shape) = entropy_rank(&inst, &caps).unwrap();
        prop_assert_eq!(f.exact_k, r.exact_k);
        let state = build_state(&inst, &caps).unwrap();
        let (s, sp) = entropy_spectral(&state, &caps).unwrap();
        prop_assert!((s.nats - f.nats).abs() <= 1e-8);
        prop_assert_eq!(sp.rank() as u64, shape.rank);
        prop_assert!(sp.flatness() <= 1e-9);
        prop_assert_eq!(entropy_rank_of_state(&state).unwrap().0.exact_k, f.exact_k);
    }

    #[test]
    fn zero_phase_support(inst in arb_instance()) {
        let st = inst.stats();
        let state = build_state(&inst, &Caps::default()).unwrap();
        let p = inst.p().get() as usize;
        prop_assert_eq!(state.len(), p.pow((st.d - st.nu) as u32));
        prop_assert!(state.uniform_amplitude().is_some());
        if (p as u64).pow((st.t1 + st.t2) as u32) <= Caps::default().global_states {
            let g = global_factor_state(&inst, &Caps::default()).unwrap();
            prop_assert_eq!(g.len(), p.pow((st.t1 + st.t2) as u32));
        }
    }

    #[test]
    fn local_phases_preserve_support_and_norm(inst in arb_instance(), shift in 0u32..3) {
        let state = build_state(&inst, &Caps::default()).unwrap();
        let (rows, cols) = state.side_indices();
        let q = inst.p().get();
        let f1: HashMap<u64, u32> = rows.iter().map(|&i| (i, (i as u32 + shift) % q)).collect();
        let f2: HashMap<u64, u32> = cols.iter().map(|&i| (i, (i as u32 * 2) % q)).collect();
        let moved = state.apply_local_phases(&f1, &f2).unwrap();
        prop_assert_eq!(moved.support(), state.support());
        prop_assert_eq!(moved.norm_sq(), state.norm_sq());
    }

    #[test]
    fn files_round_trip(inst in arb_instance()) {
        let text = instance_to_json(&inst);
        let back = instance_from_json(&text).unwrap();
        prop_assert_eq!(instance_to_json(&back), text);
        prop_assert_eq!(&back, &inst);
        let state = build_state(&inst, &Caps::default()).unwrap();
        prop_assert_eq!(state_from_json(&state_to_json(&state)).unwrap(), state);
    }
}
