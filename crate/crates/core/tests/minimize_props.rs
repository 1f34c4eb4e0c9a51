use gfmredux::automata::{
    dcw_contained, lasso_member, AcceptanceKind, Alphabet, Automaton, LassoWord,
};
use gfmredux::gfg_min::{lift, minimize};
use gfmredux::ltl::AtomSet;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dca(atoms: usize, n: usize, table: &[(usize, bool)]) -> Automaton {
    let names: Vec<String> = (0..atoms).map(|i| format!("p{i}")).collect();
    let al = Alphabet::plain(AtomSet::new(names).unwrap()).unwrap();
    let mut d = Automaton::new(al.clone(), AcceptanceKind::CoBuchi, n, 0);
    for q in 0..n {
        for l in al.letters() {
            let (to, marked) = table[q * al.letter_count() + l as usize];
            d.add_edge(q, l, to % n, marked);
        }
    }
    d
}

fn arb_dca() -> impl Strategy<Value = Automaton> {
    (1usize..=2, 1usize..=6).prop_flat_map(|(atoms, n)| {
        let cells = n << atoms;
        proptest::collection::vec((0..n, any::<bool>()), cells)
            .prop_map(move |table| dca(atoms, n, &table))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn minimisation_preserves_language(d in arb_dca(), seed in any::<u64>()) {
        let min = minimize(&d).unwrap();
        prop_assert!(min.nca.num_states() <= d.num_states());
        prop_assert!(dcw_contained(&min.nca, &d).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..40 {
            let w = LassoWord::random(&mut rng, d.alphabet(), 4, 4);
            prop_assert_eq!(lasso_member(&min.nca, &w).unwrap(), lasso_member(&d, &w).unwrap());
        }
    }

    #[test]
    fn minimisation_is_idempotent(d in arb_dca()) {
        let min = minimize(&d).unwrap();
        let again = minimize(&lift(&min.nca).unwrap()).unwrap();
        prop_assert_eq!(again.nca.num_states(), min.nca.num_states());
        if min.nca.is_deterministic() {
            prop_assert_eq!(minimize(&min.nca).unwrap().nca.num_states(), min.nca.num_states());
        }
    }
}
