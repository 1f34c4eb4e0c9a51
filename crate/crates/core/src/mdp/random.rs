use rand::seq::SliceRandom;
use rand::Rng;

use super::model::{Action, Mdp};
use crate::automata::Alphabet;
use crate::Rational;

/// A random MDP with `1..=max_states` states and `1..=max_actions` actions per
/// state. Probabilities are multiples of 1/8 over at most three successors;
/// labels are uniform over the alphabet. Successors of state `s` are drawn
/// from `s..n` three times out of four, and a quarter of the non-initial
/// states only loop on themselves, so that several bottom regions compete
/// and values strictly between 0 and 1 are common.
pub fn random_mdp<R: Rng + ?Sized>(
    rng: &mut R,
    alphabet: &Alphabet,
    max_states: usize,
    max_actions: usize,
) -> Mdp {
    assert!(max_states >= 1 && max_actions >= 1);
    let n = rng.gen_range(1..=max_states);
    let letters = alphabet.letter_count() as u32;
    let actions = (0..n)
        .map(|s| {
            let count = rng.gen_range(1..=max_actions);
            let absorbing = s > 0 && rng.gen_ratio(1, 4);
            (0..count)
                .map(|i| {
                    let pool: Vec<usize> = if absorbing {
                        vec![s]
                    } else if rng.gen_ratio(3, 4) {
                        (s..n).collect()
                    } else {
                        (0..n).collect()
                    };
                    let fanout = rng.gen_range(1..=pool.len().min(3));
                    let targets: Vec<usize> = pool.choose_multiple(rng, fanout).copied().collect();
                    // split 8 eighths into `fanout` positive parts
                    let mut cuts: Vec<u32> = (1..8).collect::<Vec<_>>();
                    cuts.shuffle(rng);
                    let mut cuts: Vec<u32> = cuts.into_iter().take(fanout - 1).collect();
                    cuts.sort_unstable();
                    let mut prev = 0;
                    let mut succ = Vec::with_capacity(fanout);
                    for (j, &t) in targets.iter().enumerate() {
                        let next = cuts.get(j).copied().unwrap_or(8);
                        succ.push((t, Rational::new((next - prev).into(), 8.into())));
                        prev = next;
                    }
                    Action {
                        name: format!("a{i}"),
                        letter: rng.gen_range(0..letters),
                        succ,
                    }
                })
                .collect()
        })
        .collect();
    Mdp::new(alphabet.clone(), 0, actions).expect("generated MDP is well-formed")
}
