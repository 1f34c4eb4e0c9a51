use rand::Rng;
use serde::{Deserialize, Serialize};

use super::alphabet::{Alphabet, Letter};

/// The ultimately periodic word `prefix · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LassoWord {
    pub prefix: Vec<Letter>,
    pub cycle: Vec<Letter>,
}

impl LassoWord {
    pub fn new(prefix: Vec<Letter>, cycle: Vec<Letter>) -> Self {
        assert!(!cycle.is_empty(), "lasso cycle must be non-empty");
        LassoWord { prefix, cycle }
    }

    /// Number of positions `|prefix| + |cycle|`.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letter(&self, pos: usize) -> Letter {
        if pos < self.prefix.len() {
            self.prefix[pos]
        } else {
            self.cycle[pos - self.prefix.len()]
        }
    }

    /// Position reached after reading the letter at `pos`.
    pub fn next_pos(&self, pos: usize) -> usize {
        if pos + 1 < self.len() {
            pos + 1
        } else {
            self.prefix.len()
        }
    }

    /// Maps every letter, e.g. to strip or add choice indices.
    pub fn map(&self, f: impl Fn(Letter) -> Letter) -> LassoWord {
        LassoWord {
            prefix: self.prefix.iter().map(|&l| f(l)).collect(),
            cycle: self.cycle.iter().map(|&l| f(l)).collect(),
        }
    }

    pub fn describe(&self, alphabet: &Alphabet) -> String {
        let show = |ls: &[Letter]| {
            ls.iter()
                .map(|&l| alphabet.describe(l))
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!("{} ({})^w", show(&self.prefix), show(&self.cycle))
            .trim_start()
            .to_string()
    }

    /// A uniformly random lasso with `|prefix| ≤ max_prefix` and
    /// `1 ≤ |cycle| ≤ max_cycle`.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        alphabet: &Alphabet,
        max_prefix: usize,
        max_cycle: usize,
    ) -> LassoWord {
        assert!(max_cycle >= 1);
        let n = alphabet.letter_count() as Letter;
        let plen = rng.gen_range(0..=max_prefix);
        let clen = rng.gen_range(1..=max_cycle);
        LassoWord {
            prefix: (0..plen).map(|_| rng.gen_range(0..n)).collect(),
            cycle: (0..clen).map(|_| rng.gen_range(0..n)).collect(),
        }
    }
}
