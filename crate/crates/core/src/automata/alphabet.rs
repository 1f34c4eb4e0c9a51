use std::fmt;

use crate::error::{Error, Result};
use crate::ltl::{AtomSet, MAX_ATOMS};

/// A letter id. For an alphabet with `k` indices, letter `(bits, i)` has id
/// `bits * k + (i - 1)`, so ids are ordered by bit-vector and then by index.
pub type Letter = u32;

/// The letter universe `2^AP × {1..k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    atoms: AtomSet,
    index_arity: u32,
}

impl Alphabet {
    pub fn new(atoms: AtomSet, index_arity: u32) -> Result<Self> {
        if atoms.len() > MAX_ATOMS {
            return Err(Error::TooManyAtoms {
                count: atoms.len(),
                max: MAX_ATOMS,
            });
        }
        if index_arity == 0 {
            return Err(Error::InvalidAutomaton(
                "index arity must be at least 1".into(),
            ));
        }
        Ok(Alphabet { atoms, index_arity })
    }

    pub fn plain(atoms: AtomSet) -> Result<Self> {
        Alphabet::new(atoms, 1)
    }

    pub fn atoms(&self) -> &AtomSet {
        &self.atoms
    }

    pub fn index_arity(&self) -> u32 {
        self.index_arity
    }

    pub fn bit_count(&self) -> u32 {
        1 << self.atoms.len()
    }

    pub fn letter_count(&self) -> usize {
        (self.bit_count() * self.index_arity) as usize
    }

    pub fn letters(&self) -> std::ops::Range<Letter> {
        0..self.letter_count() as Letter
    }

    /// Letter id of `(bits, index)` with `index` in `1..=k`.
    pub fn letter(&self, bits: u32, index: u32) -> Letter {
        debug_assert!(bits < self.bit_count());
        debug_assert!(index >= 1 && index <= self.index_arity);
        bits * self.index_arity + (index - 1)
    }

    pub fn bits(&self, letter: Letter) -> u32 {
        letter / self.index_arity
    }

    pub fn index(&self, letter: Letter) -> u32 {
        letter % self.index_arity + 1
    }

    /// The alphabet `Σ × [k·extra]`; letter `((σ, i), j)` maps to index `(i-1)·extra + j`.
    pub fn extend_index(&self, extra: u32) -> Alphabet {
        Alphabet {
            atoms: self.atoms.clone(),
            index_arity: self.index_arity * extra,
        }
    }

    /// Drops all indices.
    pub fn base(&self) -> Alphabet {
        Alphabet {
            atoms: self.atoms.clone(),
            index_arity: 1,
        }
    }

    pub fn describe(&self, letter: Letter) -> String {
        let atoms = self.atoms.atoms_of(self.bits(letter)).join(",");
        if self.index_arity > 1 {
            format!("{{{atoms}}}#{}", self.index(letter))
        } else {
            format!("{{{atoms}}}")
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{{{}}}", self.atoms.names().join(","))?;
        if self.index_arity > 1 {
            write!(f, " x [{}]", self.index_arity)?;
        }
        Ok(())
    }
}
