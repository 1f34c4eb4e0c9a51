use std::fmt;

use crate::error::{Error, Result};

/// Maximum number of atomic propositions supported by the explicit-letter algorithms.
pub const MAX_ATOMS: usize = 16;

/// Ordered set of atomic proposition names.
///
/// The position of a name fixes its bit in the letter encoding: a letter is a
/// subset of atoms, stored as a bit-vector where bit `i` is atom `i`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AtomSet {
    names: Vec<String>,
}

impl AtomSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut set = AtomSet::default();
        for name in names {
            let name = name.into();
            if set.index_of(&name).is_some() {
                return Err(Error::DuplicateAtom(name));
            }
            set.push(name)?;
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Returns the index of `name`, appending it if it is not present yet.
    pub fn intern(&mut self, name: &str) -> Result<usize> {
        match self.index_of(name) {
            Some(i) => Ok(i),
            None => {
                self.push(name.to_string())?;
                Ok(self.names.len() - 1)
            }
        }
    }

    fn push(&mut self, name: String) -> Result<()> {
        if name.is_empty() {
            return Err(Error::EmptyAtomName);
        }
        if self.names.len() >= MAX_ATOMS {
            return Err(Error::TooManyAtoms {
                count: self.names.len() + 1,
                max: MAX_ATOMS,
            });
        }
        self.names.push(name);
        Ok(())
    }

    /// Bit-vector of the named atoms.
    pub fn letter_of<S: AsRef<str>>(&self, atoms: &[S]) -> Result<u32> {
        let mut bits = 0u32;
        for a in atoms {
            let i = self
                .index_of(a.as_ref())
                .ok_or_else(|| Error::UnknownAtom(a.as_ref().to_string()))?;
            bits |= 1 << i;
        }
        Ok(bits)
    }

    /// Names of the atoms set in `bits`, in atom order.
    pub fn atoms_of(&self, bits: u32) -> Vec<String> {
        (0..self.len())
            .filter(|i| bits & (1 << i) != 0)
            .map(|i| self.names[i].clone())
            .collect()
    }
}

/// LTL formula over atom indices of some [`AtomSet`].
///
/// Equality is structural. `Release` only arises from negation normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ltl {
    True,
    False,
    Atom(usize),
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Globally(Box<Ltl>),
    Finally(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    Release(Box<Ltl>, Box<Ltl>),
}

impl Ltl {
    pub fn atom(i: usize) -> Ltl {
        Ltl::Atom(i)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Ltl) -> Ltl {
        Ltl::Not(Box::new(f))
    }

    pub fn and(l: Ltl, r: Ltl) -> Ltl {
        Ltl::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Ltl, r: Ltl) -> Ltl {
        Ltl::Or(Box::new(l), Box::new(r))
    }

    pub fn next(f: Ltl) -> Ltl {
        Ltl::Next(Box::new(f))
    }

    /// `X^n f`.
    pub fn next_n(f: Ltl, n: usize) -> Ltl {
        (0..n).fold(f, |acc, _| Ltl::next(acc))
    }

    pub fn globally(f: Ltl) -> Ltl {
        Ltl::Globally(Box::new(f))
    }

    pub fn finally(f: Ltl) -> Ltl {
        Ltl::Finally(Box::new(f))
    }

    pub fn until(l: Ltl, r: Ltl) -> Ltl {
        Ltl::Until(Box::new(l), Box::new(r))
    }

    pub fn release(l: Ltl, r: Ltl) -> Ltl {
        Ltl::Release(Box::new(l), Box::new(r))
    }

    /// `l -> r`, eliminated as `!l | r`.
    pub fn implies(l: Ltl, r: Ltl) -> Ltl {
        Ltl::or(Ltl::not(l), r)
    }

    /// Left-nested conjunction of a non-empty list.
    pub fn and_all(items: impl IntoIterator<Item = Ltl>) -> Ltl {
        let mut it = items.into_iter();
        let first = it.next().unwrap_or(Ltl::True);
        it.fold(first, Ltl::and)
    }

    /// Left-nested disjunction of a non-empty list.
    pub fn or_all(items: impl IntoIterator<Item = Ltl>) -> Ltl {
        let mut it = items.into_iter();
        let first = it.next().unwrap_or(Ltl::False);
        it.fold(first, Ltl::or)
    }

    /// `GF f`.
    pub fn gf(f: Ltl) -> Ltl {
        Ltl::globally(Ltl::finally(f))
    }

    /// The body `f` if this formula is `G F f`.
    pub fn gf_body(&self) -> Option<&Ltl> {
        match self {
            Ltl::Globally(inner) => match inner.as_ref() {
                Ltl::Finally(body) => Some(body),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn children(&self) -> Vec<&Ltl> {
        match self {
            Ltl::True | Ltl::False | Ltl::Atom(_) => vec![],
            Ltl::Not(f) | Ltl::Next(f) | Ltl::Globally(f) | Ltl::Finally(f) => vec![f],
            Ltl::And(l, r) | Ltl::Or(l, r) | Ltl::Until(l, r) | Ltl::Release(l, r) => vec![l, r],
        }
    }

    /// Largest atom index used plus one.
    pub fn atom_bound(&self) -> usize {
        match self {
            Ltl::Atom(i) => i + 1,
            _ => self
                .children()
                .iter()
                .map(|c| c.atom_bound())
                .max()
                .unwrap_or(0),
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Renders the formula with atom names from `atoms`; the output parses back
    /// to the same tree.
    pub fn display<'a>(&'a self, atoms: &'a AtomSet) -> DisplayLtl<'a> {
        DisplayLtl { f: self, atoms }
    }
}

pub struct DisplayLtl<'a> {
    f: &'a Ltl,
    atoms: &'a AtomSet,
}

fn is_binary(f: &Ltl) -> bool {
    matches!(
        f,
        Ltl::And(..) | Ltl::Or(..) | Ltl::Until(..) | Ltl::Release(..)
    )
}

fn needs_quotes(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return true;
    };
    let plain_start =
        (first.is_ascii_alphabetic() || first == '_') && !super::parse::is_op_char(first);
    let plain_rest = name
        .chars()
        .all(|c| (c.is_ascii_alphanumeric() || c == '_') && !super::parse::is_op_char(c));
    !(plain_start && plain_rest) || name == "tt" || name == "ff"
}

impl DisplayLtl<'_> {
    fn write(&self, f: &Ltl, out: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
        match f {
            Ltl::True => write!(out, "tt"),
            Ltl::False => write!(out, "ff"),
            Ltl::Atom(i) => {
                let name = self
                    .atoms
                    .names()
                    .get(*i)
                    .map(String::as_str)
                    .unwrap_or("?");
                if needs_quotes(name) {
                    write!(out, "\"{name}\"")
                } else {
                    write!(out, "{name}")
                }
            }
            Ltl::Not(g) => self.unary("!", g, out),
            Ltl::Next(g) => self.unary("X", g, out),
            Ltl::Globally(g) => self.unary("G", g, out),
            Ltl::Finally(g) => self.unary("F", g, out),
            Ltl::And(l, r) => self.binary(" & ", l, r, out, nested),
            Ltl::Or(l, r) => self.binary(" | ", l, r, out, nested),
            Ltl::Until(l, r) => self.binary(" U ", l, r, out, nested),
            // no surface syntax for release; print its until-dual
            Ltl::Release(l, r) => {
                let dual = Ltl::not(Ltl::until(Ltl::not((**l).clone()), Ltl::not((**r).clone())));
                self.write(&dual, out, nested)
            }
        }
    }

    fn unary(&self, op: &str, g: &Ltl, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{op}")?;
        if is_binary(g) {
            write!(out, "(")?;
            self.write(g, out, false)?;
            write!(out, ")")
        } else {
            self.write(g, out, true)
        }
    }

    fn binary(
        &self,
        op: &str,
        l: &Ltl,
        r: &Ltl,
        out: &mut fmt::Formatter<'_>,
        nested: bool,
    ) -> fmt::Result {
        if nested {
            write!(out, "(")?;
        }
        self.write(l, out, true)?;
        write!(out, "{op}")?;
        self.write(r, out, true)?;
        if nested {
            write!(out, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for DisplayLtl<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.f, f, false)
    }
}
