//! Recursive-descent parser for the ASCII LTL syntax.
//!
//! Precedence, tightest first: `! X F G`, then `U` (right-associative), `&`,
//! `|`, `->` (right-associative). The uppercase letters `X F G U` are always
//! operators, so `XXXa` reads as `X X X a` and `p1Up2` as `p1 U p2`; atom
//! names containing those letters must be quoted.

use super::formula::{AtomSet, Ltl};
use crate::error::{Error, Result};

pub(crate) fn is_op_char(c: char) -> bool {
    matches!(c, 'X' | 'F' | 'G' | 'U')
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Not,
    And,
    Or,
    Implies,
    Next,
    Finally,
    Globally,
    Until,
    True,
    False,
    Ident(String),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, msg: String| Error::Parse { pos, msg };
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            '!' => {
                out.push((pos, Tok::Not));
                i += 1;
            }
            '&' => {
                i += 1;
                if i < chars.len() && chars[i].1 == '&' {
                    i += 1;
                }
                out.push((pos, Tok::And));
            }
            '|' => {
                i += 1;
                if i < chars.len() && chars[i].1 == '|' {
                    i += 1;
                }
                out.push((pos, Tok::Or));
            }
            '-' => {
                if i + 1 < chars.len() && chars[i + 1].1 == '>' {
                    out.push((pos, Tok::Implies));
                    i += 2;
                } else {
                    return Err(err(pos, "expected '->'".into()));
                }
            }
            'X' => {
                out.push((pos, Tok::Next));
                i += 1;
            }
            'F' => {
                out.push((pos, Tok::Finally));
                i += 1;
            }
            'G' => {
                out.push((pos, Tok::Globally));
                i += 1;
            }
            'U' => {
                out.push((pos, Tok::Until));
                i += 1;
            }
            '"' => {
                let mut j = i + 1;
                let mut name = String::new();
                while j < chars.len() && chars[j].1 != '"' {
                    name.push(chars[j].1);
                    j += 1;
                }
                if j >= chars.len() {
                    return Err(err(pos, "unterminated quoted atom".into()));
                }
                if name.is_empty() {
                    return Err(err(pos, "empty quoted atom".into()));
                }
                out.push((pos, Tok::Ident(name)));
                i = j + 1;
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let lit: String = chars[i..j].iter().map(|(_, c)| *c).collect();
                match lit.as_str() {
                    "1" => out.push((pos, Tok::True)),
                    "0" => out.push((pos, Tok::False)),
                    _ => return Err(err(pos, format!("unexpected number '{lit}'"))),
                }
                i = j;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() {
                    let d = chars[j].1;
                    if (d.is_ascii_alphanumeric() || d == '_') && !is_op_char(d) {
                        j += 1;
                    } else {
                        break;
                    }
                }
                let word: String = chars[i..j].iter().map(|(_, c)| *c).collect();
                let tok = match word.as_str() {
                    "tt" | "true" => Tok::True,
                    "ff" | "false" => Tok::False,
                    _ => Tok::Ident(word),
                };
                out.push((pos, tok));
                i = j;
            }
            other => return Err(err(pos, format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

enum AtomMode<'a> {
    Fixed(&'a AtomSet),
    Infer(AtomSet),
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    atoms: AtomMode<'a>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn implies(&mut self) -> Result<Ltl> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Implies) {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Ltl::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Ltl> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            let rhs = self.and()?;
            lhs = Ltl::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Ltl> {
        let mut lhs = self.until()?;
        while self.peek() == Some(&Tok::And) {
            self.bump();
            let rhs = self.until()?;
            lhs = Ltl::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Ltl> {
        let lhs = self.unary()?;
        if self.peek() == Some(&Tok::Until) {
            self.bump();
            let rhs = self.until()?;
            return Ok(Ltl::until(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ltl> {
        match self.peek() {
            Some(Tok::Not) => {
                self.bump();
                Ok(Ltl::not(self.unary()?))
            }
            Some(Tok::Next) => {
                self.bump();
                Ok(Ltl::next(self.unary()?))
            }
            Some(Tok::Finally) => {
                self.bump();
                Ok(Ltl::finally(self.unary()?))
            }
            Some(Tok::Globally) => {
                self.bump();
                Ok(Ltl::globally(self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Ltl> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::LParen) => {
                let inner = self.implies()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(Error::Parse {
                        pos: self.pos(),
                        msg: "expected ')'".into(),
                    });
                }
                self.bump();
                Ok(inner)
            }
            Some(Tok::True) => Ok(Ltl::True),
            Some(Tok::False) => Ok(Ltl::False),
            Some(Tok::Ident(name)) => {
                let index = match &mut self.atoms {
                    AtomMode::Fixed(set) => set
                        .index_of(&name)
                        .ok_or_else(|| Error::UnknownAtom(name.clone()))?,
                    AtomMode::Infer(set) => set.intern(&name)?,
                };
                Ok(Ltl::Atom(index))
            }
            Some(t) => Err(Error::Parse {
                pos,
                msg: format!("unexpected token {t:?}"),
            }),
            None => Err(Error::Parse {
                pos,
                msg: "unexpected end of input".into(),
            }),
        }
    }
}

fn run<'a>(text: &str, atoms: AtomMode<'a>) -> Result<(Ltl, AtomMode<'a>)> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        atoms,
    };
    let f = p.implies()?;
    if p.at < p.toks.len() {
        return Err(Error::Parse {
            pos: p.pos(),
            msg: "trailing input".into(),
        });
    }
    Ok((f, p.atoms))
}

/// Parses `text`, collecting atoms in order of first occurrence.
pub fn parse(text: &str) -> Result<(Ltl, AtomSet)> {
    parse_extending(text, AtomSet::default())
}

/// Parses `text`, appending unseen atoms to `atoms`.
pub fn parse_extending(text: &str, atoms: AtomSet) -> Result<(Ltl, AtomSet)> {
    let (f, mode) = run(text, AtomMode::Infer(atoms))?;
    match mode {
        AtomMode::Infer(set) => Ok((f, set)),
        AtomMode::Fixed(_) => unreachable!(),
    }
}

/// Parses `text` against a fixed atom set; unknown atoms are an error.
pub fn parse_with(text: &str, atoms: &AtomSet) -> Result<Ltl> {
    run(text, AtomMode::Fixed(atoms)).map(|(f, _)| f)
}
