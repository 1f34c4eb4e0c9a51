//! A subset of HOA v1: transition-based Büchi / co-Büchi acceptance with
//! explicit transition labels.
//!
//! Choice indices of `Σ × [k]` alphabets travel as extra propositions
//! `_idx0.._idx{m-1}` holding the bits of `i - 1`, plus a
//! `gfmredux-index-arity: k` header so that `k` survives the round trip when it
//! is not a power of two.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::alphabet::Alphabet;
use super::automaton::{AcceptanceKind, Automaton};
use crate::error::{Error, Result};
use crate::ltl::AtomSet;

const INDEX_PREFIX: &str = "_idx";
const ARITY_HEADER: &str = "gfmredux-index-arity";

fn index_bits(k: u32) -> u32 {
    if k <= 1 {
        0
    } else {
        32 - (k - 1).leading_zeros()
    }
}

// ---------------------------------------------------------------- export

/// Cube `(value, mask)`: the variables in `mask` must equal their bit in `value`.
fn cover(minterms: &[u32], vars: u32) -> Vec<(u32, u32)> {
    fn go(set: Vec<u32>, var: u32, vars: u32, value: u32, mask: u32, out: &mut Vec<(u32, u32)>) {
        if set.is_empty() {
            return;
        }
        let remaining = vars - var;
        if set.len() as u64 == 1u64 << remaining {
            out.push((value, mask));
            return;
        }
        let bit = 1 << var;
        let (ones, zeros): (Vec<u32>, Vec<u32>) = set.into_iter().partition(|m| m & bit != 0);
        let zero_set: std::collections::BTreeSet<u32> = zeros.iter().copied().collect();
        let mut both = Vec::new();
        let mut only1 = Vec::new();
        for m in ones {
            if zero_set.contains(&(m & !bit)) {
                both.push(m & !bit);
            } else {
                only1.push(m);
            }
        }
        let both_set: std::collections::BTreeSet<u32> = both.iter().copied().collect();
        let only0: Vec<u32> = zeros
            .into_iter()
            .filter(|m| !both_set.contains(m))
            .collect();
        go(both, var + 1, vars, value, mask, out);
        go(only0, var + 1, vars, value, mask | bit, out);
        go(only1, var + 1, vars, value | bit, mask | bit, out);
    }
    let mut out = Vec::new();
    go(minterms.to_vec(), 0, vars, 0, 0, &mut out);
    out
}

fn format_cube(value: u32, mask: u32, vars: u32) -> String {
    if mask == 0 {
        return "t".into();
    }
    (0..vars)
        .filter(|v| mask & (1 << v) != 0)
        .map(|v| {
            if value & (1 << v) != 0 {
                v.to_string()
            } else {
                format!("!{v}")
            }
        })
        .collect::<Vec<_>>()
        .join("&")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Serialises a Büchi or co-Büchi automaton. States keep their ids.
pub fn hoa_export(a: &Automaton) -> Result<String> {
    let (acc_name, acc) = match a.kind() {
        AcceptanceKind::Buchi => ("Buchi", "Inf(0)"),
        AcceptanceKind::CoBuchi => ("co-Buchi", "Fin(0)"),
        AcceptanceKind::Finite => {
            return Err(Error::WrongKind {
                expected: "Büchi or co-Büchi",
                found: a.kind().name(),
            })
        }
    };
    let al = a.alphabet();
    let k = al.index_arity();
    let base = al.atoms().len() as u32;
    let m = index_bits(k);
    let vars = base + m;
    let mut ap: Vec<String> = al.atoms().names().iter().map(|s| quote(s)).collect();
    ap.extend((0..m).map(|j| quote(&format!("{INDEX_PREFIX}{j}"))));

    let mut out = String::new();
    writeln!(out, "HOA: v1").unwrap();
    writeln!(out, "States: {}", a.num_states()).unwrap();
    writeln!(out, "Start: {}", a.initial()).unwrap();
    if ap.is_empty() {
        writeln!(out, "AP: 0").unwrap();
    } else {
        writeln!(out, "AP: {} {}", ap.len(), ap.join(" ")).unwrap();
    }
    writeln!(out, "acc-name: {acc_name}").unwrap();
    writeln!(out, "Acceptance: 1 {acc}").unwrap();
    let mut props = vec!["trans-labels", "explicit-labels", "trans-acc"];
    if a.is_deterministic() {
        props.push("deterministic");
    }
    if a.is_complete() {
        props.push("complete");
    }
    writeln!(out, "properties: {}", props.join(" ")).unwrap();
    if k > 1 {
        writeln!(out, "{ARITY_HEADER}: {k}").unwrap();
    }
    writeln!(out, "--BODY--").unwrap();
    for q in a.states() {
        writeln!(out, "State: {q}").unwrap();
        let mut groups: BTreeMap<(usize, bool), Vec<u32>> = BTreeMap::new();
        for l in al.letters() {
            let minterm = al.bits(l) | ((al.index(l) - 1) << base);
            for e in a.succ(q, l) {
                groups.entry((e.to, e.marked)).or_default().push(minterm);
            }
        }
        for ((to, marked), minterms) in groups {
            for (value, mask) in cover(&minterms, vars) {
                let acc = if marked { " {0}" } else { "" };
                writeln!(out, "[{}] {to}{acc}", format_cube(value, mask, vars)).unwrap();
            }
        }
    }
    writeln!(out, "--END--").unwrap();
    Ok(out)
}

// ---------------------------------------------------------------- import

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Header(String),
    Ident(String),
    Str(String),
    Int(u64),
    Sym(char),
    Body,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, msg: &str| Error::Hoa {
        line,
        col,
        msg: msg.to_string(),
    };
    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c.is_whitespace() {
            bump!();
        } else if c == '/' && chars.get(i + 1) == Some(&'*') {
            bump!();
            bump!();
            loop {
                if i >= chars.len() {
                    return Err(err(tl, tc, "unterminated comment"));
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    bump!();
                    bump!();
                    break;
                }
                bump!();
            }
        } else if c == '"' {
            bump!();
            let mut s = String::new();
            loop {
                if i >= chars.len() {
                    return Err(err(tl, tc, "unterminated string"));
                }
                match chars[i] {
                    '"' => {
                        bump!();
                        break;
                    }
                    '\\' if i + 1 < chars.len() => {
                        bump!();
                        s.push(chars[i]);
                        bump!();
                    }
                    ch => {
                        s.push(ch);
                        bump!();
                    }
                }
            }
            out.push(Token {
                tok: Tok::Str(s),
                line: tl,
                col: tc,
            });
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                bump!();
            }
            let v = s.parse().map_err(|_| err(tl, tc, "integer out of range"))?;
            out.push(Token {
                tok: Tok::Int(v),
                line: tl,
                col: tc,
            });
        } else if c == '-' && chars[i..].starts_with(&['-', '-']) {
            let mut s = String::new();
            while i < chars.len() && (chars[i] == '-' || chars[i].is_ascii_alphabetic()) {
                s.push(chars[i]);
                bump!();
            }
            let tok = match s.as_str() {
                "--BODY--" => Tok::Body,
                "--END--" => Tok::End,
                "--ABORT--" => return Err(err(tl, tc, "automaton aborted")),
                _ => return Err(err(tl, tc, &format!("unexpected '{s}'"))),
            };
            out.push(Token {
                tok,
                line: tl,
                col: tc,
            });
        } else if c.is_alphabetic() || c == '_' || c == '@' {
            let mut s = String::new();
            while i < chars.len()
                && (chars[i].is_alphanumeric() || matches!(chars[i], '_' | '-' | '@'))
            {
                s.push(chars[i]);
                bump!();
            }
            if i < chars.len() && chars[i] == ':' {
                bump!();
                out.push(Token {
                    tok: Tok::Header(s),
                    line: tl,
                    col: tc,
                });
            } else {
                out.push(Token {
                    tok: Tok::Ident(s),
                    line: tl,
                    col: tc,
                });
            }
        } else if "[]{}()!&|".contains(c) {
            bump!();
            out.push(Token {
                tok: Tok::Sym(c),
                line: tl,
                col: tc,
            });
        } else {
            return Err(err(tl, tc, &format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Label {
    True,
    False,
    Var(usize),
    Not(Box<Label>),
    And(Box<Label>, Box<Label>),
    Or(Box<Label>, Box<Label>),
}

impl Label {
    fn eval(&self, assignment: u64) -> bool {
        match self {
            Label::True => true,
            Label::False => false,
            Label::Var(v) => assignment & (1 << v) != 0,
            Label::Not(l) => !l.eval(assignment),
            Label::And(l, r) => l.eval(assignment) && r.eval(assignment),
            Label::Or(l, r) => l.eval(assignment) || r.eval(assignment),
        }
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    eof: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|t| (t.line, t.col))
            .unwrap_or(self.eof)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Hoa {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn expect_int(&mut self, what: &str) -> Result<u64> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn label_or(&mut self, aps: usize) -> Result<Label> {
        let mut l = self.label_and(aps)?;
        while self.peek() == Some(&Tok::Sym('|')) {
            self.pos += 1;
            l = Label::Or(Box::new(l), Box::new(self.label_and(aps)?));
        }
        Ok(l)
    }

    fn label_and(&mut self, aps: usize) -> Result<Label> {
        let mut l = self.label_atom(aps)?;
        while self.peek() == Some(&Tok::Sym('&')) {
            self.pos += 1;
            l = Label::And(Box::new(l), Box::new(self.label_atom(aps)?));
        }
        Ok(l)
    }

    fn label_atom(&mut self, aps: usize) -> Result<Label> {
        match self.peek().cloned() {
            Some(Tok::Sym('!')) => {
                self.pos += 1;
                Ok(Label::Not(Box::new(self.label_atom(aps)?)))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let l = self.label_or(aps)?;
                self.expect_sym(')')?;
                Ok(l)
            }
            Some(Tok::Ident(s)) if s == "t" => {
                self.pos += 1;
                Ok(Label::True)
            }
            Some(Tok::Ident(s)) if s == "f" => {
                self.pos += 1;
                Ok(Label::False)
            }
            Some(Tok::Int(v)) => {
                if v as usize >= aps {
                    return self.err(format!("AP index {v} out of range"));
                }
                self.pos += 1;
                Ok(Label::Var(v as usize))
            }
            Some(Tok::Ident(s)) if s.starts_with('@') => self.err("aliases are not supported"),
            _ => self.err("expected a label expression"),
        }
    }

    /// Skips the remaining tokens of an ignored header.
    fn skip_header_args(&mut self) {
        while let Some(t) = self.peek() {
            match t {
                Tok::Header(_) | Tok::Body => break,
                _ => self.pos += 1,
            }
        }
    }
}

/// Parses HOA text into an automaton. Each state keeps its HOA number.
pub fn hoa_import(text: &str) -> Result<Automaton> {
    let toks = lex(text)?;
    let eof = (text.lines().count().max(1), 1);
    let mut p = Parser { toks, pos: 0, eof };

    match (p.next(), p.next()) {
        (Some(Tok::Header(h)), Some(Tok::Ident(v))) if h == "HOA" && v == "v1" => {}
        _ => {
            p.pos = 0;
            return p.err("expected 'HOA: v1'");
        }
    }
    let mut states: Option<usize> = None;
    let mut start: Option<usize> = None;
    let mut ap_names: Option<Vec<String>> = None;
    let mut kind: Option<AcceptanceKind> = None;
    let mut arity: Option<u32> = None;
    loop {
        match p.peek().cloned() {
            Some(Tok::Body) => {
                p.pos += 1;
                break;
            }
            Some(Tok::Header(h)) => {
                p.pos += 1;
                match h.as_str() {
                    "States" => states = Some(p.expect_int("a state count")? as usize),
                    "Start" => {
                        if start.is_some() {
                            return p.err("multiple initial states are not supported");
                        }
                        start = Some(p.expect_int("an initial state")? as usize);
                        if p.peek() == Some(&Tok::Sym('&')) {
                            return p.err("conjunctive initial states are not supported");
                        }
                    }
                    "AP" => {
                        let n = p.expect_int("an AP count")? as usize;
                        let mut names = Vec::with_capacity(n);
                        for _ in 0..n {
                            match p.next() {
                                Some(Tok::Str(s)) => names.push(s),
                                _ => {
                                    p.pos -= 1;
                                    return p.err("expected a quoted AP name");
                                }
                            }
                        }
                        ap_names = Some(names);
                    }
                    "Acceptance" => {
                        let sets = p.expect_int("a number of acceptance sets")?;
                        let cond_start = p.pos;
                        let (line, col) = p.here();
                        let mut cond = String::new();
                        p.skip_header_args();
                        for t in &p.toks[cond_start..p.pos] {
                            match &t.tok {
                                Tok::Ident(s) => cond.push_str(s),
                                Tok::Int(v) => cond.push_str(&v.to_string()),
                                Tok::Sym(c) => cond.push(*c),
                                _ => cond.push('?'),
                            }
                        }
                        kind = Some(match (sets, cond.as_str()) {
                            (1, "Inf(0)") => AcceptanceKind::Buchi,
                            (1, "Fin(0)") => AcceptanceKind::CoBuchi,
                            _ => {
                                let _ = (line, col);
                                return Err(Error::UnsupportedAcceptance(format!("{sets} {cond}")));
                            }
                        });
                    }
                    "properties" => {
                        let args_start = p.pos;
                        p.skip_header_args();
                        let state_acc = p.toks[args_start..p.pos]
                            .iter()
                            .any(|t| t.tok == Tok::Ident("state-acc".into()));
                        if state_acc {
                            return Err(Error::StateBasedAcceptance);
                        }
                    }
                    ARITY_HEADER => {
                        let k = p.expect_int("an index arity")?;
                        if k == 0 || k > u32::MAX as u64 {
                            p.pos -= 1;
                            return p.err("index arity must be positive");
                        }
                        arity = Some(k as u32);
                    }
                    _ => p.skip_header_args(),
                }
            }
            Some(_) => return p.err("expected a header or --BODY--"),
            None => return p.err("missing --BODY--"),
        }
    }

    let Some(kind) = kind else {
        return p.err("missing Acceptance header");
    };
    let ap_names = ap_names.unwrap_or_default();
    let mut base_names = Vec::new();
    // per HOA AP: Ok(base position) or Err(index bit)
    let mut roles: Vec<std::result::Result<usize, u32>> = Vec::new();
    for name in &ap_names {
        match name
            .strip_prefix(INDEX_PREFIX)
            .and_then(|s| s.parse::<u32>().ok())
        {
            Some(bit) => roles.push(Err(bit)),
            None => {
                roles.push(Ok(base_names.len()));
                base_names.push(name.clone());
            }
        }
    }
    let idx_bits = roles.iter().filter(|r| r.is_err()).count() as u32;
    if roles.iter().any(|r| matches!(r, Err(b) if *b >= idx_bits)) {
        return p.err("index propositions must be numbered _idx0.._idx{m-1}");
    }
    let k = match arity {
        Some(k) => {
            if index_bits(k) != idx_bits {
                return p.err(format!(
                    "index arity {k} does not match {idx_bits} index propositions"
                ));
            }
            k
        }
        None => 1 << idx_bits,
    };
    let atoms = AtomSet::new(base_names)?;
    let alphabet = Alphabet::new(atoms, k)?;
    if ap_names.len() > 24 {
        return p.err("too many atomic propositions");
    }

    // letter of each full HOA assignment (None for unused index values)
    let letters_of: Vec<Option<u32>> = (0..1u64 << ap_names.len())
        .map(|assignment| {
            let mut bits = 0u32;
            let mut idx = 0u32;
            for (j, role) in roles.iter().enumerate() {
                if assignment & (1 << j) != 0 {
                    match role {
                        Ok(b) => bits |= 1 << b,
                        Err(b) => idx |= 1 << b,
                    }
                }
            }
            (idx < k).then(|| alphabet.letter(bits, idx + 1))
        })
        .collect();

    let mut trans: Vec<(usize, u32, usize, bool)> = Vec::new();
    let mut declared = 0usize;
    let mut max_state = start.unwrap_or(0);
    loop {
        match p.peek().cloned() {
            Some(Tok::End) => {
                p.pos += 1;
                break;
            }
            Some(Tok::Header(h)) if h == "State" => {
                p.pos += 1;
                if p.peek() == Some(&Tok::Sym('[')) {
                    return p.err("state labels are not supported; use transition labels");
                }
                let q = p.expect_int("a state number")? as usize;
                declared = declared.max(q + 1);
                max_state = max_state.max(q);
                if let Some(Tok::Str(_)) = p.peek() {
                    p.pos += 1;
                }
                if p.peek() == Some(&Tok::Sym('{')) {
                    return Err(Error::StateBasedAcceptance);
                }
                while p.peek() == Some(&Tok::Sym('[')) {
                    p.pos += 1;
                    let label = p.label_or(ap_names.len())?;
                    p.expect_sym(']')?;
                    let to = p.expect_int("a successor state")? as usize;
                    if p.peek() == Some(&Tok::Sym('&')) {
                        return p.err("alternating transitions are not supported");
                    }
                    max_state = max_state.max(to);
                    let mut marked = false;
                    if p.peek() == Some(&Tok::Sym('{')) {
                        p.pos += 1;
                        while let Some(Tok::Int(s)) = p.peek().cloned() {
                            if s != 0 {
                                return p.err(format!("acceptance set {s} does not exist"));
                            }
                            marked = true;
                            p.pos += 1;
                        }
                        p.expect_sym('}')?;
                    }
                    for (assignment, letter) in letters_of.iter().enumerate() {
                        if let Some(l) = letter {
                            if label.eval(assignment as u64) {
                                trans.push((q, *l, to, marked));
                            }
                        }
                    }
                }
                if let Some(Tok::Int(_)) = p.peek() {
                    return p.err("implicit labels are not supported; use explicit [labels]");
                }
            }
            Some(_) => return p.err("expected 'State:' or --END--"),
            None => return p.err("missing --END--"),
        }
    }
    if p.pos < p.toks.len() {
        return p.err("trailing content after --END--");
    }
    let n = states.unwrap_or(declared).max(declared);
    if max_state >= n {
        let (line, col) = p.eof;
        return Err(Error::Hoa {
            line,
            col,
            msg: format!("state {max_state} exceeds the declared {n} states"),
        });
    }
    let Some(start) = start else {
        return p.err("missing Start header");
    };
    // The same transition listed twice: Büchi keeps the better (marked)
    // copy, co-Büchi the better (unmarked) one.
    let mut merged: BTreeMap<(usize, u32, usize), bool> = BTreeMap::new();
    for (q, l, to, marked) in trans {
        merged
            .entry((q, l, to))
            .and_modify(|m| {
                *m = match kind {
                    AcceptanceKind::CoBuchi => *m && marked,
                    _ => *m || marked,
                }
            })
            .or_insert(marked);
    }
    let mut a = Automaton::new(alphabet, kind, n, start);
    for ((q, l, to), marked) in merged {
        a.add_edge(q, l, to, marked);
    }
    Ok(a)
}
