use super::formula::Ltl;

/// Evaluates `f` on the ultimately periodic word `prefix · cycle^ω`, where each
/// letter is a bit-vector over atom indices.
///
/// Each subformula gets a truth table over the `|prefix| + |cycle|` positions;
/// `U`/`F` are least and `R`/`G` greatest fixpoints over the successor map that
/// sends the last position back to the start of the cycle.
pub fn eval_lasso(f: &Ltl, prefix: &[u32], cycle: &[u32]) -> bool {
    assert!(!cycle.is_empty(), "lasso cycle must be non-empty");
    let word: Vec<u32> = prefix.iter().chain(cycle).copied().collect();
    let ctx = Ctx {
        word: &word,
        loop_start: prefix.len(),
    };
    ctx.table(f)[0]
}

struct Ctx<'a> {
    word: &'a [u32],
    loop_start: usize,
}

impl Ctx<'_> {
    fn succ(&self, i: usize) -> usize {
        if i + 1 < self.word.len() {
            i + 1
        } else {
            self.loop_start
        }
    }

    fn fixpoint(&self, init: bool, step: impl Fn(usize, &[bool]) -> bool) -> Vec<bool> {
        let mut val = vec![init; self.word.len()];
        loop {
            let mut changed = false;
            for i in (0..self.word.len()).rev() {
                let v = step(i, &val);
                if v != val[i] {
                    val[i] = v;
                    changed = true;
                }
            }
            if !changed {
                return val;
            }
        }
    }

    fn table(&self, f: &Ltl) -> Vec<bool> {
        let n = self.word.len();
        match f {
            Ltl::True => vec![true; n],
            Ltl::False => vec![false; n],
            Ltl::Atom(a) => self.word.iter().map(|l| l & (1 << a) != 0).collect(),
            Ltl::Not(g) => self.table(g).into_iter().map(|b| !b).collect(),
            Ltl::And(l, r) => {
                let (l, r) = (self.table(l), self.table(r));
                l.iter().zip(&r).map(|(x, y)| *x && *y).collect()
            }
            Ltl::Or(l, r) => {
                let (l, r) = (self.table(l), self.table(r));
                l.iter().zip(&r).map(|(x, y)| *x || *y).collect()
            }
            Ltl::Next(g) => {
                let g = self.table(g);
                (0..n).map(|i| g[self.succ(i)]).collect()
            }
            Ltl::Finally(g) => {
                let g = self.table(g);
                self.fixpoint(false, |i, v| g[i] || v[self.succ(i)])
            }
            Ltl::Globally(g) => {
                let g = self.table(g);
                self.fixpoint(true, |i, v| g[i] && v[self.succ(i)])
            }
            Ltl::Until(l, r) => {
                let (l, r) = (self.table(l), self.table(r));
                self.fixpoint(false, |i, v| r[i] || (l[i] && v[self.succ(i)]))
            }
            Ltl::Release(l, r) => {
                let (l, r) = (self.table(l), self.table(r));
                self.fixpoint(true, |i, v| r[i] && (l[i] || v[self.succ(i)]))
            }
        }
    }
}
