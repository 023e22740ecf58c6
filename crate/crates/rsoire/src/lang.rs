//! Interleaving-language semantics: the shuffle of words, membership via
//! symbolic derivatives, bounded enumeration, and bounded equivalence.
//!
//! Two independent routes decide membership. [`matches`] chains derivatives,
//! where the interleaving case follows the recurrence
//! `d_a(r&s) = (d_a r)&s | r&(d_a s)`. [`enumerate`] builds the bounded
//! language compositionally, using [`shuffle`] for interleaving nodes.

use std::collections::BTreeSet;
use std::fmt;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::expr::{Expr, Symbol};

/// Default word-count budget for bounded enumeration.
pub const DEFAULT_ENUM_CAP: usize = 1_000_000;

/// A word: an ordered sequence of symbols. The empty sequence is epsilon.
///
/// Words order by length first, then lexicographically, which is the order
/// every enumeration and counterexample in the crate reports.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn epsilon() -> Word {
        Word(Vec::new())
    }

    pub fn new(symbols: Vec<Symbol>) -> Word {
        Word(symbols)
    }

    /// Parses a whitespace-separated token sequence; empty input is epsilon.
    pub fn parse(text: &str) -> Result<Word> {
        let symbols = text
            .split_whitespace()
            .map(Symbol::new)
            .collect::<Result<Vec<_>>>()?;
        Ok(Word(symbols))
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn prepended(&self, s: &Symbol) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(s.clone());
        v.extend_from_slice(&self.0);
        Word(v)
    }

    fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A language restricted to words of bounded length.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundedLang {
    pub max_len: usize,
    pub words: BTreeSet<Word>,
}

impl BoundedLang {
    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }
}

/// All order-preserving merges of `u` and `v`:
/// `(au)&(bv) = a(u&bv) ∪ b(au&v)`, `u&ε = ε&u = {u}`.
pub fn shuffle(u: &Word, v: &Word) -> BTreeSet<Word> {
    shuffle_capped(u, v, usize::MAX, usize::MAX).expect("uncapped shuffle cannot fail")
}

fn shuffle_capped(u: &Word, v: &Word, budget: usize, cap: usize) -> Result<BTreeSet<Word>> {
    // Suffix-pair dynamic program; table[i][j] holds u[i..] & v[j..].
    let (us, vs) = (u.symbols(), v.symbols());
    let (n, m) = (us.len(), vs.len());
    let mut table: Vec<Vec<BTreeSet<Word>>> = vec![vec![BTreeSet::new(); m + 1]; n + 1];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            let mut cell = BTreeSet::new();
            if i == n && j == m {
                cell.insert(Word::epsilon());
            } else {
                if i < n {
                    let tail = std::mem::take(&mut table[i + 1][j]);
                    for w in &tail {
                        cell.insert(w.prepended(&us[i]));
                    }
                    table[i + 1][j] = tail;
                }
                if j < m {
                    let tail = std::mem::take(&mut table[i][j + 1]);
                    for w in &tail {
                        cell.insert(w.prepended(&vs[j]));
                    }
                    table[i][j + 1] = tail;
                }
            }
            if cell.len() > budget {
                return Err(Error::EnumerationCap { cap });
            }
            table[i][j] = cell;
        }
    }
    Ok(std::mem::take(&mut table[0][0]))
}

/// True iff the empty word belongs to the language of `e`.
pub fn nullable(e: &Expr) -> bool {
    match e {
        Expr::Epsilon => true,
        Expr::Sym(_) => false,
        Expr::Star(_) | Expr::Opt(_) => true,
        Expr::Plus(x) => nullable(x),
        Expr::Concat(cs) | Expr::Inter(cs) => cs.iter().all(nullable),
        Expr::Alt(cs) => cs.iter().any(nullable),
    }
}

// Derivative terms. `Empty` is the empty language; it absorbs dead branches
// and is never printed or parsed.
enum D {
    Empty,
    Lang(Expr),
}

fn d_seq(head: D, tail: &[Expr]) -> D {
    match head {
        D::Empty => D::Empty,
        D::Lang(e) => {
            let mut factors = Vec::with_capacity(tail.len() + 1);
            if e != Expr::Epsilon {
                factors.push(e);
            }
            factors.extend(tail.iter().cloned());
            D::Lang(Expr::concat(factors))
        }
    }
}

fn d_union(items: Vec<D>) -> D {
    let mut branches: Vec<Expr> = Vec::new();
    for item in items {
        if let D::Lang(e) = item {
            if !branches.contains(&e) {
                branches.push(e);
            }
        }
    }
    if branches.is_empty() {
        D::Empty
    } else {
        D::Lang(Expr::alt(branches))
    }
}

fn d_shuffle_with(head: D, rest: Vec<Expr>) -> D {
    match head {
        D::Empty => D::Empty,
        D::Lang(e) => {
            let mut operands = Vec::with_capacity(rest.len() + 1);
            if e != Expr::Epsilon {
                operands.push(e);
            }
            operands.extend(rest.into_iter().filter(|r| *r != Expr::Epsilon));
            D::Lang(Expr::inter(operands))
        }
    }
}

fn deriv(e: &Expr, a: &Symbol) -> D {
    match e {
        Expr::Epsilon => D::Empty,
        Expr::Sym(s) => {
            if s == a {
                D::Lang(Expr::Epsilon)
            } else {
                D::Empty
            }
        }
        Expr::Star(x) => d_seq(deriv(x, a), std::slice::from_ref(e)),
        Expr::Plus(x) => {
            let star = Expr::star((**x).clone());
            d_seq(deriv(x, a), std::slice::from_ref(&star))
        }
        Expr::Opt(x) => deriv(x, a),
        Expr::Alt(cs) => d_union(cs.iter().map(|c| deriv(c, a)).collect()),
        Expr::Concat(cs) => deriv_concat(cs, a),
        Expr::Inter(cs) => {
            let items = (0..cs.len())
                .map(|i| {
                    let rest: Vec<Expr> = cs
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, c)| c.clone())
                        .collect();
                    d_shuffle_with(deriv(&cs[i], a), rest)
                })
                .collect();
            d_union(items)
        }
    }
}

fn deriv_concat(cs: &[Expr], a: &Symbol) -> D {
    if cs.len() == 1 {
        return deriv(&cs[0], a);
    }
    let first = d_seq(deriv(&cs[0], a), &cs[1..]);
    if nullable(&cs[0]) {
        d_union(vec![first, deriv_concat(&cs[1..], a)])
    } else {
        first
    }
}

/// The left quotient of `e` by `a`; `None` denotes the empty language.
pub fn derivative(e: &Expr, a: &Symbol) -> Option<Expr> {
    match deriv(e, a) {
        D::Empty => None,
        D::Lang(e) => Some(e),
    }
}

/// True iff `w` belongs to the language of `e`.
pub fn matches(e: &Expr, w: &Word) -> bool {
    let mut cur = D::Lang(e.clone());
    for s in w.symbols() {
        cur = match cur {
            D::Empty => return false,
            D::Lang(e) => deriv(&e, s),
        };
    }
    match cur {
        D::Empty => false,
        D::Lang(e) => nullable(&e),
    }
}

// Bounded enumeration. Expressions compile to a DAG whose per-node,
// per-length word sets are memoized; interleaving nodes take the shuffle
// of their operand levels. `Plus` compiles as `r . r*` so that only star
// nodes need a length recursion.
enum ENode {
    Eps,
    Sym(Symbol),
    Alt(Vec<usize>),
    Concat(usize, usize),
    Inter(usize, usize),
    Star(usize),
    Opt(usize),
}

pub(crate) struct Enumerator {
    nodes: Vec<ENode>,
    root: usize,
    memo: Vec<Vec<Option<Rc<BTreeSet<Word>>>>>,
    cap: usize,
    used: usize,
}

impl Enumerator {
    pub(crate) fn new(e: &Expr, cap: usize) -> Enumerator {
        let mut nodes = Vec::new();
        let root = build(&mut nodes, e);
        let memo = nodes.iter().map(|_| Vec::new()).collect();
        Enumerator {
            nodes,
            root,
            memo,
            cap,
            used: 0,
        }
    }

    /// Words of the root language with length exactly `len`.
    pub(crate) fn level(&mut self, len: usize) -> Result<Rc<BTreeSet<Word>>> {
        self.level_of(self.root, len)
    }

    fn budget(&self) -> usize {
        self.cap - self.used
    }

    fn level_of(&mut self, node: usize, len: usize) -> Result<Rc<BTreeSet<Word>>> {
        if let Some(Some(set)) = self.memo[node].get(len) {
            return Ok(Rc::clone(set));
        }
        let set = match &self.nodes[node] {
            ENode::Eps => singleton_if(len == 0, Word::epsilon()),
            ENode::Sym(s) => singleton_if(len == 1, Word::new(vec![s.clone()])),
            ENode::Alt(children) => {
                let children = children.clone();
                let mut out = BTreeSet::new();
                for c in children {
                    let part = self.level_of(c, len)?;
                    out.extend(part.iter().cloned());
                    self.check(out.len())?;
                }
                out
            }
            ENode::Concat(a, b) => {
                let (a, b) = (*a, *b);
                let mut out = BTreeSet::new();
                for i in 0..=len {
                    let left = self.level_of(a, i)?;
                    if left.is_empty() {
                        continue;
                    }
                    let right = self.level_of(b, len - i)?;
                    for u in left.iter() {
                        for v in right.iter() {
                            out.insert(u.concat(v));
                        }
                        self.check(out.len())?;
                    }
                }
                out
            }
            ENode::Inter(a, b) => {
                let (a, b) = (*a, *b);
                let mut out = BTreeSet::new();
                for i in 0..=len {
                    let left = self.level_of(a, i)?;
                    if left.is_empty() {
                        continue;
                    }
                    let right = self.level_of(b, len - i)?;
                    if right.is_empty() {
                        continue;
                    }
                    let budget = self.budget();
                    shuffle_product_into(&mut out, &left, &right, budget, self.cap)?;
                }
                out
            }
            ENode::Star(a) => {
                let a = *a;
                if len == 0 {
                    singleton_if(true, Word::epsilon())
                } else {
                    let mut out = BTreeSet::new();
                    for i in 1..=len {
                        let first = self.level_of(a, i)?;
                        if first.is_empty() {
                            continue;
                        }
                        let rest = self.level_of(node, len - i)?;
                        for u in first.iter() {
                            for v in rest.iter() {
                                out.insert(u.concat(v));
                            }
                            self.check(out.len())?;
                        }
                    }
                    out
                }
            }
            ENode::Opt(a) => {
                let a = *a;
                let mut out: BTreeSet<Word> = self.level_of(a, len)?.as_ref().clone();
                if len == 0 {
                    out.insert(Word::epsilon());
                }
                out
            }
        };
        self.used += set.len();
        self.check(0)?;
        let set = Rc::new(set);
        if self.memo[node].len() <= len {
            self.memo[node].resize(len + 1, None);
        }
        self.memo[node][len] = Some(Rc::clone(&set));
        Ok(set)
    }

    fn check(&self, pending: usize) -> Result<()> {
        if self.used.saturating_add(pending) > self.cap {
            Err(Error::EnumerationCap { cap: self.cap })
        } else {
            Ok(())
        }
    }
}

fn singleton_if(cond: bool, w: Word) -> BTreeSet<Word> {
    let mut s = BTreeSet::new();
    if cond {
        s.insert(w);
    }
    s
}

fn build(nodes: &mut Vec<ENode>, e: &Expr) -> usize {
    let node = match e {
        Expr::Epsilon => ENode::Eps,
        Expr::Sym(s) => ENode::Sym(s.clone()),
        Expr::Star(x) => {
            let c = build(nodes, x);
            ENode::Star(c)
        }
        Expr::Plus(x) => {
            let c = build(nodes, x);
            nodes.push(ENode::Star(c));
            ENode::Concat(c, nodes.len() - 1)
        }
        Expr::Opt(x) => {
            let c = build(nodes, x);
            ENode::Opt(c)
        }
        Expr::Alt(cs) => {
            let children = cs.iter().map(|c| build(nodes, c)).collect();
            ENode::Alt(children)
        }
        Expr::Concat(cs) => return build_chain(nodes, cs, true),
        Expr::Inter(cs) => return build_chain(nodes, cs, false),
    };
    nodes.push(node);
    nodes.len() - 1
}

fn build_chain(nodes: &mut Vec<ENode>, cs: &[Expr], concat: bool) -> usize {
    let built: Vec<usize> = cs.iter().map(|c| build(nodes, c)).collect();
    let mut acc = *built.last().expect("n-ary nodes have children");
    for &c in built[..built.len() - 1].iter().rev() {
        nodes.push(if concat {
            ENode::Concat(c, acc)
        } else {
            ENode::Inter(c, acc)
        });
        acc = nodes.len() - 1;
    }
    acc
}

fn shuffle_product_into(
    out: &mut BTreeSet<Word>,
    left: &BTreeSet<Word>,
    right: &BTreeSet<Word>,
    budget: usize,
    cap: usize,
) -> Result<()> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let pairs: Vec<(&Word, &Word)> = left
            .iter()
            .flat_map(|u| right.iter().map(move |v| (u, v)))
            .collect();
        let merged = pairs
            .into_par_iter()
            .map(|(u, v)| shuffle_capped(u, v, budget, cap))
            .try_reduce(BTreeSet::new, |mut acc, part| {
                acc.extend(part);
                if acc.len() > budget {
                    Err(Error::EnumerationCap { cap })
                } else {
                    Ok(acc)
                }
            })?;
        out.extend(merged);
    }
    #[cfg(not(feature = "parallel"))]
    {
        for u in left {
            for v in right {
                out.extend(shuffle_capped(u, v, budget, cap)?);
                if out.len() > budget {
                    return Err(Error::EnumerationCap { cap });
                }
            }
        }
    }
    if out.len() > budget {
        return Err(Error::EnumerationCap { cap });
    }
    Ok(())
}

/// The language of `e` restricted to words of length at most `max_len`,
/// under the default word-count budget.
pub fn enumerate(e: &Expr, max_len: usize) -> Result<BoundedLang> {
    enumerate_with_cap(e, max_len, DEFAULT_ENUM_CAP)
}

/// [`enumerate`] with an explicit word-count budget.
pub fn enumerate_with_cap(e: &Expr, max_len: usize, cap: usize) -> Result<BoundedLang> {
    let mut en = Enumerator::new(e, cap);
    let mut words = BTreeSet::new();
    for len in 0..=max_len {
        words.extend(en.level(len)?.iter().cloned());
    }
    Ok(BoundedLang { max_len, words })
}

/// Verdict of a bounded-language comparison.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Equiv {
    Equal,
    /// The least word (by length, then lexicographically) on which the
    /// bounded languages differ.
    Counterexample(Word),
}

/// Compares bounded languages level by level, stopping at the first length
/// where they differ; the counterexample is the least differing word.
pub fn bounded_equiv(e1: &Expr, e2: &Expr, max_len: usize) -> Result<Equiv> {
    bounded_equiv_with_cap(e1, e2, max_len, DEFAULT_ENUM_CAP)
}

/// [`bounded_equiv`] with an explicit per-expression word-count budget.
pub fn bounded_equiv_with_cap(e1: &Expr, e2: &Expr, max_len: usize, cap: usize) -> Result<Equiv> {
    let mut en1 = Enumerator::new(e1, cap);
    let mut en2 = Enumerator::new(e2, cap);
    for len in 0..=max_len {
        let a = en1.level(len)?;
        let b = en2.level(len)?;
        if a != b {
            let smallest = a
                .symmetric_difference(&b)
                .min()
                .expect("unequal sets differ somewhere")
                .clone();
            return Ok(Equiv::Counterexample(smallest));
        }
    }
    Ok(Equiv::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn w(text: &str) -> Word {
        Word::parse(text).unwrap()
    }

    fn words(texts: &[&str]) -> BTreeSet<Word> {
        texts.iter().map(|t| w(t)).collect()
    }

    #[test]
    fn shuffle_recurrence_unfolds() {
        assert_eq!(
            shuffle(&w("a b"), &w("c")),
            words(&["a b c", "a c b", "c a b"])
        );
        assert_eq!(shuffle(&w("a b"), &w("")), words(&["a b"]));
        assert_eq!(shuffle(&w("a"), &w("a")), words(&["a a"]));
    }

    #[test]
    fn nullable_examples() {
        assert!(nullable(&parse("a*&b*").unwrap()));
        assert!(!nullable(&parse("a+&b+").unwrap()));
        assert!(nullable(&parse("_").unwrap()));
    }

    #[test]
    fn derivative_examples() {
        let a = crate::expr::Symbol::new("a").unwrap();
        let b = crate::expr::Symbol::new("b").unwrap();
        let c = crate::expr::Symbol::new("c").unwrap();
        assert_eq!(
            derivative(&parse("a b").unwrap(), &a),
            Some(parse("b").unwrap())
        );
        assert_eq!(
            derivative(&parse("a&b").unwrap(), &b),
            Some(parse("a").unwrap())
        );
        assert_eq!(derivative(&parse("a b").unwrap(), &c), None);
    }

    #[test]
    fn matches_examples() {
        assert!(matches(&parse("a&(b (c&d))").unwrap(), &w("b d a c")));
        assert!(matches(&parse("(a b)+").unwrap(), &w("a b a b")));
        assert!(matches(&parse("a+&b+").unwrap(), &w("b a")));
        assert!(!matches(&parse("(a b)+").unwrap(), &w("b a")));
        assert!(!matches(&parse("a b").unwrap(), &w("a c")));
    }

    #[test]
    fn enumerate_examples() {
        let eight = enumerate(&parse("a&(b (c&d))").unwrap(), 4).unwrap();
        assert_eq!(
            eight.words,
            words(&[
                "a b c d", "b a c d", "b c a d", "b c d a", "a b d c", "b a d c", "b d a c",
                "b d c a",
            ])
        );
        assert_eq!(
            enumerate(&parse("_").unwrap(), 3).unwrap().words,
            words(&[""])
        );
        assert_eq!(
            enumerate(&parse("a*").unwrap(), 2).unwrap().words,
            words(&["", "a", "a a"])
        );
    }

    #[test]
    fn enumerate_cap_is_enforced() {
        let e = parse("(a|b|c|d)*").unwrap();
        match enumerate_with_cap(&e, 10, 100) {
            Err(Error::EnumerationCap { cap: 100 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn shuffle_cap_inside_enumeration() {
        // Two long interleaved runs explode combinatorially inside a single
        // shuffle; the budget has to stop that too.
        let e = parse("a*&b*").unwrap();
        match enumerate_with_cap(&e, 40, 1000) {
            Err(Error::EnumerationCap { cap: 1000 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn bounded_equiv_examples() {
        let eq = |a: &str, b: &str, n: usize| {
            bounded_equiv(&parse(a).unwrap(), &parse(b).unwrap(), n).unwrap()
        };
        assert_eq!(eq("a&b", "b&a", 4), Equiv::Equal);
        assert_eq!(eq("(a b)+", "a+&b+", 4), Equiv::Counterexample(w("b a")));
        assert_eq!(eq("a*", "a+", 3), Equiv::Counterexample(Word::epsilon()));
    }

    #[test]
    fn word_order_is_length_then_lex() {
        let mut v = vec![w("b"), w("a b"), w("a"), w("")];
        v.sort();
        assert_eq!(v, vec![w(""), w("a"), w("b"), w("a b")]);
    }
}
