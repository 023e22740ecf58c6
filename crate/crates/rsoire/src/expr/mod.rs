//! Expression ASTs for regular expressions with interleaving.
//!
//! An [`Expr`] is built from epsilon, single symbols, the postfix operators
//! `*` `+` `?`, concatenation, disjunction `|`, and interleaving `&`.
//! N-ary nodes (`Concat`, `Alt`, `Inter`) always hold at least two children
//! and never directly nest a child of the same kind; the constructors
//! [`Expr::concat`], [`Expr::alt`] and [`Expr::inter`] maintain that shape.
//!
//! The module also houses the single-occurrence check and the classifier
//! that decides whether an expression lies in the restricted class where
//! interleaving only joins sequential blocks and repetition only applies
//! to single symbols.

mod parse;

pub use parse::parse;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Characters allowed in symbol names. The bare name `_` is reserved for
/// the epsilon literal and rejected.
pub fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | ':' | '.' | '-' | '%')
}

/// An interned terminal symbol.
///
/// Symbols compare by full-name equality; ordering is lexicographic on the
/// name, which every deterministic tie-break in the crate keys off.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    /// Validates and interns a symbol name.
    pub fn new(name: &str) -> Result<Self> {
        if name.is_empty() || name == "_" || !name.chars().all(is_symbol_char) {
            return Err(Error::InvalidSymbol(name.to_string()));
        }
        Ok(Symbol(Arc::from(name)))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symbol({})", self.0)
    }
}

/// Abstract syntax of regular expressions with interleaving.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Expr {
    /// The empty word.
    Epsilon,
    /// A single terminal symbol.
    Sym(Symbol),
    /// Kleene star.
    Star(Box<Expr>),
    /// Iteration (one or more).
    Plus(Box<Expr>),
    /// Optional.
    Opt(Box<Expr>),
    /// Concatenation of two or more factors, flattened.
    Concat(Vec<Expr>),
    /// Disjunction of two or more branches, flattened, in stored order.
    Alt(Vec<Expr>),
    /// Interleaving of two or more operands, flattened, in stored order.
    Inter(Vec<Expr>),
}

/// Classification against the restricted grammar.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SoClass {
    /// Some terminal symbol occurs more than once.
    NotSoire,
    /// Single-occurrence, but not derivable from the restricted grammar.
    SoireOnly,
    /// Derivable from the restricted grammar (hence also single-occurrence).
    Rsoire,
}

impl fmt::Display for SoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SoClass::NotSoire => "not-soire",
            SoClass::SoireOnly => "soire",
            SoClass::Rsoire => "rsoire",
        })
    }
}

impl Expr {
    pub fn sym(s: Symbol) -> Expr {
        Expr::Sym(s)
    }

    pub fn star(e: Expr) -> Expr {
        Expr::Star(Box::new(e))
    }

    pub fn plus(e: Expr) -> Expr {
        Expr::Plus(Box::new(e))
    }

    pub fn opt(e: Expr) -> Expr {
        Expr::Opt(Box::new(e))
    }

    /// N-ary concatenation; flattens nested `Concat` children and unwraps
    /// trivial lists (empty -> epsilon, singleton -> the child).
    pub fn concat(children: Vec<Expr>) -> Expr {
        Self::nary(children, NaryKind::Concat)
    }

    /// N-ary disjunction; flattens and unwraps like [`Expr::concat`].
    pub fn alt(children: Vec<Expr>) -> Expr {
        Self::nary(children, NaryKind::Alt)
    }

    /// N-ary interleaving; flattens and unwraps like [`Expr::concat`].
    pub fn inter(children: Vec<Expr>) -> Expr {
        Self::nary(children, NaryKind::Inter)
    }

    fn nary(children: Vec<Expr>, kind: NaryKind) -> Expr {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match (kind, c) {
                (NaryKind::Concat, Expr::Concat(cs)) => flat.extend(cs),
                (NaryKind::Alt, Expr::Alt(cs)) => flat.extend(cs),
                (NaryKind::Inter, Expr::Inter(cs)) => flat.extend(cs),
                (_, other) => flat.push(other),
            }
        }
        match flat.len() {
            0 => Expr::Epsilon,
            1 => flat.pop().unwrap(),
            _ => match kind {
                NaryKind::Concat => Expr::Concat(flat),
                NaryKind::Alt => Expr::Alt(flat),
                NaryKind::Inter => Expr::Inter(flat),
            },
        }
    }

    /// The set of terminal symbols occurring in the expression.
    pub fn alphabet(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_alphabet(&mut out);
        out
    }

    fn collect_alphabet(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Expr::Epsilon => {}
            Expr::Sym(s) => {
                out.insert(s.clone());
            }
            Expr::Star(e) | Expr::Plus(e) | Expr::Opt(e) => e.collect_alphabet(out),
            Expr::Concat(cs) | Expr::Alt(cs) | Expr::Inter(cs) => {
                for c in cs {
                    c.collect_alphabet(out);
                }
            }
        }
    }

    /// True iff no symbol labels two distinct leaves. The postfix operators
    /// count their argument once: `a+` abbreviates without duplicating the leaf.
    pub fn is_single_occurrence(&self) -> bool {
        fn walk(e: &Expr, seen: &mut BTreeSet<Symbol>) -> bool {
            match e {
                Expr::Epsilon => true,
                Expr::Sym(s) => seen.insert(s.clone()),
                Expr::Star(e) | Expr::Plus(e) | Expr::Opt(e) => walk(e, seen),
                Expr::Concat(cs) | Expr::Alt(cs) | Expr::Inter(cs) => {
                    cs.iter().all(|c| walk(c, seen))
                }
            }
        }
        walk(self, &mut BTreeSet::new())
    }

    /// Classifies the expression.
    ///
    /// Optionals are read as `x|_` for the purpose of the restricted grammar,
    /// so `a?` and `(a b)?` are sequential blocks. Repetition (`*`, `+`) is
    /// admitted on single symbols only.
    pub fn classify(&self) -> SoClass {
        if !self.is_single_occurrence() {
            SoClass::NotSoire
        } else if is_p(self) {
            SoClass::Rsoire
        } else {
            SoClass::SoireOnly
        }
    }

    /// Rewrites operator stacks to a fixpoint: `(x+)?`, `(x?)+`, `(x*)?`
    /// and `(x*)*` become `x*`, `(x?)?` becomes `x?`, and nested n-ary
    /// nodes are flattened. The language is preserved.
    pub fn normalize(&self) -> Expr {
        match self {
            Expr::Epsilon | Expr::Sym(_) => self.clone(),
            Expr::Star(e) => match e.normalize() {
                Expr::Star(x) => Expr::Star(x),
                other => Expr::star(other),
            },
            Expr::Plus(e) => match e.normalize() {
                Expr::Opt(x) => Expr::Star(x),
                other => Expr::plus(other),
            },
            Expr::Opt(e) => match e.normalize() {
                Expr::Plus(x) | Expr::Star(x) => Expr::Star(x),
                Expr::Opt(x) => Expr::Opt(x),
                other => Expr::opt(other),
            },
            Expr::Concat(cs) => Expr::concat(cs.iter().map(Expr::normalize).collect()),
            Expr::Alt(cs) => Expr::alt(cs.iter().map(Expr::normalize).collect()),
            Expr::Inter(cs) => Expr::inter(cs.iter().map(Expr::normalize).collect()),
        }
    }

    /// True iff every `Star`/`Plus` in the expression applies to a single symbol.
    pub fn repetition_on_symbols_only(&self) -> bool {
        match self {
            Expr::Epsilon | Expr::Sym(_) => true,
            Expr::Star(e) | Expr::Plus(e) => {
                matches!(**e, Expr::Sym(_)) && e.repetition_on_symbols_only()
            }
            Expr::Opt(e) => e.repetition_on_symbols_only(),
            Expr::Concat(cs) | Expr::Alt(cs) | Expr::Inter(cs) => {
                cs.iter().all(Expr::repetition_on_symbols_only)
            }
        }
    }
}

#[derive(Clone, Copy)]
enum NaryKind {
    Concat,
    Alt,
    Inter,
}

// Grammar predicates. `T` covers sequential expressions: epsilon, symbols,
// repetition on single symbols, and alternation/concatenation of T's.
// `S` additionally closes T under interleaving, and `P` allows at most one
// ambient-level subterm per concatenation or alternation (the `SP | PS |
// P|S` productions, read up to associativity and commutativity of the
// flattened node lists).
fn is_t(e: &Expr) -> bool {
    match e {
        Expr::Epsilon | Expr::Sym(_) => true,
        Expr::Star(x) | Expr::Plus(x) => matches!(**x, Expr::Sym(_)),
        Expr::Opt(x) => is_t(x),
        Expr::Alt(cs) | Expr::Concat(cs) => cs.iter().all(is_t),
        Expr::Inter(_) => false,
    }
}

fn is_s(e: &Expr) -> bool {
    match e {
        Expr::Inter(cs) => cs.iter().all(is_s),
        _ => is_t(e),
    }
}

fn is_p(e: &Expr) -> bool {
    if is_s(e) {
        return true;
    }
    match e {
        Expr::Opt(x) => is_p(x),
        Expr::Concat(cs) | Expr::Alt(cs) => {
            let non_s: Vec<&Expr> = cs.iter().filter(|c| !is_s(c)).collect();
            non_s.len() <= 1 && non_s.iter().all(|c| is_p(c))
        }
        _ => false,
    }
}

// Printing: minimal parentheses under the precedence ladder
// postfix > concatenation > `&` > `|`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Epsilon => f.write_str("_"),
            Expr::Sym(s) => write!(f, "{s}"),
            Expr::Star(e) => write_postfix(f, e, '*'),
            Expr::Plus(e) => write_postfix(f, e, '+'),
            Expr::Opt(e) => write_postfix(f, e, '?'),
            Expr::Concat(cs) => write_joined(f, cs, " ", |c| {
                matches!(c, Expr::Alt(_) | Expr::Inter(_))
            }),
            Expr::Inter(cs) => write_joined(f, cs, "&", |c| matches!(c, Expr::Alt(_))),
            Expr::Alt(cs) => write_joined(f, cs, "|", |_| false),
        }
    }
}

fn write_postfix(f: &mut fmt::Formatter<'_>, child: &Expr, op: char) -> fmt::Result {
    let atomic = matches!(
        child,
        Expr::Epsilon | Expr::Sym(_) | Expr::Star(_) | Expr::Plus(_) | Expr::Opt(_)
    );
    if atomic {
        write!(f, "{child}{op}")
    } else {
        write!(f, "({child}){op}")
    }
}

fn write_joined(
    f: &mut fmt::Formatter<'_>,
    children: &[Expr],
    sep: &str,
    needs_parens: impl Fn(&Expr) -> bool,
) -> fmt::Result {
    for (i, c) in children.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        if needs_parens(c) {
            write!(f, "({c})")?;
        } else {
            write!(f, "{c}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(text: &str) -> Expr {
        parse(text).unwrap()
    }

    #[test]
    fn symbol_validation() {
        assert!(Symbol::new("a").is_ok());
        assert!(Symbol::new("xs:element").is_ok());
        assert!(Symbol::new("a-b.c_9").is_ok());
        assert_eq!(Symbol::new(""), Err(Error::InvalidSymbol(String::new())));
        assert_eq!(Symbol::new("_"), Err(Error::InvalidSymbol("_".into())));
        assert!(Symbol::new("a b").is_err());
    }

    #[test]
    fn alphabet_examples() {
        let want: BTreeSet<_> = ["a", "b", "c", "d"]
            .iter()
            .map(|s| Symbol::new(s).unwrap())
            .collect();
        assert_eq!(e("a&(b (c&d))").alphabet(), want);
        assert!(e("_").alphabet().is_empty());
        assert_eq!(e("a a*").alphabet().len(), 1);
    }

    #[test]
    fn single_occurrence_examples() {
        assert!(e("a&(b (c&d))").is_single_occurrence());
        assert!(!e("a a").is_single_occurrence());
        assert!(e("a+").is_single_occurrence());
    }

    #[test]
    fn classify_paper_examples() {
        assert_eq!(e("(a+|b) (c&d)").classify(), SoClass::Rsoire);
        assert_eq!(e("a d&(b|c*)").classify(), SoClass::Rsoire);
        assert_eq!(e("a+|b+&c*").classify(), SoClass::Rsoire);
        assert_eq!(e("(a b)&(c|d)+").classify(), SoClass::SoireOnly);
        assert_eq!(e("((a|b&c) d?)*").classify(), SoClass::SoireOnly);
        assert_eq!(e("a&(b (c&d))").classify(), SoClass::SoireOnly);
        assert_eq!(e("a a").classify(), SoClass::NotSoire);
    }

    #[test]
    fn classify_accepts_optional_interleaving_block() {
        // One ambient subterm per concatenation is fine ...
        assert_eq!(e("a (b&c)? d").classify(), SoClass::Rsoire);
        // ... but two of them are not derivable.
        assert_eq!(e("a (b&c)? (d&e)? f").classify(), SoClass::SoireOnly);
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(e("(a+)?").normalize(), e("a*"));
        assert_eq!(e("(a?)+").normalize(), e("a*"));
        assert_eq!(e("(a*)?").normalize(), e("a*"));
        assert_eq!(e("(a*)*").normalize(), e("a*"));
        assert_eq!(e("a*").normalize(), e("a*"));
        assert_eq!(e("(b?)?").normalize(), e("b?"));
    }

    #[test]
    fn print_examples() {
        assert_eq!(e("(a+|b) (c&d)").to_string(), "(a+|b) (c&d)");
        assert_eq!(Expr::Epsilon.to_string(), "_");
        assert_eq!(e("c*").to_string(), "c*");
        assert_eq!(e("((a|b&c) d?)*").to_string(), "((a|b&c) d?)*");
        assert_eq!(e("a b&c").to_string(), "a b&c");
    }

    #[test]
    fn constructors_flatten() {
        let a = e("a");
        let b = e("b");
        let c = e("c");
        let nested = Expr::alt(vec![Expr::alt(vec![a.clone(), b.clone()]), c.clone()]);
        assert_eq!(nested, Expr::Alt(vec![a.clone(), b.clone(), c.clone()]));
        assert_eq!(Expr::concat(vec![a.clone()]), a);
        assert_eq!(Expr::inter(vec![]), Expr::Epsilon);
    }
}
