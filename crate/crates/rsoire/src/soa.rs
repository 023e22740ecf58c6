//! Single-occurrence automata: construction from samples, acceptance,
//! strongly connected components, and the contraction surgery used by the
//! rewrite engine.
//!
//! An automaton is a directed graph with a distinguished source `q0` (only
//! outgoing edges) and sink `qf` (only incoming edges). Internal nodes carry
//! expression labels; immediately after construction every label is a single
//! symbol and a word is accepted iff it spells out an edge path from `q0`
//! to `qf`. Values are immutable: surgery returns new automata.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::expr::{Expr, Symbol};
use crate::lang::Word;

/// An ordered multiset of words together with its alphabet.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sample {
    words: Vec<Word>,
    alphabet: BTreeSet<Symbol>,
}

impl Sample {
    pub fn new(words: Vec<Word>) -> Sample {
        let alphabet = words
            .iter()
            .flat_map(|w| w.symbols().iter().cloned())
            .collect();
        Sample { words, alphabet }
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        &self.alphabet
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// The sub-multiset of non-empty words, in order.
    pub fn without_empty_words(&self) -> Sample {
        Sample::new(self.words.iter().filter(|w| !w.is_empty()).cloned().collect())
    }
}

/// Identifier of an automaton node. `Q0` and `QF` are fixed; internal nodes
/// are numbered from 2 in first-occurrence order of their symbols, and
/// contraction allocates fresh, larger ids.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(pub u32);

pub const Q0: NodeId = NodeId(0);
pub const QF: NodeId = NodeId(1);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Soa {
    labels: BTreeMap<NodeId, Expr>,
    edges: BTreeSet<(NodeId, NodeId)>,
    next_id: u32,
}

impl Soa {
    /// Builds the automaton of a sample: one node per alphabet symbol, an
    /// edge `x -> y` for every adjacent pair `xy` in some word, `q0` and
    /// `qf` attached to word boundaries, and `q0 -> qf` iff the sample
    /// contains the empty word.
    pub fn build_2t_inf(sample: &Sample) -> Result<Soa> {
        if sample.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut node_of: BTreeMap<Symbol, NodeId> = BTreeMap::new();
        let mut labels = BTreeMap::new();
        let mut next_id = 2;
        for word in sample.words() {
            for s in word.symbols() {
                node_of.entry(s.clone()).or_insert_with(|| {
                    let id = NodeId(next_id);
                    next_id += 1;
                    labels.insert(id, Expr::Sym(s.clone()));
                    id
                });
            }
        }
        let mut edges = BTreeSet::new();
        for word in sample.words() {
            let syms = word.symbols();
            match syms {
                [] => {
                    edges.insert((Q0, QF));
                }
                _ => {
                    edges.insert((Q0, node_of[&syms[0]]));
                    edges.insert((node_of[&syms[syms.len() - 1]], QF));
                    for pair in syms.windows(2) {
                        edges.insert((node_of[&pair[0]], node_of[&pair[1]]));
                    }
                }
            }
        }
        Ok(Soa {
            labels,
            edges,
            next_id,
        })
    }

    /// Internal node ids in creation order.
    pub fn internal_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.labels.keys().copied()
    }

    pub fn node_count(&self) -> usize {
        self.labels.len() + 2
    }

    pub fn label(&self, v: NodeId) -> Option<&Expr> {
        self.labels.get(&v)
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, from: NodeId, to: NodeId) -> bool {
        self.edges.contains(&(from, to))
    }

    fn known(&self, v: NodeId) -> Result<()> {
        if v == Q0 || v == QF || self.labels.contains_key(&v) {
            Ok(())
        } else {
            Err(Error::UnknownNode(v.0))
        }
    }

    /// In-neighborhood of `v`, excluding `v` itself.
    pub fn pred(&self, v: NodeId) -> Result<BTreeSet<NodeId>> {
        self.known(v)?;
        Ok(self
            .edges
            .iter()
            .filter(|(_, t)| *t == v)
            .map(|(s, _)| *s)
            .filter(|s| *s != v)
            .collect())
    }

    /// Out-neighborhood of `v`, excluding `v` itself.
    pub fn succ(&self, v: NodeId) -> Result<BTreeSet<NodeId>> {
        self.known(v)?;
        Ok(self
            .edges
            .iter()
            .filter(|(s, _)| *s == v)
            .map(|(_, t)| *t)
            .filter(|t| *t != v)
            .collect())
    }

    pub fn has_self_loop(&self, v: NodeId) -> Result<bool> {
        self.known(v)?;
        Ok(self.edges.contains(&(v, v)))
    }

    /// Path acceptance. Requires single-symbol labels (the shape produced by
    /// [`Soa::build_2t_inf`]); words mentioning unknown symbols are rejected.
    pub fn accepts(&self, w: &Word) -> bool {
        let node_of: BTreeMap<&Symbol, NodeId> = self
            .labels
            .iter()
            .filter_map(|(id, l)| match l {
                Expr::Sym(s) => Some((s, *id)),
                _ => None,
            })
            .collect();
        let mut cur = Q0;
        for s in w.symbols() {
            let Some(&next) = node_of.get(s) else {
                return false;
            };
            if !self.edges.contains(&(cur, next)) {
                return false;
            }
            cur = next;
        }
        self.edges.contains(&(cur, QF))
    }

    /// Maximal strongly connected components of the internal subgraph with
    /// more than one node, plus self-looped singletons, ordered by least
    /// member id.
    pub fn nontrivial_sccs(&self) -> Vec<BTreeSet<NodeId>> {
        let mut sccs = tarjan(self);
        sccs.retain(|scc| {
            scc.len() > 1 || {
                let v = *scc.iter().next().expect("non-empty component");
                self.edges.contains(&(v, v))
            }
        });
        sccs.sort_by_key(|scc| *scc.iter().next().expect("non-empty component"));
        sccs
    }

    /// Replaces the node set `u` by a single fresh node carrying `label`.
    /// Edges in and out of the set re-attach to the fresh node, edges inside
    /// the set disappear, and a self-loop that the re-attachment would create
    /// is removed.
    pub fn contract(&self, u: &BTreeSet<NodeId>, label: Expr) -> Result<Soa> {
        if u.is_empty() {
            return Err(Error::InvalidContraction("empty node set".into()));
        }
        if u.contains(&Q0) || u.contains(&QF) {
            return Err(Error::InvalidContraction(
                "node set touches q0 or qf".into(),
            ));
        }
        for v in u {
            if !self.labels.contains_key(v) {
                return Err(Error::UnknownNode(v.0));
            }
        }
        let fresh = NodeId(self.next_id);
        let mut labels: BTreeMap<NodeId, Expr> = self
            .labels
            .iter()
            .filter(|(id, _)| !u.contains(id))
            .map(|(id, l)| (*id, l.clone()))
            .collect();
        labels.insert(fresh, label);
        let reroute = |v: NodeId| if u.contains(&v) { fresh } else { v };
        let edges = self
            .edges
            .iter()
            .map(|&(s, t)| (reroute(s), reroute(t)))
            .filter(|&(s, t)| !(s == fresh && t == fresh))
            .collect();
        Ok(Soa {
            labels,
            edges,
            next_id: self.next_id + 1,
        })
    }

    /// Removes one edge; used by the iteration rule to drop a self-loop.
    pub(crate) fn remove_edge(&self, from: NodeId, to: NodeId) -> Soa {
        let mut out = self.clone();
        out.edges.remove(&(from, to));
        out
    }

    pub(crate) fn relabel(&self, v: NodeId, label: Expr) -> Soa {
        let mut out = self.clone();
        out.labels.insert(v, label);
        out
    }

    /// Structural well-formedness: `q0` has only outgoing and `qf` only
    /// incoming edges, every internal node lies on a `q0 -> qf` walk, and
    /// label alphabets are pairwise disjoint.
    pub fn validate(&self) -> std::result::Result<(), String> {
        for &(s, t) in &self.edges {
            if t == Q0 {
                return Err(format!("edge into q0 from {s:?}"));
            }
            if s == QF {
                return Err(format!("edge out of qf to {t:?}"));
            }
            self.known(s).map_err(|e| e.to_string())?;
            self.known(t).map_err(|e| e.to_string())?;
        }
        let forward = reachable(self, Q0, |soa, v| {
            soa.edges
                .iter()
                .filter(move |(s, _)| *s == v)
                .map(|(_, t)| *t)
                .collect()
        });
        let backward = reachable(self, QF, |soa, v| {
            soa.edges
                .iter()
                .filter(move |(_, t)| *t == v)
                .map(|(s, _)| *s)
                .collect()
        });
        for v in self.labels.keys() {
            if !forward.contains(v) || !backward.contains(v) {
                return Err(format!("node {v:?} is not on a q0 -> qf walk"));
            }
        }
        let mut seen: BTreeSet<Symbol> = BTreeSet::new();
        for label in self.labels.values() {
            for s in label.alphabet() {
                if !seen.insert(s.clone()) {
                    return Err(format!("symbol {s} labels two nodes"));
                }
            }
        }
        Ok(())
    }

    /// Graphviz export; node labels are printed expressions.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph soa {\n  rankdir=LR;\n");
        out.push_str("  q0 [shape=point];\n  qf [shape=doublecircle, label=\"\"];\n");
        for (id, label) in &self.labels {
            let text = label.to_string().replace('"', "\\\"");
            let _ = writeln!(out, "  n{} [shape=box, label=\"{}\"];", id.0, text);
        }
        for &(s, t) in &self.edges {
            let _ = writeln!(out, "  {} -> {};", dot_name(s), dot_name(t));
        }
        out.push_str("}\n");
        out
    }
}

fn dot_name(v: NodeId) -> String {
    match v {
        Q0 => "q0".to_string(),
        QF => "qf".to_string(),
        NodeId(n) => format!("n{n}"),
    }
}

fn reachable(
    soa: &Soa,
    from: NodeId,
    neighbors: impl Fn(&Soa, NodeId) -> Vec<NodeId>,
) -> BTreeSet<NodeId> {
    let mut seen = BTreeSet::from([from]);
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        for n in neighbors(soa, v) {
            if seen.insert(n) {
                stack.push(n);
            }
        }
    }
    seen
}

// Tarjan's algorithm over the internal subgraph, iterative so deep chains
// cannot overflow the stack.
fn tarjan(soa: &Soa) -> Vec<BTreeSet<NodeId>> {
    let nodes: Vec<NodeId> = soa.internal_nodes().collect();
    let succs: BTreeMap<NodeId, Vec<NodeId>> = nodes
        .iter()
        .map(|&v| {
            let out: Vec<NodeId> = soa
                .edges
                .iter()
                .filter(|&&(s, t)| s == v && t != Q0 && t != QF)
                .map(|&(_, t)| t)
                .collect();
            (v, out)
        })
        .collect();

    let mut index: BTreeMap<NodeId, usize> = BTreeMap::new();
    let mut low: BTreeMap<NodeId, usize> = BTreeMap::new();
    let mut on_stack: BTreeSet<NodeId> = BTreeSet::new();
    let mut stack: Vec<NodeId> = Vec::new();
    let mut components = Vec::new();
    let mut counter = 0;

    for &root in &nodes {
        if index.contains_key(&root) {
            continue;
        }
        // Explicit DFS frames: (node, next-successor position).
        let mut frames: Vec<(NodeId, usize)> = vec![(root, 0)];
        index.insert(root, counter);
        low.insert(root, counter);
        counter += 1;
        stack.push(root);
        on_stack.insert(root);

        while let Some(&mut (v, ref mut i)) = frames.last_mut() {
            if let Some(&w) = succs[&v].get(*i) {
                *i += 1;
                if !index.contains_key(&w) {
                    index.insert(w, counter);
                    low.insert(w, counter);
                    counter += 1;
                    stack.push(w);
                    on_stack.insert(w);
                    frames.push((w, 0));
                } else if on_stack.contains(&w) {
                    let lw = index[&w].min(low[&v]);
                    low.insert(v, lw);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    let lp = low[&parent].min(low[&v]);
                    low.insert(parent, lp);
                }
                if low[&v] == index[&v] {
                    let mut scc = BTreeSet::new();
                    while let Some(w) = stack.pop() {
                        on_stack.remove(&w);
                        scc.insert(w);
                        if w == v {
                            break;
                        }
                    }
                    components.push(scc);
                }
            }
        }
    }
    components
}
