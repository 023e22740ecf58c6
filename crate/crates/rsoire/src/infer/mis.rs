//! Exact maximum-independent-set search over small conflict graphs.
//!
//! Vertices are bitmask indices in lexicographic symbol order. The solver
//! branches on a highest-degree vertex with memoized subproblems, then
//! rebuilds the lexicographically least optimum greedily, so results are
//! deterministic.

use std::collections::HashMap;

type Mask = u128;

pub(crate) struct MisSolver {
    n: usize,
    /// Closed neighborhoods are not stored; adj[v] excludes v itself.
    adj: Vec<Mask>,
    memo: HashMap<Mask, u32>,
}

impl MisSolver {
    pub(crate) fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> MisSolver {
        assert!(
            n <= 128,
            "exact independent-set search supports at most 128 vertices, got {n}"
        );
        let mut adj = vec![0; n];
        for (a, b) in edges {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        MisSolver {
            n,
            adj,
            memo: HashMap::new(),
        }
    }

    fn size(&mut self, avail: Mask) -> u32 {
        if avail == 0 {
            return 0;
        }
        if let Some(&s) = self.memo.get(&avail) {
            return s;
        }
        // Branch on the vertex of highest degree within `avail`; isolated
        // vertices are always taken.
        let mut pick = None;
        let mut best_deg = 0;
        let mut m = avail;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let deg = (self.adj[v] & avail).count_ones();
            if pick.is_none() || deg > best_deg {
                pick = Some(v);
                best_deg = deg;
            }
        }
        let v = pick.expect("avail is non-empty");
        let with_v = 1 + self.size(avail & !self.adj[v] & !(1 << v));
        let result = if best_deg == 0 {
            // The rest of `avail` is edge-free; everything joins.
            avail.count_ones()
        } else {
            with_v.max(self.size(avail & !(1 << v)))
        };
        self.memo.insert(avail, result);
        result
    }

    /// The maximum independent set among `avail` whose sorted vertex
    /// sequence is lexicographically least.
    pub(crate) fn lex_least_maximum(&mut self, avail: Mask) -> Vec<usize> {
        let mut need = self.size(avail);
        let mut avail = avail;
        let mut chosen = Vec::new();
        for v in 0..self.n {
            if need == 0 {
                break;
            }
            if avail & (1 << v) == 0 {
                continue;
            }
            let after = avail & !self.adj[v] & !((1 << (v + 1)) - 1);
            if 1 + self.size(after) >= need {
                chosen.push(v);
                need -= 1;
                avail = after;
            } else {
                avail &= !(1 << v);
            }
        }
        chosen
    }

    pub(crate) fn full_mask(&self) -> Mask {
        if self.n == 128 {
            Mask::MAX
        } else {
            (1 << self.n) - 1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn picks_lex_least_among_equal_maxima() {
        // Vertices a=0 b=1 c=2 d=3, edges a-b a-c a-d c-d.
        // Maximum sets are {b,c} and {b,d}; {b,c} is lex-least.
        let mut s = MisSolver::new(4, [(0, 1), (0, 2), (0, 3), (2, 3)]);
        assert_eq!(s.lex_least_maximum(s.full_mask()), vec![1, 2]);
    }

    #[test]
    fn single_edge_graph() {
        let mut s = MisSolver::new(2, [(0, 1)]);
        assert_eq!(s.lex_least_maximum(s.full_mask()), vec![0]);
    }

    #[test]
    fn edge_free_graph_takes_everything() {
        let mut s = MisSolver::new(3, []);
        assert_eq!(s.lex_least_maximum(s.full_mask()), vec![0, 1, 2]);
    }

    #[test]
    fn path_graph() {
        // 0-1-2-3-4: maximum IS {0,2,4}.
        let mut s = MisSolver::new(5, [(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert_eq!(s.lex_least_maximum(s.full_mask()), vec![0, 2, 4]);
    }

    #[test]
    fn restricted_availability() {
        let mut s = MisSolver::new(3, [(0, 1)]);
        // Only vertices 1 and 2 available.
        assert_eq!(s.lex_least_maximum(0b110), vec![1, 2]);
    }
}
