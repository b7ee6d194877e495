//! Deterministic enumeration of sentences by size.
//!
//! Formulas are built bottom-up per `(size, scope)` where the scope is the set
//! of pool variables `v1..vk` bound by enclosing quantifiers. Atoms only use
//! constants and in-scope variables, so every emitted top-level formula is a
//! sentence. Quantifiers may bind an already bound variable or one that does
//! not occur; alpha-variants are kept.

use std::collections::HashMap;
use std::sync::Arc;

use super::{Const, Formula, Pred, Signature, Term, Var};

type Key = (usize, u32, usize);

/// Lazy stream of sentences in `(size, graded order)` order.
pub struct SentenceEnumerator {
    preds: Vec<(Pred, usize)>,
    consts: Vec<Const>,
    pool: Vec<Var>,
    max_nodes: usize,
    max_rank: usize,
    memo: HashMap<Key, Arc<Vec<Formula>>>,
    size: usize,
    current: Arc<Vec<Formula>>,
    idx: usize,
}

impl SentenceEnumerator {
    pub fn new(sig: &Signature, max_nodes: usize, max_vars: usize) -> Self {
        assert!(max_vars < 32, "variable pool is limited to 31 names");
        Self {
            preds: sig.preds().map(|(p, n)| (p.clone(), n)).collect(),
            consts: sig.consts().cloned().collect(),
            pool: (1..=max_vars).map(|i| Var::from(format!("v{i}"))).collect(),
            max_nodes,
            max_rank: usize::MAX,
            memo: HashMap::new(),
            size: 0,
            current: Arc::new(Vec::new()),
            idx: 0,
        }
    }

    /// Restricts the stream to formulas of rank at most `r`, pruning during
    /// generation rather than filtering afterwards.
    pub fn with_max_rank(mut self, r: usize) -> Self {
        self.max_rank = r;
        self
    }

    /// All formulas of exactly `size` nodes whose free variables lie in
    /// `scope` (a bitmask over the pool) and whose rank is at most `rank`.
    fn level(&mut self, size: usize, scope: u32, rank: usize) -> Arc<Vec<Formula>> {
        let rank = rank.min(self.max_nodes);
        if let Some(hit) = self.memo.get(&(size, scope, rank)) {
            return hit.clone();
        }
        let mut out = Vec::new();
        if size == 1 {
            out.push(Formula::Bottom);
            out.push(Formula::Top);
            let terms: Vec<Term> = self
                .pool
                .iter()
                .enumerate()
                .filter(|(i, _)| scope & (1 << i) != 0)
                .map(|(_, v)| Term::Var(v.clone()))
                .chain(self.consts.iter().map(|c| Term::Const(c.clone())))
                .collect();
            for (p, n) in self.preds.clone() {
                for args in tuples(&terms, n) {
                    out.push(Formula::Atom { pred: p.clone(), args });
                }
            }
        } else {
            for kind in 0..4 {
                let child_rank = if kind < 2 {
                    rank
                } else if rank == 0 {
                    continue;
                } else {
                    rank - 1
                };
                for ls in 1..size - 1 {
                    let rs = size - 1 - ls;
                    let left = self.level(ls, scope, child_rank);
                    let right = self.level(rs, scope, child_rank);
                    for l in left.iter() {
                        for r in right.iter() {
                            let (l, r) = (l.clone(), r.clone());
                            out.push(match kind {
                                0 => Formula::and(l, r),
                                1 => Formula::or(l, r),
                                2 => Formula::implies(l, r),
                                _ => Formula::co_implies(l, r),
                            });
                        }
                    }
                }
            }
            if rank > 0 {
                for universal in [true, false] {
                    for (i, v) in self.pool.clone().into_iter().enumerate() {
                        let body = self.level(size - 1, scope | (1 << i), rank - 1);
                        for b in body.iter() {
                            let b = Box::new(b.clone());
                            out.push(if universal {
                                Formula::Forall(v.clone(), b)
                            } else {
                                Formula::Exists(v.clone(), b)
                            });
                        }
                    }
                }
            }
        }
        out.sort_by(|a, b| a.graded_cmp(b));
        let out = Arc::new(out);
        self.memo.insert((size, scope, rank), out.clone());
        out
    }
}

fn tuples(terms: &[Term], n: usize) -> Vec<Vec<Term>> {
    let mut acc = vec![Vec::new()];
    for _ in 0..n {
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                terms.iter().map(move |t| {
                    let mut next = prefix.clone();
                    next.push(t.clone());
                    next
                })
            })
            .collect();
    }
    acc
}

impl Iterator for SentenceEnumerator {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        loop {
            if let Some(f) = self.current.get(self.idx) {
                self.idx += 1;
                return Some(f.clone());
            }
            if self.size >= self.max_nodes {
                return None;
            }
            self.size += 1;
            self.idx = 0;
            self.current = self.level(self.size, 0, self.max_rank);
        }
    }
}

/// Every sentence over `sig` with at most `max_nodes` nodes built from the
/// variables `v1..v{max_vars}`.
pub fn enumerate_sentences(sig: &Signature, max_nodes: usize, max_vars: usize) -> SentenceEnumerator {
    SentenceEnumerator::new(sig, max_nodes, max_vars)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::syntax::{is_sentence, variable_sets};

    #[test]
    fn single_node_gives_bottom_and_top() {
        let sig = Signature::of(&[("P", 1)], &[]);
        let all: Vec<Formula> = enumerate_sentences(&sig, 1, 2).collect();
        assert_eq!(all, vec![Formula::Bottom, Formula::Top]);
    }

    #[test]
    fn duplicate_free_size_monotone_and_closed() {
        let sig = Signature::of(&[("P", 1), ("S", 0)], &["c"]);
        let all: Vec<Formula> = enumerate_sentences(&sig, 7, 2).collect();
        let set: HashSet<&Formula> = all.iter().collect();
        assert_eq!(set.len(), all.len());
        for w in all.windows(2) {
            assert!(w[0].size() <= w[1].size());
            assert!(w[0].graded_cmp(&w[1]).is_lt());
        }
        for f in &all {
            assert!(is_sentence(f, &sig), "{f}");
            assert!(variable_sets(f).0.is_empty());
            let (_, bound) = variable_sets(f);
            assert!(bound.len() <= 2);
        }
    }

    #[test]
    fn matches_brute_force_filter() {
        // Brute force: all formulas over the one-variable pool up to 5 nodes,
        // ignoring scope, then keep the sentences.
        fn all_formulas(size: usize, atoms: &[Formula], var: &Var) -> Vec<Formula> {
            if size == 1 {
                let mut v = vec![Formula::Bottom, Formula::Top];
                v.extend(atoms.iter().cloned());
                return v;
            }
            let mut out = Vec::new();
            for ls in 1..size.saturating_sub(1) {
                for l in all_formulas(ls, atoms, var) {
                    for r in all_formulas(size - 1 - ls, atoms, var) {
                        out.push(Formula::and(l.clone(), r.clone()));
                        out.push(Formula::or(l.clone(), r.clone()));
                        out.push(Formula::implies(l.clone(), r.clone()));
                        out.push(Formula::co_implies(l.clone(), r.clone()));
                    }
                }
            }
            for b in all_formulas(size - 1, atoms, var) {
                out.push(Formula::Forall(var.clone(), Box::new(b.clone())));
                out.push(Formula::Exists(var.clone(), Box::new(b)));
            }
            out
        }
        let sig = Signature::of(&[("P", 1)], &["c"]);
        let v1 = Var::new("v1");
        let atoms = vec![
            Formula::atom("P", vec![Term::Var(v1.clone())]),
            Formula::atom("P", vec![Term::Const(Const::new("c"))]),
        ];
        let mut expected: Vec<Formula> = (1..=5)
            .flat_map(|n| all_formulas(n, &atoms, &v1))
            .filter(|f| is_sentence(f, &sig))
            .collect();
        expected.sort_by(|a, b| a.graded_cmp(b));
        let got: Vec<Formula> = enumerate_sentences(&sig, 5, 1).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn rank_pruning_equals_filtering() {
        let sig = Signature::of(&[("P", 1)], &[]);
        let pruned: Vec<Formula> = enumerate_sentences(&sig, 6, 2).with_max_rank(2).collect();
        let filtered: Vec<Formula> = enumerate_sentences(&sig, 6, 2).filter(|f| f.rank() <= 2).collect();
        assert_eq!(pruned, filtered);
    }

    #[test]
    fn no_variables_means_propositional_over_constants() {
        let sig = Signature::of(&[("P", 1)], &[]);
        // without variables or constants no atom fits, but quantifiers are
        // still impossible (empty pool)
        let all: Vec<Formula> = enumerate_sentences(&sig, 3, 0).collect();
        assert!(all.iter().all(|f| f.quantifier_depth() == 0));
        assert_eq!(all.len(), 2 + 4 * 2 * 2);
    }
}
