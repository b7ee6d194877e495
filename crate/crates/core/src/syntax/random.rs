//! Seeded random formulas for fuzzing and property tests.

use rand::Rng;

use super::{Const, Formula, Pred, Signature, Term, Var};

/// Generator of random formulas over a signature.
///
/// Quantifiers bind variables from `pool`. When `free` is nonempty, atoms may
/// also use those variables unbound, which yields formulas with free
/// variables drawn from `free`.
#[derive(Clone, Debug)]
pub struct FormulaGen {
    preds: Vec<(Pred, usize)>,
    consts: Vec<Const>,
    pool: Vec<Var>,
    free: Vec<Var>,
    max_rank: usize,
}

impl FormulaGen {
    pub fn new(sig: &Signature, pool: &[&str]) -> Self {
        Self {
            preds: sig.preds().map(|(p, n)| (p.clone(), n)).collect(),
            consts: sig.consts().cloned().collect(),
            pool: pool.iter().map(|v| Var::new(v)).collect(),
            free: Vec::new(),
            max_rank: usize::MAX,
        }
    }

    pub fn with_free(mut self, free: &[&str]) -> Self {
        self.free = free.iter().map(|v| Var::new(v)).collect();
        self
    }

    pub fn with_max_rank(mut self, r: usize) -> Self {
        self.max_rank = r;
        self
    }

    /// A formula with exactly `size` nodes when one exists within the rank
    /// bound, otherwise a smaller one.
    pub fn sized<R: Rng + ?Sized>(&self, rng: &mut R, size: usize) -> Formula {
        self.build(rng, size.max(1), self.max_rank, &mut Vec::new())
    }

    /// A formula whose size is uniform in `1..=max_nodes`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, max_nodes: usize) -> Formula {
        let size = rng.gen_range(1..=max_nodes.max(1));
        self.sized(rng, size)
    }

    fn leaf<R: Rng + ?Sized>(&self, rng: &mut R, scope: &[Var]) -> Formula {
        let mut terms: Vec<Term> = scope.iter().chain(&self.free).cloned().map(Term::Var).collect();
        terms.extend(self.consts.iter().cloned().map(Term::Const));
        let usable: Vec<&(Pred, usize)> = self.preds.iter().filter(|(_, n)| *n == 0 || !terms.is_empty()).collect();
        // atoms are drawn three times as often as each constant
        let choice = rng.gen_range(0..2 + 3 * usable.len().min(1));
        match choice {
            0 => Formula::Bottom,
            1 => Formula::Top,
            _ => {
                let (p, n) = usable[rng.gen_range(0..usable.len())];
                let args = (0..*n).map(|_| terms[rng.gen_range(0..terms.len())].clone()).collect();
                Formula::Atom { pred: p.clone(), args }
            }
        }
    }

    fn build<R: Rng + ?Sized>(&self, rng: &mut R, size: usize, rank: usize, scope: &mut Vec<Var>) -> Formula {
        if size == 1 {
            return self.leaf(rng, scope);
        }
        let can_quantify = rank > 0 && !self.pool.is_empty();
        let can_binary = size >= 3;
        let quantify = match (can_quantify, can_binary) {
            (false, false) => return self.leaf(rng, scope),
            (true, false) => true,
            (false, true) => false,
            (true, true) => rng.gen_bool(0.25),
        };
        if quantify {
            let x = self.pool[rng.gen_range(0..self.pool.len())].clone();
            scope.push(x.clone());
            let body = Box::new(self.build(rng, size - 1, rank - 1, scope));
            scope.pop();
            return if rng.gen_bool(0.5) { Formula::Forall(x, body) } else { Formula::Exists(x, body) };
        }
        let kind = if rank == 0 { rng.gen_range(0..2) } else { rng.gen_range(0..4) };
        let child_rank = if kind < 2 { rank } else { rank - 1 };
        let ls = rng.gen_range(1..size - 1);
        let l = self.build(rng, ls, child_rank, scope);
        let r = self.build(rng, size - 1 - ls, child_rank, scope);
        match kind {
            0 => Formula::and(l, r),
            1 => Formula::or(l, r),
            2 => Formula::implies(l, r),
            _ => Formula::co_implies(l, r),
        }
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::syntax::{free_vars, is_sentence};

    #[test]
    fn sentences_and_bounds() {
        let sig = Signature::of(&[("P", 1), ("R", 2), ("S", 0)], &["c"]);
        let gen = FormulaGen::new(&sig, &["x", "y"]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let f = gen.sample(&mut rng, 12);
            assert!(f.size() <= 12);
            assert!(is_sentence(&f, &sig), "{f}");
        }
        let ranked = FormulaGen::new(&sig, &["x"]).with_free(&["z"]).with_max_rank(2);
        for _ in 0..2000 {
            let f = ranked.sample(&mut rng, 10);
            assert!(f.rank() <= 2);
            assert!(free_vars(&f).iter().all(|v| v.as_str() == "z"));
        }
    }
}
