use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{base_worlds, is_quasi_partition, order_relations, CounterexampleError, QuasiPartition};
use crate::periodic::UpSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    Any,
    AboveLeq(QuasiPartition),
    AbovePrec1(QuasiPartition),
    BelowLeq(QuasiPartition),
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Any => f.write_str("any"),
            Constraint::AboveLeq(p) => write!(f, "above_leq {p}"),
            Constraint::AbovePrec1(p) => write!(f, "above_prec1 {p}"),
            Constraint::BelowLeq(p) => write!(f, "below_leq {p}"),
        }
    }
}

impl Constraint {
    pub fn holds(&self, q: &QuasiPartition) -> bool {
        match self {
            Constraint::Any => true,
            Constraint::AboveLeq(p) => order_relations(p, q).leq,
            Constraint::AbovePrec1(p) => order_relations(p, q).prec1,
            Constraint::BelowLeq(p) => order_relations(q, p).leq,
        }
    }
}

// every period stays a divisor of 12
const MODULI: [u64; 5] = [2, 3, 4, 6, 12];
const FINITE_RANGE: u64 = 30;
const MAX_MOVES: usize = 6;

/// Seeded source of worlds, tuples and elements.
pub struct Sampler {
    rng: ChaCha8Rng,
}

pub fn sample_world(seed: u64, constraint: &Constraint) -> Result<QuasiPartition, CounterexampleError> {
    Sampler::new(seed).world(constraint)
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Each residue class modulo a random `m` goes to one component; `A` and
    /// `C` always get one.
    fn base(&mut self) -> [UpSet; 3] {
        let m = MODULI[self.rng.gen_range(0..MODULI.len())];
        let mut classes: Vec<u64> = (0..m).collect();
        classes.shuffle(&mut self.rng);
        let with_middle = self.rng.gen_bool(0.5) && m >= 3;
        let mut parts = [UpSet::empty(), UpSet::empty(), UpSet::empty()];
        for (i, &r) in classes.iter().enumerate() {
            let slot = match i {
                0 => 0,
                1 => 2,
                2 if with_middle => 1,
                _ if with_middle => self.rng.gen_range(0..3),
                _ => [0, 2][self.rng.gen_range(0..2)],
            };
            parts[slot] = parts[slot].union(&UpSet::residue_class(r, m));
        }
        parts
    }

    /// A finite handful of small elements or a residue-class slice of
    /// `parts[from]`, moved to `parts[to]`.
    fn moved(&mut self, parts: &[UpSet; 3], from: usize, to: usize) -> [UpSet; 3] {
        let piece = if self.rng.gen_bool(0.6) {
            let k = self.rng.gen_range(1..=4);
            let elems: Vec<u64> = (0..k).map(|_| self.rng.gen_range(1..=FINITE_RANGE)).collect();
            UpSet::finite(elems).expect("positive elements").intersect(&parts[from])
        } else {
            let m = MODULI[self.rng.gen_range(0..MODULI.len())];
            parts[from].intersect(&UpSet::residue_class(self.rng.gen_range(0..m), m))
        };
        let mut next = parts.clone();
        next[from] = parts[from].difference(&piece);
        next[to] = parts[to].union(&piece);
        next
    }

    /// Applies a random number of moves from the allowed directions, keeping
    /// only moves that stay inside the world space and the constraint.
    fn walk(
        &mut self,
        mut parts: [UpSet; 3],
        dirs: &[(usize, usize)],
        constraint: &Constraint,
    ) -> Result<QuasiPartition, CounterexampleError> {
        let moves = self.rng.gen_range(0..=MAX_MOVES);
        for _ in 0..moves {
            let (from, to) = dirs[self.rng.gen_range(0..dirs.len())];
            let next = self.moved(&parts, from, to);
            if let Ok(q) = QuasiPartition::new(next[0].clone(), next[1].clone(), next[2].clone()) {
                if constraint.holds(&q) {
                    parts = next;
                }
            }
        }
        match QuasiPartition::new(parts[0].clone(), parts[1].clone(), parts[2].clone()) {
            Ok(q) if constraint.holds(&q) => Ok(q),
            _ => Err(CounterexampleError::Sampling(constraint.to_string())),
        }
    }

    pub fn world(&mut self, constraint: &Constraint) -> Result<QuasiPartition, CounterexampleError> {
        const UP: [(usize, usize); 3] = [(2, 1), (2, 0), (1, 0)];
        const DOWN: [(usize, usize); 3] = [(1, 2), (0, 2), (0, 1)];
        const ALL: [(usize, usize); 6] = [(2, 1), (2, 0), (1, 0), (1, 2), (0, 2), (0, 1)];
        let start = |p: &QuasiPartition| [p.a().clone(), p.b().clone(), p.c().clone()];
        match constraint {
            Constraint::Any => {
                let base = self.base();
                debug_assert!(is_quasi_partition(&base[0], &base[1], &base[2]));
                self.walk(base, &ALL, constraint)
            }
            Constraint::AboveLeq(p) | Constraint::AbovePrec1(p) => self.walk(start(p), &UP, constraint),
            Constraint::BelowLeq(p) => self.walk(start(p), &DOWN, constraint),
        }
    }

    /// A world of the requested middle shape: `B = ∅` or `B` infinite.
    pub fn world_with_middle(&mut self, infinite: bool) -> Result<QuasiPartition, CounterexampleError> {
        let q = if self.rng.gen_bool(0.1) {
            let (v, w) = base_worlds();
            if infinite { v } else { w }
        } else {
            self.world(&Constraint::Any)?
        };
        match (infinite, q.b().is_empty()) {
            (true, true) => {
                let m = MODULI[self.rng.gen_range(1..MODULI.len())];
                let slice = (0..m)
                    .map(|r| q.c().intersect(&UpSet::residue_class(r, m)))
                    .find(|s| s.is_infinite() && q.c().difference(s).is_infinite());
                let slice = match slice {
                    Some(s) => s,
                    None => q.c().split_two_infinite().expect("C is infinite").0,
                };
                QuasiPartition::new(q.a().clone(), slice.clone(), q.c().difference(&slice))
            }
            (false, false) => QuasiPartition::new(q.a().clone(), UpSet::empty(), q.c().union(q.b())),
            _ => Ok(q),
        }
    }

    /// A member of an infinite or nonempty set.
    pub fn element(&mut self, s: &UpSet) -> Result<u64, CounterexampleError> {
        s.random_element(&mut self.rng).map_err(|e| CounterexampleError::Precondition(e.to_string()))
    }

    /// Tuples of length `len` with `(p, ā) 𝔸 (q, b̄)`. Each position either
    /// repeats an earlier one or draws fresh elements respecting the level
    /// conditions.
    pub fn related_tuples(&mut self, p: &QuasiPartition, q: &QuasiPartition, len: usize) -> (Vec<u64>, Vec<u64>) {
        let (mut a, mut b) = (Vec::with_capacity(len), Vec::with_capacity(len));
        for k in 0..len {
            if k > 0 && self.rng.gen_bool(0.2) {
                let j = self.rng.gen_range(0..k);
                a.push(a[j]);
                b.push(b[j]);
                continue;
            }
            let used_a = UpSet::finite(a.iter().copied()).expect("positive");
            let used_b = UpSet::finite(b.iter().copied()).expect("positive");
            let comps: Vec<&UpSet> = p.parts().into_iter().filter(|s| !s.is_empty()).collect();
            let comp = comps[self.rng.gen_range(0..comps.len())];
            let x = self.element(&comp.difference(&used_a)).expect("components are infinite");
            let target = match p.level(x) {
                2 => q.a().clone(),
                1 => q.p_extension(),
                _ if self.rng.gen_bool(0.5) => q.c().clone(),
                _ => UpSet::full(),
            };
            let y = self.element(&target.difference(&used_b)).expect("targets are infinite");
            a.push(x);
            b.push(y);
        }
        (a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constraints_are_met() {
        let (v, w) = base_worlds();
        for seed in 0..200 {
            let q = sample_world(seed, &Constraint::Any).unwrap();
            assert!(is_quasi_partition(q.a(), q.b(), q.c()));
            let up = sample_world(seed, &Constraint::AbovePrec1(v.clone())).unwrap();
            assert!(order_relations(&v, &up).prec1);
            assert!(up.b().intersect(&UpSet::residue_class(1, 3)).is_infinite());
            let down = sample_world(seed, &Constraint::BelowLeq(w.clone())).unwrap();
            assert!(order_relations(&down, &w).leq);
        }
    }

    #[test]
    fn deterministic_and_varied() {
        let c = Constraint::Any;
        assert_eq!(sample_world(7, &c), sample_world(7, &c));
        let distinct: std::collections::BTreeSet<_> = (0..50).map(|s| sample_world(s, &c).unwrap()).collect();
        assert!(distinct.len() > 25);
    }

    #[test]
    fn related_tuples_are_related() {
        let mut s = Sampler::new(3);
        for _ in 0..200 {
            let p = s.world(&Constraint::Any).unwrap();
            let q = s.world(&Constraint::Any).unwrap();
            let (a, b) = s.related_tuples(&p, &q, 4);
            assert_eq!(super::super::related(&p, &a, &q, &b), Ok(true));
        }
    }

    #[test]
    fn middle_shapes() {
        let mut s = Sampler::new(11);
        for _ in 0..100 {
            assert!(s.world_with_middle(true).unwrap().b().is_infinite());
            assert!(s.world_with_middle(false).unwrap().b().is_empty());
        }
    }
}
