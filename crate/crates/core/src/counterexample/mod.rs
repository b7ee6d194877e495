//! The quasi-partition models over ℕ, decided symbolically.
//!
//! Worlds are triples `(A, B, C)` of ultimately periodic sets. Both models
//! share the worlds, the domain ℕ and the valuation `P ↦ A ∪ B`, `Q ↦ A`;
//! they differ in the order, `⊴` on one side and its restriction `≺₁` on the
//! other. Every relation below is decided exactly by set algebra.

mod checks;
mod sample;
mod witness;

use std::fmt;

use thiserror::Error;

use crate::periodic::UpSet;

pub use checks::{
    check_phi_at_v, check_psi_fails_at_w, check_structure_lemmas, check_witnesses, run_suite, PropertyLine,
    PropertyReport,
};
pub use sample::{sample_world, Constraint, Sampler};
pub use witness::{back_witness, element_witness, forth_witness, Direction, WitnessCase, WitnessReport, CLAIM_NAMES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CounterexampleError {
    #[error("not a quasi-partition: ({} | {} | {})", .0.0, .0.1, .0.2)]
    NotQuasiPartition(Box<(UpSet, UpSet, UpSet)>),
    #[error("tuples have different lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("0 is not an element of ℕ")]
    ZeroElement,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no world satisfying {0} found")]
    Sampling(String),
}

/// A world `(A, B, C)`: pairwise disjoint, covering ℕ, `A` and `C` infinite,
/// `B` empty or infinite.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuasiPartition {
    a: UpSet,
    b: UpSet,
    c: UpSet,
}

pub fn is_quasi_partition(a: &UpSet, b: &UpSet, c: &UpSet) -> bool {
    a.union(b).union(c) == UpSet::full()
        && a.is_disjoint(b)
        && a.is_disjoint(c)
        && b.is_disjoint(c)
        && a.is_infinite()
        && c.is_infinite()
        && (b.is_empty() || b.is_infinite())
}

impl QuasiPartition {
    pub fn new(a: UpSet, b: UpSet, c: UpSet) -> Result<Self, CounterexampleError> {
        if is_quasi_partition(&a, &b, &c) {
            Ok(QuasiPartition { a, b, c })
        } else {
            Err(CounterexampleError::NotQuasiPartition(Box::new((a, b, c))))
        }
    }

    pub fn a(&self) -> &UpSet {
        &self.a
    }

    pub fn b(&self) -> &UpSet {
        &self.b
    }

    pub fn c(&self) -> &UpSet {
        &self.c
    }

    pub fn parts(&self) -> [&UpSet; 3] {
        [&self.a, &self.b, &self.c]
    }

    /// `V(P, ·) = A ∪ B`.
    pub fn p_extension(&self) -> UpSet {
        self.a.union(&self.b)
    }

    /// `V(Q, ·) = A`.
    pub fn q_extension(&self) -> UpSet {
        self.a.clone()
    }

    /// 2 for `A`, 1 for `B`, 0 for `C`; `⊴` never lowers an element.
    pub fn level(&self, n: u64) -> u8 {
        if self.a.contains(n) {
            2
        } else if self.b.contains(n) {
            1
        } else {
            0
        }
    }
}

impl fmt::Display for QuasiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} ; {} ; {})", self.a, self.b, self.c)
    }
}

impl fmt::Debug for QuasiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `v = (≡0, ≡1, ≡2 mod 3)` and `w = (evens, ∅, odds)`.
pub fn base_worlds() -> (QuasiPartition, QuasiPartition) {
    let v = QuasiPartition {
        a: UpSet::residue_class(0, 3),
        b: UpSet::residue_class(1, 3),
        c: UpSet::residue_class(2, 3),
    };
    let w = QuasiPartition { a: UpSet::evens(), b: UpSet::empty(), c: UpSet::odds() };
    (v, w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Orders {
    pub leq: bool,
    pub strict: bool,
    pub prec1: bool,
}

pub(crate) fn leq_raw(p: [&UpSet; 3], q: [&UpSet; 3]) -> bool {
    p[0].is_subset(q[0]) && q[2].is_subset(p[2])
}

fn v2_infinite(s: &UpSet) -> bool {
    s.intersect(&UpSet::residue_class(1, 3)).is_infinite()
}

pub(crate) fn prec1_raw(p: [&UpSet; 3], q: [&UpSet; 3]) -> bool {
    let (v, _) = base_worlds();
    let premise = leq_raw(v.parts(), p) && v2_infinite(p[1]);
    leq_raw(p, q) && (!premise || v2_infinite(q[1]))
}

/// `⊴`, its strict part and `≺₁`.
pub fn order_relations(p: &QuasiPartition, q: &QuasiPartition) -> Orders {
    let leq = leq_raw(p.parts(), q.parts());
    Orders { leq, strict: leq && p != q, prec1: prec1_raw(p.parts(), q.parts()) }
}

/// The surjection `ℕ → ≡1 mod 3` interpreting the second argument of `σ₁`.
pub fn f(n: u64) -> u64 {
    3 * n - 2
}

/// `σ₁(p) = {n | f(n) ∈ A}` and the bit of `S`, set exactly above `w`.
pub fn sigma(p: &QuasiPartition) -> (UpSet, u8) {
    let r = p.a.affine_preimage(3, -2).expect("3n - 2 maps ℕ into ℕ");
    let (_, w) = base_worlds();
    (r, order_relations(&w, p).strict as u8)
}

/// A world paired with a finite sequence of elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorldTuple {
    pub world: QuasiPartition,
    pub elems: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatedTuplePair {
    pub left: WorldTuple,
    pub right: WorldTuple,
}

pub(crate) fn is_bijection(a: &[u64], b: &[u64]) -> bool {
    (0..a.len()).all(|i| (0..i).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

pub(crate) fn related_raw(p: [&UpSet; 3], a: &[u64], q: [&UpSet; 3], b: &[u64]) -> bool {
    is_bijection(a, b)
        && a.iter().zip(b).all(|(&x, &y)| {
            (!p[0].contains(x) || q[0].contains(y)) && (!p[1].contains(x) || q[0].contains(y) || q[1].contains(y))
        })
}

fn check_tuples(a: &[u64], b: &[u64]) -> Result<(), CounterexampleError> {
    if a.len() != b.len() {
        return Err(CounterexampleError::LengthMismatch(a.len(), b.len()));
    }
    if a.contains(&0) || b.contains(&0) {
        return Err(CounterexampleError::ZeroElement);
    }
    Ok(())
}

/// Membership in `𝔸`: `ā ↦ b̄` is a bijection, `aₖ ∈ A ⇒ bₖ ∈ D` and
/// `aₖ ∈ B ⇒ bₖ ∈ D ∪ E`.
pub fn asim_related(pair: &RelatedTuplePair) -> Result<bool, CounterexampleError> {
    let (l, r) = (&pair.left, &pair.right);
    check_tuples(&l.elems, &r.elems)?;
    Ok(related_raw(l.world.parts(), &l.elems, r.world.parts(), &r.elems))
}

pub(crate) fn related(p: &QuasiPartition, a: &[u64], q: &QuasiPartition, b: &[u64]) -> Result<bool, CounterexampleError> {
    check_tuples(a, b)?;
    Ok(related_raw(p.parts(), a, q.parts(), b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(p: &QuasiPartition, a: &[u64], q: &QuasiPartition, b: &[u64]) -> RelatedTuplePair {
        RelatedTuplePair {
            left: WorldTuple { world: p.clone(), elems: a.to_vec() },
            right: WorldTuple { world: q.clone(), elems: b.to_vec() },
        }
    }

    #[test]
    fn base_worlds_are_quasi_partitions() {
        let (v, w) = base_worlds();
        assert!(is_quasi_partition(v.a(), v.b(), v.c()));
        assert!(is_quasi_partition(w.a(), w.b(), w.c()));
        assert_eq!(w.q_extension(), w.p_extension());
        assert!(v.p_extension().contains(3) && v.q_extension().contains(3));
        assert!(v.p_extension().contains(4) && !v.q_extension().contains(4));
    }

    #[test]
    fn finite_nonempty_middle_is_rejected() {
        let b = UpSet::finite([2]).unwrap();
        let a = UpSet::evens().difference(&b);
        assert!(!is_quasi_partition(&a, &b, &UpSet::odds()));
        assert!(QuasiPartition::new(a, b, UpSet::odds()).is_err());
        // uncovered 1 and 2
        let shifted = [UpSet::residue_class(0, 3), UpSet::residue_class(1, 3).difference(&UpSet::finite([1]).unwrap())];
        assert!(!is_quasi_partition(&shifted[0], &shifted[1], &UpSet::residue_class(2, 3)));
    }

    #[test]
    fn order_examples() {
        let (v, w) = base_worlds();
        let o = order_relations(&v, &v);
        assert!(o.leq && o.prec1 && !o.strict);
        let merged = QuasiPartition::new(v.a().union(v.b()), UpSet::empty(), v.c().clone()).unwrap();
        let o = order_relations(&v, &merged);
        assert!(o.leq && o.strict && !o.prec1);
        assert!(!order_relations(&v, &w).leq && !order_relations(&w, &v).leq);
    }

    #[test]
    fn sigma_examples() {
        let (v, w) = base_worlds();
        assert_eq!(sigma(&v).0, UpSet::empty());
        assert_eq!(sigma(&w).1, 0);
        let one = UpSet::finite([1]).unwrap();
        let up = QuasiPartition::new(w.a().union(&one), UpSet::empty(), w.c().difference(&one)).unwrap();
        assert_eq!(sigma(&up).1, 1);
        assert!(sigma(&up).0.contains(1));
    }

    #[test]
    fn relatedness_examples() {
        let (v, w) = base_worlds();
        assert_eq!(asim_related(&pair(&v, &[], &w, &[])), Ok(true));
        assert_eq!(asim_related(&pair(&v, &[3], &w, &[2])), Ok(true));
        assert_eq!(asim_related(&pair(&v, &[3], &w, &[1])), Ok(false));
        // a 𝐯₂ element must land in D ∪ E = evens
        assert_eq!(asim_related(&pair(&v, &[4], &w, &[1])), Ok(false));
        assert_eq!(asim_related(&pair(&v, &[2], &w, &[1])), Ok(true));
        assert_eq!(asim_related(&pair(&v, &[3, 3], &w, &[2, 4])), Ok(false));
        assert_eq!(asim_related(&pair(&v, &[3], &w, &[])), Err(CounterexampleError::LengthMismatch(1, 0)));
        assert_eq!(asim_related(&pair(&v, &[0], &w, &[2])), Err(CounterexampleError::ZeroElement));
    }

    #[test]
    fn f_hits_the_middle_class() {
        assert_eq!((1..=100).map(f).collect::<Vec<_>>(), UpSet::residue_class(1, 3).iter().take(100).collect::<Vec<_>>());
    }
}
