use std::fmt;

use super::{base_worlds, is_quasi_partition, leq_raw, prec1_raw, related, related_raw, CounterexampleError, QuasiPartition};
use crate::periodic::UpSet;

pub const CLAIM_NAMES: [&str; 8] =
    ["union", "infinite", "disjoint", "quasi_partition", "order", "v2_condition", "prec1", "double_relation"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessCase {
    /// The middle component of the world being matched is infinite.
    Infinite,
    /// The middle component is empty and a remaining part gets split.
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub case: WitnessCase,
    /// The constructed triple, a quasi-partition exactly when claim 4 holds.
    pub triple: [UpSet; 3],
    pub claims: [bool; 8],
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|&c| c)
    }

    pub fn world(&self) -> Option<QuasiPartition> {
        QuasiPartition::new(self.triple[0].clone(), self.triple[1].clone(), self.triple[2].clone()).ok()
    }

    pub fn failed_claims(&self) -> Vec<&'static str> {
        CLAIM_NAMES.iter().zip(self.claims).filter(|(_, ok)| !ok).map(|(n, _)| *n).collect()
    }
}

impl fmt::Display for WitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = &self.triple;
        write!(f, "{:?} ({x} ; {y} ; {z})", self.case)?;
        for (name, ok) in CLAIM_NAMES.iter().zip(self.claims) {
            write!(f, " {name}={}", if ok { "ok" } else { "FAIL" })?;
        }
        Ok(())
    }
}

/// `[from ↦ to](s) = {toₖ | fromₖ ∈ s}`.
fn image(from: &[u64], to: &[u64], s: &UpSet) -> UpSet {
    UpSet::finite(from.iter().zip(to).filter(|(x, _)| s.contains(**x)).map(|(_, y)| *y)).expect("positive")
}

fn v2() -> UpSet {
    UpSet::residue_class(1, 3)
}

fn partition_claims(t: &[UpSet; 3]) -> [bool; 4] {
    let union = t[0].union(&t[1]).union(&t[2]) == UpSet::full();
    let infinite = t.iter().all(UpSet::is_infinite);
    let disjoint = t[0].is_disjoint(&t[1]) && t[0].is_disjoint(&t[2]) && t[1].is_disjoint(&t[2]);
    [union, infinite, disjoint, is_quasi_partition(&t[0], &t[1], &t[2])]
}

fn refs(t: &[UpSet; 3]) -> [&UpSet; 3] {
    [&t[0], &t[1], &t[2]]
}

fn mutually_related(p: [&UpSet; 3], a: &[u64], q: [&UpSet; 3], b: &[u64]) -> bool {
    related_raw(p, a, q, b) && related_raw(q, b, p, a)
}

/// Answers a move `q ⊴ succ` on the right with a world `(J, K, L) ⊵ p` on
/// the left such that `(J,K,L)ā` and `succ b̄` are related both ways.
pub fn back_witness(
    p: &QuasiPartition,
    a: &[u64],
    q: &QuasiPartition,
    b: &[u64],
    succ: &QuasiPartition,
) -> Result<WitnessReport, CounterexampleError> {
    if !related(p, a, q, b)? {
        return Err(CounterexampleError::Precondition("the tuples are not related".into()));
    }
    if !leq_raw(q.parts(), succ.parts()) {
        return Err(CounterexampleError::Precondition(format!("{succ} is not above {q}")));
    }
    let abar = UpSet::finite(a.iter().copied()).expect("positive");
    let [g, h, i] = succ.parts();
    let j = p.a().difference(&abar).union(&image(b, a, g));
    let (case, k, l) = if p.b().is_infinite() {
        (WitnessCase::Infinite, p.b().difference(&abar).union(&image(b, a, h)), p.c().difference(&abar).union(&image(b, a, i)))
    } else {
        let (c1, c2) = p.c().difference(&abar).split_two_infinite().expect("C minus a finite set is infinite");
        (WitnessCase::Empty, c1.union(&image(b, a, h)), c2.union(&image(b, a, i)))
    };
    let t = [j, k, l];
    let [c1, c2, c3, c4] = partition_claims(&t);
    let (v, _) = base_worlds();
    let premise = leq_raw(v.parts(), p.parts()) && p.b().intersect(&v2()).is_infinite();
    let claims = [
        c1,
        c2,
        c3,
        c4,
        leq_raw(p.parts(), refs(&t)),
        !premise || t[1].intersect(&v2()).is_infinite(),
        prec1_raw(p.parts(), refs(&t)),
        mutually_related(refs(&t), a, succ.parts(), b),
    ];
    Ok(WitnessReport { case, triple: t, claims })
}

/// Answers a move `pred ⊴ p` on the left with a world `(G, H, I) ⊴ q` on the
/// right such that `pred ā` and `(G,H,I) b̄` are related both ways.
pub fn forth_witness(
    p: &QuasiPartition,
    a: &[u64],
    q: &QuasiPartition,
    b: &[u64],
    pred: &QuasiPartition,
) -> Result<WitnessReport, CounterexampleError> {
    if !related(p, a, q, b)? {
        return Err(CounterexampleError::Precondition("the tuples are not related".into()));
    }
    if !leq_raw(pred.parts(), p.parts()) {
        return Err(CounterexampleError::Precondition(format!("{pred} is not below {p}")));
    }
    let bbar = UpSet::finite(b.iter().copied()).expect("positive");
    let [j, k, l] = pred.parts();
    let i = q.c().difference(&bbar).union(&image(a, b, l));
    let (v, _) = base_worlds();
    let (case, g, h) = if q.b().is_infinite() {
        (WitnessCase::Infinite, q.a().difference(&bbar).union(&image(a, b, j)), q.b().difference(&bbar).union(&image(a, b, k)))
    } else {
        let rest = q.a().difference(&bbar);
        let (d1, d2) = if q.a().intersect(v.a()).is_infinite() && q.a().intersect(v.b()).is_infinite() {
            (rest.difference(v.a()), rest.intersect(v.a()))
        } else {
            rest.split_two_infinite().expect("D minus a finite set is infinite")
        };
        (WitnessCase::Empty, d1.union(&image(a, b, j)), d2.union(&image(a, b, k)))
    };
    let t = [g, h, i];
    let [c1, c2, c3, c4] = partition_claims(&t);
    let premise = leq_raw(v.parts(), refs(&t)) && t[1].intersect(&v2()).is_infinite();
    let claim6 = match case {
        WitnessCase::Infinite => !premise || q.b().intersect(&v2()).is_infinite(),
        // E = ∅, so the premise itself must be refuted
        WitnessCase::Empty => !premise,
    };
    let claims = [
        c1,
        c2,
        c3,
        c4,
        leq_raw(refs(&t), q.parts()),
        claim6,
        prec1_raw(refs(&t), q.parts()),
        mutually_related(pred.parts(), a, refs(&t), b),
    ];
    Ok(WitnessReport { case, triple: t, claims })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// A new element on the right is matched on the left.
    Left,
    /// A new element on the left is matched on the right.
    Right,
}

/// The partner of a new element and whether the extended tuples are still
/// related. Repeated elements copy their position; fresh ones take the least
/// element of `C ∖ ā` (left) or `D ∖ b̄` (right).
pub fn element_witness(
    direction: Direction,
    p: &QuasiPartition,
    a: &[u64],
    q: &QuasiPartition,
    b: &[u64],
    new_elem: u64,
) -> Result<(u64, bool), CounterexampleError> {
    if !related(p, a, q, b)? {
        return Err(CounterexampleError::Precondition("the tuples are not related".into()));
    }
    if new_elem == 0 {
        return Err(CounterexampleError::ZeroElement);
    }
    let (own, other, pool) = match direction {
        Direction::Left => (b, a, p.c()),
        Direction::Right => (a, b, q.a()),
    };
    let partner = match own.iter().position(|&x| x == new_elem) {
        Some(k) => other[k],
        None => {
            let used = UpSet::finite(other.iter().copied()).expect("positive");
            pool.difference(&used).least().expect("an infinite set minus a finite one is nonempty")
        }
    };
    let (mut a2, mut b2) = (a.to_vec(), b.to_vec());
    match direction {
        Direction::Left => {
            a2.push(partner);
            b2.push(new_elem);
        }
        Direction::Right => {
            a2.push(new_elem);
            b2.push(partner);
        }
    }
    Ok((partner, related(p, &a2, q, &b2)?))
}
