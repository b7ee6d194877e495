use std::fmt;

use super::{shared_signature, tuple_at, AsimError, AsimRelation, PointedTuple};
use crate::kripke::FiniteModel;

/// An argument of an atom pattern: a tuple position or a signature constant.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Arg {
    Pos(usize),
    Const(String),
}

#[derive(Clone, Debug)]
struct Pattern {
    pred: String,
    args: Vec<Arg>,
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self
            .args
            .iter()
            .map(|a| match a {
                Arg::Pos(k) => format!("x{}", k + 1),
                Arg::Const(c) => c.clone(),
            })
            .collect();
        if args.is_empty() {
            write!(f, "{}", self.pred)
        } else {
            write!(f, "{}({})", self.pred, args.join(","))
        }
    }
}

/// Every atom `P(t₁,…,t_m)` over tuple positions `< n` and constants, with
/// the set of patterns true at each pointed tuple of each side.
pub(crate) struct AtomFacts {
    patterns: Vec<Vec<Pattern>>,
    /// `facts[side][n][w · Dⁿ + tuple]`, one bit per pattern.
    facts: [Vec<Vec<Vec<u64>>>; 2],
    domain: [usize; 2],
}

impl AtomFacts {
    pub(crate) fn new(m0: &FiniteModel, m1: &FiniteModel, max_len: usize) -> Self {
        let sig = m0.signature();
        let consts: Vec<String> = sig.consts().map(|c| c.to_string()).collect();
        let mut patterns = Vec::new();
        for n in 0..=max_len {
            let choices: Vec<Arg> = (0..n).map(Arg::Pos).chain(consts.iter().cloned().map(Arg::Const)).collect();
            let mut level = Vec::new();
            for (p, arity) in sig.preds() {
                let mut acc: Vec<Vec<Arg>> = vec![Vec::new()];
                for _ in 0..arity {
                    acc = acc
                        .into_iter()
                        .flat_map(|prefix| {
                            choices.iter().map(move |c| {
                                let mut next = prefix.clone();
                                next.push(c.clone());
                                next
                            })
                        })
                        .collect();
                }
                level.extend(acc.into_iter().map(|args| Pattern { pred: p.to_string(), args }));
            }
            patterns.push(level);
        }
        let build = |m: &FiniteModel| -> Vec<Vec<Vec<u64>>> {
            let d = m.domain_size();
            (0..=max_len)
                .map(|n| {
                    let pats = &patterns[n];
                    let words = pats.len().div_ceil(64);
                    let count = d.pow(n as u32);
                    (0..m.world_count() * count)
                        .map(|cell| {
                            let (w, t) = (cell / count, tuple_at(cell % count, d, n));
                            let mut bits = vec![0u64; words];
                            for (k, pat) in pats.iter().enumerate() {
                                let tuple: Vec<usize> = pat
                                    .args
                                    .iter()
                                    .map(|a| match a {
                                        Arg::Pos(i) => t[*i],
                                        Arg::Const(c) => m.element_index(c).expect("constants are elements"),
                                    })
                                    .collect();
                                if m.holds(&pat.pred, w, &tuple) {
                                    bits[k / 64] |= 1 << (k % 64);
                                }
                            }
                            bits
                        })
                        .collect()
                })
                .collect()
        };
        Self { facts: [build(m0), build(m1)], patterns, domain: [m0.domain_size(), m1.domain_size()] }
    }

    fn bits(&self, t: &PointedTuple) -> &[u64] {
        let s = t.side as usize;
        let n = t.len();
        let d = self.domain[s];
        &self.facts[s][n][t.world * d.pow(n as u32) + super::tuple_index(&t.elems, d)]
    }

    /// (atom) from `left` to `right`: every atom true on the left is true on
    /// the right.
    pub(crate) fn preserved(&self, left: &PointedTuple, right: &PointedTuple) -> bool {
        self.bits(left).iter().zip(self.bits(right)).all(|(a, b)| a & !b == 0)
    }

    fn first_failure(&self, left: &PointedTuple, right: &PointedTuple) -> Option<String> {
        let (a, b) = (self.bits(left), self.bits(right));
        (0..self.patterns[left.len()].len())
            .find(|k| a[k / 64] & !b[k / 64] & (1 << (k % 64)) != 0)
            .map(|k| self.patterns[left.len()][k].to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// An atom true on the left fails on the right.
    Atom { atom: String },
    /// No `w₀ ≽ w` answers the successor `v₀ ≽ v`.
    Back { v0: usize },
    /// No `v₀ ≼ v` answers the predecessor `w₀ ≼ w`.
    Forth { w0: usize },
    /// No left element answers the right element `b`.
    Left { b: usize },
    /// No right element answers the left element `a`.
    Right { a: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsimViolation {
    pub left: PointedTuple,
    pub right: PointedTuple,
    pub grade: usize,
    pub kind: ViolationKind,
}

impl fmt::Display for AsimViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pair = format!("{} ~ {} @{}", self.left, self.right, self.grade);
        match &self.kind {
            ViolationKind::Atom { atom } => write!(f, "atom {pair}: {atom} holds on the left only"),
            ViolationKind::Back { v0 } => write!(f, "back {pair}: successor v0={v0} unanswered"),
            ViolationKind::Forth { w0 } => write!(f, "forth {pair}: predecessor w0={w0} unanswered"),
            ViolationKind::Left { b } => write!(f, "left {pair}: element b={b} unanswered"),
            ViolationKind::Right { a } => write!(f, "right {pair}: element a={a} unanswered"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub pairs: usize,
    pub violations: Vec<AsimViolation>,
    /// Pairs of positive grade at the length cap, whose element moves are
    /// not demanded.
    pub bounded: usize,
}

impl CheckReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pairs={} violations={} bounded={}", self.pairs, self.violations.len(), self.bounded)?;
        for v in &self.violations {
            writeln!(f, "violated: {v}")?;
        }
        Ok(())
    }
}

/// Decides every condition for every pair of `rel`, honouring grades.
pub fn check_bi_asimulation(m0: &FiniteModel, m1: &FiniteModel, rel: &AsimRelation) -> Result<CheckReport, AsimError> {
    shared_signature(m0, m1)?;
    if rel.shape() != super::Shape::of(m0, m1) {
        return Err(AsimError::SignatureMismatch("relation shape".into(), "model sizes".into()));
    }
    let facts = AtomFacts::new(m0, m1, rel.max_len());
    let models = [m0, m1];
    let mut report = CheckReport::default();
    for (l, r, g) in rel.iter() {
        report.pairs += 1;
        let mut push = |kind| report.violations.push(AsimViolation { left: l.clone(), right: r.clone(), grade: g, kind });
        if let Some(atom) = facts.first_failure(&l, &r) {
            push(ViolationKind::Atom { atom });
        }
        if g == 0 {
            continue;
        }
        let (mi, mj) = (models[l.side as usize], models[r.side as usize]);
        let need = g - 1;
        let both = |w0: usize, v0: usize| {
            let (a, b) = (l.with_world(w0), r.with_world(v0));
            rel.at_least(&a, &b, need) && rel.at_least(&b, &a, need)
        };
        if let Some(v0) = mj.successors(r.world).find(|&v0| !mi.successors(l.world).any(|w0| both(w0, v0))) {
            push(ViolationKind::Back { v0 });
        }
        if let Some(w0) = mi.predecessors(l.world).find(|&w0| !mj.predecessors(r.world).any(|v0| both(w0, v0))) {
            push(ViolationKind::Forth { w0 });
        }
        if l.len() < rel.max_len() {
            let ext = |a: usize, b: usize| rel.at_least(&l.extended(a), &r.extended(b), need);
            if let Some(b) = (0..mj.domain_size()).find(|&b| !(0..mi.domain_size()).any(|a| ext(a, b))) {
                push(ViolationKind::Left { b });
            }
            if let Some(a) = (0..mi.domain_size()).find(|&a| !(0..mj.domain_size()).any(|b| ext(a, b))) {
                push(ViolationKind::Right { a });
            }
        } else {
            report.bounded += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, BTreeSet};

    use super::*;
    use crate::asim::Shape;
    use crate::syntax::{Pred, Signature};

    fn one_world(p: bool) -> FiniteModel {
        let ext = if p { BTreeSet::from([vec![0]]) } else { BTreeSet::new() };
        FiniteModel::new(
            vec!["w".into()],
            &[],
            vec!["d".into()],
            Signature::of(&[("P", 1)], &[]),
            BTreeMap::from([(Pred::new("P"), vec![ext])]),
        )
        .unwrap()
    }

    fn identity(m: &FiniteModel, max_len: usize, grade: usize) -> AsimRelation {
        let mut rel = AsimRelation::empty(Shape::of(m, m), max_len, grade);
        for n in 0..=max_len {
            let t = vec![0; n];
            for side in 0..2u8 {
                rel.insert(&PointedTuple::new(side, 0, t.clone()), &PointedTuple::new(1 - side, 0, t.clone()), grade)
                    .unwrap();
            }
        }
        rel
    }

    #[test]
    fn identity_on_one_world_is_clean() {
        let m = one_world(true);
        let report = check_bi_asimulation(&m, &m, &identity(&m, 2, 1)).unwrap();
        assert!(report.is_ok(), "{report}");
        assert_eq!(report.bounded, 2);
    }

    #[test]
    fn atom_violation_has_witness() {
        let (m0, m1) = (one_world(true), one_world(false));
        let mut rel = AsimRelation::empty(Shape::of(&m0, &m1), 1, 0);
        let l = PointedTuple::new(0, 0, vec![0]);
        let r = PointedTuple::new(1, 0, vec![0]);
        rel.insert(&l, &r, 0).unwrap();
        let report = check_bi_asimulation(&m0, &m1, &rel).unwrap();
        assert_eq!(report.violations[0].kind, ViolationKind::Atom { atom: "P(x1)".into() });
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let m0 = one_world(true);
        let m1 = FiniteModel::new(vec!["w".into()], &[], vec!["d".into()], Signature::empty(), BTreeMap::new()).unwrap();
        let rel = AsimRelation::empty(Shape::of(&m0, &m1), 0, 0);
        assert!(matches!(check_bi_asimulation(&m0, &m1, &rel), Err(AsimError::SignatureMismatch(..))));
    }
}
