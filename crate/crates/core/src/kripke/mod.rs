//! Finite constant-domain Kripke models for the bi-intuitionistic language.

mod forcing;
mod oracle;
mod random;
mod spec;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::{Const, Pred, Signature, SignatureError};

pub use forcing::{forces, forces_with, ClauseMode, ForcingError};
pub use oracle::{classical_oracle_eval, classical_oracle_eval_with};
pub use random::random_model;
pub use spec::{load_model, LoadError, ModelSpec, SignatureSpec, ValuationEntry};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("a model needs at least one world")]
    NoWorlds,
    #[error("the domain must be nonempty")]
    EmptyDomain,
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("`{0}` names both a world and a domain element")]
    WorldElementClash(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("unknown domain element `{0}`")]
    UnknownElement(String),
    #[error("world index {0} out of range")]
    WorldIndex(usize),
    #[error("element index {0} out of range")]
    ElementIndex(usize),
    #[error("constant `{0}` is not a domain element")]
    ConstantNotInDomain(String),
    #[error("`{0}` is used both as a predicate and as a domain element")]
    ElementPredicateClash(String),
    #[error("undeclared predicate `{0}`")]
    UndeclaredPredicate(String),
    #[error("tuple {tuple:?} for `{pred}` has length {found}, expected {expected}")]
    TupleArity { pred: String, tuple: Vec<String>, expected: usize, found: usize },
    #[error("predicate `{0}` already belongs to the signature")]
    PredicateExists(String),
    #[error("extension of `{0}` must list one tuple set per world")]
    ExtensionShape(String),
    #[error("monotonicity violated: {0}")]
    NotMonotone(Violation),
    #[error("signature {0} is not a subsignature of the model signature {1}")]
    NotSubsignature(String, String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// One failed model condition, with witnesses by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotReflexive { world: String },
    NotTransitive { first: String, middle: String, last: String },
    Monotonicity { pred: String, lower: String, upper: String, tuple: Vec<String> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotReflexive { world } => write!(f, "order is not reflexive at {world}"),
            Violation::NotTransitive { first, middle, last } => {
                write!(f, "order is not transitive: {first} ≼ {middle} ≼ {last} but not {first} ≼ {last}")
            }
            Violation::Monotonicity { pred, lower, upper, tuple } => write!(
                f,
                "monotonicity at ({pred}, {lower}, {upper}, ({})): holds at {lower} ≼ {upper} but not at {upper}",
                tuple.join(",")
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        Ok(())
    }
}

/// Tuples of element indices forced for one predicate, one set per world.
pub type Extension = Vec<BTreeSet<Vec<usize>>>;

/// A finite constant-domain model. Worlds and elements are referred to by
/// index; names are kept for input and output. Every domain element is also
/// a constant denoting itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    worlds: Vec<String>,
    domain: Vec<String>,
    leq: Vec<Vec<bool>>,
    signature: Signature,
    valuation: BTreeMap<Pred, Extension>,
}

/// A model together with a distinguished world.
#[derive(Clone, Copy, Debug)]
pub struct PointedModel<'a> {
    pub model: &'a FiniteModel,
    pub world: usize,
}

impl<'a> PointedModel<'a> {
    pub fn new(model: &'a FiniteModel, world: usize) -> Result<Self, ModelError> {
        if world >= model.world_count() {
            return Err(ModelError::WorldIndex(world));
        }
        Ok(Self { model, world })
    }
}

fn check_names(worlds: &[String], domain: &[String], sig: &Signature) -> Result<(), ModelError> {
    if worlds.is_empty() {
        return Err(ModelError::NoWorlds);
    }
    if domain.is_empty() {
        return Err(ModelError::EmptyDomain);
    }
    let mut seen = BTreeSet::new();
    for w in worlds {
        if !seen.insert(w.as_str()) {
            return Err(ModelError::DuplicateName(w.clone()));
        }
    }
    let mut elems = BTreeSet::new();
    for d in domain {
        if seen.contains(d.as_str()) {
            return Err(ModelError::WorldElementClash(d.clone()));
        }
        if !elems.insert(d.as_str()) {
            return Err(ModelError::DuplicateName(d.clone()));
        }
        if sig.arity(d).is_some() {
            return Err(ModelError::ElementPredicateClash(d.clone()));
        }
    }
    for c in sig.consts() {
        if !elems.contains(c.as_str()) {
            return Err(ModelError::ConstantNotInDomain(c.to_string()));
        }
    }
    Ok(())
}

impl FiniteModel {
    /// Builds a model whose order is the reflexive-transitive closure of
    /// `generators`. Monotonicity is not enforced here; see
    /// [`validate_model`].
    pub fn new(
        worlds: Vec<String>,
        generators: &[(usize, usize)],
        domain: Vec<String>,
        signature: Signature,
        valuation: BTreeMap<Pred, Extension>,
    ) -> Result<Self, ModelError> {
        let n = worlds.len();
        let mut leq = vec![vec![false; n]; n];
        for &(a, b) in generators {
            if a >= n || b >= n {
                return Err(ModelError::WorldIndex(a.max(b)));
            }
            leq[a][b] = true;
        }
        for (w, row) in leq.iter_mut().enumerate() {
            row[w] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    let through = leq[k].clone();
                    for (cell, &step) in leq[i].iter_mut().zip(&through) {
                        *cell |= step;
                    }
                }
            }
        }
        Self::with_order(worlds, leq, domain, signature, valuation)
    }

    /// Builds a model with the order taken exactly as given.
    pub fn with_order(
        worlds: Vec<String>,
        leq: Vec<Vec<bool>>,
        domain: Vec<String>,
        signature: Signature,
        mut valuation: BTreeMap<Pred, Extension>,
    ) -> Result<Self, ModelError> {
        check_names(&worlds, &domain, &signature)?;
        let n = worlds.len();
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(ModelError::WorldIndex(n));
        }
        for (p, ext) in &valuation {
            let arity = signature.arity(p.as_str()).ok_or_else(|| ModelError::UndeclaredPredicate(p.to_string()))?;
            if ext.len() != n {
                return Err(ModelError::ExtensionShape(p.to_string()));
            }
            for tuple in ext.iter().flatten() {
                if tuple.len() != arity {
                    return Err(ModelError::TupleArity {
                        pred: p.to_string(),
                        tuple: tuple.iter().map(|&d| domain.get(d).cloned().unwrap_or_default()).collect(),
                        expected: arity,
                        found: tuple.len(),
                    });
                }
                if let Some(&d) = tuple.iter().find(|&&d| d >= domain.len()) {
                    return Err(ModelError::ElementIndex(d));
                }
            }
        }
        for (p, _) in signature.preds() {
            valuation.entry(p.clone()).or_insert_with(|| vec![BTreeSet::new(); n]);
        }
        Ok(Self { worlds, domain, leq, signature, valuation })
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn domain_size(&self) -> usize {
        self.domain.len()
    }

    pub fn world_name(&self, w: usize) -> &str {
        &self.worlds[w]
    }

    pub fn element_name(&self, d: usize) -> &str {
        &self.domain[d]
    }

    pub fn world_names(&self) -> &[String] {
        &self.worlds
    }

    pub fn element_names(&self) -> &[String] {
        &self.domain
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.domain.iter().position(|d| d == name)
    }

    /// The constant naming element `d`.
    pub fn element_const(&self, d: usize) -> Const {
        Const::new(&self.domain[d])
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// The signature extended by one constant per domain element.
    pub fn expanded_signature(&self) -> Signature {
        let mut sig = self.signature.clone();
        for d in &self.domain {
            sig.add_const(Const::new(d)).expect("element names never clash with predicates");
        }
        sig
    }

    /// `w ≼ v`.
    pub fn leq(&self, w: usize, v: usize) -> bool {
        self.leq[w][v]
    }

    pub fn successors(&self, w: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.worlds.len()).filter(move |&v| self.leq[w][v])
    }

    pub fn predecessors(&self, w: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.worlds.len()).filter(move |&v| self.leq[v][w])
    }

    /// Generator pairs of the order (all non-reflexive pairs).
    pub fn order_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.worlds.len();
        (0..n).flat_map(|w| (0..n).map(move |v| (w, v))).filter(|&(w, v)| w != v && self.leq[w][v]).collect()
    }

    pub fn holds(&self, pred: &str, world: usize, tuple: &[usize]) -> bool {
        self.valuation.get(pred).is_some_and(|ext| ext[world].contains(tuple))
    }

    pub fn extension(&self, pred: &str) -> Option<&Extension> {
        self.valuation.get(pred)
    }

    /// Drops every predicate and constant outside `sig`.
    pub fn reduct(&self, sig: &Signature) -> Result<FiniteModel, ModelError> {
        if !sig.is_subsignature_of(&self.signature) {
            return Err(ModelError::NotSubsignature(sig.to_string(), self.signature.to_string()));
        }
        let valuation =
            self.valuation.iter().filter(|(p, _)| sig.arity(p.as_str()).is_some()).map(|(p, e)| (p.clone(), e.clone())).collect();
        Ok(FiniteModel { valuation, signature: sig.clone(), ..self.clone() })
    }

    /// Adds fresh predicates with the given extensions. Each extension must
    /// be monotone along the order.
    pub fn expand(&self, new_preds: BTreeMap<Pred, (usize, Extension)>) -> Result<FiniteModel, ModelError> {
        let mut out = self.clone();
        for (p, (arity, ext)) in new_preds {
            if self.signature.arity(p.as_str()).is_some() {
                return Err(ModelError::PredicateExists(p.to_string()));
            }
            if self.domain.iter().any(|d| d == p.as_str()) {
                return Err(ModelError::ElementPredicateClash(p.to_string()));
            }
            out.signature.add_pred(p.clone(), arity)?;
            out.valuation.insert(p, ext);
        }
        let out = FiniteModel::with_order(out.worlds, out.leq, out.domain, out.signature, out.valuation)?;
        if let Some(v) = validate_model(&out).violations.into_iter().find(|v| matches!(v, Violation::Monotonicity { .. })) {
            return Err(ModelError::NotMonotone(v));
        }
        Ok(out)
    }
}

/// Reports every failure of reflexivity, transitivity and monotonicity.
pub fn validate_model(m: &FiniteModel) -> ValidationReport {
    let n = m.world_count();
    let mut violations = Vec::new();
    for w in 0..n {
        if !m.leq(w, w) {
            violations.push(Violation::NotReflexive { world: m.worlds[w].clone() });
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !m.leq(a, b) {
                continue;
            }
            for c in 0..n {
                if m.leq(b, c) && !m.leq(a, c) {
                    violations.push(Violation::NotTransitive {
                        first: m.worlds[a].clone(),
                        middle: m.worlds[b].clone(),
                        last: m.worlds[c].clone(),
                    });
                }
            }
        }
    }
    for (p, ext) in &m.valuation {
        for w in 0..n {
            for v in 0..n {
                if w == v || !m.leq(w, v) {
                    continue;
                }
                for tuple in ext[w].difference(&ext[v]) {
                    violations.push(Violation::Monotonicity {
                        pred: p.to_string(),
                        lower: m.worlds[w].clone(),
                        upper: m.worlds[v].clone(),
                        tuple: tuple.iter().map(|&d| m.domain[d].clone()).collect(),
                    });
                }
            }
        }
    }
    ValidationReport { violations }
}

/// Two worlds `w ≺ v`, one element `d`, `P(d)` forced at `v` only.
pub fn mtoy() -> FiniteModel {
    let mut val = BTreeMap::new();
    val.insert(Pred::new("P"), vec![BTreeSet::new(), BTreeSet::from([vec![0]])]);
    FiniteModel::new(
        vec!["w".into(), "v".into()],
        &[(0, 1)],
        vec!["d".into()],
        Signature::of(&[("P", 1)], &[]),
        val,
    )
    .expect("mtoy is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(p_at_w: bool, p_at_v: bool) -> FiniteModel {
        let set = |b: bool| if b { BTreeSet::from([vec![0]]) } else { BTreeSet::new() };
        let val = BTreeMap::from([(Pred::new("P"), vec![set(p_at_w), set(p_at_v)])]);
        FiniteModel::new(vec!["w".into(), "v".into()], &[(0, 1)], vec!["d".into()], Signature::of(&[("P", 1)], &[]), val)
            .unwrap()
    }

    #[test]
    fn monotonicity_breach_is_reported_with_witness() {
        let report = validate_model(&chain(true, false));
        assert_eq!(
            report.violations,
            vec![Violation::Monotonicity {
                pred: "P".into(),
                lower: "w".into(),
                upper: "v".into(),
                tuple: vec!["d".into()]
            }]
        );
    }

    #[test]
    fn closure_on_load_gives_a_preorder() {
        let m = FiniteModel::new(
            (0..4).map(|i| format!("w{i}")).collect(),
            &[(0, 1), (1, 2), (2, 3)],
            vec!["d".into()],
            Signature::empty(),
            BTreeMap::new(),
        )
        .unwrap();
        assert!(validate_model(&m).is_ok());
        assert!(m.leq(0, 3) && !m.leq(3, 0));
        let single = FiniteModel::new(vec!["w".into()], &[], vec!["d".into()], Signature::empty(), BTreeMap::new()).unwrap();
        assert!(validate_model(&single).is_ok());
    }

    #[test]
    fn raw_order_failures_are_listed() {
        let leq = vec![vec![false, true, false], vec![false, true, true], vec![false, false, true]];
        let m = FiniteModel::with_order(
            vec!["a".into(), "b".into(), "c".into()],
            leq,
            vec!["d".into()],
            Signature::empty(),
            BTreeMap::new(),
        )
        .unwrap();
        let r = validate_model(&m);
        assert!(r.violations.contains(&Violation::NotReflexive { world: "a".into() }));
        assert!(r.violations.contains(&Violation::NotTransitive {
            first: "a".into(),
            middle: "b".into(),
            last: "c".into()
        }));
    }

    #[test]
    fn names_must_be_consistent() {
        let e = FiniteModel::new(vec!["x".into()], &[], vec!["x".into()], Signature::empty(), BTreeMap::new());
        assert_eq!(e, Err(ModelError::WorldElementClash("x".into())));
        let e = FiniteModel::new(vec!["w".into()], &[], vec!["d".into()], Signature::of(&[], &["c"]), BTreeMap::new());
        assert_eq!(e, Err(ModelError::ConstantNotInDomain("c".into())));
    }

    #[test]
    fn expand_and_reduct() {
        let m = mtoy();
        let s = BTreeMap::from([(Pred::new("S"), (0, vec![BTreeSet::new(), BTreeSet::from([vec![]])]))]);
        let e = m.expand(s).unwrap();
        assert!(validate_model(&e).is_ok());
        assert_eq!(e.reduct(m.signature()).unwrap(), m);
        assert_eq!(m.reduct(m.signature()).unwrap(), m);

        let bad = BTreeMap::from([(Pred::new("S"), (0, vec![BTreeSet::from([vec![]]), BTreeSet::new()]))]);
        assert!(matches!(m.expand(bad), Err(ModelError::NotMonotone(_))));
        let clash = BTreeMap::from([(Pred::new("P"), (1, vec![BTreeSet::new(), BTreeSet::new()]))]);
        assert_eq!(m.expand(clash), Err(ModelError::PredicateExists("P".into())));
        assert!(m.reduct(&Signature::of(&[("Q", 1)], &[])).is_err());
        let empty = m.reduct(&Signature::empty()).unwrap();
        assert!(empty.extension("P").is_none());
    }
}
