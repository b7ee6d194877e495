//! Abstract syntax of first-order bi-intuitionistic formulas.
//!
//! The language has predicate letters of any arity (arity 0 are propositional
//! letters), individual constants, variables, the constants `⊥`/`⊤`, the
//! binary connectives `∧ ∨ → ≪` and the quantifiers `∀ ∃`. Negation is not a
//! node of its own: `~φ` is read as `φ → ⊥`.

mod enumerate;
mod parse;
mod random;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use enumerate::{enumerate_sentences, SentenceEnumerator};
pub use parse::{parse_formula, ParseError};
pub use random::FormulaGen;

macro_rules! name_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(name: &str) -> Self {
                Self(Arc::from(name))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl From<&str> for $name {
            fn from(name: &str) -> Self {
                Self::new(name)
            }
        }

        impl std::borrow::Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }

        impl From<String> for $name {
            fn from(name: String) -> Self {
                Self(Arc::from(name))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

name_type!(
    /// A predicate letter.
    Pred
);
name_type!(
    /// An individual variable.
    Var
);
name_type!(
    /// An individual constant. Inside a model, domain elements act as
    /// constants naming themselves.
    Const
);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("`{0}` is declared both as a predicate and as a constant")]
    NameClash(String),
}

/// Predicate letters with their arities plus a finite set of constants.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    preds: BTreeMap<Pred, usize>,
    consts: BTreeSet<Const>,
}

impl Signature {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new<P, C>(preds: P, consts: C) -> Result<Self, SignatureError>
    where
        P: IntoIterator<Item = (Pred, usize)>,
        C: IntoIterator<Item = Const>,
    {
        let mut sig = Self::empty();
        for (p, n) in preds {
            sig.add_pred(p, n)?;
        }
        for c in consts {
            sig.add_const(c)?;
        }
        Ok(sig)
    }

    /// Shorthand for tests and fixed formulas: `Signature::of(&[("P", 1)], &["c"])`.
    pub fn of(preds: &[(&str, usize)], consts: &[&str]) -> Self {
        Self::new(
            preds.iter().map(|(p, n)| (Pred::new(p), *n)),
            consts.iter().map(|c| Const::new(c)),
        )
        .expect("signature literal has clashing names")
    }

    pub fn add_pred(&mut self, pred: Pred, arity: usize) -> Result<(), SignatureError> {
        if self.consts.contains(pred.as_str()) {
            return Err(SignatureError::NameClash(pred.to_string()));
        }
        self.preds.insert(pred, arity);
        Ok(())
    }

    pub fn add_const(&mut self, c: Const) -> Result<(), SignatureError> {
        if self.preds.contains_key(c.as_str()) {
            return Err(SignatureError::NameClash(c.to_string()));
        }
        self.consts.insert(c);
        Ok(())
    }

    pub fn arity(&self, pred: &str) -> Option<usize> {
        self.preds.get(pred).copied()
    }

    pub fn has_const(&self, c: &str) -> bool {
        self.consts.contains(c)
    }

    pub fn preds(&self) -> impl Iterator<Item = (&Pred, usize)> {
        self.preds.iter().map(|(p, n)| (p, *n))
    }

    pub fn consts(&self) -> impl Iterator<Item = &Const> {
        self.consts.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty() && self.consts.is_empty()
    }

    /// `self ⊆ other`: every predicate of `self` occurs in `other` with the
    /// same arity and every constant of `self` is a constant of `other`.
    pub fn is_subsignature_of(&self, other: &Signature) -> bool {
        self.preds.iter().all(|(p, n)| other.preds.get(p) == Some(n))
            && self.consts.is_subset(&other.consts)
    }

    pub fn union(&self, other: &Signature) -> Result<Signature, SignatureError> {
        let mut out = self.clone();
        for (p, n) in other.preds() {
            out.add_pred(p.clone(), n)?;
        }
        for c in other.consts() {
            out.add_const(c.clone())?;
        }
        Ok(out)
    }

    /// Predicates shared with the same arity, and shared constants.
    pub fn intersection(&self, other: &Signature) -> Signature {
        Signature {
            preds: self
                .preds
                .iter()
                .filter(|(p, n)| other.preds.get(*p) == Some(*n))
                .map(|(p, n)| (p.clone(), *n))
                .collect(),
            consts: self.consts.intersection(&other.consts).cloned().collect(),
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let preds: Vec<String> = self.preds.iter().map(|(p, n)| format!("{p}/{n}")).collect();
        let consts: Vec<String> = self.consts.iter().map(|c| c.to_string()).collect();
        write!(f, "({{{}}}, {{{}}})", preds.join(", "), consts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    Const(Const),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => v.fmt(f),
            Term::Const(c) => c.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom { pred: Pred, args: Vec<Term> },
    Bottom,
    Top,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// Co-implication `φ ≪ ψ`.
    CoImplies(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: &str, args: Vec<Term>) -> Self {
        Formula::Atom { pred: Pred::new(pred), args }
    }

    pub fn prop(pred: &str) -> Self {
        Formula::atom(pred, Vec::new())
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn co_implies(l: Formula, r: Formula) -> Self {
        Formula::CoImplies(Box::new(l), Box::new(r))
    }

    /// `¬φ`, i.e. `φ → ⊥`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::implies(f, Formula::Bottom)
    }

    pub fn forall(x: &str, body: Formula) -> Self {
        Formula::Forall(Var::new(x), Box::new(body))
    }

    pub fn exists(x: &str, body: Formula) -> Self {
        Formula::Exists(Var::new(x), Box::new(body))
    }

    /// Number of AST nodes; an atom counts as one node.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom { .. } | Formula::Bottom | Formula::Top => 1,
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::CoImplies(l, r) => {
                1 + l.size() + r.size()
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => 1 + b.size(),
        }
    }

    /// Nesting depth of `→`, `≪`, `∀`, `∃`; `∧` and `∨` are free.
    pub fn rank(&self) -> usize {
        match self {
            Formula::Atom { .. } | Formula::Bottom | Formula::Top => 0,
            Formula::And(l, r) | Formula::Or(l, r) => l.rank().max(r.rank()),
            Formula::Implies(l, r) | Formula::CoImplies(l, r) => 1 + l.rank().max(r.rank()),
            Formula::Forall(_, b) | Formula::Exists(_, b) => 1 + b.rank(),
        }
    }

    /// Nesting depth of quantifiers alone.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Atom { .. } | Formula::Bottom | Formula::Top => 0,
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::CoImplies(l, r) => {
                l.quantifier_depth().max(r.quantifier_depth())
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => 1 + b.quantifier_depth(),
        }
    }

    fn kind_rank(&self) -> u8 {
        match self {
            Formula::Bottom => 0,
            Formula::Top => 1,
            Formula::Atom { .. } => 2,
            Formula::And(..) => 3,
            Formula::Or(..) => 4,
            Formula::Implies(..) => 5,
            Formula::CoImplies(..) => 6,
            Formula::Forall(..) => 7,
            Formula::Exists(..) => 8,
        }
    }

    /// The enumeration order: size first, then node kind
    /// (`⊥ ⊤ atom ∧ ∨ → ≪ ∀ ∃`), then children left to right under the same
    /// order. Atoms compare by predicate, then arguments.
    pub fn graded_cmp(&self, other: &Formula) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.kind_rank().cmp(&other.kind_rank()))
            .then_with(|| match (self, other) {
                (Formula::Atom { pred: p, args: a }, Formula::Atom { pred: q, args: b }) => {
                    p.cmp(q).then_with(|| a.cmp(b))
                }
                (Formula::And(l1, r1), Formula::And(l2, r2))
                | (Formula::Or(l1, r1), Formula::Or(l2, r2))
                | (Formula::Implies(l1, r1), Formula::Implies(l2, r2))
                | (Formula::CoImplies(l1, r1), Formula::CoImplies(l2, r2)) => {
                    l1.graded_cmp(l2).then_with(|| r1.graded_cmp(r2))
                }
                (Formula::Forall(x, b1), Formula::Forall(y, b2))
                | (Formula::Exists(x, b1), Formula::Exists(y, b2)) => {
                    x.cmp(y).then_with(|| b1.graded_cmp(b2))
                }
                _ => Ordering::Equal,
            })
    }
}

/// Fully parenthesized rendering that [`parse_formula`] reads back.
pub fn format_formula(f: &Formula) -> String {
    f.to_string()
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom { pred, args } => {
                write!(f, "{pred}")?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, t) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{t}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
            Formula::Bottom => f.write_str("_|_"),
            Formula::Top => f.write_str("T"),
            Formula::And(l, r) => write!(f, "({l} & {r})"),
            Formula::Or(l, r) => write!(f, "({l} \\/ {r})"),
            Formula::Implies(l, r) => write!(f, "({l} -> {r})"),
            Formula::CoImplies(l, r) => write!(f, "({l} -< {r})"),
            Formula::Forall(x, b) => write!(f, "(forall {x}. {b})"),
            Formula::Exists(x, b) => write!(f, "(exists {x}. {b})"),
        }
    }
}

/// Free and bound variables.
pub fn variable_sets(f: &Formula) -> (BTreeSet<Var>, BTreeSet<Var>) {
    fn walk(f: &Formula, free: &mut BTreeSet<Var>, bound: &mut BTreeSet<Var>) {
        match f {
            Formula::Atom { args, .. } => {
                for t in args {
                    if let Term::Var(v) = t {
                        free.insert(v.clone());
                    }
                }
            }
            Formula::Bottom | Formula::Top => {}
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::CoImplies(l, r) => {
                walk(l, free, bound);
                walk(r, free, bound);
            }
            Formula::Forall(x, b) | Formula::Exists(x, b) => {
                let mut inner = BTreeSet::new();
                walk(b, &mut inner, bound);
                inner.remove(x);
                free.extend(inner);
                bound.insert(x.clone());
            }
        }
    }
    let mut free = BTreeSet::new();
    let mut bound = BTreeSet::new();
    walk(f, &mut free, &mut bound);
    (free, bound)
}

pub fn free_vars(f: &Formula) -> BTreeSet<Var> {
    variable_sets(f).0
}

/// `Θ_f`: the least signature whose language contains `f`.
pub fn signature_of(f: &Formula) -> Signature {
    fn walk(f: &Formula, sig: &mut Signature) {
        match f {
            Formula::Atom { pred, args } => {
                sig.preds.insert(pred.clone(), args.len());
                for t in args {
                    if let Term::Const(c) = t {
                        sig.consts.insert(c.clone());
                    }
                }
            }
            Formula::Bottom | Formula::Top => {}
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::CoImplies(l, r) => {
                walk(l, sig);
                walk(r, sig);
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => walk(b, sig),
        }
    }
    let mut sig = Signature::empty();
    walk(f, &mut sig);
    sig
}

/// Simultaneous replacement of free occurrences of the bound variables by
/// constants. Under a quantifier on `x` the binding is restricted to the other
/// variables; no capture can occur because only constants are substituted.
pub fn substitute(f: &Formula, binding: &BTreeMap<Var, Const>) -> Formula {
    if binding.is_empty() {
        return f.clone();
    }
    match f {
        Formula::Atom { pred, args } => Formula::Atom {
            pred: pred.clone(),
            args: args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => match binding.get(v) {
                        Some(c) => Term::Const(c.clone()),
                        None => t.clone(),
                    },
                    Term::Const(_) => t.clone(),
                })
                .collect(),
        },
        Formula::Bottom | Formula::Top => f.clone(),
        Formula::And(l, r) => Formula::and(substitute(l, binding), substitute(r, binding)),
        Formula::Or(l, r) => Formula::or(substitute(l, binding), substitute(r, binding)),
        Formula::Implies(l, r) => Formula::implies(substitute(l, binding), substitute(r, binding)),
        Formula::CoImplies(l, r) => Formula::co_implies(substitute(l, binding), substitute(r, binding)),
        Formula::Forall(x, b) | Formula::Exists(x, b) => {
            let body = if binding.contains_key(x) {
                let mut restricted = binding.clone();
                restricted.remove(x);
                substitute(b, &restricted)
            } else {
                substitute(b, binding)
            };
            match f {
                Formula::Forall(..) => Formula::Forall(x.clone(), Box::new(body)),
                _ => Formula::Exists(x.clone(), Box::new(body)),
            }
        }
    }
}

/// `φ[c/x]`.
pub fn substitute_one(f: &Formula, x: &Var, c: &Const) -> Formula {
    substitute(f, &BTreeMap::from([(x.clone(), c.clone())]))
}

/// Sentencehood by the inductive characterization: closed atoms over `sig`,
/// `⊥`, `⊤`, closure under the binary connectives, and `Qx φ` whenever
/// `φ[c/x]` is a sentence over `sig ∪ {c}` for a fresh constant `c`.
pub fn is_sentence(f: &Formula, sig: &Signature) -> bool {
    match f {
        Formula::Atom { pred, args } => {
            sig.arity(pred.as_str()) == Some(args.len())
                && args.iter().all(|t| matches!(t, Term::Const(c) if sig.has_const(c.as_str())))
        }
        Formula::Bottom | Formula::Top => true,
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::CoImplies(l, r) => {
            is_sentence(l, sig) && is_sentence(r, sig)
        }
        Formula::Forall(x, b) | Formula::Exists(x, b) => {
            let c = fresh_const(sig, b);
            let mut extended = sig.clone();
            if extended.add_const(c.clone()).is_err() {
                return false;
            }
            is_sentence(&substitute_one(b, x, &c), &extended)
        }
    }
}

fn fresh_const(sig: &Signature, f: &Formula) -> Const {
    let used = signature_of(f);
    (0..)
        .map(|i| Const::from(format!("#c{i}")))
        .find(|c| !sig.has_const(c.as_str()) && !used.has_const(c.as_str()) && sig.arity(c.as_str()).is_none())
        .expect("unbounded supply of fresh names")
}

/// The pair `(φ, ψ)` with `φ = ∀x∃y(P(y) ∧ (Q(y) → R(x))) ∧ ¬∀xR(x)` and
/// `ψ = ∀x(P(x) → (Q(x) ∨ S)) → S`; `φ → ψ` is valid but has no interpolant
/// over `{P, Q}`.
pub fn mints_formulas() -> (Formula, Formula) {
    let x = || Term::Var(Var::new("x"));
    let y = || Term::Var(Var::new("y"));
    let phi = Formula::and(
        Formula::forall(
            "x",
            Formula::exists(
                "y",
                Formula::and(
                    Formula::atom("P", vec![y()]),
                    Formula::implies(Formula::atom("Q", vec![y()]), Formula::atom("R", vec![x()])),
                ),
            ),
        ),
        Formula::not(Formula::forall("x", Formula::atom("R", vec![x()]))),
    );
    let psi = Formula::implies(
        Formula::forall(
            "x",
            Formula::implies(
                Formula::atom("P", vec![x()]),
                Formula::or(Formula::atom("Q", vec![x()]), Formula::prop("S")),
            ),
        ),
        Formula::prop("S"),
    );
    (phi, psi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> Term {
        Term::Var(Var::new(name))
    }

    fn c(name: &str) -> Term {
        Term::Const(Const::new(name))
    }

    #[test]
    fn variable_sets_examples() {
        let f = Formula::forall("x", Formula::atom("P", vec![v("x")]));
        let (free, bound) = variable_sets(&f);
        assert!(free.is_empty());
        assert_eq!(bound, BTreeSet::from([Var::new("x")]));

        let g = Formula::implies(
            Formula::atom("P", vec![v("x")]),
            Formula::exists("y", Formula::atom("Q", vec![v("y")])),
        );
        let (free, bound) = variable_sets(&g);
        assert_eq!(free, BTreeSet::from([Var::new("x")]));
        assert_eq!(bound, BTreeSet::from([Var::new("y")]));

        let (phi, psi) = mints_formulas();
        assert!(free_vars(&phi).is_empty());
        assert!(free_vars(&psi).is_empty());
    }

    #[test]
    fn bound_and_free_occurrence_of_same_variable() {
        // x is free in the left conjunct and bound in the right one.
        let f = Formula::and(
            Formula::atom("P", vec![v("x")]),
            Formula::forall("x", Formula::atom("P", vec![v("x")])),
        );
        let (free, bound) = variable_sets(&f);
        assert_eq!(free, BTreeSet::from([Var::new("x")]));
        assert_eq!(bound, BTreeSet::from([Var::new("x")]));
    }

    #[test]
    fn signature_of_examples() {
        assert!(signature_of(&Formula::Bottom).is_empty());
        assert!(signature_of(&Formula::Top).is_empty());
        let (phi, psi) = mints_formulas();
        assert_eq!(signature_of(&phi), Signature::of(&[("P", 1), ("Q", 1), ("R", 1)], &[]));
        assert_eq!(signature_of(&psi), Signature::of(&[("P", 1), ("Q", 1), ("S", 0)], &[]));
        assert_eq!(
            signature_of(&phi).intersection(&signature_of(&psi)),
            Signature::of(&[("P", 1), ("Q", 1)], &[])
        );
        let atom = Formula::atom("P", vec![c("c"), v("x")]);
        assert_eq!(signature_of(&atom), Signature::of(&[("P", 2)], &["c"]));
    }

    #[test]
    fn substitution_examples() {
        let bound = Formula::forall("x", Formula::atom("P", vec![v("x")]));
        let b = BTreeMap::from([(Var::new("x"), Const::new("c"))]);
        assert_eq!(substitute(&bound, &b), bound);

        let f = Formula::and(Formula::atom("P", vec![v("x")]), Formula::atom("Q", vec![v("y")]));
        let b = BTreeMap::from([(Var::new("x"), Const::new("c")), (Var::new("y"), Const::new("d"))]);
        assert_eq!(
            substitute(&f, &b),
            Formula::and(Formula::atom("P", vec![c("c")]), Formula::atom("Q", vec![c("d")]))
        );
    }

    #[test]
    fn sentence_examples() {
        let sig = Signature::of(&[("P", 1)], &[]);
        assert!(is_sentence(&Formula::forall("x", Formula::atom("P", vec![v("x")])), &sig));
        assert!(!is_sentence(&Formula::atom("P", vec![v("x")]), &sig));
        let (phi, psi) = mints_formulas();
        assert!(is_sentence(&psi, &Signature::of(&[("P", 1), ("Q", 1), ("S", 0)], &[])));
        assert!(is_sentence(&phi, &signature_of(&phi)));
        // undeclared predicate
        assert!(!is_sentence(&psi, &sig));
    }

    #[test]
    fn mints_phi_negation_is_implication_to_bottom() {
        let (phi, _) = mints_formulas();
        let Formula::And(_, neg) = phi else { panic!("φ is a conjunction") };
        assert!(matches!(*neg, Formula::Implies(_, ref r) if **r == Formula::Bottom));
    }

    #[test]
    fn rank_counts_implications_and_quantifiers() {
        let (phi, psi) = mints_formulas();
        // ∀x∃y(P ∧ (Q → R)) has rank 3; ¬∀xR has rank 2.
        assert_eq!(phi.rank(), 3);
        assert_eq!(psi.rank(), 3);
        assert_eq!(Formula::and(Formula::Top, Formula::Bottom).rank(), 0);
        assert_eq!(phi.size(), 12);
    }

    #[test]
    fn signature_rejects_clash() {
        let mut sig = Signature::of(&[("P", 1)], &[]);
        assert!(sig.add_const(Const::new("P")).is_err());
    }
}
