use thiserror::Error;

use super::{FiniteModel, PointedModel};
use crate::syntax::{Formula, Term, Var};

/// Which world the second operand of `→` and `≪` is evaluated at.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ClauseMode {
    /// At the quantified world `v`.
    #[default]
    Standard,
    /// At the evaluation world `w`, as the clauses are printed.
    Literal,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ForcingError {
    #[error("free variable `{0}` in a formula evaluated as a sentence")]
    FreeVariable(String),
    #[error("undeclared predicate `{0}`")]
    UndeclaredPredicate(String),
    #[error("predicate `{pred}` has arity {expected} but is applied to {found} argument(s)")]
    ArityMismatch { pred: String, expected: usize, found: usize },
    #[error("`{0}` is neither a declared constant nor a domain element")]
    UnknownConstant(String),
    #[error("world index {0} out of range")]
    UnknownWorld(usize),
}

/// `(𝓜, w) ⊨ f` under the standard clauses.
pub fn forces(pm: &PointedModel<'_>, f: &Formula) -> Result<bool, ForcingError> {
    forces_with(pm, f, ClauseMode::Standard)
}

pub fn forces_with(pm: &PointedModel<'_>, f: &Formula, mode: ClauseMode) -> Result<bool, ForcingError> {
    if pm.world >= pm.model.world_count() {
        return Err(ForcingError::UnknownWorld(pm.world));
    }
    check(pm.model, f, &mut Vec::new())?;
    let mut env = Vec::new();
    Ok(Eval { m: pm.model, mode }.eval(f, pm.world, &mut env))
}

pub(crate) fn check(m: &FiniteModel, f: &Formula, bound: &mut Vec<Var>) -> Result<(), ForcingError> {
    match f {
        Formula::Atom { pred, args } => {
            let expected =
                m.signature().arity(pred.as_str()).ok_or_else(|| ForcingError::UndeclaredPredicate(pred.to_string()))?;
            if expected != args.len() {
                return Err(ForcingError::ArityMismatch { pred: pred.to_string(), expected, found: args.len() });
            }
            for t in args {
                match t {
                    Term::Var(v) if !bound.contains(v) => return Err(ForcingError::FreeVariable(v.to_string())),
                    Term::Const(c) if m.element_index(c.as_str()).is_none() => {
                        return Err(ForcingError::UnknownConstant(c.to_string()))
                    }
                    _ => {}
                }
            }
            Ok(())
        }
        Formula::Bottom | Formula::Top => Ok(()),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::CoImplies(l, r) => {
            check(m, l, bound)?;
            check(m, r, bound)
        }
        Formula::Forall(x, b) | Formula::Exists(x, b) => {
            bound.push(x.clone());
            let res = check(m, b, bound);
            bound.pop();
            res
        }
    }
}

struct Eval<'m> {
    m: &'m FiniteModel,
    mode: ClauseMode,
}

impl Eval<'_> {
    fn value(&self, t: &Term, env: &[(Var, usize)]) -> usize {
        match t {
            Term::Var(v) => env.iter().rev().find(|(x, _)| x == v).map(|(_, d)| *d).expect("checked bound"),
            Term::Const(c) => self.m.element_index(c.as_str()).expect("checked constant"),
        }
    }

    fn eval(&self, f: &Formula, w: usize, env: &mut Vec<(Var, usize)>) -> bool {
        match f {
            Formula::Atom { pred, args } => {
                let tuple: Vec<usize> = args.iter().map(|t| self.value(t, env)).collect();
                self.m.holds(pred.as_str(), w, &tuple)
            }
            Formula::Bottom => false,
            Formula::Top => true,
            Formula::And(l, r) => self.eval(l, w, env) && self.eval(r, w, env),
            Formula::Or(l, r) => self.eval(l, w, env) || self.eval(r, w, env),
            Formula::Implies(l, r) => {
                let succ: Vec<usize> = self.m.successors(w).collect();
                succ.into_iter().all(|v| {
                    let at = if self.mode == ClauseMode::Standard { v } else { w };
                    !self.eval(l, v, env) || self.eval(r, at, env)
                })
            }
            Formula::CoImplies(l, r) => {
                let pred: Vec<usize> = self.m.predecessors(w).collect();
                pred.into_iter().any(|v| {
                    let at = if self.mode == ClauseMode::Standard { v } else { w };
                    self.eval(l, v, env) && !self.eval(r, at, env)
                })
            }
            Formula::Forall(x, b) => (0..self.m.domain_size()).all(|d| {
                env.push((x.clone(), d));
                let res = self.eval(b, w, env);
                env.pop();
                res
            }),
            Formula::Exists(x, b) => (0..self.m.domain_size()).any(|d| {
                env.push((x.clone(), d));
                let res = self.eval(b, w, env);
                env.pop();
                res
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::mtoy;
    use crate::syntax::parse_formula;

    fn eval(world: &str, text: &str) -> bool {
        let m = mtoy();
        let f = parse_formula(text, &m.expanded_signature()).unwrap();
        forces(&PointedModel::new(&m, m.world_index(world).unwrap()).unwrap(), &f).unwrap()
    }

    #[test]
    fn mtoy_examples() {
        assert!(!eval("w", "P(d)"));
        assert!(eval("w", "~~P(d)"));
        assert!(!eval("w", "~P(d)"));
        assert!(eval("v", "P(d) -< _|_"));
        assert!(!eval("w", "P(d) -< _|_"));
        assert!(!eval("w", "P(d) \\/ ~P(d)"));
        assert!(eval("w", "exists x. ~~P(x)"));
        assert!(eval("v", "forall x. P(x)"));
    }

    #[test]
    fn literal_clauses_differ() {
        let m = mtoy();
        let sig = m.expanded_signature();
        // T -> P(d) at w: standard needs P(d) at v and w; literal needs it at w only.
        let f = parse_formula("(P(d) -> P(d))", &sig).unwrap();
        let pm = PointedModel::new(&m, 0).unwrap();
        assert!(forces_with(&pm, &f, ClauseMode::Standard).unwrap());
        assert!(!forces_with(&pm, &f, ClauseMode::Literal).unwrap());
    }

    #[test]
    fn errors_are_reported() {
        let m = mtoy();
        let pm = PointedModel::new(&m, 0).unwrap();
        let free = Formula::atom("P", vec![Term::Var(Var::new("x"))]);
        assert_eq!(forces(&pm, &free), Err(ForcingError::FreeVariable("x".into())));
        assert_eq!(forces(&pm, &Formula::prop("Q")), Err(ForcingError::UndeclaredPredicate("Q".into())));
        let unknown = Formula::atom("P", vec![Term::Const(crate::syntax::Const::new("e"))]);
        assert_eq!(forces(&pm, &unknown), Err(ForcingError::UnknownConstant("e".into())));
    }
}
