use std::collections::BTreeMap;
use std::fmt;

use super::{AsimError, AsimRelation, PointedTuple};
use crate::kripke::{forces, FiniteModel, PointedModel};
use crate::syntax::{free_vars, substitute, Formula, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreservationViolation {
    pub formula: Formula,
    pub left: PointedTuple,
    pub right: PointedTuple,
    pub grade: usize,
}

impl fmt::Display for PreservationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} forced at {} but not at {} (grade {})", self.formula, self.left, self.right, self.grade)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PreservationReport {
    /// Instances `(pair, formula)` evaluated.
    pub checked: usize,
    /// Formulas too deep in quantifiers for the relation's length cap.
    pub skipped: usize,
    pub violations: Vec<PreservationViolation>,
}

impl PreservationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn instantiate(m: &FiniteModel, f: &Formula, vars: &[Var], elems: &[usize]) -> Formula {
    let binding: BTreeMap<Var, _> = vars.iter().cloned().zip(elems.iter().map(|&e| m.element_const(e))).collect();
    substitute(f, &binding)
}

/// For every pair `(w, ā) → (v, b̄)` of grade at least `rank(φ)` whose length
/// is `|FV(φ)|`, with the free variables taken in sorted order, checks
/// `w ⊨ φ[ā/x̄] ⇒ v ⊨ φ[b̄/x̄]`. A formula is only tested when
/// `|FV(φ)| + quantifier depth ≤ max_len`, since deeper formulas exceed what
/// the relation certifies.
pub fn preservation_test(
    m0: &FiniteModel,
    m1: &FiniteModel,
    rel: &AsimRelation,
    sample: &[Formula],
    rank_bound: usize,
) -> Result<PreservationReport, AsimError> {
    super::shared_signature(m0, m1)?;
    if rank_bound > rel.depth() {
        return Err(AsimError::RankExceedsDepth(rank_bound, rel.depth()));
    }
    if let Some(f) = sample.iter().find(|f| f.rank() > rank_bound) {
        return Err(AsimError::FormulaRank { formula: f.to_string(), rank: f.rank(), bound: rank_bound });
    }
    let models = [m0, m1];
    let mut report = PreservationReport::default();
    let pairs: Vec<(PointedTuple, PointedTuple, usize)> = rel.iter().collect();
    for f in sample {
        let vars: Vec<Var> = free_vars(f).into_iter().collect();
        if vars.len() + f.quantifier_depth() > rel.max_len() {
            report.skipped += 1;
            continue;
        }
        for (l, r, g) in pairs.iter().filter(|(l, _, g)| l.len() == vars.len() && *g >= f.rank()) {
            let (mi, mj) = (models[l.side as usize], models[r.side as usize]);
            let lf = instantiate(mi, f, &vars, &l.elems);
            let rf = instantiate(mj, f, &vars, &r.elems);
            let left_true = forces(&PointedModel { model: mi, world: l.world }, &lf).map_err(|_| AsimError::NotASentence(lf.to_string()))?;
            report.checked += 1;
            if left_true {
                let right_true =
                    forces(&PointedModel { model: mj, world: r.world }, &rf).map_err(|_| AsimError::NotASentence(rf.to_string()))?;
                if !right_true {
                    report.violations.push(PreservationViolation {
                        formula: f.clone(),
                        left: l.clone(),
                        right: r.clone(),
                        grade: *g,
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asim::{bounded_game_relation, Shape};
    use crate::kripke::{mtoy, random_model};
    use crate::syntax::{parse_formula, Signature};

    #[test]
    fn atoms_hold_on_any_game_relation() {
        let sig = Signature::of(&[("P", 1), ("R", 2)], &[]);
        let (m0, m1) = (random_model(&sig, 3, 2, 1), random_model(&sig, 3, 2, 2));
        let rel = bounded_game_relation(&m0, &m1, 2, 2).unwrap();
        let atoms: Vec<Formula> =
            ["P(x)", "R(x,y)", "R(y,y)"].iter().map(|t| parse_formula(t, &sig).unwrap()).collect();
        let report = preservation_test(&m0, &m1, &rel, &atoms, 0).unwrap();
        assert!(report.is_ok());
        assert!(report.checked > 0);
    }

    #[test]
    fn corrupt_relation_is_caught() {
        // claim (w) ~ (v) in Mtoy at grade 1: P(d) -> _|_ separates them
        let m = mtoy();
        let mut rel = AsimRelation::empty(Shape::of(&m, &m), 0, 1);
        rel.insert(&PointedTuple::root(1, 0), &PointedTuple::root(0, 1), 1).unwrap();
        let f = parse_formula("exists x. P(x)", &m.signature().clone()).unwrap();
        let report = preservation_test(&m, &m, &rel, std::slice::from_ref(&f), 1).unwrap();
        assert!(report.is_ok(), "skipped by the length cap");
        assert_eq!(report.skipped, 1);
        let g = parse_formula("(exists x. P(x)) -> _|_", m.signature()).unwrap();
        let mut rel = AsimRelation::empty(Shape::of(&m, &m), 1, 2);
        rel.insert(&PointedTuple::root(0, 0), &PointedTuple::root(1, 1), 2).unwrap();
        let report = preservation_test(&m, &m, &rel, std::slice::from_ref(&g), 2).unwrap();
        assert_eq!(report.violations.len(), 0, "w refutes the negation, nothing to transfer");
        let mut rel = AsimRelation::empty(Shape::of(&m, &m), 1, 2);
        rel.insert(&PointedTuple::root(0, 1), &PointedTuple::root(1, 0), 2).unwrap();
        let report = preservation_test(&m, &m, &rel, &[f], 2).unwrap();
        assert_eq!(report.violations.len(), 1);
    }

    #[test]
    fn rank_bound_is_enforced() {
        let m = mtoy();
        let rel = bounded_game_relation(&m, &m, 1, 1).unwrap();
        assert_eq!(preservation_test(&m, &m, &rel, &[], 2), Err(AsimError::RankExceedsDepth(2, 1)));
        let f = parse_formula("~~P(x)", m.signature()).unwrap();
        assert!(matches!(preservation_test(&m, &m, &rel, &[f], 1), Err(AsimError::FormulaRank { .. })));
    }
}
