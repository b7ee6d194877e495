//! JSON model files.
//!
//! ```json
//! {
//!   "worlds": ["w", "v"],
//!   "order": [["w", "v"]],
//!   "domain": ["d"],
//!   "signature": { "preds": { "P": 1 }, "consts": [] },
//!   "valuation": [ { "pred": "P", "world": "v", "tuples": [["d"]] } ]
//! }
//! ```
//!
//! `order` lists generator pairs `[lower, upper]`; the order used is their
//! reflexive-transitive closure. A propositional letter is made true at a
//! world with `"tuples": [[]]`. Unknown fields are rejected.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{validate_model, FiniteModel, ModelError, ValidationReport};
use crate::syntax::{Const, Pred, Signature};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignatureSpec {
    #[serde(default)]
    pub preds: BTreeMap<String, usize>,
    #[serde(default)]
    pub consts: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValuationEntry {
    pub pred: String,
    pub world: String,
    pub tuples: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub worlds: Vec<String>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    pub domain: Vec<String>,
    #[serde(default)]
    pub signature: SignatureSpec,
    #[serde(default)]
    pub valuation: Vec<ValuationEntry>,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {source}")]
    Field { field: String, source: ModelError },
    #[error("model is not a Kripke model:\n{0}")]
    Invalid(ValidationReport),
}

fn at(field: impl Into<String>) -> impl FnOnce(ModelError) -> LoadError {
    let field = field.into();
    move |source| LoadError::Field { field, source }
}

impl ModelSpec {
    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Builds the model with the order closed; monotonicity is left to
    /// [`validate_model`].
    pub fn to_model(&self) -> Result<FiniteModel, LoadError> {
        let sig = Signature::new(
            self.signature.preds.iter().map(|(p, n)| (Pred::new(p), *n)),
            self.signature.consts.iter().map(|c| Const::new(c)),
        )
        .map_err(|e| LoadError::Field { field: "signature".into(), source: e.into() })?;
        let world = |name: &str, field: String| {
            self.worlds.iter().position(|w| w == name).ok_or_else(|| at(field)(ModelError::UnknownWorld(name.into())))
        };
        let mut generators = Vec::new();
        for (i, (a, b)) in self.order.iter().enumerate() {
            generators.push((world(a, format!("order[{i}]"))?, world(b, format!("order[{i}]"))?));
        }
        let n = self.worlds.len();
        let mut valuation: BTreeMap<Pred, Vec<BTreeSet<Vec<usize>>>> = BTreeMap::new();
        for (i, entry) in self.valuation.iter().enumerate() {
            let field = format!("valuation[{i}]");
            let arity = sig
                .arity(&entry.pred)
                .ok_or_else(|| at(field.clone())(ModelError::UndeclaredPredicate(entry.pred.clone())))?;
            let w = world(&entry.world, field.clone())?;
            let ext = valuation.entry(Pred::new(&entry.pred)).or_insert_with(|| vec![BTreeSet::new(); n]);
            for tuple in &entry.tuples {
                if tuple.len() != arity {
                    return Err(at(field)(ModelError::TupleArity {
                        pred: entry.pred.clone(),
                        tuple: tuple.clone(),
                        expected: arity,
                        found: tuple.len(),
                    }));
                }
                let mut idx = Vec::with_capacity(arity);
                for d in tuple {
                    let k = self
                        .domain
                        .iter()
                        .position(|e| e == d)
                        .ok_or_else(|| at(field.clone())(ModelError::UnknownElement(d.clone())))?;
                    idx.push(k);
                }
                ext[w].insert(idx);
            }
        }
        FiniteModel::new(self.worlds.clone(), &generators, self.domain.clone(), sig, valuation).map_err(at("model"))
    }

    pub fn from_model(m: &FiniteModel) -> Self {
        let mut valuation = Vec::new();
        for (p, _) in m.signature().preds() {
            let ext = m.extension(p.as_str()).expect("every predicate has an extension");
            for (w, tuples) in ext.iter().enumerate() {
                if !tuples.is_empty() {
                    valuation.push(ValuationEntry {
                        pred: p.to_string(),
                        world: m.world_name(w).to_string(),
                        tuples: tuples.iter().map(|t| t.iter().map(|&d| m.element_name(d).to_string()).collect()).collect(),
                    });
                }
            }
        }
        ModelSpec {
            worlds: m.world_names().to_vec(),
            order: m.order_pairs().into_iter().map(|(a, b)| (m.world_name(a).into(), m.world_name(b).into())).collect(),
            domain: m.element_names().to_vec(),
            signature: SignatureSpec {
                preds: m.signature().preds().map(|(p, n)| (p.to_string(), n)).collect(),
                consts: m.signature().consts().map(|c| c.to_string()).collect(),
            },
            valuation,
        }
    }
}

/// Parses, builds and validates a model file.
pub fn load_model(text: &str) -> Result<FiniteModel, LoadError> {
    let m = ModelSpec::from_json(text)?.to_model()?;
    let report = validate_model(&m);
    if report.is_ok() {
        Ok(m)
    } else {
        Err(LoadError::Invalid(report))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::mtoy;

    const MTOY: &str = r#"{
        "worlds": ["w", "v"],
        "order": [["w", "v"]],
        "domain": ["d"],
        "signature": { "preds": { "P": 1 } },
        "valuation": [ { "pred": "P", "world": "v", "tuples": [["d"]] } ]
    }"#;

    #[test]
    fn loads_mtoy() {
        assert_eq!(load_model(MTOY).unwrap(), mtoy());
        let round = serde_json::to_string(&ModelSpec::from_model(&mtoy())).unwrap();
        assert_eq!(load_model(&round).unwrap(), mtoy());
    }

    #[test]
    fn unknown_field_is_rejected() {
        let text = MTOY.replace("\"domain\"", "\"colour\": 1, \"domain\"");
        let err = load_model(&text).unwrap_err();
        assert!(matches!(err, LoadError::Json(_)));
        assert!(err.to_string().contains("colour"), "{err}");
    }

    #[test]
    fn monotonicity_failure_names_witness() {
        let text = MTOY.replace("\"world\": \"v\"", "\"world\": \"w\"");
        match load_model(&text).unwrap_err() {
            LoadError::Invalid(report) => assert!(report.to_string().contains("(P, w, v, (d))"), "{report}"),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn field_errors_carry_location() {
        let text = MTOY.replace("[[\"d\"]]", "[[\"z\"]]");
        let err = load_model(&text).unwrap_err();
        assert_eq!(err.to_string(), "valuation[0]: unknown domain element `z`");
    }
}
