use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FiniteModel;
use crate::syntax::Signature;

const EDGE_PROBABILITY: f64 = 0.3;
const ATOM_PROBABILITY: f64 = 0.3;

fn all_tuples(size: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut acc = vec![Vec::new()];
    for _ in 0..arity {
        acc = acc.into_iter().flat_map(|t| (0..size).map(move |d| [t.clone(), vec![d]].concat())).collect();
    }
    acc
}

/// A seed-deterministic model over `sig` with between 1 and `max_worlds`
/// worlds `w0, w1, …`. The domain holds the constants of `sig` followed by
/// fresh elements `e0, e1, …`, at least one element and at most
/// `max(max_domain, |consts|)`. The order closes random generator edges and
/// the valuation closes random atoms upward, so the result is always a model.
pub fn random_model(sig: &Signature, max_worlds: usize, max_domain: usize, seed: u64) -> FiniteModel {
    assert!(max_worlds >= 1 && max_domain >= 1, "bounds must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_worlds = rng.gen_range(1..=max_worlds);
    let consts: Vec<String> = sig.consts().map(|c| c.to_string()).collect();
    let low = consts.len().max(1);
    let n_elems = rng.gen_range(low..=max_domain.max(low));
    let mut domain = consts;
    let mut fresh = 0;
    while domain.len() < n_elems {
        let name = format!("e{fresh}");
        fresh += 1;
        if !domain.contains(&name) && sig.arity(&name).is_none() {
            domain.push(name);
        }
    }
    let worlds: Vec<String> = (0..n_worlds).map(|i| format!("w{i}")).collect();
    let mut generators = Vec::new();
    for a in 0..n_worlds {
        for b in 0..n_worlds {
            if a != b && rng.gen_bool(EDGE_PROBABILITY) {
                generators.push((a, b));
            }
        }
    }
    let skeleton = FiniteModel::new(worlds.clone(), &generators, domain.clone(), sig.clone(), BTreeMap::new())
        .expect("generated names are distinct");
    let mut valuation = BTreeMap::new();
    for (p, arity) in sig.preds() {
        let mut ext = vec![BTreeSet::new(); n_worlds];
        for tuple in all_tuples(n_elems, arity) {
            for w in 0..n_worlds {
                if rng.gen_bool(ATOM_PROBABILITY) {
                    for v in skeleton.successors(w) {
                        ext[v].insert(tuple.clone());
                    }
                }
            }
        }
        valuation.insert(p.clone(), ext);
    }
    FiniteModel::new(worlds, &generators, domain, sig.clone(), valuation).expect("generated model is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::validate_model;

    #[test]
    fn deterministic_and_valid() {
        let sig = Signature::of(&[("P", 1), ("R", 2), ("S", 0)], &["c"]);
        for seed in 0..300 {
            let m = random_model(&sig, 4, 3, seed);
            assert_eq!(m, random_model(&sig, 4, 3, seed));
            assert!(validate_model(&m).is_ok(), "seed {seed}");
            assert!(m.element_index("c").is_some());
        }
    }

    #[test]
    fn one_world_bound() {
        let m = random_model(&Signature::of(&[("P", 1)], &[]), 1, 2, 9);
        assert_eq!(m.world_count(), 1);
        assert!(m.leq(0, 0));
    }
}
