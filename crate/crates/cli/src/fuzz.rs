use biq_core::counterexample::{PropertyLine, PropertyReport};
use biq_core::kripke::{classical_oracle_eval_with, forces_with, random_model, ClauseMode, FiniteModel, ModelSpec, PointedModel};
use biq_core::syntax::{mints_formulas, Formula, FormulaGen, Signature};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Per case: one random model of at most 4 worlds and 3 elements and one
/// random sentence; the direct evaluator is compared with the classical
/// translation at every world, persistence is checked along every order
/// pair, and `φ → ψ` of the interpolation example is evaluated on a second
/// random model.
pub fn campaign(cases: usize, seed: u64, max_size: usize, mode: ClauseMode) -> PropertyReport {
    let sig = Signature::of(&[("P", 1), ("R", 2), ("S", 0)], &["c"]);
    let mints_sig = Signature::of(&[("P", 1), ("Q", 1), ("R", 1), ("S", 0)], &[]);
    let gen = FormulaGen::new(&sig, &["x", "y"]);
    let (phi, psi) = mints_formulas();
    let valid = Formula::implies(phi, psi);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut oracle = PropertyLine::new("fuzz.oracle_agreement");
    let mut persistence = PropertyLine::new("fuzz.persistence");
    let mut mints = PropertyLine::new("fuzz.interpolation_example_valid");
    for _ in 0..cases {
        let m = random_model(&sig, 4, 3, rng.gen());
        let f = gen.sample(&mut rng, max_size);
        let values: Vec<bool> = (0..m.world_count())
            .map(|w| {
                let pm = PointedModel { model: &m, world: w };
                let direct = forces_with(&pm, &f, mode).expect("generated sentences are closed");
                let classical = classical_oracle_eval_with(&pm, &f, mode).expect("generated sentences are closed");
                oracle.record(direct == classical, || format!("{f} at {} of model {}", m.world_name(w), model_text(&m)));
                direct
            })
            .collect();
        let broken = m.order_pairs().into_iter().find(|&(w, v)| values[w] && !values[v]);
        persistence.record(broken.is_none(), || {
            let (w, v) = broken.expect("a failing pair");
            format!("{f} holds at {} but not at {} of model {}", m.world_name(w), m.world_name(v), model_text(&m))
        });

        let m = random_model(&mints_sig, 4, 3, rng.gen());
        let refuted = (0..m.world_count())
            .find(|&w| !forces_with(&PointedModel { model: &m, world: w }, &valid, mode).expect("closed"));
        mints.record(refuted.is_none(), || format!("refuted at {} of model {}", m.world_name(refuted.unwrap_or(0)), model_text(&m)));
    }
    PropertyReport { lines: vec![oracle, persistence, mints] }
}

fn model_text(m: &FiniteModel) -> String {
    serde_json::to_string(&ModelSpec::from_model(m)).expect("model specs serialize")
}
