use super::check::AtomFacts;
use super::{shared_signature, AsimError, AsimRelation, Shape};
use crate::kripke::FiniteModel;

/// Backward induction over rounds. `A₀` is every equal-length pair satisfying
/// (atom); a pair of `A_r` survives into `A_{r+1}` when its (back) and
/// (forth) demands, with both memberships, and below the length cap its
/// (left) and (right) demands are met inside `A_r`. The result records for
/// every pair of `A₀` the largest `r ≤ rounds` with the pair in `A_r`.
pub fn bounded_game_relation(
    m0: &FiniteModel,
    m1: &FiniteModel,
    rounds: usize,
    max_len: usize,
) -> Result<AsimRelation, AsimError> {
    shared_signature(m0, m1)?;
    let shape = Shape::of(m0, m1);
    let mut rel = AsimRelation::empty(shape, max_len, rounds);
    let facts = AtomFacts::new(m0, m1, max_len);
    for dir in 0..2 {
        for n in 0..=max_len {
            for idx in 0..rel.block_len(dir, n) {
                let (l, r) = rel.decode(dir, n, idx);
                if facts.preserved(&l, &r) {
                    let block = dir * (max_len + 1) + n;
                    rel.set_raw(block, idx, 1);
                }
            }
        }
    }
    let models = [m0, m1];
    let succ: Vec<Vec<Vec<usize>>> = models.iter().map(|m| (0..m.world_count()).map(|w| m.successors(w).collect()).collect()).collect();
    let pred: Vec<Vec<Vec<usize>>> =
        models.iter().map(|m| (0..m.world_count()).map(|w| m.predecessors(w).collect()).collect()).collect();
    let pow = |d: usize, n: usize| d.pow(n as u32);
    let index = |dir: usize, n: usize, w: usize, a: usize, v: usize, b: usize| {
        let (i, j) = (dir, 1 - dir);
        ((w * pow(shape.domain[i], n) + a) * shape.worlds[j] + v) * pow(shape.domain[j], n) + b
    };
    let block = |dir: usize, n: usize| dir * (max_len + 1) + n;

    for round in 1..=rounds {
        // stored value `round` marks membership in A_{round-1}
        let live = round as u8;
        let mut promote = Vec::new();
        let mut failed = false;
        for dir in 0..2 {
            let (i, j) = (dir, 1 - dir);
            let (di, dj) = (shape.domain[i], shape.domain[j]);
            for n in 0..=max_len {
                let (ci, cj) = (pow(di, n), pow(dj, n));
                for idx in 0..rel.block_len(dir, n) {
                    if rel.raw(block(dir, n), idx) != live {
                        continue;
                    }
                    let b = idx % cj;
                    let rest = idx / cj;
                    let v = rest % shape.worlds[j];
                    let rest = rest / shape.worlds[j];
                    let (w, a) = (rest / ci, rest % ci);
                    let both = |w0: usize, v0: usize| {
                        rel.raw(block(dir, n), index(dir, n, w0, a, v0, b)) >= live
                            && rel.raw(block(j, n), index(j, n, v0, b, w0, a)) >= live
                    };
                    let mut ok = succ[j][v].iter().all(|&v0| succ[i][w].iter().any(|&w0| both(w0, v0)))
                        && pred[i][w].iter().all(|&w0| pred[j][v].iter().any(|&v0| both(w0, v0)));
                    if ok && n < max_len {
                        let ext = |x: usize, y: usize| {
                            rel.raw(block(dir, n + 1), index(dir, n + 1, w, a * di + x, v, b * dj + y)) >= live
                        };
                        ok = (0..dj).all(|y| (0..di).any(|x| ext(x, y))) && (0..di).all(|x| (0..dj).any(|y| ext(x, y)));
                    }
                    if ok {
                        promote.push((block(dir, n), idx));
                    } else {
                        failed = true;
                    }
                }
            }
        }
        if !failed {
            // A_round = A_{round-1}: the sequence is stationary from here on
            for (b, idx) in promote {
                rel.set_raw(b, idx, rounds as u8 + 1);
            }
            break;
        }
        for (b, idx) in promote {
            rel.set_raw(b, idx, live + 1);
        }
    }
    Ok(rel)
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, BTreeSet};

    use super::*;
    use crate::asim::{check_bi_asimulation, PointedTuple};
    use crate::kripke::{mtoy, random_model};
    use crate::syntax::{Pred, Signature};

    #[test]
    fn isomorphic_models_keep_the_diagonal() {
        let m = random_model(&Signature::of(&[("P", 1), ("R", 2)], &[]), 3, 2, 4);
        let rel = bounded_game_relation(&m, &m, 3, 2).unwrap();
        for w in 0..m.world_count() {
            for a in 0..m.domain_size() {
                for side in 0..2u8 {
                    let l = PointedTuple::new(side, w, vec![a, a]);
                    let r = PointedTuple::new(1 - side, w, vec![a, a]);
                    assert_eq!(rel.grade(&l, &r), Some(3));
                }
            }
        }
        assert!(check_bi_asimulation(&m, &m, &rel).unwrap().is_ok());
    }

    #[test]
    fn shifted_valuation_breaks_the_root_at_round_zero() {
        let m = mtoy();
        // P(d) already at w
        let shifted = FiniteModel::new(
            vec!["w".into(), "v".into()],
            &[(0, 1)],
            vec!["d".into()],
            Signature::of(&[("P", 1)], &[]),
            BTreeMap::from([(Pred::new("P"), vec![BTreeSet::from([vec![0]]), BTreeSet::from([vec![0]])])]),
        )
        .unwrap();
        let rel = bounded_game_relation(&shifted, &m, 2, 1).unwrap();
        let l = PointedTuple::new(0, 0, vec![0]);
        let r = PointedTuple::new(1, 0, vec![0]);
        assert_eq!(rel.grade(&l, &r), None);
        // the other direction passes (atom) but not the game
        assert_eq!(rel.grade(&r, &l), Some(0));
    }

    #[test]
    fn levels_shrink() {
        let sig = Signature::of(&[("P", 1)], &[]);
        for seed in 0..30 {
            let (m0, m1) = (random_model(&sig, 3, 2, seed), random_model(&sig, 3, 2, seed + 1000));
            let rel = bounded_game_relation(&m0, &m1, 4, 2).unwrap();
            for r in 0..4 {
                assert!(rel.level(r + 1).is_subset(&rel.level(r)));
            }
            let report = check_bi_asimulation(&m0, &m1, &rel).unwrap();
            assert!(report.is_ok(), "seed {seed}: {report}");
        }
    }
}
