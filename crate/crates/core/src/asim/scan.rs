use std::collections::HashMap;

use super::AsimError;
use crate::kripke::{forces, FiniteModel, PointedModel};
use crate::syntax::{is_sentence, Formula, Pred, Signature, Term, Var};

/// Every candidate of rank at most `rank_cap` forced at `pm0` and not at
/// `pm1`, in stream order. Candidates of higher rank are skipped.
pub fn separation_scan<I>(
    pm0: &PointedModel<'_>,
    pm1: &PointedModel<'_>,
    candidates: I,
    rank_cap: usize,
) -> Result<Vec<Formula>, AsimError>
where
    I: IntoIterator<Item = Formula>,
{
    let shared = pm0.model.signature().intersection(pm1.model.signature());
    let mut out = Vec::new();
    for f in candidates {
        if !is_sentence(&f, &shared) {
            return Err(AsimError::NotASentence(f.to_string()));
        }
        if f.rank() > rank_cap {
            continue;
        }
        let sentence_err = |_| AsimError::NotASentence(f.to_string());
        if forces(pm0, &f).map_err(sentence_err)? && !forces(pm1, &f).map_err(sentence_err)? {
            out.push(f);
        }
    }
    Ok(out)
}

/// Outcome of [`scan_enumerated`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScanSummary {
    /// Number of sentences covered; equals the length of the corresponding
    /// enumeration stream.
    pub total: u128,
    /// Number of those sentences that separate the two pointed models.
    pub separators: u128,
    /// The least separator (in enumeration order) for each distinct pair of
    /// truth tables among separators, sorted.
    pub representatives: Vec<Formula>,
}

/// Truth tables of one model: one bit per `(world, assignment of the pool)`.
struct Tables<'m> {
    m: &'m FiniteModel,
    per_world: usize,
    cells: usize,
    /// For each pool variable, the groups of cells that differ only in the
    /// value of that variable.
    groups: Vec<Vec<u128>>,
}

fn digit(alpha: usize, i: usize, d: usize) -> usize {
    alpha / d.pow(i as u32) % d
}

impl<'m> Tables<'m> {
    fn new(m: &'m FiniteModel, k: usize) -> Result<Self, AsimError> {
        let d = m.domain_size();
        let per_world = d.pow(k as u32);
        let cells = m.world_count() * per_world;
        if cells > 128 {
            return Err(AsimError::TooLarge(cells));
        }
        let groups = (0..k)
            .map(|i| {
                let mut by_key: HashMap<(usize, usize), u128> = HashMap::new();
                for w in 0..m.world_count() {
                    for alpha in 0..per_world {
                        let key = alpha - digit(alpha, i, d) * d.pow(i as u32);
                        *by_key.entry((w, key)).or_default() |= 1u128 << (w * per_world + alpha);
                    }
                }
                let mut g: Vec<u128> = by_key.into_values().collect();
                g.sort_unstable();
                g
            })
            .collect();
        Ok(Self { m, per_world, cells, groups })
    }

    fn mask(&self) -> u128 {
        if self.cells == 128 {
            u128::MAX
        } else {
            (1u128 << self.cells) - 1
        }
    }

    fn slice(&self, t: u128, w: usize) -> u128 {
        (t >> (w * self.per_world)) & ((1u128 << self.per_world) - 1)
    }

    fn atom(&self, pred: &Pred, args: &[Term], pool: &[Var]) -> u128 {
        let d = self.m.domain_size();
        let mut t = 0u128;
        for w in 0..self.m.world_count() {
            for alpha in 0..self.per_world {
                let tuple: Vec<usize> = args
                    .iter()
                    .map(|a| match a {
                        Term::Var(v) => digit(alpha, pool.iter().position(|x| x == v).expect("pool variable"), d),
                        Term::Const(c) => self.m.element_index(c.as_str()).expect("shared constant"),
                    })
                    .collect();
                if self.m.holds(pred.as_str(), w, &tuple) {
                    t |= 1u128 << (w * self.per_world + alpha);
                }
            }
        }
        t
    }

    fn implies(&self, l: u128, r: u128) -> u128 {
        let x = (!l | r) & self.mask();
        let mut out = 0u128;
        for w in 0..self.m.world_count() {
            let s = self.m.successors(w).fold((1u128 << self.per_world) - 1, |acc, v| acc & self.slice(x, v));
            out |= s << (w * self.per_world);
        }
        out
    }

    fn co_implies(&self, l: u128, r: u128) -> u128 {
        let y = l & !r & self.mask();
        let mut out = 0u128;
        for w in 0..self.m.world_count() {
            let s = self.m.predecessors(w).fold(0u128, |acc, v| acc | self.slice(y, v));
            out |= s << (w * self.per_world);
        }
        out
    }

    fn forall(&self, i: usize, body: u128) -> u128 {
        self.groups[i].iter().filter(|g| body & **g == **g).fold(0, |acc, g| acc | g)
    }

    fn exists(&self, i: usize, body: u128) -> u128 {
        self.groups[i].iter().filter(|g| body & **g != 0).fold(0, |acc, g| acc | g)
    }
}

#[derive(Clone)]
struct Entry {
    tables: (u128, u128),
    count: u128,
    rep: Formula,
}

struct Scanner<'a> {
    sides: [Tables<'a>; 2],
    preds: Vec<(Pred, usize)>,
    consts: Vec<Term>,
    pool: Vec<Var>,
    memo: HashMap<(usize, u32, usize), std::rc::Rc<Vec<Entry>>>,
}

fn add(acc: &mut HashMap<(u128, u128), Entry>, tables: (u128, u128), count: u128, rep: impl FnOnce() -> Formula) {
    match acc.get_mut(&tables) {
        Some(e) => {
            e.count += count;
            let rep = rep();
            if rep.graded_cmp(&e.rep).is_lt() {
                e.rep = rep;
            }
        }
        None => {
            acc.insert(tables, Entry { tables, count, rep: rep() });
        }
    }
}

impl Scanner<'_> {
    fn level(&mut self, size: usize, scope: u32, rank: usize) -> std::rc::Rc<Vec<Entry>> {
        if let Some(hit) = self.memo.get(&(size, scope, rank)) {
            return hit.clone();
        }
        let mut acc: HashMap<(u128, u128), Entry> = HashMap::new();
        if size == 1 {
            let [s0, s1] = &self.sides;
            add(&mut acc, (0, 0), 1, || Formula::Bottom);
            add(&mut acc, (s0.mask(), s1.mask()), 1, || Formula::Top);
            let terms: Vec<Term> = self
                .pool
                .iter()
                .enumerate()
                .filter(|(i, _)| scope & (1 << i) != 0)
                .map(|(_, v)| Term::Var(v.clone()))
                .chain(self.consts.iter().cloned())
                .collect();
            for (p, n) in &self.preds {
                let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
                for _ in 0..*n {
                    tuples = tuples
                        .into_iter()
                        .flat_map(|t| terms.iter().map(move |x| [t.clone(), vec![x.clone()]].concat()))
                        .collect();
                }
                for args in tuples {
                    let t = (s0.atom(p, &args, &self.pool), s1.atom(p, &args, &self.pool));
                    add(&mut acc, t, 1, || Formula::Atom { pred: p.clone(), args });
                }
            }
        } else {
            for kind in 0..4 {
                if kind >= 2 && rank == 0 {
                    continue;
                }
                let child_rank = if kind < 2 { rank } else { rank - 1 };
                for ls in 1..size.saturating_sub(1) {
                    let left = self.level(ls, scope, child_rank);
                    let right = self.level(size - 1 - ls, scope, child_rank);
                    let [s0, s1] = &self.sides;
                    for l in left.iter() {
                        for r in right.iter() {
                            let ((l0, l1), (r0, r1)) = (l.tables, r.tables);
                            let t = match kind {
                                0 => (l0 & r0, l1 & r1),
                                1 => (l0 | r0, l1 | r1),
                                2 => (s0.implies(l0, r0), s1.implies(l1, r1)),
                                _ => (s0.co_implies(l0, r0), s1.co_implies(l1, r1)),
                            };
                            add(&mut acc, t, l.count * r.count, || {
                                let (a, b) = (l.rep.clone(), r.rep.clone());
                                match kind {
                                    0 => Formula::and(a, b),
                                    1 => Formula::or(a, b),
                                    2 => Formula::implies(a, b),
                                    _ => Formula::co_implies(a, b),
                                }
                            });
                        }
                    }
                }
            }
            if rank > 0 {
                for universal in [true, false] {
                    for i in 0..self.pool.len() {
                        let body = self.level(size - 1, scope | (1 << i), rank - 1);
                        let [s0, s1] = &self.sides;
                        for b in body.iter() {
                            let (b0, b1) = b.tables;
                            let t = if universal {
                                (s0.forall(i, b0), s1.forall(i, b1))
                            } else {
                                (s0.exists(i, b0), s1.exists(i, b1))
                            };
                            let x = self.pool[i].clone();
                            add(&mut acc, t, b.count, || {
                                let body = Box::new(b.rep.clone());
                                if universal {
                                    Formula::Forall(x, body)
                                } else {
                                    Formula::Exists(x, body)
                                }
                            });
                        }
                    }
                }
            }
        }
        let mut entries: Vec<Entry> = acc.into_values().collect();
        entries.sort_by(|a, b| a.rep.graded_cmp(&b.rep));
        let entries = std::rc::Rc::new(entries);
        self.memo.insert((size, scope, rank), entries.clone());
        entries
    }
}

/// Separation over the whole stream `enumerate_sentences(sig, max_nodes,
/// max_vars)` restricted to rank `≤ rank_cap`, evaluated bottom-up on truth
/// tables under the standard clauses. Sentences with equal tables on both
/// models are grouped, so the cost depends on the number of distinct tables
/// rather than on the number of sentences.
pub fn scan_enumerated(
    pm0: &PointedModel<'_>,
    pm1: &PointedModel<'_>,
    sig: &Signature,
    max_nodes: usize,
    max_vars: usize,
    rank_cap: usize,
) -> Result<ScanSummary, AsimError> {
    for m in [pm0.model, pm1.model] {
        if !sig.is_subsignature_of(m.signature()) {
            return Err(AsimError::SignatureMismatch(sig.to_string(), m.signature().to_string()));
        }
    }
    assert!(max_vars < 32, "variable pool is limited to 31 names");
    let mut scanner = Scanner {
        sides: [Tables::new(pm0.model, max_vars)?, Tables::new(pm1.model, max_vars)?],
        preds: sig.preds().map(|(p, n)| (p.clone(), n)).collect(),
        consts: sig.consts().cloned().map(Term::Const).collect(),
        pool: (1..=max_vars).map(|i| Var::from(format!("v{i}"))).collect(),
        memo: HashMap::new(),
    };
    let bit0 = 1u128 << (pm0.world * scanner.sides[0].per_world);
    let bit1 = 1u128 << (pm1.world * scanner.sides[1].per_world);
    let mut summary = ScanSummary::default();
    let rank = rank_cap.min(max_nodes);
    let mut seen = std::collections::HashSet::new();
    for size in 1..=max_nodes {
        for e in scanner.level(size, 0, rank).iter() {
            summary.total += e.count;
            if e.tables.0 & bit0 != 0 && e.tables.1 & bit1 == 0 {
                summary.separators += e.count;
                if seen.insert(e.tables) {
                    summary.representatives.push(e.rep.clone());
                }
            }
        }
    }
    summary.representatives.sort_by(|a, b| a.graded_cmp(b));
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, BTreeSet};

    use super::*;
    use crate::kripke::{mtoy, random_model};
    use crate::syntax::{enumerate_sentences, parse_formula};

    fn one_world_p() -> FiniteModel {
        FiniteModel::new(
            vec!["u".into()],
            &[],
            vec!["d".into()],
            Signature::of(&[("P", 1)], &[]),
            BTreeMap::from([(Pred::new("P"), vec![BTreeSet::from([vec![0]])])]),
        )
        .unwrap()
    }

    #[test]
    fn existential_separates_one_world_from_mtoy_root() {
        let (m, toy) = (one_world_p(), mtoy());
        let pm0 = PointedModel::new(&m, 0).unwrap();
        let pm1 = PointedModel::new(&toy, 0).unwrap();
        let f = parse_formula("exists x. P(x)", m.signature()).unwrap();
        assert_eq!(separation_scan(&pm0, &pm1, vec![f.clone()], 3).unwrap(), vec![f.clone()]);
        assert!(separation_scan(&pm1, &pm0, vec![f], 3).unwrap().is_empty());
        assert!(separation_scan(&pm0, &pm1, Vec::new(), 3).unwrap().is_empty());
    }

    #[test]
    fn candidates_must_be_shared_sentences() {
        let toy = mtoy();
        let pm = PointedModel::new(&toy, 0).unwrap();
        let open = Formula::atom("P", vec![Term::Var(Var::new("x"))]);
        assert!(matches!(separation_scan(&pm, &pm, vec![open], 2), Err(AsimError::NotASentence(_))));
        let with_element = Formula::atom("P", vec![Term::Const(crate::syntax::Const::new("d"))]);
        assert!(matches!(separation_scan(&pm, &pm, vec![with_element], 2), Err(AsimError::NotASentence(_))));
    }

    #[test]
    fn table_scan_matches_direct_scan() {
        let sig = Signature::of(&[("P", 1), ("S", 0)], &[]);
        for seed in 0..12 {
            let (m0, m1) = (random_model(&sig, 3, 2, seed), random_model(&sig, 3, 2, seed + 77));
            let pm0 = PointedModel::new(&m0, 0).unwrap();
            let pm1 = PointedModel::new(&m1, 0).unwrap();
            let stream: Vec<Formula> = enumerate_sentences(&sig, 6, 2).with_max_rank(2).collect();
            let direct = separation_scan(&pm0, &pm1, stream.clone(), 2).unwrap();
            let summary = scan_enumerated(&pm0, &pm1, &sig, 6, 2, 2).unwrap();
            assert_eq!(summary.total, stream.len() as u128);
            assert_eq!(summary.separators, direct.len() as u128, "seed {seed}");
            for rep in &summary.representatives {
                assert!(direct.contains(rep));
            }
            if let Some(first) = direct.first() {
                assert_eq!(summary.representatives.first(), Some(first));
            }
        }
    }
}
