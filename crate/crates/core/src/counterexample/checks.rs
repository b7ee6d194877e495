use std::fmt;

use rand::Rng;

use super::{
    back_witness, base_worlds, element_witness, f, forth_witness, is_bijection, is_quasi_partition, order_relations,
    related, sigma, Constraint, Direction, QuasiPartition, Sampler, WitnessCase,
};
use crate::periodic::UpSet;

/// `PROPERTY name samples=N failures=K [first-counterexample]`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyLine {
    pub name: String,
    pub samples: usize,
    pub failures: usize,
    pub first: Option<String>,
}

impl PropertyLine {
    pub fn new(name: &str) -> Self {
        PropertyLine { name: name.to_string(), samples: 0, failures: 0, first: None }
    }

    pub fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.samples += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(detail());
            }
        }
    }
}

impl fmt::Display for PropertyLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PROPERTY {} samples={} failures={}", self.name, self.samples, self.failures)?;
        if let Some(c) = &self.first {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropertyReport {
    pub lines: Vec<PropertyLine>,
}

impl PropertyReport {
    pub fn is_ok(&self) -> bool {
        self.lines.iter().all(|l| l.failures == 0)
    }

    pub fn line(&self, name: &str) -> Option<&PropertyLine> {
        self.lines.iter().find(|l| l.name == name)
    }

    pub fn merge(mut self, other: PropertyReport) -> PropertyReport {
        self.lines.extend(other.lines);
        self
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

fn v2() -> UpSet {
    UpSet::residue_class(1, 3)
}

// walks start inside their constraint, so sampling cannot fail
fn world(s: &mut Sampler, c: Constraint) -> QuasiPartition {
    s.world(&c).expect("the walk starts inside its constraint")
}

fn any_or_base(s: &mut Sampler) -> QuasiPartition {
    let (v, w) = base_worlds();
    match s.rng().gen_range(0..8) {
        0 => v,
        1 => w,
        _ => world(s, Constraint::Any),
    }
}

fn show_tuple(p: &QuasiPartition, a: &[u64]) -> String {
    format!("{p}{a:?}")
}

/// The order, valuation, `σ` and `𝔸` facts the main construction leans on.
pub fn check_structure_lemmas(samples: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::new(seed);
    let (v, w) = base_worlds();
    let mut base = PropertyLine::new("structure.base_worlds");
    for q in [&v, &w] {
        base.record(is_quasi_partition(q.a(), q.b(), q.c()), || q.to_string());
    }
    let mut refl = PropertyLine::new("structure.prec1_reflexive");
    let mut trans = PropertyLine::new("structure.prec1_transitive");
    let mut implies = PropertyLine::new("structure.prec1_implies_leq");
    let mut mono = PropertyLine::new("structure.valuation_monotone");
    let mut part1 = PropertyLine::new("structure.prec1_above_v");
    let mut part2 = PropertyLine::new("structure.prec1_is_leq_above_v");
    let mut part3 = PropertyLine::new("structure.antisymmetry");
    let mut sig_mono = PropertyLine::new("structure.sigma_monotone");
    let mut pointwise = PropertyLine::new("structure.sigma_pointwise");
    let mut contra = PropertyLine::new("structure.relation_contraposed");
    let mut mutual = PropertyLine::new("structure.relation_mutual");
    for _ in 0..samples {
        let p = any_or_base(&mut s);
        let o = order_relations(&p, &p);
        refl.record(o.leq && o.prec1 && !o.strict, || p.to_string());

        let q = world(&mut s, Constraint::AbovePrec1(p.clone()));
        let r = world(&mut s, Constraint::AbovePrec1(q.clone()));
        let chain = order_relations(&p, &q).prec1 && order_relations(&q, &r).prec1;
        trans.record(!chain || order_relations(&p, &r).prec1, || format!("{p} {q} {r}"));

        let q = if s.rng().gen_bool(0.5) { world(&mut s, Constraint::AboveLeq(p.clone())) } else { world(&mut s, Constraint::Any) };
        let o = order_relations(&p, &q);
        implies.record(!o.prec1 || o.leq, || format!("{p} {q}"));
        let monotone = p.q_extension().is_subset(&q.q_extension()) && p.p_extension().is_subset(&q.p_extension());
        mono.record(!o.leq || monotone, || format!("{p} {q}"));
        let (sp, bp) = sigma(&p);
        let (sq, bq) = sigma(&q);
        sig_mono.record(!o.leq || (sp.is_subset(&sq) && bp <= bq), || format!("{p} {q}"));

        let q = if s.rng().gen_bool(0.5) { world(&mut s, Constraint::AboveLeq(v.clone())) } else { world(&mut s, Constraint::Any) };
        let o = order_relations(&v, &q);
        part1.record(o.prec1 == (o.leq && q.b().intersect(&v2()).is_infinite()), || q.to_string());

        let p1 = world(&mut s, Constraint::AbovePrec1(v.clone()));
        let mut q1 = world(&mut s, Constraint::AboveLeq(p1.clone()));
        if s.rng().gen_bool(0.5) || !order_relations(&v, &q1).prec1 {
            q1 = world(&mut s, Constraint::AbovePrec1(v.clone()));
        }
        let o = order_relations(&p1, &q1);
        part2.record(o.prec1 == o.leq, || format!("{p1} {q1}"));

        // B is pinned down by A and C
        let rebuilt = QuasiPartition::new(p.a().clone(), p.a().union(p.c()).complement(), p.c().clone());
        let q = world(&mut s, Constraint::AboveLeq(p.clone()));
        let anti = |line: &mut PropertyLine, x: &QuasiPartition, y: &QuasiPartition| {
            let mutual_leq = order_relations(x, y).leq && order_relations(y, x).leq;
            line.record(!mutual_leq || x == y, || format!("{x} {y}"));
        };
        match rebuilt {
            Ok(b) => anti(&mut part3, &p, &b),
            Err(e) => part3.record(false, || e.to_string()),
        }
        anti(&mut part3, &p, &q);

        let (r, _) = sigma(&p);
        let agrees = (1..=3000).all(|n| r.contains(n) == p.a().contains(f(n)));
        pointwise.record(agrees, || p.to_string());

        let q = any_or_base(&mut s);
        let len = s.rng().gen_range(0..=4);
        let (a, b) = s.related_tuples(&p, &q, len);
        let ok = a.iter().zip(&b).all(|(&x, &y)| !q.c().contains(y) || p.c().contains(x));
        contra.record(ok, || format!("{} {}", show_tuple(&p, &a), show_tuple(&q, &b)));

        let (a, b) = if s.rng().gen_bool(0.5) {
            (a, b)
        } else {
            let mut t = || (0..len).map(|_| s.rng().gen_range(1..=12)).collect::<Vec<u64>>();
            (t(), t())
        };
        let both = related(&p, &a, &q, &b).unwrap_or(false) && related(&q, &b, &p, &a).unwrap_or(false);
        let characterized = is_bijection(&a, &b)
            && a.iter().zip(&b).all(|(&x, &y)| p.a().contains(x) == q.a().contains(y) && p.c().contains(x) == q.c().contains(y));
        mutual.record(both == characterized, || format!("{} {}", show_tuple(&p, &a), show_tuple(&q, &b)));
    }
    PropertyReport { lines: vec![base, refl, trans, implies, mono, part1, part2, part3, sig_mono, pointwise, contra, mutual] }
}

fn successor(s: &mut Sampler, q: &QuasiPartition) -> QuasiPartition {
    if s.rng().gen_bool(0.5) {
        world(s, Constraint::AboveLeq(q.clone()))
    } else {
        world(s, Constraint::AbovePrec1(q.clone()))
    }
}

/// Back and forth witnesses in both cases, and the element moves.
pub fn check_witnesses(samples: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::new(seed);
    let mut lines = Vec::new();
    for (name, infinite) in [("witness.back.infinite", true), ("witness.back.empty", false)] {
        let mut line = PropertyLine::new(name);
        let case = if infinite { WitnessCase::Infinite } else { WitnessCase::Empty };
        for _ in 0..samples {
            let p = s.world_with_middle(infinite).expect("middle reshaping keeps a quasi-partition");
            let q = any_or_base(&mut s);
            let len = s.rng().gen_range(0..=3);
            let (a, b) = s.related_tuples(&p, &q, len);
            let succ = successor(&mut s, &q);
            match back_witness(&p, &a, &q, &b, &succ) {
                Ok(r) => line.record(r.passed() && r.case == case, || {
                    format!("{} {} succ={succ} -> {r}", show_tuple(&p, &a), show_tuple(&q, &b))
                }),
                Err(e) => line.record(false, || e.to_string()),
            }
        }
        lines.push(line);
    }
    for (name, infinite) in [("witness.forth.infinite", true), ("witness.forth.empty", false)] {
        let mut line = PropertyLine::new(name);
        let case = if infinite { WitnessCase::Infinite } else { WitnessCase::Empty };
        for _ in 0..samples {
            let q = s.world_with_middle(infinite).expect("middle reshaping keeps a quasi-partition");
            let p = any_or_base(&mut s);
            let len = s.rng().gen_range(0..=3);
            let (a, b) = s.related_tuples(&p, &q, len);
            let pred = world(&mut s, Constraint::BelowLeq(p.clone()));
            match forth_witness(&p, &a, &q, &b, &pred) {
                Ok(r) => line.record(r.passed() && r.case == case, || {
                    format!("{} {} pred={pred} -> {r}", show_tuple(&p, &a), show_tuple(&q, &b))
                }),
                Err(e) => line.record(false, || e.to_string()),
            }
        }
        lines.push(line);
    }
    for (name, dir) in [("witness.left", Direction::Left), ("witness.right", Direction::Right)] {
        let mut line = PropertyLine::new(name);
        for _ in 0..samples {
            let p = any_or_base(&mut s);
            let q = any_or_base(&mut s);
            let len = s.rng().gen_range(0..=3);
            let (a, b) = s.related_tuples(&p, &q, len);
            let own = if dir == Direction::Left { &b } else { &a };
            let new = if !own.is_empty() && s.rng().gen_bool(0.3) {
                own[s.rng().gen_range(0..own.len())]
            } else {
                s.rng().gen_range(1..=60)
            };
            match element_witness(dir, &p, &a, &q, &b, new) {
                Ok((partner, ok)) => line.record(ok, || {
                    format!("{} {} new={new} partner={partner}", show_tuple(&p, &a), show_tuple(&q, &b))
                }),
                Err(e) => line.record(false, || e.to_string()),
            }
        }
        lines.push(line);
    }
    let mut closure = PropertyLine::new("witness.base_pair_closure");
    let (v, w) = base_worlds();
    for _ in 0..samples {
        let (mut a, mut b) = (Vec::new(), Vec::new());
        let mut ok = true;
        for _ in 0..s.rng().gen_range(1..=4) {
            let new = s.rng().gen_range(1..=30);
            let dir = if s.rng().gen_bool(0.5) { Direction::Left } else { Direction::Right };
            match element_witness(dir, &v, &a, &w, &b, new) {
                Ok((partner, related)) => {
                    ok &= related;
                    let (x, y) = if dir == Direction::Left { (partner, new) } else { (new, partner) };
                    a.push(x);
                    b.push(y);
                }
                Err(_) => ok = false,
            }
            if !ok {
                break;
            }
        }
        closure.record(ok, || format!("{a:?} {b:?}"));
    }
    lines.push(closure);
    PropertyReport { lines }
}

/// The witnesses behind `v ⊨ ¬∀x R(x) ∧ ∀x∃y (P(y) ∧ (Q(y) → R(x)))`.
pub fn check_phi_at_v(samples: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::new(seed);
    let (v, _) = base_worlds();
    let mut at_v = PropertyLine::new("phi.sigma_empty_at_v");
    at_v.record(sigma(&v).0.is_empty(), || sigma(&v).0.to_string());
    let mut not_all = PropertyLine::new("phi.not_forall_r");
    let mut exists = PropertyLine::new("phi.forall_exists");
    for _ in 0..samples {
        let q = world(&mut s, Constraint::AbovePrec1(v.clone()));
        let middle = q.b().intersect(&v2());
        let ok = order_relations(&v, &q).prec1 && middle.is_infinite() && {
            let n = s.element(&middle).expect("infinite");
            let m = n.div_ceil(3);
            (n + 2).is_multiple_of(3) && f(m) == n && !sigma(&q).0.contains(m)
        };
        not_all.record(ok, || q.to_string());

        let q = world(&mut s, Constraint::AbovePrec1(v.clone()));
        let hits = q.a().intersect(&v2());
        let n = if !hits.is_empty() && s.rng().gen_bool(0.5) {
            s.element(&hits).expect("nonempty").div_ceil(3)
        } else {
            s.rng().gen_range(1..=1000)
        };
        let ok = v.p_extension().contains(f(n)) && (!q.a().contains(f(n)) || sigma(&q).0.contains(n));
        exists.record(ok, || format!("n={n} {q}"));
    }
    PropertyReport { lines: vec![at_v, not_all, exists] }
}

/// The witnesses behind `w ⊨ ∀x (P(x) → Q(x) ∨ S)` while `w ⊭ S`.
pub fn check_psi_fails_at_w(samples: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::new(seed);
    let (_, w) = base_worlds();
    let mut bit = PropertyLine::new("psi.s_false_at_w");
    bit.record(sigma(&w).1 == 0, || "S holds at w".into());
    let mut cases = PropertyLine::new("psi.p_implies_q_or_s");
    for _ in 0..samples {
        let q = if s.rng().gen_bool(0.3) { w.clone() } else { world(&mut s, Constraint::AboveLeq(w.clone())) };
        let n = s.element(&q.p_extension()).expect("A is infinite");
        let o = order_relations(&w, &q);
        let ok = o.leq && ((q == w && w.q_extension().contains(n)) || (o.strict && sigma(&q).1 == 1));
        cases.record(ok, || format!("n={n} {q}"));
    }
    PropertyReport { lines: vec![bit, cases] }
}

/// Every check above, in a fixed order.
pub fn run_suite(samples: usize, seed: u64) -> PropertyReport {
    check_structure_lemmas(samples, seed)
        .merge(check_witnesses(samples, seed))
        .merge(check_phi_at_v(samples, seed))
        .merge(check_psi_fails_at_w(samples, seed))
}
