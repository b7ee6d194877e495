//! Independent evaluator: translate into a two-sorted classical formula over
//! worlds and elements, then evaluate it by brute force on the finite
//! structure `(W, ≼, D, V)`.

use std::collections::HashMap;

use super::forcing::{check, ClauseMode, ForcingError};
use super::PointedModel;
use crate::syntax::{Formula, Term};

#[derive(Clone, Debug)]
enum ETerm {
    Var(String),
    Elem(String),
}

#[derive(Clone, Debug)]
enum Classical {
    True,
    False,
    Leq(String, String),
    Atom(String, String, Vec<ETerm>),
    Not(Box<Classical>),
    And(Box<Classical>, Box<Classical>),
    Or(Box<Classical>, Box<Classical>),
    ForallWorld(String, Box<Classical>),
    ExistsWorld(String, Box<Classical>),
    ForallElem(String, Box<Classical>),
    ExistsElem(String, Box<Classical>),
}

fn implies(a: Classical, b: Classical) -> Classical {
    Classical::Or(Box::new(Classical::Not(Box::new(a))), Box::new(b))
}

fn and(a: Classical, b: Classical) -> Classical {
    Classical::And(Box::new(a), Box::new(b))
}

struct Translator {
    mode: ClauseMode,
    fresh: usize,
}

impl Translator {
    fn world_var(&mut self) -> String {
        self.fresh += 1;
        format!("u{}", self.fresh)
    }

    /// Standard translation at world variable `w`.
    fn st(&mut self, f: &Formula, w: &str) -> Classical {
        match f {
            Formula::Atom { pred, args } => Classical::Atom(
                pred.to_string(),
                w.to_string(),
                args.iter()
                    .map(|t| match t {
                        Term::Var(x) => ETerm::Var(x.to_string()),
                        Term::Const(c) => ETerm::Elem(c.to_string()),
                    })
                    .collect(),
            ),
            Formula::Bottom => Classical::False,
            Formula::Top => Classical::True,
            Formula::And(l, r) => and(self.st(l, w), self.st(r, w)),
            Formula::Or(l, r) => Classical::Or(Box::new(self.st(l, w)), Box::new(self.st(r, w))),
            Formula::Implies(l, r) => {
                let v = self.world_var();
                let at = if self.mode == ClauseMode::Standard { v.clone() } else { w.to_string() };
                let body = implies(Classical::Leq(w.to_string(), v.clone()), implies(self.st(l, &v), self.st(r, &at)));
                Classical::ForallWorld(v, Box::new(body))
            }
            Formula::CoImplies(l, r) => {
                let v = self.world_var();
                let at = if self.mode == ClauseMode::Standard { v.clone() } else { w.to_string() };
                let body = and(
                    Classical::Leq(v.clone(), w.to_string()),
                    and(self.st(l, &v), Classical::Not(Box::new(self.st(r, &at)))),
                );
                Classical::ExistsWorld(v, Box::new(body))
            }
            Formula::Forall(x, b) => Classical::ForallElem(x.to_string(), Box::new(self.st(b, w))),
            Formula::Exists(x, b) => Classical::ExistsElem(x.to_string(), Box::new(self.st(b, w))),
        }
    }
}

struct Structure<'a> {
    pm: &'a PointedModel<'a>,
}

impl Structure<'_> {
    fn eval(&self, c: &Classical, worlds: &mut HashMap<String, usize>, elems: &mut HashMap<String, usize>) -> bool {
        let m = self.pm.model;
        match c {
            Classical::True => true,
            Classical::False => false,
            Classical::Leq(a, b) => m.leq(worlds[a], worlds[b]),
            Classical::Atom(p, w, args) => {
                let tuple: Vec<usize> = args
                    .iter()
                    .map(|t| match t {
                        ETerm::Var(x) => elems[x],
                        ETerm::Elem(name) => m.element_index(name).expect("checked constant"),
                    })
                    .collect();
                m.extension(p).is_some_and(|ext| ext[worlds[w]].contains(&tuple))
            }
            Classical::Not(a) => !self.eval(a, worlds, elems),
            Classical::And(a, b) => self.eval(a, worlds, elems) && self.eval(b, worlds, elems),
            Classical::Or(a, b) => self.eval(a, worlds, elems) || self.eval(b, worlds, elems),
            Classical::ForallWorld(v, b) | Classical::ExistsWorld(v, b) => {
                let universal = matches!(c, Classical::ForallWorld(..));
                let saved = worlds.get(v).copied();
                let mut result = universal;
                for u in 0..m.world_count() {
                    worlds.insert(v.clone(), u);
                    if self.eval(b, worlds, elems) != universal {
                        result = !universal;
                        break;
                    }
                }
                restore(worlds, v, saved);
                result
            }
            Classical::ForallElem(x, b) | Classical::ExistsElem(x, b) => {
                let universal = matches!(c, Classical::ForallElem(..));
                let saved = elems.get(x).copied();
                let mut result = universal;
                for d in 0..m.domain_size() {
                    elems.insert(x.clone(), d);
                    if self.eval(b, worlds, elems) != universal {
                        result = !universal;
                        break;
                    }
                }
                restore(elems, x, saved);
                result
            }
        }
    }
}

fn restore(env: &mut HashMap<String, usize>, key: &str, saved: Option<usize>) {
    match saved {
        Some(old) => {
            env.insert(key.to_string(), old);
        }
        None => {
            env.remove(key);
        }
    }
}

pub fn classical_oracle_eval(pm: &PointedModel<'_>, f: &Formula) -> Result<bool, ForcingError> {
    classical_oracle_eval_with(pm, f, ClauseMode::Standard)
}

pub fn classical_oracle_eval_with(pm: &PointedModel<'_>, f: &Formula, mode: ClauseMode) -> Result<bool, ForcingError> {
    if pm.world >= pm.model.world_count() {
        return Err(ForcingError::UnknownWorld(pm.world));
    }
    check(pm.model, f, &mut Vec::new())?;
    let translated = Translator { mode, fresh: 0 }.st(f, "u0");
    let mut worlds = HashMap::from([("u0".to_string(), pm.world)]);
    Ok(Structure { pm }.eval(&translated, &mut worlds, &mut HashMap::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::{forces, mtoy};
    use crate::syntax::parse_formula;

    #[test]
    fn agrees_on_mtoy_examples() {
        let m = mtoy();
        let sig = m.expanded_signature();
        for (world, text) in [(0, "P(d)"), (0, "~~P(d)"), (1, "P(d) -< _|_"), (0, "P(d) -< _|_"), (0, "T")] {
            let f = parse_formula(text, &sig).unwrap();
            let pm = PointedModel::new(&m, world).unwrap();
            assert_eq!(classical_oracle_eval(&pm, &f), forces(&pm, &f), "{text} at {world}");
        }
        let pm = PointedModel::new(&m, 0).unwrap();
        assert_eq!(classical_oracle_eval(&pm, &Formula::Top), Ok(true));
    }
}
