//! Text form of relations, one pair per line:
//!
//! ```text
//! 0 w [d,e] ~ 1 v [d,d] @3
//! ```
//!
//! Each side is written as `side world [elements]` using the names from the
//! models; `@g` is the grade. Blank lines and lines starting with `#` are
//! ignored.

use thiserror::Error;

use super::{AsimRelation, PointedTuple, Shape};
use crate::kripke::FiniteModel;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DumpError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Relation { line: usize, source: super::AsimError },
    #[error("the relation is empty")]
    Empty,
}

fn side_text(models: [&FiniteModel; 2], t: &PointedTuple) -> String {
    let m = models[t.side as usize];
    let elems: Vec<&str> = t.elems.iter().map(|&e| m.element_name(e)).collect();
    format!("{} {} [{}]", t.side, m.world_name(t.world), elems.join(","))
}

pub fn format_relation(m0: &FiniteModel, m1: &FiniteModel, rel: &AsimRelation) -> String {
    let mut out = String::new();
    for (l, r, g) in rel.iter() {
        out.push_str(&format!("{} ~ {} @{}\n", side_text([m0, m1], &l), side_text([m0, m1], &r), g));
    }
    out
}

fn parse_side(models: [&FiniteModel; 2], text: &str, line: usize) -> Result<PointedTuple, DumpError> {
    let err = |message: String| DumpError::Syntax { line, message };
    let text = text.trim();
    let open = text.find('[').ok_or_else(|| err(format!("missing `[` in `{text}`")))?;
    if !text.ends_with(']') {
        return Err(err(format!("missing `]` in `{text}`")));
    }
    let head: Vec<&str> = text[..open].split_whitespace().collect();
    let [side, world] = head[..] else {
        return Err(err(format!("expected `side world [elements]`, found `{text}`")));
    };
    let side: u8 = match side {
        "0" => 0,
        "1" => 1,
        other => return Err(err(format!("side must be 0 or 1, found `{other}`"))),
    };
    let m = models[side as usize];
    let world = m.world_index(world).ok_or_else(|| err(format!("unknown world `{world}` on side {side}")))?;
    let inner = text[open + 1..text.len() - 1].trim();
    let mut elems = Vec::new();
    if !inner.is_empty() {
        for name in inner.split(',') {
            let name = name.trim();
            elems.push(m.element_index(name).ok_or_else(|| err(format!("unknown element `{name}` on side {side}")))?);
        }
    }
    Ok(PointedTuple { side, world, elems })
}

/// Reads a relation. The length cap is the longest tuple in the text and the
/// depth is the highest grade.
pub fn parse_relation(text: &str, m0: &FiniteModel, m1: &FiniteModel) -> Result<AsimRelation, DumpError> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let err = |message: &str| DumpError::Syntax { line, message: message.to_string() };
        let (body, grade) = raw.rsplit_once('@').ok_or_else(|| err("missing `@grade`"))?;
        let grade: usize = grade.trim().parse().map_err(|_| err("grade must be a natural number"))?;
        let (l, r) = body.split_once('~').ok_or_else(|| err("missing `~`"))?;
        let l = parse_side([m0, m1], l, line)?;
        let r = parse_side([m0, m1], r, line)?;
        pairs.push((line, l, r, grade));
    }
    if pairs.is_empty() {
        return Err(DumpError::Empty);
    }
    let max_len = pairs.iter().map(|(_, l, r, _)| l.len().max(r.len())).max().unwrap_or(0);
    let depth = pairs.iter().map(|p| p.3).max().unwrap_or(0);
    if depth >= u8::MAX as usize {
        return Err(DumpError::Syntax { line: 0, message: "grades are limited to 254".into() });
    }
    let mut rel = AsimRelation::empty(Shape::of(m0, m1), max_len, depth);
    for (line, l, r, g) in pairs {
        rel.insert(&l, &r, g).map_err(|source| DumpError::Relation { line, source })?;
    }
    Ok(rel)
}
