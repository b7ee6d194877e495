//! Bi-asimulations between finite models: a graded relation type, an exact
//! checker, the bounded game, preservation testing and separation scans.
//!
//! A relation relates pointed tuples `(w, ā)` of one model with pointed tuples
//! `(v, b̄)` of equal length in the other, in either direction. Each pair
//! carries a grade. A pair of grade `0` only promises (atom); a pair of grade
//! `g > 0` also promises that its (back), (forth), (left) and (right) demands
//! are met by pairs of grade at least `g − 1`. A relation whose pairs all have
//! the same positive grade is exactly a bi-asimulation up to the length cap.

mod check;
mod dump;
mod game;
mod preserve;
mod scan;

use std::fmt;

use thiserror::Error;

use crate::kripke::FiniteModel;
use crate::syntax::Signature;

pub use check::{check_bi_asimulation, AsimViolation, CheckReport, ViolationKind};
pub use dump::{format_relation, parse_relation, DumpError};
pub use game::bounded_game_relation;
pub use preserve::{preservation_test, PreservationReport, PreservationViolation};
pub use scan::{scan_enumerated, separation_scan, ScanSummary};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AsimError {
    #[error("models have different signatures: {0} vs {1}")]
    SignatureMismatch(String, String),
    #[error("a pair must relate tuples of the two different models")]
    SameSide,
    #[error("related tuples have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("tuple length {0} exceeds the cap {1}")]
    TooLong(usize, usize),
    #[error("world {world} does not exist on side {side}")]
    BadWorld { side: u8, world: usize },
    #[error("element {elem} does not exist on side {side}")]
    BadElement { side: u8, elem: usize },
    #[error("grade {0} exceeds the relation depth {1}")]
    GradeTooHigh(usize, usize),
    #[error("rank bound {0} exceeds the certified depth {1}")]
    RankExceedsDepth(usize, usize),
    #[error("formula `{formula}` has rank {rank} above the bound {bound}")]
    FormulaRank { formula: String, rank: usize, bound: usize },
    #[error("candidate `{0}` is not a sentence over the shared signature")]
    NotASentence(String),
    #[error("models are too large for table evaluation ({0} cells)")]
    TooLarge(usize),
}

/// A world of one side together with a tuple of that side's elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointedTuple {
    pub side: u8,
    pub world: usize,
    pub elems: Vec<usize>,
}

impl PointedTuple {
    pub fn new(side: u8, world: usize, elems: Vec<usize>) -> Self {
        Self { side, world, elems }
    }

    pub fn root(side: u8, world: usize) -> Self {
        Self::new(side, world, Vec::new())
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub(crate) fn with_world(&self, world: usize) -> Self {
        Self { world, ..self.clone() }
    }

    pub(crate) fn extended(&self, e: usize) -> Self {
        let mut elems = self.elems.clone();
        elems.push(e);
        Self { elems, ..self.clone() }
    }
}

impl fmt::Display for PointedTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let elems: Vec<String> = self.elems.iter().map(|e| e.to_string()).collect();
        write!(f, "{} {} [{}]", self.side, self.world, elems.join(","))
    }
}

/// Sizes of the two models.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub worlds: [usize; 2],
    pub domain: [usize; 2],
}

impl Shape {
    pub fn of(m0: &FiniteModel, m1: &FiniteModel) -> Self {
        Self { worlds: [m0.world_count(), m1.world_count()], domain: [m0.domain_size(), m1.domain_size()] }
    }
}

/// Dense graded relation. Block `(dir, n)` holds the pairs of length `n`
/// from side `dir` to side `1 − dir`; a cell stores `grade + 1`, or `0` when
/// the pair is absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsimRelation {
    shape: Shape,
    max_len: usize,
    depth: usize,
    blocks: Vec<Vec<u8>>,
}

pub(crate) fn tuple_index(elems: &[usize], base: usize) -> usize {
    elems.iter().fold(0, |acc, &e| acc * base + e)
}

pub(crate) fn tuple_at(mut idx: usize, base: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = idx % base;
        idx /= base;
    }
    out
}

impl AsimRelation {
    pub fn empty(shape: Shape, max_len: usize, depth: usize) -> Self {
        assert!(depth < u8::MAX as usize, "depth is limited to 254");
        let mut blocks = Vec::new();
        for dir in 0..2 {
            let (i, j) = (dir, 1 - dir);
            for n in 0..=max_len {
                let cells = shape.worlds[i]
                    * shape.domain[i].pow(n as u32)
                    * shape.worlds[j]
                    * shape.domain[j].pow(n as u32);
                blocks.push(vec![0u8; cells]);
            }
        }
        Self { shape, max_len, depth, blocks }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Highest grade any pair may carry.
    pub fn depth(&self) -> usize {
        self.depth
    }

    fn block_id(&self, dir: usize, n: usize) -> usize {
        dir * (self.max_len + 1) + n
    }

    fn validate(&self, left: &PointedTuple, right: &PointedTuple) -> Result<(), AsimError> {
        if left.side > 1 || right.side > 1 || left.side == right.side {
            return Err(AsimError::SameSide);
        }
        if left.len() != right.len() {
            return Err(AsimError::LengthMismatch(left.len(), right.len()));
        }
        if left.len() > self.max_len {
            return Err(AsimError::TooLong(left.len(), self.max_len));
        }
        for t in [left, right] {
            let s = t.side as usize;
            if t.world >= self.shape.worlds[s] {
                return Err(AsimError::BadWorld { side: t.side, world: t.world });
            }
            if let Some(&e) = t.elems.iter().find(|&&e| e >= self.shape.domain[s]) {
                return Err(AsimError::BadElement { side: t.side, elem: e });
            }
        }
        Ok(())
    }

    /// Cell address of a validated pair.
    pub(crate) fn cell(&self, left: &PointedTuple, right: &PointedTuple) -> (usize, usize) {
        let (i, j) = (left.side as usize, right.side as usize);
        let n = left.len();
        let (di, dj) = (self.shape.domain[i], self.shape.domain[j]);
        let inner = dj.pow(n as u32);
        let idx = ((left.world * di.pow(n as u32) + tuple_index(&left.elems, di)) * self.shape.worlds[j] + right.world)
            * inner
            + tuple_index(&right.elems, dj);
        (self.block_id(i, n), idx)
    }

    pub(crate) fn raw(&self, block: usize, idx: usize) -> u8 {
        self.blocks[block][idx]
    }

    pub(crate) fn set_raw(&mut self, block: usize, idx: usize, v: u8) {
        self.blocks[block][idx] = v;
    }

    pub(crate) fn block_len(&self, dir: usize, n: usize) -> usize {
        self.blocks[self.block_id(dir, n)].len()
    }

    /// Decodes a cell of block `(dir, n)` into its pair.
    pub(crate) fn decode(&self, dir: usize, n: usize, idx: usize) -> (PointedTuple, PointedTuple) {
        let (i, j) = (dir, 1 - dir);
        let (di, dj) = (self.shape.domain[i], self.shape.domain[j]);
        let inner = dj.pow(n as u32);
        let right_tuple = idx % inner;
        let rest = idx / inner;
        let v = rest % self.shape.worlds[j];
        let rest = rest / self.shape.worlds[j];
        let outer = di.pow(n as u32);
        let left_tuple = rest % outer;
        let w = rest / outer;
        (
            PointedTuple::new(i as u8, w, tuple_at(left_tuple, di, n)),
            PointedTuple::new(j as u8, v, tuple_at(right_tuple, dj, n)),
        )
    }

    pub fn insert(&mut self, left: &PointedTuple, right: &PointedTuple, grade: usize) -> Result<(), AsimError> {
        self.validate(left, right)?;
        if grade > self.depth {
            return Err(AsimError::GradeTooHigh(grade, self.depth));
        }
        let (b, i) = self.cell(left, right);
        self.blocks[b][i] = grade as u8 + 1;
        Ok(())
    }

    pub fn remove(&mut self, left: &PointedTuple, right: &PointedTuple) -> Result<bool, AsimError> {
        self.validate(left, right)?;
        let (b, i) = self.cell(left, right);
        let had = self.blocks[b][i] != 0;
        self.blocks[b][i] = 0;
        Ok(had)
    }

    /// The grade of a pair, or `None` when it is absent or ill-typed.
    pub fn grade(&self, left: &PointedTuple, right: &PointedTuple) -> Option<usize> {
        self.validate(left, right).ok()?;
        let (b, i) = self.cell(left, right);
        self.blocks[b][i].checked_sub(1).map(usize::from)
    }

    /// Grade of the pair of empty tuples `(w) → (v)` from `side`.
    pub fn root_grade(&self, side: u8, w: usize, v: usize) -> Option<usize> {
        self.grade(&PointedTuple::root(side, w), &PointedTuple::root(1 - side, v))
    }

    pub fn contains(&self, left: &PointedTuple, right: &PointedTuple) -> bool {
        self.grade(left, right).is_some()
    }

    /// Membership at grade at least `g`.
    pub(crate) fn at_least(&self, left: &PointedTuple, right: &PointedTuple, g: usize) -> bool {
        self.grade(left, right).is_some_and(|h| h >= g)
    }

    /// All pairs with their grades, block by block.
    pub fn iter(&self) -> impl Iterator<Item = (PointedTuple, PointedTuple, usize)> + '_ {
        (0..2).flat_map(move |dir| {
            (0..=self.max_len).flat_map(move |n| {
                let block = &self.blocks[self.block_id(dir, n)];
                block.iter().enumerate().filter(|(_, g)| **g != 0).map(move |(idx, g)| {
                    let (l, r) = self.decode(dir, n, idx);
                    (l, r, (*g - 1) as usize)
                })
            })
        })
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.iter().filter(|g| **g != 0).count()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `A_g`: the pairs of grade at least `g`, as a relation of uniform grade.
    pub fn level(&self, g: usize) -> AsimRelation {
        let mut out = self.clone();
        for block in &mut out.blocks {
            for cell in block.iter_mut() {
                *cell = if *cell as usize > g { g as u8 + 1 } else { 0 };
            }
        }
        out.depth = g;
        out
    }

    /// `self ⊆ other` as plain sets of pairs.
    pub fn is_subset(&self, other: &AsimRelation) -> bool {
        self.shape == other.shape
            && self.max_len <= other.max_len
            && (0..2).all(|dir| {
                (0..=self.max_len).all(|n| {
                    let a = &self.blocks[self.block_id(dir, n)];
                    let b = &other.blocks[other.block_id(dir, n)];
                    a.iter().zip(b).all(|(x, y)| *x == 0 || *y != 0)
                })
            })
    }
}

pub(crate) fn shared_signature(m0: &FiniteModel, m1: &FiniteModel) -> Result<Signature, AsimError> {
    if m0.signature() != m1.signature() {
        return Err(AsimError::SignatureMismatch(m0.signature().to_string(), m1.signature().to_string()));
    }
    Ok(m0.signature().clone())
}
