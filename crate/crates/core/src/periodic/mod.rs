//! Ultimately periodic subsets of ℕ = {1, 2, …}.
//!
//! A set is stored as a finite prefix `[1..threshold]` listed explicitly and a
//! periodic tail: `n > threshold` belongs to the set iff `n mod period` is a
//! marked residue. Every value is kept in canonical form (minimal period, then
//! minimal threshold), so structural equality is set equality.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PeriodicError {
    #[error("{0} is not a positive natural number")]
    NotPositive(i64),
    #[error("period must be at least 1")]
    ZeroPeriod,
    #[error("exception {0} lies above the threshold {1}")]
    ExceptionAboveThreshold(u64, u64),
    #[error("the set is not infinite")]
    NotInfinite,
    #[error("n -> {a}n + {b} does not map ℕ into ℕ")]
    AffineLeavesN { a: i64, b: i64 },
    #[error("cannot sample from the empty set")]
    EmptySample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cardinality {
    Empty,
    Finite(u64),
    Infinite,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpSet {
    threshold: u64,
    exceptions: BTreeSet<u64>,
    period: u64,
    residues: Vec<bool>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl UpSet {
    /// Builds and canonicalizes a set from raw parts. `residues` lists the
    /// marked classes modulo `period`; values are reduced modulo `period`.
    pub fn from_parts(
        threshold: u64,
        exceptions: impl IntoIterator<Item = u64>,
        period: u64,
        residues: impl IntoIterator<Item = u64>,
    ) -> Result<Self, PeriodicError> {
        if period == 0 {
            return Err(PeriodicError::ZeroPeriod);
        }
        let mut ex = BTreeSet::new();
        for e in exceptions {
            if e == 0 {
                return Err(PeriodicError::NotPositive(0));
            }
            if e > threshold {
                return Err(PeriodicError::ExceptionAboveThreshold(e, threshold));
            }
            ex.insert(e);
        }
        let mut res = vec![false; period as usize];
        for r in residues {
            res[(r % period) as usize] = true;
        }
        Ok(Self::canonical(threshold, ex, period, res))
    }

    fn canonical(mut threshold: u64, mut exceptions: BTreeSet<u64>, period: u64, residues: Vec<bool>) -> Self {
        let mut p = period;
        for d in 1..=period {
            if period.is_multiple_of(d) && (0..period as usize).all(|r| residues[r] == residues[r % d as usize]) {
                p = d;
                break;
            }
        }
        let residues: Vec<bool> = residues[..p as usize].to_vec();
        while threshold > 0 && exceptions.contains(&threshold) == residues[(threshold % p) as usize] {
            exceptions.remove(&threshold);
            threshold -= 1;
        }
        UpSet { threshold, exceptions, period: p, residues }
    }

    pub fn empty() -> Self {
        Self::canonical(0, BTreeSet::new(), 1, vec![false])
    }

    /// ℕ itself.
    pub fn full() -> Self {
        Self::canonical(0, BTreeSet::new(), 1, vec![true])
    }

    /// `{n ∈ ℕ | n ≡ r (mod m)}`.
    pub fn residue_class(r: u64, m: u64) -> Self {
        assert!(m >= 1, "modulus must be positive");
        let mut res = vec![false; m as usize];
        res[(r % m) as usize] = true;
        Self::canonical(0, BTreeSet::new(), m, res)
    }

    pub fn evens() -> Self {
        Self::residue_class(0, 2)
    }

    pub fn odds() -> Self {
        Self::residue_class(1, 2)
    }

    pub fn finite(elems: impl IntoIterator<Item = u64>) -> Result<Self, PeriodicError> {
        let elems: BTreeSet<u64> = elems.into_iter().collect();
        if elems.contains(&0) {
            return Err(PeriodicError::NotPositive(0));
        }
        let t = elems.iter().next_back().copied().unwrap_or(0);
        Ok(Self::canonical(t, elems, 1, vec![false]))
    }

    /// `{n ∈ ℕ | n ≥ k}`.
    pub fn at_least(k: u64) -> Self {
        let k = k.max(1);
        Self::canonical(k - 1, BTreeSet::new(), 1, vec![true])
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn exceptions(&self) -> impl Iterator<Item = u64> + '_ {
        self.exceptions.iter().copied()
    }

    pub fn residues(&self) -> impl Iterator<Item = u64> + '_ {
        self.residues.iter().enumerate().filter(|(_, b)| **b).map(|(r, _)| r as u64)
    }

    /// Membership for `n ≥ 1`; `n = 0` is never a member.
    pub fn contains(&self, n: u64) -> bool {
        if n == 0 {
            false
        } else if n <= self.threshold {
            self.exceptions.contains(&n)
        } else {
            self.residues[(n % self.period) as usize]
        }
    }

    pub fn member(&self, n: i64) -> Result<bool, PeriodicError> {
        if n < 1 {
            return Err(PeriodicError::NotPositive(n));
        }
        Ok(self.contains(n as u64))
    }

    pub fn cardinality(&self) -> Cardinality {
        if self.residues.iter().any(|b| *b) {
            Cardinality::Infinite
        } else if self.exceptions.is_empty() {
            Cardinality::Empty
        } else {
            Cardinality::Finite(self.exceptions.len() as u64)
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.cardinality() == Cardinality::Infinite
    }

    pub fn is_empty(&self) -> bool {
        self.cardinality() == Cardinality::Empty
    }

    fn combine(&self, other: &UpSet, op: impl Fn(bool, bool) -> bool) -> UpSet {
        let t = self.threshold.max(other.threshold);
        let p = lcm(self.period, other.period);
        let exceptions = (1..=t).filter(|&n| op(self.contains(n), other.contains(n))).collect();
        let residues = (0..p)
            .map(|r| {
                let n = t + 1 + (r + p - (t + 1) % p) % p;
                op(self.contains(n), other.contains(n))
            })
            .collect();
        Self::canonical(t, exceptions, p, residues)
    }

    pub fn union(&self, other: &UpSet) -> UpSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &UpSet) -> UpSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &UpSet) -> UpSet {
        self.combine(other, |a, b| a && !b)
    }

    /// Complement with respect to ℕ.
    pub fn complement(&self) -> UpSet {
        Self::canonical(
            self.threshold,
            (1..=self.threshold).filter(|n| !self.exceptions.contains(n)).collect(),
            self.period,
            self.residues.iter().map(|b| !b).collect(),
        )
    }

    pub fn is_subset(&self, other: &UpSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &UpSet) -> bool {
        self.intersect(other).is_empty()
    }

    /// Members in increasing order; unbounded when the set is infinite.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let bound = if self.is_infinite() { u64::MAX } else { self.threshold };
        (1..=bound).filter(move |&n| self.contains(n))
    }

    pub fn least(&self) -> Option<u64> {
        if self.is_empty() {
            None
        } else {
            self.iter().next()
        }
    }

    /// Splits an infinite set into two disjoint infinite parts covering it.
    /// For each marked residue `r`, the first tail element `n₀ > threshold`
    /// of that class starts the first part (`n₀ + 2pℕ`) and `n₀ + p` starts
    /// the second. Exceptions go to the first part.
    pub fn split_two_infinite(&self) -> Result<(UpSet, UpSet), PeriodicError> {
        if !self.is_infinite() {
            return Err(PeriodicError::NotInfinite);
        }
        let (t, p) = (self.threshold, self.period);
        let mut first = vec![false; 2 * p as usize];
        let mut second = vec![false; 2 * p as usize];
        for r in self.residues() {
            let n0 = t + 1 + (r + p - (t + 1) % p) % p;
            first[(n0 % (2 * p)) as usize] = true;
            second[((n0 + p) % (2 * p)) as usize] = true;
        }
        Ok((
            Self::canonical(t, self.exceptions.clone(), 2 * p, first),
            Self::canonical(t, BTreeSet::new(), 2 * p, second),
        ))
    }

    /// `{n ≥ 1 | a·n + b ∈ self}` for `a ≥ 1` and `a + b ≥ 1`.
    pub fn affine_preimage(&self, a: i64, b: i64) -> Result<UpSet, PeriodicError> {
        if a < 1 || a + b < 1 {
            return Err(PeriodicError::AffineLeavesN { a, b });
        }
        let image = |n: u64| (a * n as i64 + b) as u64;
        let t = self.threshold as i64;
        let new_t = if t - b >= 0 { ((t - b) / a) as u64 } else { 0 };
        let p = self.period;
        let exceptions = (1..=new_t).filter(|&n| self.contains(image(n))).collect();
        let residues = (0..p)
            .map(|r| {
                let m = (a as i128 * r as i128 + b as i128).rem_euclid(p as i128) as usize;
                self.residues[m]
            })
            .collect();
        Ok(Self::canonical(new_t, exceptions, p, residues))
    }

    /// The first `k` members (fewer when the set is smaller) and one member
    /// drawn with a seeded generator.
    pub fn sample_and_enumerate(&self, k: usize, seed: u64) -> Result<(Vec<u64>, u64), PeriodicError> {
        let first: Vec<u64> = self.iter().take(k).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((first, self.random_element(&mut rng)?))
    }

    /// A member drawn from the exceptions and the first 64 periods of the
    /// tail.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<u64, PeriodicError> {
        let bound = match self.cardinality() {
            Cardinality::Empty => return Err(PeriodicError::EmptySample),
            Cardinality::Finite(_) => self.threshold,
            Cardinality::Infinite => self.threshold + 64 * self.period,
        };
        let pool: Vec<u64> = (1..=bound).filter(|&n| self.contains(n)).collect();
        Ok(pool[rng.gen_range(0..pool.len())])
    }

    /// Dense membership vector for `1..=limit`; index `i` holds `i + 1 ∈ self`.
    pub fn to_bits(&self, limit: u64) -> Vec<bool> {
        (1..=limit).map(|n| self.contains(n)).collect()
    }
}

fn write_set(f: &mut fmt::Formatter<'_>, elems: impl Iterator<Item = u64>) -> fmt::Result {
    let items: Vec<String> = elems.map(|n| n.to_string()).collect();
    if items.is_empty() {
        f.write_str("∅")
    } else {
        write!(f, "{{{}}}", items.join(","))
    }
}

/// `{exceptions | period : residues}`; a positive threshold is written after
/// the exceptions as `≤t`.
impl fmt::Display for UpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        write_set(f, self.exceptions())?;
        if self.threshold > 0 {
            write!(f, "≤{}", self.threshold)?;
        }
        write!(f, " | {} : ", self.period)?;
        write_set(f, self.residues())?;
        f.write_str("}")
    }
}

impl fmt::Debug for UpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
