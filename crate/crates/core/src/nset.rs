//! Finite and cofinite subsets of ℕ.
//!
//! A [`NSet`] is either a finite set of naturals or the complement of one.
//! That class is closed under intersection, union, difference and
//! complement, which is everything the category constructions need.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Whether the support lists the members or the excluded elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Fin,
    Cofin,
}

/// A subset of ℕ that is finite or cofinite, in canonical form.
///
/// `Fin` with support `S` denotes `S`; `Cofin` with support `S` denotes `ℕ∖S`.
/// Supports are strictly increasing, so structural equality is set equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Repr", into = "Repr")]
pub struct NSet {
    kind: Kind,
    support: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Repr {
    Fin(Vec<u64>),
    Cofin(Vec<u64>),
}

impl From<Repr> for NSet {
    fn from(r: Repr) -> Self {
        match r {
            Repr::Fin(s) => NSet::fin(s),
            Repr::Cofin(s) => NSet::cofin(s),
        }
    }
}

impl From<NSet> for Repr {
    fn from(s: NSet) -> Self {
        match s.kind {
            Kind::Fin => Repr::Fin(s.support),
            Kind::Cofin => Repr::Cofin(s.support),
        }
    }
}

/// Size of a subset of ℕ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cardinality {
    Finite(u64),
    Infinite,
}

impl Cardinality {
    pub fn is_finite(self) -> bool {
        matches!(self, Cardinality::Finite(_))
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Finite(n) => write!(f, "{n}"),
            Cardinality::Infinite => f.write_str("ℵ0"),
        }
    }
}

fn sorted(elems: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut v: Vec<u64> = elems.into_iter().collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn merge_union(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn merge_intersection(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn merge_difference(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j >= b.len() || b[j] != x {
            out.push(x);
        }
    }
    out
}

fn is_sub(a: &[u64], b: &[u64]) -> bool {
    merge_difference(a, b).is_empty()
}

impl NSet {
    /// The finite set with the given members.
    pub fn fin(members: impl IntoIterator<Item = u64>) -> Self {
        NSet { kind: Kind::Fin, support: sorted(members) }
    }

    /// ℕ minus the given elements.
    pub fn cofin(excluded: impl IntoIterator<Item = u64>) -> Self {
        NSet { kind: Kind::Cofin, support: sorted(excluded) }
    }

    pub fn empty() -> Self {
        NSet { kind: Kind::Fin, support: Vec::new() }
    }

    pub fn naturals() -> Self {
        NSet { kind: Kind::Cofin, support: Vec::new() }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Members (for `Fin`) or excluded elements (for `Cofin`), ascending.
    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn is_finite(&self) -> bool {
        self.kind == Kind::Fin
    }

    pub fn is_empty(&self) -> bool {
        self.kind == Kind::Fin && self.support.is_empty()
    }

    pub fn is_naturals(&self) -> bool {
        self.kind == Kind::Cofin && self.support.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        let hit = self.support.binary_search(&n).is_ok();
        match self.kind {
            Kind::Fin => hit,
            Kind::Cofin => !hit,
        }
    }

    pub fn cardinality(&self) -> Cardinality {
        match self.kind {
            Kind::Fin => Cardinality::Finite(self.support.len() as u64),
            Kind::Cofin => Cardinality::Infinite,
        }
    }

    /// Smallest member, if any.
    pub fn min_element(&self) -> Option<u64> {
        match self.kind {
            Kind::Fin => self.support.first().copied(),
            Kind::Cofin => {
                // first gap in the excluded list
                let mut candidate = 0u64;
                for &e in &self.support {
                    if e != candidate {
                        break;
                    }
                    candidate += 1;
                }
                Some(candidate)
            }
        }
    }

    pub fn complement(&self) -> NSet {
        let kind = match self.kind {
            Kind::Fin => Kind::Cofin,
            Kind::Cofin => Kind::Fin,
        };
        NSet { kind, support: self.support.clone() }
    }

    pub fn intersect(&self, other: &NSet) -> NSet {
        use Kind::*;
        match (self.kind, other.kind) {
            (Fin, Fin) => NSet { kind: Fin, support: merge_intersection(&self.support, &other.support) },
            (Fin, Cofin) => NSet { kind: Fin, support: merge_difference(&self.support, &other.support) },
            (Cofin, Fin) => NSet { kind: Fin, support: merge_difference(&other.support, &self.support) },
            (Cofin, Cofin) => NSet { kind: Cofin, support: merge_union(&self.support, &other.support) },
        }
    }

    pub fn union(&self, other: &NSet) -> NSet {
        use Kind::*;
        match (self.kind, other.kind) {
            (Fin, Fin) => NSet { kind: Fin, support: merge_union(&self.support, &other.support) },
            (Fin, Cofin) => NSet { kind: Cofin, support: merge_difference(&other.support, &self.support) },
            (Cofin, Fin) => NSet { kind: Cofin, support: merge_difference(&self.support, &other.support) },
            (Cofin, Cofin) => NSet { kind: Cofin, support: merge_intersection(&self.support, &other.support) },
        }
    }

    /// `self ∖ other`.
    pub fn difference(&self, other: &NSet) -> NSet {
        self.intersect(&other.complement())
    }

    /// Cardinality of `self ∖ other`; infinite exactly when `self` is
    /// cofinite and `other` finite.
    pub fn diff_card(&self, other: &NSet) -> Cardinality {
        use Kind::*;
        match (self.kind, other.kind) {
            (Cofin, Fin) => Cardinality::Infinite,
            _ => self.difference(other).cardinality(),
        }
    }

    /// `|self ∖ other| < ℵ0`.
    pub fn almost_subset(&self, other: &NSet) -> bool {
        !(self.kind == Kind::Cofin && other.kind == Kind::Fin)
    }

    pub fn is_subset(&self, other: &NSet) -> bool {
        use Kind::*;
        match (self.kind, other.kind) {
            (Fin, Fin) => is_sub(&self.support, &other.support),
            (Fin, Cofin) => merge_intersection(&self.support, &other.support).is_empty(),
            (Cofin, Fin) => false,
            (Cofin, Cofin) => is_sub(&other.support, &self.support),
        }
    }

    /// Largest element mentioned by the support, if any.
    pub fn max_support(&self) -> Option<u64> {
        self.support.last().copied()
    }
}

impl fmt::Debug for NSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn write_elems(f: &mut fmt::Formatter<'_>, elems: &[u64]) -> fmt::Result {
    f.write_str("{")?;
    for (i, e) in elems.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{e}")?;
    }
    f.write_str("}")
}

impl fmt::Display for NSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.support.is_empty()) {
            (Kind::Fin, true) => f.write_str("∅"),
            (Kind::Cofin, true) => f.write_str("ℕ"),
            (Kind::Fin, false) => write_elems(f, &self.support),
            (Kind::Cofin, false) => {
                f.write_str("ℕ∖")?;
                write_elems(f, &self.support)
            }
        }
    }
}
