//! The posetal category of families of finite/cofinite sets.
//!
//! Objects are families of [`NSet`]s; `X → Y` holds when every member of `X`
//! is contained in some member of `Y`. There is at most one arrow between two
//! objects, so every question about morphisms is a yes/no question about a
//! pair of objects.
//!
//! The deciders accept any `AsRef<[NSet]>`: canonical [`Obj`]s, raw
//! [`Family`] values, or plain slices. Raw families matter for the
//! iso-invariance diagnostic, where the representation of an object is the
//! thing being varied.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::nset::NSet;

/// A family of sets in canonical form.
///
/// Canonical form always contains `∅`, has no duplicates, and no member other
/// than `∅` is contained in another member. Members are sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Family", into = "Family")]
pub struct Obj {
    members: Vec<NSet>,
}

/// A family of sets exactly as given: no `∅` seeding, no deduplication.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Family {
    pub members: Vec<NSet>,
}

impl Family {
    pub fn new(members: Vec<NSet>) -> Self {
        Family { members }
    }

    pub fn normalize(&self) -> Obj {
        Obj::normalize(self.members.iter().cloned())
    }
}

impl AsRef<[NSet]> for Family {
    fn as_ref(&self) -> &[NSet] {
        &self.members
    }
}

impl From<Family> for Obj {
    fn from(f: Family) -> Self {
        Obj::normalize(f.members)
    }
}

impl From<Obj> for Family {
    fn from(o: Obj) -> Self {
        Family { members: o.members }
    }
}

impl From<&Obj> for Family {
    fn from(o: &Obj) -> Self {
        Family { members: o.members.clone() }
    }
}

impl AsRef<[NSet]> for Obj {
    fn as_ref(&self) -> &[NSet] {
        &self.members
    }
}

impl Obj {
    /// Canonical form of a family: seeds `∅`, drops duplicates and members
    /// strictly contained in another member.
    pub fn normalize(members: impl IntoIterator<Item = NSet>) -> Obj {
        let mut all: Vec<NSet> = members.into_iter().filter(|m| !m.is_empty()).collect();
        all.sort();
        all.dedup();
        let maximal: Vec<NSet> = all
            .iter()
            .enumerate()
            .filter(|(i, m)| {
                !all.iter()
                    .enumerate()
                    .any(|(j, other)| *i != j && m.is_subset(other))
            })
            .map(|(_, m)| m.clone())
            .collect();
        let mut members = Vec::with_capacity(maximal.len() + 1);
        members.push(NSet::empty());
        members.extend(maximal);
        members.sort();
        Obj { members }
    }

    pub fn members(&self) -> &[NSet] {
        &self.members
    }

    /// Members other than `∅`.
    pub fn nonempty_members(&self) -> impl Iterator<Item = &NSet> {
        self.members.iter().filter(|m| !m.is_empty())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `{∅, s}`, the one-point object generated by `s`.
    pub fn singleton(s: NSet) -> Obj {
        Obj::normalize([s])
    }

    pub fn all_finite(&self) -> bool {
        self.members.iter().all(NSet::is_finite)
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_family(f, &self.members)
    }
}

impl fmt::Debug for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_family(f, &self.members)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_family(f, &self.members)
    }
}

fn write_family(f: &mut fmt::Formatter<'_>, members: &[NSet]) -> fmt::Result {
    f.write_str("{")?;
    for (i, m) in members.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{m}")?;
    }
    f.write_str("}")
}

pub fn normalize(members: Vec<NSet>) -> Obj {
    Obj::normalize(members)
}

/// `{∅}`.
pub fn initial() -> Obj {
    Obj { members: vec![NSet::empty()] }
}

/// `{∅, ℕ}`.
pub fn terminal() -> Obj {
    Obj { members: vec![NSet::empty(), NSet::naturals()] }
}

/// Which reading of `X →* Y` to use.
///
/// `Adopted` measures source-member minus target-member, matching how the
/// relation is used in every proof about it. `Literal` measures
/// target-member minus source-member; it exists only for the diagnostic that
/// shows it breaks iso-invariance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StarTemplate {
    #[default]
    Adopted,
    Literal,
}

/// All decided predicates for an ordered pair of objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabelVerdict {
    pub arrow: bool,
    pub star: bool,
    pub w: bool,
    pub f: bool,
    pub c: bool,
}

impl fmt::Display for LabelVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "arrow={} star={} w={} f={} c={}",
            self.arrow, self.star, self.w, self.f, self.c
        )
    }
}

/// `∀x∈X ∃y∈Y x ⊆ y`.
pub fn arrow_exists<X, Y>(x: &X, y: &Y) -> bool
where
    X: AsRef<[NSet]> + ?Sized,
    Y: AsRef<[NSet]> + ?Sized,
{
    let ys = y.as_ref();
    x.as_ref().iter().all(|a| ys.iter().any(|b| a.is_subset(b)))
}

/// `∀x∈X ∃y∈Y |x∖y| < ℵ0`.
pub fn star_arrow<X, Y>(x: &X, y: &Y) -> bool
where
    X: AsRef<[NSet]> + ?Sized,
    Y: AsRef<[NSet]> + ?Sized,
{
    star_arrow_with(StarTemplate::Adopted, x, y)
}

pub fn star_arrow_with<X, Y>(template: StarTemplate, x: &X, y: &Y) -> bool
where
    X: AsRef<[NSet]> + ?Sized,
    Y: AsRef<[NSet]> + ?Sized,
{
    let ys = y.as_ref();
    x.as_ref().iter().all(|a| {
        ys.iter().any(|b| match template {
            StarTemplate::Adopted => a.almost_subset(b),
            StarTemplate::Literal => b.almost_subset(a),
        })
    })
}

/// `X → Y` and `Y →* X`.
pub fn label_w<X, Y>(x: &X, y: &Y) -> bool
where
    X: AsRef<[NSet]> + ?Sized,
    Y: AsRef<[NSet]> + ?Sized,
{
    label_w_with(StarTemplate::Adopted, x, y)
}

pub fn label_w_with<X, Y>(template: StarTemplate, x: &X, y: &Y) -> bool
where
    X: AsRef<[NSet]> + ?Sized,
    Y: AsRef<[NSet]> + ?Sized,
{
    arrow_exists(x, y) && star_arrow_with(template, y, x)
}

/// A failure of the fibration condition: no member of the source contains
/// `(x ∩ y) ∪ b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationGap {
    pub x: NSet,
    pub y: NSet,
    pub b: NSet,
}

/// Searches for a witness that the fibration condition fails.
///
/// The condition quantifies over every finite `b ⊆ y`. For a fixed `(x, y)`
/// the candidates are the `x'` containing `x ∩ y`; if none of them contains
/// all of `y`, picking one element of `y ∖ x'` per candidate yields a finite
/// `b` that defeats them all. Otherwise the condition holds for every `b`.
pub fn fibration_gap<X, Y>(x: &X, y: &Y) -> Option<FibrationGap>
where
    X: AsRef<[NSet]> + ?Sized,
    Y: AsRef<[NSet]> + ?Sized,
{
    let xs = x.as_ref();
    let empty = NSet::empty();
    for src in xs.iter().chain(std::iter::once(&empty)) {
        for tgt in y.as_ref() {
            let core = src.intersect(tgt);
            let candidates: Vec<&NSet> = xs.iter().filter(|c| core.is_subset(c)).collect();
            if candidates.iter().any(|c| tgt.is_subset(c)) {
                continue;
            }
            let b = NSet::fin(candidates.iter().map(|c| {
                tgt.difference(c)
                    .min_element()
                    .expect("tgt is not contained in candidate")
            }));
            return Some(FibrationGap { x: src.clone(), y: tgt.clone(), b });
        }
    }
    None
}

/// Checks that a gap really defeats every member of `x`.
pub fn gap_is_genuine<X>(x: &X, gap: &FibrationGap) -> bool
where
    X: AsRef<[NSet]> + ?Sized,
{
    let need = gap.x.intersect(&gap.y).union(&gap.b);
    gap.b.is_finite()
        && gap.b.is_subset(&gap.y)
        && !x.as_ref().iter().any(|c| need.is_subset(c))
}

/// `X → Y` labelled (f): the arrow exists and the fibration condition holds.
pub fn label_f<X, Y>(x: &X, y: &Y) -> bool
where
    X: AsRef<[NSet]> + ?Sized,
    Y: AsRef<[NSet]> + ?Sized,
{
    arrow_exists(x, y) && fibration_gap(x, y).is_none()
}

/// Fibration condition by the reduced formula `∀y∈Y ∃x'∈X y ⊆ x'`, valid
/// for finite source families.
pub fn fibration_condition_reduced<X, Y>(x: &X, y: &Y) -> bool
where
    X: AsRef<[NSet]> + ?Sized,
    Y: AsRef<[NSet]> + ?Sized,
{
    arrow_exists(y, x)
}

/// Fibration condition by enumerating every `b ⊆ y`. Only defined when all
/// members of `Y` are finite; returns `None` otherwise.
pub fn fibration_condition_exhaustive<X, Y>(x: &X, y: &Y) -> Option<bool>
where
    X: AsRef<[NSet]> + ?Sized,
    Y: AsRef<[NSet]> + ?Sized,
{
    let ys = y.as_ref();
    if !ys.iter().all(NSet::is_finite) {
        return None;
    }
    let xs = x.as_ref();
    let empty = NSet::empty();
    for src in xs.iter().chain(std::iter::once(&empty)) {
        for tgt in ys {
            let elems = tgt.support();
            if elems.len() > 20 {
                return None;
            }
            let core = src.intersect(tgt);
            for mask in 0u32..(1u32 << elems.len()) {
                let b = NSet::fin(
                    elems
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, e)| *e),
                );
                let need = core.union(&b);
                if !xs.iter().any(|c| need.is_subset(c)) {
                    return Some(false);
                }
            }
        }
    }
    Some(true)
}

/// Every morphism is a cofibration.
pub fn label_c<X, Y>(x: &X, y: &Y) -> bool
where
    X: AsRef<[NSet]> + ?Sized,
    Y: AsRef<[NSet]> + ?Sized,
{
    arrow_exists(x, y)
}

pub fn decide<X, Y>(x: &X, y: &Y) -> LabelVerdict
where
    X: AsRef<[NSet]> + ?Sized,
    Y: AsRef<[NSet]> + ?Sized,
{
    decide_with(StarTemplate::Adopted, x, y)
}

pub fn decide_with<X, Y>(template: StarTemplate, x: &X, y: &Y) -> LabelVerdict
where
    X: AsRef<[NSet]> + ?Sized,
    Y: AsRef<[NSet]> + ?Sized,
{
    let arrow = arrow_exists(x, y);
    LabelVerdict {
        arrow,
        star: star_arrow_with(template, x, y),
        w: arrow && star_arrow_with(template, y, x),
        f: arrow && fibration_gap(x, y).is_none(),
        c: arrow,
    }
}

/// Pointwise intersection `{x ∩ y}`.
pub fn product<X, Y>(x: &X, y: &Y) -> Obj
where
    X: AsRef<[NSet]> + ?Sized,
    Y: AsRef<[NSet]> + ?Sized,
{
    let ys = y.as_ref();
    Obj::normalize(
        x.as_ref()
            .iter()
            .flat_map(|a| ys.iter().map(move |b| a.intersect(b))),
    )
}

/// Union of families.
pub fn coproduct<X, Y>(x: &X, y: &Y) -> Obj
where
    X: AsRef<[NSet]> + ?Sized,
    Y: AsRef<[NSet]> + ?Sized,
{
    Obj::normalize(x.as_ref().iter().chain(y.as_ref()).cloned())
}

/// Mutual arrows.
pub fn is_iso<X, Y>(x: &X, y: &Y) -> bool
where
    X: AsRef<[NSet]> + ?Sized,
    Y: AsRef<[NSet]> + ?Sized,
{
    arrow_exists(x, y) && arrow_exists(y, x)
}
