//! Enumerated and sampled verification of the model-structure axioms and
//! the claims about limits, exponentials and labels.
//!
//! Every check is a predicate over a short tuple of families. A tuple either
//! satisfies the check's premises or not; when it does, the conclusion is
//! evaluated and a failure becomes a counterexample. Counterexamples are
//! shrunk (fewer members, smaller supports) while they keep failing, and
//! every stored counterexample can be replayed through [`evaluate`].

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{self, Family, Obj, StarTemplate};
use crate::nset::NSet;
use crate::vobj::{self, Label, Node, VObj};

/// Largest exhaustive ground: window plus one tail bit for cofinite members.
pub const EXHAUSTIVE_BITS_LIMIT: u32 = 3;

/// Counterexamples kept per check; the total count is always reported.
pub const MAX_REPORTED: usize = 8;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

/// Where objects come from: supports inside `{0..window-1}`, optionally with
/// cofinite members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Universe {
    pub window: u32,
    pub include_cofinite: bool,
    pub mode: Mode,
}

impl Universe {
    pub fn exhaustive(window: u32, include_cofinite: bool) -> Self {
        Universe { window, include_cofinite, mode: Mode::Exhaustive }
    }

    pub fn sampled(window: u32, include_cofinite: bool, count: usize, seed: u64) -> Self {
        Universe { window, include_cofinite, mode: Mode::Sampled { count, seed } }
    }

    pub fn seed(&self) -> Option<u64> {
        match self.mode {
            Mode::Exhaustive => None,
            Mode::Sampled { seed, .. } => Some(seed),
        }
    }

    fn guard(&self) -> Result<()> {
        let bits = self.window + u32::from(self.include_cofinite);
        if self.mode == Mode::Exhaustive && bits > EXHAUSTIVE_BITS_LIMIT {
            return Err(Error::SizeGuard {
                window: self.window,
                cofinite: self.include_cofinite,
                limit: EXHAUSTIVE_BITS_LIMIT,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cof = if self.include_cofinite { "+cofinite" } else { "fin-only" };
        match self.mode {
            Mode::Exhaustive => write!(f, "window={} {cof} exhaustive", self.window),
            Mode::Sampled { count, seed } => {
                write!(f, "window={} {cof} sampled count={count} seed={seed}", self.window)
            }
        }
    }
}

/// The suites run when no universe is requested: every fin-only object over
/// two points, then seeded samples over three points with cofinite members.
pub fn default_universes() -> [Universe; 2] {
    [
        Universe::exhaustive(2, false),
        Universe::sampled(3, true, DEFAULT_SAMPLES, DEFAULT_SEED),
    ]
}

/// Every non-empty set whose support lies in the window, in a fixed order.
fn window_sets(window: u32, include_cofinite: bool) -> Vec<NSet> {
    let subset = |mask: u32| (0..window).filter(move |i| mask & (1 << i) != 0).map(u64::from);
    let mut out: Vec<NSet> = (1..(1u32 << window)).map(|m| NSet::fin(subset(m))).collect();
    if include_cofinite {
        out.extend((0..(1u32 << window)).map(|m| NSet::cofin(subset(m))));
    }
    out
}

/// Objects of the universe: every canonical object in exhaustive mode,
/// `count` seeded draws in sampled mode.
pub fn enumerate_objects(u: &Universe) -> Result<Vec<Obj>> {
    u.guard()?;
    match u.mode {
        Mode::Exhaustive => {
            let ground = window_sets(u.window, u.include_cofinite);
            let n = ground.len();
            let mut out = Vec::new();
            for mask in 0u64..(1u64 << n) {
                let chosen: Vec<&NSet> =
                    (0..n).filter(|i| mask & (1 << i) != 0).map(|i| &ground[i]).collect();
                let antichain = chosen.iter().enumerate().all(|(i, a)| {
                    chosen.iter().enumerate().all(|(j, b)| i == j || !a.is_subset(b))
                });
                if antichain {
                    out.push(Obj::normalize(chosen.into_iter().cloned()));
                }
            }
            Ok(out)
        }
        Mode::Sampled { count, seed } => {
            let mut s = Sampler::new(u.window, u.include_cofinite, seed, 0);
            Ok((0..count).map(|_| s.object()).collect())
        }
    }
}

/// Seeded generator of sets and objects.
///
/// Objects have a geometric number of members (mean 2); each member's
/// support is a uniform subset of the window and is cofinite with
/// probability 1/4 when cofinite members are enabled.
pub struct Sampler {
    rng: ChaCha8Rng,
    window: u32,
    include_cofinite: bool,
    members: Geometric,
}

impl Sampler {
    pub fn new(window: u32, include_cofinite: bool, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler {
            rng,
            window,
            include_cofinite,
            members: Geometric::new(0.5).expect("valid probability"),
        }
    }

    fn subset_of(&mut self, bound: u32) -> Vec<u64> {
        (0..bound).filter(|_| self.rng.random_bool(0.5)).map(u64::from).collect()
    }

    pub fn nset(&mut self) -> NSet {
        let support = self.subset_of(self.window);
        if self.include_cofinite && self.rng.random_bool(0.25) {
            NSet::cofin(support)
        } else {
            NSet::fin(support)
        }
    }

    pub fn object(&mut self) -> Obj {
        let k = 1 + self.members.sample(&mut self.rng);
        Obj::normalize((0..k).map(|_| self.nset()).collect::<Vec<_>>())
    }

    fn coin(&mut self) -> bool {
        self.rng.random_bool(0.5)
    }

    fn pick(&mut self, options: Vec<Obj>) -> Obj {
        options.choose(&mut self.rng).expect("non-empty").clone()
    }

    fn finite_patch(&mut self) -> NSet {
        NSet::fin(self.subset_of(self.window + 2))
    }

    /// `X ∨ {x ∪ F}`: `X` maps to it by a weak equivalence.
    pub fn weak_extension(&mut self, x: &Obj) -> Obj {
        let m = x.members().choose(&mut self.rng).expect("non-empty").clone();
        let patch = self.finite_patch();
        kernel::coproduct(x, &Obj::singleton(m.union(&patch)))
    }

    /// `{x ∖ F_x}`: maps into `X` by a weak equivalence.
    pub fn weak_restriction(&mut self, x: &Obj) -> Obj {
        let shrunk: Vec<NSet> = x
            .members()
            .iter()
            .map(|m| m.difference(&self.finite_patch()))
            .collect();
        Obj::normalize(shrunk)
    }

    pub fn below(&mut self, x: &Obj) -> Obj {
        let r = self.object();
        kernel::product(x, &r)
    }

    pub fn above(&mut self, x: &Obj) -> Obj {
        let r = self.object();
        kernel::coproduct(x, &r)
    }

    pub fn variant(&mut self, x: &Obj) -> Family {
        iso_variants(x).choose(&mut self.rng).expect("non-empty").clone()
    }
}

/// Raw families isomorphic to `x`: without `∅`, with dominated members
/// added, and reordered.
pub fn iso_variants(x: &Obj) -> Vec<Family> {
    let base: Vec<NSet> = x.members().to_vec();
    let without_empty: Vec<NSet> = base.iter().filter(|m| !m.is_empty()).cloned().collect();
    let mut dominated = Vec::new();
    for m in x.nonempty_members() {
        if let Some(e) = m.min_element() {
            let point = NSet::fin([e]);
            for d in [m.difference(&point), point] {
                if !d.is_empty() && d != *m {
                    dominated.push(d);
                }
            }
        }
    }
    let mut out: Vec<Family> = vec![Family::new(base.clone())];
    if !without_empty.is_empty() {
        out.push(Family::new(without_empty.clone()));
    }
    if !dominated.is_empty() {
        let with_dom: Vec<NSet> = base.iter().chain(&dominated).cloned().collect();
        out.push(Family::new(with_dom.iter().rev().cloned().collect()));
        out.push(Family::new(with_dom));
        if !without_empty.is_empty() {
            out.push(Family::new(without_empty.iter().chain(&dominated).cloned().collect()));
        }
    }
    out.dedup();
    out
}

/// The named checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Check {
    M1Lifting,
    M2FactorWcF,
    M2FactorCWf,
    M5TwoOfThree,
    BaseChangeF,
    CobaseChangeWc,
    RetractClosure,
    IsoInvariance,
    WcfReverse,
    FReduction,
    Claim5,
    ExpRepresentability,
    WexpRepresentability,
    LimitsUniversal,
}

impl Check {
    pub const AXIOMS: [Check; 8] = [
        Check::M1Lifting,
        Check::M2FactorWcF,
        Check::M2FactorCWf,
        Check::M5TwoOfThree,
        Check::BaseChangeF,
        Check::CobaseChangeWc,
        Check::RetractClosure,
        Check::IsoInvariance,
    ];

    pub const CLAIMS: [Check; 6] = [
        Check::WcfReverse,
        Check::FReduction,
        Check::Claim5,
        Check::ExpRepresentability,
        Check::WexpRepresentability,
        Check::LimitsUniversal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::M1Lifting => "M1_LIFTING",
            Check::M2FactorWcF => "M2_FACTOR_WC_F",
            Check::M2FactorCWf => "M2_FACTOR_C_WF",
            Check::M5TwoOfThree => "M5_TWO_OF_THREE",
            Check::BaseChangeF => "BASE_CHANGE_F",
            Check::CobaseChangeWc => "COBASE_CHANGE_WC",
            Check::RetractClosure => "RETRACT_CLOSURE",
            Check::IsoInvariance => "ISO_INVARIANCE",
            Check::WcfReverse => "WCF_REVERSE",
            Check::FReduction => "F_REDUCTION",
            Check::Claim5 => "CLAIM5",
            Check::ExpRepresentability => "EXP_REPRESENTABILITY",
            Check::WexpRepresentability => "WEXP_REPRESENTABILITY",
            Check::LimitsUniversal => "LIMITS_UNIVERSAL",
        }
    }

    pub fn roles(self) -> &'static [&'static str] {
        match self {
            Check::M1Lifting => &["X", "Y", "W", "Z"],
            Check::M2FactorWcF | Check::M2FactorCWf | Check::WcfReverse | Check::FReduction => {
                &["X", "Y"]
            }
            Check::M5TwoOfThree => &["X", "Y", "Z"],
            Check::BaseChangeF | Check::CobaseChangeWc => &["X", "Y", "Z"],
            Check::RetractClosure | Check::IsoInvariance => &["X", "Y", "X'", "Y'"],
            Check::Claim5 => &["Z", "B", "C"],
            Check::ExpRepresentability => &["D", "B", "C"],
            Check::WexpRepresentability => &["Z", "A", "B", "C"],
            Check::LimitsUniversal => &["X", "Y", "W"],
        }
    }

    fn stream(self) -> u64 {
        Check::AXIOMS
            .iter()
            .chain(&Check::CLAIMS)
            .position(|c| *c == self)
            .expect("listed") as u64
            + 1
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Check::AXIOMS
            .iter()
            .chain(&Check::CLAIMS)
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| format!("unknown check {s}"))
    }
}

/// Result of evaluating one tuple.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub premises_held: bool,
    pub violation: Option<String>,
}

impl Outcome {
    fn vacuous() -> Self {
        Outcome::default()
    }

    fn verdict(ok: bool, detail: impl FnOnce() -> String) -> Self {
        Outcome { premises_held: true, violation: (!ok).then(detail) }
    }
}

fn objs(t: &[Family]) -> Vec<Obj> {
    t.iter().map(Family::normalize).collect()
}

/// Evaluates `check` on one tuple of families.
pub fn evaluate(check: Check, t: &[Family], template: StarTemplate) -> Outcome {
    use kernel::{arrow_exists as arrow, label_f, label_w};
    assert_eq!(t.len(), check.roles().len(), "{check} takes {} families", check.roles().len());
    match check {
        Check::M1Lifting => {
            let [x, y, w, z] = &objs(t)[..] else { unreachable!() };
            let square = arrow(x, w) && arrow(y, z) && arrow(x, y) && arrow(w, z);
            let wc_f = square && label_w(x, y) && label_f(w, z);
            let c_wf = square && label_w(w, z) && label_f(w, z);
            if !(wc_f || c_wf) {
                return Outcome::vacuous();
            }
            Outcome::verdict(arrow(y, w), || {
                let which = if wc_f { "(wc) ⋔ (f)" } else { "(c) ⋔ (wf)" };
                format!("{which}: no diagonal Y → W")
            })
        }
        Check::M2FactorWcF => {
            let [x, y] = &objs(t)[..] else { unreachable!() };
            if !arrow(x, y) {
                return Outcome::vacuous();
            }
            Outcome::verdict_from(factorization_failure(x, y))
        }
        Check::M2FactorCWf => {
            let [x, y] = &objs(t)[..] else { unreachable!() };
            if !arrow(x, y) {
                return Outcome::vacuous();
            }
            let ok = kernel::label_c(x, y) && label_w(y, y) && label_f(y, y);
            Outcome::verdict(ok, || "X —(c)→ Y —(wf)→ Y fails".into())
        }
        Check::M5TwoOfThree => {
            let [x, y, z] = &objs(t)[..] else { unreachable!() };
            if !(arrow(x, y) && arrow(y, z)) {
                return Outcome::vacuous();
            }
            let ws = [label_w(x, y), label_w(y, z), label_w(x, z)];
            let count = ws.iter().filter(|w| **w).count();
            Outcome::verdict(count != 2, || {
                format!("w(f)={} w(g)={} w(g∘f)={}", ws[0], ws[1], ws[2])
            })
        }
        Check::BaseChangeF => {
            let [x, y, z] = &objs(t)[..] else { unreachable!() };
            if !(label_f(y, z) && arrow(x, z)) {
                return Outcome::vacuous();
            }
            let pullback = kernel::product(x, y);
            Outcome::verdict(label_f(&pullback, x), || {
                format!("X×Y = {pullback} → X is not (f)")
            })
        }
        Check::CobaseChangeWc => {
            let [x, y, z] = &objs(t)[..] else { unreachable!() };
            if !(label_w(x, z) && arrow(x, y)) {
                return Outcome::vacuous();
            }
            let pushout = kernel::coproduct(z, y);
            Outcome::verdict(label_w(y, &pushout), || {
                format!("Y → Z∨Y = {pushout} is not (wc)")
            })
        }
        Check::RetractClosure => {
            let [x, y, x2, y2] = t else { unreachable!() };
            let retract = arrow(x, x2) && arrow(x2, x) && arrow(y, y2) && arrow(y2, y);
            if !(retract && arrow(x, y) && arrow(x2, y2)) {
                return Outcome::vacuous();
            }
            let outer = kernel::decide_with(template, x2, y2);
            let inner = kernel::decide_with(template, x, y);
            let lost = [
                ("arrow", outer.arrow && !inner.arrow),
                ("w", outer.w && !inner.w),
                ("f", outer.f && !inner.f),
                ("c", outer.c && !inner.c),
            ];
            let bad: Vec<&str> = lost.iter().filter(|(_, l)| *l).map(|(n, _)| *n).collect();
            Outcome::verdict(bad.is_empty(), || format!("retract loses labels {bad:?}"))
        }
        Check::IsoInvariance => {
            let [x, y, x2, y2] = t else { unreachable!() };
            if !(kernel::is_iso(x, x2) && kernel::is_iso(y, y2)) {
                return Outcome::vacuous();
            }
            let a = kernel::decide_with(template, x, y);
            let b = kernel::decide_with(template, x2, y2);
            Outcome::verdict(a == b, || format!("({x}, {y}): {a}; ({x2}, {y2}): {b}"))
        }
        Check::WcfReverse => {
            let [x, y] = t else { unreachable!() };
            if !(label_w(x, y) && label_f(x, y)) {
                return Outcome::vacuous();
            }
            Outcome::verdict(arrow(y, x), || "X —(wcf)→ Y but no Y → X".into())
        }
        Check::FReduction => {
            let [x, y] = t else { unreachable!() };
            let gap = kernel::fibration_gap(x, y);
            if let Some(g) = &gap {
                if !kernel::gap_is_genuine(x, g) {
                    return Outcome::verdict(false, || format!("spurious gap {g:?}"));
                }
            }
            let by_search = gap.is_none();
            let by_formula = kernel::fibration_condition_reduced(x, y);
            let by_enum = kernel::fibration_condition_exhaustive(x, y);
            let ok = by_search == by_formula && by_enum.is_none_or(|e| e == by_search);
            Outcome::verdict(ok, || {
                format!("gap search {by_search}, reduced formula {by_formula}, enumeration {by_enum:?}")
            })
        }
        Check::Claim5 => {
            let [z, b, c] = &objs(t)[..] else { unreachable!() };
            let whole = label_w(&kernel::product(z, b), &kernel::product(z, c));
            let pointwise = z.members().iter().all(|s| vobj::wexp_member(b, c, s));
            Outcome::verdict(whole == pointwise, || {
                format!("Z×B —(w)→ Z×C is {whole}, pointwise criterion {pointwise}")
            })
        }
        Check::ExpRepresentability => {
            let [d, b, c] = &objs(t)[..] else { unreachable!() };
            let oracle = vobj::arrow_into_vobj(d, &VObj::Exp { b: b.clone(), c: c.clone() });
            let via_product = arrow(&kernel::product(d, b), c);
            let exp = vobj::exp_explicit(b, c);
            let via_explicit = arrow(d, &exp);
            let ok = oracle == via_product && via_product == via_explicit;
            Outcome::verdict(ok, || {
                format!("oracle {oracle}, D×B→C {via_product}, D→C^B={exp} {via_explicit}")
            })
        }
        Check::WexpRepresentability => {
            let [z, a, b, c] = &objs(t)[..] else { unreachable!() };
            if !(arrow(b, a) && arrow(c, a)) {
                return Outcome::vacuous();
            }
            let v = VObj::Wexp { a: a.clone(), b: b.clone(), c: c.clone() };
            let into = vobj::arrow_into_vobj(z, &v);
            let direct = arrow(z, a) && label_w(&kernel::product(z, b), &kernel::product(z, c));
            Outcome::verdict(into == direct, || {
                format!("Z → weq object {into}, Z→A ∧ Z×B —(w)→ Z×C {direct}")
            })
        }
        Check::LimitsUniversal => {
            let [x, y, w] = &objs(t)[..] else { unreachable!() };
            let p = kernel::product(x, y);
            let s = kernel::coproduct(x, y);
            let mut bad = Vec::new();
            if !(arrow(&p, x) && arrow(&p, y)) {
                bad.push("projections");
            }
            if !(arrow(x, &s) && arrow(y, &s)) {
                bad.push("injections");
            }
            if (arrow(w, x) && arrow(w, y)) != arrow(w, &p) {
                bad.push("product universal property");
            }
            if (arrow(x, w) && arrow(y, w)) != arrow(&s, w) {
                bad.push("coproduct universal property");
            }
            Outcome::verdict(bad.is_empty(), || bad.join(", "))
        }
    }
}

impl Outcome {
    fn verdict_from(failure: Option<String>) -> Self {
        Outcome { premises_held: true, violation: failure }
    }
}

/// Checks `X —(wc)→ X_wc —(f)→ Y` for an arrow `X → Y` through the
/// factorization oracles, plus explicit membership witnesses: for members
/// `s = (x ∩ y) ∪ F` and finite `b ⊆ t`, `(s ∩ t) ∪ b` must be a member.
fn factorization_failure(x: &Obj, y: &Obj) -> Option<String> {
    let v = VObj::wc(x.clone(), y.clone());
    let xn: Node = x.clone().into();
    let yn: Node = y.clone().into();
    let vn: Node = v.clone().into();
    let facts = [
        ("X → X_wc", vobj::arrow_into_vobj(x, &v)),
        ("X_wc →* X", vobj::star_from_vobj(&v, x).unwrap_or(false)),
        ("X —(wc)→ X_wc", vobj::decide_label(&xn, &vn, Label::W).unwrap_or(false)),
        ("X_wc → Y", vobj::arrow_from_vobj(&v, y).unwrap_or(false)),
        ("X_wc —(f)→ Y", vobj::decide_label(&vn, &yn, Label::F).unwrap_or(false)),
    ];
    if let Some((name, _)) = facts.iter().find(|(_, ok)| !ok) {
        return Some(format!("{name} fails"));
    }
    let first = |s: &NSet, k: usize| -> NSet {
        let mut rest = s.clone();
        let mut picked = Vec::new();
        while picked.len() < k {
            match rest.min_element() {
                Some(e) => {
                    picked.push(e);
                    rest = rest.difference(&NSet::fin([e]));
                }
                None => break,
            }
        }
        NSet::fin(picked)
    };
    for xm in x.members() {
        for ym in y.members() {
            let s = xm.intersect(ym).union(&first(&ym.difference(xm), 2));
            if !vobj::wc_covers(x, y, &s) {
                return Some(format!("member {s} of X_wc not covered"));
            }
            for tm in y.members() {
                let target = s.intersect(tm).union(&first(tm, 2));
                if !vobj::wc_covers(x, y, &target) {
                    return Some(format!("fibration witness {target} for s={s}, t={tm} missing"));
                }
            }
        }
    }
    None
}

/// A failing tuple, after shrinking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Position of the original tuple in enumeration or sample order.
    pub instance: usize,
    pub roles: Vec<String>,
    pub families: Vec<Family>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub universe: Universe,
    pub template: StarTemplate,
    pub instances_tested: usize,
    pub premises_held: usize,
    pub violation_count: usize,
    pub violations: Vec<Counterexample>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

/// Removes members, drops support elements and turns cofinite members
/// finite while `still_fails` keeps holding.
pub fn shrink(mut cur: Vec<Family>, still_fails: impl Fn(&[Family]) -> bool) -> Vec<Family> {
    loop {
        let next = shrink_candidates(&cur).find(|cand| still_fails(cand));
        match next {
            Some(c) => cur = c,
            None => return cur,
        }
    }
}

fn shrink_candidates(cur: &[Family]) -> impl Iterator<Item = Vec<Family>> + '_ {
    let replace = move |i: usize, members: Vec<NSet>| {
        let mut out = cur.to_vec();
        out[i] = Family::new(members);
        out
    };
    (0..cur.len()).flat_map(move |i| {
        let ms = &cur[i].members;
        let removals = (0..ms.len()).map(move |j| {
            let mut m = ms.clone();
            m.remove(j);
            replace(i, m)
        });
        let edits = (0..ms.len()).flat_map(move |j| {
            let member = &ms[j];
            let mut simpler: Vec<NSet> = member
                .support()
                .iter()
                .map(|e| {
                    let rest = member.support().iter().copied().filter(|x| x != e);
                    match member.kind() {
                        crate::nset::Kind::Fin => NSet::fin(rest),
                        crate::nset::Kind::Cofin => NSet::cofin(rest),
                    }
                })
                .collect();
            if !member.is_finite() {
                simpler.push(NSet::fin(member.support().iter().copied()));
            }
            simpler.into_iter().map(move |s| {
                let mut m = ms.clone();
                m[j] = s;
                replace(i, m)
            })
        });
        removals.chain(edits)
    })
}

/// Re-runs a counterexample through the deciders.
pub fn replay(check: Check, template: StarTemplate, cex: &Counterexample) -> bool {
    evaluate(check, &cex.families, template).violation.is_some()
}

/// Evaluates `tuples` in parallel and collects results in tuple order.
pub fn run_instances<F>(
    name: &str,
    roles: &[&str],
    universe: Universe,
    template: StarTemplate,
    tuples: Vec<Vec<Family>>,
    eval: F,
) -> CheckResult
where
    F: Fn(&[Family]) -> Outcome + Sync,
{
    let start = Instant::now();
    let outcomes: Vec<Outcome> = tuples.par_iter().map(|t| eval(t)).collect();
    let premises_held = outcomes.iter().filter(|o| o.premises_held).count();
    let failing: Vec<usize> = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| o.violation.is_some())
        .map(|(i, _)| i)
        .collect();
    let violations = failing
        .iter()
        .take(MAX_REPORTED)
        .map(|&i| {
            let families = shrink(tuples[i].clone(), |t| eval(t).violation.is_some());
            let detail = eval(&families).violation.unwrap_or_default();
            Counterexample {
                instance: i,
                roles: roles.iter().map(|r| r.to_string()).collect(),
                families,
                detail,
            }
        })
        .collect();
    CheckResult {
        check: name.to_string(),
        universe,
        template,
        instances_tested: tuples.len(),
        premises_held,
        violation_count: failing.len(),
        violations,
        elapsed: start.elapsed(),
    }
}

fn cartesian(objects: &[Obj], arity: usize) -> Vec<Vec<Family>> {
    let mut out: Vec<Vec<Family>> = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                objects.iter().map(move |o| {
                    let mut t = prefix.clone();
                    t.push(Family::from(o));
                    t
                })
            })
            .collect();
    }
    out
}

fn exhaustive_tuples(check: Check, objects: &[Obj]) -> Vec<Vec<Family>> {
    match check {
        Check::IsoInvariance | Check::RetractClosure => {
            let mut out = Vec::new();
            for x in objects {
                for y in objects {
                    for x2 in iso_variants(x) {
                        for y2 in iso_variants(y) {
                            out.push(vec![x.into(), y.into(), x2.clone(), y2]);
                        }
                    }
                }
            }
            out
        }
        _ => cartesian(objects, check.roles().len()),
    }
}

fn sampled_tuple(check: Check, s: &mut Sampler) -> Vec<Family> {
    let t: Vec<Obj> = match check {
        Check::M1Lifting => {
            let x = s.object();
            let y = if s.coin() { s.weak_extension(&x) } else { s.above(&x) };
            let w = s.above(&x);
            let z = if s.coin() {
                kernel::coproduct(&w, &y)
            } else {
                let up = s.above(&w);
                kernel::coproduct(&up, &y)
            };
            vec![x, y, w, z]
        }
        Check::M2FactorWcF | Check::M2FactorCWf => {
            let y = s.object();
            let x = if s.coin() { s.below(&y) } else { s.weak_restriction(&y) };
            vec![x, y]
        }
        Check::M5TwoOfThree => {
            let z = s.object();
            let y = if s.coin() { s.below(&z) } else { s.weak_restriction(&z) };
            let x = if s.coin() { s.below(&y) } else { s.weak_restriction(&y) };
            vec![x, y, z]
        }
        Check::BaseChangeF => {
            let z = s.object();
            let options = vec![z.clone(), s.weak_restriction(&z), s.below(&z)];
            let y = s.pick(options);
            let x = s.below(&z);
            vec![x, y, z]
        }
        Check::CobaseChangeWc => {
            let x = s.object();
            let z = if s.coin() { s.weak_extension(&x) } else { s.above(&x) };
            let y = s.above(&x);
            vec![x, y, z]
        }
        Check::RetractClosure | Check::IsoInvariance => {
            let x = s.object();
            let options = vec![s.object(), s.above(&x), s.weak_extension(&x)];
            let y = s.pick(options);
            let (x2, y2) = (s.variant(&x), s.variant(&y));
            return vec![x.into(), y.into(), x2, y2];
        }
        Check::WcfReverse => {
            let x = s.object();
            let options = vec![x.clone(), s.above(&x), s.weak_extension(&x)];
            let y = s.pick(options);
            vec![x, y]
        }
        Check::FReduction => {
            let x = s.object();
            let options = vec![s.object(), s.above(&x), s.below(&x), s.weak_extension(&x)];
            let y = s.pick(options);
            vec![x, y]
        }
        Check::Claim5 => {
            let z = s.object();
            let b = s.object();
            let options = vec![s.object(), s.weak_extension(&b), s.weak_restriction(&b)];
            let c = s.pick(options);
            vec![z, b, c]
        }
        Check::ExpRepresentability => vec![s.object(), s.object(), s.object()],
        Check::WexpRepresentability => {
            let b = s.object();
            let options = vec![s.object(), s.weak_extension(&b), s.weak_restriction(&b)];
            let c = s.pick(options);
            let z = s.object();
            let bc = kernel::coproduct(&b, &c);
            let a = if s.rng.random_bool(0.75) {
                kernel::coproduct(&bc, &z)
            } else {
                s.above(&bc)
            };
            vec![z, a, b, c]
        }
        Check::LimitsUniversal => {
            let x = s.object();
            let y = s.object();
            let options = vec![s.object(), s.below(&x), s.above(&x)];
            let w = s.pick(options);
            vec![x, y, w]
        }
    };
    t.into_iter().map(Family::from).collect()
}

/// Tuples for `check` over `u`, in a fixed order.
pub fn tuples_for(check: Check, u: &Universe) -> Result<Vec<Vec<Family>>> {
    match u.mode {
        Mode::Exhaustive => Ok(exhaustive_tuples(check, &enumerate_objects(u)?)),
        Mode::Sampled { count, seed } => {
            let mut s = Sampler::new(u.window, u.include_cofinite, seed, check.stream());
            Ok((0..count).map(|_| sampled_tuple(check, &mut s)).collect())
        }
    }
}

pub fn run_check(check: Check, u: &Universe, template: StarTemplate) -> Result<CheckResult> {
    let tuples = tuples_for(check, u)?;
    Ok(run_instances(check.name(), check.roles(), *u, template, tuples, |t| {
        evaluate(check, t, template)
    }))
}

pub fn check_axiom(check: Check, u: &Universe) -> Result<CheckResult> {
    run_check(check, u, StarTemplate::Adopted)
}

pub fn check_claim(check: Check, u: &Universe) -> Result<CheckResult> {
    run_check(check, u, StarTemplate::Adopted)
}

/// Iso-invariance under the literal star template. Expected to fail; it
/// documents why the adopted template is the right one.
pub fn literal_star_diagnostic(u: &Universe) -> Result<CheckResult> {
    run_check(Check::IsoInvariance, u, StarTemplate::Literal)
}
