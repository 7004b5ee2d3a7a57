//! Univalent fibrations, smallness, and the universal fibration `Ũ → ⊤`.
//!
//! In a posetal category the comparison map of a fibration into its object
//! of weak equivalences collapses to a chain of isomorphisms between explicit
//! objects. [`is_univalent`] computes that chain step by step and records
//! each step with the objects that witness it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{self, CheckResult, Mode, Outcome, Universe};
use crate::kernel::{self, initial, terminal, Family, Obj, StarTemplate};
use crate::nset::NSet;
use crate::vobj::{self, Label, Node, VObj};

/// A verified fibration `total —(f)→ base`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fibration {
    total: Obj,
    base: Obj,
}

impl Fibration {
    pub fn new(total: Obj, base: Obj) -> Result<Self> {
        if !kernel::label_f(&total, &base) {
            return Err(Error::NotAFibration { total: total.to_string(), base: base.to_string() });
        }
        Ok(Fibration { total, base })
    }

    pub fn identity(x: Obj) -> Self {
        Fibration { total: x.clone(), base: x }
    }

    pub fn total(&self) -> &Obj {
        &self.total
    }

    pub fn base(&self) -> &Obj {
        &self.base
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    /// `B × B ≅ B`.
    ProductCollapse,
    /// The diagonal `B_δ`, as an object over `B × B`, is `B`.
    DiagonalIdentification,
    /// `E × B` and `B × E` are the same object over `B × B`.
    ProductSymmetry,
    /// `C^C ≅ ⊤` for `C = E × B`, and the slice exponential is the slice
    /// terminal.
    ExponentTerminal,
    /// The object of weak equivalences is the terminal of the slice.
    WeqTerminal,
    /// The comparison map from `B_δ` is an isomorphism, hence (w).
    ComparisonIso,
}

impl Step {
    pub const ALL: [Step; 6] = [
        Step::ProductCollapse,
        Step::DiagonalIdentification,
        Step::ProductSymmetry,
        Step::ExponentTerminal,
        Step::WeqTerminal,
        Step::ComparisonIso,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub role: String,
    pub node: Node,
}

fn wit(role: &str, node: impl Into<Node>) -> Witness {
    Witness { role: role.to_string(), node: node.into() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateStep {
    pub step: Step,
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnivalenceCertificate {
    pub total: Obj,
    pub base: Obj,
    pub steps: Vec<CertificateStep>,
}

impl UnivalenceCertificate {
    pub fn is_valid(&self) -> bool {
        self.steps.len() == Step::ALL.len() && self.steps.iter().all(|s| s.holds)
    }

    pub fn first_failure(&self) -> Option<Step> {
        self.steps.iter().find(|s| !s.holds).map(|s| s.step)
    }
}

fn run_step(step: Step, e: &Obj, b: &Obj) -> CertificateStep {
    let bb = kernel::product(b, b);
    let eb = kernel::product(e, b);
    match step {
        Step::ProductCollapse => CertificateStep {
            step,
            holds: kernel::is_iso(&bb, b),
            witnesses: vec![wit("B", b.clone()), wit("B×B", bb)],
        },
        Step::DiagonalIdentification => CertificateStep {
            step,
            holds: kernel::arrow_exists(b, &bb) && kernel::is_iso(b, &bb),
            witnesses: vec![wit("B_δ", b.clone()), wit("B×B", bb)],
        },
        Step::ProductSymmetry => {
            let be = kernel::product(b, e);
            let holds = eb == be && kernel::arrow_exists(&eb, &bb);
            CertificateStep {
                step,
                holds,
                witnesses: vec![wit("E×B", eb), wit("B×E", be)],
            }
        }
        Step::ExponentTerminal => {
            let cc = vobj::exp_explicit(&eb, &eb);
            let sliced = vobj::exp_slice(&bb, &eb, &eb);
            let holds = kernel::is_iso(&cc, &terminal())
                && sliced.as_ref().is_ok_and(|s| kernel::is_iso(s, &bb));
            let mut witnesses = vec![wit("C", eb.clone()), wit("C^C", cc)];
            if let Ok(s) = sliced {
                witnesses.push(wit("C^C over B×B", s));
            }
            CertificateStep { step, holds, witnesses }
        }
        Step::WeqTerminal => {
            let weq = VObj::Wexp { a: bb.clone(), b: eb.clone(), c: eb.clone() };
            let holds = vobj::arrow_into_vobj(&bb, &weq)
                && vobj::arrow_from_vobj(&weq, &bb).unwrap_or(false);
            CertificateStep {
                step,
                holds,
                witnesses: vec![wit("weq", weq), wit("terminal of slice", bb)],
            }
        }
        Step::ComparisonIso => {
            let weq = VObj::Wexp { a: bb.clone(), b: eb.clone(), c: eb.clone() };
            let hom = vobj::exp_slice(&bb, &eb, &eb);
            let holds = match &hom {
                Ok(hom) => {
                    // B → weq → hom with B ≅ hom forces both legs to be isos
                    let into = vobj::arrow_into_vobj(b, &weq);
                    let onward = vobj::arrow_from_vobj(&weq, hom).unwrap_or(false);
                    let ends_iso = kernel::is_iso(b, hom);
                    let back = vobj::arrow_from_vobj(&weq, b).unwrap_or(false);
                    let weak = vobj::decide_label(&b.clone().into(), &weq.clone().into(), Label::W)
                        .unwrap_or(false);
                    into && onward && ends_iso && back && weak
                }
                Err(_) => false,
            };
            let mut witnesses = vec![wit("B_δ", b.clone()), wit("weq", weq)];
            if let Ok(h) = hom {
                witnesses.push(wit("Hom", h));
            }
            CertificateStep { step, holds, witnesses }
        }
    }
}

/// Builds the univalence certificate of a fibration. Every step is
/// computed; a failing step would indicate a bug in the deciders.
pub fn is_univalent(q: &Fibration) -> UnivalenceCertificate {
    UnivalenceCertificate {
        total: q.total.clone(),
        base: q.base.clone(),
        steps: Step::ALL.iter().map(|s| run_step(*s, &q.total, &q.base)).collect(),
    }
}

/// Recomputes every step of a certificate and compares.
pub fn recheck(cert: &UnivalenceCertificate) -> bool {
    cert.steps.len() == Step::ALL.len()
        && cert
            .steps
            .iter()
            .all(|s| run_step(s.step, &cert.total, &cert.base) == *s)
}

/// `⊥ —(wc)→ total`.
pub fn is_small(f: &Fibration) -> bool {
    kernel::label_w(&initial(), &f.total)
}

/// A finite subset of `x` contained in no member of `total`, if one exists.
/// One element of `x ∖ t` per member `t` suffices when no member contains `x`.
pub fn uncovered_finite_subset(x: &NSet, total: &Obj) -> Option<NSet> {
    if total.members().iter().any(|t| x.is_subset(t)) {
        return None;
    }
    Some(NSet::fin(total.members().iter().map(|t| {
        x.difference(t).min_element().expect("x is not contained in t")
    })))
}

/// p-smallness against `Ũ → ⊤` on a bare pair: `total ≅ Ũ × base`.
pub fn p_small_pair(total: &Obj, base: &Obj) -> bool {
    let uprod = VObj::Uprod { x: base.clone() };
    let into = vobj::arrow_into_vobj(total, &uprod);
    let back = base
        .members()
        .iter()
        .all(|x| uncovered_finite_subset(x, total).is_none());
    kernel::arrow_exists(base, &terminal()) && into && back
}

/// The universal fibration `Ũ → ⊤`.
pub fn universal_fibration() -> (Node, Obj) {
    (VObj::Utilde.into(), terminal())
}

fn is_utilde(node: &Node) -> bool {
    match node {
        Node::Virtual(VObj::Utilde) => true,
        Node::Virtual(VObj::Wc { x, y }) => *x == initial() && *y == terminal(),
        _ => false,
    }
}

pub fn is_p_small(f: &Fibration, p: &(Node, Obj)) -> Result<bool> {
    if !is_utilde(&p.0) || p.1 != terminal() {
        return Err(Error::UnsupportedUniversal(format!("{} → {}", p.0, p.1)));
    }
    Ok(p_small_pair(&f.total, &f.base))
}

/// A named fact about the universal fibration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fact {
    pub name: String,
    pub holds: bool,
}

/// `⊥ —(wc)→ Ũ —(f)→ ⊤`, and `Ũ` is neither `⊥` nor `⊤`.
pub fn universe_facts() -> Vec<Fact> {
    let u: Node = VObj::Utilde.into();
    let bot: Node = initial().into();
    let top: Node = terminal().into();
    let d = |a: &Node, b: &Node, l: Label| vobj::decide_label(a, b, l).unwrap_or(false);
    let iso = |a: &Node, b: &Node| d(a, b, Label::Arrow) && d(b, a, Label::Arrow);
    let facts = [
        ("⊥ —(wc)→ Ũ", d(&bot, &u, Label::W) && d(&bot, &u, Label::C)),
        ("Ũ —(f)→ ⊤", d(&u, &top, Label::F)),
        ("Ũ ≇ ⊥", !iso(&u, &bot)),
        ("Ũ ≇ ⊤", !iso(&u, &top)),
    ];
    facts
        .into_iter()
        .map(|(name, holds)| Fact { name: name.to_string(), holds })
        .collect()
}

/// Fibrations drawn from a universe: all fibration pairs among enumerated
/// objects, or seeded pairs `(iso variant of B, B)`.
pub fn fibrations(u: &Universe) -> Result<Vec<Fibration>> {
    match u.mode {
        Mode::Exhaustive => {
            let objs = harness::enumerate_objects(u)?;
            Ok(objs
                .iter()
                .flat_map(|e| objs.iter().filter_map(move |b| Fibration::new(e.clone(), b.clone()).ok()))
                .collect())
        }
        Mode::Sampled { count, seed } => {
            let mut s = harness::Sampler::new(u.window, u.include_cofinite, seed, 100);
            Ok((0..count)
                .map(|_| {
                    let b = s.object();
                    let e = s.variant(&b).normalize();
                    Fibration::new(e, b).expect("iso variants are fibrations")
                })
                .collect())
        }
    }
}

/// `is_small ⟺ is_p_small` over every fibration of the universe.
pub fn verify_universal(u: &Universe) -> Result<CheckResult> {
    let tuples: Vec<Vec<Family>> = fibrations(u)?
        .into_iter()
        .map(|f| vec![f.total.into(), f.base.into()])
        .collect();
    Ok(harness::run_instances(
        "UNIVERSAL_FIBRATION",
        &["total", "base"],
        *u,
        StarTemplate::Adopted,
        tuples,
        |t| {
            let (total, base) = (t[0].normalize(), t[1].normalize());
            let Ok(f) = Fibration::new(total, base) else {
                return Outcome::default();
            };
            let small = is_small(&f);
            let p_small = p_small_pair(&f.total, &f.base);
            Outcome {
                premises_held: true,
                violation: (small != p_small)
                    .then(|| format!("small={small} p-small={p_small}")),
            }
        },
    ))
}

/// Certificates for every fibration of the universe.
pub fn certify(u: &Universe) -> Result<Vec<UnivalenceCertificate>> {
    Ok(fibrations(u)?.iter().map(is_univalent).collect())
}
