//! Virtual objects: infinite families described by decision rules.
//!
//! The factorization middle `X_wc`, the universe `Ũ`, the product `Ũ × X`
//! and the weak exponential `(C^B_w)/A` are infinite families of sets. They
//! are never materialized. Each kind answers the arrow queries that are
//! decidable for it in closed form, and every other query is rejected with
//! [`Error::UndecidedPair`].
//!
//! The factorization family for an arrow `X → Y` is
//!
//! ```text
//! X_wc = { s : s ⊆ y and |s ∖ x| < ℵ0 for some x ∈ X, y ∈ Y }
//! ```
//!
//! It is downward closed, contains every `x ∈ X`, and every member differs
//! from a member of `X` by finitely many points.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{self, initial, terminal, LabelVerdict, Obj};
use crate::nset::NSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "vkind", rename_all = "snake_case")]
pub enum VObj {
    /// Middle object of the (wc)-(f) factorization of `x → y`.
    Wc { x: Obj, y: Obj },
    /// All finite subsets of ℕ; the factorization middle of `⊥ → ⊤`.
    Utilde,
    /// Exponential `c^b`.
    Exp { b: Obj, c: Obj },
    /// Exponential in the slice over `a`.
    ExpSlice { a: Obj, b: Obj, c: Obj },
    /// Weak exponential `(c^b_w)/a`.
    Wexp { a: Obj, b: Obj, c: Obj },
    /// The product `Ũ × x`.
    Uprod { x: Obj },
}

impl VObj {
    pub fn wc(x: Obj, y: Obj) -> Self {
        VObj::Wc { x, y }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            VObj::Wc { .. } => "wc",
            VObj::Utilde => "utilde",
            VObj::Exp { .. } => "exp",
            VObj::ExpSlice { .. } => "exp_slice",
            VObj::Wexp { .. } => "wexp",
            VObj::Uprod { .. } => "uprod",
        }
    }

    /// The `(X, Y)` pair when this is a factorization family. `Ũ` is the
    /// factorization of `⊥ → ⊤` and `Ũ × X` that of `⊥ → X`.
    pub fn wc_parts(&self) -> Option<(Obj, Obj)> {
        match self {
            VObj::Wc { x, y } => Some((x.clone(), y.clone())),
            VObj::Utilde => Some((initial(), terminal())),
            VObj::Uprod { x } => Some((initial(), x.clone())),
            _ => None,
        }
    }

    /// Explicit object isomorphic to this one, for the kinds that have one.
    pub fn explicit_form(&self) -> Option<Result<Obj>> {
        match self {
            VObj::Exp { b, c } => Some(Ok(exp_explicit(b, c))),
            VObj::ExpSlice { a, b, c } => Some(exp_slice(a, b, c)),
            _ => None,
        }
    }

    /// Whether some member of this family contains `s`.
    pub fn covers(&self, s: &NSet) -> Result<bool> {
        match self.wc_parts() {
            Some((x, y)) => Ok(wc_covers(&x, &y, s)),
            None => Err(Error::WrongKind { expected: "wc", got: self.to_string() }),
        }
    }
}

impl fmt::Display for VObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VObj::Wc { x, y } => write!(f, "X_wc[{x} → {y}]"),
            VObj::Utilde => f.write_str("Ũ"),
            VObj::Exp { b, c } => write!(f, "({c})^({b})"),
            VObj::ExpSlice { a, b, c } => write!(f, "({c})^({b}) / {a}"),
            VObj::Wexp { a, b, c } => write!(f, "({c})^({b})_w / {a}"),
            VObj::Uprod { x } => write!(f, "Ũ × {x}"),
        }
    }
}

/// Either an explicit family or a virtual one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Node {
    Virtual(VObj),
    Explicit(Obj),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Virtual(v) => v.fmt(f),
            Node::Explicit(o) => o.fmt(f),
        }
    }
}

impl From<Obj> for Node {
    fn from(o: Obj) -> Self {
        Node::Explicit(o)
    }
}

impl From<VObj> for Node {
    fn from(v: VObj) -> Self {
        Node::Virtual(v)
    }
}

/// `s ∈ X_wc`: some `x ∈ X`, `y ∈ Y` with `s ⊆ y` and `s ∖ x` finite.
pub fn wc_covers(x: &Obj, y: &Obj, s: &NSet) -> bool {
    y.members().iter().any(|ym| s.is_subset(ym))
        && x.members().iter().any(|xm| s.almost_subset(xm))
}

/// The fibration condition for `X_wc → T`.
///
/// Members of `X_wc` are contained in `(x ∩ y) ∪ F` for finite `F ⊆ y`.
/// Eliminating the quantifiers over `F` and over the finite `b ⊆ t` leaves:
/// for all `x, y, t` there are `x', y'` with `t ⊆ y'` and
/// `(x ∩ y ∩ t) ∖ x'` finite.
pub fn wc_fibration_condition<T>(x: &Obj, y: &Obj, t: &T) -> bool
where
    T: AsRef<[NSet]> + ?Sized,
{
    let targets = t.as_ref();
    x.members().iter().all(|xm| {
        y.members().iter().all(|ym| {
            let core = xm.intersect(ym);
            targets.iter().all(|tm| {
                let inner = core.intersect(tm);
                y.members().iter().any(|y2| tm.is_subset(y2))
                    && x.members().iter().any(|x2| inner.almost_subset(x2))
            })
        })
    })
}

/// `Ũ → Y` holds exactly when `ℕ` is a member of `Y`: otherwise one missing
/// element per member gives a finite set nothing covers.
pub fn arrow_from_utilde<Y>(y: &Y) -> bool
where
    Y: AsRef<[NSet]> + ?Sized,
{
    y.as_ref().iter().any(NSet::is_naturals)
}

/// `Z → V`.
pub fn arrow_into_vobj<Z>(z: &Z, v: &VObj) -> bool
where
    Z: AsRef<[NSet]> + ?Sized,
{
    let zs = z.as_ref();
    match v {
        VObj::Wc { .. } | VObj::Utilde | VObj::Uprod { .. } => {
            let (x, y) = v.wc_parts().expect("factorization kind");
            zs.iter().all(|s| wc_covers(&x, &y, s))
        }
        VObj::Exp { b, c } => kernel::arrow_exists(&kernel::product(z, b), c),
        VObj::ExpSlice { a, b, c } => {
            kernel::arrow_exists(z, a) && kernel::arrow_exists(&kernel::product(z, b), c)
        }
        // The union of all Z' with Z'×B —(w)→ Z'×C is downward closed and
        // its members are exactly the s with wexp_member(B, C, s).
        VObj::Wexp { a, b, c } => {
            kernel::arrow_exists(z, a) && zs.iter().all(|s| wexp_member(b, c, s))
        }
    }
}

fn undecided(from: impl fmt::Display, to: impl fmt::Display) -> Error {
    Error::UndecidedPair { from: from.to_string(), to: to.to_string() }
}

/// `V → T`.
pub fn arrow_from_vobj(v: &VObj, t: &Obj) -> Result<bool> {
    if let Some((_, y)) = v.wc_parts() {
        return Ok(kernel::arrow_exists(&y, t));
    }
    if let Some(explicit) = v.explicit_form() {
        return Ok(kernel::arrow_exists(&explicit?, t));
    }
    match v {
        VObj::Wexp { a, .. } if kernel::arrow_exists(a, t) => Ok(true),
        _ => Err(undecided(v, t)),
    }
}

/// `V →* T`.
pub fn star_from_vobj(v: &VObj, t: &Obj) -> Result<bool> {
    if let Some((x, y)) = v.wc_parts() {
        return Ok(kernel::star_arrow(&kernel::product(&x, &y), t));
    }
    if let Some(explicit) = v.explicit_form() {
        return Ok(kernel::star_arrow(&explicit?, t));
    }
    match v {
        VObj::Wexp { a, .. } if kernel::arrow_exists(a, t) => Ok(true),
        _ => Err(undecided(v, t)),
    }
}

/// `E →* V`.
pub fn star_into_vobj(e: &Obj, v: &VObj) -> Result<bool> {
    if let Some((x, y)) = v.wc_parts() {
        return Ok(kernel::star_arrow(e, &kernel::product(&x, &y)));
    }
    if let Some(explicit) = v.explicit_form() {
        return Ok(kernel::star_arrow(e, &explicit?));
    }
    if arrow_into_vobj(e, v) {
        return Ok(true);
    }
    Err(undecided(e, v))
}

/// Which single predicate to decide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Arrow,
    Star,
    W,
    F,
    C,
}

impl Label {
    pub fn of(self, v: &LabelVerdict) -> bool {
        match self {
            Label::Arrow => v.arrow,
            Label::Star => v.star,
            Label::W => v.w,
            Label::F => v.f,
            Label::C => v.c,
        }
    }
}

fn reduce(node: &Node) -> Option<Result<Obj>> {
    match node {
        Node::Explicit(o) => Some(Ok(o.clone())),
        Node::Virtual(v) => v.explicit_form(),
    }
}

/// Decides one predicate between two nodes, short-circuiting so that an
/// absent arrow answers (w), (f) and (c) without consulting undecidable
/// parts.
pub fn decide_label(from: &Node, to: &Node, label: Label) -> Result<bool> {
    if let (Some(a), Some(b)) = (reduce(from), reduce(to)) {
        let (a, b) = (a?, b?);
        let arrow = match (from, to) {
            (Node::Explicit(e), Node::Virtual(v)) => arrow_into_vobj(e, v),
            _ => kernel::arrow_exists(&a, &b),
        };
        return Ok(match label {
            Label::Arrow | Label::C => arrow,
            Label::Star => kernel::star_arrow(&a, &b),
            Label::W => arrow && kernel::star_arrow(&b, &a),
            Label::F => arrow && kernel::fibration_gap(&a, &b).is_none(),
        });
    }
    match (from, to) {
        (Node::Explicit(e), Node::Virtual(v)) => {
            let arrow = arrow_into_vobj(e, v);
            match label {
                Label::Arrow | Label::C => Ok(arrow),
                Label::Star => star_into_vobj(e, v),
                Label::W => Ok(arrow && star_from_vobj(v, e)?),
                // finite source: the condition reduces to V → E
                Label::F => Ok(arrow && arrow_from_vobj(v, e)?),
            }
        }
        (Node::Virtual(v), Node::Explicit(t)) => {
            let arrow = arrow_from_vobj(v, t)?;
            match label {
                Label::Arrow | Label::C => Ok(arrow),
                Label::Star => star_from_vobj(v, t),
                Label::W => Ok(arrow && star_into_vobj(t, v)?),
                Label::F => match v.wc_parts() {
                    Some((x, y)) => Ok(arrow && wc_fibration_condition(&x, &y, t)),
                    None if !arrow => Ok(false),
                    None => Err(undecided(v, t)),
                },
            }
        }
        _ => Err(undecided(from, to)),
    }
}

/// Full verdict between two nodes; fails if any predicate is undecided.
pub fn decide(from: &Node, to: &Node) -> Result<LabelVerdict> {
    Ok(LabelVerdict {
        arrow: decide_label(from, to, Label::Arrow)?,
        star: decide_label(from, to, Label::Star)?,
        w: decide_label(from, to, Label::W)?,
        f: decide_label(from, to, Label::F)?,
        c: decide_label(from, to, Label::C)?,
    })
}

/// The exponential `C^B` as an explicit object.
///
/// Members are `⋂_{b∈B} (c_{φ(b)} ∪ ∁b)` over choice functions `φ: B → C`.
/// The intersection is built one `b` at a time and normalized after each
/// step, which keeps intermediate families as small as the final antichain.
pub fn exp_explicit<B, C>(b: &B, c: &C) -> Obj
where
    B: AsRef<[NSet]> + ?Sized,
    C: AsRef<[NSet]> + ?Sized,
{
    let mut acc = vec![NSet::naturals()];
    for bm in b.as_ref().iter().filter(|m| !m.is_empty()) {
        let outside = bm.complement();
        let options: Vec<NSet> = c.as_ref().iter().map(|cm| cm.union(&outside)).collect();
        let next = Obj::normalize(
            acc.iter()
                .flat_map(|s| options.iter().map(move |o| s.intersect(o))),
        );
        acc = next.members().to_vec();
    }
    Obj::normalize(acc)
}

/// The exponential in the slice over `A`: `C^B × A`.
pub fn exp_slice(a: &Obj, b: &Obj, c: &Obj) -> Result<Obj> {
    for o in [b, c] {
        if !kernel::arrow_exists(o, a) {
            return Err(Error::NotInSlice { object: o.to_string(), base: a.to_string() });
        }
    }
    Ok(kernel::product(&exp_explicit(b, c), a))
}

/// `{s} × B —(w)→ {s} × C`, the pointwise membership test for the weak
/// exponential.
pub fn wexp_member<B, C>(b: &B, c: &C, s: &NSet) -> bool
where
    B: AsRef<[NSet]> + ?Sized,
    C: AsRef<[NSet]> + ?Sized,
{
    let point = Obj::singleton(s.clone());
    kernel::label_w(&kernel::product(&point, b), &kernel::product(&point, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(v: &[u64]) -> NSet {
        NSet::fin(v.iter().copied())
    }
    fn cofin(v: &[u64]) -> NSet {
        NSet::cofin(v.iter().copied())
    }
    fn obj(ms: &[NSet]) -> Obj {
        Obj::normalize(ms.to_vec())
    }

    #[test]
    fn wc_covers_examples() {
        let u = VObj::Utilde;
        assert!(u.covers(&fin(&[0, 5])).unwrap());
        assert!(!u.covers(&cofin(&[3])).unwrap());
        let x = terminal();
        for y in [terminal(), obj(&[NSet::naturals(), fin(&[0])])] {
            assert!(kernel::arrow_exists(&x, &y));
            assert!(wc_covers(&x, &y, &NSet::naturals()));
        }
    }

    #[test]
    fn covers_rejects_other_kinds() {
        let v = VObj::Exp { b: terminal(), c: terminal() };
        assert!(matches!(v.covers(&NSet::empty()), Err(Error::WrongKind { .. })));
    }

    #[test]
    fn utilde_agrees_with_its_factorization_form() {
        let wc = VObj::wc(initial(), terminal());
        for s in [fin(&[]), fin(&[2, 9]), cofin(&[]), cofin(&[1])] {
            assert_eq!(VObj::Utilde.covers(&s).unwrap(), wc.covers(&s).unwrap());
        }
    }

    #[test]
    fn arrow_into_examples() {
        assert!(arrow_into_vobj(&obj(&[fin(&[0, 1])]), &VObj::Utilde));
        assert!(!arrow_into_vobj(&terminal(), &VObj::Utilde));
        for b in [initial(), terminal(), obj(&[fin(&[0]), cofin(&[1])])] {
            assert!(arrow_into_vobj(&terminal(), &VObj::Exp { b: b.clone(), c: b }));
        }
    }

    #[test]
    fn arrow_from_utilde_examples() {
        assert!(arrow_from_utilde(&terminal()));
        assert!(!arrow_from_utilde(&obj(&[fin(&[0, 1, 2])])));
        assert!(!arrow_from_utilde(&obj(&[cofin(&[7])])));
        assert_eq!(arrow_from_vobj(&VObj::Utilde, &obj(&[cofin(&[7])])), Ok(false));
    }

    #[test]
    fn exp_examples() {
        let b = obj(&[fin(&[0])]);
        let c = obj(&[fin(&[1])]);
        assert_eq!(exp_explicit(&b, &c), obj(&[cofin(&[0])]));
        assert_eq!(exp_explicit(&b, &b), terminal());
        assert_eq!(exp_explicit(&initial(), &c), terminal());
    }

    #[test]
    fn exp_slice_examples() {
        let b = obj(&[fin(&[0]), cofin(&[3])]);
        let c = obj(&[fin(&[1])]);
        assert_eq!(exp_slice(&terminal(), &b, &c).unwrap(), exp_explicit(&b, &c));
        let a = obj(&[fin(&[0, 1])]);
        assert!(kernel::is_iso(&exp_slice(&a, &a, &a).unwrap(), &a));
        let bc = obj(&[fin(&[0])]);
        assert_eq!(exp_slice(&a, &bc, &bc).unwrap(), a);
    }

    #[test]
    fn exp_slice_rejects_objects_outside_slice() {
        let a = obj(&[fin(&[0])]);
        let err = exp_slice(&a, &obj(&[fin(&[1])]), &a).unwrap_err();
        assert!(matches!(err, Error::NotInSlice { .. }));
    }

    #[test]
    fn wexp_member_examples() {
        let b = obj(&[fin(&[0]), cofin(&[2])]);
        let c = obj(&[fin(&[1])]);
        for s in [fin(&[0]), cofin(&[1]), NSet::naturals()] {
            assert!(wexp_member(&b, &b, &s));
        }
        assert!(wexp_member(&b, &c, &NSet::empty()));
        assert!(!wexp_member(&obj(&[fin(&[0])]), &initial(), &NSet::naturals()));
    }

    #[test]
    fn factorization_facts_on_a_case_where_the_naive_family_overshoots() {
        // {0} ∪ {1} would be a member of the naive family, which has no
        // arrow into Y; the downward-closed family does.
        let x = obj(&[fin(&[0])]);
        let y = obj(&[fin(&[0]), fin(&[1])]);
        let wc: Node = VObj::wc(x.clone(), y.clone()).into();
        assert!(!wc_covers(&x, &y, &fin(&[0, 1])));
        let xv = decide(&x.clone().into(), &wc).unwrap();
        assert!(xv.w && xv.c);
        let yv = decide(&wc, &y.into()).unwrap();
        assert!(yv.arrow && yv.f);
    }

    #[test]
    fn factorization_with_cofinite_members() {
        let x = obj(&[cofin(&[0])]);
        let y = obj(&[cofin(&[0]), cofin(&[1])]);
        let wc: Node = VObj::wc(x.clone(), y.clone()).into();
        assert!(wc_covers(&x, &y, &cofin(&[1])));
        assert!(decide_label(&x.into(), &wc, Label::W).unwrap());
        assert!(decide_label(&wc, &y.into(), Label::F).unwrap());
    }

    #[test]
    fn utilde_is_a_fibration_over_terminal() {
        let u: Node = VObj::Utilde.into();
        assert!(decide_label(&u, &terminal().into(), Label::F).unwrap());
        assert!(decide_label(&initial().into(), &u, Label::W).unwrap());
        assert!(!decide_label(&u, &initial().into(), Label::Arrow).unwrap());
        assert!(!decide_label(&terminal().into(), &u, Label::Arrow).unwrap());
    }

    #[test]
    fn virtual_pairs_are_undecided() {
        let u: Node = VObj::Utilde.into();
        let w: Node = VObj::Wexp { a: terminal(), b: terminal(), c: initial() }.into();
        assert!(matches!(decide(&u, &w), Err(Error::UndecidedPair { .. })));
        // WEXP → T needs A → T
        assert!(matches!(
            decide_label(&w, &initial().into(), Label::Arrow),
            Err(Error::UndecidedPair { .. })
        ));
        assert_eq!(decide_label(&w, &terminal().into(), Label::Arrow), Ok(true));
    }

    #[test]
    fn reducible_pairs_are_decided() {
        let b = obj(&[fin(&[0])]);
        let e1: Node = VObj::Exp { b: b.clone(), c: b.clone() }.into();
        let e2: Node = terminal().into();
        let v = decide(&e1, &e2).unwrap();
        assert!(v.arrow && v.w && v.f);
    }

    #[test]
    fn vobj_json_shapes() {
        let v: VObj = serde_json::from_str(r#"{"vkind":"utilde"}"#).unwrap();
        assert_eq!(v, VObj::Utilde);
        let v: VObj = serde_json::from_str(
            r#"{"vkind":"wc","x":{"members":[]},"y":{"members":[{"cofin":[]}]}}"#,
        )
        .unwrap();
        assert_eq!(v, VObj::wc(initial(), terminal()));
        let n: Node = serde_json::from_str(r#"{"members":[{"fin":[1]}]}"#).unwrap();
        assert_eq!(n, Node::Explicit(obj(&[fin(&[1])])));
        let n: Node = serde_json::from_str(
            r#"{"vkind":"wexp","a":{"members":[]},"b":{"members":[]},"c":{"members":[]}}"#,
        )
        .unwrap();
        assert!(matches!(n, Node::Virtual(VObj::Wexp { .. })));
    }
}
