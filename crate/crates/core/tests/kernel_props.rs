mod common;

use common::{cofin, fin, obj, objects};
use proptest::prelude::*;
use qtnc_core::harness::{iso_variants, Sampler};
use qtnc_core::kernel::{self, initial, terminal, StarTemplate};
use qtnc_core::{Family, NSet, Obj};

/// Definitional fibration condition over families supported in `0..n`.
/// Finite `b ⊆ y` range over subsets of `y ∩ 0..=n`; element `n` stands in
/// for any element beyond the window, which no member can tell apart.
fn f_condition_oracle(x: &[NSet], y: &[NSet], n: u64) -> bool {
    let empty = NSet::empty();
    x.iter().chain(std::iter::once(&empty)).all(|src| {
        y.iter().all(|tgt| {
            let pool: Vec<u64> = (0..=n).filter(|i| tgt.contains(*i)).collect();
            (0u32..(1 << pool.len())).all(|mask| {
                let b = NSet::fin(
                    pool.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, v)| *v),
                );
                let need = src.intersect(tgt).union(&b);
                x.iter().any(|c| need.is_subset(c))
            })
        })
    })
}

fn arrow_oracle(x: &[NSet], y: &[NSet]) -> bool {
    x.iter().all(|a| y.iter().any(|b| a.is_subset(b)))
}

fn star_oracle(x: &[NSet], y: &[NSet]) -> bool {
    x.iter().all(|a| y.iter().any(|b| a.difference(b).is_finite()))
}

#[test]
fn label_f_matches_definition_on_cofinite_window() {
    let objs = objects(2, true);
    assert_eq!(objs.len(), 19);
    for x in &objs {
        for y in &objs {
            let expect = arrow_oracle(x.members(), y.members())
                && f_condition_oracle(x.members(), y.members(), 2);
            assert_eq!(kernel::label_f(x, y), expect, "{x} → {y}");
        }
    }
}

#[test]
fn three_fibration_deciders_agree() {
    for (w, cof) in [(3, false), (2, true)] {
        let objs = objects(w, cof);
        for x in &objs {
            for y in &objs {
                let gap = kernel::fibration_gap(x, y);
                let reduced = kernel::fibration_condition_reduced(x, y);
                assert_eq!(gap.is_none(), reduced, "{x} → {y}");
                if let Some(g) = &gap {
                    assert!(kernel::gap_is_genuine(x, g), "{x} → {y}: {g:?}");
                }
                match kernel::fibration_condition_exhaustive(x, y) {
                    Some(e) => assert_eq!(e, reduced, "{x} → {y}"),
                    None => assert!(cof),
                }
            }
        }
    }
}

#[test]
fn labels_match_definitions() {
    let objs = objects(2, true);
    for x in &objs {
        for y in &objs {
            let v = kernel::decide(x, y);
            assert_eq!(v.arrow, arrow_oracle(x.members(), y.members()));
            assert_eq!(v.star, star_oracle(x.members(), y.members()));
            assert_eq!(v.w, v.arrow && star_oracle(y.members(), x.members()));
            assert_eq!(v.c, v.arrow);
            assert!(!v.f || v.arrow);
            assert!(!v.w || v.arrow);
        }
    }
}

#[test]
fn posetal_preorder() {
    let objs = objects(2, true);
    for x in &objs {
        assert!(kernel::arrow_exists(x, x));
        assert!(kernel::label_f(x, x) && kernel::label_w(x, x));
        for y in &objs {
            assert_eq!(
                kernel::arrow_exists(x, y) && kernel::arrow_exists(y, x),
                x == y,
                "canonical forms are unique up to iso"
            );
            for z in &objs {
                if kernel::arrow_exists(x, y) && kernel::arrow_exists(y, z) {
                    assert!(kernel::arrow_exists(x, z));
                }
            }
        }
    }
}

#[test]
fn initial_and_terminal() {
    for x in objects(2, true) {
        assert!(kernel::arrow_exists(&initial(), &x));
        assert!(kernel::arrow_exists(&x, &terminal()));
        if x != initial() {
            assert!(!kernel::label_f(&initial(), &x), "⊥ → {x} is not (f)");
        }
    }
}

#[test]
fn fibrations_between_explicit_objects_are_isos() {
    let objs = objects(2, true);
    for x in &objs {
        for y in &objs {
            assert_eq!(kernel::label_f(x, y), kernel::is_iso(x, y), "{x} → {y}");
        }
    }
}

#[test]
fn product_and_coproduct_are_meet_and_join() {
    let objs = objects(2, true);
    for a in &objs {
        for b in &objs {
            let p = kernel::product(a, b);
            let s = kernel::coproduct(a, b);
            assert!(kernel::arrow_exists(&p, a) && kernel::arrow_exists(&p, b));
            assert!(kernel::arrow_exists(a, &s) && kernel::arrow_exists(b, &s));
            let meets: Vec<NSet> = a
                .members()
                .iter()
                .flat_map(|x| b.members().iter().map(move |y| x.intersect(y)))
                .collect();
            assert!(kernel::is_iso(&p, &Family::new(meets)));
            for t in &objs {
                let into_both = kernel::arrow_exists(t, a) && kernel::arrow_exists(t, b);
                assert_eq!(kernel::arrow_exists(t, &p), into_both);
                let out_of_both = kernel::arrow_exists(a, t) && kernel::arrow_exists(b, t);
                assert_eq!(kernel::arrow_exists(&s, t), out_of_both);
            }
        }
    }
}

#[test]
fn iso_variants_are_isos_and_preserve_labels() {
    let objs = objects(2, true);
    for x in &objs {
        for vx in iso_variants(x) {
            assert!(kernel::is_iso(&vx, x));
            assert_eq!(vx.normalize(), *x);
            for y in &objs {
                assert_eq!(kernel::decide(&vx, y), kernel::decide(x, y));
                assert_eq!(kernel::decide(y, &vx), kernel::decide(y, x));
            }
        }
    }
}

#[test]
fn literal_star_is_vacuous_on_canonical_objects() {
    let objs = objects(2, true);
    for x in &objs {
        for y in &objs {
            assert!(kernel::star_arrow_with(StarTemplate::Literal, x, y));
        }
    }
    let a = Family::new(vec![NSet::empty(), NSet::naturals()]);
    let b = Family::new(vec![NSet::naturals()]);
    assert!(kernel::is_iso(&a, &b));
    assert!(!kernel::star_arrow_with(StarTemplate::Literal, &a, &b));
    assert!(kernel::star_arrow_with(StarTemplate::Literal, &b, &b));
}

#[test]
fn documented_examples() {
    let x = obj(&[fin(&[0])]);
    assert!(kernel::label_w(&initial(), &x));
    assert!(kernel::label_c(&initial(), &x));
    assert!(!kernel::label_f(&initial(), &x));
    let y = obj(&[cofin(&[0])]);
    assert!(kernel::star_arrow(&terminal(), &y));
    assert!(kernel::label_w(&y, &terminal()));
    assert!(!kernel::label_w(&initial(), &y));
}

fn sampled_obj() -> impl Strategy<Value = Obj> {
    (any::<u64>(), 0u64..1000).prop_map(|(seed, stream)| Sampler::new(4, true, seed, stream).object())
}

proptest! {
    #[test]
    fn normalize_is_idempotent_and_keeps_empty(x in sampled_obj()) {
        prop_assert_eq!(Obj::normalize(x.members().to_vec()), x.clone());
        prop_assert!(x.members().contains(&NSet::empty()));
        for a in x.nonempty_members() {
            for b in x.nonempty_members() {
                prop_assert!(a == b || !a.is_subset(b), "antichain");
            }
        }
    }

    #[test]
    fn sampled_labels_match_definitions(x in sampled_obj(), y in sampled_obj()) {
        let v = kernel::decide(&x, &y);
        prop_assert_eq!(v.arrow, arrow_oracle(x.members(), y.members()));
        prop_assert_eq!(v.star, star_oracle(x.members(), y.members()));
        let f = v.arrow && f_condition_oracle(x.members(), y.members(), 4);
        prop_assert_eq!(v.f, f);
    }

    #[test]
    fn obj_json_round_trip(x in sampled_obj()) {
        let text = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<Obj>(&text).unwrap(), x);
    }
}
