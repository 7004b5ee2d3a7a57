#![allow(dead_code)]

use qtnc_core::harness::{enumerate_objects, Universe};
use qtnc_core::{NSet, Obj};

pub fn fin(v: &[u64]) -> NSet {
    NSet::fin(v.iter().copied())
}

pub fn cofin(v: &[u64]) -> NSet {
    NSet::cofin(v.iter().copied())
}

pub fn obj(ms: &[NSet]) -> Obj {
    Obj::normalize(ms.to_vec())
}

/// Every set with support inside `0..n`, finite and cofinite, including ∅
/// and ℕ.
pub fn all_sets(n: u32) -> Vec<NSet> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let s: Vec<u64> = (0..n).filter(|i| mask & (1 << i) != 0).map(u64::from).collect();
        out.push(NSet::fin(s.clone()));
        out.push(NSet::cofin(s));
    }
    out
}

/// Window model: bits `0..n` for membership plus a tail bit standing for
/// every element `≥ n`. Exact for sets whose support lies inside `0..n`.
pub fn model(s: &NSet, n: u32) -> (u32, bool) {
    let bits = (0..n).filter(|i| s.contains(u64::from(*i))).fold(0, |acc, i| acc | (1 << i));
    (bits, !s.is_finite())
}

pub fn objects(window: u32, cofinite: bool) -> Vec<Obj> {
    enumerate_objects(&Universe::exhaustive(window, cofinite)).unwrap()
}
