//! Exhaustive small-n scans of the transposition action: the diagonal is
//! invariant, the vertical moves at exactly three points, untouched
//! components carry over, and the merge/split component-count changes hold
//! in every arrangement, not just the ones worked out by hand.

use std::collections::BTreeSet;

use rayon::prelude::*;
use tworow::{
    classify_transposition, enumerate_arrays, types_of, Component, ComponentKind, Label,
    SpreadCase, Triple, TwoRowArray,
};

fn triples(n: usize) -> Vec<Triple> {
    let mut out = Vec::new();
    for k in 2..=n.saturating_sub(1) {
        for j in 1..k {
            for i in 1..=j {
                out.push(Triple::new(i, j, k).unwrap());
            }
        }
    }
    out
}

fn elem_set(c: &Component) -> BTreeSet<Label> {
    c.elements().iter().copied().collect()
}

#[test]
fn transposition_action_exhaustive_small_n() {
    let mut jobs = Vec::new();
    for n in 3..=6u32 {
        for t in types_of(n, 0) {
            jobs.push(t);
        }
    }
    jobs.par_iter().for_each(|t| {
        let d = t.canonical_map();
        let n = t.n() as usize;
        let hs = triples(n);
        for (psi, _) in enumerate_arrays(&d, Label::new(1)).unwrap() {
            let f = psi.vertical();
            let comps = f.decompose();
            for &h in &hs {
                let out = psi.transpose(h).unwrap();
                // diagonal and anchor invariant, top a permutation of A
                assert_eq!(out.diagonal(), d, "psi {psi} h {h}");
                assert_eq!(out.anchor(), psi.anchor());
                let mut sorted = out.top().to_vec();
                sorted.sort();
                let mut orig = psi.top().to_vec();
                orig.sort();
                assert_eq!(sorted, orig);

                // vertical differs exactly at s_{i-1}, s_j, s_k
                let moved: BTreeSet<Label> = [
                    psi.top()[h.i() - 1],
                    psi.top()[h.j()],
                    psi.top()[h.k()],
                ]
                .into_iter()
                .collect();
                let g = out.vertical();
                for (x, y) in f.pairs() {
                    if moved.contains(&x) {
                        continue;
                    }
                    assert_eq!(g.apply(x), Some(y), "psi {psi} h {h} moved {x}");
                }

                // components not touching the three elements are carried over
                let new_comps = g.decompose();
                for c in &comps {
                    if c.elements().iter().any(|e| moved.contains(e)) {
                        continue;
                    }
                    assert!(new_comps.contains(c), "psi {psi} h {h} lost {c}");
                }

                // round trip
                assert_eq!(out.transpose(h.inverse()).unwrap(), psi);

                // merge/split counts per arrangement
                let eff = classify_transposition(&psi, h).unwrap();
                match eff.case {
                    SpreadCase::ThreeComponents { paths: 2, cycles: 1 } => {
                        assert_eq!(eff.delta, -1, "psi {psi} h {h}")
                    }
                    SpreadCase::ThreeComponents { paths: 0, cycles: 3 } => {
                        assert_eq!(eff.delta, -2, "psi {psi} h {h}")
                    }
                    SpreadCase::SamePath { split_order: true } => {
                        assert_eq!(eff.delta, 2, "psi {psi} h {h}");
                        check_split_components(&psi, h, &out);
                    }
                    _ => {}
                }
            }
        }
    });
}

/// For the splitting arrangement, the path breaks into exactly the three
/// displayed components: the prefix re-glued to the tail after `s_j`, the
/// cycle on `s_j` and the segment after `s_k`, and the cycle on `s_k` and
/// the segment after `s_{i-1}`.
fn check_split_components(psi: &TwoRowArray, h: Triple, out: &TwoRowArray) {
    let s_im1 = psi.top()[h.i() - 1];
    let s_j = psi.top()[h.j()];
    let s_k = psi.top()[h.k()];
    let comps = psi.vertical().decompose();
    let path = comps
        .iter()
        .find(|c| c.kind() == ComponentKind::Path && c.contains(s_im1))
        .expect("split case lives on a path");
    let elems = path.elements();
    let at = |l: Label| elems.iter().position(|&e| e == l).unwrap();
    let (p_im1, p_k, p_j) = (at(s_im1), at(s_k), at(s_j));
    assert!(p_im1 < p_k && p_k < p_j);

    let expect_path: BTreeSet<Label> = elems[..=p_im1]
        .iter()
        .chain(&elems[p_j + 1..])
        .copied()
        .collect();
    let expect_cycle_j: BTreeSet<Label> = elems[p_j..p_j + 1]
        .iter()
        .chain(&elems[p_k + 1..p_j])
        .copied()
        .collect();
    let expect_cycle_k: BTreeSet<Label> = elems[p_k..p_k + 1]
        .iter()
        .chain(&elems[p_im1 + 1..p_k])
        .copied()
        .collect();

    let new_comps = out.vertical().decompose();
    let find = |set: &BTreeSet<Label>, kind: ComponentKind| {
        new_comps
            .iter()
            .any(|c| c.kind() == kind && elem_set(c) == *set)
    };
    assert!(find(&expect_path, ComponentKind::Path), "psi {psi} h {h}");
    assert!(find(&expect_cycle_j, ComponentKind::Cycle), "psi {psi} h {h}");
    assert!(find(&expect_cycle_k, ComponentKind::Cycle), "psi {psi} h {h}");
}

#[test]
fn triple_identity_exhaustive_small_n() {
    // diagonal ∘ vertical = long cycle of the top row, for every array
    for n in 1..=7u32 {
        for t in types_of(n, 0).into_iter().step_by(1) {
            let d = t.canonical_map();
            for (psi, _) in enumerate_arrays(&d, Label::new(1)).unwrap() {
                assert_eq!(
                    psi.diagonal().compose(&psi.vertical()).unwrap(),
                    psi.top_cycle(),
                    "psi {psi}"
                );
            }
        }
    }
}
