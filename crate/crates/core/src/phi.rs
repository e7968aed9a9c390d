//! The ≤2-to-1 collapse map on two-row arrays.
//!
//! Fix a diagonal `D: B -> A` of component-type `(λ, μ)` with
//! `2 ≤ ℓ(λ) < n − ℓ(μ)`, where the designated labels 1 and 2 are path
//! terminating ends of `D` (so path starting ends of every vertical).
//! For an array whose vertical has the maximum `n − ℓ(μ)` components, the
//! transposition determined by 1, 2 and the `<_s`-minimal cycle element `m`
//! merges two paths and a cycle into two components, producing an array with
//! one component fewer. Every array downstairs has at most two preimages —
//! one per case of the relative top-row order of 2 and `m` — which yields
//! `W_{n-ℓ(μ)-1} ≥ ½ · W_{n-ℓ(μ)}`.
//!
//! Two preimage finders are provided: [`preimages_direct`] reconstructs
//! candidates from the case characterizations and verifies each by a forward
//! application, while [`preimages_oracle`] brute-forces the whole fiber.

use std::collections::BTreeMap;

use crate::arrays::{Triple, TwoRowArray};
use crate::enumeration::enumerate_arrays;
use crate::maps::{BijectiveMap, ComponentKind, ComponentType, Label};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiCaseTag {
    /// `1 <_s 2 <_s m` upstairs.
    CaseI,
    /// `1 <_s m <_s 2` upstairs.
    CaseII,
}

/// Which case fired, the cycle element `m` used, and the transposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhiCase {
    pub tag: PhiCaseTag,
    pub m: Label,
    pub triple: Triple,
}

fn two() -> Label {
    Label::new(2)
}

fn one() -> Label {
    Label::new(1)
}

/// Checks that `d` admits the collapse map and that `psi` has the given
/// diagonal, anchor 1, and path starts 1 and 2. Returns `(n, max components)`.
fn check_setting(psi: &TwoRowArray, d: &BijectiveMap) -> Result<(u32, usize), Error> {
    let t: ComponentType = d.component_type();
    let n = t.n();
    let l_lam = t.num_paths();
    let l_mu = t.num_cycles();
    if l_lam < 2 || l_lam >= n - l_mu {
        return Err(Error::Precondition(format!(
            "diagonal type {t} needs 2 <= l(lambda) < n - l(mu)"
        )));
    }
    let a = d.codomain();
    let b = d.domain();
    let a_minus_b = a.difference(&b);
    if !a_minus_b.contains(one()) || !a_minus_b.contains(two()) {
        return Err(Error::Precondition(
            "labels 1 and 2 must be path terminating ends of the diagonal".into(),
        ));
    }
    if psi.anchor() != one() {
        return Err(Error::Precondition("array anchor must be 1".into()));
    }
    if psi.diagonal() != *d {
        return Err(Error::Precondition("array diagonal does not match".into()));
    }
    Ok((n, (n - l_mu) as usize))
}

/// Applies the collapse map to an array with the maximum component count.
pub fn phi(psi: &TwoRowArray, d: &BijectiveMap) -> Result<(TwoRowArray, PhiCase), Error> {
    let (_, max_comps) = check_setting(psi, d)?;
    let comps = psi.vertical().decompose();
    if comps.len() != max_comps {
        return Err(Error::Precondition(format!(
            "vertical has {} components, expected the maximum {max_comps}",
            comps.len()
        )));
    }
    // the <_s-minimal element over all cycles of the vertical
    let m = comps
        .iter()
        .filter(|c| c.kind() == ComponentKind::Cycle)
        .flat_map(|c| c.elements().iter().copied())
        .min_by_key(|&e| psi.position(e).expect("cycle elements sit in the top row"))
        .ok_or_else(|| Error::Precondition("vertical has no cycle".into()))?;
    let p2 = psi.position(two())?;
    let pm = psi.position(m)?;
    let triple = Triple::new(1, p2.min(pm), p2.max(pm))?;
    let tag = if p2 < pm { PhiCaseTag::CaseI } else { PhiCaseTag::CaseII };
    let out = psi.transpose(triple)?;
    debug_assert_eq!(out.component_count(), max_comps - 1);
    Ok((out, PhiCase { tag, m, triple }))
}

/// Walks the vertical's path starting at `from`, yielding the elements after
/// `from` that still lie in the top row (i.e. in `A`).
fn path_tail(psi: &TwoRowArray, f: &BijectiveMap, from: Label) -> Vec<Label> {
    let mut tail = Vec::new();
    let mut cur = from;
    while let Some(next) = f.apply(cur) {
        if psi.position(next).is_err() {
            break; // terminating end in B \ A
        }
        tail.push(next);
        cur = next;
    }
    tail
}

/// Finds the preimages of `psi2` under the collapse map from the case
/// characterizations, verifying every candidate by a forward application.
/// Returns 0, 1 or 2 arrays, sorted.
pub fn preimages_direct(psi2: &TwoRowArray, d: &BijectiveMap) -> Result<Vec<TwoRowArray>, Error> {
    let (_, max_comps) = check_setting(psi2, d)?;
    let f2 = psi2.vertical();
    let comps = f2.decompose();
    if comps.len() != max_comps - 1 {
        return Err(Error::Precondition(format!(
            "vertical has {} components, expected {}",
            comps.len(),
            max_comps - 1
        )));
    }
    let pos = |l: Label| psi2.position(l);
    let p2 = pos(two())?;
    let cycle_elems: Vec<Label> = comps
        .iter()
        .filter(|c| c.kind() == ComponentKind::Cycle)
        .flat_map(|c| c.elements().iter().copied())
        .collect();
    let cycle_pos: Vec<usize> = cycle_elems
        .iter()
        .map(|&e| pos(e).expect("cycle elements sit in the top row"))
        .collect();

    let mut found: Vec<TwoRowArray> = Vec::new();
    let mut verify_and_push = |triple: Triple| -> Result<(), Error> {
        let candidate = psi2.transpose(triple)?;
        match phi(&candidate, d) {
            Ok((image, _)) if image == *psi2 && !found.contains(&candidate) => {
                found.push(candidate)
            }
            _ => {}
        }
        Ok(())
    };

    // Case (i): only possible when every cycle element exceeds 2 in <_{s'};
    // its m is the first element walking the path forward from 2 that is
    // <_{s'}-smaller than 2.
    if cycle_pos.iter().all(|&p| p > p2) {
        if let Some(m) = path_tail(psi2, &f2, two())
            .into_iter()
            .find(|&e| pos(e).expect("path tail stays in the top row") < p2)
        {
            let pm = pos(m)?;
            if pm >= 1 && pm < p2 {
                verify_and_push(Triple::new(1, pm, p2)?)?;
            }
        }
    }

    // Case (ii): scan the path of 1 in path order for the first m whose shape
    // fits — m beyond 2 in <_{s'}, with every earlier path element and every
    // cycle element either before 2 or after m.
    let one_tail = path_tail(psi2, &f2, one());
    for (idx, &m) in one_tail.iter().enumerate() {
        let pm = pos(m)?;
        if pm <= p2 {
            continue;
        }
        let between_ok = one_tail[..idx]
            .iter()
            .all(|&e| {
                let pe = pos(e).expect("path tail stays in the top row");
                pe < p2 || pe > pm
            });
        let cycles_ok = cycle_pos.iter().all(|&p| p < p2 || p > pm);
        if between_ok && cycles_ok {
            verify_and_push(Triple::new(1, p2, pm)?)?;
        }
    }

    found.sort();
    Ok(found)
}

/// Brute-force preimage finder: enumerates every array upstairs and keeps
/// those the collapse map sends to `psi2`. Independent of
/// [`preimages_direct`]; the two must always agree.
pub fn preimages_oracle(psi2: &TwoRowArray, d: &BijectiveMap) -> Result<Vec<TwoRowArray>, Error> {
    let (_, max_comps) = check_setting(psi2, d)?;
    let mut found = Vec::new();
    for (candidate, count) in enumerate_arrays(d, one())? {
        if count != max_comps {
            continue;
        }
        let (image, _) = phi(&candidate, d)?;
        if image == *psi2 {
            found.push(candidate);
        }
    }
    found.sort();
    Ok(found)
}

/// Groups every maximum-count array by its image: the full fiber structure
/// of the collapse map for one diagonal. Keys are the arrays downstairs.
pub fn fibers(d: &BijectiveMap) -> Result<BTreeMap<TwoRowArray, Vec<TwoRowArray>>, Error> {
    let t = d.component_type();
    let max_comps = (t.n() - t.num_cycles()) as usize;
    let mut map: BTreeMap<TwoRowArray, Vec<TwoRowArray>> = BTreeMap::new();
    for (psi, count) in enumerate_arrays(d, one())? {
        if count != max_comps {
            continue;
        }
        let (image, _) = phi(&psi, d)?;
        map.entry(image).or_default().push(psi);
    }
    for pres in map.values_mut() {
        pres.sort();
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture_d() -> BijectiveMap {
        "5->2;6->1;(3 4)".parse().unwrap()
    }

    fn arr(s: &str) -> TwoRowArray {
        s.parse().unwrap()
    }

    #[test]
    fn phi_on_fixture_case_i() {
        let d = fixture_d();
        let (out, case) = phi(&arr("1 2 3 4 / 5 4 3 6"), &d).unwrap();
        assert_eq!(out.to_string(), "1 3 2 4 / 4 5 3 6");
        assert_eq!(case.tag, PhiCaseTag::CaseI);
        assert_eq!(case.m, Label::new(3));
    }

    #[test]
    fn phi_on_fixture_case_ii() {
        let d = fixture_d();
        let (out, case) = phi(&arr("1 3 4 2 / 4 3 5 6"), &d).unwrap();
        assert_eq!(out.to_string(), "1 4 2 3 / 3 5 4 6");
        assert_eq!(case.tag, PhiCaseTag::CaseII);
        assert_eq!(case.m, Label::new(3));
    }

    #[test]
    fn phi_covers_all_fixture_arrays() {
        // the four maximum-count arrays map onto the two below, 2-to-1
        let d = fixture_d();
        let fib = fibers(&d).unwrap();
        assert_eq!(fib.len(), 2);
        for (image, pres) in &fib {
            assert_eq!(pres.len(), 2, "image {image}");
        }
    }

    #[test]
    fn phi_rejects_non_maximal_vertical() {
        let d = fixture_d();
        // a T_2 array is below the maximum count 3
        assert!(phi(&arr("1 3 2 4 / 4 5 3 6"), &d).is_err());
    }

    #[test]
    fn phi_rejects_wrong_anchor() {
        let d = fixture_d();
        let psi = TwoRowArray::from_top_and_diagonal([2, 1, 3, 4].map(Label::new), &d).unwrap();
        assert!(phi(&psi, &d).is_err());
    }

    #[test]
    fn preimages_direct_fixture() {
        let d = fixture_d();
        let pres = preimages_direct(&arr("1 3 2 4 / 4 5 3 6"), &d).unwrap();
        let printed: Vec<String> = pres.iter().map(|p| p.to_string()).collect();
        assert_eq!(printed, vec!["1 2 3 4 / 5 4 3 6", "1 4 3 2 / 3 4 5 6"]);

        let pres = preimages_direct(&arr("1 4 2 3 / 3 5 4 6"), &d).unwrap();
        let printed: Vec<String> = pres.iter().map(|p| p.to_string()).collect();
        assert_eq!(printed, vec!["1 2 4 3 / 5 3 4 6", "1 3 4 2 / 4 3 5 6"]);
    }

    #[test]
    fn direct_agrees_with_oracle_on_fixture() {
        let d = fixture_d();
        for s in ["1 3 2 4 / 4 5 3 6", "1 4 2 3 / 3 5 4 6"] {
            let psi2 = arr(s);
            assert_eq!(
                preimages_direct(&psi2, &d).unwrap(),
                preimages_oracle(&psi2, &d).unwrap()
            );
        }
    }

    #[test]
    fn empty_fiber_for_arrays_outside_image() {
        // type ((2,2),()) on n=4: check every array downstairs through both
        // finders; any array missing from the forward image must come back
        // empty from both.
        let t: ComponentType = "L=2,2;M=-".parse().unwrap();
        let d = t.canonical_map();
        let fib = fibers(&d).unwrap();
        let max_comps = (t.n() - t.num_cycles()) as usize;
        for (psi2, count) in enumerate_arrays(&d, Label::new(1)).unwrap() {
            if count != max_comps - 1 {
                continue;
            }
            let direct = preimages_direct(&psi2, &d).unwrap();
            let oracle = preimages_oracle(&psi2, &d).unwrap();
            assert_eq!(direct, oracle, "psi2 {psi2}");
            match fib.get(&psi2) {
                Some(pres) => assert_eq!(&direct, pres),
                None => assert!(direct.is_empty()),
            }
        }
    }
}
