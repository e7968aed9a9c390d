//! Exhaustive enumeration of two-row arrays over a fixed diagonal, the
//! component-count tables `W_k`, and the verification sweeps built on them.
//!
//! For a diagonal `D: B -> A` of component-type `(λ, μ) ⊨ n` and an anchor
//! `x ∈ A`, every one of the `(n−1)!` top rows starting with `x` determines
//! exactly one array, so `Σ_k W_k = (n−1)!`. The table depends only on the
//! component-type, which is what makes a single canonical representative per
//! type sufficient.
//!
//! Enumeration is embarrassingly parallel over the choice of the top-row
//! element next to the anchor; counts are merged by addition, so results do
//! not depend on the worker count.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::arrays::TwoRowArray;
use crate::maps::{types_of, BijectiveMap, ComponentType, Label};
use crate::Error;

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Yields every array with diagonal `d` and anchor `x`, with its vertical
/// component count, in lexicographic top-row order. `(n−1)!` items.
pub fn enumerate_arrays<'a>(
    d: &'a BijectiveMap,
    x: Label,
) -> Result<impl Iterator<Item = (TwoRowArray, usize)> + 'a, Error> {
    let a: Vec<Label> = d.codomain().iter().collect();
    if !a.contains(&x) {
        return Err(Error::Precondition(format!("anchor {x} not in A")));
    }
    let rest: Vec<Label> = a.iter().copied().filter(|&l| l != x).collect();
    let len = rest.len();
    let kernel = CountKernel::new(d);
    let mut scratch = kernel.scratch();
    let iter = rest.into_iter().permutations(len).map(move |perm| {
            let top: Vec<Label> = std::iter::once(x).chain(perm).collect();
            let raw: Vec<u32> = top.iter().map(|l| l.get()).collect();
            let count = kernel.count(&raw, &mut scratch);
            let psi = TwoRowArray::from_top_and_diagonal(top, d).expect("top is a permutation of A");
            (psi, count)
        });
    Ok(iter)
}

/// Dense component counter for verticals induced by a fixed diagonal.
///
/// Labels are small integers, so maps become flat arrays and the count of a
/// single top row is a handful of pointer-free walks.
pub(crate) struct CountKernel {
    n: usize,
    max_label: usize,
    /// `dinv[a] = D⁻¹(a)` for `a ∈ A`.
    dinv: Vec<u32>,
    in_a: Vec<bool>,
    a_labels: Vec<u32>,
    /// `A \ B`: the starting ends of the vertical's paths.
    path_starts: Vec<u32>,
}

pub(crate) struct CountScratch {
    fmap: Vec<u32>,
    visited: Vec<u32>,
    generation: u32,
}

impl CountKernel {
    pub(crate) fn new(d: &BijectiveMap) -> Self {
        let a = d.codomain();
        let b = d.domain();
        let max_label = a
            .iter()
            .chain(b.iter())
            .map(|l| l.get() as usize)
            .max()
            .expect("maps are nonempty");
        let mut dinv = vec![0u32; max_label + 1];
        let mut in_a = vec![false; max_label + 1];
        for l in a.iter() {
            in_a[l.get() as usize] = true;
            dinv[l.get() as usize] = d.invert(l).expect("l in codomain").get();
        }
        CountKernel {
            n: a.len(),
            max_label,
            dinv,
            in_a,
            a_labels: a.iter().map(|l| l.get()).collect(),
            path_starts: a.difference(&b).iter().map(|l| l.get()).collect(),
        }
    }

    pub(crate) fn scratch(&self) -> CountScratch {
        CountScratch {
            fmap: vec![0; self.max_label + 1],
            visited: vec![0; self.max_label + 1],
            generation: 0,
        }
    }

    /// Component count of the vertical induced by `top` (labels as raw u32).
    pub(crate) fn count(&self, top: &[u32], scratch: &mut CountScratch) -> usize {
        debug_assert_eq!(top.len(), self.n);
        scratch.generation += 1;
        let generation = scratch.generation;
        for i in 0..self.n {
            scratch.fmap[top[i] as usize] = self.dinv[top[(i + 1) % self.n] as usize];
        }
        let mut comps = 0;
        for &start in &self.path_starts {
            comps += 1;
            let mut cur = start;
            loop {
                scratch.visited[cur as usize] = generation;
                let next = scratch.fmap[cur as usize];
                if self.in_a[next as usize] {
                    cur = next;
                } else {
                    break;
                }
            }
        }
        for &x in &self.a_labels {
            if scratch.visited[x as usize] == generation {
                continue;
            }
            comps += 1;
            let mut cur = x;
            while scratch.visited[cur as usize] != generation {
                scratch.visited[cur as usize] = generation;
                cur = scratch.fmap[cur as usize];
            }
        }
        comps
    }
}

/// Component-count histogram over all `(n−1)!` arrays: `k → |T_k(d, x)|`.
/// Work is split over the element placed next to the anchor.
pub fn component_counts(d: &BijectiveMap, x: Label) -> Result<BTreeMap<usize, u64>, Error> {
    let a: Vec<Label> = d.codomain().iter().collect();
    if !a.contains(&x) {
        return Err(Error::Precondition(format!("anchor {x} not in A")));
    }
    let rest: Vec<u32> = a.iter().map(|l| l.get()).filter(|&v| v != x.get()).collect();
    let kernel = CountKernel::new(d);
    if rest.is_empty() {
        let mut counts = BTreeMap::new();
        counts.insert(kernel.count(&[x.get()], &mut kernel.scratch()), 1);
        return Ok(counts);
    }
    let counts = rest
        .par_iter()
        .map(|&second| {
            let tail: Vec<u32> = rest.iter().copied().filter(|&v| v != second).collect();
            let mut scratch = kernel.scratch();
            let mut local: BTreeMap<usize, u64> = BTreeMap::new();
            let mut top = Vec::with_capacity(kernel.n);
            if tail.is_empty() {
                top.clear();
                top.extend([x.get(), second]);
                *local.entry(kernel.count(&top, &mut scratch)).or_insert(0) += 1;
                return local;
            }
            for perm in tail.iter().copied().permutations(tail.len()) {
                top.clear();
                top.push(x.get());
                top.push(second);
                top.extend(perm);
                *local.entry(kernel.count(&top, &mut scratch)).or_insert(0) += 1;
            }
            local
        })
        .reduce(BTreeMap::new, |mut acc, local| {
            for (k, v) in local {
                *acc.entry(k).or_insert(0) += v;
            }
            acc
        });
    Ok(counts)
}

/// The counts `W_k^{λ,μ}` for one component-type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WTable {
    #[serde(rename = "type", serialize_with = "ser_type")]
    pub ctype: ComponentType,
    pub n: u32,
    #[serde(serialize_with = "ser_counts")]
    pub counts: BTreeMap<usize, u64>,
}

fn ser_type<S: Serializer>(t: &ComponentType, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

fn ser_counts<S: Serializer>(c: &BTreeMap<usize, u64>, s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(c.len()))?;
    for (k, v) in c {
        map.serialize_entry(&k.to_string(), v)?;
    }
    map.end()
}

impl WTable {
    pub fn count(&self, k: usize) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Largest `k` with `W_k > 0`.
    pub fn max_attained(&self) -> usize {
        *self.counts.keys().last().expect("some count is positive")
    }
}

/// Computes the `W` table for a component-type from its canonical
/// representative with anchor 1.
pub fn w_table(t: &ComponentType) -> Result<WTable, Error> {
    let d = t.canonical_map();
    let counts = component_counts(&d, Label::new(1))?;
    Ok(WTable { ctype: t.clone(), n: t.n(), counts })
}

/// A reduced fraction of exact counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactRatio(pub Ratio<u64>);

impl ExactRatio {
    pub fn new(num: u64, den: u64) -> Self {
        ExactRatio(Ratio::new(num, den))
    }
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for ExactRatio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// One row of the main-inequality sweep.
#[derive(Debug, Clone, Serialize)]
pub struct Thm31Entry {
    #[serde(rename = "type", serialize_with = "ser_type")]
    pub ctype: ComponentType,
    pub n: u32,
    /// `n − ℓ(μ)`, the maximum component count.
    pub k_max: u32,
    pub w_max: u64,
    pub w_prev: u64,
    /// `W_{k_max−1} / W_{k_max}`.
    pub ratio: ExactRatio,
    pub holds: bool,
    /// Equality case `W_{k_max−1} = ½ W_{k_max}`.
    pub sharp: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Thm31Report {
    pub n_max: u32,
    pub entries: Vec<Thm31Entry>,
    pub violations: usize,
    pub sharp_witnesses: usize,
}

/// Verifies `W_{n−ℓ(μ)−1} ≥ ½ W_{n−ℓ(μ)}` over every `(λ,μ) ⊨ n ≤ n_max`
/// with `2 ≤ ℓ(λ) < n−ℓ(μ)`. Violations become report entries, not panics.
pub fn verify_theorem31(n_max: u32) -> Result<Thm31Report, Error> {
    let mut jobs = Vec::new();
    for n in 3..=n_max {
        for t in types_of(n, 2) {
            if t.num_paths() < n - t.num_cycles() {
                jobs.push(t);
            }
        }
    }
    let entries: Vec<Thm31Entry> = jobs
        .par_iter()
        .map(|t| {
            let table = w_table(t)?;
            let n = t.n();
            let k_max = n - t.num_cycles();
            let w_max = table.count(k_max as usize);
            let w_prev = table.count(k_max as usize - 1);
            Ok(Thm31Entry {
                ctype: t.clone(),
                n,
                k_max,
                w_max,
                w_prev,
                ratio: ExactRatio::new(w_prev, w_max),
                holds: 2 * w_prev >= w_max,
                sharp: 2 * w_prev == w_max,
            })
        })
        .collect::<Result<_, Error>>()?;
    let violations = entries.iter().filter(|e| !e.holds).count();
    let sharp_witnesses = entries.iter().filter(|e| e.sharp).count();
    Ok(Thm31Report { n_max, entries, violations, sharp_witnesses })
}

/// One consecutive-count ratio `W_k / W_{k+1}`.
#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    #[serde(rename = "type", serialize_with = "ser_type")]
    pub ctype: ComponentType,
    pub n: u32,
    pub k: u32,
    pub w_k: u64,
    pub w_k1: u64,
    pub ratio: ExactRatio,
    /// The conjectured bound is only stated for `n > 6`; small-n rows are
    /// reported but flagged.
    pub below_threshold: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureScan {
    pub n_max: u32,
    pub entries: Vec<RatioReport>,
    /// `(type, k)` pairs where `W_{k+1} = 0` leaves the ratio undefined.
    #[serde(serialize_with = "ser_undefined")]
    pub undefined: Vec<(ComponentType, u32)>,
    #[serde(serialize_with = "ser_min_map")]
    pub min_per_n: BTreeMap<u32, ExactRatio>,
    pub overall_min: Option<ExactRatio>,
}

fn ser_undefined<S: Serializer>(u: &[(ComponentType, u32)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(u.iter().map(|(t, k)| format!("{t} k={k}")))
}

fn ser_min_map<S: Serializer>(m: &BTreeMap<u32, ExactRatio>, s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(&k.to_string(), v)?;
    }
    map.end()
}

/// Collects the exact ratios `W_k / W_{k+1}` for every type with
/// `ℓ(λ) ≥ 2` and every `k ≥ ℓ(λ)` with `W_{k+1} > 0`, plus per-`n` and
/// overall minima — evidence about the conjectured constant, with no
/// pass/fail judgment.
pub fn scan_conjecture(n_max: u32) -> Result<ConjectureScan, Error> {
    let mut jobs = Vec::new();
    for n in 2..=n_max {
        jobs.extend(types_of(n, 2));
    }
    let tables: Vec<WTable> = jobs
        .par_iter()
        .map(w_table)
        .collect::<Result<_, Error>>()?;
    let mut entries = Vec::new();
    let mut undefined = Vec::new();
    for table in &tables {
        let t = &table.ctype;
        let k_hi = table.max_attained() as u32;
        for k in t.num_paths()..k_hi {
            let w_k = table.count(k as usize);
            let w_k1 = table.count(k as usize + 1);
            if w_k1 == 0 {
                undefined.push((t.clone(), k));
                continue;
            }
            entries.push(RatioReport {
                ctype: t.clone(),
                n: t.n(),
                k,
                w_k,
                w_k1,
                ratio: ExactRatio::new(w_k, w_k1),
                below_threshold: t.n() <= 6,
            });
        }
    }
    let mut min_per_n: BTreeMap<u32, ExactRatio> = BTreeMap::new();
    for e in &entries {
        min_per_n
            .entry(e.n)
            .and_modify(|m| {
                if e.ratio < *m {
                    *m = e.ratio;
                }
            })
            .or_insert(e.ratio);
    }
    let overall_min = min_per_n.values().min().copied();
    Ok(ConjectureScan { n_max, entries, undefined, min_per_n, overall_min })
}
