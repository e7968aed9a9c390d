//! Label tracking in products of a fixed permutation with long cycles.
//!
//! For a permutation `D` on `[n]` and a designated label set `E`, this
//! module counts, over all `(n−1)!` long cycles `γ`, how many `E`-label-free
//! cycles the product `D ∘ γ` has (γ applied first). The maximum attained is
//! `θ(D, E)`.
//!
//! Puncturing replaces each `E`-label in `D`'s domain role by a fresh label
//! outside `[n]`, cutting every `E`-touching cycle into paths. This turns the
//! tracking question into the component-count statistics of a bijective
//! diagonal: the number of γ with exactly `j` E-free cycles equals
//! `W_{|E|+j}` of the punctured map's component-type.

use std::collections::BTreeMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::enumeration::{component_counts, factorial};
use crate::maps::{BijectiveMap, ComponentType, Label, LabelSet};
use crate::Error;

/// Above this `n`, exhaustive product sweeps require an explicit override.
pub const EXHAUSTIVE_LIMIT: u32 = 10;

/// A permutation `D` on `[n]` together with a tracked label set `E`,
/// `|E| ≥ 2`.
#[derive(Debug, Clone)]
pub struct TrackInstance {
    d: BijectiveMap,
    e: Vec<Label>,
    n: u32,
}

impl TrackInstance {
    pub fn new(d: BijectiveMap, e: impl IntoIterator<Item = Label>) -> Result<Self, Error> {
        if !d.is_permutation() {
            return Err(Error::InvalidInstance("D must be a permutation".into()));
        }
        let n = d.len() as u32;
        if d.domain() != LabelSet::one_to(n) {
            return Err(Error::InvalidInstance(format!("D must act on [{n}]")));
        }
        let mut e: Vec<Label> = e.into_iter().collect();
        e.sort_unstable();
        e.dedup();
        if e.len() < 2 {
            return Err(Error::InvalidInstance("|E| >= 2 required".into()));
        }
        if e.iter().any(|l| l.get() > n) {
            return Err(Error::InvalidInstance(format!("E must be a subset of [{n}]")));
        }
        Ok(TrackInstance { d, e, n })
    }

    pub fn d(&self) -> &BijectiveMap {
        &self.d
    }

    pub fn e(&self) -> &[Label] {
        &self.e
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn in_e(&self, l: Label) -> bool {
        self.e.binary_search(&l).is_ok()
    }

    /// The structural hypothesis: `D` has an `E`-free cycle of length > 1,
    /// or a cycle mixing `E`-labels with labels outside `E`.
    pub fn hypothesis(&self) -> bool {
        self.d.decompose().iter().any(|c| {
            let has_e = c.elements().iter().any(|&l| self.in_e(l));
            let has_other = c.elements().iter().any(|&l| !self.in_e(l));
            (!has_e && c.size() > 1) || (has_e && has_other)
        })
    }

    /// Replaces each `E`-label `a_i` in the domain role by the fresh label
    /// `n + i` (pairing in increasing order), producing a bijection
    /// `D': ([n] \ E) ∪ {n+1, ...} -> [n]` whose `E`-touching cycles have
    /// been cut into paths terminating at the `E`-labels.
    pub fn puncture(&self) -> BijectiveMap {
        let mut pairs = Vec::with_capacity(self.n as usize);
        for (x, y) in self.d.pairs() {
            if !self.in_e(x) {
                pairs.push((x, y));
            }
        }
        for (i, &a) in self.e.iter().enumerate() {
            let fresh = Label::new(self.n + i as u32 + 1);
            pairs.push((fresh, self.d.apply(a).expect("a in [n]")));
        }
        BijectiveMap::new(pairs).expect("puncturing preserves bijectivity")
    }

    pub fn punctured_type(&self) -> ComponentType {
        self.puncture().component_type()
    }

    /// `θ(D, E) = n − ℓ(μ) − |E|` read off the punctured component-type.
    pub fn theta(&self) -> u32 {
        let t = self.punctured_type();
        t.n() - t.num_cycles() - self.e.len() as u32
    }
}

/// The distribution of `E`-free cycle counts over all long cycles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrackReport {
    pub theta: u32,
    #[serde(serialize_with = "ser_histogram")]
    pub histogram: BTreeMap<u32, u64>,
    pub hypothesis_satisfied: bool,
}

fn ser_histogram<S: Serializer>(h: &BTreeMap<u32, u64>, s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(h.len()))?;
    for (k, v) in h {
        map.serialize_entry(&k.to_string(), v)?;
    }
    map.end()
}

/// All long cycles on `[n]` as `(1 a_2 ... a_n)`, in lexicographic order of
/// the tail.
pub fn long_cycles(n: u32) -> Vec<BijectiveMap> {
    if n == 1 {
        return vec![BijectiveMap::identity(1)];
    }
    (2..=n)
        .permutations(n as usize - 1)
        .map(|tail| {
            let cycle: Vec<u32> = std::iter::once(1).chain(tail).collect();
            let pairs = (0..cycle.len()).map(|i| {
                (
                    Label::new(cycle[i]),
                    Label::new(cycle[(i + 1) % cycle.len()]),
                )
            });
            BijectiveMap::new(pairs).expect("a long cycle is a permutation")
        })
        .collect()
}

/// Enumerates all `(n−1)!` products `D ∘ γ` and histograms their `E`-free
/// cycle counts. `force` lifts the exhaustive size guard.
pub fn track_counts(inst: &TrackInstance, force: bool) -> Result<TrackReport, Error> {
    let n = inst.n();
    if n > EXHAUSTIVE_LIMIT && !force {
        return Err(Error::LimitExceeded { n, limit: EXHAUSTIVE_LIMIT });
    }
    let nn = n as usize;
    let mut dvec = vec![0u32; nn + 1];
    for (x, y) in inst.d().pairs() {
        dvec[x.get() as usize] = y.get();
    }
    let in_e: Vec<bool> = (0..=nn)
        .map(|v| v >= 1 && inst.in_e(Label::new(v as u32)))
        .collect();

    // γ is the cycle (1 a_2 ... a_n); count E-free cycles of D ∘ γ.
    let count_for = |cycle: &[u32], gamma: &mut [u32], visited: &mut [bool]| -> u32 {
        let len = cycle.len();
        for i in 0..len {
            gamma[cycle[i] as usize] = cycle[(i + 1) % len];
        }
        visited.fill(false);
        let mut free = 0u32;
        for start in 1..=len {
            if visited[start] {
                continue;
            }
            let mut cur = start as u32;
            let mut e_free = true;
            loop {
                visited[cur as usize] = true;
                if in_e[cur as usize] {
                    e_free = false;
                }
                cur = dvec[gamma[cur as usize] as usize];
                if cur as usize == start {
                    break;
                }
            }
            if e_free {
                free += 1;
            }
        }
        free
    };

    let histogram: BTreeMap<u32, u64> = if n == 1 {
        let mut gamma = vec![0u32; 2];
        let mut visited = vec![false; 2];
        BTreeMap::from([(count_for(&[1], &mut gamma, &mut visited), 1)])
    } else {
        (2..=n)
            .into_par_iter()
            .map(|second| {
                let tail: Vec<u32> = (2..=n).filter(|&v| v != second).collect();
                let mut gamma = vec![0u32; nn + 1];
                let mut visited = vec![false; nn + 1];
                let mut local: BTreeMap<u32, u64> = BTreeMap::new();
                let mut cycle = Vec::with_capacity(nn);
                if tail.is_empty() {
                    cycle.extend([1, second]);
                    *local.entry(count_for(&cycle, &mut gamma, &mut visited)).or_insert(0) += 1;
                    return local;
                }
                for perm in tail.iter().copied().permutations(tail.len()) {
                    cycle.clear();
                    cycle.push(1);
                    cycle.push(second);
                    cycle.extend(perm);
                    *local.entry(count_for(&cycle, &mut gamma, &mut visited)).or_insert(0) += 1;
                }
                local
            })
            .reduce(BTreeMap::new, |mut acc, local| {
                for (k, v) in local {
                    *acc.entry(k).or_insert(0) += v;
                }
                acc
            })
    };

    let theta = *histogram.keys().last().expect("histogram is nonempty");
    Ok(TrackReport {
        theta,
        histogram,
        hypothesis_satisfied: inst.hypothesis(),
    })
}

/// One representative permutation per cycle type of `[n]`: cycles filled
/// with consecutive labels, largest part first.
pub fn cycle_type_representatives(n: u32) -> Vec<BijectiveMap> {
    crate::maps::partitions(n)
        .into_iter()
        .map(|parts| {
            let mut pairs = Vec::with_capacity(n as usize);
            let mut next = 1u32;
            for part in parts {
                let cycle: Vec<u32> = (next..next + part).collect();
                next += part;
                for i in 0..cycle.len() {
                    pairs.push((
                        Label::new(cycle[i]),
                        Label::new(cycle[(i + 1) % cycle.len()]),
                    ));
                }
            }
            BijectiveMap::new(pairs).expect("cycles partition [n]")
        })
        .collect()
}

/// Cross-validation of the tracking histogram against the punctured map's
/// component-count table, plus the hypothesis/type-condition equivalence and
/// the `θ−1` vs `θ` inequality.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionReport {
    pub d: String,
    pub e: Vec<u32>,
    #[serde(serialize_with = "ser_ptype")]
    pub punctured_type: ComponentType,
    pub report: TrackReport,
    /// `2 ≤ ℓ(λ) < n − ℓ(μ)` for the punctured type.
    pub type_condition: bool,
    pub mismatches: Vec<String>,
    /// `histogram[θ−1] ≥ ½·histogram[θ]`, when the hypothesis holds.
    pub inequality_ok: Option<bool>,
}

fn ser_ptype<S: Serializer>(t: &ComponentType, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

impl ReductionReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty() && self.inequality_ok != Some(false)
    }
}

/// Checks, for one instance, that the γ-side histogram matches the array-side
/// counts `W_{|E|+j}` computed over the punctured diagonal itself (anchor 1),
/// and records the hypothesis equivalence and the tracking inequality.
pub fn verify_reduction(inst: &TrackInstance, force: bool) -> Result<ReductionReport, Error> {
    let report = track_counts(inst, force)?;
    let punctured = inst.puncture();
    let ptype = punctured.component_type();
    let n = inst.n();
    let num_e = inst.e().len() as u32;
    let mut mismatches = Vec::new();

    let counts = component_counts(&punctured, Label::new(1))?;
    let max_j = report.theta.max(counts.keys().last().map(|&k| k as u32).unwrap_or(0));
    for j in 0..=max_j {
        let lhs = report.histogram.get(&j).copied().unwrap_or(0);
        let rhs = counts.get(&((num_e + j) as usize)).copied().unwrap_or(0);
        if lhs != rhs {
            mismatches.push(format!(
                "histogram[{j}] = {lhs} but W_{} = {rhs}",
                num_e + j
            ));
        }
    }

    if ptype.num_paths() != num_e {
        mismatches.push(format!(
            "punctured type {ptype} has {} paths, expected |E| = {num_e}",
            ptype.num_paths()
        ));
    }
    let type_condition = 2 <= ptype.num_paths() && ptype.num_paths() < n - ptype.num_cycles();
    if report.hypothesis_satisfied != type_condition {
        mismatches.push(format!(
            "hypothesis {} but type condition {} for {ptype}",
            report.hypothesis_satisfied, type_condition
        ));
    }
    let theta_formula = inst.theta();
    if theta_formula != report.theta {
        mismatches.push(format!(
            "theta formula gives {theta_formula}, histogram attains {}",
            report.theta
        ));
    }
    let total: u64 = report.histogram.values().sum();
    if total != factorial(n as u64 - 1) {
        mismatches.push(format!("histogram sums to {total}, expected (n-1)!"));
    }

    let inequality_ok = if report.hypothesis_satisfied {
        let at_theta = report.histogram.get(&report.theta).copied().unwrap_or(0);
        let below = report
            .theta
            .checked_sub(1)
            .and_then(|j| report.histogram.get(&j).copied())
            .unwrap_or(0);
        Some(2 * below >= at_theta)
    } else {
        None
    };

    Ok(ReductionReport {
        d: inst.d().to_string(),
        e: inst.e().iter().map(|l| l.get()).collect(),
        punctured_type: ptype,
        report,
        type_condition,
        mismatches,
        inequality_ok,
    })
}
