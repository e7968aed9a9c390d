//! Labels, bijective maps between label sets, and their functional graphs.
//!
//! A bijection `f: A -> B` between equal-size finite label sets induces a
//! directed graph on `A ∪ B` with an edge `x -> f(x)`. Its components are
//! directed cycles (inside `A ∩ B`) and directed paths (from `A \ B` to
//! `B \ A`). The multiset of component sizes, split into path sizes `λ` and
//! cycle sizes `μ`, is the component-type `(λ, μ) ⊨ n` — the analogue of the
//! cycle-type of a permutation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

/// A positive integer label. Labels above `n` are used as the auxiliary
/// out-of-`[n]` endpoints produced by puncturing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(u32);

impl Label {
    /// Creates a label. Panics on zero; labels are 1-based.
    pub fn new(value: u32) -> Self {
        assert!(value >= 1, "labels are positive integers");
        Label(value)
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let v: u32 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid label `{s}`")))?;
        if v == 0 {
            return Err(Error::Parse("labels are positive integers".into()));
        }
        Ok(Label(v))
    }
}

/// A finite, duplicate-free set of labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSet(BTreeSet<Label>);

impl LabelSet {
    pub fn new(members: impl IntoIterator<Item = Label>) -> Self {
        LabelSet(members.into_iter().collect())
    }

    /// `{1, ..., n}`.
    pub fn one_to(n: u32) -> Self {
        LabelSet((1..=n).map(Label::new).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, l: Label) -> bool {
        self.0.contains(&l)
    }

    pub fn iter(&self) -> impl Iterator<Item = Label> + '_ {
        self.0.iter().copied()
    }

    pub fn difference(&self, other: &LabelSet) -> LabelSet {
        LabelSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &LabelSet) -> LabelSet {
        LabelSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn union(&self, other: &LabelSet) -> LabelSet {
        LabelSet(self.0.union(&other.0).copied().collect())
    }
}

impl FromIterator<Label> for LabelSet {
    fn from_iter<T: IntoIterator<Item = Label>>(iter: T) -> Self {
        LabelSet(iter.into_iter().collect())
    }
}

/// A bijection between two equal-size label sets, stored with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectiveMap {
    forward: BTreeMap<Label, Label>,
    inverse: BTreeMap<Label, Label>,
}

impl BijectiveMap {
    pub fn new(pairs: impl IntoIterator<Item = (Label, Label)>) -> Result<Self, Error> {
        let mut forward = BTreeMap::new();
        let mut inverse = BTreeMap::new();
        for (x, y) in pairs {
            if forward.insert(x, y).is_some() {
                return Err(Error::InvalidMap(format!("duplicate domain element {x}")));
            }
            if inverse.insert(y, x).is_some() {
                return Err(Error::InvalidMap(format!("codomain element {y} hit twice")));
            }
        }
        if forward.is_empty() {
            return Err(Error::InvalidMap("empty map".into()));
        }
        Ok(BijectiveMap { forward, inverse })
    }

    /// The identity permutation on `[n]`.
    pub fn identity(n: u32) -> Self {
        BijectiveMap::new((1..=n).map(|v| (Label::new(v), Label::new(v)))).expect("valid")
    }

    /// Parses disjoint cycle notation for a permutation on `[n]`, e.g.
    /// `(1 2)(3 4)`. Every label in `1..=n` (n = the largest label seen)
    /// must appear exactly once; fixed points are written as `(5)`.
    pub fn from_cycle_notation(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let mut cycles: Vec<Vec<Label>> = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let rest2 = rest.trim_start();
            if rest2.is_empty() {
                break;
            }
            if !rest2.starts_with('(') {
                return Err(Error::Parse(format!("expected `(` in cycle notation `{s}`")));
            }
            let close = rest2
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced `(` in `{s}`")))?;
            let inner = &rest2[1..close];
            let cycle: Vec<Label> = inner
                .split_whitespace()
                .map(|t| t.parse())
                .collect::<Result<_, _>>()?;
            if cycle.is_empty() {
                return Err(Error::Parse("empty cycle".into()));
            }
            cycles.push(cycle);
            rest = &rest2[close + 1..];
        }
        if cycles.is_empty() {
            return Err(Error::Parse(format!("no cycles found in `{s}`")));
        }
        let n = cycles
            .iter()
            .flatten()
            .map(|l| l.get())
            .max()
            .expect("nonempty");
        let mut pairs = Vec::new();
        for cycle in &cycles {
            for (idx, &x) in cycle.iter().enumerate() {
                pairs.push((x, cycle[(idx + 1) % cycle.len()]));
            }
        }
        let map = BijectiveMap::new(pairs)?;
        let full = LabelSet::one_to(n);
        if map.domain() != full || map.codomain() != full {
            return Err(Error::Parse(format!(
                "cycle notation `{s}` does not cover [{n}] exactly once"
            )));
        }
        Ok(map)
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty maps
    }

    pub fn domain(&self) -> LabelSet {
        self.forward.keys().copied().collect()
    }

    pub fn codomain(&self) -> LabelSet {
        self.inverse.keys().copied().collect()
    }

    pub fn apply(&self, x: Label) -> Option<Label> {
        self.forward.get(&x).copied()
    }

    pub fn invert(&self, y: Label) -> Option<Label> {
        self.inverse.get(&y).copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Label, Label)> + '_ {
        self.forward.iter().map(|(&x, &y)| (x, y))
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &BijectiveMap) -> Result<BijectiveMap, Error> {
        let pairs: Vec<(Label, Label)> = other
            .pairs()
            .map(|(x, y)| {
                self.apply(y)
                    .map(|z| (x, z))
                    .ok_or_else(|| Error::InvalidMap(format!("{y} not in outer domain")))
            })
            .collect::<Result<_, _>>()?;
        BijectiveMap::new(pairs)
    }

    /// Is this a permutation, i.e. domain = codomain?
    pub fn is_permutation(&self) -> bool {
        self.domain() == self.codomain()
    }

    /// Splits the functional graph into directed paths and cycles.
    ///
    /// Paths are returned first, ordered by starting label, then cycles
    /// ordered by their smallest label. Cycles are rotated smallest-first.
    pub fn decompose(&self) -> Vec<Component> {
        let dom = self.domain();
        let cod = self.codomain();
        let mut visited: BTreeSet<Label> = BTreeSet::new();
        let mut paths = Vec::new();
        for start in dom.iter().filter(|&l| !cod.contains(l)) {
            let mut elements = vec![start];
            let mut cur = start;
            loop {
                let next = self.apply(cur).expect("path walks stay in the domain");
                elements.push(next);
                if dom.contains(next) {
                    visited.insert(next);
                    cur = next;
                } else {
                    break;
                }
            }
            visited.insert(start);
            paths.push(Component::path(elements));
        }
        let mut cycles = Vec::new();
        for start in dom.iter() {
            if visited.contains(&start) {
                continue;
            }
            let mut elements = vec![start];
            visited.insert(start);
            let mut cur = self.apply(start).expect("cycles stay in the domain");
            while cur != start {
                elements.push(cur);
                visited.insert(cur);
                cur = self.apply(cur).expect("cycles stay in the domain");
            }
            cycles.push(Component::cycle(elements));
        }
        cycles.sort_by_key(|c| c.elements()[0]);
        paths.into_iter().chain(cycles).collect()
    }

    /// The component-type `(λ, μ)` of the functional graph.
    pub fn component_type(&self) -> ComponentType {
        let mut lambda = Vec::new();
        let mut mu = Vec::new();
        for comp in self.decompose() {
            match comp.kind() {
                ComponentKind::Path => lambda.push(comp.size() as u32),
                ComponentKind::Cycle => mu.push(comp.size() as u32),
            }
        }
        lambda.sort_unstable_by(|a, b| b.cmp(a));
        mu.sort_unstable_by(|a, b| b.cmp(a));
        ComponentType::new(lambda, mu).expect("sizes from a real decomposition")
    }

    /// Number of components of the functional graph.
    pub fn component_count(&self) -> usize {
        self.decompose().len()
    }
}

impl fmt::Display for BijectiveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.decompose().iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(";"))
    }
}

impl FromStr for BijectiveMap {
    type Err = Error;

    /// Parses the component text form: semicolon-separated paths `a->b->c`
    /// and cycles `(a b c)`, e.g. `5->2;6->1;(3 4)`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut pairs = Vec::new();
        for part in s.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            if let Some(inner) = part.strip_prefix('(') {
                let inner = inner
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("unbalanced `(` in `{part}`")))?;
                let cycle: Vec<Label> = inner
                    .split_whitespace()
                    .map(|t| t.parse())
                    .collect::<Result<_, _>>()?;
                if cycle.is_empty() {
                    return Err(Error::Parse("empty cycle".into()));
                }
                for (i, &x) in cycle.iter().enumerate() {
                    pairs.push((x, cycle[(i + 1) % cycle.len()]));
                }
            } else {
                let elems: Vec<Label> = part
                    .split("->")
                    .map(|t| t.parse())
                    .collect::<Result<_, _>>()?;
                if elems.len() < 2 {
                    return Err(Error::Parse(format!("path `{part}` needs at least two elements")));
                }
                for w in elems.windows(2) {
                    pairs.push((w[0], w[1]));
                }
            }
        }
        if pairs.is_empty() {
            return Err(Error::Parse(format!("no components in `{s}`")));
        }
        BijectiveMap::new(pairs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ComponentKind {
    Path,
    Cycle,
}

/// One component of a functional graph: a directed path (listed from its
/// starting end to its terminating end) or a directed cycle (rotated so the
/// smallest label comes first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    kind: ComponentKind,
    elements: Vec<Label>,
}

impl Component {
    fn path(elements: Vec<Label>) -> Self {
        debug_assert!(elements.len() >= 2);
        Component { kind: ComponentKind::Path, elements }
    }

    fn cycle(mut elements: Vec<Label>) -> Self {
        let min_pos = elements
            .iter()
            .enumerate()
            .min_by_key(|(_, l)| **l)
            .map(|(i, _)| i)
            .expect("cycle is nonempty");
        elements.rotate_left(min_pos);
        Component { kind: ComponentKind::Cycle, elements }
    }

    pub fn kind(&self) -> ComponentKind {
        self.kind
    }

    pub fn elements(&self) -> &[Label] {
        &self.elements
    }

    pub fn contains(&self, l: Label) -> bool {
        self.elements.contains(&l)
    }

    /// Path size = elements − 1 (the number of domain elements on it);
    /// cycle size = number of elements.
    pub fn size(&self) -> usize {
        match self.kind {
            ComponentKind::Path => self.elements.len() - 1,
            ComponentKind::Cycle => self.elements.len(),
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ComponentKind::Path => {
                let parts: Vec<String> = self.elements.iter().map(|l| l.to_string()).collect();
                write!(f, "{}", parts.join("->"))
            }
            ComponentKind::Cycle => {
                let parts: Vec<String> = self.elements.iter().map(|l| l.to_string()).collect();
                write!(f, "({})", parts.join(" "))
            }
        }
    }
}

/// The pair `(λ, μ) ⊨ n` of non-increasing path-size and cycle-size sequences.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentType {
    lambda: Vec<u32>,
    mu: Vec<u32>,
}

impl ComponentType {
    pub fn new(lambda: Vec<u32>, mu: Vec<u32>) -> Result<Self, Error> {
        for seq in [&lambda, &mu] {
            if seq.contains(&0) {
                return Err(Error::InvalidType("parts must be positive".into()));
            }
            if seq.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::InvalidType(format!(
                    "sequence {seq:?} is not non-increasing"
                )));
            }
        }
        if lambda.iter().sum::<u32>() + mu.iter().sum::<u32>() == 0 {
            return Err(Error::InvalidType("empty component-type".into()));
        }
        Ok(ComponentType { lambda, mu })
    }

    pub fn lambda(&self) -> &[u32] {
        &self.lambda
    }

    pub fn mu(&self) -> &[u32] {
        &self.mu
    }

    pub fn n(&self) -> u32 {
        self.lambda.iter().sum::<u32>() + self.mu.iter().sum::<u32>()
    }

    /// `ℓ(λ)`, the number of paths.
    pub fn num_paths(&self) -> u32 {
        self.lambda.len() as u32
    }

    /// `ℓ(μ)`, the number of cycles.
    pub fn num_cycles(&self) -> u32 {
        self.mu.len() as u32
    }

    /// The largest component count a vertical can reach against a diagonal of
    /// this type: `n − ℓ(μ)` when there are paths, `n + 1 − |D|` for
    /// permutations.
    pub fn max_components(&self) -> u32 {
        if self.num_paths() == 0 {
            self.n() + 1 - self.num_cycles()
        } else {
            self.n() - self.num_cycles()
        }
    }

    /// A deterministic representative `D: B -> A` of this component-type with
    /// `A = [n]` and `B = ([n] \ E) ∪ {n+1, ...}`, `E = {1, ..., ℓ(λ)}`.
    ///
    /// Cycles are filled first with the smallest labels not reserved for `E`,
    /// in `μ` order; the path of size `λ_i` runs from the fresh label `n+i`
    /// through the next unused labels down to its terminating end `i`.
    pub fn canonical_map(&self) -> BijectiveMap {
        let n = self.n();
        let num_paths = self.num_paths();
        let mut pool = (num_paths + 1)..=n;
        let mut pairs = Vec::new();
        for &mj in &self.mu {
            let cycle: Vec<u32> = pool.by_ref().take(mj as usize).collect();
            for (i, &x) in cycle.iter().enumerate() {
                pairs.push((Label::new(x), Label::new(cycle[(i + 1) % cycle.len()])));
            }
        }
        for (idx, &li) in self.lambda.iter().enumerate() {
            let i = idx as u32 + 1;
            let mut chain = vec![n + i];
            chain.extend(pool.by_ref().take(li as usize - 1));
            chain.push(i);
            for w in chain.windows(2) {
                pairs.push((Label::new(w[0]), Label::new(w[1])));
            }
        }
        BijectiveMap::new(pairs).expect("canonical construction is bijective")
    }
}

impl fmt::Display for ComponentType {
    /// `L=2,2;M=3,1`, with `-` for an empty sequence.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_seq = |seq: &[u32]| {
            if seq.is_empty() {
                "-".to_string()
            } else {
                seq.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
            }
        };
        write!(f, "L={};M={}", fmt_seq(&self.lambda), fmt_seq(&self.mu))
    }
}

impl FromStr for ComponentType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let parse_seq = |part: &str, prefix: &str| -> Result<Vec<u32>, Error> {
            let body = part
                .trim()
                .strip_prefix(prefix)
                .ok_or_else(|| Error::Parse(format!("expected `{prefix}` in `{s}`")))?;
            if body.trim() == "-" {
                return Ok(Vec::new());
            }
            body.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad part `{t}` in `{s}`")))
                })
                .collect()
        };
        let (l_part, m_part) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected `;` in type `{s}`")))?;
        ComponentType::new(parse_seq(l_part, "L=")?, parse_seq(m_part, "M=")?)
    }
}

/// All partitions of `n`, parts listed non-increasing, in descending
/// lexicographic order: `(n)`, ..., `(1,1,...,1)`.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            rec(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Every `(λ, μ) ⊨ n` with `ℓ(λ) ≥ min_paths`, each exactly once.
///
/// Order: by `|λ|` ascending; λ partitions in ascending lexicographic order,
/// μ partitions in descending lexicographic order.
pub fn types_of(n: u32, min_paths: u32) -> Vec<ComponentType> {
    let mut out = Vec::new();
    for lam_size in 0..=n {
        let mut lams = partitions(lam_size);
        lams.reverse();
        for lam in lams {
            if (lam.len() as u32) < min_paths {
                continue;
            }
            for mu in partitions(n - lam_size) {
                if lam.is_empty() && mu.is_empty() {
                    continue;
                }
                out.push(ComponentType::new(lam.clone(), mu).expect("generated sequences are valid"));
            }
        }
    }
    out
}
