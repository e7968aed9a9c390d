//! Two-row arrays and the diagonal block-transposition action.
//!
//! A two-row array `Ψ = (s, f)` has a top row `s_0 s_1 ... s_{n-1}` (a
//! permutation of `A` with fixed leftmost anchor `s_0`) and, below each
//! `s_i`, its image `f(s_i)` under the vertical bijection `f: A -> B`.
//! The diagonal `D_Ψ: B -> A` sends `f(s_i)` to `s_{i+1}` (indices mod n),
//! and the three maps are tied together by `s = D_Ψ ∘ f` where `s` is the
//! long cycle `(s_0 s_1 ... s_{n-1})`.
//!
//! Transposing the diagonal-blocks over two adjacent segments of the top row
//! keeps the diagonal fixed and rewrites the vertical at exactly three
//! points; which components of the vertical merge or split depends only on
//! how those three elements are distributed over its components.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::maps::{BijectiveMap, Component, ComponentKind, Label};
use crate::Error;

/// A two-row array, stored as its aligned top and bottom rows.
///
/// Equality is row-wise; two arrays with equal rows necessarily share their
/// vertical and diagonal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoRowArray {
    top: Vec<Label>,
    bottom: Vec<Label>,
}

impl TwoRowArray {
    pub fn from_rows(
        top: impl IntoIterator<Item = Label>,
        bottom: impl IntoIterator<Item = Label>,
    ) -> Result<Self, Error> {
        let top: Vec<Label> = top.into_iter().collect();
        let bottom: Vec<Label> = bottom.into_iter().collect();
        if top.is_empty() || top.len() != bottom.len() {
            return Err(Error::InvalidArray("rows must be nonempty and equal-length".into()));
        }
        for row in [&top, &bottom] {
            let mut seen = row.clone();
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArray("rows must be duplicate-free".into()));
            }
        }
        Ok(TwoRowArray { top, bottom })
    }

    /// The unique array with the given top row whose diagonal is `d`:
    /// `f(s_i) = d⁻¹(s_{i+1})`.
    pub fn from_top_and_diagonal(
        top: impl IntoIterator<Item = Label>,
        d: &BijectiveMap,
    ) -> Result<Self, Error> {
        let top: Vec<Label> = top.into_iter().collect();
        let mut sorted = top.clone();
        sorted.sort_unstable();
        let cod: Vec<Label> = d.codomain().iter().collect();
        if sorted != cod {
            return Err(Error::InvalidArray(
                "top row is not a permutation of the diagonal's codomain".into(),
            ));
        }
        let n = top.len();
        let bottom: Vec<Label> = (0..n)
            .map(|i| d.invert(top[(i + 1) % n]).expect("checked codomain"))
            .collect();
        TwoRowArray::from_rows(top, bottom)
    }

    pub fn len(&self) -> usize {
        self.top.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The fixed leftmost top element `x = s_0`.
    pub fn anchor(&self) -> Label {
        self.top[0]
    }

    pub fn top(&self) -> &[Label] {
        &self.top
    }

    pub fn bottom(&self) -> &[Label] {
        &self.bottom
    }

    /// The vertical map `f: A -> B`.
    pub fn vertical(&self) -> BijectiveMap {
        BijectiveMap::new(self.top.iter().copied().zip(self.bottom.iter().copied()))
            .expect("rows are duplicate-free")
    }

    /// The diagonal `D_Ψ: B -> A`, `f(s_i) ↦ s_{i+1 mod n}`.
    pub fn diagonal(&self) -> BijectiveMap {
        let n = self.len();
        BijectiveMap::new((0..n).map(|i| (self.bottom[i], self.top[(i + 1) % n])))
            .expect("rows are duplicate-free")
    }

    /// The long cycle `(s_0 s_1 ... s_{n-1})` as a permutation of `A`.
    pub fn top_cycle(&self) -> BijectiveMap {
        let n = self.len();
        BijectiveMap::new((0..n).map(|i| (self.top[i], self.top[(i + 1) % n])))
            .expect("top row is duplicate-free")
    }

    /// Number of components of the vertical map.
    pub fn component_count(&self) -> usize {
        self.vertical().component_count()
    }

    pub fn position(&self, l: Label) -> Result<usize, Error> {
        self.top
            .iter()
            .position(|&t| t == l)
            .ok_or(Error::LabelNotInTop(l))
    }

    /// The sequence order `<_s`: `a <_s b` iff `a` appears before `b` in the
    /// top row.
    pub fn position_order(&self, a: Label, b: Label) -> Result<Ordering, Error> {
        Ok(self.position(a)?.cmp(&self.position(b)?))
    }

    /// Transposes the diagonal-blocks over `[s_i, s_j]` and `[s_{j+1}, s_k]`.
    ///
    /// The result has top row `s_0 .. s_{i-1}, s_{j+1} .. s_k, s_i .. s_j,
    /// s_{k+1} ..`; its vertical differs from `f` exactly at `s_{i-1}`,
    /// `s_j`, `s_k`, and its diagonal and anchor are unchanged.
    pub fn transpose(&self, h: Triple) -> Result<TwoRowArray, Error> {
        let n = self.len();
        h.check(n)?;
        let (i, j, k) = (h.i, h.j, h.k);
        let f = self.vertical();
        let rewrites = [
            (self.top[i - 1], f.apply(self.top[j]).expect("in domain")),
            (self.top[j], f.apply(self.top[k]).expect("in domain")),
            (self.top[k], f.apply(self.top[i - 1]).expect("in domain")),
        ];
        let mut new_top = Vec::with_capacity(n);
        new_top.extend_from_slice(&self.top[..i]);
        new_top.extend_from_slice(&self.top[j + 1..=k]);
        new_top.extend_from_slice(&self.top[i..=j]);
        new_top.extend_from_slice(&self.top[k + 1..]);
        let bottom: Vec<Label> = new_top
            .iter()
            .map(|&x| {
                rewrites
                    .iter()
                    .find(|(from, _)| *from == x)
                    .map(|&(_, to)| to)
                    .unwrap_or_else(|| f.apply(x).expect("in domain"))
            })
            .collect();
        TwoRowArray::from_rows(new_top, bottom)
    }
}

impl fmt::Display for TwoRowArray {
    /// `1 2 3 4 / 5 4 3 6`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |r: &[Label]| r.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ");
        write!(f, "{} / {}", row(&self.top), row(&self.bottom))
    }
}

impl FromStr for TwoRowArray {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let (t, b) = s
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("expected `/` in array `{s}`")))?;
        let parse_row = |r: &str| -> Result<Vec<Label>, Error> {
            r.split_whitespace().map(|t| t.parse()).collect()
        };
        TwoRowArray::from_rows(parse_row(t)?, parse_row(b)?)
    }
}

/// Block-transposition positions `(i, j, k)` with `1 ≤ i ≤ j < k ≤ n−1`.
/// Position 0 (the anchor) is never inside a moved block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Triple {
    i: usize,
    j: usize,
    k: usize,
}

impl Triple {
    pub fn new(i: usize, j: usize, k: usize) -> Result<Self, Error> {
        if i < 1 || i > j || j >= k {
            return Err(Error::InvalidTriple { i, j, k });
        }
        Ok(Triple { i, j, k })
    }

    fn check(self, n: usize) -> Result<(), Error> {
        if self.k > n - 1 {
            return Err(Error::InvalidTriple { i: self.i, j: self.j, k: self.k });
        }
        Ok(())
    }

    pub fn i(self) -> usize {
        self.i
    }

    pub fn j(self) -> usize {
        self.j
    }

    pub fn k(self) -> usize {
        self.k
    }

    /// The triple that undoes this one: the relocated blocks are swapped back
    /// by `(i, i+k−j−1, k)`.
    pub fn inverse(self) -> Triple {
        Triple { i: self.i, j: self.i + self.k - self.j - 1, k: self.k }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.k)
    }
}

/// How `s_{i-1}`, `s_j`, `s_k` sit inside the components of the vertical.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpreadCase {
    /// Three pairwise distinct components holding one element each.
    ThreeComponents { paths: u8, cycles: u8 },
    /// Two elements share a component, the third sits elsewhere.
    TwoComponents { paths: u8, cycles: u8 },
    /// All three on one path; `split_order` records whether they appear in
    /// the order `s_{i-1}`, `s_k`, `s_j` along the path — the arrangement
    /// under which the path splits into a path and two cycles.
    SamePath { split_order: bool },
    /// All three on one cycle.
    SameCycle,
}

impl SpreadCase {
    /// Two paths and one cycle merging into two components (count −1).
    pub fn is_merge_case(self) -> bool {
        matches!(self, SpreadCase::ThreeComponents { paths: 2, cycles: 1 })
    }

    /// One path splitting into a path and two cycles (count +2).
    pub fn is_split_case(self) -> bool {
        matches!(self, SpreadCase::SamePath { split_order: true })
    }
}

/// The effect of a transposition on the vertical's components.
#[derive(Debug, Clone)]
pub struct TranspositionEffect {
    /// The distinct components containing `s_{i-1}`, `s_j`, `s_k`.
    pub touched: Vec<Component>,
    /// `|vertical(Ψ^h)| − |vertical(Ψ)|`.
    pub delta: i64,
    pub case: SpreadCase,
}

/// Classifies how the transposition `h` redistributes the components of the
/// vertical, and the resulting component count change.
pub fn classify_transposition(psi: &TwoRowArray, h: Triple) -> Result<TranspositionEffect, Error> {
    h.check(psi.len())?;
    let elems = [psi.top()[h.i - 1], psi.top()[h.j], psi.top()[h.k]];
    let comps = psi.vertical().decompose();
    // index of the component holding each of the three elements
    let holder: Vec<usize> = elems
        .iter()
        .map(|&e| comps.iter().position(|c| c.contains(e)).expect("element of A"))
        .collect();
    let mut distinct = holder.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let touched: Vec<Component> = distinct.iter().map(|&ix| comps[ix].clone()).collect();
    let count_kinds = |ixs: &[usize]| {
        let paths = ixs.iter().filter(|&&ix| comps[ix].kind() == ComponentKind::Path).count() as u8;
        (paths, ixs.len() as u8 - paths)
    };
    let case = match distinct.len() {
        3 => {
            let (paths, cycles) = count_kinds(&distinct);
            SpreadCase::ThreeComponents { paths, cycles }
        }
        2 => {
            let (paths, cycles) = count_kinds(&distinct);
            SpreadCase::TwoComponents { paths, cycles }
        }
        _ => {
            let comp = &comps[holder[0]];
            match comp.kind() {
                ComponentKind::Cycle => SpreadCase::SameCycle,
                ComponentKind::Path => {
                    // order of first occurrence along the path
                    let order: Vec<Label> = comp
                        .elements()
                        .iter()
                        .copied()
                        .filter(|e| elems.contains(e))
                        .collect();
                    SpreadCase::SamePath {
                        split_order: order == [elems[0], elems[2], elems[1]],
                    }
                }
            }
        }
    };
    let before = comps.len() as i64;
    let after = psi.transpose(h)?.component_count() as i64;
    Ok(TranspositionEffect { touched, delta: after - before, case })
}
