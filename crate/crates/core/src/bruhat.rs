//! The symmetric group `S_n` under the strong Bruhat order.
//!
//! Permutations are stored in one-line notation with values `1..=n`. The
//! poset is ranked by inversion count; within a rank, permutations are listed
//! lexicographically so that every downstream basis is reproducible.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest `n` accepted by [`build_bruhat`] unless a larger cap is passed.
pub const DEFAULT_MAX_N: usize = 6;

/// A permutation in one-line notation: `entries[i] = π(i + 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        let n = entries.len();
        let mut seen = vec![false; n + 1];
        for &v in &entries {
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation {
                    reason: format!("entry {v} is outside 1..={n}"),
                    entries,
                });
            }
            if seen[v] {
                return Err(Error::InvalidPermutation {
                    reason: format!("entry {v} is repeated"),
                    entries,
                });
            }
            seen[v] = true;
        }
        Ok(Permutation(entries))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    /// All of `S_n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut cur: Vec<usize> = (1..=n).collect();
        let mut out = vec![Permutation(cur.clone())];
        while next_permutation(&mut cur) {
            out.push(Permutation(cur.clone()));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// `π(i)` for a 1-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn inversions(&self) -> usize {
        let p = &self.0;
        let mut count = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// `(-1)^inv`.
    pub fn sign(&self) -> i32 {
        if self.inversions().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Right multiplication by the transposition of 0-based positions `i`, `j`.
    pub fn swap_positions(&self, i: usize, j: usize) -> Permutation {
        let mut e = self.0.clone();
        e.swap(i, j);
        Permutation(e)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// Upper covers in the Bruhat order, sorted lexicographically.
    ///
    /// Swapping positions `i < j` is a cover exactly when `π_i < π_j` and no
    /// entry strictly between the two positions has a value strictly between
    /// `π_i` and `π_j`.
    pub fn covers(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = self
            .cover_transpositions()
            .into_iter()
            .map(|(i, j)| self.swap_positions(i, j))
            .collect();
        out.sort();
        out
    }

    /// The 0-based position pairs `(i, j)` whose swap gives an upper cover.
    pub fn cover_transpositions(&self) -> Vec<(usize, usize)> {
        let p = &self.0;
        let mut out = Vec::new();
        for i in 0..p.len() {
            // Scanning right from i, the smallest value above p[i] seen so far
            // bounds the candidates: p[j] is a cover target iff it undercuts it.
            let mut ceiling = usize::MAX;
            for j in i + 1..p.len() {
                if p[j] > p[i] && p[j] < ceiling {
                    out.push((i, j));
                    ceiling = p[j];
                }
            }
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() <= 9 {
            for v in &self.0 {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts `"2,1,3"` or, for `n <= 9`, the compact `"213"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let entries: Option<Vec<usize>> = if s.contains(',') {
            s.split(',').map(|t| t.trim().parse().ok()).collect()
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        let entries =
            entries.ok_or_else(|| Error::Format(format!("cannot parse permutation {s:?}")))?;
        Permutation::new(entries)
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `S_n` with rank levels and all cover edges.
///
/// Elements are indexed by their position in rank-then-lexicographic order.
#[derive(Clone, Debug)]
pub struct BruhatPoset {
    n: usize,
    elements: Vec<Permutation>,
    level_starts: Vec<usize>,
    index: HashMap<Permutation, usize>,
    up: Vec<Vec<usize>>,
}

pub fn build_bruhat(n: usize) -> Result<BruhatPoset> {
    build_bruhat_capped(n, DEFAULT_MAX_N)
}

pub fn build_bruhat_capped(n: usize, cap: usize) -> Result<BruhatPoset> {
    if n == 0 {
        return Err(Error::Precondition("S_n needs n >= 1".into()));
    }
    if n > cap {
        return Err(Error::size("Bruhat poset size n", n as u128, cap as u128));
    }
    let top = n * (n - 1) / 2;
    let mut by_rank: Vec<Vec<Permutation>> = vec![Vec::new(); top + 1];
    for p in Permutation::all(n) {
        by_rank[p.inversions()].push(p);
    }
    let mut elements = Vec::new();
    let mut level_starts = Vec::with_capacity(top + 2);
    for level in by_rank {
        level_starts.push(elements.len());
        elements.extend(level);
    }
    level_starts.push(elements.len());
    let index: HashMap<Permutation, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let up = elements
        .iter()
        .map(|p| p.covers().iter().map(|q| index[q]).collect())
        .collect();
    Ok(BruhatPoset {
        n,
        elements,
        level_starts,
        index,
        up,
    })
}

impl BruhatPoset {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Number of rank levels, `C(n, 2) + 1`.
    pub fn num_levels(&self) -> usize {
        self.level_starts.len() - 1
    }

    pub fn level(&self, k: usize) -> &[Permutation] {
        &self.elements[self.level_starts[k]..self.level_starts[k + 1]]
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        (0..self.num_levels()).map(|k| self.level(k).len()).collect()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> &Permutation {
        &self.elements[idx]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Position of element `idx` within its own rank level.
    pub fn position_in_level(&self, idx: usize) -> usize {
        let k = self.elements[idx].inversions();
        idx - self.level_starts[k]
    }

    /// Indices of the upper covers of element `idx`.
    pub fn up(&self, idx: usize) -> &[usize] {
        &self.up[idx]
    }

    pub fn cover_edges(&self) -> impl Iterator<Item = (&Permutation, &Permutation)> + '_ {
        self.up
            .iter()
            .enumerate()
            .flat_map(move |(i, ups)| ups.iter().map(move |&j| (&self.elements[i], &self.elements[j])))
    }

    pub fn num_cover_edges(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    /// Every `m` with `bottom ⋖ m ⋖ top`.
    pub fn length2_middles(&self, bottom: &Permutation, top: &Permutation) -> Result<Vec<Permutation>> {
        let (b, t) = match (self.index_of(bottom), self.index_of(top)) {
            (Some(b), Some(t)) => (b, t),
            _ => {
                return Err(Error::Precondition(format!(
                    "{bottom} and {top} are not both elements of S_{}",
                    self.n
                )))
            }
        };
        if top.inversions() != bottom.inversions() + 2 {
            return Err(Error::Precondition(format!(
                "[{bottom}, {top}] does not have length 2"
            )));
        }
        let middles: Vec<Permutation> = self.up[b]
            .iter()
            .filter(|&&m| self.up[m].contains(&t))
            .map(|&m| self.elements[m].clone())
            .collect();
        if middles.is_empty() {
            return Err(Error::Precondition(format!(
                "{bottom} is not below {top} in the Bruhat order"
            )));
        }
        Ok(middles)
    }
}
