//! Bruhat-shaped cochain complexes and their cohomology over GF(2).
//!
//! Level `k` is the direct sum, over permutations `π` with `k` inversions
//! (lexicographic order), of a tensor product of algebras split into `n`
//! groups. For a link diagram, group `i` is `A_{x_i}^{⊗ s_{π(i)}}`: one
//! factor per circle of the `π(i)`-th staircase smoothing. A cover
//! `π ⋖ π·(i j)` changes exactly groups `i` and `j`, and the differential
//! acts as the identity on every other group.
//!
//! Basis vectors are digit strings (one digit per circle). With the
//! default [`ColoringOrder::ColorMajor`], the digit of group 1's first
//! circle is most significant, matching [`crate::tqft::tensor_assemble`].

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bruhat::{build_bruhat_capped, Permutation, DEFAULT_MAX_N};
use crate::error::{Error, Result};
use crate::gendet::{det_exact, vandermonde_matrix};
use crate::gf2::GF2Matrix;
use crate::linkdiag::{LinkDiagram, SmoothingProfile};

/// Default cap on the total number of basis elements of a built complex.
pub const DEFAULT_BUDGET: usize = 10_000_000;

/// Positive integers `x_1..x_n`, one algebra dimension per color.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct ColorVector(Vec<usize>);

impl ColorVector {
    pub fn new(x: Vec<usize>) -> Result<Self> {
        if let Some(pos) = x.iter().position(|&v| v == 0) {
            return Err(Error::Precondition(format!(
                "color vector entries must be positive; entry {} is 0",
                pos + 1
            )));
        }
        Ok(ColorVector(x))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `x_i` for `1 <= i <= n`.
    pub fn get(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl TryFrom<Vec<usize>> for ColorVector {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        ColorVector::new(v)
    }
}

impl From<ColorVector> for Vec<usize> {
    fn from(c: ColorVector) -> Self {
        c.0
    }
}

impl FromStr for ColorVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let x: Option<Vec<usize>> = s.split(',').map(|t| t.trim().parse().ok()).collect();
        ColorVector::new(x.ok_or_else(|| Error::Format(format!("cannot parse color vector {s:?}")))?)
    }
}

impl fmt::Display for ColorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Digit significance inside each permutation block.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ColoringOrder {
    /// Group 1 first, circles in circle order; first digit most significant.
    #[default]
    ColorMajor,
    /// The same digits with significance reversed.
    Reversed,
}

/// What a cover edge does to the groups it changes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeRule {
    /// Connected cobordism: constant colorings go to constant colorings.
    MergeSplit,
    /// `η∘ε` with `ε(e_a) = 1`, `η(1) = e_1`: every basis vector goes to `e_1`.
    UnitCounit,
}

/// Where a layout came from; carried into reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LayoutSource {
    Diagram { x: ColorVector, s: SmoothingProfile },
    Matrix { entries: Vec<Vec<usize>> },
}

/// One permutation's summand inside a cochain group.
#[derive(Clone, Debug)]
pub struct Block {
    pub perm: Permutation,
    /// Offset of the block inside its level.
    pub offset: usize,
    pub dim: usize,
    /// Per group: algebra dimension and number of tensor factors.
    groups: Vec<(usize, usize)>,
    /// First flat digit position of each group, plus a final sentinel.
    group_starts: Vec<usize>,
    strides: Vec<usize>,
}

impl Block {
    fn new(perm: Permutation, offset: usize, groups: Vec<(usize, usize)>, order: ColoringOrder) -> Result<Self> {
        let mut group_starts = Vec::with_capacity(groups.len() + 1);
        let mut radices = Vec::new();
        for &(radix, count) in &groups {
            group_starts.push(radices.len());
            radices.extend(std::iter::repeat_n(radix, count));
        }
        group_starts.push(radices.len());
        let overflow = || Error::size(format!("dimension of the {perm} summand"), u128::MAX, usize::MAX as u128);
        let mut strides = vec![0; radices.len()];
        let mut acc: usize = 1;
        let positions: Vec<usize> = match order {
            ColoringOrder::ColorMajor => (0..radices.len()).rev().collect(),
            ColoringOrder::Reversed => (0..radices.len()).collect(),
        };
        for p in positions {
            strides[p] = acc;
            acc = acc.checked_mul(radices[p]).ok_or_else(overflow)?;
        }
        Ok(Block {
            perm,
            offset,
            dim: acc,
            groups,
            group_starts,
            strides,
        })
    }

    /// `(algebra dimension, factor count)` of group `i` (0-based).
    pub fn group(&self, i: usize) -> (usize, usize) {
        self.groups[i]
    }

    pub fn num_digits(&self) -> usize {
        self.strides.len()
    }

    /// Digits of local basis index `local`, flat over all groups.
    pub fn decode(&self, local: usize, digits: &mut Vec<usize>) {
        digits.clear();
        for (g, &(radix, count)) in self.groups.iter().enumerate() {
            let start = self.group_starts[g];
            for p in start..start + count {
                digits.push(local / self.strides[p] % radix);
            }
        }
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.strides).map(|(d, s)| d * s).sum()
    }

    /// Digits of group `g` inside a flat digit string.
    pub fn group_digits<'a>(&self, g: usize, digits: &'a [usize]) -> &'a [usize] {
        &digits[self.group_starts[g]..self.group_starts[g + 1]]
    }

    /// Contribution of a constant group `g` with value `a` to the index.
    fn constant_group_index(&self, g: usize, a: usize) -> usize {
        self.strides[self.group_starts[g]..self.group_starts[g + 1]]
            .iter()
            .map(|s| a * s)
            .sum()
    }

    fn group_index(&self, g: usize, group_digits: &[usize]) -> usize {
        self.strides[self.group_starts[g]..self.group_starts[g + 1]]
            .iter()
            .zip(group_digits)
            .map(|(s, d)| d * s)
            .sum()
    }
}

/// A cover edge from a block to a block of the next level.
#[derive(Clone, Debug)]
pub struct Cover {
    /// Block index in the next level.
    pub target: usize,
    /// The two groups (0-based) whose factors change.
    pub changed: [usize; 2],
}

/// Basis bookkeeping and the combinatorial differential of a complex,
/// without any matrices.
#[derive(Clone, Debug)]
pub struct ComplexLayout {
    n: usize,
    rule: EdgeRule,
    order: ColoringOrder,
    source: LayoutSource,
    levels: Vec<Vec<Block>>,
    level_dims: Vec<usize>,
    covers: Vec<Vec<Vec<Cover>>>,
}

impl ComplexLayout {
    /// Generic Bruhat layout: `group_shape(π, i)` gives the algebra
    /// dimension and factor count of group `i` (0-based) at `π`.
    pub(crate) fn build(
        n: usize,
        rule: EdgeRule,
        order: ColoringOrder,
        source: LayoutSource,
        bruhat_cap: usize,
        group_shape: impl Fn(&Permutation, usize) -> (usize, usize),
    ) -> Result<Self> {
        let poset = build_bruhat_capped(n, bruhat_cap)?;
        let mut levels = Vec::with_capacity(poset.num_levels());
        let mut level_dims = Vec::with_capacity(poset.num_levels());
        for k in 0..poset.num_levels() {
            let mut offset = 0usize;
            let mut blocks = Vec::new();
            for p in poset.level(k) {
                let groups: Vec<(usize, usize)> = (0..n).map(|i| group_shape(p, i)).collect();
                if rule == EdgeRule::MergeSplit && groups.iter().any(|&(_, c)| c == 0) {
                    return Err(Error::Precondition(format!(
                        "summand {p} has a color with no circles"
                    )));
                }
                let block = Block::new(p.clone(), offset, groups, order)?;
                offset = offset
                    .checked_add(block.dim)
                    .ok_or_else(|| Error::size(format!("dimension of level {k}"), u128::MAX, usize::MAX as u128))?;
                blocks.push(block);
            }
            levels.push(blocks);
            level_dims.push(offset);
        }
        let covers = (0..levels.len())
            .map(|k| {
                levels[k]
                    .iter()
                    .map(|b| {
                        b.perm
                            .cover_transpositions()
                            .into_iter()
                            .map(|(i, j)| {
                                let q = b.perm.swap_positions(i, j);
                                let target = poset.index_of(&q).expect("cover lies in S_n")
                                    - poset.index_of(&poset.level(k + 1)[0]).expect("level is nonempty");
                                Cover { target, changed: [i, j] }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(ComplexLayout {
            n,
            rule,
            order,
            source,
            levels,
            level_dims,
            covers,
        })
    }

    /// Layout of the complex of `d` colored by `x`.
    pub fn for_diagram(d: &LinkDiagram, x: &ColorVector, order: ColoringOrder) -> Result<Self> {
        Self::for_diagram_capped(d, x, order, DEFAULT_MAX_N)
    }

    pub fn for_diagram_capped(d: &LinkDiagram, x: &ColorVector, order: ColoringOrder, cap: usize) -> Result<Self> {
        if d.num_crossings() != x.len() {
            return Err(Error::Precondition(format!(
                "diagram has {} crossings but the color vector has {} entries",
                d.num_crossings(),
                x.len()
            )));
        }
        let s = d.s_vector()?;
        let source = LayoutSource::Diagram {
            x: x.clone(),
            s: s.clone(),
        };
        ComplexLayout::build(x.len(), EdgeRule::MergeSplit, order, source, cap, |p, i| {
            (x.as_slice()[i], s.get(p.entries()[i]))
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rule(&self) -> EdgeRule {
        self.rule
    }

    pub fn order(&self) -> ColoringOrder {
        self.order
    }

    pub fn source(&self) -> &LayoutSource {
        &self.source
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn level_dims(&self) -> &[usize] {
        &self.level_dims
    }

    pub fn total_dim(&self) -> u128 {
        self.level_dims.iter().map(|&d| d as u128).sum()
    }

    pub fn blocks(&self, k: usize) -> &[Block] {
        &self.levels[k]
    }

    pub fn covers(&self, k: usize, block: usize) -> &[Cover] {
        &self.covers[k][block]
    }

    /// Block index of permutation `p` within level `inv(p)`.
    pub fn block_of(&self, p: &Permutation) -> Option<(usize, usize)> {
        let k = p.inversions();
        let b = self.levels.get(k)?.binary_search_by(|b| b.perm.cmp(p)).ok()?;
        Some((k, b))
    }

    pub fn euler_characteristic(&self) -> i128 {
        self.level_dims
            .iter()
            .enumerate()
            .map(|(k, &d)| if k % 2 == 0 { d as i128 } else { -(d as i128) })
            .sum()
    }

    fn locate(&self, k: usize, idx: usize) -> (usize, usize) {
        let blocks = &self.levels[k];
        let b = blocks.partition_point(|b| b.offset <= idx) - 1;
        (b, idx - blocks[b].offset)
    }

    /// Appends the level-`k+1` indices of `δ(e_idx)` for a level-`k` basis
    /// vector. Indices never repeat: distinct covers hit distinct blocks.
    pub fn image(&self, k: usize, idx: usize, out: &mut Vec<usize>) {
        let (b, local) = self.locate(k, idx);
        let mut digits = Vec::new();
        self.levels[k][b].decode(local, &mut digits);
        self.image_of_digits(k, b, &digits, out);
    }

    fn image_of_digits(&self, k: usize, b: usize, digits: &[usize], out: &mut Vec<usize>) {
        let src = &self.levels[k][b];
        'cover: for cover in &self.covers[k][b] {
            let tgt = &self.levels[k + 1][cover.target];
            let mut index = tgt.offset;
            for g in 0..self.n {
                let gd = src.group_digits(g, digits);
                if cover.changed.contains(&g) {
                    match self.rule {
                        EdgeRule::MergeSplit => {
                            let a = gd[0];
                            if gd.iter().any(|&d| d != a) {
                                continue 'cover;
                            }
                            index += tgt.constant_group_index(g, a);
                        }
                        EdgeRule::UnitCounit => {}
                    }
                } else {
                    index += tgt.group_index(g, gd);
                }
            }
            out.push(index);
        }
    }

    /// The matrix of `δ^k`, `dim_{k+1} × dim_k`; zero rows at the top level.
    pub fn differential(&self, k: usize) -> GF2Matrix {
        let cols = self.level_dims[k];
        if k + 1 >= self.levels.len() {
            return GF2Matrix::zeros(0, cols);
        }
        let rows = self.level_dims[k + 1];
        let per_block: Vec<Vec<(usize, usize)>> = self.levels[k]
            .par_iter()
            .enumerate()
            .map(|(b, block)| {
                let mut trip = Vec::new();
                let mut digits = Vec::new();
                let mut out = Vec::new();
                for local in 0..block.dim {
                    block.decode(local, &mut digits);
                    out.clear();
                    self.image_of_digits(k, b, &digits, &mut out);
                    trip.extend(out.iter().map(|&r| (r, block.offset + local)));
                }
                trip
            })
            .collect();
        GF2Matrix::from_triplets(rows, cols, per_block.into_iter().flatten())
    }

    /// `δ^{k+1} δ^k = 0` checked basis vector by basis vector, without
    /// materializing matrices. Returns the first offending `(k, idx)`.
    pub fn find_d_squared_violation(&self) -> Option<(usize, usize)> {
        (0..self.levels.len().saturating_sub(2)).find_map(|k| {
            self.levels[k]
                .par_iter()
                .enumerate()
                .find_map_first(|(b, block)| {
                    let mut digits = Vec::new();
                    let mut once = Vec::new();
                    let mut twice = Vec::new();
                    let mut tdigits = Vec::new();
                    for local in 0..block.dim {
                        block.decode(local, &mut digits);
                        once.clear();
                        self.image_of_digits(k, b, &digits, &mut once);
                        twice.clear();
                        for &j in &once {
                            let (tb, tl) = self.locate(k + 1, j);
                            self.levels[k + 1][tb].decode(tl, &mut tdigits);
                            self.image_of_digits(k + 1, tb, &tdigits, &mut twice);
                        }
                        twice.sort_unstable();
                        let odd = twice.chunk_by(|a, b| a == b).any(|run| run.len() % 2 == 1);
                        if odd {
                            return Some((k, block.offset + local));
                        }
                    }
                    None
                })
        })
    }

    /// Attach the differential matrices.
    pub fn materialize(self, budget: usize) -> Result<CochainComplex> {
        let total = self.total_dim();
        if total > budget as u128 {
            return Err(Error::size("total complex dimension", total, budget as u128));
        }
        let differentials = (0..self.num_levels())
            .into_par_iter()
            .map(|k| self.differential(k))
            .collect();
        Ok(CochainComplex {
            layout: self,
            differentials,
        })
    }
}

/// A cochain complex with its differentials as dense GF(2) matrices.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    layout: ComplexLayout,
    differentials: Vec<GF2Matrix>,
}

impl CochainComplex {
    pub fn layout(&self) -> &ComplexLayout {
        &self.layout
    }

    pub fn level_dims(&self) -> &[usize] {
        self.layout.level_dims()
    }

    pub fn num_levels(&self) -> usize {
        self.layout.num_levels()
    }

    /// `δ^k`; for the top level this is the `0 × dim` zero map.
    pub fn differential(&self, k: usize) -> &GF2Matrix {
        &self.differentials[k]
    }

    pub fn differentials(&self) -> &[GF2Matrix] {
        &self.differentials
    }

    /// The block of `δ^k` from summand `src` (level `k`) to summand `tgt`
    /// (level `k+1`), both given by block index.
    pub fn differential_block(&self, k: usize, src: usize, tgt: usize) -> GF2Matrix {
        let s = &self.layout.levels[k][src];
        let t = &self.layout.levels[k + 1][tgt];
        let d = &self.differentials[k];
        let mut m = GF2Matrix::zeros(t.dim, s.dim);
        for r in 0..t.dim {
            for c in d.row_ones(t.offset + r) {
                if c >= s.offset && c < s.offset + s.dim {
                    m.set(r, c - s.offset, true);
                }
            }
        }
        m
    }

    /// First `k` with `δ^{k+1} δ^k ≠ 0`.
    pub fn find_d_squared_violation(&self) -> Option<usize> {
        (0..self.differentials.len().saturating_sub(1))
            .find(|&k| !self.differentials[k + 1].mul(&self.differentials[k]).is_zero())
    }

    pub fn euler_characteristic(&self) -> i128 {
        self.layout.euler_characteristic()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.differentials.par_iter().map(GF2Matrix::rank).collect()
    }
}

/// Options for [`build_complex_with`].
#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub budget: usize,
    pub order: ColoringOrder,
    pub max_n: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            budget: DEFAULT_BUDGET,
            order: ColoringOrder::ColorMajor,
            max_n: DEFAULT_MAX_N,
        }
    }
}

pub fn build_complex(d: &LinkDiagram, x: &ColorVector) -> Result<CochainComplex> {
    build_complex_with(d, x, &BuildOptions::default())
}

pub fn build_complex_with(d: &LinkDiagram, x: &ColorVector, opts: &BuildOptions) -> Result<CochainComplex> {
    ComplexLayout::for_diagram_capped(d, x, opts.order, opts.max_n)?.materialize(opts.budget)
}

/// Dimensions, cohomology and Euler characteristics of a complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<usize>>,
    pub cochain_dims: Vec<usize>,
    pub homology_dims: Option<Vec<usize>>,
    pub euler_characteristic: i128,
    /// Alternating sum of `homology_dims`; must equal `euler_characteristic`.
    pub homology_euler_characteristic: Option<i128>,
    pub determinant: Option<i128>,
    pub agree: Option<bool>,
    pub elapsed_ms: u64,
}

impl HomologyReport {
    fn skeleton(layout: &ComplexLayout) -> Self {
        let (x, s) = match layout.source() {
            LayoutSource::Diagram { x, s } => (Some(x.as_slice().to_vec()), Some(s.as_slice().to_vec())),
            LayoutSource::Matrix { .. } => (None, None),
        };
        HomologyReport {
            n: layout.n(),
            x,
            s,
            cochain_dims: layout.level_dims().to_vec(),
            homology_dims: None,
            euler_characteristic: layout.euler_characteristic(),
            homology_euler_characteristic: None,
            determinant: None,
            agree: None,
            elapsed_ms: 0,
        }
    }

    /// Report of the cochain dimensions only.
    pub fn dims_only(layout: &ComplexLayout) -> Self {
        Self::skeleton(layout)
    }

    pub(crate) fn set_determinant(&mut self, det: &BigInt) {
        self.determinant = det.to_i128();
        let chi_ok = self
            .homology_euler_characteristic
            .is_none_or(|h| h == self.euler_characteristic);
        self.agree = Some(self.determinant == Some(self.euler_characteristic) && chi_ok);
    }
}

/// `dim H^k = dim C^k − rank δ^k − rank δ^{k−1}`.
pub fn homology(c: &CochainComplex) -> Result<HomologyReport> {
    if let Some(k) = c.find_d_squared_violation() {
        return Err(Error::InternalConsistency(format!("δ^{} δ^{} ≠ 0", k + 1, k)));
    }
    let ranks = c.ranks();
    let dims = c.level_dims();
    let homology_dims: Vec<usize> = (0..dims.len())
        .map(|k| dims[k] - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 })
        .collect();
    let mut report = HomologyReport::skeleton(c.layout());
    report.homology_euler_characteristic = Some(
        homology_dims
            .iter()
            .enumerate()
            .map(|(k, &d)| if k % 2 == 0 { d as i128 } else { -(d as i128) })
            .sum(),
    );
    report.homology_dims = Some(homology_dims);
    Ok(report)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    pub build: BuildOptions,
    /// Only dimensions and χ; no matrices are built.
    pub skip_homology: bool,
}

/// Builds the complex, computes cohomology and compares χ with
/// `det(x_i^{s_j})`.
pub fn verify_euler(d: &LinkDiagram, x: &ColorVector) -> Result<HomologyReport> {
    verify_euler_with(d, x, &VerifyOptions::default())
}

pub fn verify_euler_with(d: &LinkDiagram, x: &ColorVector, opts: &VerifyOptions) -> Result<HomologyReport> {
    let start = Instant::now();
    let layout = ComplexLayout::for_diagram_capped(d, x, opts.build.order, opts.build.max_n)?;
    let s = match layout.source() {
        LayoutSource::Diagram { s, .. } => s.clone(),
        LayoutSource::Matrix { .. } => unreachable!("diagram layout"),
    };
    let mut report = if opts.skip_homology {
        HomologyReport::dims_only(&layout)
    } else {
        homology(&layout.materialize(opts.build.budget)?)?
    };
    let det = det_exact(&vandermonde_matrix(x, &s)?);
    report.set_determinant(&det);
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Outcome of comparing a complex against the one built from reordered
/// crossings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderIndependence {
    pub identical: bool,
    /// False means the theorem does not promise equality for this diagram.
    pub height_uniform: bool,
}

pub fn order_independence_check(
    d: &LinkDiagram,
    x: &ColorVector,
    reordering: &Permutation,
) -> Result<OrderIndependence> {
    order_independence_check_with(d, x, reordering, &BuildOptions::default())
}

pub fn order_independence_check_with(
    d: &LinkDiagram,
    x: &ColorVector,
    reordering: &Permutation,
    opts: &BuildOptions,
) -> Result<OrderIndependence> {
    let height_uniform = d.is_height_uniform()?.uniform;
    let original = build_complex_with(d, x, opts)?;
    let reordered = build_complex_with(&d.reordered(reordering)?, x, opts)?;
    let identical =
        original.level_dims() == reordered.level_dims() && original.differentials() == reordered.differentials();
    Ok(OrderIndependence {
        identical,
        height_uniform,
    })
}
