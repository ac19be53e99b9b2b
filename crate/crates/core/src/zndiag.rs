//! Arc-and-dot morphisms between color vectors and the chain maps they
//! induce on the diagram complexes.
//!
//! A morphism `x → y` is a partial matching of arcs `(i, j)` with `i <= j`
//! and `x_i = y_j`, plus a multiset of dot colors. Composition is written in
//! diagrammatic order: `a.compose(&b)` is `a` followed by `b`, and its chain
//! map is `chain_map(b) · chain_map(a)`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{
    build_complex_with, BuildOptions, CochainComplex, ColorVector, ColoringOrder, ComplexLayout, LayoutSource,
};
use crate::error::{Error, Result};
use crate::gf2::{GF2Matrix, GF2Vector, QuotientBasis};
use crate::linkdiag::LinkDiagram;

/// A validated arc-and-dot morphism. Positions are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MorphismFile", into = "MorphismFile")]
pub struct ZndiagMorphism {
    source: ColorVector,
    target: ColorVector,
    /// Sorted by source position.
    arcs: Vec<(usize, usize)>,
    /// Sorted.
    dots: Vec<usize>,
}

#[derive(Clone, Serialize, Deserialize)]
struct MorphismFile {
    source: Vec<usize>,
    target: Vec<usize>,
    #[serde(default)]
    arcs: Vec<[usize; 2]>,
    #[serde(default)]
    dots: Vec<usize>,
}

impl TryFrom<MorphismFile> for ZndiagMorphism {
    type Error = Error;

    fn try_from(f: MorphismFile) -> Result<Self> {
        ZndiagMorphism::new(
            ColorVector::new(f.source)?,
            ColorVector::new(f.target)?,
            f.arcs.into_iter().map(|[i, j]| (i, j)).collect(),
            f.dots,
        )
    }
}

impl From<ZndiagMorphism> for MorphismFile {
    fn from(m: ZndiagMorphism) -> Self {
        MorphismFile {
            source: m.source.into(),
            target: m.target.into(),
            arcs: m.arcs.into_iter().map(|(i, j)| [i, j]).collect(),
            dots: m.dots,
        }
    }
}

impl ZndiagMorphism {
    pub fn new(source: ColorVector, target: ColorVector, arcs: Vec<(usize, usize)>, dots: Vec<usize>) -> Result<Self> {
        let n = source.len();
        if target.len() != n {
            return Err(Error::Constraint(format!(
                "source has length {n} but target has length {}",
                target.len()
            )));
        }
        let mut used_i = BTreeSet::new();
        let mut used_j = BTreeSet::new();
        for &(i, j) in &arcs {
            if i == 0 || j == 0 || i > n || j > n {
                return Err(Error::Constraint(format!("arc ({i},{j}) leaves positions 1..{n}")));
            }
            if i > j {
                return Err(Error::Constraint(format!("arc ({i},{j}) has i > j")));
            }
            if source.get(i) != target.get(j) {
                return Err(Error::Constraint(format!(
                    "arc ({i},{j}) joins color {} to color {}",
                    source.get(i),
                    target.get(j)
                )));
            }
            if !used_i.insert(i) {
                return Err(Error::Matching(format!("source position {i} is used twice")));
            }
            if !used_j.insert(j) {
                return Err(Error::Matching(format!("target position {j} is used twice")));
            }
        }
        if dots.contains(&0) {
            return Err(Error::Constraint("dot colors must be positive".into()));
        }
        let mut arcs = arcs;
        arcs.sort_unstable();
        let mut dots = dots;
        dots.sort_unstable();
        Ok(ZndiagMorphism {
            source,
            target,
            arcs,
            dots,
        })
    }

    pub fn identity(x: &ColorVector) -> Self {
        ZndiagMorphism {
            source: x.clone(),
            target: x.clone(),
            arcs: (1..=x.len()).map(|i| (i, i)).collect(),
            dots: Vec::new(),
        }
    }

    pub fn source(&self) -> &ColorVector {
        &self.source
    }

    pub fn target(&self) -> &ColorVector {
        &self.target
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn dots(&self) -> &[usize] {
        &self.dots
    }

    /// `self` followed by `next`.
    pub fn compose(&self, next: &ZndiagMorphism) -> Result<ZndiagMorphism> {
        if self.target != next.source {
            return Err(Error::Composition(format!(
                "target {} does not match source {}",
                self.target, next.source
            )));
        }
        let n = self.source.len();
        let mut left = vec![None; n + 1];
        for &(i, j) in &self.arcs {
            left[j] = Some(i);
        }
        let mut right = vec![None; n + 1];
        for &(j, k) in &next.arcs {
            right[j] = Some(k);
        }
        let mut arcs = Vec::new();
        let mut dots: Vec<usize> = self.dots.iter().chain(&next.dots).copied().collect();
        for j in 1..=n {
            match (left[j], right[j]) {
                (Some(i), Some(k)) => arcs.push((i, k)),
                (None, None) => dots.push(self.target.get(j)),
                _ => {}
            }
        }
        ZndiagMorphism::new(self.source.clone(), next.target.clone(), arcs, dots)
    }

    /// `∏ (c mod 2)` over the dots: the value of the closed spheres.
    pub fn dot_scalar(&self) -> bool {
        self.dots.iter().all(|c| c % 2 == 1)
    }
}

pub fn parse_morphism(text: &str) -> Result<ZndiagMorphism> {
    Ok(serde_json::from_str(text)?)
}

/// Per-level maps `C^k(D, x) → C^k(D, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub levels: Vec<GF2Matrix>,
}

impl ChainMap {
    /// `next ∘ self`, level by level.
    pub fn then(&self, next: &ChainMap) -> ChainMap {
        ChainMap {
            levels: self.levels.iter().zip(&next.levels).map(|(a, b)| b.mul(a)).collect(),
        }
    }

    /// `δ_y^k F^k = F^{k+1} δ_x^k` at every level.
    pub fn check_commutes(&self, source: &CochainComplex, target: &CochainComplex) -> Result<()> {
        for k in 0..self.levels.len().saturating_sub(1) {
            let lhs = target.differential(k).mul(&self.levels[k]);
            let rhs = self.levels[k + 1].mul(source.differential(k));
            if lhs != rhs {
                return Err(Error::ChainMapViolation(format!(
                    "square at level {k} does not commute"
                )));
            }
        }
        Ok(())
    }
}

fn diagram_colors(layout: &ComplexLayout) -> Result<&ColorVector> {
    match layout.source() {
        LayoutSource::Diagram { x, .. } => Ok(x),
        LayoutSource::Matrix { .. } => Err(Error::Precondition("morphisms act on diagram complexes only".into())),
    }
}

/// The chain map of `m` between two layouts of the same diagram.
pub fn chain_map_between(source: &ComplexLayout, target: &ComplexLayout, m: &ZndiagMorphism) -> Result<ChainMap> {
    if diagram_colors(source)? != m.source() || diagram_colors(target)? != m.target() {
        return Err(Error::Precondition("layouts do not match the morphism's color vectors".into()));
    }
    let same_diagram = matches!(
        (source.source(), target.source()),
        (LayoutSource::Diagram { s: a, .. }, LayoutSource::Diagram { s: b, .. }) if a == b
    );
    if !same_diagram || source.order() != target.order() {
        return Err(Error::Precondition("layouts come from different diagrams or orders".into()));
    }
    let n = m.source.len();
    let mut from = vec![None; n];
    let mut to = vec![None; n];
    for &(i, j) in &m.arcs {
        from[i - 1] = Some(j - 1);
        to[j - 1] = Some(i - 1);
    }
    let scalar = m.dot_scalar();
    let levels = (0..source.num_levels())
        .map(|k| {
            let rows = target.level_dims()[k];
            let cols = source.level_dims()[k];
            if !scalar {
                return GF2Matrix::zeros(rows, cols);
            }
            let trips: Vec<Vec<(usize, usize)>> = source
                .blocks(k)
                .par_iter()
                .zip(target.blocks(k))
                .map(|(sb, tb)| {
                    let mut trips = Vec::new();
                    let mut digits = Vec::new();
                    let mut out = vec![0usize; tb.num_digits()];
                    let mut starts = Vec::with_capacity(n + 1);
                    let mut acc = 0;
                    for g in 0..n {
                        starts.push(acc);
                        acc += tb.group(g).1;
                    }
                    starts.push(acc);
                    let free: Vec<usize> = (0..n).filter(|&j| to[j].is_none()).collect();
                    'basis: for local in 0..sb.dim {
                        sb.decode(local, &mut digits);
                        for (i, dest) in from.iter().enumerate() {
                            let gd = sb.group_digits(i, &digits);
                            match *dest {
                                Some(j) if j == i => out[starts[j]..starts[j + 1]].copy_from_slice(gd),
                                _ => {
                                    if gd.iter().any(|&d| d != gd[0]) {
                                        continue 'basis;
                                    }
                                    if let Some(j) = *dest {
                                        out[starts[j]..starts[j + 1]].fill(gd[0]);
                                    }
                                }
                            }
                        }
                        // Unmatched target groups: sum over constant colorings.
                        let mut consts = vec![0usize; free.len()];
                        loop {
                            for (c, &j) in consts.iter().zip(&free) {
                                out[starts[j]..starts[j + 1]].fill(*c);
                            }
                            trips.push((tb.offset + tb.encode(&out), sb.offset + local));
                            let mut p = 0;
                            loop {
                                if p == free.len() {
                                    continue 'basis;
                                }
                                consts[p] += 1;
                                if consts[p] < tb.group(free[p]).0 {
                                    break;
                                }
                                consts[p] = 0;
                                p += 1;
                            }
                        }
                    }
                    trips
                })
                .collect();
            GF2Matrix::from_triplets(rows, cols, trips.into_iter().flatten())
        })
        .collect();
    Ok(ChainMap { levels })
}

/// Builds both layouts with default options and returns the chain map.
pub fn chain_map(d: &LinkDiagram, m: &ZndiagMorphism) -> Result<ChainMap> {
    let src = ComplexLayout::for_diagram(d, m.source(), ColoringOrder::ColorMajor)?;
    let tgt = ComplexLayout::for_diagram(d, m.target(), ColoringOrder::ColorMajor)?;
    chain_map_between(&src, &tgt, m)
}

/// Deterministic bases of `H^k` for every level of a complex.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    pub levels: Vec<QuotientBasis>,
}

impl CohomologyBasis {
    pub fn new(c: &CochainComplex) -> Result<Self> {
        let levels = (0..c.num_levels())
            .into_par_iter()
            .map(|k| {
                let cycles = c.differential(k).nullspace_basis();
                let boundaries = if k > 0 {
                    c.differential(k - 1).column_space_basis()
                } else {
                    Vec::new()
                };
                QuotientBasis::new(c.level_dims()[k], &cycles, &boundaries)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CohomologyBasis { levels })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(QuotientBasis::dim).collect()
    }
}

/// Matrices of `H^k(D, x) → H^k(D, y)` in the bases of [`CohomologyBasis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMap {
    pub levels: Vec<GF2Matrix>,
}

impl InducedMap {
    /// `next ∘ self`, level by level.
    pub fn then(&self, next: &InducedMap) -> InducedMap {
        InducedMap {
            levels: self.levels.iter().zip(&next.levels).map(|(a, b)| b.mul(a)).collect(),
        }
    }
}

pub fn induced_cohomology_map_between(
    source_basis: &CohomologyBasis,
    target: &CochainComplex,
    target_basis: &CohomologyBasis,
    f: &ChainMap,
) -> Result<InducedMap> {
    let levels = (0..f.levels.len())
        .map(|k| {
            let columns = source_basis.levels[k]
                .representatives()
                .iter()
                .map(|rep| {
                    let image = f.levels[k].mul_vec(rep);
                    if !target.differential(k).mul_vec(&image).is_zero() {
                        return Err(Error::ChainMapViolation(format!(
                            "image of a level-{k} cycle is not a cycle"
                        )));
                    }
                    target_basis.levels[k]
                        .coordinates(&image)
                        .map_err(|e| Error::ChainMapViolation(format!("level {k}: {e}")))
                })
                .collect::<Result<Vec<GF2Vector>>>()?;
            Ok(GF2Matrix::from_columns(target_basis.levels[k].dim(), &columns))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InducedMap { levels })
}

/// Builds both complexes, checks the chain-map law and returns the maps on
/// cohomology.
pub fn induced_cohomology_map(d: &LinkDiagram, m: &ZndiagMorphism) -> Result<InducedMap> {
    let opts = BuildOptions::default();
    let src = build_complex_with(d, m.source(), &opts)?;
    let tgt = build_complex_with(d, m.target(), &opts)?;
    let f = chain_map_between(src.layout(), tgt.layout(), m)?;
    f.check_commutes(&src, &tgt)?;
    induced_cohomology_map_between(&CohomologyBasis::new(&src)?, &tgt, &CohomologyBasis::new(&tgt)?, &f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use crate::linkdiag::torus_two_n;

    fn cv(x: &[usize]) -> ColorVector {
        ColorVector::new(x.to_vec()).unwrap()
    }

    fn mor(x: &[usize], y: &[usize], arcs: &[(usize, usize)], dots: &[usize]) -> Result<ZndiagMorphism> {
        ZndiagMorphism::new(cv(x), cv(y), arcs.to_vec(), dots.to_vec())
    }

    #[test]
    fn validation() {
        assert!(mor(&[3, 5], &[4, 3], &[(1, 2)], &[]).is_ok());
        assert!(matches!(mor(&[3, 3], &[3, 3], &[(2, 1)], &[]), Err(Error::Constraint(_))));
        assert!(matches!(mor(&[3, 5], &[4, 5], &[(1, 2)], &[]), Err(Error::Constraint(_))));
        assert!(matches!(
            mor(&[3, 3], &[3, 3], &[(1, 2), (1, 1)], &[]),
            Err(Error::Matching(_))
        ));
        assert!(matches!(
            mor(&[3, 3], &[3, 3], &[(1, 2), (2, 2)], &[]),
            Err(Error::Matching(_))
        ));
    }

    #[test]
    fn composition() {
        let a = mor(&[2, 2, 2], &[2, 2, 2], &[(1, 2)], &[]).unwrap();
        let b = mor(&[2, 2, 2], &[2, 2, 2], &[(2, 3)], &[]).unwrap();
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.arcs(), &[(1, 3)]);
        // Middle points 1 and 3 are unmatched on both sides.
        assert_eq!(ab.dots(), &[2, 2]);
        let id = ZndiagMorphism::identity(&cv(&[2, 2, 2]));
        assert_eq!(id.compose(&a).unwrap(), a);
        assert_eq!(a.compose(&id).unwrap(), a);
        let c = mor(&[4, 1], &[4, 1], &[(1, 1)], &[]).unwrap();
        let d = mor(&[4, 1], &[4, 1], &[(1, 1)], &[]).unwrap();
        assert_eq!(c.compose(&d).unwrap().dots(), &[1]);
        assert!(matches!(a.compose(&c), Err(Error::Composition(_))));
    }

    #[test]
    fn cap_then_cup() {
        let d = torus_two_n(1).unwrap();
        let f = chain_map(&d, &mor(&[2], &[2], &[], &[]).unwrap()).unwrap();
        assert_eq!(f.levels[0], GF2Matrix::from_rows(&[vec![1, 1], vec![1, 1]]));
    }

    #[test]
    fn identity_and_even_dots() {
        let d = torus_two_n(3).unwrap();
        let x = cv(&[1, 2, 3]);
        let f = chain_map(&d, &ZndiagMorphism::identity(&x)).unwrap();
        let c = build_complex(&d, &x).unwrap();
        for (k, l) in f.levels.iter().enumerate() {
            assert_eq!(*l, GF2Matrix::identity(c.level_dims()[k]));
        }
        let z = chain_map(&d, &mor(&[1, 2, 3], &[1, 2, 3], &[(1, 1)], &[4]).unwrap()).unwrap();
        assert!(z.levels.iter().all(GF2Matrix::is_zero));
    }

    #[test]
    fn functor_on_small_case() {
        let d = torus_two_n(2).unwrap();
        let x = cv(&[2, 2]);
        let a = mor(&[2, 2], &[2, 2], &[(1, 2)], &[]).unwrap();
        let b = mor(&[2, 2], &[2, 2], &[(1, 1)], &[3]).unwrap();
        let c = build_complex(&d, &x).unwrap();
        let fa = chain_map(&d, &a).unwrap();
        let fb = chain_map(&d, &b).unwrap();
        fa.check_commutes(&c, &c).unwrap();
        fb.check_commutes(&c, &c).unwrap();
        assert_eq!(chain_map(&d, &a.compose(&b).unwrap()).unwrap(), fa.then(&fb));
    }

    #[test]
    fn induced_identity() {
        let d = torus_two_n(2).unwrap();
        let x = cv(&[1, 2]);
        let h = induced_cohomology_map(&d, &ZndiagMorphism::identity(&x)).unwrap();
        assert_eq!(h.levels[0], GF2Matrix::identity(2));
        assert_eq!(h.levels[1].shape(), (0, 0));
    }

    #[test]
    fn json_round_trip() {
        let m = parse_morphism(r#"{"source":[3,5],"target":[4,3],"arcs":[[1,2]],"dots":[7]}"#).unwrap();
        assert_eq!(m.arcs(), &[(1, 2)]);
        assert_eq!(parse_morphism(&serde_json::to_string(&m).unwrap()).unwrap(), m);
        assert!(parse_morphism(r#"{"source":[3],"target":[4],"arcs":[[1,1]]}"#).is_err());
    }
}
