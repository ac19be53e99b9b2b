//! Link diagrams as lists of crossings with explicit 0- and 1-smoothings.
//!
//! Every crossing names its four arc ends; each arc end identifier occurs at
//! exactly two crossing ends in a closed diagram. Resolving every crossing
//! with one of its two pairings joins arc ends into circles, which are
//! counted with a union-find over the identifiers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bruhat::Permutation;
use crate::error::{Error, Result};

pub type ArcEnd = u32;

/// Smoothings are enumerated exhaustively below this many crossings.
pub const DEFAULT_UNIFORMITY_CAP: usize = 20;

/// One crossing: two unordered pairs of arc ends for each smoothing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub zero: [[ArcEnd; 2]; 2],
    pub one: [[ArcEnd; 2]; 2],
}

impl Crossing {
    pub fn new(zero: [[ArcEnd; 2]; 2], one: [[ArcEnd; 2]; 2]) -> Self {
        Crossing { zero, one }
    }

    fn pairing(&self, one: bool) -> &[[ArcEnd; 2]; 2] {
        if one {
            &self.one
        } else {
            &self.zero
        }
    }

    fn ends(pairing: &[[ArcEnd; 2]; 2]) -> [ArcEnd; 4] {
        let mut e = [pairing[0][0], pairing[0][1], pairing[1][0], pairing[1][1]];
        e.sort_unstable();
        e
    }

    fn normalized(pairing: &[[ArcEnd; 2]; 2]) -> [[ArcEnd; 2]; 2] {
        let mut p = pairing.map(|[a, b]| [a.min(b), a.max(b)]);
        p.sort_unstable();
        p
    }

    fn validate(&self, idx: usize) -> Result<()> {
        if Self::ends(&self.zero) != Self::ends(&self.one) {
            return Err(Error::Format(format!(
                "crossing {}: zero pairing {:?} and one pairing {:?} use different arc ends",
                idx + 1,
                self.zero,
                self.one
            )));
        }
        if Self::normalized(&self.zero) == Self::normalized(&self.one) {
            return Err(Error::Format(format!(
                "crossing {}: zero and one pairings coincide",
                idx + 1
            )));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramFile {
    crossings: Vec<Crossing>,
    #[serde(default)]
    free_loops: usize,
}

/// A closed link diagram with a total order on its crossings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    free_loops: usize,
    /// Distinct arc end identifiers, sorted; union-find works on positions.
    ends: Vec<ArcEnd>,
    /// Per crossing, per smoothing, the two joined pairs as dense indices.
    dense: Vec<[[[usize; 2]; 2]; 2]>,
}

impl LinkDiagram {
    pub fn new(crossings: Vec<Crossing>, free_loops: usize) -> Result<Self> {
        let mut counts: BTreeMap<ArcEnd, usize> = BTreeMap::new();
        for (i, c) in crossings.iter().enumerate() {
            c.validate(i)?;
            for e in Crossing::ends(&c.zero) {
                *counts.entry(e).or_default() += 1;
            }
        }
        let bad: Vec<String> = counts
            .iter()
            .filter(|(_, &k)| k != 2)
            .map(|(e, k)| format!("{e} (used {k} times)"))
            .collect();
        if !bad.is_empty() {
            return Err(Error::Structural(format!(
                "every arc end must appear exactly twice; offending: {}",
                bad.join(", ")
            )));
        }
        let ends: Vec<ArcEnd> = counts.keys().copied().collect();
        let pos = |e: ArcEnd| ends.binary_search(&e).expect("arc end was counted");
        let dense = crossings
            .iter()
            .map(|c| {
                [false, true].map(|one| c.pairing(one).map(|pair| pair.map(pos)))
            })
            .collect();
        Ok(LinkDiagram {
            crossings,
            free_loops,
            ends,
            dense,
        })
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn to_json(&self) -> String {
        let file = DiagramFile {
            crossings: self.crossings.clone(),
            free_loops: self.free_loops,
        };
        serde_json::to_string_pretty(&file).expect("diagram serializes")
    }

    fn resolve(&self, smoothing: impl Fn(usize) -> bool) -> UnionFind {
        let mut uf = UnionFind::new(self.ends.len());
        for (k, d) in self.dense.iter().enumerate() {
            for [a, b] in d[smoothing(k) as usize] {
                uf.union(a, b);
            }
        }
        uf
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.crossings.len() {
            return Err(Error::Precondition(format!(
                "smoothing has length {len} but the diagram has {} crossings",
                self.crossings.len()
            )));
        }
        Ok(())
    }

    /// Number of circles after resolving crossing `k` with its
    /// `smoothing[k]` pairing, including free loops.
    pub fn circle_count(&self, smoothing: &[bool]) -> Result<usize> {
        self.check_len(smoothing.len())?;
        Ok(self.resolve(|k| smoothing[k]).components() + self.free_loops)
    }

    /// As [`circle_count`](Self::circle_count) with bit `k` of `mask` selecting crossing `k`.
    pub fn circle_count_mask(&self, mask: u64) -> usize {
        self.resolve(|k| mask >> k & 1 == 1).components() + self.free_loops
    }

    /// The circles of a smoothing as sorted lists of arc end identifiers,
    /// ordered by their smallest identifier. Free loops are not listed.
    pub fn circles(&self, smoothing: &[bool]) -> Result<Vec<Vec<ArcEnd>>> {
        self.check_len(smoothing.len())?;
        let mut uf = self.resolve(|k| smoothing[k]);
        let mut groups: BTreeMap<usize, Vec<ArcEnd>> = BTreeMap::new();
        for (i, &e) in self.ends.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().push(e);
        }
        let mut circles: Vec<Vec<ArcEnd>> = groups.into_values().collect();
        circles.sort();
        Ok(circles)
    }

    /// `s_k` = circles when crossings `1..=k` take the 1-smoothing.
    pub fn s_vector(&self) -> Result<SmoothingProfile> {
        let n = self.crossings.len();
        if n == 0 {
            return Err(Error::Precondition("diagram has no crossings".into()));
        }
        let s = (1..=n)
            .map(|k| self.resolve(|c| c < k).components() + self.free_loops)
            .collect();
        Ok(SmoothingProfile(s))
    }

    /// Whether the height of a smoothing determines its circle count.
    pub fn is_height_uniform(&self) -> Result<HeightUniformity> {
        self.is_height_uniform_capped(DEFAULT_UNIFORMITY_CAP)
    }

    pub fn is_height_uniform_capped(&self, cap: usize) -> Result<HeightUniformity> {
        let n = self.crossings.len();
        if n > cap || n >= 64 {
            return Err(Error::size("crossings for exhaustive smoothing scan", n as u128, cap as u128));
        }
        let mut first_at_height: Vec<Option<(u64, usize)>> = vec![None; n + 1];
        for mask in 0..(1u64 << n) {
            let h = mask.count_ones() as usize;
            let count = self.circle_count_mask(mask);
            match first_at_height[h] {
                None => first_at_height[h] = Some((mask, count)),
                Some((m0, c0)) if c0 != count => {
                    let bits = |m: u64| (0..n).map(|k| m >> k & 1 == 1).collect();
                    return Ok(HeightUniformity {
                        uniform: false,
                        witness: Some(UniformityWitness {
                            first: bits(m0),
                            first_circles: c0,
                            second: bits(mask),
                            second_circles: count,
                        }),
                    });
                }
                Some(_) => {}
            }
        }
        Ok(HeightUniformity {
            uniform: true,
            witness: None,
        })
    }

    /// The same diagram with crossings listed as `order`: new crossing `i`
    /// is old crossing `order(i)`.
    pub fn reordered(&self, order: &Permutation) -> Result<LinkDiagram> {
        self.check_len(order.len())?;
        let crossings = order
            .entries()
            .iter()
            .map(|&k| self.crossings[k - 1].clone())
            .collect();
        LinkDiagram::new(crossings, self.free_loops)
    }

    pub fn relabeled(&self, f: impl Fn(ArcEnd) -> ArcEnd) -> Result<LinkDiagram> {
        let map = |p: [[ArcEnd; 2]; 2]| p.map(|pair| pair.map(&f));
        let crossings = self
            .crossings
            .iter()
            .map(|c| Crossing::new(map(c.zero), map(c.one)))
            .collect();
        LinkDiagram::new(crossings, self.free_loops)
    }

    /// Crossings of `self` followed by those of `other`, arc ends of `other`
    /// shifted past the largest identifier of `self`.
    pub fn disjoint_union(&self, other: &LinkDiagram) -> Result<LinkDiagram> {
        let shift = self.ends.last().map_or(0, |&e| e + 1);
        let moved = other.relabeled(|e| e + shift)?;
        let mut crossings = self.crossings.clone();
        crossings.extend(moved.crossings);
        LinkDiagram::new(crossings, self.free_loops + other.free_loops)
    }
}

pub fn parse_diagram(text: &str) -> Result<LinkDiagram> {
    let file: DiagramFile = serde_json::from_str(text)?;
    LinkDiagram::new(file.crossings, file.free_loops)
}

/// Closure of the 2-braid `σ₁ⁿ`, crossings numbered bottom to top.
///
/// The strand segments entering crossing `k` from below are arcs `2(k-1)`
/// (left) and `2(k-1)+1` (right); the closure identifies the top of the last
/// crossing with the bottom of the first. The 0-smoothing keeps the two
/// strands vertical, the 1-smoothing joins the bottom pair and the top pair.
pub fn torus_two_n(n: usize) -> Result<LinkDiagram> {
    if n == 0 {
        return Err(Error::Precondition("T(2, n) needs at least one crossing".into()));
    }
    let crossings = (0..n)
        .map(|k| {
            let (bl, br) = (2 * k as ArcEnd, 2 * k as ArcEnd + 1);
            let t = ((k + 1) % n) as ArcEnd;
            let (tl, tr) = (2 * t, 2 * t + 1);
            Crossing::new([[bl, tl], [br, tr]], [[bl, br], [tl, tr]])
        })
        .collect();
    LinkDiagram::new(crossings, 0)
}

/// Circle counts `s_1..s_n` of the staircase smoothings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothingProfile(pub Vec<usize>);

impl SmoothingProfile {
    /// `s_k` for `1 <= k <= n`.
    pub fn get(&self, k: usize) -> usize {
        self.0[k - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightUniformity {
    pub uniform: bool,
    pub witness: Option<UniformityWitness>,
}

/// Two smoothings of equal height with different circle counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformityWitness {
    pub first: Vec<bool>,
    pub first_circles: usize,
    pub second: Vec<bool>,
    pub second_circles: usize,
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }

    fn components(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &[u8]) -> Vec<bool> {
        s.iter().map(|&b| b == 1).collect()
    }

    #[test]
    fn torus_shapes() {
        let t2 = torus_two_n(2).unwrap();
        assert_eq!(t2.num_crossings(), 2);
        assert_eq!(t2.ends.len(), 4);
        assert_eq!(torus_two_n(3).unwrap().s_vector().unwrap().0, vec![1, 2, 3]);
        assert_eq!(torus_two_n(1).unwrap().s_vector().unwrap().0, vec![1]);
        assert_eq!(torus_two_n(5).unwrap().s_vector().unwrap().0, vec![1, 2, 3, 4, 5]);
        assert!(torus_two_n(0).is_err());
    }

    #[test]
    fn torus_circle_counts() {
        let t3 = torus_two_n(3).unwrap();
        assert_eq!(t3.circle_count(&bits(&[0, 0, 0])).unwrap(), 2);
        assert_eq!(t3.circle_count(&bits(&[1, 0, 0])).unwrap(), 1);
        let t4 = torus_two_n(4).unwrap();
        assert_eq!(t4.circle_count(&bits(&[1, 1, 0, 1])).unwrap(), 3);
        let t2 = torus_two_n(2).unwrap();
        assert_eq!(t2.circle_count(&bits(&[0, 0])).unwrap(), 2);
        assert!(matches!(t2.circle_count(&bits(&[0])), Err(Error::Precondition(_))));
    }

    #[test]
    fn json_roundtrip() {
        let t2 = torus_two_n(2).unwrap();
        assert_eq!(parse_diagram(&t2.to_json()).unwrap(), t2);
    }

    #[test]
    fn rejects_open_diagram() {
        let text = r#"{"crossings": [{"zero": [[0,1],[2,3]], "one": [[0,2],[1,3]]}]}"#;
        let err = parse_diagram(text).unwrap_err();
        assert!(matches!(err, Error::Structural(ref m) if m.contains("0 (used 1 times)")), "{err}");
    }

    #[test]
    fn rejects_equal_pairings() {
        let text = r#"{"crossings": [{"zero": [[0,1],[0,1]], "one": [[1,0],[1,0]]}]}"#;
        assert!(matches!(parse_diagram(text), Err(Error::Format(_))));
        let text = r#"{"crossings": [{"zero": [[0,1],[0,1]], "one": [[0,0],[1,2]]}]}"#;
        assert!(matches!(parse_diagram(text), Err(Error::Format(_))));
    }

    #[test]
    fn free_loops_count() {
        let text = r#"{"crossings": [{"zero": [[0,0],[1,1]], "one": [[0,1],[0,1]]}], "free_loops": 2}"#;
        let d = parse_diagram(text).unwrap();
        assert_eq!(d.s_vector().unwrap().0, vec![3]);
        assert_eq!(d.circle_count(&[false]).unwrap(), 4);
    }

    #[test]
    fn height_uniformity() {
        assert!(torus_two_n(3).unwrap().is_height_uniform().unwrap().uniform);
        assert!(torus_two_n(1).unwrap().is_height_uniform().unwrap().uniform);
        let u = torus_two_n(1)
            .unwrap()
            .disjoint_union(&torus_two_n(2).unwrap())
            .unwrap();
        let h = u.is_height_uniform().unwrap();
        assert!(!h.uniform);
        let w = h.witness.unwrap();
        assert_eq!((w.first, w.first_circles), (bits(&[1, 1, 0]), 2));
        assert_eq!((w.second, w.second_circles), (bits(&[0, 1, 1]), 4));
    }

    #[test]
    fn uniformity_cap() {
        let t = torus_two_n(4).unwrap();
        assert!(matches!(t.is_height_uniform_capped(3), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn circles_are_ordered() {
        let t3 = torus_two_n(3).unwrap();
        let c = t3.circles(&bits(&[1, 1, 0])).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c[0][0] < c[1][0]);
        assert_eq!(c.iter().map(Vec::len).sum::<usize>(), 6);
    }
}
