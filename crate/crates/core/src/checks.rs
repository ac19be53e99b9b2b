//! Random instance generators and a fast self-check suite.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bruhat::{build_bruhat, Permutation};
use crate::complex::{
    build_complex, homology, order_independence_check, ColorVector, ColoringOrder, ComplexLayout,
};
use crate::error::Result;
use crate::gendet::{
    build_matrix_complex, det_exact, det_permutation_expansion, vandermonde_matrix, vandermonde_product,
    PosIntMatrix,
};
use crate::linkdiag::{torus_two_n, ArcEnd, Crossing, LinkDiagram};
use crate::tqft::{connected_map, frobenius_check, AlgebraSpec};
use crate::zndiag::{chain_map_between, CohomologyBasis, induced_cohomology_map_between, ZndiagMorphism};

/// A closed diagram with `crossings` crossings: `2·crossings` arc ids, each
/// used twice, dealt at random to crossing corners.
pub fn random_diagram<R: Rng>(rng: &mut R, crossings: usize) -> LinkDiagram {
    loop {
        let mut ends: Vec<ArcEnd> = (0..2 * crossings as ArcEnd).flat_map(|a| [a, a]).collect();
        ends.shuffle(rng);
        let cs: Vec<Crossing> = ends
            .chunks(4)
            .map(|c| Crossing::new([[c[0], c[1]], [c[2], c[3]]], [[c[0], c[3]], [c[1], c[2]]]))
            .collect();
        if let Ok(d) = LinkDiagram::new(cs, 0) {
            return d;
        }
    }
}

pub fn random_colors<R: Rng>(rng: &mut R, n: usize, max: usize) -> ColorVector {
    ColorVector::new((0..n).map(|_| rng.random_range(1..=max)).collect()).expect("entries are positive")
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    let mut v: Vec<usize> = (1..=n).collect();
    v.shuffle(rng);
    Permutation::new(v).expect("shuffle of 1..n")
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, max: u64) -> PosIntMatrix {
    let rows: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(1..=max)).collect()).collect();
    PosIntMatrix::from_u64(&rows).expect("entries are positive")
}

/// A random valid morphism out of `x`. The target keeps the colors of
/// matched positions and draws the rest from `1..=max`.
pub fn random_morphism<R: Rng>(rng: &mut R, x: &ColorVector, max: usize) -> ZndiagMorphism {
    let n = x.len();
    let mut targets: Vec<usize> = (1..=n).collect();
    targets.shuffle(rng);
    let mut arcs = Vec::new();
    let mut taken = vec![false; n + 1];
    for i in 1..=n {
        if !rng.random_bool(0.6) {
            continue;
        }
        if let Some(&j) = targets.iter().find(|&&j| j >= i && !taken[j]) {
            taken[j] = true;
            arcs.push((i, j));
        }
    }
    let mut y: Vec<usize> = (0..n).map(|_| rng.random_range(1..=max)).collect();
    for &(i, j) in &arcs {
        y[j - 1] = x.get(i);
    }
    let dots = (0..rng.random_range(0..=2)).map(|_| 2 * rng.random_range(0..2) + 1).collect();
    ZndiagMorphism::new(x.clone(), ColorVector::new(y).expect("positive"), arcs, dots)
        .expect("construction respects the constraints")
}

/// A random morphism `y → z` for a given source `y`.
pub fn random_morphism_from<R: Rng>(rng: &mut R, y: &ColorVector, max: usize) -> ZndiagMorphism {
    random_morphism(rng, y, max)
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn record(name: &str, outcome: Result<std::result::Result<String, String>>) -> CheckResult {
    let (passed, detail) = match outcome {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(e) => (false, e.to_string()),
    };
    CheckResult {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn mahonian(n: usize) -> Vec<usize> {
    let mut c = vec![1usize];
    for m in 1..=n {
        let mut next = vec![0; c.len() + m - 1];
        for (k, &v) in c.iter().enumerate() {
            for t in 0..m {
                next[k + t] += v;
            }
        }
        c = next;
    }
    c
}

fn bruhat_thin() -> Result<std::result::Result<String, String>> {
    for n in 1..=5 {
        let p = build_bruhat(n)?;
        if p.level_sizes() != mahonian(n) {
            return Ok(Err(format!("level sizes of S_{n} are not Mahonian")));
        }
        for a in 0..p.len() {
            let tops: std::collections::BTreeSet<usize> =
                p.up(a).iter().flat_map(|&m| p.up(m).iter().copied()).collect();
            for b in tops {
                let mids = p.length2_middles(p.element(a), p.element(b))?;
                if mids.len() != 2 {
                    return Ok(Err(format!("[{}, {}] has {} middles", p.element(a), p.element(b), mids.len())));
                }
            }
        }
    }
    Ok(Ok("S_1..S_5".into()))
}

fn torus_circles() -> Result<std::result::Result<String, String>> {
    for n in 1..=8 {
        let d = torus_two_n(n)?;
        for mask in 1u64..(1 << n) {
            if d.circle_count_mask(mask) != mask.count_ones() as usize {
                return Ok(Err(format!("T(2,{n}) smoothing {mask:b}")));
            }
        }
    }
    Ok(Ok("n <= 8".into()))
}

fn frobenius() -> Result<std::result::Result<String, String>> {
    for dim in 1..=8 {
        if !frobenius_check(AlgebraSpec::new(dim)?)? {
            return Ok(Err(format!("A_{dim}")));
        }
    }
    for dim in 1..=3 {
        let a = AlgebraSpec::new(dim)?;
        for r in 0..=3 {
            for m in 1..=3 {
                for l in 0..=3 {
                    if r + l == 0 {
                        continue;
                    }
                    let lhs = connected_map(a, m, l)?.mul(&connected_map(a, r, m)?);
                    if lhs != connected_map(a, r, l)? {
                        return Ok(Err(format!("dim {dim}: ({r},{m},{l}) composition")));
                    }
                }
            }
        }
    }
    Ok(Ok("dims 1..8".into()))
}

fn euler_and_d_squared(rng: &mut ChaCha8Rng) -> Result<std::result::Result<String, String>> {
    let mut cases: Vec<(LinkDiagram, ColorVector)> = Vec::new();
    for x in [vec![1, 2], vec![2, 1], vec![1, 2, 3], vec![3, 1, 2], vec![2, 2, 2]] {
        cases.push((torus_two_n(x.len())?, ColorVector::new(x)?));
    }
    for _ in 0..10 {
        cases.push((random_diagram(rng, 3), random_colors(rng, 3, 3)));
    }
    for (d, x) in &cases {
        let c = build_complex(d, x)?;
        let r = homology(&c)?;
        let det = det_exact(&vandermonde_matrix(x, &d.s_vector()?)?);
        if BigInt::from(r.euler_characteristic) != det || r.homology_euler_characteristic != Some(r.euler_characteristic)
        {
            return Ok(Err(format!("x = {x}: χ = {} but det = {det}", r.euler_characteristic)));
        }
    }
    let v = vandermonde_product(&[1, 2, 3, 4]);
    let layout = ComplexLayout::for_diagram(&torus_two_n(4)?, &ColorVector::new(vec![1, 2, 3, 4])?, ColoringOrder::ColorMajor)?;
    if BigInt::from(layout.euler_characteristic()) != v {
        return Ok(Err("T(2,4), x = (1,2,3,4)".into()));
    }
    Ok(Ok(format!("{} complexes", cases.len() + 1)))
}

fn order_independence(rng: &mut ChaCha8Rng) -> Result<std::result::Result<String, String>> {
    for n in 2..=3 {
        let d = torus_two_n(n)?;
        let x = random_colors(rng, n, 3);
        for _ in 0..3 {
            let p = random_permutation(rng, n);
            if !order_independence_check(&d, &x, &p)?.identical {
                return Ok(Err(format!("T(2,{n}) reordered by {p}")));
            }
        }
    }
    Ok(Ok("T(2,2), T(2,3)".into()))
}

fn matrices(rng: &mut ChaCha8Rng) -> Result<std::result::Result<String, String>> {
    for _ in 0..100 {
        let n = rng.random_range(1..=5);
        let m = random_matrix(rng, n, 9);
        if det_exact(&m) != det_permutation_expansion(&m)? {
            return Ok(Err(format!("{:?}", m.rows())));
        }
    }
    for _ in 0..10 {
        let n = rng.random_range(1..=3);
        let m = random_matrix(rng, n, 4);
        let c = build_matrix_complex(&m)?;
        if c.find_d_squared_violation().is_some() || BigInt::from(c.euler_characteristic()) != det_exact(&m) {
            return Ok(Err(format!("{:?}", m.rows())));
        }
    }
    Ok(Ok("100 determinants, 10 complexes".into()))
}

fn functoriality(rng: &mut ChaCha8Rng) -> Result<std::result::Result<String, String>> {
    for _ in 0..10 {
        let n = rng.random_range(1..=3);
        let d = torus_two_n(n)?;
        let x = random_colors(rng, n, 3);
        let a = random_morphism(rng, &x, 3);
        let b = random_morphism_from(rng, a.target(), 3);
        let ab = a.compose(&b)?;
        let cx = build_complex(&d, &x)?;
        let cy = build_complex(&d, a.target())?;
        let cz = build_complex(&d, b.target())?;
        let fa = chain_map_between(cx.layout(), cy.layout(), &a)?;
        let fb = chain_map_between(cy.layout(), cz.layout(), &b)?;
        let fab = chain_map_between(cx.layout(), cz.layout(), &ab)?;
        fa.check_commutes(&cx, &cy)?;
        fb.check_commutes(&cy, &cz)?;
        if fab != fa.then(&fb) {
            return Ok(Err(format!("chain maps of {a:?} and {b:?}")));
        }
        let (hx, hy, hz) = (CohomologyBasis::new(&cx)?, CohomologyBasis::new(&cy)?, CohomologyBasis::new(&cz)?);
        let ha = induced_cohomology_map_between(&hx, &cy, &hy, &fa)?;
        let hb = induced_cohomology_map_between(&hy, &cz, &hz, &fb)?;
        let hab = induced_cohomology_map_between(&hx, &cz, &hz, &fab)?;
        if hab != ha.then(&hb) {
            return Ok(Err(format!("induced maps of {a:?} and {b:?}")));
        }
    }
    Ok(Ok("10 composable pairs".into()))
}

/// Runs every check with a fixed seed.
pub fn run_all(seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        record("bruhat-thin", bruhat_thin()),
        record("torus-circles", torus_circles()),
        record("frobenius", frobenius()),
        record("euler-and-d-squared", euler_and_d_squared(&mut rng)),
        record("order-independence", order_independence(&mut rng)),
        record("matrix-complexes", matrices(&mut rng)),
        record("functoriality", functoriality(&mut rng)),
    ]
}
