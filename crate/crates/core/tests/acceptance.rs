//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on
//! any failure. All comparisons are exact integer or bit equality.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vcat_core::bruhat::build_bruhat;
use vcat_core::checks::{random_colors, random_diagram, random_matrix, random_morphism, random_permutation};
use vcat_core::complex::{
    build_complex, homology, order_independence_check, verify_euler_with, BuildOptions, ColorVector, ColoringOrder,
    ComplexLayout, VerifyOptions,
};
use vcat_core::gendet::{build_matrix_complex, det_exact, det_permutation_expansion, vandermonde_matrix};
use vcat_core::gf2::GF2Matrix;
use vcat_core::linkdiag::{torus_two_n, LinkDiagram};
use vcat_core::tqft::{connected_map, frobenius_check, AlgebraSpec};
use vcat_core::zndiag::{chain_map_between, induced_cohomology_map_between, CohomologyBasis, ZndiagMorphism};

use common::{cofactor_det, mahonian_oracle, vandermonde_oracle, walk_circles};

/// Complexes up to this total dimension get full dense cohomology; larger
/// ones are checked through dimensions and the matrix-free δ² test.
const DENSE_LIMIT: u128 = 30_000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cv(x: &[usize]) -> ColorVector {
    ColorVector::new(x.to_vec()).unwrap()
}

/// χ of the complex; δ² = 0 is checked on the way. Uses cohomology when
/// the complex is small enough, and then also compares both χ's.
fn checked_chi(d: &LinkDiagram, x: &ColorVector) -> Result<i128, String> {
    let layout = ComplexLayout::for_diagram(d, x, ColoringOrder::ColorMajor).map_err(|e| e.to_string())?;
    if layout.total_dim() <= DENSE_LIMIT {
        let c = layout.materialize(usize::MAX).map_err(|e| e.to_string())?;
        let r = homology(&c).map_err(|e| e.to_string())?;
        ensure(r.homology_euler_characteristic == Some(r.euler_characteristic), || {
            format!("x = {x}: homology χ differs from cochain χ")
        })?;
        Ok(r.euler_characteristic)
    } else {
        if let Some((k, idx)) = layout.find_d_squared_violation() {
            return Err(format!("x = {x}: δδ ≠ 0 at level {k}, basis vector {idx}"));
        }
        Ok(layout.euler_characteristic())
    }
}

fn criterion1_cases() -> Vec<Vec<usize>> {
    vec![
        vec![1, 2],
        vec![2, 1],
        vec![1, 2, 3],
        vec![3, 1, 2],
        vec![2, 2, 2],
        vec![1, 2, 3, 4],
        vec![2, 3, 5, 7],
    ]
}

fn criterion2_cases() -> Vec<(LinkDiagram, ColorVector)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    (0..25)
        .map(|_| (random_diagram(&mut rng, 3), random_colors(&mut rng, 3, 3)))
        .collect()
}

fn vandermonde_identity() -> Outcome {
    let start = Instant::now();
    let mut values = Vec::new();
    for x in criterion1_cases() {
        let layout = ComplexLayout::for_diagram(&torus_two_n(x.len()).unwrap(), &cv(&x), ColoringOrder::ColorMajor)
            .map_err(|e| e.to_string())?;
        let chi = BigInt::from(layout.euler_characteristic());
        let expected = vandermonde_oracle(&x);
        ensure(chi == expected, || format!("x = {x:?}: χ = {chi}, expected {expected}"))?;
        values.push(format!("{x:?}→{chi}"));
    }
    ensure(vandermonde_oracle(&[1, 2, 3]) == BigInt::from(12), || "V(1,2,3)".into())?;
    ensure(vandermonde_oracle(&[1, 2, 3, 4]) == BigInt::from(288), || "V(1,2,3,4)".into())?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(values.join(" "))
}

fn generalized_identity() -> Outcome {
    for (d, x) in criterion2_cases() {
        let s = d.s_vector().map_err(|e| e.to_string())?;
        let det = det_exact(&vandermonde_matrix(&x, &s).map_err(|e| e.to_string())?);
        let m: Vec<Vec<i64>> = x
            .as_slice()
            .iter()
            .map(|&xi| s.as_slice().iter().map(|&sj| (xi as i64).pow(sj as u32)).collect())
            .collect();
        ensure(det == cofactor_det(&m), || format!("det_exact disagrees with cofactor oracle for x = {x}"))?;
        let chi = checked_chi(&d, &x)?;
        ensure(BigInt::from(chi) == det, || format!("x = {x}, s = {:?}: χ = {chi}, det = {det}", s.as_slice()))?;
    }
    Ok("25 random diagrams".into())
}

fn d_squared_zero() -> Outcome {
    let mut count = 0;
    for x in criterion1_cases() {
        checked_chi(&torus_two_n(x.len()).unwrap(), &cv(&x))?;
        count += 1;
    }
    for (d, x) in criterion2_cases() {
        checked_chi(&d, &x)?;
        count += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let c = rng.random_range(1..=4);
        let d = random_diagram(&mut rng, c);
        let x = random_colors(&mut rng, c, if c == 4 { 2 } else { 3 });
        checked_chi(&d, &x)?;
        count += 1;
    }
    Ok(format!("{count} complexes"))
}

fn order_independence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 1..=4 {
        let d = torus_two_n(n).unwrap();
        let x = random_colors(&mut rng, n, if n == 4 { 2 } else { 3 });
        for _ in 0..5 {
            let p = random_permutation(&mut rng, n);
            let r = order_independence_check(&d, &x, &p).map_err(|e| e.to_string())?;
            ensure(r.height_uniform, || format!("T(2,{n}) reported as not height-uniform"))?;
            ensure(r.identical, || format!("T(2,{n}), x = {x}, reordering {p}"))?;
        }
    }
    Ok("n = 1..4, 5 reorderings each".into())
}

fn torus_circle_counts() -> Outcome {
    let mut total = 0;
    for n in 1..=8 {
        let d = torus_two_n(n).unwrap();
        for mask in 1u64..(1 << n) {
            let s: Vec<bool> = (0..n).map(|k| mask >> k & 1 == 1).collect();
            let weight = mask.count_ones() as usize;
            let got = d.circle_count(&s).map_err(|e| e.to_string())?;
            ensure(got == weight && walk_circles(&d, &s) == weight, || {
                format!("T(2,{n}), smoothing {mask:0n$b}: {got} circles")
            })?;
            total += 1;
        }
    }
    Ok(format!("{total} smoothings"))
}

fn bruhat_thinness() -> Outcome {
    let mut intervals = 0;
    for n in 1..=5 {
        let p = build_bruhat(n).map_err(|e| e.to_string())?;
        ensure(p.level_sizes() == mahonian_oracle(n), || format!("S_{n} level sizes"))?;
        for a in 0..p.len() {
            let mut tops: Vec<usize> = p.up(a).iter().flat_map(|&m| p.up(m).iter().copied()).collect();
            tops.sort_unstable();
            tops.dedup();
            for b in tops {
                let mids = p.length2_middles(p.element(a), p.element(b)).map_err(|e| e.to_string())?;
                ensure(mids.len() == 2, || format!("[{}, {}]: {} middles", p.element(a), p.element(b), mids.len()))?;
                intervals += 1;
            }
        }
    }
    Ok(format!("{intervals} intervals in S_1..S_5"))
}

fn frobenius_axioms() -> Outcome {
    for dim in 1..=8 {
        let ok = frobenius_check(AlgebraSpec::new(dim).unwrap()).map_err(|e| e.to_string())?;
        ensure(ok, || format!("A_{dim}"))?;
    }
    let mut laws = 0;
    for dim in 1..=4 {
        let a = AlgebraSpec::new(dim).unwrap();
        for r in 0..=4 {
            // Gluing along zero circles leaves two components, so m starts at 1.
            for m in 1..=4 {
                for l in 0..=4 {
                    if r + l == 0 {
                        continue;
                    }
                    let glued = connected_map(a, m, l).unwrap().mul(&connected_map(a, r, m).unwrap());
                    ensure(glued == connected_map(a, r, l).unwrap(), || format!("dim {dim}, ({r},{m},{l})"))?;
                    laws += 1;
                }
            }
        }
    }
    Ok(format!("dims 1..8, {laws} composition laws"))
}

fn functoriality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..100 {
        let n = rng.random_range(1..=3);
        let d = torus_two_n(n).unwrap();
        let x = random_colors(&mut rng, n, 3);
        let a = random_morphism(&mut rng, &x, 3);
        let b = random_morphism(&mut rng, a.target(), 3);
        let ab = a.compose(&b).map_err(|e| e.to_string())?;
        let build = |v: &ColorVector| build_complex(&d, v).map_err(|e| e.to_string());
        let (cx, cy, cz) = (build(&x)?, build(a.target())?, build(b.target())?);
        let fmap = |s: &vcat_core::CochainComplex, t: &vcat_core::CochainComplex, m: &ZndiagMorphism| {
            chain_map_between(s.layout(), t.layout(), m).map_err(|e| e.to_string())
        };
        let fa = fmap(&cx, &cy, &a)?;
        let fb = fmap(&cy, &cz, &b)?;
        let fab = fmap(&cx, &cz, &ab)?;
        let fid = fmap(&cx, &cx, &ZndiagMorphism::identity(&x))?;
        fa.check_commutes(&cx, &cy).map_err(|e| format!("trial {trial}: {e}"))?;
        fb.check_commutes(&cy, &cz).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(
            fid.levels.iter().zip(cx.level_dims()).all(|(m, &k)| *m == GF2Matrix::identity(k)),
            || format!("trial {trial}: identity"),
        )?;
        ensure(fab == fa.then(&fb), || format!("trial {trial}: chain map of composite"))?;
        let basis = |c| CohomologyBasis::new(c).map_err(|e| e.to_string());
        let (hx, hy, hz) = (basis(&cx)?, basis(&cy)?, basis(&cz)?);
        let induced = |s, t, tb, f| induced_cohomology_map_between(s, t, tb, f).map_err(|e| e.to_string());
        let ha = induced(&hx, &cy, &hy, &fa)?;
        let hb = induced(&hy, &cz, &hz, &fb)?;
        let hab = induced(&hx, &cz, &hz, &fab)?;
        let hid = induced(&hx, &cx, &hx, &fid)?;
        ensure(hab == ha.then(&hb), || format!("trial {trial}: induced map of composite"))?;
        ensure(
            hid.levels.iter().zip(hx.dims()).all(|(m, k)| *m == GF2Matrix::identity(k)),
            || format!("trial {trial}: induced identity"),
        )?;
    }
    Ok("100 random morphism pairs".into())
}

fn matrix_complexes() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..30 {
        let n = rng.random_range(1..=4);
        let m = random_matrix(&mut rng, n, 4);
        let c = build_matrix_complex(&m).map_err(|e| e.to_string())?;
        ensure(c.find_d_squared_violation().is_none(), || format!("δδ ≠ 0 for {:?}", m.rows()))?;
        let rows: Vec<Vec<i64>> = m
            .rows()
            .iter()
            .map(|r| r.iter().map(|v| i64::try_from(v).unwrap()).collect())
            .collect();
        let det = det_exact(&m);
        ensure(det == cofactor_det(&rows), || format!("det_exact for {rows:?}"))?;
        ensure(BigInt::from(c.euler_characteristic()) == det, || {
            format!("{rows:?}: χ = {}, det = {det}", c.euler_characteristic())
        })?;
    }
    for _ in 0..1000 {
        let n = rng.random_range(1..=5);
        let m = random_matrix(&mut rng, n, 9);
        let expansion = det_permutation_expansion(&m).map_err(|e| e.to_string())?;
        ensure(det_exact(&m) == expansion, || format!("{:?}", m.rows()))?;
    }
    Ok("30 complexes, 1000 determinants".into())
}

fn worked_example() -> Outcome {
    let d = torus_two_n(2).unwrap();
    for (x, dims, hom, chi) in [([1, 2], [4, 2], [2, 0], 2), ([2, 1], [2, 4], [0, 2], -2)] {
        let r = homology(&build_complex(&d, &cv(&x)).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(
            r.cochain_dims == dims && r.homology_dims == Some(hom.to_vec()) && r.euler_characteristic == chi,
            || format!("x = {x:?}: {r:?}"),
        )?;
    }
    Ok("x = (1,2) and (2,1)".into())
}

fn performance() -> Outcome {
    let start = Instant::now();
    let r = verify_euler_with(&torus_two_n(4).unwrap(), &cv(&[2, 2, 2, 2]), &VerifyOptions::default())
        .map_err(|e| e.to_string())?;
    let full = start.elapsed();
    ensure(r.cochain_dims.iter().sum::<usize>() == 24 * 1024, || "total dimension".into())?;
    ensure(r.agree == Some(true), || "χ vs det".into())?;
    ensure(full < Duration::from_secs(120), || format!("full homology took {full:?}"))?;
    let start = Instant::now();
    let opts = VerifyOptions {
        build: BuildOptions::default(),
        skip_homology: true,
    };
    for x in [[1, 2, 3, 4, 5], [2, 2, 2, 2, 2], [2, 3, 5, 7, 11]] {
        let r = verify_euler_with(&torus_two_n(5).unwrap(), &cv(&x), &opts).map_err(|e| e.to_string())?;
        ensure(r.agree == Some(true), || format!("n = 5, x = {x:?}"))?;
    }
    let chi_only = start.elapsed();
    ensure(chi_only < Duration::from_secs(10), || format!("n = 5 χ-only took {chi_only:?}"))?;
    Ok(format!("n=4 full {:.2}s, n=5 χ-only {:.3}s", full.as_secs_f64(), chi_only.as_secs_f64()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("Vandermonde identity on T(2,n)", vandermonde_identity),
        ("generalized identity on random diagrams", generalized_identity),
        ("δ² = 0", d_squared_zero),
        ("crossing order independence", order_independence),
        ("torus circle counts", torus_circle_counts),
        ("Bruhat thinness and Mahonian levels", bruhat_thinness),
        ("Frobenius axioms and connected-map law", frobenius_axioms),
        ("functoriality of morphisms", functoriality),
        ("matrix complexes and determinants", matrix_complexes),
        ("T(2,2) worked example", worked_example),
        ("performance envelope", performance),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{secs:.2}s] {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{secs:.2}s] {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
