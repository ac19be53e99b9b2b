//! Exact determinants and the unit/counit complexes of positive integer
//! matrices.
//!
//! For an `n × n` matrix `M` with entries in `Z₊`, the summand at `π` is
//! `A_{m_{1,π(1)}} ⊗ .. ⊗ A_{m_{n,π(n)}}`. A cover `π ⋖ π·(i j)` acts as the
//! identity on every factor except `i` and `j`, where it is `η∘ε` with the
//! grouplike normalization `ε(e_a) = 1`, `η(1) = e_1`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Deserialize;
use std::time::Instant;

use crate::bruhat::{Permutation, DEFAULT_MAX_N};
use crate::complex::{
    homology, BuildOptions, CochainComplex, ColorVector, ColoringOrder, ComplexLayout, EdgeRule, HomologyReport,
    LayoutSource, VerifyOptions,
};
use crate::error::{Error, Result};
use crate::linkdiag::SmoothingProfile;

/// Largest size accepted by [`det_permutation_expansion`].
pub const MAX_EXPANSION_N: usize = 12;

/// A square matrix with entries in `Z₊`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosIntMatrix {
    n: usize,
    entries: Vec<Vec<BigUint>>,
}

impl PosIntMatrix {
    pub fn new(entries: Vec<Vec<BigUint>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::Precondition("matrix must be at least 1x1".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Format(format!(
                    "row {} has {} entries; expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(Zero::is_zero) {
                return Err(Error::Precondition(format!(
                    "entry ({}, {}) is 0; entries must be positive",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(PosIntMatrix { n, entries })
    }

    pub fn from_u64(rows: &[Vec<u64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&v| BigUint::from(v)).collect()).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`, 0-based.
    pub fn entry(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigUint>] {
        &self.entries
    }

    /// Entries as machine integers, when they all fit.
    pub fn to_usize(&self) -> Option<Vec<Vec<usize>>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|v| usize::try_from(v).ok()).collect())
            .collect()
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det_exact(m: &PosIntMatrix) -> BigInt {
    let n = m.n;
    let mut a: Vec<Vec<BigInt>> = m
        .entries
        .iter()
        .map(|r| r.iter().map(|v| BigInt::from(v.clone())).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// `Σ_π sign(π) ∏ m_{i,π(i)}`.
pub fn det_permutation_expansion(m: &PosIntMatrix) -> Result<BigInt> {
    if m.n > MAX_EXPANSION_N {
        return Err(Error::size("permutation expansion size", m.n as u128, MAX_EXPANSION_N as u128));
    }
    let mut total = BigInt::zero();
    for p in Permutation::all(m.n) {
        let term: BigUint = p.entries().iter().enumerate().map(|(i, &v)| &m.entries[i][v - 1]).product();
        if p.sign() > 0 {
            total += BigInt::from(term);
        } else {
            total -= BigInt::from(term);
        }
    }
    Ok(total)
}

/// The matrix `(x_i^{s_j})`.
pub fn vandermonde_matrix(x: &ColorVector, s: &SmoothingProfile) -> Result<PosIntMatrix> {
    if x.len() != s.len() {
        return Err(Error::Precondition(format!(
            "color vector has {} entries but the smoothing profile has {}",
            x.len(),
            s.len()
        )));
    }
    PosIntMatrix::new(
        x.as_slice()
            .iter()
            .map(|&xi| {
                s.as_slice()
                    .iter()
                    .map(|&sj| num_traits::pow(BigUint::from(xi), sj))
                    .collect()
            })
            .collect(),
    )
}

/// `x_1 ⋯ x_n ∏_{i<j} (x_j − x_i)`.
pub fn vandermonde_product(x: &[usize]) -> BigInt {
    let mut p: BigInt = x.iter().map(|&v| BigInt::from(v)).product();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            p *= BigInt::from(x[j]) - BigInt::from(x[i]);
        }
    }
    p
}

pub fn matrix_complex_layout(m: &PosIntMatrix, order: ColoringOrder) -> Result<ComplexLayout> {
    matrix_complex_layout_capped(m, order, DEFAULT_MAX_N)
}

pub fn matrix_complex_layout_capped(m: &PosIntMatrix, order: ColoringOrder, cap: usize) -> Result<ComplexLayout> {
    let entries = m
        .to_usize()
        .ok_or_else(|| Error::size("matrix entry", u128::MAX, usize::MAX as u128))?;
    let source = LayoutSource::Matrix {
        entries: entries.clone(),
    };
    ComplexLayout::build(m.n, EdgeRule::UnitCounit, order, source, cap, |p, i| {
        (entries[i][p.entries()[i] - 1], 1)
    })
}

pub fn build_matrix_complex(m: &PosIntMatrix) -> Result<CochainComplex> {
    build_matrix_complex_with(m, &BuildOptions::default())
}

pub fn build_matrix_complex_with(m: &PosIntMatrix, opts: &BuildOptions) -> Result<CochainComplex> {
    matrix_complex_layout_capped(m, opts.order, opts.max_n)?.materialize(opts.budget)
}

/// Cohomology of the matrix complex and comparison of χ with `det M`.
pub fn verify_matrix(m: &PosIntMatrix, opts: &VerifyOptions) -> Result<HomologyReport> {
    let start = Instant::now();
    let layout = matrix_complex_layout_capped(m, opts.build.order, opts.build.max_n)?;
    let mut report = if opts.skip_homology {
        HomologyReport::dims_only(&layout)
    } else {
        homology(&layout.materialize(opts.build.budget)?)?
    };
    report.set_determinant(&det_exact(m));
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

#[derive(Deserialize)]
struct MatrixFile {
    matrix: Vec<Vec<BigIntEntry>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BigIntEntry {
    Int(i64),
    Text(String),
}

/// Parses `{"matrix": [[...], ...]}`. Entries may be JSON integers or
/// decimal strings for values beyond 64 bits.
pub fn parse_matrix(text: &str) -> Result<PosIntMatrix> {
    let file: MatrixFile = serde_json::from_str(text)?;
    let rows = file
        .matrix
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|e| {
                    let v = match e {
                        BigIntEntry::Int(v) => BigInt::from(v),
                        BigIntEntry::Text(s) => s
                            .trim()
                            .parse::<BigInt>()
                            .map_err(|_| Error::Format(format!("matrix entry {s:?} is not an integer")))?,
                    };
                    if !v.is_positive() {
                        return Err(Error::Precondition(format!("matrix entry {v} is not positive")));
                    }
                    Ok(v.magnitude().clone())
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PosIntMatrix::new(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<u64>]) -> PosIntMatrix {
        PosIntMatrix::from_u64(rows).unwrap()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(det_exact(&m(&[vec![1, 1], vec![2, 4]])), BigInt::from(2));
        assert_eq!(det_exact(&m(&[vec![1, 1], vec![1, 1]])), BigInt::zero());
        assert_eq!(det_exact(&m(&[vec![1]])), BigInt::one());
        let id3 = m(&[vec![1, 1, 1], vec![1, 2, 1], vec![1, 1, 2]]);
        assert_eq!(det_exact(&id3), BigInt::one());
    }

    #[test]
    fn pivoting_needed() {
        // Leading minor is singular; Bareiss must swap rows.
        let a = m(&[vec![1, 1, 2], vec![1, 1, 3], vec![2, 3, 1]]);
        assert_eq!(det_exact(&a), det_permutation_expansion(&a).unwrap());
        assert_eq!(det_exact(&a), BigInt::from(-1));
    }

    #[test]
    fn vandermonde() {
        let x = ColorVector::new(vec![1, 2, 3]).unwrap();
        let v = vandermonde_matrix(&x, &SmoothingProfile(vec![1, 2, 3])).unwrap();
        assert_eq!(v, m(&[vec![1, 1, 1], vec![2, 4, 8], vec![3, 9, 27]]));
        assert_eq!(det_exact(&v), BigInt::from(12));
        assert_eq!(vandermonde_product(&[1, 2, 3]), BigInt::from(12));
        assert_eq!(vandermonde_product(&[1, 2, 3, 4]), BigInt::from(288));
        let x = ColorVector::new(vec![2, 2]).unwrap();
        let v = vandermonde_matrix(&x, &SmoothingProfile(vec![1, 2])).unwrap();
        assert_eq!(det_exact(&v), BigInt::zero());
        assert!(vandermonde_matrix(&x, &SmoothingProfile(vec![1])).is_err());
    }

    #[test]
    fn matrix_complexes() {
        let r = verify_matrix(&m(&[vec![1, 1], vec![1, 1]]), &VerifyOptions::default()).unwrap();
        assert_eq!(r.cochain_dims, vec![1, 1]);
        assert_eq!(r.homology_dims, Some(vec![0, 0]));
        assert_eq!(r.agree, Some(true));
        let r = verify_matrix(&m(&[vec![2, 3], vec![4, 5]]), &VerifyOptions::default()).unwrap();
        assert_eq!(r.cochain_dims, vec![10, 12]);
        assert_eq!((r.euler_characteristic, r.determinant), (-2, Some(-2)));
        let r = verify_matrix(&m(&[vec![1, 1], vec![2, 4]]), &VerifyOptions::default()).unwrap();
        assert_eq!(r.euler_characteristic, 2);
    }

    #[test]
    fn matrix_complex_squares_to_zero() {
        let a = m(&[vec![2, 3, 1], vec![4, 2, 2], vec![1, 3, 2]]);
        let c = build_matrix_complex(&a).unwrap();
        assert!(c.find_d_squared_violation().is_none());
        assert!(c.layout().find_d_squared_violation().is_none());
    }

    #[test]
    fn parsing() {
        let a = parse_matrix(r#"{"matrix": [[2, 3], [4, "5"]]}"#).unwrap();
        assert_eq!(a, m(&[vec![2, 3], vec![4, 5]]));
        assert!(parse_matrix(r#"{"matrix": [[2, 0], [4, 5]]}"#).is_err());
        assert!(parse_matrix(r#"{"matrix": [[2, 3], [4]]}"#).is_err());
        assert!(parse_matrix(r#"{"matrix": []}"#).is_err());
        assert!(parse_matrix("nope").is_err());
    }
}
