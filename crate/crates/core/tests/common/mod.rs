//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;

use vcat_core::linkdiag::LinkDiagram;

pub fn inversions(p: &[usize]) -> usize {
    (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count()
}

pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n);
            out.push(q);
        }
    }
    out
}

/// Covers: transpositions raising the inversion count by exactly one.
pub fn brute_covers(p: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let mut q = p.to_vec();
            q.swap(i, j);
            if inversions(&q) == inversions(p) + 1 {
                out.push(q);
            }
        }
    }
    out.sort();
    out
}

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 1 {
        return BigInt::from(m[0][0]);
    }
    let mut total = BigInt::from(0);
    for c in 0..n {
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect())
            .collect();
        let term = BigInt::from(m[0][c]) * cofactor_det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn naive_rank(rows: &[Vec<bool>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        if let Some(p) = (rank..m.len()).find(|&r| m[r][c]) {
            m.swap(rank, p);
            for r in 0..m.len() {
                if r != rank && m[r][c] {
                    let pivot = m[rank].clone();
                    for (a, b) in m[r].iter_mut().zip(pivot) {
                        *a ^= b;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Circles by walking: each arc end meets its partner end across the
/// smoothing pairing, and the two occurrences of an arc id are the two
/// ends of one arc.
pub fn walk_circles(d: &LinkDiagram, smoothing: &[bool]) -> usize {
    let mut slots: Vec<u32> = Vec::new();
    let mut partner: Vec<usize> = Vec::new();
    for (k, c) in d.crossings().iter().enumerate() {
        let pairs = if smoothing[k] { c.one } else { c.zero };
        for [a, b] in pairs {
            let base = slots.len();
            slots.push(a);
            slots.push(b);
            partner.push(base + 1);
            partner.push(base);
        }
    }
    let mut by_id: HashMap<u32, Vec<usize>> = HashMap::new();
    for (s, &id) in slots.iter().enumerate() {
        by_id.entry(id).or_default().push(s);
    }
    let mut seen = vec![false; slots.len()];
    let mut count = 0;
    for start in 0..slots.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut s = start;
        loop {
            seen[s] = true;
            let t = partner[s];
            seen[t] = true;
            let ids = &by_id[&slots[t]];
            let next = if ids[0] == t { ids[1] } else { ids[0] };
            if seen[next] {
                break;
            }
            s = next;
        }
    }
    count + d.free_loops()
}

/// `x_1 ⋯ x_n ∏_{i<j} (x_j − x_i)`.
pub fn vandermonde_oracle(x: &[usize]) -> BigInt {
    let mut v = BigInt::from(1);
    for i in 0..x.len() {
        v *= x[i];
        for j in i + 1..x.len() {
            v *= BigInt::from(x[j]) - BigInt::from(x[i]);
        }
    }
    v
}

/// Coefficients of `∏_{m=1}^{n} (1 + q + .. + q^{m-1})`.
pub fn mahonian_oracle(n: usize) -> Vec<usize> {
    let mut by_inv = vec![0; n * n.saturating_sub(1) / 2 + 1];
    for p in all_perms(n) {
        by_inv[inversions(&p)] += 1;
    }
    by_inv
}
