//! Exact rank of 0/1 matrices over the prime field GF(p), p = 2^62 - 57.
//!
//! Entries are kept in Montgomery form (R = 2^64) so each field product is a
//! widening multiply plus one reduction, without a 128-bit division.

use crate::graph::AdjacencyMatrix;

pub const MODULUS: u64 = 4_611_686_018_427_387_847;

/// -MODULUS^{-1} mod 2^64.
const NEG_INV: u64 = neg_inverse(MODULUS);
/// 2^64 mod MODULUS, the Montgomery form of 1.
const ONE: u64 = ((1u128 << 64) % MODULUS as u128) as u64;

const fn neg_inverse(p: u64) -> u64 {
    // Newton iteration doubles the number of correct low bits per step.
    let mut inv: u64 = 1;
    let mut i = 0;
    while i < 6 {
        inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        i += 1;
    }
    inv.wrapping_neg()
}

#[inline]
fn reduce(t: u128) -> u64 {
    let m = (t as u64).wrapping_mul(NEG_INV);
    let r = ((t + m as u128 * MODULUS as u128) >> 64) as u64;
    if r >= MODULUS {
        r - MODULUS
    } else {
        r
    }
}

#[inline]
fn mul(a: u64, b: u64) -> u64 {
    reduce(a as u128 * b as u128)
}

#[inline]
fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MODULUS - b
    }
}

fn pow(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = ONE;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

fn inverse(a: u64) -> u64 {
    pow(a, MODULUS - 2)
}

/// Rank over GF(p) of a row-major 0/1 matrix (nonzero bytes count as 1).
pub fn rank_01(data: &[u8], rows: usize, cols: usize) -> usize {
    assert_eq!(data.len(), rows * cols, "matrix buffer has the wrong length");
    let mut m: Vec<Vec<u64>> = data
        .chunks(cols.max(1))
        .take(rows)
        .map(|r| r.iter().map(|&x| if x != 0 { ONE } else { 0 }).collect())
        .collect();
    eliminate(&mut m, cols)
}

/// Rank of an adjacency matrix over GF(p).
pub fn rank(a: &AdjacencyMatrix) -> usize {
    rank_01(a.as_slice(), a.size(), a.size())
}

fn eliminate(m: &mut [Vec<u64>], cols: usize) -> usize {
    let rows = m.len();
    let mut rank = 0;
    let mut support = Vec::with_capacity(cols);
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let (head, tail) = m.split_at_mut(rank + 1);
        let pivot = &mut head[rank];
        let inv = inverse(pivot[c]);
        support.clear();
        for (j, x) in pivot.iter_mut().enumerate().skip(c + 1) {
            if *x != 0 {
                *x = mul(*x, inv);
                support.push(j);
            }
        }
        pivot[c] = ONE;
        for row in tail.iter_mut() {
            let f = row[c];
            if f == 0 {
                continue;
            }
            row[c] = 0;
            for &j in &support {
                row[j] = sub(row[j], mul(f, pivot[j]));
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}
