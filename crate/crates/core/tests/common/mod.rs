//! Independent oracles shared by the integration tests: dense integer
//! matrices, trial-division primality, Euler's criterion and a direct
//! Magnus representation.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use primelink::magnus::{Generator, GroupWord};
use primelink::unitriangular::PartialMatrix;

pub type Dense = Vec<Vec<u64>>;

pub fn identity(dim: usize) -> Dense {
    (0..dim).map(|i| (0..dim).map(|j| u64::from(i == j)).collect()).collect()
}

pub fn dense_mul(a: &Dense, b: &Dense, q: u64) -> Dense {
    let dim = a.len();
    let mut c = vec![vec![0; dim]; dim];
    for i in 0..dim {
        for k in 0..dim {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..dim {
                c[i][j] = (c[i][j] + a[i][k] * b[k][j]) % q;
            }
        }
    }
    c
}

/// Inverse of a unipotent upper-triangular matrix: `sum (I - A)^k`.
pub fn dense_unipotent_inverse(a: &Dense, q: u64) -> Dense {
    let dim = a.len();
    let nil: Dense = (0..dim)
        .map(|i| (0..dim).map(|j| (q + u64::from(i == j) - a[i][j] % q) % q).collect())
        .collect();
    let mut acc = identity(dim);
    let mut power = identity(dim);
    for _ in 1..dim {
        power = dense_mul(&power, &nil, q);
        for i in 0..dim {
            for j in 0..dim {
                acc[i][j] = (acc[i][j] + power[i][j]) % q;
            }
        }
    }
    acc
}

pub fn dense_pow(a: &Dense, e: i64, q: u64) -> Dense {
    let base = if e < 0 { dense_unipotent_inverse(a, q) } else { a.clone() };
    (0..e.unsigned_abs()).fold(identity(a.len()), |acc, _| dense_mul(&acc, &base, q))
}

/// Dense rows of a full matrix.
pub fn to_dense(m: &PartialMatrix) -> Dense {
    m.rows().into_iter().map(|r| r.into_iter().map(|v| v.expect("full shape")).collect()).collect()
}

/// The representation `τ ↦ I + Σ_{l : i_l = τ} E_{l,l+1}`; its `(l, k)`
/// entry on `w` is the Magnus coefficient of `x_{i_l} ... x_{i_{k-1}}`.
pub fn magnus_oracle(w: &GroupWord, index: &[Generator], q: u64) -> Dense {
    let dim = index.len() + 1;
    let letter = |g: &Generator| {
        let mut m = identity(dim);
        for (l, i) in index.iter().enumerate() {
            if i == g {
                m[l][l + 1] = 1;
            }
        }
        m
    };
    w.syllables()
        .iter()
        .fold(identity(dim), |acc, (g, e)| dense_mul(&acc, &dense_pow(&letter(g), *e, q), q))
}

pub fn is_prime_trial(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn odd_primes_below(max: u64) -> Vec<u64> {
    (3..max).filter(|&p| is_prime_trial(p)).collect()
}

/// Euler's criterion by repeated multiplication.
pub fn euler(a: i128, p: u64) -> i8 {
    let a = a.rem_euclid(p as i128) as u64;
    let mut acc = 1u64;
    for _ in 0..(p - 1) / 2 {
        acc = acc * a % p;
    }
    match acc {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

pub fn has_root_mod(poly: impl Fn(u64) -> u64, p: u64) -> usize {
    (0..p).filter(|&x| poly(x).is_multiple_of(p)).count()
}

/// Breadth-first closure of a generating set under right multiplication.
pub fn closure_size(gens: &[PartialMatrix], limit: usize) -> usize {
    let Some(first) = gens.first() else { return 1 };
    let start = PartialMatrix::identity(first.ring(), first.shape().clone());
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g).unwrap();
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return seen.len();
                }
                queue.push_back(y);
            }
        }
    }
    seen.len()
}
