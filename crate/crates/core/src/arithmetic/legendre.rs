use std::fmt;

use crate::error::{input, Result};
use crate::primes::{is_prime, mul_mod, pow_mod};

/// An odd rational prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OddPrime(u64);

impl OddPrime {
    pub fn new(p: u64) -> Result<Self> {
        if p.is_multiple_of(2) || !is_prime(p) {
            return input(format!("{p} is not an odd prime"));
        }
        Ok(OddPrime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// `p mod 4`, either 1 or 3.
    pub fn residue_mod_4(self) -> u64 {
        self.0 % 4
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn reduce(a: i128, p: u64) -> u64 {
    a.rem_euclid(p as i128) as u64
}

/// The Legendre symbol `(a/p)` by the Jacobi reciprocity chain.
pub fn legendre(a: i128, p: OddPrime) -> i8 {
    let value = jacobi(reduce(a, p.0), p.0);
    debug_assert_eq!(value, euler(reduce(a, p.0), p.0), "reciprocity chain disagrees with Euler for ({a}/{p})");
    value
}

// Jacobi symbol (a/n) for odd n, a in [0, n).
fn jacobi(mut a: u64, mut n: u64) -> i8 {
    let mut sign = 1;
    while a != 0 {
        let twos = a.trailing_zeros();
        a >>= twos;
        if twos % 2 == 1 && matches!(n % 8, 3 | 5) {
            sign = -sign;
        }
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        (a, n) = (n % a, a);
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

fn euler(a: u64, p: u64) -> i8 {
    match pow_mod(a, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// A square root of `a` modulo `p` (Tonelli–Shanks), if one exists.
pub fn sqrt_mod(a: i128, p: OddPrime) -> Option<u64> {
    let p = p.0;
    let a = reduce(a, p);
    if a == 0 {
        return Some(0);
    }
    if euler(a, p) != 1 {
        return None;
    }
    let s = (p - 1).trailing_zeros();
    let odd = (p - 1) >> s;
    let nonresidue = (2..p).find(|&z| euler(z, p) == -1)?;
    let mut m = s;
    let mut c = pow_mod(nonresidue, odd, p);
    let mut t = pow_mod(a, odd, p);
    let mut r = pow_mod(a, odd.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> OddPrime {
        OddPrime::new(v).unwrap()
    }

    #[test]
    fn rejects_non_odd_primes() {
        for v in [0, 1, 2, 9, 15, 91] {
            assert!(OddPrime::new(v).is_err(), "{v}");
        }
    }

    #[test]
    fn small_values() {
        assert_eq!(legendre(1, p(7)), 1);
        assert_eq!(legendre(2, p(3)), -1);
        assert_eq!(legendre(0, p(5)), 0);
        assert_eq!(legendre(-1, p(5)), 1);
        assert_eq!(legendre(-1, p(7)), -1);
        assert_eq!(legendre(14, p(7)), 0);
        for (a, q) in [(5, 41), (41, 5), (5, 61), (41, 61), (61, 5), (61, 41)] {
            assert_eq!(legendre(a, p(q)), 1, "({a}/{q})");
        }
    }

    #[test]
    fn chain_matches_brute_force_squares() {
        for q in [3u64, 5, 7, 11, 13, 101] {
            let squares: Vec<u64> = (1..q).map(|x| x * x % q).collect();
            for a in 1..q {
                let expected = if squares.contains(&a) { 1 } else { -1 };
                assert_eq!(jacobi(a, q), expected, "({a}/{q})");
            }
        }
    }

    #[test]
    fn square_roots() {
        for q in [3u64, 5, 13, 17, 41, 61, 97, 257, 65537] {
            for a in 0..q.min(500) {
                match sqrt_mod(a as i128, p(q)) {
                    Some(r) => assert_eq!(r * r % q, a),
                    None => assert_eq!(euler(a, q), -1),
                }
            }
        }
    }
}
