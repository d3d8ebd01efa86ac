//! The coefficient ring `Z/q` for a prime power `q`.

use std::fmt;

use crate::error::{input, Result};
use crate::primes::{mul_mod, prime_power};

/// `Z/q` with `q = p^s`. Elements are plain `u64` values in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueRing {
    q: u64,
    p: u64,
}

impl ResidueRing {
    pub fn new(q: u64) -> Result<Self> {
        match prime_power(q) {
            Some((p, _)) => Ok(ResidueRing { q, p }),
            None => input(format!("modulus {q} is not a prime power >= 2")),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// The prime `p` with `q = p^s`.
    pub fn characteristic_prime(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (s, overflow) = a.overflowing_add(b);
        if overflow || s >= self.q {
            s.wrapping_sub(self.q)
        } else {
            s
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.q)
    }

    /// Reduces an arbitrary integer into `[0, q)`.
    pub fn reduce(&self, a: i128) -> u64 {
        a.rem_euclid(self.q as i128) as u64
    }

    /// All elements, in increasing order. Only sensible for small `q`.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.q
    }
}

impl fmt::Display for ResidueRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}", self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_prime_powers() {
        assert!(ResidueRing::new(0).is_err());
        assert!(ResidueRing::new(1).is_err());
        assert!(ResidueRing::new(6).is_err());
        assert!(ResidueRing::new(2).is_ok());
        assert_eq!(ResidueRing::new(9).unwrap().characteristic_prime(), 3);
    }

    #[test]
    fn arithmetic_near_word_limit() {
        let q = 18_446_744_073_709_551_557; // largest 64-bit prime
        let r = ResidueRing::new(q).unwrap();
        assert_eq!(r.add(q - 1, q - 1), q - 2);
        assert_eq!(r.sub(0, 1), q - 1);
        assert_eq!(r.mul(q - 1, q - 1), 1);
        assert_eq!(r.reduce(-1), q - 1);
    }

    #[test]
    fn small_ring() {
        let r = ResidueRing::new(4).unwrap();
        assert_eq!(r.add(3, 1), 0);
        assert_eq!(r.neg(1), 3);
        assert_eq!(r.reduce(-5), 3);
        assert_eq!(r.elements().count(), 4);
    }
}
