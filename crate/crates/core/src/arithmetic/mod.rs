//! Linking of rational primes at `q = 2`.
//!
//! Degree one is the Legendre symbol; degree two is the Rédei triple symbol,
//! read off an explicit solution of `x² = p1 y² + p2 z²`.
//!
//! ```
//! use primelink::arithmetic::{legendre, redei_symbol, OddPrime};
//!
//! let p = |v| OddPrime::new(v).unwrap();
//! assert_eq!(legendre(5, p(41)), 1);
//! assert_eq!(redei_symbol(p(5), p(41), p(61))?.value, -1);
//! # Ok::<(), primelink::Error>(())
//! ```

mod legendre;
mod redei;

use std::fmt;

pub use legendre::{legendre, sqrt_mod, OddPrime};
pub use redei::{
    conic_solutions, linking_invariant_n2, redei_solve_conic, redei_symbol, redei_symbol_with, ConicSolution,
    MAX_CONIC_HEIGHT,
};

use crate::error::{input, Result};
use crate::primes::is_prime;

/// A symbol value with the data that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolResult {
    pub symbol: &'static str,
    pub arguments: Vec<u64>,
    /// `-1`, `0` or `+1`.
    pub value: i8,
    pub witnesses: Vec<(String, String)>,
}

impl SymbolResult {
    /// The value written additively: `+1 ↦ 0`, `-1 ↦ 1`. `None` for `0`.
    pub fn z2(&self) -> Option<u8> {
        match self.value {
            1 => Some(0),
            -1 => Some(1),
            _ => None,
        }
    }

    /// `key = value` lines: symbol, arguments, value, z2, then each witness.
    pub fn to_key_value(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SymbolResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.arguments.iter().map(u64::to_string).collect();
        writeln!(f, "symbol = {}", self.symbol)?;
        writeln!(f, "arguments = {}", args.join(" "))?;
        writeln!(f, "value = {:+}", self.value)?;
        match self.z2() {
            Some(b) => writeln!(f, "z2 = {b}")?,
            None => writeln!(f, "z2 = undefined")?,
        }
        for (k, v) in &self.witnesses {
            writeln!(f, "witness.{k} = {v}")?;
        }
        Ok(())
    }
}

/// `(a/p)` wrapped with its Euler-criterion witness.
pub fn legendre_symbol(a: i128, p: OddPrime) -> SymbolResult {
    let value = legendre(a, p);
    let reduced = a.rem_euclid(p.get() as i128) as u64;
    let euler = crate::primes::pow_mod(reduced, (p.get() - 1) / 2, p.get());
    SymbolResult {
        symbol: "legendre",
        arguments: vec![reduced, p.get()],
        value,
        witnesses: vec![("a_mod_p".into(), reduced.to_string()), ("euler_power".into(), euler.to_string())],
    }
}

/// The mod-2 linking number `μ(p_i, p_j)`: 0 iff `p_i` is a square mod `p_j`.
pub fn mu_linking_number(pi: OddPrime, pj: OddPrime) -> Result<u8> {
    if pi == pj {
        return input(format!("the linking number of {pi} with itself is not defined"));
    }
    Ok(u8::from(legendre(pi.get() as i128, pj) != 1))
}

fn is_square_free(d: i64) -> bool {
    let d = d.unsigned_abs();
    (2u64..).take_while(|k| k.saturating_mul(*k) <= d).all(|k| !d.is_multiple_of(k * k))
}

/// Whether the prime `p` ramifies in `Q(√d)`.
pub fn ramifies_in_quadratic(p: u64, d: i64) -> Result<bool> {
    if !is_prime(p) {
        return input(format!("{p} is not prime"));
    }
    if d == 0 || d == 1 || !is_square_free(d) {
        return input(format!("{d} is not a square-free integer other than 0 and 1"));
    }
    Ok(d.unsigned_abs().is_multiple_of(p) || (p == 2 && d.rem_euclid(4) != 1))
}

/// Whether the ordering of `Q` extends to `Q(√d)`, i.e. `d > 0`.
pub fn ordering_extends_to_quadratic(d: i64) -> bool {
    d > 0
}

/// Whether the single-slot structure at `p` globalizes, i.e. `p ≡ 1 mod 4`;
/// the extension is then `Q(√p)`.
pub fn single_globalization_exists(p: OddPrime) -> bool {
    p.residue_mod_4() == 1
}

/// `[p1, pj]` in `Z/2` for `p1 ≡ 1 mod 4`: 0 iff `pj` splits in `Q(√p1)`.
pub fn linking_invariant_n1(p1: OddPrime, pj: OddPrime) -> Result<u8> {
    if !single_globalization_exists(p1) {
        return input(format!("{p1} is not 1 mod 4"));
    }
    mu_linking_number(p1, pj)
}

/// Assumption (A) for the base field: `Cl(Q)` is trivial.
pub fn class_number_gate() -> bool {
    true
}
