use std::collections::BTreeMap;
use std::fmt;

use super::word::Generator;
use crate::error::{input, Result};
use crate::zmod::ResidueRing;

/// A monomial `x_{i_1} ... x_{i_k}`, written as its sequence of letters.
pub type LetterWord = Vec<Generator>;

/// Non-commutative polynomial over `Z/q` in variables `x_j`, truncated
/// above a fixed total degree. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    ring: ResidueRing,
    degree: usize,
    coeffs: BTreeMap<LetterWord, u64>,
}

impl TruncatedSeries {
    pub fn zero(ring: ResidueRing, degree: usize) -> Self {
        TruncatedSeries { ring, degree, coeffs: BTreeMap::new() }
    }

    pub fn one(ring: ResidueRing, degree: usize) -> Self {
        Self::monomial(ring, degree, Vec::new(), 1)
    }

    /// `c * x_I`; dropped if `|I|` exceeds the degree bound.
    pub fn monomial(ring: ResidueRing, degree: usize, word: LetterWord, c: u64) -> Self {
        let mut s = Self::zero(ring, degree);
        s.add_term(word, c % ring.modulus());
        s
    }

    /// `1 + x_j`, the Magnus image of a generator.
    pub fn one_plus_variable(ring: ResidueRing, degree: usize, g: Generator) -> Self {
        let mut s = Self::one(ring, degree);
        s.add_term(vec![g], 1);
        s
    }

    pub fn from_terms(
        ring: ResidueRing,
        degree: usize,
        terms: impl IntoIterator<Item = (LetterWord, i128)>,
    ) -> Self {
        let mut s = Self::zero(ring, degree);
        for (w, c) in terms {
            s.add_term(w, ring.reduce(c));
        }
        s
    }

    fn add_term(&mut self, word: LetterWord, c: u64) {
        if word.len() > self.degree || c == 0 {
            return;
        }
        let updated = self.ring.add(self.coefficient(&word), c);
        if updated == 0 {
            self.coeffs.remove(&word);
        } else {
            self.coeffs.insert(word, updated);
        }
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn degree_bound(&self) -> usize {
        self.degree
    }

    pub fn coefficient(&self, word: &[Generator]) -> u64 {
        self.coeffs.get(word).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> u64 {
        self.coefficient(&[])
    }

    /// Nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (&LetterWord, u64)> {
        self.coeffs.iter().map(|(w, &c)| (w, c))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return input(format!("ring mismatch: {} vs {}", self.ring, other.ring));
        }
        if self.degree != other.degree {
            return input(format!("degree bound mismatch: {} vs {}", self.degree, other.degree));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut s = self.clone();
        for (w, c) in other.terms() {
            s.add_term(w.clone(), c);
        }
        Ok(s)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut s = self.clone();
        for (w, c) in other.terms() {
            s.add_term(w.clone(), self.ring.neg(c));
        }
        Ok(s)
    }

    /// Truncated product: the coefficient of `w` is the sum of
    /// `f(u) g(v)` over all splittings `w = uv`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let ring = self.ring;
        let mut acc: BTreeMap<LetterWord, u64> = BTreeMap::new();
        for (u, a) in &self.coeffs {
            let room = self.degree - u.len();
            for (v, b) in other.coeffs.iter().filter(|(v, _)| v.len() <= room) {
                let mut w = u.clone();
                w.extend(v.iter().cloned());
                let slot = acc.entry(w).or_insert(0);
                *slot = ring.add(*slot, ring.mul(*a, *b));
            }
        }
        acc.retain(|_, c| *c != 0);
        TruncatedSeries { ring, degree: self.degree, coeffs: acc }
    }

    /// Inverse of a 1-unit `1 + h` as `1 - h + h^2 - ...` up to the bound.
    pub fn inverse_unit(&self) -> Result<Self> {
        if self.constant_term() != 1 {
            return input("only series with constant term 1 are inverted");
        }
        let one = Self::one(self.ring, self.degree);
        let minus_h = one.sub(self)?;
        let mut power = one.clone();
        let mut acc = one;
        for _ in 0..self.degree {
            power = power.mul_unchecked(&minus_h);
            acc = acc.add(&power)?;
        }
        Ok(acc)
    }

    /// Binary powering; negative exponents go through [`Self::inverse_unit`].
    pub fn pow(&self, exp: i64) -> Result<Self> {
        let mut base = if exp < 0 { self.inverse_unit()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one(self.ring, self.degree);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        Ok(acc)
    }
}

fn variable_name(g: &Generator) -> String {
    let s = g.as_str();
    match s.strip_prefix('t') {
        Some(rest) if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) => format!("x{rest}"),
        _ => format!("x({s})"),
    }
}

/// Terms as `c * x1.x2`, sorted by degree and then lexicographically;
/// the constant term prints as a bare coefficient.
impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        if terms.is_empty() {
            return f.write_str("0");
        }
        let rendered: Vec<String> = terms
            .into_iter()
            .map(|(w, c)| {
                if w.is_empty() {
                    c.to_string()
                } else {
                    let vars: Vec<String> = w.iter().map(variable_name).collect();
                    format!("{c} * {}", vars.join("."))
                }
            })
            .collect();
        f.write_str(&rendered.join(" + "))
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries({}, d={}, {self})", self.ring, self.degree)
    }
}
