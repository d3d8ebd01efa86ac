//! Truncated Magnus expansion of free-group words.
//!
//! Each generator `τ_j` is sent to the 1-unit `1 + x_j` of the
//! non-commutative series ring over `Z/q`; `ε_I(w)` is the coefficient of
//! the monomial `x_I` in the image of `w`. Arranging the coefficients of the
//! consecutive subwords of a multi-index `I` in a unitriangular matrix gives
//! a group homomorphism from words into `U_n`.

mod series;
mod word;

use std::collections::BTreeSet;
use std::sync::Arc;

pub use series::{LetterWord, TruncatedSeries};
pub use word::{Generator, GroupWord};

use crate::error::{input, Result};
use crate::unitriangular::{ConvexShape, PartialMatrix};
use crate::zmod::ResidueRing;

/// Magnus image of `w`, truncated above degree `degree`.
pub fn magnus_eval(w: &GroupWord, degree: usize, ring: ResidueRing) -> TruncatedSeries {
    eval_filtered(w, degree, ring, |_| true)
}

// Sending x_j to 0 for letters outside `keep` is an algebra map, so
// coefficients of words in the kept letters are unaffected.
fn eval_filtered(
    w: &GroupWord,
    degree: usize,
    ring: ResidueRing,
    keep: impl Fn(&Generator) -> bool,
) -> TruncatedSeries {
    let mut acc = TruncatedSeries::one(ring, degree);
    for (g, e) in w.syllables() {
        if !keep(g) {
            continue;
        }
        let factor = TruncatedSeries::one_plus_variable(ring, degree, g.clone())
            .pow(*e)
            .expect("1 + x is a unit");
        acc = acc.mul(&factor).expect("same ring and bound");
    }
    acc
}

/// `ε_I(w)`, the coefficient of `x_I` in the Magnus image of `w`.
pub fn eps(w: &GroupWord, index: &[Generator], ring: ResidueRing) -> u64 {
    let letters: BTreeSet<&Generator> = index.iter().collect();
    eval_filtered(w, index.len(), ring, |g| letters.contains(g)).coefficient(index)
}

/// The matrix in `U_n`, `n = |I|`, whose `(l, k)` entry is
/// `ε_{(i_l ... i_{k-1})}(w)`; the diagonal carries the empty word.
pub fn magnus_matrix(w: &GroupWord, index: &[Generator], ring: ResidueRing) -> Result<PartialMatrix> {
    let n = index.len();
    if n == 0 {
        return input("the multi-index must be nonempty");
    }
    let letters: BTreeSet<&Generator> = index.iter().collect();
    let series = eval_filtered(w, n, ring, |g| letters.contains(g));
    let entries = ConvexShape::full(n)
        .off_diagonal()
        .map(|(l, k)| ((l, k), series.coefficient(&index[l - 1..k - 1]) as i128))
        .collect::<Vec<_>>();
    PartialMatrix::from_entries(ring, Arc::new(ConvexShape::full(n)), entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(k: usize) -> Generator {
        Generator::tau(k)
    }

    fn ring(q: u64) -> ResidueRing {
        ResidueRing::new(q).unwrap()
    }

    #[test]
    fn eval_examples() {
        let r = ring(5);
        assert_eq!(magnus_eval(&GroupWord::empty(), 3, r), TruncatedSeries::one(r, 3));
        assert_eq!(
            magnus_eval(&GroupWord::generator(t(1)), 3, r),
            TruncatedSeries::one_plus_variable(r, 3, t(1))
        );
        let c = GroupWord::parse("[t1,t2]").unwrap();
        let expected = TruncatedSeries::from_terms(r, 2, [(vec![], 1), (vec![t(1), t(2)], 1), (vec![t(2), t(1)], -1)]);
        assert_eq!(magnus_eval(&c, 2, r), expected);
    }

    #[test]
    fn eps_examples() {
        let r2 = ring(2);
        assert_eq!(eps(&GroupWord::generator(t(1)), &[t(1)], r2), 1);
        assert_eq!(eps(&GroupWord::empty(), &[t(1), t(2)], r2), 0);
        let c = GroupWord::parse("[t1,t2]").unwrap();
        assert_eq!(eps(&c, &[t(1), t(2)], r2), 1);
        assert_eq!(eps(&c, &[t(2), t(1)], r2), 1);
        assert_eq!(eps(&c, &[t(2), t(1)], ring(3)), 2);
    }

    #[test]
    fn matrix_of_a_generator_is_elementary() {
        let r = ring(4);
        let idx = [t(1), t(2), t(3)];
        for (l, g) in idx.iter().enumerate() {
            let m = magnus_matrix(&GroupWord::generator(g.clone()), &idx, r).unwrap();
            let e = PartialMatrix::elementary(r, Arc::new(ConvexShape::full(3)), l + 1, l + 2, 1).unwrap();
            assert_eq!(m, e);
        }
        assert!(magnus_matrix(&GroupWord::generator(t(7)), &idx, r).unwrap().is_identity());
        assert!(magnus_matrix(&GroupWord::empty(), &idx, r).unwrap().is_identity());
        assert!(magnus_matrix(&GroupWord::empty(), &[], r).is_err());
    }

    #[test]
    fn repeated_letters_in_index() {
        // Λ(τ1^2) = 1 + 2 x1 + x1 x1, so ε_(11) = 1
        let r = ring(8);
        let w = GroupWord::parse("t1^2").unwrap();
        assert_eq!(eps(&w, &[t(1), t(1)], r), 1);
        let m = magnus_matrix(&w, &[t(1), t(1)], r).unwrap();
        assert_eq!((m.entry(1, 2), m.entry(2, 3), m.entry(1, 3)), (2, 2, 1));
    }

    #[test]
    fn eps_ignores_other_letters_consistently() {
        let r = ring(3);
        let w = GroupWord::parse("t1 t3 t2^-1 [t3, t1] t2").unwrap();
        let full = magnus_eval(&w, 2, r);
        for i in 1..=3 {
            for j in 1..=3 {
                assert_eq!(eps(&w, &[t(i), t(j)], r), full.coefficient(&[t(i), t(j)]));
            }
        }
    }
}
