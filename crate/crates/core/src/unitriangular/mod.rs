//! Groups `U_S` of partial unitriangular matrices over `Z/q`.
//!
//! A convex shape `S` picks out which upper-triangular entries are kept; the
//! full shape gives `U_n`, the group of unipotent upper-triangular
//! `(n+1) x (n+1)` matrices. Restricting to a smaller convex shape or to a
//! window of rows and columns is a group homomorphism, and `U_n` modulo the
//! kernel of two overlapping windows is their fiber product.

mod fiber;
mod matrix;
mod shape;

use std::collections::HashSet;

pub use fiber::{fiber_decompose, fiber_glue};
pub use matrix::PartialMatrix;
pub use shape::{is_convex, ConvexShape};

/// Closure of `generators` under multiplication, or `None` once it would
/// exceed `limit` elements. In a finite group this is the generated subgroup.
pub fn generated_subgroup(generators: &[PartialMatrix], limit: usize) -> Option<HashSet<PartialMatrix>> {
    let first = generators.first()?;
    let identity = PartialMatrix::identity(first.ring(), first.shape().clone());
    let mut seen = HashSet::from([identity.clone()]);
    let mut frontier = vec![identity];
    while let Some(x) = frontier.pop() {
        for g in generators {
            let y = x.mul(g).ok()?;
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return None;
                }
                frontier.push(y);
            }
        }
    }
    Some(seen)
}

/// Order of `U_n(Z/q)`, i.e. `q^{n(n+1)/2}`, if it fits in a `u128`.
pub fn full_group_order(q: u64, n: usize) -> Option<u128> {
    (q as u128).checked_pow((n * (n + 1) / 2) as u32)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::zmod::ResidueRing;

    #[test]
    fn adjacent_elementaries_generate_the_full_group() {
        for q in [2, 4] {
            let ring = ResidueRing::new(q).unwrap();
            for n in 1..=3 {
                let shape = Arc::new(ConvexShape::full(n));
                let gens: Vec<_> = (1..=n)
                    .map(|k| PartialMatrix::elementary(ring, shape.clone(), k, k + 1, 1).unwrap())
                    .collect();
                let group = generated_subgroup(&gens, 1 << 20).unwrap();
                assert_eq!(group.len() as u128, full_group_order(q, n).unwrap());
            }
        }
    }

    #[test]
    fn closure_respects_limit() {
        let ring = ResidueRing::new(4).unwrap();
        let shape = Arc::new(ConvexShape::full(3));
        let gens: Vec<_> = (1..=3)
            .map(|k| PartialMatrix::elementary(ring, shape.clone(), k, k + 1, 1).unwrap())
            .collect();
        assert!(generated_subgroup(&gens, 100).is_none());
    }
}
