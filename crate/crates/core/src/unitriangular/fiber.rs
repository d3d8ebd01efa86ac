use std::sync::Arc;

use super::matrix::PartialMatrix;
use super::shape::ConvexShape;
use crate::error::{input, Error, Result};

fn check_sizes(n: usize, m1: usize, m2: usize) -> Result<usize> {
    if !(1..=n).contains(&m1) || !(1..=n).contains(&m2) || m1 + m2 < n {
        return input(format!(
            "window sizes m1={m1}, m2={m2} must satisfy 1 <= m1, m2 <= {n} and m1 + m2 >= {n}"
        ));
    }
    Ok(m1 + m2 - n)
}

/// `A -> (p'_{n,m1}(A), p''_{n,m2}(A))`.
pub fn fiber_decompose(
    a: &PartialMatrix,
    m1: usize,
    m2: usize,
) -> Result<(PartialMatrix, PartialMatrix)> {
    if !a.shape().is_full() {
        return input("fiber decomposition needs a matrix of the full group U_n");
    }
    check_sizes(a.n(), m1, m2)?;
    Ok((a.upper_left(m1)?, a.lower_right(m2)?))
}

/// The canonical preimage of a compatible pair: `M1` on the upper-left
/// block, `M2` on the lower-right block, and 0 elsewhere.
pub fn fiber_glue(m1: &PartialMatrix, m2: &PartialMatrix, n: usize) -> Result<PartialMatrix> {
    let (s1, s2) = (m1.n(), m2.n());
    if !m1.shape().is_full() || !m2.shape().is_full() {
        return input("fiber glue needs matrices of full groups");
    }
    if m1.ring() != m2.ring() {
        return input(format!("ring mismatch: {} vs {}", m1.ring(), m2.ring()));
    }
    let t = check_sizes(n, s1, s2)?;
    if t >= 1 && m1.lower_right(t)? != m2.upper_left(t)? {
        return Err(Error::Compatibility(format!(
            "overlap U_{t} blocks differ: {:?} vs {:?}",
            m1.lower_right(t)?,
            m2.upper_left(t)?
        )));
    }
    let shift = n - s2;
    let entries = ConvexShape::full(n)
        .off_diagonal()
        .filter_map(|(k, l)| {
            if l <= s1 + 1 {
                Some(((k, l), m1.entry(k, l) as i128))
            } else if k > shift {
                Some(((k, l), m2.entry(k - shift, l - shift) as i128))
            } else {
                None
            }
        })
        .collect::<Vec<_>>();
    PartialMatrix::from_entries(m1.ring(), Arc::new(ConvexShape::full(n)), entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmod::ResidueRing;

    fn z2() -> ResidueRing {
        ResidueRing::new(2).unwrap()
    }

    fn elem(n: usize, k: usize, l: usize) -> PartialMatrix {
        PartialMatrix::elementary(z2(), Arc::new(ConvexShape::full(n)), k, l, 1).unwrap()
    }

    #[test]
    fn decompose_examples() {
        let a = elem(2, 1, 2).mul(&elem(2, 2, 3)).unwrap();
        let (x, y) = fiber_decompose(&a, 2, 2).unwrap();
        assert_eq!((&x, &y), (&a, &a));
        let (x, y) = fiber_decompose(&elem(2, 1, 3), 1, 1).unwrap();
        assert!(x.is_identity() && y.is_identity());
        assert!(fiber_decompose(&a, 0, 2).is_err());
        assert!(fiber_decompose(&elem(3, 1, 2), 1, 1).is_err());
    }

    #[test]
    fn glue_examples() {
        let id1 = PartialMatrix::identity_full(z2(), 1);
        assert!(fiber_glue(&id1, &id1, 2).unwrap().is_identity());
        let g = fiber_glue(&elem(1, 1, 2), &elem(1, 1, 2), 2).unwrap();
        assert_eq!((g.entry(1, 2), g.entry(2, 3), g.entry(1, 3)), (1, 1, 0));
    }

    #[test]
    fn glue_rejects_incompatible_overlap() {
        // n=3, m1=m2=2: the shared U_1 is entry (2,3) of the big matrix
        let m1 = elem(2, 2, 3);
        let m2 = PartialMatrix::identity_full(z2(), 2);
        assert!(matches!(fiber_glue(&m1, &m2, 3), Err(Error::Compatibility(_))));
    }

    #[test]
    fn glue_then_decompose_is_identity_on_small_fiber_products() {
        let r = z2();
        for n in 2..=3 {
            for m1 in 1..=n {
                for m2 in (n - m1).max(1)..=n {
                    let t = m1 + m2 - n;
                    for a in PartialMatrix::enumerate(r, Arc::new(ConvexShape::full(m1))) {
                        for b in PartialMatrix::enumerate(r, Arc::new(ConvexShape::full(m2))) {
                            let compatible =
                                t == 0 || a.lower_right(t).unwrap() == b.upper_left(t).unwrap();
                            match fiber_glue(&a, &b, n) {
                                Ok(g) => {
                                    assert!(compatible);
                                    assert_eq!(fiber_decompose(&g, m1, m2).unwrap(), (a.clone(), b.clone()));
                                }
                                Err(_) => assert!(!compatible),
                            }
                        }
                    }
                }
            }
        }
    }
}
