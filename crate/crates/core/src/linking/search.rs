use std::collections::BTreeMap;
use std::sync::Arc;

use super::globalization::{violations, Assignment};
use super::presentation::LinkPresentation;
use crate::error::{Error, Result};
use crate::unitriangular::{ConvexShape, PartialMatrix};

/// Every assignment of slot τ images in `U_n` (σ labels following their
/// words) that satisfies the slot constraints and kills all relators.
/// Brute force over `|U_n|^n` candidates, refused above `limit`.
pub fn all_globalizations(pres: &LinkPresentation, limit: u128) -> Result<Vec<Assignment>> {
    let n = pres.n();
    let ring = pres.ring();
    let shape = Arc::new(ConvexShape::full(n));
    let group: Vec<PartialMatrix> = PartialMatrix::enumerate(ring, shape).collect();
    let total = (group.len() as u128).checked_pow(n as u32).filter(|&t| t <= limit);
    let Some(total) = total else {
        return Err(Error::Resource(format!("|U_{n}|^{n} candidates exceed the limit {limit}")));
    };
    let taus: Vec<_> = pres.slot_map().taus().cloned().collect();
    let mut found = Vec::new();
    for mut code in 0..total {
        let mut images = BTreeMap::new();
        for tau in &taus {
            images.insert(tau.clone(), group[(code % group.len() as u128) as usize].clone());
            code /= group.len() as u128;
        }
        let a = Assignment::from_tau_images(pres, images)?;
        if violations(pres, &a)?.is_empty() {
            found.push(a);
        }
    }
    Ok(found)
}

/// The valid assignments among the `q^n` central modifications of `base`:
/// each slot τ image multiplied by some `Id + c E_{1,n+1}`.
pub fn central_modifications(pres: &LinkPresentation, base: &Assignment) -> Result<Vec<Assignment>> {
    let n = pres.n();
    let ring = pres.ring();
    let q = ring.modulus() as u128;
    let taus: Vec<_> = pres.slot_map().taus().cloned().collect();
    let total = q
        .checked_pow(n as u32)
        .ok_or_else(|| Error::Resource(format!("q^{n} central modifications overflow")))?;
    let mut found = Vec::new();
    for mut code in 0..total {
        let mut images = BTreeMap::new();
        for tau in &taus {
            let c = (code % q) as u64;
            code /= q;
            let shift = PartialMatrix::elementary(ring, base.shape().clone(), 1, n + 1, c)?;
            let m = base
                .image(tau)
                .ok_or_else(|| Error::Input(format!("base assignment has no image for `{tau}`")))?;
            images.insert(tau.clone(), m.mul(&shift)?);
        }
        let a = Assignment::from_tau_images(pres, images)?;
        if violations(pres, &a)?.is_empty() {
            found.push(a);
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linking::build_globalization;

    #[test]
    fn exhaustive_search_finds_only_the_normalized_assignment() {
        let pres = LinkPresentation::parse(
            "params n=2 q=2\nslot 1 tau=t1 sigma=s1\nslot 2 tau=t2\nsigma s1 = [t1,t2]\nrel linktype tau'=t1 alpha=1 tau=t1 sigma=s1\n",
        )
        .unwrap();
        let all = all_globalizations(&pres, 1 << 12).unwrap();
        let g = build_globalization(&pres).globalization().unwrap();
        assert_eq!(all, vec![g.assignment().clone()]);
    }

    #[test]
    fn obstructed_presentation_has_no_candidates() {
        let pres =
            LinkPresentation::parse("params n=2 q=2\nslot 1 tau=t1 sigma=s1\nslot 2 tau=t2\nsigma s1 = t2\nrel [t1^-1,s1^-1]\n")
                .unwrap();
        assert!(all_globalizations(&pres, 1 << 12).unwrap().is_empty());
    }

    #[test]
    fn limit_is_enforced() {
        let pres = LinkPresentation::parse("params n=3 q=2\nslot 1 tau=t1\nslot 2 tau=t2\nslot 3 tau=t3\n").unwrap();
        assert!(matches!(all_globalizations(&pres, 1000), Err(Error::Resource(_))));
    }
}
