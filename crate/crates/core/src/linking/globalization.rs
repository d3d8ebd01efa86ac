use std::collections::BTreeMap;
use std::sync::Arc;

use super::presentation::{LinkPresentation, Relator};
use crate::error::{input, Error, Result};
use crate::magnus::{Generator, GroupWord};
use crate::unitriangular::{fiber_glue, full_group_order, generated_subgroup, ConvexShape, PartialMatrix};
use crate::zmod::ResidueRing;

// Closure generation is only attempted for groups at most this large.
const SURJECTIVITY_CHECK_LIMIT: u128 = 1 << 16;

/// Images of generator labels in a group `U_S`, extended to words
/// multiplicatively. `slot_taus` records which τ label sits in each slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    ring: ResidueRing,
    shape: Arc<ConvexShape>,
    images: BTreeMap<Generator, PartialMatrix>,
    slot_taus: Vec<Generator>,
}

impl Assignment {
    pub fn new(
        ring: ResidueRing,
        shape: Arc<ConvexShape>,
        images: BTreeMap<Generator, PartialMatrix>,
        slot_taus: Vec<Generator>,
    ) -> Result<Self> {
        if let Some((g, m)) = images.iter().find(|(_, m)| m.ring() != ring || m.shape() != &shape) {
            return input(format!("image of `{g}` lives in {:?} over {}", m.shape(), m.ring()));
        }
        Ok(Assignment { ring, shape, images, slot_taus })
    }

    /// The normalized assignment on the free group: slot `l` τ goes to
    /// `Id + E_{l,l+1}`, trivial generators to `Id`, and each σ label to the
    /// image of its word. Relators are not checked.
    pub fn normalized(pres: &LinkPresentation) -> Self {
        let ring = pres.ring();
        let n = pres.n();
        let shape = Arc::new(ConvexShape::full(n));
        let taus = (1..=n).map(|l| {
            let m = PartialMatrix::elementary(ring, shape.clone(), l, l + 1, 1).expect("adjacent entry");
            (pres.slot_map().tau(l).clone(), m)
        });
        Self::from_tau_images(pres, taus.collect()).expect("normalized images are well formed")
    }

    /// Extends images of the slot τ generators by `Id` on trivial generators
    /// and by evaluation on σ labels.
    pub fn from_tau_images(pres: &LinkPresentation, taus: BTreeMap<Generator, PartialMatrix>) -> Result<Self> {
        let ring = pres.ring();
        let shape = Arc::new(ConvexShape::full(pres.n()));
        let slots = pres.slot_map();
        let slot_taus: Vec<Generator> = slots.taus().cloned().collect();
        if let Some(g) = slot_taus.iter().find(|g| !taus.contains_key(g)) {
            return input(format!("no image given for `{g}`"));
        }
        let mut images = taus;
        for g in slots.trivial_generators() {
            images.insert(g.clone(), PartialMatrix::identity(ring, shape.clone()));
        }
        let mut a = Assignment::new(ring, shape, images, slot_taus)?;
        for (s, w) in slots.sigma_words() {
            let m = a.eval_word(w)?;
            a.images.insert(s.clone(), m);
        }
        Ok(a)
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn shape(&self) -> &Arc<ConvexShape> {
        &self.shape
    }

    pub fn slot_taus(&self) -> &[Generator] {
        &self.slot_taus
    }

    pub fn image(&self, g: &Generator) -> Option<&PartialMatrix> {
        self.images.get(g)
    }

    pub fn images(&self) -> &BTreeMap<Generator, PartialMatrix> {
        &self.images
    }

    pub fn eval_word(&self, w: &GroupWord) -> Result<PartialMatrix> {
        let mut acc = PartialMatrix::identity(self.ring, self.shape.clone());
        for (g, e) in w.syllables() {
            let m = self
                .images
                .get(g)
                .ok_or_else(|| Error::Input(format!("generator `{g}` has no assigned image")))?;
            acc = acc.mul(&m.pow(*e))?;
        }
        Ok(acc)
    }

    /// Applies a matrix map (a projection) to every image.
    pub fn map_images(
        &self,
        shape: Arc<ConvexShape>,
        slot_taus: Vec<Generator>,
        f: impl Fn(&PartialMatrix) -> Result<PartialMatrix>,
    ) -> Result<Self> {
        let images = self
            .images
            .iter()
            .map(|(g, m)| Ok((g.clone(), f(m)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Assignment::new(self.ring, shape, images, slot_taus)
    }

    /// Restriction of every image to a smaller convex shape.
    pub fn project(&self, target: &Arc<ConvexShape>) -> Result<Self> {
        self.map_images(target.clone(), self.slot_taus.clone(), |m| m.project(target))
    }

    /// `p'_{n,m}` applied to every image; keeps the first `m` slots.
    pub fn upper_left(&self, m: usize) -> Result<Self> {
        let taus = self.slot_taus.iter().take(m).cloned().collect();
        self.map_images(Arc::new(ConvexShape::full(m)), taus, |x| x.upper_left(m))
    }

    /// `p''_{n,m}` applied to every image; keeps the last `m` slots.
    pub fn lower_right(&self, m: usize) -> Result<Self> {
        let skip = self.slot_taus.len().saturating_sub(m);
        let taus = self.slot_taus.iter().skip(skip).cloned().collect();
        self.map_images(Arc::new(ConvexShape::full(m)), taus, |x| x.lower_right(m))
    }
}

/// A relator whose image is not the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelatorFailure {
    /// 1-based position in the presentation.
    pub index: usize,
    pub relator: String,
    pub image: PartialMatrix,
    pub depth: usize,
}

/// Why an assignment fails to be a globalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Slot { slot: usize, tau: Generator, image: PartialMatrix },
    Relator(RelatorFailure),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionReport {
    pub failures: Vec<RelatorFailure>,
}

impl ObstructionReport {
    /// Smallest filtration depth among the failing relators.
    pub fn min_depth(&self) -> Option<usize> {
        self.failures.iter().map(|f| f.depth).min()
    }
}

/// A verified globalization: slot constraints hold and every relator maps
/// to the identity of `U_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Globalization {
    assignment: Assignment,
    surjectivity_verified: bool,
}

impl Globalization {
    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    pub fn n(&self) -> usize {
        self.assignment.shape.n()
    }

    pub fn ring(&self) -> ResidueRing {
        self.assignment.ring
    }

    pub fn image(&self, g: &Generator) -> Option<&PartialMatrix> {
        self.assignment.image(g)
    }

    pub fn eval_word(&self, w: &GroupWord) -> Result<PartialMatrix> {
        self.assignment.eval_word(w)
    }

    /// True when the image was enumerated and found to be all of `U_n`.
    /// Large groups are not enumerated; surjectivity there follows from the
    /// slot images being the standard generators.
    pub fn surjectivity_verified(&self) -> bool {
        self.surjectivity_verified
    }

    /// Filtration depth of each σ label's image.
    pub fn sigma_depths(&self, pres: &LinkPresentation) -> Vec<(Generator, usize)> {
        pres.slot_map()
            .sigma_words()
            .keys()
            .map(|s| (s.clone(), self.assignment.images[s].filtration_depth()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildOutcome {
    Globalized(Globalization),
    Obstructed(ObstructionReport),
}

impl BuildOutcome {
    pub fn globalization(self) -> Option<Globalization> {
        match self {
            BuildOutcome::Globalized(g) => Some(g),
            BuildOutcome::Obstructed(_) => None,
        }
    }
}

/// Every way `a` fails the slot constraints or the relators of `pres`.
pub fn violations(pres: &LinkPresentation, a: &Assignment) -> Result<Vec<Violation>> {
    let n = pres.n();
    if a.shape.as_ref() != &ConvexShape::full(n) || a.ring != pres.ring() {
        return input("assignment does not live in U_n over the presentation's ring");
    }
    let mut out = Vec::new();
    for l in 1..=n {
        let tau = pres.slot_map().tau(l);
        let image = a.eval_word(&GroupWord::generator(tau.clone()))?;
        let expected = PartialMatrix::elementary(a.ring, a.shape.clone(), l, l + 1, 1)?;
        if image != expected {
            out.push(Violation::Slot { slot: l, tau: tau.clone(), image });
        }
    }
    for g in pres.slot_map().trivial_generators() {
        if !a.eval_word(&GroupWord::generator(g.clone()))?.is_identity() {
            return input(format!("trivial generator `{g}` has a nontrivial image"));
        }
    }
    for (s, w) in pres.slot_map().sigma_words() {
        if a.image(s) != Some(&a.eval_word(w)?) {
            return input(format!("image of `{s}` disagrees with its word"));
        }
    }
    out.extend(relator_failures(pres, a)?.into_iter().map(Violation::Relator));
    Ok(out)
}

fn relator_failures(pres: &LinkPresentation, a: &Assignment) -> Result<Vec<RelatorFailure>> {
    let q = pres.ring().modulus();
    let mut out = Vec::new();
    for (i, r) in pres.relators().iter().enumerate() {
        let image = a.eval_word(&r.word(q))?;
        if !image.is_identity() {
            out.push(RelatorFailure { index: i + 1, relator: r.to_string(), depth: image.filtration_depth(), image });
        }
    }
    Ok(out)
}

fn certify(pres: &LinkPresentation, a: Assignment) -> Result<BuildOutcome> {
    let failures = relator_failures(pres, &a)?;
    if !failures.is_empty() {
        return Ok(BuildOutcome::Obstructed(ObstructionReport { failures }));
    }
    let n = pres.n();
    let q = pres.ring().modulus();
    let surjectivity_verified = match full_group_order(q, n) {
        Some(order) if order <= SURJECTIVITY_CHECK_LIMIT => {
            let gens: Vec<PartialMatrix> = a.slot_taus.iter().map(|g| a.images[g].clone()).collect();
            let image = generated_subgroup(&gens, order as usize)
                .ok_or_else(|| Error::Consistency("image closure exceeded |U_n|".into()))?;
            if image.len() as u128 != order {
                return Err(Error::Consistency(format!("image has {} of {order} elements", image.len())));
            }
            true
        }
        _ => false,
    };
    Ok(BuildOutcome::Globalized(Globalization { assignment: a, surjectivity_verified }))
}

/// The unique candidate (slot τ to `Id + E_{l,l+1}`), checked against every
/// relator.
pub fn build_globalization(pres: &LinkPresentation) -> BuildOutcome {
    certify(pres, Assignment::normalized(pres)).expect("normalized assignment covers all labels")
}

/// Whether every link-type relator's σ component maps into the center
/// `V_n`; if so, every relator is guaranteed to vanish.
pub fn check_link_type_vanishing(pres: &LinkPresentation) -> Result<bool> {
    let a = Assignment::normalized(pres);
    let n = pres.n();
    let mut all = true;
    for (i, r) in pres.relators().iter().enumerate() {
        let Relator::LinkType(lt) = r else {
            return input(format!("relator {} is not of link type", i + 1));
        };
        all &= a.eval_word(&lt.sigma)?.filtration_depth() >= n;
    }
    Ok(all)
}

/// `[I, j]`: the `(1, n+1)` entry of the image of `z`, which must lie in `V_n`.
pub fn linking_invariant(g: &Globalization, z: &GroupWord) -> Result<u64> {
    central_coordinate(&g.eval_word(z)?, &z.to_string())
}

// The corner entry of a matrix in V_n, or a precondition error naming the
// first other nonzero entry.
pub(crate) fn central_coordinate(image: &PartialMatrix, what: &str) -> Result<u64> {
    let n = image.n();
    if let Some(((k, l), v)) = image.off_diagonal().find(|&((k, l), v)| v != 0 && (k, l) != (1, n + 1)) {
        return Err(Error::Precondition(format!(
            "image of `{what}` is not in V_{n}: entry ({k},{l}) = {v}"
        )));
    }
    Ok(image.get(1, n + 1).unwrap_or(0))
}

/// Lifts globalizations of the first `m1` and the last `m2` slots to all
/// `n` slots through the fiber product of `U_{m1}` and `U_{m2}` over `U_t`.
pub fn fiber_lift(g1: &Globalization, g2: &Globalization, pres: &LinkPresentation) -> Result<BuildOutcome> {
    let n = pres.n();
    let (m1, m2) = (g1.n(), g2.n());
    if m1 > n || m2 > n || m1 + m2 < n {
        return input(format!("windows U_{m1}, U_{m2} do not cover U_{n}"));
    }
    let sub1 = pres.restrict(1, m1)?;
    let sub2 = pres.restrict(n - m2 + 1, n)?;
    for (g, sub, name) in [(g1, &sub1, "first"), (g2, &sub2, "second")] {
        if g.ring() != pres.ring() {
            return input(format!("{name} globalization is over {}", g.ring()));
        }
        if !violations(sub, g.assignment())?.is_empty() {
            return input(format!("{name} globalization does not satisfy its sub-presentation"));
        }
        for (s, w) in pres.slot_map().sigma_words() {
            if !g.eval_word(w)?.is_identity() {
                return Err(Error::Precondition(format!("{name} globalization is nontrivial on `{s}`")));
            }
        }
    }

    let identity = |m: usize| PartialMatrix::identity_full(pres.ring(), m);
    let mut taus = BTreeMap::new();
    for tau in pres.slot_map().taus() {
        let a = g1.image(tau).cloned().unwrap_or_else(|| identity(m1));
        let b = g2.image(tau).cloned().unwrap_or_else(|| identity(m2));
        taus.insert(tau.clone(), fiber_glue(&a, &b, n)?);
    }
    let lifted = Assignment::from_tau_images(pres, taus)?;

    // the lift projects back onto both inputs
    let back1 = lifted.upper_left(m1)?;
    let back2 = lifted.lower_right(m2)?;
    for (g, m) in g1.assignment().images() {
        if back1.image(g) != Some(m) {
            return Err(Error::Consistency(format!("lift does not restrict to the first input on `{g}`")));
        }
    }
    for (g, m) in g2.assignment().images() {
        if back2.image(g) != Some(m) {
            return Err(Error::Consistency(format!("lift does not restrict to the second input on `{g}`")));
        }
    }

    let outcome = certify(pres, lifted)?;
    if let BuildOutcome::Globalized(g) = &outcome {
        for (s, w) in pres.slot_map().sigma_words() {
            let m = g.eval_word(w)?;
            let in_kernel = m.upper_left(m1)?.is_identity() && m.lower_right(m2)?.is_identity();
            if !in_kernel {
                return Err(Error::Consistency(format!("lifted image of `{s}` leaves the kernel V")));
            }
        }
    }
    Ok(outcome)
}
