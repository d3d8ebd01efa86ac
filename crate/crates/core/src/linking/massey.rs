use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::globalization::Assignment;
use super::presentation::LinkPresentation;
use crate::error::{input, Error, Result};
use crate::magnus::{Generator, GroupWord};

const DEFAULT_SAMPLES: usize = 64;
const DEFAULT_SEED: u64 = 0x6d61_7373_6579;

/// The coordinate maps `φ_l = pr_{l,l+1} ∘ ḡ` of a defining system.
#[derive(Debug, Clone)]
pub struct MasseyCoordinates {
    g_bar: Assignment,
    samples_checked: usize,
}

impl MasseyCoordinates {
    /// Number of maps, one per slot.
    pub fn len(&self) -> usize {
        self.g_bar.shape().n()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `φ_l(w)` for `1 <= l <= len()`.
    pub fn phi(&self, l: usize, w: &GroupWord) -> Result<u64> {
        if l == 0 || l > self.len() {
            return input(format!("coordinate index {l} outside 1..={}", self.len()));
        }
        Ok(self.g_bar.eval_word(w)?.entry(l, l + 1))
    }

    /// All coordinates of `w` at once.
    pub fn phis(&self, w: &GroupWord) -> Result<Vec<u64>> {
        let m = self.g_bar.eval_word(w)?;
        Ok((1..=self.len()).map(|l| m.entry(l, l + 1)).collect())
    }

    pub fn samples_checked(&self) -> usize {
        self.samples_checked
    }
}

/// [`massey_coordinates_with`] with a fixed seed and a default sample count.
pub fn massey_coordinates(g_bar: &Assignment, pres: &LinkPresentation) -> Result<MasseyCoordinates> {
    massey_coordinates_with(g_bar, pres, DEFAULT_SAMPLES, DEFAULT_SEED)
}

/// Checks that `g_bar` kills every relator of `pres` and that each `φ_l` is
/// additive on `samples` random word pairs drawn from a seeded generator.
pub fn massey_coordinates_with(
    g_bar: &Assignment,
    pres: &LinkPresentation,
    samples: usize,
    seed: u64,
) -> Result<MasseyCoordinates> {
    let n = pres.n();
    let shape = g_bar.shape();
    if shape.n() != n || (1..=n).any(|l| !shape.contains(l, l + 1)) {
        return input(format!("assignment shape {shape:?} does not carry the {n} adjacent coordinates"));
    }
    let q = pres.ring().modulus();
    for (i, r) in pres.relators().iter().enumerate() {
        let image = g_bar.eval_word(&r.word(q))?;
        if !image.is_identity() {
            return input(format!("relator {} (`{r}`) does not map to the identity:\n{image}", i + 1));
        }
    }

    let coords = MasseyCoordinates { g_bar: g_bar.clone(), samples_checked: samples };
    let ring = pres.ring();
    let letters: Vec<Generator> = g_bar.images().keys().cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let w1 = GroupWord::random(&letters, 8, 3, &mut rng);
        let w2 = GroupWord::random(&letters, 8, 3, &mut rng);
        let (a, b, ab) = (coords.phis(&w1)?, coords.phis(&w2)?, coords.phis(&w1.mul(&w2))?);
        for l in 0..n {
            if ab[l] != ring.add(a[l], b[l]) {
                return Err(Error::Consistency(format!("φ_{} is not additive on `{w1}`, `{w2}`", l + 1)));
            }
        }
    }
    Ok(coords)
}
