use super::globalization::{central_coordinate, Assignment};
use super::presentation::LinkTypeRelator;
use crate::error::{input, Error, Result};
use crate::magnus::GroupWord;
use crate::zmod::ResidueRing;

/// The corner entry of a link-type relator under an assignment into
/// `U_{n+1}`, next to the two quantities it is predicted from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pairing {
    pub ring: ResidueRing,
    /// `pr_{1,n+2}` of the relator image.
    pub value: u64,
    /// `pr_{n+1,n+2}` of the image of `τ^e`.
    pub tau_weight: u64,
    /// `[I, j](σ̂)` read off the `U_n` restriction.
    pub linking: u64,
}

impl Pairing {
    /// `-π̄_j(τ) · [I, j](σ̂)`.
    pub fn predicted(&self) -> u64 {
        self.ring.neg(self.ring.mul(self.tau_weight, self.linking))
    }

    pub fn holds(&self) -> bool {
        self.value == self.predicted()
    }
}

/// Evaluates `τ'^{qα}[τ^e, σ̂]` under `g_star` and reads its `(1, n+2)`
/// entry. The image of `τ^e` must be supported on `(n+1, n+2)` and the
/// restriction of `σ̂` to `U_n` must lie in `V_n`.
pub fn hoechsmann_pairing(g_star: &Assignment, r: &LinkTypeRelator) -> Result<Pairing> {
    let ring = g_star.ring();
    let size = g_star.shape().n();
    if !g_star.shape().is_full() || size < 2 {
        return input(format!("expected an assignment into a full U_m with m >= 2, got {:?}", g_star.shape()));
    }
    let n = size - 1;

    let tau_word = GroupWord::generator(r.tau.clone()).pow(r.tau_exp);
    let t = g_star.eval_word(&tau_word)?;
    if let Some(((k, l), v)) = t.off_diagonal().find(|&((k, l), v)| v != 0 && (k, l) != (n + 1, n + 2)) {
        return Err(Error::Precondition(format!(
            "image of `{tau_word}` is not supported on ({},{}): entry ({k},{l}) = {v}",
            n + 1,
            n + 2
        )));
    }
    let tau_weight = t.entry(n + 1, n + 2);

    let restricted = g_star.eval_word(&r.sigma)?.upper_left(n)?;
    let linking = central_coordinate(&restricted, &r.sigma.to_string())?;

    let value = g_star.eval_word(&r.word(ring.modulus()))?.entry(1, n + 2);
    Ok(Pairing { ring, value, tau_weight, linking })
}
