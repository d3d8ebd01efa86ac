use super::legendre::{legendre, sqrt_mod, OddPrime};
use super::SymbolResult;
use crate::error::{input, Error, Result};
use crate::primes::{gcd_u128, isqrt_u128};

/// Heights searched before giving up.
pub const MAX_CONIC_HEIGHT: i128 = 1 << 16;

const INITIAL_BOUND: i128 = 16;

/// A primitive solution of `x² = p1 y² + p2 z²` with `z > 0` odd (hence
/// `y` even and `x` odd) and the sign of `x` chosen so that
/// `x + y ≡ 1 (mod 4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConicSolution {
    pub p1: OddPrime,
    pub p2: OddPrime,
    pub x: i128,
    pub y: i128,
    pub z: i128,
}

impl ConicSolution {
    /// `max(|y|, z)`, the order in which solutions are enumerated.
    pub fn height(&self) -> i128 {
        self.y.abs().max(self.z)
    }

    pub fn is_primitive(&self) -> bool {
        let g = gcd_u128(gcd_u128(self.x.unsigned_abs(), self.y.unsigned_abs()), self.z.unsigned_abs());
        g == 1
    }

    pub fn z_odd(&self) -> bool {
        self.z % 2 != 0
    }

    pub fn x_plus_y_is_one_mod_4(&self) -> bool {
        (self.x + self.y).rem_euclid(4) == 1
    }

    /// Re-checks the equation and every normalization flag.
    pub fn is_valid(&self) -> bool {
        let (p1, p2) = (self.p1.get() as i128, self.p2.get() as i128);
        let lhs = self.x.checked_mul(self.x);
        let rhs = p1
            .checked_mul(self.y * self.y)
            .zip(p2.checked_mul(self.z * self.z))
            .and_then(|(a, b)| a.checked_add(b));
        lhs.is_some()
            && lhs == rhs
            && self.z > 0
            && self.z_odd()
            && self.is_primitive()
            && self.x_plus_y_is_one_mod_4()
    }
}

/// Normalized solutions in order of increasing height, then `z`, then `y`.
/// Stops after `max_height`.
pub fn conic_solutions(p1: OddPrime, p2: OddPrime, max_height: i128) -> impl Iterator<Item = ConicSolution> {
    let (a, b) = (p1.get() as i128, p2.get() as i128);
    (1..=max_height).flat_map(move |h| {
        (1..=h).step_by(2).flat_map(move |z| heights_for(h, z).map(move |y| (y, z))).filter_map(move |(y, z)| solve_at(p1, p2, a, b, y, z))
    })
}

// Even y with max(|y|, z) = h.
fn heights_for(h: i128, z: i128) -> Box<dyn Iterator<Item = i128>> {
    if z == h {
        let top = h - h % 2;
        Box::new((-top..=top).step_by(2))
    } else if h % 2 == 0 {
        Box::new([-h, h].into_iter())
    } else {
        Box::new(std::iter::empty())
    }
}

fn solve_at(p1: OddPrime, p2: OddPrime, a: i128, b: i128, y: i128, z: i128) -> Option<ConicSolution> {
    let rhs = a.checked_mul(y * y)?.checked_add(b.checked_mul(z * z)?)?;
    let x = isqrt_u128(rhs as u128) as i128;
    if x * x != rhs {
        return None;
    }
    let x = if (x + y).rem_euclid(4) == 1 { x } else { -x };
    let sol = ConicSolution { p1, p2, x, y, z };
    sol.is_primitive().then_some(sol)
}

fn check_pair(p1: OddPrime, p2: OddPrime) -> Result<()> {
    if p1 == p2 {
        return input(format!("the primes must be distinct, got {p1} twice"));
    }
    for p in [p1, p2] {
        if p.residue_mod_4() != 1 {
            return input(format!("{p} is not 1 mod 4"));
        }
    }
    if legendre(p1.get() as i128, p2) != 1 || legendre(p2.get() as i128, p1) != 1 {
        return input(format!("{p1} and {p2} are not quadratic residues of each other"));
    }
    Ok(())
}

/// First normalized solution for `(p1, p2)`; the bound on `|y|, z` doubles
/// from 16 up to [`MAX_CONIC_HEIGHT`].
pub fn redei_solve_conic(p1: OddPrime, p2: OddPrime) -> Result<ConicSolution> {
    check_pair(p1, p2)?;
    first_solution(p1, p2, |_| true)
}

fn first_solution(p1: OddPrime, p2: OddPrime, accept: impl Fn(&ConicSolution) -> bool) -> Result<ConicSolution> {
    let mut bound = INITIAL_BOUND;
    let mut searched = 0;
    loop {
        let found = conic_solutions(p1, p2, bound).skip_while(|s| s.height() <= searched).find(&accept);
        if let Some(s) = found {
            return Ok(s);
        }
        if bound >= MAX_CONIC_HEIGHT {
            return Err(Error::Resource(format!(
                "no admissible solution of x^2 = {p1} y^2 + {p2} z^2 with |y|, z <= {MAX_CONIC_HEIGHT}"
            )));
        }
        searched = bound;
        bound *= 2;
    }
}

fn check_triple(p1: OddPrime, p2: OddPrime, p3: OddPrime) -> Result<()> {
    check_pair(p1, p2)?;
    if p3 == p1 || p3 == p2 {
        return input(format!("{p3} must differ from {p1} and {p2}"));
    }
    for p in [p1, p2] {
        if legendre(p.get() as i128, p3) != 1 {
            return input(format!("{p} is not a square mod {p3}"));
        }
    }
    Ok(())
}

/// The Rédei symbol `[p1, p2, p3]`, computed from the first normalized
/// conic solution with `z` prime to `p3`.
pub fn redei_symbol(p1: OddPrime, p2: OddPrime, p3: OddPrime) -> Result<SymbolResult> {
    check_triple(p1, p2, p3)?;
    let sol = first_solution(p1, p2, |s| s.z % p3.get() as i128 != 0)?;
    redei_symbol_with(&sol, p3)
}

/// `((x + y s) / p3)` for `s² ≡ p1 (mod p3)`, with both roots checked.
pub fn redei_symbol_with(sol: &ConicSolution, p3: OddPrime) -> Result<SymbolResult> {
    check_triple(sol.p1, sol.p2, p3)?;
    if !sol.is_valid() {
        return input(format!("({}, {}, {}) is not a normalized conic solution", sol.x, sol.y, sol.z));
    }
    let m = p3.get() as i128;
    if sol.z % m == 0 {
        return input(format!("{p3} divides z = {}", sol.z));
    }
    let s = sqrt_mod(sol.p1.get() as i128, p3)
        .ok_or_else(|| Error::Consistency(format!("{} has no square root mod {p3}", sol.p1)))? as i128;
    let plus = legendre(sol.x + sol.y * s, p3);
    let minus = legendre(sol.x - sol.y * s, p3);
    if plus != minus || plus == 0 {
        return Err(Error::Consistency(format!(
            "square roots ±{s} of {} mod {p3} give {plus} and {minus}",
            sol.p1
        )));
    }
    Ok(SymbolResult {
        symbol: "redei",
        arguments: vec![sol.p1.get(), sol.p2.get(), p3.get()],
        value: plus,
        witnesses: vec![
            ("x".into(), sol.x.to_string()),
            ("y".into(), sol.y.to_string()),
            ("z".into(), sol.z.to_string()),
            ("sqrt_p1_mod_p3".into(), s.to_string()),
            ("alpha_mod_p3".into(), (sol.x + sol.y * s).rem_euclid(m).to_string()),
            ("value_other_root".into(), minus.to_string()),
        ],
    })
}

/// `[p1, p2, pj]` as an element of `Z/2`; `pj` must be 1 mod 4.
pub fn linking_invariant_n2(p1: OddPrime, p2: OddPrime, pj: OddPrime) -> Result<u8> {
    if pj.residue_mod_4() != 1 {
        return input(format!("{pj} is not 1 mod 4"));
    }
    Ok(u8::from(redei_symbol(p1, p2, pj)?.value == -1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> OddPrime {
        OddPrime::new(v).unwrap()
    }

    #[test]
    fn first_solutions_for_5_41() {
        let sols: Vec<_> = conic_solutions(p(5), p(41), 8).map(|s| (s.x, s.y, s.z)).collect();
        assert_eq!(&sols[..4], &[(-11, -4, 1), (-11, 4, 1), (-19, -8, 1), (-19, 8, 1)]);
        assert!(conic_solutions(p(5), p(41), 40).all(|s| s.is_valid()));
        assert_eq!(redei_solve_conic(p(5), p(41)).unwrap().height(), 4);
    }

    #[test]
    fn golden_triple() {
        let r = redei_symbol(p(5), p(41), p(61)).unwrap();
        assert_eq!(r.value, -1);
        assert_eq!(linking_invariant_n2(p(5), p(41), p(61)).unwrap(), 1);
    }

    #[test]
    fn value_does_not_depend_on_the_solution() {
        for sol in conic_solutions(p(5), p(41), 60).filter(|s| s.z % 61 != 0).take(8) {
            assert_eq!(redei_symbol_with(&sol, p(61)).unwrap().value, -1, "{sol:?}");
        }
    }

    #[test]
    fn thirteen_seventeen() {
        assert_eq!(legendre(13, p(17)), 1);
        assert_eq!(legendre(17, p(13)), 1);
        let s = redei_solve_conic(p(13), p(17)).unwrap();
        assert_eq!(s.x * s.x, 13 * s.y * s.y + 17 * s.z * s.z);
        assert!(s.is_valid());
    }

    #[test]
    fn preconditions() {
        assert!(redei_solve_conic(p(5), p(5)).is_err());
        assert!(redei_solve_conic(p(3), p(13)).is_err());
        assert!(redei_solve_conic(p(5), p(13)).is_err());
        assert!(redei_symbol(p(5), p(41), p(7)).is_err());
        assert!(redei_symbol(p(5), p(41), p(41)).is_err());
        assert!(linking_invariant_n2(p(5), p(41), p(3)).is_err());
        let mut bad = redei_solve_conic(p(5), p(41)).unwrap();
        bad.x = -bad.x;
        assert!(redei_symbol_with(&bad, p(61)).is_err());
    }
}
