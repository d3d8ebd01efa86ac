use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::shape::ConvexShape;
use crate::error::{input, Error, Result};
use crate::zmod::ResidueRing;

/// An element of `U_S`: a unipotent partial matrix over `Z/q` with entries
/// exactly on the convex shape `S`. Diagonal entries are implicitly 1 and
/// stored as 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialMatrix {
    ring: ResidueRing,
    shape: Arc<ConvexShape>,
    // one value per shape entry, in the shape's sorted order
    values: Vec<u64>,
}

impl PartialMatrix {
    pub fn identity(ring: ResidueRing, shape: Arc<ConvexShape>) -> Self {
        let values = shape
            .entries()
            .iter()
            .map(|&(k, l)| u64::from(k == l))
            .collect();
        PartialMatrix { ring, shape, values }
    }

    /// The identity of the full group `U_n`.
    pub fn identity_full(ring: ResidueRing, n: usize) -> Self {
        Self::identity(ring, Arc::new(ConvexShape::full(n)))
    }

    /// Builds a matrix from off-diagonal entries; unspecified entries are 0.
    /// Values are reduced mod `q`.
    pub fn from_entries(
        ring: ResidueRing,
        shape: Arc<ConvexShape>,
        entries: impl IntoIterator<Item = ((usize, usize), i128)>,
    ) -> Result<Self> {
        let mut m = Self::identity(ring, shape);
        for ((k, l), v) in entries {
            if k == l {
                if ring.reduce(v) != 1 {
                    return input(format!("diagonal entry ({k},{k}) must be 1"));
                }
                continue;
            }
            let Some(pos) = m.shape.position(k, l) else {
                return input(format!("entry ({k},{l}) is not in the shape"));
            };
            m.values[pos] = ring.reduce(v);
        }
        Ok(m)
    }

    /// `Id_S + r E_{kl}`.
    pub fn elementary(
        ring: ResidueRing,
        shape: Arc<ConvexShape>,
        k: usize,
        l: usize,
        r: u64,
    ) -> Result<Self> {
        if k == l {
            return input("elementary matrices need k < l");
        }
        if !shape.contains(k, l) {
            return input(format!("entry ({k},{l}) is not in the shape"));
        }
        Self::from_entries(ring, shape, [((k, l), r as i128)])
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn shape(&self) -> &Arc<ConvexShape> {
        &self.shape
    }

    pub fn n(&self) -> usize {
        self.shape.n()
    }

    /// Entry `(k, l)`. Asking for an index outside the shape is a bug in
    /// the caller and panics; use [`PartialMatrix::get`] to probe.
    pub fn entry(&self, k: usize, l: usize) -> u64 {
        match self.shape.position(k, l) {
            Some(p) => self.values[p],
            None => panic!("entry ({k},{l}) is not in {:?}", self.shape),
        }
    }

    pub fn get(&self, k: usize, l: usize) -> Option<u64> {
        self.shape.position(k, l).map(|p| self.values[p])
    }

    /// Off-diagonal entries together with their indices.
    pub fn off_diagonal(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.shape
            .entries()
            .iter()
            .zip(&self.values)
            .filter(|((k, l), _)| k != l)
            .map(|(&kl, &v)| (kl, v))
    }

    pub fn is_identity(&self) -> bool {
        self.off_diagonal().all(|(_, v)| v == 0)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return input(format!("ring mismatch: {} vs {}", self.ring, other.ring));
        }
        if self.shape != other.shape {
            return input(format!("shape mismatch: {:?} vs {:?}", self.shape, other.shape));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_same_shape(other))
    }

    pub(crate) fn mul_same_shape(&self, other: &Self) -> Self {
        let ring = self.ring;
        let shape = &self.shape;
        let values = shape
            .entries()
            .iter()
            .map(|&(k, l)| {
                (k..=l).fold(0, |acc, r| {
                    let a = self.values[shape.position(k, r).expect("convex")];
                    let b = other.values[shape.position(r, l).expect("convex")];
                    ring.add(acc, ring.mul(a, b))
                })
            })
            .collect();
        PartialMatrix { ring, shape: self.shape.clone(), values }
    }

    /// Inverse by back-substitution, filling entries by increasing distance
    /// from the diagonal.
    pub fn inverse(&self) -> Self {
        let ring = self.ring;
        let shape = &self.shape;
        let mut order: Vec<(usize, usize)> = shape.off_diagonal().collect();
        order.sort_by_key(|&(k, l)| l - k);
        let mut inv = Self::identity(ring, shape.clone());
        for (k, l) in order {
            let mut s = 0;
            for r in k + 1..=l {
                let a = self.values[shape.position(k, r).expect("convex")];
                let b = inv.values[shape.position(r, l).expect("convex")];
                s = ring.add(s, ring.mul(a, b));
            }
            inv.values[shape.position(k, l).expect("member")] = ring.neg(s);
        }
        inv
    }

    pub fn pow(&self, exp: i64) -> Self {
        let mut base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::identity(self.ring, self.shape.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same_shape(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_same_shape(&base);
            }
        }
        acc
    }

    /// `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(a: &Self, b: &Self) -> Result<Self> {
        a.check_compatible(b)?;
        Ok(a.mul_same_shape(b)
            .mul_same_shape(&a.inverse())
            .mul_same_shape(&b.inverse()))
    }

    /// Restriction to a smaller convex shape; a homomorphism `U_S -> U_S'`.
    pub fn project(&self, target: &Arc<ConvexShape>) -> Result<Self> {
        if !target.is_subset_of(&self.shape) {
            return input(format!("{target:?} is not contained in {:?}", self.shape));
        }
        let values = target
            .entries()
            .iter()
            .map(|&(k, l)| self.entry(k, l))
            .collect();
        Ok(PartialMatrix { ring: self.ring, shape: target.clone(), values })
    }

    /// Reads the entries `a_{ι(k), ι(l)}` for `(ι(k), ι(l))` in `sub`, where
    /// `iota` lists `ι(1), ..., ι(m+1)` (1-based, strictly increasing). Every
    /// `r` with `(r, r+1)` in `sub` must lie in the image of `ι`.
    pub fn project_window(&self, iota: &[usize], sub: &ConvexShape) -> Result<Self> {
        let n = self.n();
        if iota.len() < 2 || iota.len() > n + 1 {
            return input(format!("window of size {} does not fit U_{n}", iota.len()));
        }
        if iota.windows(2).any(|w| w[0] >= w[1]) || iota[0] < 1 || iota[iota.len() - 1] > n + 1 {
            return input("index map must be strictly increasing into 1..=n+1");
        }
        if !sub.is_subset_of(&self.shape) {
            return input(format!("{sub:?} is not contained in {:?}", self.shape));
        }
        if let Some(r) = (1..=n).find(|&r| sub.contains(r, r + 1) && !iota.contains(&r)) {
            return input(format!("({r},{}) is in the shape but {r} is not in the window", r + 1));
        }
        let m = iota.len() - 1;
        let mut pairs = Vec::new();
        for k in 1..=m + 1 {
            for l in k..=m + 1 {
                if sub.contains(iota[k - 1], iota[l - 1]) {
                    pairs.push((k, l));
                }
            }
        }
        let bar = Arc::new(ConvexShape::new(m, &pairs)?);
        let values = bar
            .entries()
            .iter()
            .map(|&(k, l)| self.entry(iota[k - 1], iota[l - 1]))
            .collect();
        Ok(PartialMatrix { ring: self.ring, shape: bar, values })
    }

    /// `p'_{n,m}`: the upper-left `(m+1) x (m+1)` block of a full matrix.
    pub fn upper_left(&self, m: usize) -> Result<Self> {
        let n = self.n();
        if m == 0 || m > n {
            return input(format!("upper-left window U_{m} of U_{n}"));
        }
        let iota: Vec<usize> = (1..=m + 1).collect();
        self.project_window(&iota, &ConvexShape::upper_left(n, m))
    }

    /// `p''_{n,m}`: the lower-right `(m+1) x (m+1)` block of a full matrix.
    pub fn lower_right(&self, m: usize) -> Result<Self> {
        let n = self.n();
        if m == 0 || m > n {
            return input(format!("lower-right window U_{m} of U_{n}"));
        }
        let iota: Vec<usize> = (n - m + 1..=n + 1).collect();
        self.project_window(&iota, &ConvexShape::lower_right(n, m))
    }

    /// Largest `r` such that all off-diagonal entries with `l - k < r` vanish,
    /// i.e. the matrix lies in `V_{I(n,r)}`. The identity has depth `n + 1`.
    pub fn filtration_depth(&self) -> usize {
        self.off_diagonal()
            .filter(|&(_, v)| v != 0)
            .map(|((k, l), _)| l - k)
            .min()
            .unwrap_or(self.n() + 1)
    }

    /// Uniformly random element of `U_S`.
    pub fn random<R: Rng + ?Sized>(ring: ResidueRing, shape: Arc<ConvexShape>, rng: &mut R) -> Self {
        let q = ring.modulus();
        let values = shape
            .entries()
            .iter()
            .map(|&(k, l)| if k == l { 1 } else { rng.random_range(0..q) })
            .collect();
        PartialMatrix { ring, shape, values }
    }

    /// Every element of `U_S`, `q^{|S \ Δ|}` of them. Meant for small cases.
    pub fn enumerate(ring: ResidueRing, shape: Arc<ConvexShape>) -> impl Iterator<Item = Self> {
        let q = ring.modulus();
        let off: Vec<usize> = shape
            .entries()
            .iter()
            .enumerate()
            .filter(|(_, (k, l))| k != l)
            .map(|(i, _)| i)
            .collect();
        let total = (q as u128).checked_pow(off.len() as u32).unwrap_or(u128::MAX);
        let base = Self::identity(ring, shape);
        (0..total).map(move |mut code| {
            let mut m = base.clone();
            for &i in &off {
                m.values[i] = (code % q as u128) as u64;
                code /= q as u128;
            }
            m
        })
    }

    /// Line-oriented text form: `U n q`, then `k l value` for each nonzero
    /// off-diagonal entry. Only full matrices of `U_n` have a text form.
    pub fn to_text(&self) -> Result<String> {
        if !self.shape.is_full() {
            return input("only matrices of the full group U_n have a text form");
        }
        let mut out = format!("U {} {}\n", self.n(), self.ring.modulus());
        for ((k, l), v) in self.off_diagonal() {
            if v != 0 {
                out.push_str(&format!("{k} {l} {v}\n"));
            }
        }
        Ok(out)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse_err = |line: usize, message: String| Error::Parse { line, column: 1, message };
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty input".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (n, q) = match fields.as_slice() {
            ["U", n, q] => (
                n.parse::<usize>().map_err(|e| parse_err(hl, format!("bad n: {e}")))?,
                q.parse::<u64>().map_err(|e| parse_err(hl, format!("bad q: {e}")))?,
            ),
            _ => return Err(parse_err(hl, "expected header `U n q`".into())),
        };
        let ring = ResidueRing::new(q).map_err(|e| parse_err(hl, e.to_string()))?;
        let shape = Arc::new(ConvexShape::full(n));
        let mut m = Self::identity(ring, shape);
        for (ln, line) in lines {
            let nums: Vec<&str> = line.split_whitespace().collect();
            let [k, l, v] = nums.as_slice() else {
                return Err(parse_err(ln, "expected `k l value`".into()));
            };
            let k: usize = k.parse().map_err(|e| parse_err(ln, format!("bad row: {e}")))?;
            let l: usize = l.parse().map_err(|e| parse_err(ln, format!("bad column: {e}")))?;
            let v: i128 = v.parse().map_err(|e| parse_err(ln, format!("bad value: {e}")))?;
            match m.shape.position(k, l) {
                Some(p) if k < l => m.values[p] = ring.reduce(v),
                _ => return Err(parse_err(ln, format!("({k},{l}) is not an off-diagonal entry of U_{n}"))),
            }
        }
        Ok(m)
    }

    /// Row-major dense rows; entries outside the shape print as `None`.
    pub fn rows(&self) -> Vec<Vec<Option<u64>>> {
        let dim = self.shape.dim();
        (1..=dim)
            .map(|k| {
                (1..=dim)
                    .map(|l| if l < k { Some(0) } else { self.get(k, l) })
                    .collect()
            })
            .collect()
    }
}

impl fmt::Debug for PartialMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialMatrix({}, n={}, {:?})", self.ring, self.n(),
            self.off_diagonal().filter(|&(_, v)| v != 0).collect::<Vec<_>>())
    }
}

impl fmt::Display for PartialMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "U {} {}", self.n(), self.ring.modulus())?;
        for row in self.rows() {
            let cells: Vec<String> = row
                .iter()
                .map(|c| c.map_or_else(|| "*".to_string(), |v| v.to_string()))
                .collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}
