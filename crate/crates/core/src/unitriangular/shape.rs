use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{input, Result};

/// A convex index set `S` inside the upper triangle `{(k, l) : 1 <= k <= l <= n+1}`.
///
/// Convex means: the diagonal is contained, and whenever `(k, l)` is in `S`
/// so is every `(k', l')` with `k <= k' <= l' <= l`. Indices are 1-based.
/// The entry list is kept sorted, so two shapes are equal iff they have the
/// same `n` and the same entries.
#[derive(Clone)]
pub struct ConvexShape {
    n: usize,
    entries: Vec<(usize, usize)>,
    // (k-1)*(n+1) + (l-1) -> position in `entries`
    slots: Vec<Option<u32>>,
}

/// Checks convexity of an arbitrary index set. Fails if a pair lies outside
/// the upper triangle of an `(n+1) x (n+1)` matrix.
pub fn is_convex(n: usize, pairs: &[(usize, usize)]) -> Result<bool> {
    let set = checked_set(n, pairs)?;
    Ok(convex_set(n, &set))
}

fn checked_set(n: usize, pairs: &[(usize, usize)]) -> Result<BTreeSet<(usize, usize)>> {
    let mut set = BTreeSet::new();
    for &(k, l) in pairs {
        if !(1 <= k && k <= l && l <= n + 1) {
            return input(format!("index ({k},{l}) outside 1 <= k <= l <= {}", n + 1));
        }
        set.insert((k, l));
    }
    Ok(set)
}

fn convex_set(n: usize, set: &BTreeSet<(usize, usize)>) -> bool {
    if !(1..=n + 1).all(|k| set.contains(&(k, k))) {
        return false;
    }
    // it suffices to check the two immediate inner neighbours of each entry
    set.iter().all(|&(k, l)| {
        k == l || (set.contains(&(k + 1, l)) && set.contains(&(k, l - 1)))
    })
}

impl ConvexShape {
    pub fn new(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let set = checked_set(n, pairs)?;
        if !convex_set(n, &set) {
            return input(format!("index set is not convex in I_{n}"));
        }
        Ok(Self::from_sorted(n, set.into_iter().collect()))
    }

    fn from_sorted(n: usize, entries: Vec<(usize, usize)>) -> Self {
        let dim = n + 1;
        let mut slots = vec![None; dim * dim];
        for (i, &(k, l)) in entries.iter().enumerate() {
            slots[(k - 1) * dim + (l - 1)] = Some(i as u32);
        }
        ConvexShape { n, entries, slots }
    }

    fn from_predicate(n: usize, keep: impl Fn(usize, usize) -> bool) -> Self {
        let mut entries = Vec::new();
        for k in 1..=n + 1 {
            for l in k..=n + 1 {
                if k == l || keep(k, l) {
                    entries.push((k, l));
                }
            }
        }
        Self::from_sorted(n, entries)
    }

    /// `I_n`: the whole upper triangle, giving the full group `U_n`.
    pub fn full(n: usize) -> Self {
        Self::from_predicate(n, |_, _| true)
    }

    /// The diagonal `Δ_n`.
    pub fn diagonal(n: usize) -> Self {
        Self::from_predicate(n, |_, _| false)
    }

    /// `I(n, r) = {(i, j) : j - i < r}`. For `r >= n + 1` this is `I_n`.
    pub fn filtration(n: usize, r: usize) -> Self {
        Self::from_predicate(n, |k, l| l - k < r)
    }

    /// `Δ_n ∪ I_m`, the upper-left `(m+1) x (m+1)` block plus the diagonal.
    pub fn upper_left(n: usize, m: usize) -> Self {
        Self::from_predicate(n, |_, l| l <= m + 1)
    }

    /// The diagonal plus the lower-right `(m+1) x (m+1)` block.
    pub fn lower_right(n: usize, m: usize) -> Self {
        let start = n + 1 - m;
        Self::from_predicate(n, |k, _| k >= start)
    }

    /// Matrices are `(n+1) x (n+1)`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.entries.len() == (self.n + 1) * (self.n + 2) / 2
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    /// Off-diagonal entries in sorted order.
    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.iter().copied().filter(|&(k, l)| k != l)
    }

    /// Storage position of `(k, l)`, if it belongs to the shape.
    #[inline]
    pub fn position(&self, k: usize, l: usize) -> Option<usize> {
        if k == 0 || l == 0 || k > self.n + 1 || l > self.n + 1 {
            return None;
        }
        self.slots[(k - 1) * (self.n + 1) + (l - 1)].map(|i| i as usize)
    }

    pub fn contains(&self, k: usize, l: usize) -> bool {
        self.position(k, l).is_some()
    }

    pub fn is_subset_of(&self, other: &ConvexShape) -> bool {
        self.n == other.n && self.entries.iter().all(|&(k, l)| other.contains(k, l))
    }
}

impl PartialEq for ConvexShape {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.entries == other.entries
    }
}

impl Eq for ConvexShape {}

impl Hash for ConvexShape {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.entries.hash(state);
    }
}

impl fmt::Debug for ConvexShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConvexShape(n={}, {:?})", self.n, self.off_diagonal().collect::<Vec<_>>())
    }
}
