use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{input, Error, Result};
use crate::magnus::{Generator, GroupWord};
use crate::zmod::ResidueRing;

/// One slot `l` of the index tuple `I = (i_1, ..., i_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub tau: Generator,
    pub sigma: Option<Generator>,
}

/// Slot labels, Frobenius-type `σ` words, and generators that are killed in
/// the quotient (inertia generators of primes outside `I`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SlotMap {
    slots: Vec<Slot>,
    sigma_words: BTreeMap<Generator, GroupWord>,
    trivial: BTreeSet<Generator>,
}

impl SlotMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the next slot.
    pub fn slot(mut self, tau: Generator, sigma: Option<Generator>) -> Self {
        self.slots.push(Slot { tau, sigma });
        self
    }

    pub fn sigma_word(mut self, label: Generator, word: GroupWord) -> Self {
        self.sigma_words.insert(label, word);
        self
    }

    pub fn trivial(mut self, label: Generator) -> Self {
        self.trivial.insert(label);
        self
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn tau(&self, l: usize) -> &Generator {
        &self.slots[l - 1].tau
    }

    pub fn taus(&self) -> impl Iterator<Item = &Generator> {
        self.slots.iter().map(|s| &s.tau)
    }

    /// The slot (1-based) carrying this τ label.
    pub fn slot_of(&self, tau: &Generator) -> Option<usize> {
        self.slots.iter().position(|s| &s.tau == tau).map(|i| i + 1)
    }

    pub fn sigma_words(&self) -> &BTreeMap<Generator, GroupWord> {
        &self.sigma_words
    }

    pub fn trivial_generators(&self) -> &BTreeSet<Generator> {
        &self.trivial
    }

    pub fn is_tau_label(&self, g: &Generator) -> bool {
        self.slot_of(g).is_some() || self.trivial.contains(g)
    }

    fn is_declared(&self, g: &Generator) -> bool {
        self.is_tau_label(g) || self.sigma_words.contains_key(g)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        let labels = self
            .slots
            .iter()
            .map(|s| &s.tau)
            .chain(self.trivial.iter())
            .chain(self.sigma_words.keys());
        for g in labels {
            if !seen.insert(g) {
                return input(format!("label `{g}` is declared twice"));
            }
        }
        for slot in &self.slots {
            if let Some(s) = &slot.sigma {
                if !self.sigma_words.contains_key(s) {
                    return input(format!("slot σ label `{s}` has no word"));
                }
            }
        }
        for (s, w) in &self.sigma_words {
            if let Some(g) = w.generators().find(|g| !self.is_tau_label(g)) {
                return input(format!("σ word `{s}` uses `{g}`, which is not a τ generator"));
            }
        }
        Ok(())
    }
}

/// `τ'^{qα} [τ^e, σ̂]`, the relator shape of link-type presentations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkTypeRelator {
    pub tau_prime: Generator,
    pub alpha: i64,
    pub tau: Generator,
    pub tau_exp: i64,
    pub sigma: GroupWord,
}

impl LinkTypeRelator {
    pub fn new(tau_prime: Generator, alpha: i64, tau: Generator, tau_exp: i64, sigma: GroupWord) -> Self {
        LinkTypeRelator { tau_prime, alpha, tau, tau_exp, sigma }
    }

    /// The relator `τ^{N-1} [τ^-1, σ^-1]` for a prime with norm `N ≡ 1 mod q`.
    pub fn koch_hoechsmann(tau: Generator, sigma: Generator, alpha: i64) -> Self {
        LinkTypeRelator {
            tau_prime: tau.clone(),
            alpha,
            tau,
            tau_exp: -1,
            sigma: GroupWord::generator(sigma).inverse(),
        }
    }

    pub fn word(&self, q: u64) -> GroupWord {
        let power = GroupWord::from_syllables([(self.tau_prime.clone(), (q as i64).saturating_mul(self.alpha))]);
        let tau = GroupWord::from_syllables([(self.tau.clone(), self.tau_exp)]);
        power.mul(&GroupWord::commutator(&tau, &self.sigma))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relator {
    Free(GroupWord),
    LinkType(LinkTypeRelator),
}

impl Relator {
    pub fn word(&self, q: u64) -> GroupWord {
        match self {
            Relator::Free(w) => w.clone(),
            Relator::LinkType(r) => r.word(q),
        }
    }

    pub fn as_link_type(&self) -> Option<&LinkTypeRelator> {
        match self {
            Relator::LinkType(r) => Some(r),
            Relator::Free(_) => None,
        }
    }
}

impl fmt::Display for Relator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relator::Free(w) => write!(f, "{w}"),
            Relator::LinkType(r) => write!(
                f,
                "linktype tau'={} alpha={} tau={} sigma={}",
                r.tau_prime,
                r.alpha,
                compact(&GroupWord::from_syllables([(r.tau.clone(), r.tau_exp)])),
                compact(&r.sigma)
            ),
        }
    }
}

fn compact(w: &GroupWord) -> String {
    w.to_string().replace(' ', "")
}

/// A finite-level presentation of a linking structure `G_I`: `n` slots over
/// `Z/q`, σ words, and relators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkPresentation {
    ring: ResidueRing,
    slots: SlotMap,
    relators: Vec<Relator>,
}

impl LinkPresentation {
    pub fn new(ring: ResidueRing, slots: SlotMap, relators: Vec<Relator>) -> Result<Self> {
        if slots.slots.is_empty() {
            return input("a presentation needs at least one slot");
        }
        slots.validate()?;
        for (i, r) in relators.iter().enumerate() {
            if let Relator::LinkType(lt) = r {
                for g in [&lt.tau_prime, &lt.tau] {
                    if !slots.is_tau_label(g) {
                        return input(format!("relator {}: `{g}` must be a τ generator", i + 1));
                    }
                }
            }
            if let Some(g) = r.word(ring.modulus()).generators().find(|g| !slots.is_declared(g)) {
                return input(format!("relator {} uses undeclared generator `{g}`", i + 1));
            }
        }
        Ok(LinkPresentation { ring, slots, relators })
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.slots.slots.len()
    }

    pub fn slot_map(&self) -> &SlotMap {
        &self.slots
    }

    pub fn relators(&self) -> &[Relator] {
        &self.relators
    }

    /// The presentation of the sub-structure on slots `first..=last`
    /// (1-based). τ generators of the dropped slots become trivial.
    pub fn restrict(&self, first: usize, last: usize) -> Result<Self> {
        if first < 1 || first > last || last > self.n() {
            return input(format!("slot range {first}..={last} outside 1..={}", self.n()));
        }
        let mut slots = SlotMap {
            slots: self.slots.slots[first - 1..last].to_vec(),
            sigma_words: self.slots.sigma_words.clone(),
            trivial: self.slots.trivial.clone(),
        };
        for (i, s) in self.slots.slots.iter().enumerate() {
            if i + 1 < first || i + 1 > last {
                slots.trivial.insert(s.tau.clone());
            }
        }
        Self::new(self.ring, slots, self.relators.clone())
    }

    /// Parses the line-oriented presentation format.
    pub fn parse(text: &str) -> Result<Self> {
        parse_presentation(text)
    }
}

impl fmt::Display for LinkPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "params n={} q={}", self.n(), self.ring.modulus())?;
        for (i, s) in self.slots.slots.iter().enumerate() {
            match &s.sigma {
                Some(sig) => writeln!(f, "slot {} tau={} sigma={}", i + 1, s.tau, sig)?,
                None => writeln!(f, "slot {} tau={}", i + 1, s.tau)?,
            }
        }
        if !self.slots.trivial.is_empty() {
            let labels: Vec<String> = self.slots.trivial.iter().map(|g| g.to_string()).collect();
            writeln!(f, "trivial {}", labels.join(" "))?;
        }
        for (s, w) in &self.slots.sigma_words {
            writeln!(f, "sigma {s} = {w}")?;
        }
        for r in &self.relators {
            writeln!(f, "rel {r}")?;
        }
        Ok(())
    }
}

fn parse_presentation(text: &str) -> Result<LinkPresentation> {
    let mut params: Option<(usize, u64)> = None;
    let mut slots: BTreeMap<usize, Slot> = BTreeMap::new();
    let mut map = SlotMap::new();
    let mut relators = Vec::new();
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let indent = content.len() - content.trim_start().len();
        let line = content.trim();
        if line.is_empty() {
            continue;
        }
        let err = |col: usize, message: String| Error::Parse { line: line_no, column: indent + col + 1, message };
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest_col = line.len() - rest.len();
        // re-anchor word/value parse errors onto the file position
        let reanchor = |e: Error, offset: usize| match e {
            Error::Parse { column, message, .. } => err(offset + column - 1, message),
            other => err(offset, other.to_string()),
        };
        let label = |s: &str, col: usize| Generator::new(s).map_err(|e| err(col, e.to_string()));
        match keyword {
            "params" => {
                let kv = key_values(rest, rest_col).map_err(|(c, m)| err(c, m))?;
                let get = |k: &str| {
                    kv.iter()
                        .find(|(key, _, _)| key == k)
                        .ok_or_else(|| err(rest_col, format!("missing `{k}=`")))
                };
                let (_, n, nc) = get("n")?;
                let (_, q, qc) = get("q")?;
                let n: usize = n.parse().map_err(|_| err(*nc, format!("bad n `{n}`")))?;
                let q: u64 = q.parse().map_err(|_| err(*qc, format!("bad q `{q}`")))?;
                params = Some((n, q));
            }
            "slot" => {
                let (num, tail) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                let l: usize = num.parse().map_err(|_| err(rest_col, format!("bad slot number `{num}`")))?;
                let tail_col = line.len() - tail.len();
                let kv = key_values(tail, tail_col).map_err(|(c, m)| err(c, m))?;
                let mut tau = None;
                let mut sigma = None;
                for (k, v, c) in &kv {
                    match k.as_str() {
                        "tau" => tau = Some(label(v, *c)?),
                        "sigma" => sigma = Some(label(v, *c)?),
                        _ => return Err(err(*c, format!("unknown slot key `{k}`"))),
                    }
                }
                let tau = tau.ok_or_else(|| err(tail_col, "slot needs `tau=`".into()))?;
                if slots.insert(l, Slot { tau, sigma }).is_some() {
                    return Err(err(rest_col, format!("slot {l} declared twice")));
                }
            }
            "sigma" => {
                let (lhs, rhs) = rest
                    .split_once('=')
                    .ok_or_else(|| err(rest_col, "expected `sigma <label> = <word>`".into()))?;
                let name = label(lhs.trim(), rest_col)?;
                let rhs_col = rest_col + lhs.len() + 1;
                let word = GroupWord::parse(rhs).map_err(|e| reanchor(e, rhs_col))?;
                map = map.sigma_word(name, word);
            }
            "trivial" => {
                for (tok, col) in tokens(rest, rest_col) {
                    map = map.trivial(label(tok, col)?);
                }
            }
            "rel" => {
                let (first, tail) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                if first == "linktype" {
                    let tail_col = line.len() - tail.len();
                    relators.push(Relator::LinkType(parse_link_type(tail, tail_col).map_err(|(c, m)| err(c, m))?));
                } else {
                    let word = GroupWord::parse(rest).map_err(|e| reanchor(e, rest_col))?;
                    relators.push(Relator::Free(word));
                }
            }
            other => return Err(err(0, format!("unknown directive `{other}`"))),
        }
    }

    let eof = |message: String| Error::Parse { line: last_line, column: 1, message };
    let (n, q) = params.ok_or_else(|| eof("missing `params n=<n> q=<q>`".into()))?;
    let ring = ResidueRing::new(q).map_err(|e| eof(e.to_string()))?;
    if slots.len() != n || slots.keys().copied().ne(1..=n) {
        return Err(eof(format!("slots must be exactly 1..={n}")));
    }
    for slot in slots.into_values() {
        map = map.slot(slot.tau, slot.sigma);
    }
    LinkPresentation::new(ring, map, relators).map_err(|e| eof(e.to_string()))
}

fn tokens(s: &str, offset: usize) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices().chain([(s.len(), ' ')]) {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(st)) => {
                out.push((&s[st..i], offset + st));
                start = None;
            }
            _ => {}
        }
    }
    out
}

type KeyValues = Vec<(String, String, usize)>;

fn key_values(s: &str, offset: usize) -> std::result::Result<KeyValues, (usize, String)> {
    tokens(s, offset)
        .into_iter()
        .map(|(tok, col)| match tok.split_once('=') {
            Some((k, v)) if !k.is_empty() && !v.is_empty() => Ok((k.to_string(), v.to_string(), col + k.len() + 1)),
            _ => Err((col, format!("expected `key=value`, found `{tok}`"))),
        })
        .collect()
}

fn parse_link_type(s: &str, offset: usize) -> std::result::Result<LinkTypeRelator, (usize, String)> {
    let kv = key_values(s, offset)?;
    let get = |k: &str| {
        kv.iter()
            .find(|(key, _, _)| key == k)
            .map(|(_, v, c)| (v.as_str(), *c))
            .ok_or((offset, format!("link-type relator needs `{k}=`")))
    };
    if let Some((k, _, c)) = kv.iter().find(|(k, _, _)| !["tau'", "alpha", "tau", "sigma"].contains(&k.as_str())) {
        return Err((*c, format!("unknown key `{k}`")));
    }
    let (tp, tpc) = get("tau'")?;
    let (alpha, ac) = get("alpha")?;
    let (tau, tc) = get("tau")?;
    let (sigma, sc) = get("sigma")?;
    let tau_prime = Generator::new(tp).map_err(|e| (tpc, e.to_string()))?;
    let alpha: i64 = alpha.parse().map_err(|_| (ac, format!("bad alpha `{alpha}`")))?;
    let tau_word = GroupWord::parse(tau).map_err(|e| (tc, e.to_string()))?;
    let (tau, tau_exp) = match tau_word.syllables() {
        [(g, e)] => (g.clone(), *e),
        _ => return Err((tc, format!("`{tau}` must be a power of a single τ generator"))),
    };
    let sigma = GroupWord::parse(sigma).map_err(|e| (sc, e.to_string()))?;
    Ok(LinkTypeRelator { tau_prime, alpha, tau, tau_exp, sigma })
}
