use std::cmp::Ordering;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// A generator label such as `t1`, `s2` or `tau`.
///
/// Labels order naturally: by alphabetic prefix, then by numeric suffix, so
/// `t2 < t10`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Generator(String);

impl Generator {
    pub fn new(label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if !is_label(&label) {
            return Err(Error::Input(format!("`{label}` is not a generator label")));
        }
        Ok(Generator(label))
    }

    /// `t<k>`, the conventional name of the `k`-th inertia generator.
    pub fn tau(k: usize) -> Self {
        Generator(format!("t{k}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn split(&self) -> (&str, Option<u64>) {
        let cut = self.0.find(|c: char| c.is_ascii_digit()).unwrap_or(self.0.len());
        let (prefix, digits) = self.0.split_at(cut);
        (prefix, digits.parse().ok())
    }
}

fn is_label(s: &str) -> bool {
    let mut seen_digit = false;
    !s.is_empty()
        && s.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_')
        && s.chars().all(|c| {
            if c.is_ascii_digit() {
                seen_digit = true;
                true
            } else {
                !seen_digit && (c.is_ascii_alphabetic() || c == '_')
            }
        })
}

impl Ord for Generator {
    fn cmp(&self, other: &Self) -> Ordering {
        let (pa, na) = self.split();
        let (pb, nb) = other.split();
        pa.cmp(pb).then(na.cmp(&nb)).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Generator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A freely reduced word in named generators with nonzero integer exponents.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct GroupWord {
    syllables: Vec<(Generator, i64)>,
}

impl GroupWord {
    pub fn empty() -> Self {
        GroupWord::default()
    }

    pub fn generator(g: Generator) -> Self {
        GroupWord { syllables: vec![(g, 1)] }
    }

    /// Builds a word from syllables, merging neighbours and dropping zero
    /// exponents until the result is freely reduced.
    pub fn from_syllables(syllables: impl IntoIterator<Item = (Generator, i64)>) -> Self {
        let mut w = GroupWord::empty();
        for (g, e) in syllables {
            w.push(g, e);
        }
        w
    }

    fn push(&mut self, g: Generator, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push((g, e));
    }

    pub fn syllables(&self) -> &[(Generator, i64)] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Sum of absolute exponents.
    pub fn length(&self) -> u64 {
        self.syllables.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn generators(&self) -> impl Iterator<Item = &Generator> {
        self.syllables.iter().map(|(g, _)| g)
    }

    /// Exponent sum of one generator.
    pub fn exponent_sum(&self, g: &Generator) -> i64 {
        self.syllables.iter().filter(|(h, _)| h == g).map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        let mut w = self.clone();
        for (g, e) in &other.syllables {
            w.push(g.clone(), *e);
        }
        w
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord::from_syllables(self.syllables.iter().rev().map(|(g, e)| (g.clone(), -e)))
    }

    pub fn pow(&self, k: i64) -> GroupWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = GroupWord::empty();
        for _ in 0..k.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    /// `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(a: &GroupWord, b: &GroupWord) -> GroupWord {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    /// Replaces each generator by a word; generators without a substitute are kept.
    pub fn substitute(&self, f: impl Fn(&Generator) -> Option<GroupWord>) -> GroupWord {
        let mut w = GroupWord::empty();
        for (g, e) in &self.syllables {
            let piece = f(g).unwrap_or_else(|| GroupWord::generator(g.clone()));
            w = w.mul(&piece.pow(*e));
        }
        w
    }

    /// Random word of up to `max_len` syllables over `letters`, exponents in
    /// `-max_exp..=max_exp`. Not necessarily reduced before normalization.
    pub fn random<R: Rng + ?Sized>(letters: &[Generator], max_len: usize, max_exp: i64, rng: &mut R) -> GroupWord {
        if letters.is_empty() {
            return GroupWord::empty();
        }
        let len = rng.random_range(0..=max_len);
        GroupWord::from_syllables((0..len).map(|_| {
            let g = letters[rng.random_range(0..letters.len())].clone();
            (g, rng.random_range(-max_exp..=max_exp))
        }))
    }

    /// Parses the word grammar: labels, `^k` powers (also on `[..]` and
    /// `(..)` groups), commutators `[w1,w2]`, juxtaposition for products,
    /// `1` for the identity. Whitespace is ignored between tokens.
    pub fn parse(text: &str) -> Result<GroupWord> {
        let mut p = WordParser { chars: text.chars().collect(), pos: 0 };
        let w = p.product()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error(format!("unexpected `{}`", p.chars[p.pos])));
        }
        Ok(w)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, (g, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupWord({self})")
    }
}

struct WordParser {
    chars: Vec<char>,
    pos: usize,
}

impl WordParser {
    fn error(&self, message: String) -> Error {
        Error::Parse { line: 1, column: self.pos + 1, message }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn product(&mut self) -> Result<GroupWord> {
        let mut w = GroupWord::empty();
        while let Some(c) = self.peek() {
            if c == ',' || c == ']' || c == ')' {
                break;
            }
            let atom = self.atom()?;
            let atom = self.power(atom)?;
            w = w.mul(&atom);
        }
        Ok(w)
    }

    fn atom(&mut self) -> Result<GroupWord> {
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let a = self.product()?;
                self.expect(',')?;
                let b = self.product()?;
                self.expect(']')?;
                Ok(GroupWord::commutator(&a, &b))
            }
            Some('(') => {
                self.pos += 1;
                let a = self.product()?;
                self.expect(')')?;
                Ok(a)
            }
            Some('1') => {
                self.pos += 1;
                Ok(GroupWord::empty())
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_ascii_alphabetic() || self.chars[self.pos] == '_')
                {
                    self.pos += 1;
                }
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let label: String = self.chars[start..self.pos].iter().collect();
                Ok(GroupWord::generator(Generator(label)))
            }
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of word".into())),
        }
    }

    fn power(&mut self, atom: GroupWord) -> Result<GroupWord> {
        if self.peek() != Some('^') {
            return Ok(atom);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        let k: i64 = digits
            .parse()
            .map_err(|_| Error::Parse { line: 1, column: start + 1, message: "expected an integer exponent".into() })?;
        Ok(if atom.syllables.len() == 1 {
            let (g, e) = atom.syllables[0].clone();
            GroupWord::from_syllables([(g, e * k)])
        } else {
            atom.pow(k)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(k: usize) -> GroupWord {
        GroupWord::generator(Generator::tau(k))
    }

    #[test]
    fn free_reduction() {
        let w = t(1).mul(&t(2)).mul(&t(2).inverse()).mul(&t(1));
        assert_eq!(w.syllables(), &[(Generator::tau(1), 2)]);
        assert!(t(1).mul(&t(1).inverse()).is_empty());
        assert_eq!(t(3).pow(-2).length(), 2);
    }

    #[test]
    fn parses_grammar() {
        assert_eq!(GroupWord::parse("").unwrap(), GroupWord::empty());
        assert_eq!(GroupWord::parse(" 1 ").unwrap(), GroupWord::empty());
        assert_eq!(GroupWord::parse("t2^-1").unwrap(), t(2).inverse());
        assert_eq!(
            GroupWord::parse("[t1, t2]").unwrap(),
            GroupWord::commutator(&t(1), &t(2))
        );
        assert_eq!(GroupWord::parse("t1t2").unwrap(), t(1).mul(&t(2)));
        assert_eq!(GroupWord::parse("t1 ^ 3 t2").unwrap(), t(1).pow(3).mul(&t(2)));
        assert_eq!(
            GroupWord::parse("[t1,t2]^2").unwrap(),
            GroupWord::commutator(&t(1), &t(2)).pow(2)
        );
        assert_eq!(GroupWord::parse("(t1 t2)^-1").unwrap(), t(2).inverse().mul(&t(1).inverse()));
        assert_eq!(
            GroupWord::parse("[[t1,t2],t3]").unwrap(),
            GroupWord::commutator(&GroupWord::commutator(&t(1), &t(2)), &t(3))
        );
    }

    #[test]
    fn parse_errors_carry_columns() {
        match GroupWord::parse("t1 [t2 t3]") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 10),
            other => panic!("{other:?}"),
        }
        assert!(GroupWord::parse("t1^").is_err());
        assert!(GroupWord::parse("t1 $").is_err());
        assert!(GroupWord::parse("(t1").is_err());
    }

    #[test]
    fn display_round_trips() {
        let w = GroupWord::parse("[t1^-1, s1] t3^4").unwrap();
        assert_eq!(GroupWord::parse(&w.to_string()).unwrap(), w);
        assert_eq!(GroupWord::empty().to_string(), "1");
    }

    #[test]
    fn natural_label_order() {
        let mut v = vec![Generator::tau(10), Generator::tau(2), Generator::new("s1").unwrap()];
        v.sort();
        assert_eq!(v, vec![Generator::new("s1").unwrap(), Generator::tau(2), Generator::tau(10)]);
        assert!(Generator::new("1t").is_err());
        assert!(Generator::new("t1x").is_err());
    }

    #[test]
    fn substitution() {
        let s = Generator::new("s").unwrap();
        let w = GroupWord::parse("[t1, s]").unwrap();
        let out = w.substitute(|g| (g == &s).then(|| t(2)));
        assert_eq!(out, GroupWord::commutator(&t(1), &t(2)));
    }
}
