//! Command-line front end.
//!
//! Every command produces a [`Report`]: a status plus an ordered list of
//! fields, rendered either as `key = value` lines or as one JSON object.
//! Exit codes: 0 ok, 1 obstruction or failed verification, 2 usage or
//! parse error.

use std::collections::HashSet;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::arithmetic::{self, legendre, OddPrime, SymbolResult};
use crate::error::Error;
use crate::linking::{
    build_globalization, fiber_lift, hoechsmann_pairing, Assignment, BuildOutcome, Globalization, LinkPresentation,
    LinkTypeRelator, ObstructionReport,
};
use crate::magnus::{eps, magnus_matrix, Generator, GroupWord};
use crate::primes::{is_prime, pow_mod};
use crate::unitriangular::{fiber_decompose, fiber_glue, full_group_order, ConvexShape, PartialMatrix};
use crate::zmod::ResidueRing;

const ENUMERATION_LIMIT: u128 = 1 << 20;

#[derive(Debug, Parser)]
#[command(name = "primelink", version, about = "Unitriangular linking invariants of primes")]
pub struct Cli {
    /// Emit one JSON object instead of `key = value` lines.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Legendre symbol, mod-2 linking number or Rédei symbol.
    Symbol {
        kind: SymbolKind,
        #[arg(allow_negative_numbers = true, required = true)]
        numbers: Vec<String>,
    },
    /// Build (or refute) the globalization of a presentation file.
    Solve {
        path: PathBuf,
        /// Also rebuild it by gluing the globalizations of the two
        /// windows of `n - 1` slots.
        #[arg(long)]
        lift: bool,
    },
    /// Magnus matrix and coefficient of a word.
    Magnus {
        word: String,
        /// Comma-separated index; bare numbers `k` stand for `t<k>`.
        #[arg(long)]
        idx: String,
        #[arg(long)]
        q: u64,
    },
    /// Run an invariant suite.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SymbolKind {
    Legendre,
    Mu,
    Redei,
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    /// Reciprocity chain against Euler's criterion, and the reciprocity law.
    Reciprocity {
        #[arg(long, default_value_t = 200)]
        max: u64,
    },
    /// Fiber product of the two window projections of `U_n`.
    Fiber(GroupArgs),
    /// Corner entry of random link-type relators against `-π̄(τ)·[I,j](σ̂)`.
    Pairing {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Obstruction,
    Error,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Obstruction => "obstruction",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Field {
    Int(i128),
    Bool(bool),
    Text(String),
    Matrix(PartialMatrix),
    Group(Vec<(String, Field)>),
}

#[derive(Debug, Clone)]
pub struct Report {
    pub status: Status,
    pub code: i32,
    pub fields: Vec<(String, Field)>,
}

impl Report {
    fn new(status: Status) -> Self {
        let code = match status {
            Status::Ok => 0,
            Status::Obstruction => 1,
            Status::Error => 2,
        };
        Report { status, code, fields: Vec::new() }
    }

    fn push(&mut self, key: impl Into<String>, value: Field) -> &mut Self {
        self.fields.push((key.into(), value));
        self
    }

    fn from_error(e: &Error) -> Self {
        let mut r = Report::new(Status::Error);
        if matches!(e, Error::Resource(_) | Error::Consistency(_)) {
            r.code = 1;
        }
        r.push("message", Field::Text(e.to_string()));
        r
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("status = {}\n", self.status.as_str());
        render_fields(&mut out, "", &self.fields);
        out
    }

    pub fn render_json(&self) -> String {
        let mut obj = Map::new();
        obj.insert("status".into(), json!(self.status.as_str()));
        for (k, v) in &self.fields {
            obj.insert(k.clone(), field_json(v));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("plain JSON values");
        s.push('\n');
        s
    }
}

fn render_fields(out: &mut String, prefix: &str, fields: &[(String, Field)]) {
    for (k, v) in fields {
        let key = format!("{prefix}{k}");
        match v {
            Field::Int(i) => out.push_str(&format!("{key} = {i}\n")),
            Field::Bool(b) => out.push_str(&format!("{key} = {b}\n")),
            Field::Text(t) => out.push_str(&format!("{key} = {t}\n")),
            Field::Matrix(m) => out.push_str(&format!("{key} = {m}")),
            Field::Group(g) => render_fields(out, &format!("{key}."), g),
        }
    }
}

fn field_json(f: &Field) -> Value {
    match f {
        Field::Int(i) => i64::try_from(*i).map_or_else(|_| json!(i.to_string()), |v| json!(v)),
        Field::Bool(b) => json!(b),
        Field::Text(t) => json!(t),
        Field::Matrix(m) => json!({
            "n": m.n(),
            "q": m.ring().modulus(),
            "rows": m.rows(),
        }),
        Field::Group(g) => Value::Object(g.iter().map(|(k, v)| (k.clone(), field_json(v))).collect()),
    }
}

/// What the binary prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let report = execute(&cli.command);
    let stdout = if cli.json { report.render_json() } else { report.render_text() };
    Outcome { code: report.code, stdout, stderr: String::new() }
}

pub fn execute(command: &Command) -> Report {
    let result = match command {
        Command::Symbol { kind, numbers } => cmd_symbol(*kind, numbers),
        Command::Solve { path, lift } => cmd_solve(path, *lift),
        Command::Magnus { word, idx, q } => cmd_magnus(word, idx, *q),
        Command::Verify { suite } => match suite {
            Suite::Reciprocity { max } => verify_reciprocity(*max),
            Suite::Fiber(g) => verify_fiber(g.n, g.q),
            Suite::Pairing { group, samples, seed } => verify_pairing(group.n, group.q, *samples, *seed),
        },
    };
    result.unwrap_or_else(|e| Report::from_error(&e))
}

fn parse_int(s: &str) -> Result<i128, Error> {
    s.trim().parse().map_err(|_| Error::Input(format!("`{s}` is not an integer")))
}

fn parse_odd_prime(s: &str) -> Result<OddPrime, Error> {
    let v = parse_int(s)?;
    u64::try_from(v).map_err(|_| Error::Input(format!("{v} is not an odd prime"))).and_then(OddPrime::new)
}

pub fn cmd_symbol(kind: SymbolKind, numbers: &[String]) -> Result<Report, Error> {
    let arity = match kind {
        SymbolKind::Legendre | SymbolKind::Mu => 2,
        SymbolKind::Redei => 3,
    };
    if numbers.len() != arity {
        return Err(Error::Input(format!("expected {arity} numbers, got {}", numbers.len())));
    }
    let result = match kind {
        SymbolKind::Legendre => arithmetic::legendre_symbol(parse_int(&numbers[0])?, parse_odd_prime(&numbers[1])?),
        SymbolKind::Mu => {
            let (pi, pj) = (parse_odd_prime(&numbers[0])?, parse_odd_prime(&numbers[1])?);
            let mu = arithmetic::mu_linking_number(pi, pj)?;
            let mut r = arithmetic::legendre_symbol(pi.get() as i128, pj);
            r.symbol = "mu";
            r.arguments = vec![pi.get(), pj.get()];
            debug_assert_eq!(r.z2(), Some(mu));
            r
        }
        SymbolKind::Redei => arithmetic::redei_symbol(
            parse_odd_prime(&numbers[0])?,
            parse_odd_prime(&numbers[1])?,
            parse_odd_prime(&numbers[2])?,
        )?,
    };
    Ok(symbol_report(&result))
}

fn symbol_report(s: &SymbolResult) -> Report {
    let mut r = Report::new(Status::Ok);
    r.push("class_number_gate", Field::Bool(arithmetic::class_number_gate()))
        .push("symbol", Field::Text(s.symbol.into()))
        .push("arguments", Field::Text(s.arguments.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")))
        .push("value", Field::Int(s.value.into()));
    match s.z2() {
        Some(b) => r.push("z2", Field::Int(b.into())),
        None => r.push("z2", Field::Text("undefined".into())),
    };
    let witnesses = s.witnesses.iter().map(|(k, v)| (k.clone(), Field::Text(v.clone()))).collect();
    r.push("witness", Field::Group(witnesses));
    r
}

pub fn cmd_solve(path: &std::path::Path, lift: bool) -> Result<Report, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    let pres = LinkPresentation::parse(&text)?;
    let mut lift_note = None;
    let mut outcome = None;
    if lift && pres.n() >= 2 {
        let n = pres.n();
        let first = build_globalization(&pres.restrict(1, n - 1)?);
        let second = build_globalization(&pres.restrict(2, n)?);
        match (first, second) {
            (BuildOutcome::Globalized(g1), BuildOutcome::Globalized(g2)) => match fiber_lift(&g1, &g2, &pres) {
                Ok(o) => {
                    lift_note = Some("applied".to_string());
                    outcome = Some(o);
                }
                Err(Error::Precondition(msg)) => lift_note = Some(format!("not applicable: {msg}")),
                Err(e) => return Err(e),
            },
            (BuildOutcome::Obstructed(r), _) | (_, BuildOutcome::Obstructed(r)) => {
                lift_note = Some("a window is obstructed".to_string());
                outcome = Some(BuildOutcome::Obstructed(r));
            }
        }
    }
    let outcome = outcome.unwrap_or_else(|| build_globalization(&pres));
    let mut r = match &outcome {
        BuildOutcome::Globalized(g) => globalization_report(g, &pres),
        BuildOutcome::Obstructed(o) => obstruction_report(o),
    };
    r.fields.insert(0, ("n".into(), Field::Int(pres.n() as i128)));
    r.fields.insert(1, ("q".into(), Field::Int(pres.ring().modulus().into())));
    if let Some(note) = lift_note {
        r.fields.insert(2, ("lift".into(), Field::Text(note)));
    }
    Ok(r)
}

fn globalization_report(g: &Globalization, pres: &LinkPresentation) -> Report {
    let mut r = Report::new(Status::Ok);
    r.push("surjectivity_verified", Field::Bool(g.surjectivity_verified()));
    let images = g.assignment().images().iter().map(|(k, m)| (k.to_string(), Field::Matrix(m.clone()))).collect();
    r.push("image", Field::Group(images));
    let depths = g.sigma_depths(pres).into_iter().map(|(s, d)| (s.to_string(), Field::Int(d as i128))).collect();
    r.push("sigma_depth", Field::Group(depths));
    r
}

fn obstruction_report(o: &ObstructionReport) -> Report {
    let mut r = Report::new(Status::Obstruction);
    r.push("min_depth", Field::Int(o.min_depth().unwrap_or(0) as i128));
    let failures = o
        .failures
        .iter()
        .map(|f| {
            let group = vec![
                ("relator".into(), Field::Text(f.relator.clone())),
                ("depth".into(), Field::Int(f.depth as i128)),
                ("image".into(), Field::Matrix(f.image.clone())),
            ];
            (f.index.to_string(), Field::Group(group))
        })
        .collect();
    r.push("failure", Field::Group(failures));
    r
}

fn parse_index(idx: &str) -> Result<Vec<Generator>, Error> {
    idx.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match s.parse::<usize>() {
            Ok(k) => Ok(Generator::tau(k)),
            Err(_) => Generator::new(s),
        })
        .collect()
}

pub fn cmd_magnus(word: &str, idx: &str, q: u64) -> Result<Report, Error> {
    let ring = ResidueRing::new(q)?;
    let w = GroupWord::parse(word)?;
    let index = parse_index(idx)?;
    let m = magnus_matrix(&w, &index, ring)?;
    let e = eps(&w, &index, ring);
    let mut r = Report::new(Status::Ok);
    r.push("word", Field::Text(w.to_string()))
        .push("index", Field::Text(index.iter().map(Generator::to_string).collect::<Vec<_>>().join(",")))
        .push("q", Field::Int(q.into()))
        .push("eps", Field::Int(e.into()))
        .push("matrix", Field::Matrix(m));
    Ok(r)
}

struct Tally(Vec<(String, u64, u64)>);

impl Tally {
    fn record(&mut self, name: &str, ok: bool) {
        if let Some(t) = self.0.iter_mut().find(|t| t.0 == name) {
            if ok { t.1 += 1 } else { t.2 += 1 }
        } else {
            self.0.push((name.into(), u64::from(ok), u64::from(!ok)));
        }
    }

    fn report(self, mut extra: Vec<(String, Field)>) -> Report {
        let failed = self.0.iter().any(|t| t.2 > 0);
        let mut r = Report::new(if failed { Status::Obstruction } else { Status::Ok });
        r.fields.append(&mut extra);
        for (name, pass, fail) in self.0 {
            r.push(name, Field::Group(vec![("pass".into(), Field::Int(pass.into())), ("fail".into(), Field::Int(fail.into()))]));
        }
        r
    }
}

pub fn verify_reciprocity(max: u64) -> Result<Report, Error> {
    if max < 3 {
        return Err(Error::Input("--max must be at least 3".into()));
    }
    let primes: Vec<OddPrime> = (3..max).filter(|&p| is_prime(p)).map(|p| OddPrime::new(p).expect("odd prime")).collect();
    let mut t = Tally(Vec::new());
    for &p in &primes {
        for a in 0..p.get() {
            let euler = match pow_mod(a, (p.get() - 1) / 2, p.get()) {
                0 => 0,
                1 => 1,
                _ => -1,
            };
            t.record("legendre_vs_euler", legendre(a as i128, p) == euler);
        }
    }
    for &p in &primes {
        for &r in primes.iter().filter(|&&r| r != p) {
            let sign = if (p.get() % 4 == 3) && (r.get() % 4 == 3) { -1 } else { 1 };
            t.record("reciprocity", legendre(p.get() as i128, r) * legendre(r.get() as i128, p) == sign);
        }
    }
    Ok(t.report(vec![("primes".into(), Field::Int(primes.len() as i128))]))
}

fn check_group_size(n: usize, q: u64) -> Result<(ResidueRing, u128), Error> {
    let ring = ResidueRing::new(q)?;
    match full_group_order(q, n) {
        Some(order) if order <= ENUMERATION_LIMIT => Ok((ring, order)),
        _ => Err(Error::Input(format!("|U_{n}| over Z/{q} is too large to enumerate"))),
    }
}

// U_0 is trivial, so an empty overlap always agrees.
fn overlap_agrees(a: &PartialMatrix, b: &PartialMatrix, t: usize) -> Result<bool, Error> {
    Ok(t == 0 || a.lower_right(t)? == b.upper_left(t)?)
}

pub fn verify_fiber(n: usize, q: u64) -> Result<Report, Error> {
    if n < 2 {
        return Err(Error::Input("--n must be at least 2".into()));
    }
    let (ring, order) = check_group_size(n, q)?;
    let m = n - 1;
    let mut t = Tally(Vec::new());
    let mut image = HashSet::new();
    let mut kernel = 0u128;
    for a in PartialMatrix::enumerate(ring, Arc::new(ConvexShape::full(n))) {
        let (m1, m2) = fiber_decompose(&a, m, m)?;
        t.record("projections_agree_on_overlap", overlap_agrees(&m1, &m2, m - 1)?);
        if m1.is_identity() && m2.is_identity() {
            kernel += 1;
            t.record("kernel_is_central", a.filtration_depth() >= n);
        }
        let glued = fiber_glue(&m1, &m2, n)?;
        t.record("glue_is_a_preimage", glued.upper_left(m)? == m1 && glued.lower_right(m)? == m2);
        image.insert((m1, m2));
    }
    let window = PartialMatrix::enumerate(ring, Arc::new(ConvexShape::full(m))).collect::<Vec<_>>();
    let mut fiber_product = 0u128;
    for b1 in &window {
        for b2 in &window {
            if overlap_agrees(b1, b2, m - 1)? {
                fiber_product += 1;
                t.record("surjective_onto_fiber_product", image.contains(&(b1.clone(), b2.clone())));
            }
        }
    }
    t.record("kernel_order_is_q", kernel == q as u128);
    t.record("image_order", image.len() as u128 * kernel == order);
    Ok(t.report(vec![
        ("n".into(), Field::Int(n as i128)),
        ("q".into(), Field::Int(q.into())),
        ("group_order".into(), Field::Int(order as i128)),
        ("fiber_product_order".into(), Field::Int(fiber_product as i128)),
    ]))
}

// Left-normed commutator [[t1, t2], ..., tn]; its image in U_n is central.
fn iterated_commutator(n: usize) -> GroupWord {
    (2..=n).fold(GroupWord::generator(Generator::tau(1)), |acc, k| {
        GroupWord::commutator(&acc, &GroupWord::generator(Generator::tau(k)))
    })
}

/// A link-type relator on `n + 1` slots with `τ = t_{n+1}` and `σ̂` central
/// in the first `n` slots.
pub fn random_link_type_relator<R: Rng + ?Sized>(n: usize, q: u64, rng: &mut R) -> LinkTypeRelator {
    let first: Vec<Generator> = (1..=n).map(Generator::tau).collect();
    let all: Vec<Generator> = (1..=n + 1).map(Generator::tau).collect();
    let last = Generator::tau(n + 1);
    let conj = GroupWord::random(&all, 6, 3, rng);
    let c = rng.random_range(0..2 * q as i64);
    let core = conj.mul(&iterated_commutator(n).pow(c)).mul(&conj.inverse());
    let tail = GroupWord::commutator(&GroupWord::generator(last.clone()).pow(rng.random_range(-3..=3)), &GroupWord::random(&first, 4, 2, rng));
    let sigma = core.mul(&tail).mul(&GroupWord::generator(last.clone()).pow(rng.random_range(-3..=3)));
    let tau_prime = all[rng.random_range(0..all.len())].clone();
    let tau_exp = rng.random_range(-(2 * q as i64)..=2 * q as i64);
    LinkTypeRelator::new(tau_prime, rng.random_range(0..4), last, tau_exp, sigma)
}

pub fn verify_pairing(n: usize, q: u64, samples: usize, seed: u64) -> Result<Report, Error> {
    if n == 0 || samples == 0 {
        return Err(Error::Input("--n and --samples must be positive".into()));
    }
    let ring = ResidueRing::new(q)?;
    let mut text = format!("params n={} q={q}\n", n + 1);
    for l in 1..=n + 1 {
        text.push_str(&format!("slot {l} tau=t{l}\n"));
    }
    let g_star = Assignment::normalized(&LinkPresentation::parse(&text)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally(Vec::new());
    let mut nonzero = 0;
    for _ in 0..samples {
        let r = random_link_type_relator(n, q, &mut rng);
        let p = hoechsmann_pairing(&g_star, &r)?;
        nonzero += u64::from(p.value != 0);
        t.record("pairing_identity", p.holds());
        t.record("tau_weight_is_exponent", p.tau_weight == ring.reduce(r.tau_exp.into()));
    }
    Ok(t.report(vec![
        ("n".into(), Field::Int(n as i128)),
        ("q".into(), Field::Int(q.into())),
        ("seed".into(), Field::Int(seed.into())),
        ("nonzero_values".into(), Field::Int(nonzero.into())),
    ]))
}
