//! Greedy lexicode construction over `Z4^n`.
//!
//! With respect to an ordered basis `b_1..b_n` the list `V_n` is built as
//! `V_i = V_{i-1}, b_i + V_{i-1}, 2b_i + V_{i-1}, 3b_i + V_{i-1}`. The element
//! at position `j` is `sum_i u_i b_i` where `u_i` is the base-4 digit of `j`
//! of weight `4^(i-1)`. Step `i` of the construction scans the block
//! `V_i \ V_{i-1}` once and accepts the first candidate `a` compatible with
//! the current code; the code then becomes `C, a + C, 2a + C, 3a + C`.

use std::collections::HashSet;
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Elided, Result};
use crate::property::{is_multiplicative_empirical, Multiplicativity, PropertySpec, Sweep};
use crate::z4::{packed_add, packed_scale, Z4Vector};

/// An ordered basis of `Z4^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedBasis {
    vectors: Vec<Z4Vector>,
}

impl OrderedBasis {
    pub fn canonical(n: usize) -> Result<Self> {
        let vectors = (0..n).map(|i| Z4Vector::unit(n, i)).collect::<Result<Vec<_>>>()?;
        Ok(Self { vectors })
    }

    /// Validates that the rows generate `Z4^n`.
    ///
    /// A square matrix over Z4 is invertible iff its reduction mod 2 is
    /// invertible over GF(2).
    pub fn new(vectors: Vec<Z4Vector>) -> Result<Self> {
        let n = vectors.len();
        if n == 0 {
            return Err(Error::InvalidBasis("empty basis".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::InvalidBasis(format!("{n} vectors but vector {v} has length {}", v.len())));
        }
        if !invertible_mod2(&vectors) {
            return Err(Error::InvalidBasis("rows do not generate Z4^n (singular mod 2)".into()));
        }
        Ok(Self { vectors })
    }

    /// Uniformly random invertible basis, by rejection.
    pub fn random(n: usize, rng: &mut impl Rng) -> Result<Self> {
        Z4Vector::zero(n)?;
        loop {
            let vectors: Vec<Z4Vector> =
                (0..n).map(|_| Z4Vector::from_packed_unchecked(rng.gen(), n)).collect();
            if invertible_mod2(&vectors) {
                return Ok(Self { vectors });
            }
        }
    }

    /// Parses one digit-string row per non-empty, non-comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::parse)
            .collect::<Result<Vec<Z4Vector>>>()?;
        Self::new(rows)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Z4Vector] {
        &self.vectors
    }

    pub fn is_canonical(&self) -> bool {
        self.vectors.iter().enumerate().all(|(i, v)| v.packed() == 1 << (2 * i))
    }

    /// Element at position `j` of `V_n`.
    pub fn element(&self, mut j: u64) -> Z4Vector {
        let n = self.len();
        let mut acc = 0u64;
        for b in &self.vectors {
            let u = (j & 3) as u8;
            if u != 0 {
                acc = packed_add(acc, packed_scale(u, b.packed()));
            }
            j >>= 2;
        }
        Z4Vector::from_packed_unchecked(acc, n)
    }

    /// Positions `4^(i-1) .. 4^i` of `V_n`, i.e. `V_i \ V_{i-1}` (`i` is 1-based).
    pub fn block(&self, i: usize) -> impl Iterator<Item = Z4Vector> + '_ {
        assert!((1..=self.len()).contains(&i));
        let start = 1u64 << (2 * (i - 1));
        (start..start << 2).map(move |j| self.element(j))
    }
}

fn invertible_mod2(rows: &[Z4Vector]) -> bool {
    let n = rows.len();
    let mut m: Vec<u64> = rows
        .iter()
        .map(|r| (0..n).filter(|&k| r.get(k).unwrap_or(0) & 1 == 1).fold(0u64, |acc, k| acc | 1 << k))
        .collect();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| m[r] >> col & 1 == 1) else {
            return false;
        };
        m.swap(col, p);
        for r in 0..n {
            if r != col && m[r] >> col & 1 == 1 {
                m[r] ^= m[col];
            }
        }
    }
    true
}

/// The list `V_n` in construction order.
pub fn enumerate_v(basis: &OrderedBasis) -> impl Iterator<Item = Z4Vector> + '_ {
    (0..1u64 << (2 * basis.len())).map(move |j| basis.element(j))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    /// Accept `a` when `P[2a + c]` holds for every `c` in the current code.
    AsWritten,
    /// Accept `a` when `P[u a + c]` holds for `u` in `{1, 2, 3}` and every `c`.
    FullCheck,
}

impl CheckMode {
    fn multipliers(self) -> &'static [u8] {
        match self {
            CheckMode::AsWritten => &[2],
            CheckMode::FullCheck => &[1, 2, 3],
        }
    }
}

impl fmt::Display for CheckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckMode::AsWritten => "as-written",
            CheckMode::FullCheck => "full-check",
        })
    }
}

impl std::str::FromStr for CheckMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as-written" => Ok(CheckMode::AsWritten),
            "full-check" => Ok(CheckMode::FullCheck),
            _ => Err(Error::PropertyParse(format!("unknown check mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LexicodeOptions {
    pub mode: CheckMode,
    /// Build even when the multiplicativity sweep finds a counterexample.
    pub allow_non_multiplicative: bool,
    /// Rejections recorded per step before the log truncates.
    pub log_cap: usize,
    pub sweep: Option<Sweep>,
}

impl Default for LexicodeOptions {
    fn default() -> Self {
        Self { mode: CheckMode::FullCheck, allow_non_multiplicative: false, log_cap: 16, sweep: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub candidate: Z4Vector,
    pub multiplier: u8,
    /// The code word `c` for which `P[multiplier * candidate + c]` failed.
    pub offset: Z4Vector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelectionStep {
    pub step: usize,
    pub tested: u64,
    pub accepted: Option<Z4Vector>,
    pub rejections: Vec<Rejection>,
    pub rejections_dropped: u64,
}

/// A Z4-linear code produced by the greedy construction.
#[derive(Clone, Debug)]
pub struct LinearCode {
    n: usize,
    generators: Vec<Z4Vector>,
    codewords: Vec<Z4Vector>,
    selection_log: Vec<SelectionStep>,
    /// Code sizes `|C_0|, |C_1|, ..., |C_n|`.
    chain: Vec<usize>,
    report: Option<VerificationReport>,
}

impl LinearCode {
    /// Span of `generators` in nested-construction order.
    pub fn from_generators(n: usize, generators: Vec<Z4Vector>) -> Result<Self> {
        let mut codewords = vec![Z4Vector::zero(n)?];
        let mut seen: HashSet<u64> = HashSet::from([0]);
        let mut chain = vec![1];
        for g in &generators {
            if g.len() != n {
                return Err(Error::LengthMismatch { left: n, right: g.len() });
            }
            extend_span(&mut codewords, &mut seen, *g);
            chain.push(codewords.len());
        }
        Ok(Self { n, generators, codewords, selection_log: Vec::new(), chain, report: None })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn size(&self) -> usize {
        self.codewords.len()
    }

    pub fn generators(&self) -> &[Z4Vector] {
        &self.generators
    }

    pub fn codewords(&self) -> &[Z4Vector] {
        &self.codewords
    }

    pub fn selection_log(&self) -> &[SelectionStep] {
        &self.selection_log
    }

    pub fn chain(&self) -> &[usize] {
        &self.chain
    }

    pub fn report(&self) -> Option<&VerificationReport> {
        self.report.as_ref()
    }

    pub fn contains(&self, x: &Z4Vector) -> bool {
        self.codewords.contains(x)
    }

    /// Minimum nonzero Hamming weight; `None` for the zero code.
    pub fn min_nonzero_weight(&self) -> Option<usize> {
        self.codewords.iter().filter(|c| !c.is_zero()).map(Z4Vector::hamming_weight).min()
    }

    pub fn min_gc_weight(&self) -> usize {
        self.codewords.iter().map(Z4Vector::gc_weight).min().unwrap_or(self.n)
    }
}

fn extend_span(codewords: &mut Vec<Z4Vector>, seen: &mut HashSet<u64>, a: Z4Vector) {
    let n = a.len();
    let base = codewords.len();
    for u in 1..4u8 {
        let shift = packed_scale(u, a.packed());
        for k in 0..base {
            let w = packed_add(shift, codewords[k].packed());
            if seen.insert(w) {
                codewords.push(Z4Vector::from_packed_unchecked(w, n));
            }
        }
    }
}

/// Runs the greedy construction and attaches a [`VerificationReport`].
pub fn build_lexicode(basis: &OrderedBasis, p: &PropertySpec, options: &LexicodeOptions) -> Result<LinearCode> {
    let n = basis.len();
    p.validate(n)?;
    if !options.allow_non_multiplicative {
        let sweep = options.sweep.unwrap_or_else(|| Sweep::auto(n));
        if let Multiplicativity::Counterexample(x) = is_multiplicative_empirical(p, n, sweep)? {
            return Err(Error::NonMultiplicative(x));
        }
    }

    let multipliers = options.mode.multipliers();
    let mut codewords = vec![Z4Vector::zero(n)?];
    let mut seen: HashSet<u64> = HashSet::from([0]);
    let mut generators = Vec::new();
    let mut log = Vec::with_capacity(n);
    let mut chain = vec![1];

    for i in 1..=n {
        let mut step = SelectionStep { step: i, tested: 0, accepted: None, rejections: Vec::new(), rejections_dropped: 0 };
        for a in basis.block(i) {
            step.tested += 1;
            match first_failure(&a, &codewords, p, multipliers) {
                None => {
                    step.accepted = Some(a);
                    break;
                }
                Some((multiplier, offset)) => {
                    if step.rejections.len() < options.log_cap {
                        step.rejections.push(Rejection { candidate: a, multiplier, offset });
                    } else {
                        step.rejections_dropped += 1;
                    }
                }
            }
        }
        if let Some(a) = step.accepted {
            generators.push(a);
            extend_span(&mut codewords, &mut seen, a);
        }
        chain.push(codewords.len());
        log.push(step);
    }

    let mut code = LinearCode { n, generators, codewords, selection_log: log, chain, report: None };
    code.report = Some(verify_lexicode(code.codewords(), p));
    Ok(code)
}

/// First `(u, c)` with `P[u a + c]` false. The zero vector is tested like any
/// other sum here; only verification exempts it.
fn first_failure(a: &Z4Vector, code: &[Z4Vector], p: &PropertySpec, multipliers: &[u8]) -> Option<(u8, Z4Vector)> {
    let n = a.len();
    for &u in multipliers {
        let shift = packed_scale(u, a.packed());
        for c in code {
            let w = packed_add(shift, c.packed());
            if !p.holds(&Z4Vector::from_packed_unchecked(w, n), code) {
                return Some((u, *c));
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureMethod {
    /// Every pairwise sum looked up.
    Pairwise,
    /// The additive span of the set computed from the set alone and compared.
    Span,
}

/// Largest set for which closure is checked over all pairs.
pub const PAIRWISE_CLOSURE_LIMIT: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub size: usize,
    pub contains_zero: bool,
    pub closure_method: ClosureMethod,
    /// Pairs whose sum is missing from the set.
    pub sum_violations: Vec<(Z4Vector, Z4Vector)>,
    /// `(u, x)` with `u x` missing from the set.
    pub scalar_violations: Vec<(u8, Z4Vector)>,
    /// Nonzero words on which the property fails.
    pub property_violations: Vec<Z4Vector>,
    pub min_hamming_distance: Option<usize>,
    pub min_gc_weight: Option<usize>,
}

const WITNESS_CAP: usize = 32;

impl VerificationReport {
    pub fn is_linear(&self) -> bool {
        self.contains_zero && self.sum_violations.is_empty() && self.scalar_violations.is_empty()
    }

    pub fn passes(&self) -> bool {
        self.is_linear() && self.property_violations.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "size: {}", self.size)?;
        writeln!(f, "linear: {} (closure checked {})", yes_no(self.is_linear()), match self.closure_method {
            ClosureMethod::Pairwise => "pairwise",
            ClosureMethod::Span => "by span",
        })?;
        if !self.contains_zero {
            writeln!(f, "  zero vector missing")?;
        }
        if !self.sum_violations.is_empty() {
            let w: Vec<String> = self.sum_violations.iter().map(|(a, b)| format!("{a}+{b}")).collect();
            writeln!(f, "  missing sums: {}", Elided(&w, 8))?;
        }
        if !self.scalar_violations.is_empty() {
            let w: Vec<String> = self.scalar_violations.iter().map(|(u, x)| format!("{u}*{x}")).collect();
            writeln!(f, "  missing multiples: {}", Elided(&w, 8))?;
        }
        let nonzero = self.size.saturating_sub(usize::from(self.contains_zero));
        writeln!(
            f,
            "property: {} ({} of {} nonzero words violate)",
            yes_no(self.property_violations.is_empty()),
            self.property_violations.len(),
            nonzero
        )?;
        if !self.property_violations.is_empty() {
            writeln!(f, "  violations: {}", Elided(&self.property_violations, 8))?;
        }
        let opt = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |d| d.to_string());
        writeln!(f, "min Hamming distance: {}", opt(self.min_hamming_distance))?;
        write!(f, "min GC weight: {}", opt(self.min_gc_weight))
    }
}

/// Checks closure, the property on nonzero words, and basic parameters of a
/// set of words. Violations are report content.
pub fn verify_lexicode(codewords: &[Z4Vector], p: &PropertySpec) -> VerificationReport {
    let set: HashSet<Z4Vector> = codewords.iter().copied().collect();
    let mut words: Vec<Z4Vector> = set.iter().copied().collect();
    words.sort();
    let n = words.first().map_or(0, Z4Vector::len);
    let same_len = words.iter().all(|w| w.len() == n);
    let contains_zero = words.iter().any(Z4Vector::is_zero);

    let mut scalar_violations = Vec::new();
    for x in &words {
        for u in 2..4u8 {
            if !set.contains(&x.scale(u)) && scalar_violations.len() < WITNESS_CAP {
                scalar_violations.push((u, *x));
            }
        }
    }

    let mut sum_violations = Vec::new();
    let closure_method = if words.len() <= PAIRWISE_CLOSURE_LIMIT {
        'outer: for (i, a) in words.iter().enumerate() {
            for b in &words[i..] {
                let closed = a.add(b).map(|s| set.contains(&s)).unwrap_or(false);
                if !closed {
                    sum_violations.push((*a, *b));
                    if sum_violations.len() >= WITNESS_CAP {
                        break 'outer;
                    }
                }
            }
        }
        ClosureMethod::Pairwise
    } else {
        if same_len && n > 0 {
            // span of the set, grown only from members
            let mut span: Vec<Z4Vector> = vec![Z4Vector::from_packed_unchecked(0, n)];
            let mut in_span: HashSet<u64> = HashSet::from([0]);
            for w in &words {
                if !in_span.contains(&w.packed()) {
                    extend_span(&mut span, &mut in_span, *w);
                }
                if span.len() > words.len() {
                    break;
                }
            }
            if span.len() != words.len() || span.iter().any(|s| !set.contains(s)) {
                'search: for (i, a) in words.iter().enumerate() {
                    for b in &words[i..] {
                        if !set.contains(&Z4Vector::from_packed_unchecked(packed_add(a.packed(), b.packed()), n)) {
                            sum_violations.push((*a, *b));
                            if sum_violations.len() >= WITNESS_CAP {
                                break 'search;
                            }
                        }
                    }
                }
            }
        }
        ClosureMethod::Span
    };

    let property_violations: Vec<Z4Vector> = words
        .iter()
        .filter(|x| !x.is_zero() && (x.len() != n || p.validate(n).is_err() || !p.holds(x, &words)))
        .copied()
        .collect();

    let is_linear = contains_zero && sum_violations.is_empty() && scalar_violations.is_empty();
    let min_hamming_distance = if !same_len {
        None
    } else if is_linear {
        words.iter().filter(|c| !c.is_zero()).map(Z4Vector::hamming_weight).min()
    } else {
        crate::metrics::min_pairwise_hamming(&words).ok().flatten()
    };

    VerificationReport {
        size: words.len(),
        contains_zero,
        closure_method,
        sum_violations,
        scalar_violations,
        property_violations,
        min_hamming_distance,
        min_gc_weight: words.iter().map(Z4Vector::gc_weight).min(),
    }
}

/// A greedily accepted, not necessarily linear, code.
#[derive(Clone, Debug, PartialEq)]
pub struct GreedyCode<T> {
    pub words: Vec<T>,
    pub scanned: usize,
    /// False when the scan stopped on the budget before the stream ended.
    pub exhausted: bool,
}

/// Scans `order` and keeps each item `accept` allows against the words kept
/// so far.
pub fn build_greedy_code<T, I, F>(order: I, mut accept: F, budget: Option<usize>) -> GreedyCode<T>
where
    I: IntoIterator<Item = T>,
    F: FnMut(&T, &[T]) -> bool,
{
    let mut words = Vec::new();
    let mut scanned = 0usize;
    let mut iter = order.into_iter();
    loop {
        if budget.is_some_and(|b| scanned >= b) {
            let exhausted = iter.next().is_none();
            return GreedyCode { words, scanned, exhausted };
        }
        let Some(item) = iter.next() else {
            return GreedyCode { words, scanned, exhausted: true };
        };
        scanned += 1;
        if accept(&item, &words) {
            words.push(item);
        }
    }
}
