//! Hamming and weighted edit distances.
//!
//! Edit distance follows the usual recursion over the last symbols of both
//! strings with a substitution/deletion/insertion cost triple. Integer-valued
//! cost models are evaluated in exact integer arithmetic.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};
use crate::z4::{Base, DnaStrand, Z4Vector};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Substitution, insertion and deletion costs over `{A, C, G, T}`.
///
/// Tables are indexed by [`Base::index`] (row/column order A, C, G, T).
#[derive(Clone, Debug, PartialEq)]
pub struct CostModel {
    substitution: [[f64; 4]; 4],
    insertion: [f64; 4],
    deletion: [f64; 4],
    tolerance: f64,
    integral: bool,
    unit: bool,
}

impl Default for CostModel {
    fn default() -> Self {
        Self::unit()
    }
}

impl CostModel {
    pub fn unit() -> Self {
        let mut substitution = [[1.0; 4]; 4];
        for (i, row) in substitution.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        Self {
            substitution,
            insertion: [1.0; 4],
            deletion: [1.0; 4],
            tolerance: DEFAULT_TOLERANCE,
            integral: true,
            unit: true,
        }
    }

    pub fn new(substitution: [[f64; 4]; 4], insertion: [f64; 4], deletion: [f64; 4]) -> Result<Self> {
        let all = substitution.iter().flatten().chain(&insertion).chain(&deletion);
        let mut integral = true;
        for &c in all {
            if !c.is_finite() || c < 0.0 {
                return Err(Error::CostModel(format!("cost {c} is not a finite nonnegative number")));
            }
            integral &= c.fract() == 0.0 && c <= (1u64 << 40) as f64;
        }
        let unit = Self::unit();
        let is_unit = substitution == unit.substitution
            && insertion == unit.insertion
            && deletion == unit.deletion;
        Ok(Self { substitution, insertion, deletion, tolerance: DEFAULT_TOLERANCE, integral, unit: is_unit })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !tolerance.is_finite() || tolerance < 0.0 {
            return Err(Error::CostModel(format!("tolerance {tolerance} must be finite and nonnegative")));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn is_unit(&self) -> bool {
        self.unit
    }

    pub fn is_integral(&self) -> bool {
        self.integral
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    #[inline]
    pub fn substitution(&self, a: Base, b: Base) -> f64 {
        self.substitution[a.index()][b.index()]
    }

    #[inline]
    pub fn insertion(&self, b: Base) -> f64 {
        self.insertion[b.index()]
    }

    #[inline]
    pub fn deletion(&self, a: Base) -> f64 {
        self.deletion[a.index()]
    }

    /// True when the induced distance is a metric: symmetric substitutions
    /// with zero diagonal and positive off-diagonal, matching positive
    /// insertion/deletion costs, and the triangle property on single symbols.
    pub fn is_metric(&self) -> bool {
        let eps = self.tolerance;
        for a in Base::ALL {
            if self.deletion(a) != self.insertion(a) || self.deletion(a) <= 0.0 {
                return false;
            }
            for b in Base::ALL {
                let s = self.substitution(a, b);
                if s != self.substitution(b, a) || ((a == b) != (s == 0.0)) {
                    return false;
                }
                if s > self.deletion(a) + self.insertion(b) + eps {
                    return false;
                }
                if self.deletion(a) > s + self.deletion(b) + eps {
                    return false;
                }
                for c in Base::ALL {
                    if self.substitution(a, c) > s + self.substitution(b, c) + eps {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Returns a copy whose tables are permuted by `sigma`, i.e. the model
    /// under which `sigma(s), sigma(t)` cost what `s, t` cost here.
    pub fn permuted(&self, sigma: impl Fn(Base) -> Base) -> Self {
        let mut out = self.clone();
        for a in Base::ALL {
            out.insertion[sigma(a).index()] = self.insertion(a);
            out.deletion[sigma(a).index()] = self.deletion(a);
            for b in Base::ALL {
                out.substitution[sigma(a).index()][sigma(b).index()] = self.substitution(a, b);
            }
        }
        out
    }

    /// `value >= threshold`, exact for integral models.
    pub fn at_least(&self, value: f64, threshold: f64) -> bool {
        if self.integral && threshold.fract() == 0.0 {
            value >= threshold
        } else {
            value >= threshold - self.tolerance
        }
    }

    /// `value <= threshold`, exact for integral models.
    pub fn at_most(&self, value: f64, threshold: f64) -> bool {
        if self.integral && threshold.fract() == 0.0 {
            value <= threshold
        } else {
            value <= threshold + self.tolerance
        }
    }

    /// Parses the key-value cost document.
    ///
    /// ```text
    /// # rows and columns in A C G T order
    /// substitution A = 0 1 1 1
    /// substitution C = 1 0 1 1
    /// substitution G = 1 1 0 1
    /// substitution T = 1 1 1 0
    /// insertion = 1 1 1 1
    /// deletion = 1 1 1 1
    /// tolerance = 1e-9
    /// ```
    ///
    /// Keys that are absent keep their unit-model values.
    pub fn parse(text: &str) -> Result<Self> {
        let unit = Self::unit();
        let (mut sub, mut ins, mut del) = (unit.substitution, unit.insertion, unit.deletion);
        let mut tolerance = DEFAULT_TOLERANCE;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| Error::CostModel(format!("line {}: {m}", lineno + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected `key = values`"))?;
            let key: Vec<&str> = key.split_whitespace().collect();
            let numbers = value
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| err(&format!("bad number {t:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let four = |nums: &[f64]| -> Result<[f64; 4]> {
                <[f64; 4]>::try_from(nums).map_err(|_| err("expected four values"))
            };
            match key.as_slice() {
                ["substitution", row] => {
                    let base = row
                        .chars()
                        .next()
                        .filter(|_| row.len() == 1)
                        .and_then(Base::from_char)
                        .ok_or_else(|| err(&format!("unknown row {row:?}")))?;
                    sub[base.index()] = four(&numbers)?;
                }
                ["insertion"] => ins = four(&numbers)?,
                ["deletion"] => del = four(&numbers)?,
                ["tolerance"] => match numbers.as_slice() {
                    [t] => tolerance = *t,
                    _ => return Err(err("expected one value")),
                },
                _ => return Err(err(&format!("unknown key {:?}", key.join(" ")))),
            }
        }
        Self::new(sub, ins, del)?.with_tolerance(tolerance)
    }
}

trait Weight: Copy + PartialOrd + Add<Output = Self> {
    const ZERO: Self;
}

impl Weight for u64 {
    const ZERO: Self = 0;
}

impl Weight for f64 {
    const ZERO: Self = 0.0;
}

#[inline]
fn min3<W: Weight>(a: W, b: W, c: W) -> W {
    let m = if b < a { b } else { a };
    if c < m {
        c
    } else {
        m
    }
}

fn rolling_dp<W: Weight>(
    s: &[Base],
    t: &[Base],
    sub: impl Fn(Base, Base) -> W,
    del: impl Fn(Base) -> W,
    ins: impl Fn(Base) -> W,
) -> W {
    let mut prev: Vec<W> = Vec::with_capacity(t.len() + 1);
    prev.push(W::ZERO);
    for &b in t {
        let last = *prev.last().unwrap();
        prev.push(last + ins(b));
    }
    let mut cur = prev.clone();
    for &a in s {
        cur[0] = prev[0] + del(a);
        for (j, &b) in t.iter().enumerate() {
            cur[j + 1] = min3(prev[j] + sub(a, b), prev[j + 1] + del(a), cur[j] + ins(b));
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[t.len()]
}

/// Unit-cost edit distance (Levenshtein).
pub fn levenshtein(s: &[Base], t: &[Base]) -> usize {
    if s.is_empty() {
        return t.len();
    }
    if t.is_empty() {
        return s.len();
    }
    let mut row: Vec<usize> = (0..=t.len()).collect();
    for (i, &a) in s.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, &b) in t.iter().enumerate() {
            let next = (diag + usize::from(a != b)).min(row[j].min(row[j + 1]) + 1);
            diag = row[j + 1];
            row[j + 1] = next;
        }
    }
    row[t.len()]
}

/// Weighted edit distance `d_c(s, t)`.
pub fn edit_distance(s: &[Base], t: &[Base], cm: &CostModel) -> f64 {
    if cm.unit {
        levenshtein(s, t) as f64
    } else if cm.integral {
        rolling_dp(
            s,
            t,
            |a, b| cm.substitution(a, b) as u64,
            |a| cm.deletion(a) as u64,
            |b| cm.insertion(b) as u64,
        ) as f64
    } else {
        rolling_dp(s, t, |a, b| cm.substitution(a, b), |a| cm.deletion(a), |b| cm.insertion(b))
    }
}

pub fn strand_edit_distance(s: &DnaStrand, t: &DnaStrand, cm: &CostModel) -> f64 {
    edit_distance(s.bases(), t.bases(), cm)
}

/// One primitive edit. Positions are 0-based indices into the source
/// (`source`) and target (`target`) strings.
#[derive(Clone, Debug, PartialEq)]
pub enum EditOp {
    Match { source: usize, target: usize, base: Base },
    Substitute { source: usize, target: usize, from: Base, to: Base },
    Delete { source: usize, base: Base },
    Insert { target: usize, base: Base },
}

impl EditOp {
    pub fn cost(&self, cm: &CostModel) -> f64 {
        match *self {
            EditOp::Match { base, .. } => cm.substitution(base, base),
            EditOp::Substitute { from, to, .. } => cm.substitution(from, to),
            EditOp::Delete { base, .. } => cm.deletion(base),
            EditOp::Insert { base, .. } => cm.insertion(base),
        }
    }
}

impl fmt::Display for EditOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EditOp::Match { source, base, .. } => write!(f, "match {base} at {source}"),
            EditOp::Substitute { source, from, to, .. } => write!(f, "substitute {from}->{to} at {source}"),
            EditOp::Delete { source, base } => write!(f, "delete {base} at {source}"),
            EditOp::Insert { target, base } => write!(f, "insert {base} at {target}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EditTranscript {
    pub ops: Vec<EditOp>,
    pub cost: f64,
}

impl EditTranscript {
    /// Applies the transcript to `source`, failing if it does not fit.
    pub fn replay(&self, source: &[Base]) -> Result<Vec<Base>> {
        let mismatch = |what: &str| Error::CostModel(format!("transcript does not fit source: {what}"));
        let mut out = Vec::new();
        let mut next = 0usize;
        for op in &self.ops {
            match *op {
                EditOp::Match { source: i, base, .. } => {
                    if i != next || source.get(i) != Some(&base) {
                        return Err(mismatch("match"));
                    }
                    next += 1;
                    out.push(base);
                }
                EditOp::Substitute { source: i, from, to, .. } => {
                    if i != next || source.get(i) != Some(&from) {
                        return Err(mismatch("substitute"));
                    }
                    next += 1;
                    out.push(to);
                }
                EditOp::Delete { source: i, base } => {
                    if i != next || source.get(i) != Some(&base) {
                        return Err(mismatch("delete"));
                    }
                    next += 1;
                }
                EditOp::Insert { base, .. } => out.push(base),
            }
        }
        if next != source.len() {
            return Err(mismatch("source not fully consumed"));
        }
        Ok(out)
    }

    pub fn substitutions(&self) -> impl Iterator<Item = &EditOp> {
        self.ops.iter().filter(|op| matches!(op, EditOp::Substitute { .. }))
    }
}

/// Edit distance together with one optimal transcript.
///
/// Ties in the backtrace prefer the diagonal move, then deletion, then
/// insertion.
pub fn edit_distance_with_transcript(s: &[Base], t: &[Base], cm: &CostModel) -> (f64, EditTranscript) {
    let (rows, cols) = (s.len() + 1, t.len() + 1);
    let mut table = vec![0.0f64; rows * cols];
    let at = |i: usize, j: usize| i * cols + j;
    for j in 1..cols {
        table[at(0, j)] = table[at(0, j - 1)] + cm.insertion(t[j - 1]);
    }
    for i in 1..rows {
        table[at(i, 0)] = table[at(i - 1, 0)] + cm.deletion(s[i - 1]);
        for j in 1..cols {
            table[at(i, j)] = min3(
                table[at(i - 1, j - 1)] + cm.substitution(s[i - 1], t[j - 1]),
                table[at(i - 1, j)] + cm.deletion(s[i - 1]),
                table[at(i, j - 1)] + cm.insertion(t[j - 1]),
            );
        }
    }
    let distance = table[at(s.len(), t.len())];

    let close = |a: f64, b: f64| (a - b).abs() <= cm.tolerance.max(1e-12);
    let mut ops = Vec::new();
    let (mut i, mut j) = (s.len(), t.len());
    while i > 0 || j > 0 {
        let here = table[at(i, j)];
        if i > 0 && j > 0 && close(here, table[at(i - 1, j - 1)] + cm.substitution(s[i - 1], t[j - 1])) {
            let (a, b) = (s[i - 1], t[j - 1]);
            ops.push(if a == b {
                EditOp::Match { source: i - 1, target: j - 1, base: a }
            } else {
                EditOp::Substitute { source: i - 1, target: j - 1, from: a, to: b }
            });
            i -= 1;
            j -= 1;
        } else if i > 0 && close(here, table[at(i - 1, j)] + cm.deletion(s[i - 1])) {
            ops.push(EditOp::Delete { source: i - 1, base: s[i - 1] });
            i -= 1;
        } else {
            ops.push(EditOp::Insert { target: j - 1, base: t[j - 1] });
            j -= 1;
        }
    }
    ops.reverse();
    let cost = ops.iter().map(|op| op.cost(cm)).sum();
    (distance, EditTranscript { ops, cost })
}

/// Minimum edit distance over distinct unordered pairs of the set `code`.
///
/// Duplicates collapse. Fewer than two distinct strings yield `f64::INFINITY`.
pub fn min_pairwise_edit(code: &[DnaStrand], cm: &CostModel) -> f64 {
    let words: Vec<&DnaStrand> = code.iter().collect::<BTreeSet<_>>().into_iter().collect();
    let mut best = f64::INFINITY;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            let d = strand_edit_distance(a, b, cm);
            if d < best {
                best = d;
            }
        }
    }
    best
}

/// Minimum Hamming distance over distinct pairs; `None` when fewer than two
/// distinct words remain after deduplication.
pub fn min_pairwise_hamming(code: &[Z4Vector]) -> Result<Option<usize>> {
    let words: Vec<Z4Vector> = code.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if let Some(first) = words.first() {
        if let Some(bad) = words.iter().find(|w| w.len() != first.len()) {
            return Err(Error::LengthMismatch { left: first.len(), right: bad.len() });
        }
    }
    let mut best: Option<usize> = None;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            let d = a.hamming_distance(b)?;
            best = Some(best.map_or(d, |m| m.min(d)));
        }
    }
    Ok(best)
}

pub fn strand_hamming(s: &[Base], t: &[Base]) -> Result<usize> {
    if s.len() != t.len() {
        return Err(Error::LengthMismatch { left: s.len(), right: t.len() });
    }
    Ok(s.iter().zip(t).filter(|(a, b)| a != b).count())
}
