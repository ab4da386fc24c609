//! Evaluates the bound relations on exactly computed values.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{a2, BoundKey, Metric, Oracle, Variant};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `A(n, d, 0) = A_2(n, d)`.
    GcZeroBinary,
    /// `A(n, d, w) = A(n, d, n - w)`.
    GcSymmetry,
    /// `A(n, d, n/2) = 4`.
    HalfWeightFour,
    /// `A(n, d, w) >= A(n + 1, d + 1, w)`.
    Puncture,
    /// `4 A(n, d, w) >= A(n + 1, d, w)`.
    FirstSymbolPartition,
    /// `A^R(n - 1, d, w) <= A^R(n, d, w)`.
    ReverseLength,
    /// `A^R(n, d, w) <= A^R(n, d - 1, w)`.
    ReverseDistance,
    /// `4 A^R(n - 1, d, w) >= A^R(n, d, w)`.
    ReversePartition,
    /// `A^RC(n, d, w) = A^R(n, d, w)` for even `n`.
    RcEqualsREven,
    /// `A^R(n, d + 1, w) <= A^RC(n, d, w)` for odd `n`.
    RcOddLower,
    /// `A^RC(n, d, w) <= A^R(n, d - 1, w)` for odd `n`.
    RcOddUpperLoose,
    /// `A^RC(n, d, w) <= A^R(n, d, w)` for odd `n`.
    RcOddUpperTight,
}

impl Relation {
    pub const ALL: [Relation; 12] = [
        Relation::GcZeroBinary,
        Relation::GcSymmetry,
        Relation::HalfWeightFour,
        Relation::Puncture,
        Relation::FirstSymbolPartition,
        Relation::ReverseLength,
        Relation::ReverseDistance,
        Relation::ReversePartition,
        Relation::RcEqualsREven,
        Relation::RcOddLower,
        Relation::RcOddUpperLoose,
        Relation::RcOddUpperTight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::GcZeroBinary => "gc-zero-binary",
            Relation::GcSymmetry => "gc-symmetry",
            Relation::HalfWeightFour => "half-weight-four",
            Relation::Puncture => "puncture",
            Relation::FirstSymbolPartition => "first-symbol-partition",
            Relation::ReverseLength => "reverse-length",
            Relation::ReverseDistance => "reverse-distance",
            Relation::ReversePartition => "reverse-partition",
            Relation::RcEqualsREven => "rc-equals-r-even",
            Relation::RcOddLower => "rc-odd-lower",
            Relation::RcOddUpperLoose => "rc-odd-upper-d-minus-1",
            Relation::RcOddUpperTight => "rc-odd-upper-d",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            Relation::GcZeroBinary => "A(n,d,0) = A2(n,d)",
            Relation::GcSymmetry => "A(n,d,w) = A(n,d,n-w)",
            Relation::HalfWeightFour => "A(n,d,n/2) = 4",
            Relation::Puncture => "A(n,d,w) >= A(n+1,d+1,w)",
            Relation::FirstSymbolPartition => "A(n,d,w) >= A(n+1,d,w)/4",
            Relation::ReverseLength => "AR(n-1,d,w) <= AR(n,d,w)",
            Relation::ReverseDistance => "AR(n,d,w) <= AR(n,d-1,w)",
            Relation::ReversePartition => "AR(n-1,d,w) >= AR(n,d,w)/4",
            Relation::RcEqualsREven => "ARC(n,d,w) = AR(n,d,w), n even",
            Relation::RcOddLower => "AR(n,d+1,w) <= ARC(n,d,w), n odd",
            Relation::RcOddUpperLoose => "ARC(n,d,w) <= AR(n,d-1,w), n odd",
            Relation::RcOddUpperTight => "ARC(n,d,w) <= AR(n,d,w), n odd",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Finding,
    Skipped,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Finding => "FINDING",
            Outcome::Skipped => "SKIP",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationCheck {
    pub relation: Relation,
    pub metric: String,
    pub n: usize,
    pub d: usize,
    pub w: usize,
    pub lhs: Option<u64>,
    pub rhs: Option<u64>,
    pub outcome: Outcome,
}

impl fmt::Display for RelationCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<u64>| v.map_or("?".to_string(), |v| v.to_string());
        write!(
            f,
            "{:<7} {:<22} {:<7} n={} d={} w={}  lhs={} rhs={}",
            self.outcome,
            self.relation.name(),
            self.metric,
            self.n,
            self.d,
            self.w,
            show(self.lhs),
            show(self.rhs)
        )
    }
}

#[derive(Clone, Debug)]
pub struct RelationRange {
    pub max_n: usize,
    pub metrics: Vec<Metric>,
    pub cross_distance: bool,
}

impl RelationRange {
    pub fn desk(max_n: usize) -> Self {
        Self { max_n, metrics: vec![Metric::Hamming, Metric::unit_edit()], cross_distance: false }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub finding: usize,
    pub skipped: usize,
}

impl RelationReport {
    pub fn tally(&self) -> BTreeMap<(Relation, String), Tally> {
        let mut out: BTreeMap<(Relation, String), Tally> = BTreeMap::new();
        for c in &self.checks {
            let t = out.entry((c.relation, c.metric.clone())).or_default();
            match c.outcome {
                Outcome::Pass => t.pass += 1,
                Outcome::Finding => t.finding += 1,
                Outcome::Skipped => t.skipped += 1,
            }
        }
        out
    }

    pub fn findings(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| c.outcome == Outcome::Finding)
    }

    pub fn of(&self, relation: Relation) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(move |c| c.relation == relation)
    }

    pub fn find(&self, relation: Relation, metric: &str, n: usize, d: usize, w: usize) -> Option<&RelationCheck> {
        self.checks
            .iter()
            .find(|c| c.relation == relation && c.metric == metric && (c.n, c.d, c.w) == (n, d, w))
    }
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((relation, metric), t) in self.tally() {
            writeln!(
                f,
                "{:<22} {:<7} pass={} finding={} skipped={}   {}",
                relation.name(),
                metric,
                t.pass,
                t.finding,
                t.skipped,
                relation.formula()
            )?;
        }
        let findings: Vec<&RelationCheck> = self.findings().collect();
        if !findings.is_empty() {
            writeln!(f, "findings:")?;
            for c in findings {
                writeln!(f, "  {c}")?;
            }
        }
        Ok(())
    }
}

struct Evaluator<'a> {
    oracle: &'a mut Oracle,
    metric: Metric,
    cross: bool,
}

impl Evaluator<'_> {
    fn value(&mut self, n: usize, d: usize, w: usize, variant: Variant) -> Result<Option<u64>> {
        if d > n || w > n {
            return Ok(None);
        }
        let key = BoundKey {
            n,
            d,
            w: Some(w),
            metric: self.metric.clone(),
            variant,
            cross_distance: self.cross && variant != Variant::Plain,
        };
        match self.oracle.value(&key) {
            Ok(v) => Ok(v),
            Err(Error::OverBudget { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn a(&mut self, n: usize, d: usize, w: usize) -> Result<Option<u64>> {
        self.value(n, d, w, Variant::Plain)
    }

    fn ar(&mut self, n: usize, d: usize, w: usize) -> Result<Option<u64>> {
        self.value(n, d, w, Variant::R)
    }

    fn arc(&mut self, n: usize, d: usize, w: usize) -> Result<Option<u64>> {
        self.value(n, d, w, Variant::RC)
    }
}

fn check(
    relation: Relation,
    metric: &Metric,
    (n, d, w): (usize, usize, usize),
    lhs: Option<u64>,
    rhs: Option<u64>,
    holds: impl Fn(u64, u64) -> bool,
) -> RelationCheck {
    let outcome = match (lhs, rhs) {
        (Some(l), Some(r)) if holds(l, r) => Outcome::Pass,
        (Some(_), Some(_)) => Outcome::Finding,
        _ => Outcome::Skipped,
    };
    RelationCheck { relation, metric: metric.name().to_string(), n, d, w, lhs, rhs, outcome }
}

/// Evaluates every relation on all keys with `1 <= n <= range.max_n` whose
/// values are computable within the oracle's budget.
pub fn check_relations(range: &RelationRange, oracle: &mut Oracle) -> Result<RelationReport> {
    let mut report = RelationReport::default();
    let max_n = range.max_n;
    for metric in &range.metrics {
        let budget = oracle.budget().clone();
        let mut ev = Evaluator { oracle, metric: metric.clone(), cross: range.cross_distance };
        let push = |report: &mut RelationReport, c: RelationCheck| report.checks.push(c);
        for n in 1..=max_n {
            for d in 0..=n {
                let binary = match a2(n, d, metric, &budget) {
                    Ok(v) => Some(v),
                    Err(Error::OverBudget { .. }) => None,
                    Err(e) => return Err(e),
                };
                let c = check(Relation::GcZeroBinary, metric, (n, d, 0), ev.a(n, d, 0)?, binary, |l, r| l == r);
                push(&mut report, c);
                for w in 0..=n {
                    let c = check(Relation::GcSymmetry, metric, (n, d, w), ev.a(n, d, w)?, ev.a(n, d, n - w)?, |l, r| {
                        l == r
                    });
                    push(&mut report, c);
                }
                if n % 2 == 0 {
                    let c = check(Relation::HalfWeightFour, metric, (n, d, n / 2), ev.a(n, d, n / 2)?, Some(4), |l, r| {
                        l == r
                    });
                    push(&mut report, c);
                }
            }
        }
        for n in 1..max_n {
            for w in 0..=n {
                for d in 0..=n {
                    let c = check(Relation::Puncture, metric, (n, d, w), ev.a(n, d, w)?, ev.a(n + 1, d + 1, w)?, |l, r| {
                        l >= r
                    });
                    push(&mut report, c);
                    let c = check(
                        Relation::FirstSymbolPartition,
                        metric,
                        (n, d, w),
                        ev.a(n, d, w)?,
                        ev.a(n + 1, d, w)?,
                        |l, r| 4 * l >= r,
                    );
                    push(&mut report, c);
                }
            }
        }
        for n in 2..=max_n {
            for w in 0..=n {
                for d in 0..=n {
                    if w < n && d < n {
                        let c = check(Relation::ReverseLength, metric, (n, d, w), ev.ar(n - 1, d, w)?, ev.ar(n, d, w)?, |l, r| {
                            l <= r
                        });
                        push(&mut report, c);
                        let c = check(
                            Relation::ReversePartition,
                            metric,
                            (n, d, w),
                            ev.ar(n - 1, d, w)?,
                            ev.ar(n, d, w)?,
                            |l, r| 4 * l >= r,
                        );
                        push(&mut report, c);
                    }
                    if d >= 1 {
                        let c = check(Relation::ReverseDistance, metric, (n, d, w), ev.ar(n, d, w)?, ev.ar(n, d - 1, w)?, |l, r| {
                            l <= r
                        });
                        push(&mut report, c);
                    }
                }
            }
        }
        for n in 1..=max_n {
            for w in 0..=n {
                for d in 0..=n {
                    if n % 2 == 0 {
                        let c = check(Relation::RcEqualsREven, metric, (n, d, w), ev.arc(n, d, w)?, ev.ar(n, d, w)?, |l, r| {
                            l == r
                        });
                        push(&mut report, c);
                        continue;
                    }
                    if d < n {
                        let c = check(Relation::RcOddLower, metric, (n, d, w), ev.ar(n, d + 1, w)?, ev.arc(n, d, w)?, |l, r| {
                            l <= r
                        });
                        push(&mut report, c);
                    }
                    if d >= 1 {
                        let c = check(
                            Relation::RcOddUpperLoose,
                            metric,
                            (n, d, w),
                            ev.arc(n, d, w)?,
                            ev.ar(n, d - 1, w)?,
                            |l, r| l <= r,
                        );
                        push(&mut report, c);
                    }
                    let c = check(Relation::RcOddUpperTight, metric, (n, d, w), ev.arc(n, d, w)?, ev.ar(n, d, w)?, |l, r| {
                        l <= r
                    });
                    push(&mut report, c);
                }
            }
        }
    }
    Ok(report)
}
