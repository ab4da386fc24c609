//! Selection predicates for the greedy construction.
//!
//! Properties are written in a small language, atoms joined by `&`:
//!
//! ```text
//! true | false
//! gc>=W                 GC weight of phi(x) at least W
//! hw>=D                 Hamming weight at least D
//! lee>=L                Lee weight at least L
//! editref<=STRAND:M     edit distance from phi(x) to STRAND at most M
//! editref>=STRAND:M     edit distance from phi(x) to STRAND at least M
//! editcode>=D           edit distance from phi(x) to every other word of
//!                       the current code at least D
//! ```

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metrics::{strand_edit_distance, CostModel};
use crate::z4::{phi, DnaStrand, Z4Vector};

/// Largest length swept exhaustively by [`is_multiplicative_empirical`].
pub const EXHAUSTIVE_MAX_LEN: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub enum PropertySpec {
    Never,
    MinGc(usize),
    MinHammingWeight(usize),
    MinLeeWeight(usize),
    EditToRefAtMost { reference: DnaStrand, max: f64, cost: CostModel },
    EditToRefAtLeast { reference: DnaStrand, min: f64, cost: CostModel },
    MinEditToCode { min: f64, cost: CostModel },
    /// Conjunction; the empty conjunction is the constant-true property.
    And(Vec<PropertySpec>),
}

impl PropertySpec {
    pub fn always() -> Self {
        PropertySpec::And(Vec::new())
    }

    /// Checks length-dependent parameters against vectors of length `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            PropertySpec::MinGc(w) if *w > n => {
                Err(Error::PropertyParse(format!("gc>={w} exceeds vector length {n}")))
            }
            PropertySpec::MinHammingWeight(d) if *d > n => {
                Err(Error::PropertyParse(format!("hw>={d} exceeds vector length {n}")))
            }
            PropertySpec::MinLeeWeight(l) if *l > 2 * n => {
                Err(Error::PropertyParse(format!("lee>={l} exceeds maximum Lee weight {}", 2 * n)))
            }
            PropertySpec::And(parts) => parts.iter().try_for_each(|p| p.validate(n)),
            _ => Ok(()),
        }
    }

    /// Evaluates the predicate on `x`. `code` is the snapshot consulted by
    /// `editcode`; other atoms ignore it.
    pub fn evaluate(&self, x: &Z4Vector, code: &[Z4Vector]) -> Result<bool> {
        self.validate(x.len())?;
        if let Some(bad) = code.iter().find(|c| c.len() != x.len()) {
            return Err(Error::LengthMismatch { left: x.len(), right: bad.len() });
        }
        Ok(self.holds(x, code))
    }

    /// Unchecked evaluation for hot loops; call [`validate`](Self::validate) first.
    pub fn holds(&self, x: &Z4Vector, code: &[Z4Vector]) -> bool {
        match self {
            PropertySpec::Never => false,
            PropertySpec::MinGc(w) => x.gc_weight() >= *w,
            PropertySpec::MinHammingWeight(d) => x.hamming_weight() >= *d,
            PropertySpec::MinLeeWeight(l) => x.lee_weight() >= *l,
            PropertySpec::EditToRefAtMost { reference, max, cost } => {
                cost.at_most(strand_edit_distance(&phi(x), reference, cost), *max)
            }
            PropertySpec::EditToRefAtLeast { reference, min, cost } => {
                cost.at_least(strand_edit_distance(&phi(x), reference, cost), *min)
            }
            PropertySpec::MinEditToCode { min, cost } => {
                let s = phi(x);
                code.iter()
                    .filter(|c| *c != x)
                    .all(|c| cost.at_least(strand_edit_distance(&s, &phi(c), cost), *min))
            }
            PropertySpec::And(parts) => parts.iter().all(|p| p.holds(x, code)),
        }
    }

    /// True when evaluation reads the code snapshot.
    pub fn uses_code(&self) -> bool {
        match self {
            PropertySpec::MinEditToCode { .. } => true,
            PropertySpec::And(parts) => parts.iter().any(PropertySpec::uses_code),
            _ => false,
        }
    }

    /// Parses the property language; edit atoms use `cost`.
    pub fn parse(text: &str, cost: &CostModel) -> Result<Self> {
        let mut atoms = Vec::new();
        for raw in text.split('&') {
            let atom = raw.trim();
            let err = |m: &str| Error::PropertyParse(format!("{m} in atom {atom:?}"));
            let number = |s: &str| -> Result<f64> {
                let v: f64 = s.trim().parse().map_err(|_| err("bad number"))?;
                if !v.is_finite() || v < 0.0 {
                    return Err(err("threshold must be finite and nonnegative"));
                }
                Ok(v)
            };
            let integer = |s: &str| -> Result<usize> { s.trim().parse().map_err(|_| err("bad integer")) };
            let reference = |s: &str| -> Result<(DnaStrand, f64)> {
                let (strand, m) = s.split_once(':').ok_or_else(|| err("expected STRAND:M"))?;
                Ok((strand.trim().parse().map_err(|_| err("bad strand"))?, number(m)?))
            };
            let parsed = if atom == "true" {
                PropertySpec::always()
            } else if atom == "false" {
                PropertySpec::Never
            } else if let Some(rest) = atom.strip_prefix("gc>=") {
                PropertySpec::MinGc(integer(rest)?)
            } else if let Some(rest) = atom.strip_prefix("hw>=") {
                PropertySpec::MinHammingWeight(integer(rest)?)
            } else if let Some(rest) = atom.strip_prefix("lee>=") {
                PropertySpec::MinLeeWeight(integer(rest)?)
            } else if let Some(rest) = atom.strip_prefix("editref<=") {
                let (reference, max) = reference(rest)?;
                PropertySpec::EditToRefAtMost { reference, max, cost: cost.clone() }
            } else if let Some(rest) = atom.strip_prefix("editref>=") {
                let (reference, min) = reference(rest)?;
                PropertySpec::EditToRefAtLeast { reference, min, cost: cost.clone() }
            } else if let Some(rest) = atom.strip_prefix("editcode>=") {
                PropertySpec::MinEditToCode { min: number(rest)?, cost: cost.clone() }
            } else {
                return Err(err("unknown atom"));
            };
            atoms.push(parsed);
        }
        Ok(match atoms.len() {
            1 => atoms.pop().unwrap(),
            _ => PropertySpec::And(atoms),
        })
    }

    fn write_atoms(&self, out: &mut Vec<String>) {
        match self {
            PropertySpec::And(parts) => parts.iter().for_each(|p| p.write_atoms(out)),
            PropertySpec::Never => out.push("false".into()),
            PropertySpec::MinGc(w) => out.push(format!("gc>={w}")),
            PropertySpec::MinHammingWeight(d) => out.push(format!("hw>={d}")),
            PropertySpec::MinLeeWeight(l) => out.push(format!("lee>={l}")),
            PropertySpec::EditToRefAtMost { reference, max, .. } => out.push(format!("editref<={reference}:{max}")),
            PropertySpec::EditToRefAtLeast { reference, min, .. } => out.push(format!("editref>={reference}:{min}")),
            PropertySpec::MinEditToCode { min, .. } => out.push(format!("editcode>={min}")),
        }
    }
}

impl fmt::Display for PropertySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut atoms = Vec::new();
        self.write_atoms(&mut atoms);
        if atoms.is_empty() {
            f.write_str("true")
        } else {
            f.write_str(&atoms.join("&"))
        }
    }
}

/// Anything that can be tested on a single vector.
pub trait Predicate {
    fn test(&self, x: &Z4Vector) -> bool;
}

impl Predicate for PropertySpec {
    fn test(&self, x: &Z4Vector) -> bool {
        self.holds(x, &[])
    }
}

impl<F: Fn(&Z4Vector) -> bool> Predicate for F {
    fn test(&self, x: &Z4Vector) -> bool {
        self(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sweep {
    /// Every vector of `Z4^n`; requires `n <= EXHAUSTIVE_MAX_LEN`.
    Exhaustive,
    /// Uniform random vectors from a seeded generator.
    Sampled { samples: usize, seed: u64 },
}

impl Sweep {
    /// Exhaustive when affordable, else 65536 seeded samples.
    pub fn auto(n: usize) -> Self {
        if n <= EXHAUSTIVE_MAX_LEN {
            Sweep::Exhaustive
        } else {
            Sweep::Sampled { samples: 1 << 16, seed: 0 }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Multiplicativity {
    /// `P[x] => P[3x]` for every vector of the space.
    Holds,
    Counterexample(Z4Vector),
    /// A sampled sweep found no violation; nothing is proven.
    Inconclusive { tested: usize },
}

/// Searches for `x` with `P[x]` true and `P[3x]` false.
pub fn is_multiplicative_empirical(p: &impl Predicate, n: usize, sweep: Sweep) -> Result<Multiplicativity> {
    Z4Vector::zero(n)?;
    let violates = |x: &Z4Vector| p.test(x) && !p.test(&x.scale(3));
    match sweep {
        Sweep::Exhaustive => {
            if n > EXHAUSTIVE_MAX_LEN {
                return Err(Error::OverBudget { universe: 1 << (2 * n), limit: 1 << (2 * EXHAUSTIVE_MAX_LEN) });
            }
            for bits in 0..(1u64 << (2 * n)) {
                let x = Z4Vector::from_packed_unchecked(bits, n);
                if violates(&x) {
                    return Ok(Multiplicativity::Counterexample(x));
                }
            }
            Ok(Multiplicativity::Holds)
        }
        Sweep::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let x = Z4Vector::from_packed_unchecked(rng.gen(), n);
                if violates(&x) {
                    return Ok(Multiplicativity::Counterexample(x));
                }
            }
            Ok(Multiplicativity::Inconclusive { tested: samples })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Z4Vector {
        s.parse().unwrap()
    }

    fn parse(s: &str) -> PropertySpec {
        PropertySpec::parse(s, &CostModel::unit()).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        assert!(PropertySpec::MinGc(4).evaluate(&v("21111000"), &[]).unwrap());
        assert!(!PropertySpec::MinGc(1).evaluate(&v("1111"), &[]).unwrap());
        let p = parse("editref<=GGGG:1");
        assert!(!p.evaluate(&v("2222"), &[]).unwrap());
        assert!(p.evaluate(&v("0200"), &[]).unwrap());
        assert!(PropertySpec::MinGc(5).evaluate(&v("0000"), &[]).is_err());
    }

    #[test]
    fn code_snapshot_atom() {
        let p = parse("editcode>=2");
        let code = [v("0000"), v("2200")];
        assert!(p.evaluate(&v("2222"), &code).unwrap());
        assert!(!p.evaluate(&v("2000"), &code).unwrap());
        assert!(p.evaluate(&v("0000"), &[v("0000")]).unwrap());
        assert!(p.uses_code());
        assert!(!parse("gc>=1&hw>=1").uses_code());
    }

    #[test]
    fn parser_round_trip_and_errors() {
        for text in ["gc>=4", "hw>=3&gc>=2", "gc>=4&lee>=6", "editref<=GGGG:1", "editref>=GCGC:2&editcode>=2", "false", "true"] {
            assert_eq!(parse(text).to_string(), text);
        }
        assert_eq!(parse(" gc>=4 & hw>=2 ").to_string(), "gc>=4&hw>=2");
        for bad in ["gc>4", "rank>=3", "editref<=GGNG:1", "editref<=GGGG", "hw>=-1", "", "gc>=4&"] {
            assert!(PropertySpec::parse(bad, &CostModel::unit()).is_err(), "{bad}");
        }
    }

    #[test]
    fn empty_conjunction_is_true() {
        let t = PropertySpec::always();
        assert!(t.holds(&v("1111"), &[]));
        assert!(!PropertySpec::Never.holds(&v("0000"), &[]));
    }

    #[test]
    fn multiplicativity_examples() {
        for n in 1..=6 {
            for w in 0..=n {
                assert_eq!(
                    is_multiplicative_empirical(&PropertySpec::MinGc(w), n, Sweep::Exhaustive).unwrap(),
                    Multiplicativity::Holds
                );
            }
            assert_eq!(
                is_multiplicative_empirical(&PropertySpec::MinHammingWeight(n / 2), n, Sweep::Exhaustive).unwrap(),
                Multiplicativity::Holds
            );
        }
        let first_is_one = |x: &Z4Vector| x.get(0) == Some(1);
        match is_multiplicative_empirical(&first_is_one, 3, Sweep::Exhaustive).unwrap() {
            Multiplicativity::Counterexample(x) => {
                assert_eq!(x.get(0), Some(1));
                assert_eq!(x.scale(3).get(0), Some(3));
            }
            other => panic!("expected counterexample, got {other:?}"),
        }
    }

    #[test]
    fn sampled_sweeps_are_inconclusive_not_proofs() {
        let r = is_multiplicative_empirical(&PropertySpec::MinGc(3), 12, Sweep::Sampled { samples: 500, seed: 7 });
        assert_eq!(r.unwrap(), Multiplicativity::Inconclusive { tested: 500 });
        assert!(is_multiplicative_empirical(&PropertySpec::MinGc(3), 9, Sweep::Exhaustive).is_err());
    }
}
