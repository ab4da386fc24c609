//! Code transforms used in the bound arguments, with empirical checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Metric;
use crate::error::{Error, Result};
use crate::z4::{Base, DnaStrand};

/// Which A/T position each codeword gives up when punctured.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PuncturePolicy {
    FirstAt,
    LastAt,
    /// The same position in every word; it must hold A or T everywhere.
    Fixed(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Punctured {
    pub code: Vec<DnaStrand>,
    /// Position removed from each input word.
    pub positions: Vec<usize>,
    /// Number of input words that collapsed onto another word.
    pub collisions: usize,
}

/// Drops one A/T symbol from every word so GC weight is unchanged.
pub fn gc_preserving_puncture(code: &[DnaStrand], policy: PuncturePolicy) -> Result<Punctured> {
    let mut out = Vec::with_capacity(code.len());
    let mut positions = Vec::with_capacity(code.len());
    for word in code {
        let b = word.bases();
        let pos = match policy {
            PuncturePolicy::FirstAt => b.iter().position(|x| !x.is_gc()),
            PuncturePolicy::LastAt => b.iter().rposition(|x| !x.is_gc()),
            PuncturePolicy::Fixed(p) => b.get(p).filter(|x| !x.is_gc()).map(|_| p),
        }
        .ok_or_else(|| Error::Puncture(format!("{word} has no removable A/T position")))?;
        let mut shorter = b.to_vec();
        shorter.remove(pos);
        out.push(DnaStrand::new(shorter));
        positions.push(pos);
    }
    let mut unique = out.clone();
    unique.sort();
    unique.dedup();
    Ok(Punctured { collisions: out.len() - unique.len(), code: out, positions })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    /// Words grouped by first symbol, in A, C, G, T order.
    pub subsets: [Vec<DnaStrand>; 4],
    /// First symbol of the largest group (lowest symbol on ties).
    pub largest: Base,
    /// The largest group with its common first symbol removed.
    pub shortened: Vec<DnaStrand>,
}

pub fn partition_by_first_symbol(code: &[DnaStrand]) -> Result<Partition> {
    if code.is_empty() {
        return Err(Error::InvalidKey("cannot partition an empty code".into()));
    }
    let mut subsets: [Vec<DnaStrand>; 4] = Default::default();
    for word in code {
        let first = word.first().ok_or_else(|| Error::InvalidKey("empty strand in code".into()))?;
        subsets[first.index()].push(word.clone());
    }
    let idx = (0..4).fold(0, |best, i| if subsets[i].len() > subsets[best].len() { i } else { best });
    let shortened = subsets[idx].iter().map(|w| DnaStrand::new(w.bases()[1..].to_vec())).collect();
    Ok(Partition { subsets, largest: Base::ALL[idx], shortened })
}

/// Complements the first `floor(n/2)` symbols.
pub fn half_complement(s: &DnaStrand) -> DnaStrand {
    let half = s.len() / 2;
    DnaStrand::new(s.bases().iter().enumerate().map(|(i, &b)| if i < half { b.complement() } else { b }).collect())
}

pub fn half_complement_transform(code: &[DnaStrand]) -> Vec<DnaStrand> {
    code.iter().map(half_complement).collect()
}

/// A pair on which a property of the half-complement transform failed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairExample {
    pub x: DnaStrand,
    pub y: DnaStrand,
    pub before: f64,
    pub after: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HalfComplementStats {
    pub n: usize,
    pub pairs: usize,
    pub gc_preserved: usize,
    pub distance_preserved: usize,
    /// Pairs where `d(x, y^R)` and `d(x', y'^RC)` are equal (even `n`) or
    /// differ by at most one (odd `n`).
    pub cross_identity: usize,
    pub distance_examples: Vec<PairExample>,
    pub cross_examples: Vec<PairExample>,
}

impl HalfComplementStats {
    pub fn cross_rate(&self) -> f64 {
        self.cross_identity as f64 / self.pairs.max(1) as f64
    }
}

const EXAMPLE_CAP: usize = 5;

/// Measures the half-complement transform on `pairs` random strand pairs.
pub fn half_complement_experiment(n: usize, pairs: usize, seed: u64, metric: &Metric) -> HalfComplementStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = |rng: &mut ChaCha8Rng| DnaStrand::new((0..n).map(|_| Base::ALL[rng.gen_range(0..4)]).collect());
    let mut stats = HalfComplementStats {
        n,
        pairs,
        gc_preserved: 0,
        distance_preserved: 0,
        cross_identity: 0,
        distance_examples: Vec::new(),
        cross_examples: Vec::new(),
    };
    let slack = if n.is_multiple_of(2) { 0.0 } else { 1.0 };
    for _ in 0..pairs {
        let x = random(&mut rng);
        let y = random(&mut rng);
        let (hx, hy) = (half_complement(&x), half_complement(&y));
        if hx.gc_weight() == x.gc_weight() && hy.gc_weight() == y.gc_weight() {
            stats.gc_preserved += 1;
        }
        let before = metric.distance(x.bases(), y.bases());
        let after = metric.distance(hx.bases(), hy.bases());
        if before == after {
            stats.distance_preserved += 1;
        } else if stats.distance_examples.len() < EXAMPLE_CAP {
            stats.distance_examples.push(PairExample { x: x.clone(), y: y.clone(), before, after });
        }
        let cross_before = metric.distance(x.bases(), y.reverse().bases());
        let cross_after = metric.distance(hx.bases(), hy.reverse_complement().bases());
        if (cross_before - cross_after).abs() <= slack {
            stats.cross_identity += 1;
        } else if stats.cross_examples.len() < EXAMPLE_CAP {
            stats.cross_examples.push(PairExample { x, y, before: cross_before, after: cross_after });
        }
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::levenshtein;

    fn s(text: &str) -> DnaStrand {
        text.parse().unwrap()
    }

    #[test]
    fn puncture_examples() {
        let p = gc_preserving_puncture(&[s("GACT")], PuncturePolicy::Fixed(1)).unwrap();
        assert_eq!(p.code, vec![s("GCT")]);
        assert_eq!(p.code[0].gc_weight(), 2);
        assert!(gc_preserving_puncture(&[s("GCGC")], PuncturePolicy::FirstAt).is_err());
        assert!(gc_preserving_puncture(&[s("GACT")], PuncturePolicy::Fixed(0)).is_err());
        let code = [s("GAAT"), s("GTTA")];
        assert_eq!(levenshtein(code[0].bases(), code[1].bases()), 3);
        let p = gc_preserving_puncture(&code, PuncturePolicy::LastAt).unwrap();
        assert_eq!(p.code, vec![s("GAA"), s("GTT")]);
        assert_eq!(levenshtein(p.code[0].bases(), p.code[1].bases()), 2);
        assert_eq!(p.collisions, 0);
    }

    #[test]
    fn partition_examples() {
        let code: Vec<DnaStrand> =
            ["AAA", "ACA", "CAA", "GAA", "GCC", "TAA", "TTT"].iter().map(|t| s(t)).collect();
        let p = partition_by_first_symbol(&code).unwrap();
        assert_eq!(p.subsets.iter().map(Vec::len).sum::<usize>(), 7);
        assert!(p.subsets[p.largest.index()].len() >= 2);
        assert_eq!(p.largest, Base::A);
        assert_eq!(p.shortened, vec![s("AA"), s("CA")]);
        let same = [s("GA"), s("GC"), s("GT")];
        assert_eq!(partition_by_first_symbol(&same).unwrap().subsets[Base::G.index()].len(), 3);
        assert!(partition_by_first_symbol(&[]).is_err());
    }

    #[test]
    fn half_complement_examples() {
        assert_eq!(half_complement(&s("GGCC")), s("CCCC"));
        assert_eq!(half_complement(&s("ACGTA")), s("TGGTA"));
    }
}
