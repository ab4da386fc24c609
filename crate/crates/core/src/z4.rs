//! Vectors over the ring of integers modulo 4 and their nucleotide images.
//!
//! A [`Z4Vector`] packs two bits per coordinate into a `u64`, coordinate `i`
//! occupying bits `2i..2i+2`. All operations are value semantics; equality is
//! coordinatewise. The map [`phi`] sends `0 -> G`, `1 -> A`, `2 -> C`,
//! `3 -> T`, and [`DnaStrand`] values are always stored 5' to 3'.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Longest vector representable in the packed form.
pub const MAX_LEN: usize = 32;

const LOW_BITS: u64 = 0x5555_5555_5555_5555;
const HIGH_BITS: u64 = 0xAAAA_AAAA_AAAA_AAAA;

#[inline]
fn lane_mask(len: usize) -> u64 {
    if len >= MAX_LEN {
        u64::MAX
    } else {
        (1u64 << (2 * len)) - 1
    }
}

/// Coordinatewise sum mod 4 of two packed words.
#[inline]
pub(crate) fn packed_add(a: u64, b: u64) -> u64 {
    (a ^ b) ^ ((a & b & LOW_BITS) << 1)
}

/// Coordinatewise product `u * x` mod 4 of a packed word.
#[inline]
pub(crate) fn packed_scale(u: u8, x: u64) -> u64 {
    match u & 3 {
        0 => 0,
        1 => x,
        2 => (x & LOW_BITS) << 1,
        _ => x ^ ((x & LOW_BITS) << 1),
    }
}

/// A length-`n` vector over Z4, `1 <= n <= 32`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Z4Vector {
    bits: u64,
    len: u8,
}

impl Z4Vector {
    pub fn new(coords: &[u8]) -> Result<Self> {
        check_len(coords.len())?;
        let mut bits = 0u64;
        for (i, &c) in coords.iter().enumerate() {
            if c > 3 {
                return Err(Error::InvalidResidue(c));
            }
            bits |= u64::from(c) << (2 * i);
        }
        Ok(Self { bits, len: coords.len() as u8 })
    }

    pub fn zero(len: usize) -> Result<Self> {
        check_len(len)?;
        Ok(Self { bits: 0, len: len as u8 })
    }

    /// Builds a vector from packed lanes; bits above `2 * len` are dropped.
    pub fn from_packed(bits: u64, len: usize) -> Result<Self> {
        check_len(len)?;
        Ok(Self { bits: bits & lane_mask(len), len: len as u8 })
    }

    /// Unit vector with a `1` at coordinate `index`.
    pub fn unit(len: usize, index: usize) -> Result<Self> {
        check_len(len)?;
        if index >= len {
            return Err(Error::LengthMismatch { left: index + 1, right: len });
        }
        Ok(Self { bits: 1 << (2 * index), len: len as u8 })
    }

    #[inline]
    pub(crate) fn from_packed_unchecked(bits: u64, len: usize) -> Self {
        debug_assert!((1..=MAX_LEN).contains(&len));
        Self { bits: bits & lane_mask(len), len: len as u8 }
    }

    #[inline]
    pub fn packed(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        usize::from(self.len)
    }

    /// Always false; vectors have positive length.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, index: usize) -> Option<u8> {
        (index < self.len()).then(|| ((self.bits >> (2 * index)) & 3) as u8)
    }

    pub fn coords(&self) -> Vec<u8> {
        self.iter().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len()).map(move |i| ((self.bits >> (2 * i)) & 3) as u8)
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    fn same_len(&self, other: &Self) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { left: self.len(), right: other.len() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_len(other)?;
        Ok(Self { bits: packed_add(self.bits, other.bits), len: self.len })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_len(other)?;
        Ok(Self { bits: packed_add(self.bits, packed_scale(3, other.bits)), len: self.len })
    }

    /// `u * self` mod 4; `u` is reduced mod 4 first.
    pub fn scale(&self, u: u8) -> Self {
        Self { bits: packed_scale(u, self.bits), len: self.len }
    }

    /// Number of coordinates equal to `symbol` (the count `n_symbol(x)`).
    pub fn symbol_count(&self, symbol: u8) -> usize {
        let b = self.bits;
        let hi = (b >> 1) & LOW_BITS;
        let lo = b & LOW_BITS;
        let mask = lane_mask(self.len()) & LOW_BITS;
        let lanes = match symbol & 3 {
            0 => !hi & !lo,
            1 => !hi & lo,
            2 => hi & !lo,
            _ => hi & lo,
        } & mask;
        lanes.count_ones() as usize
    }

    pub fn hamming_weight(&self) -> usize {
        ((self.bits | (self.bits >> 1)) & LOW_BITS).count_ones() as usize
    }

    /// `n_1 + 2 n_2 + n_3`.
    pub fn lee_weight(&self) -> usize {
        self.symbol_count(1) + 2 * self.symbol_count(2) + self.symbol_count(3)
    }

    pub fn hamming_distance(&self, other: &Self) -> Result<usize> {
        Ok(self.sub(other)?.hamming_weight())
    }

    /// Coordinates in `{0, 2}`, i.e. positions mapped to G or C.
    pub fn gc_weight(&self) -> usize {
        self.len() - (self.bits & LOW_BITS).count_ones() as usize
    }

    pub fn reverse(&self) -> Self {
        let n = self.len();
        let mut out = 0u64;
        for i in 0..n {
            out |= ((self.bits >> (2 * i)) & 3) << (2 * (n - 1 - i));
        }
        Self { bits: out, len: self.len }
    }

    /// Watson-Crick complement pulled back through `phi`; equals `x + 2`.
    pub fn complement(&self) -> Self {
        Self { bits: self.bits ^ (HIGH_BITS & lane_mask(self.len())), len: self.len }
    }

    pub fn reverse_complement(&self) -> Self {
        self.complement().reverse()
    }
}

fn check_len(len: usize) -> Result<()> {
    if len == 0 || len > MAX_LEN {
        return Err(Error::UnsupportedLength(len));
    }
    Ok(())
}

impl fmt::Display for Z4Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.iter() {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Z4Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z4Vector({self})")
    }
}

impl FromStr for Z4Vector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut coords = Vec::with_capacity(s.len());
        for (position, ch) in s.chars().enumerate() {
            match ch {
                '0'..='3' => coords.push(ch as u8 - b'0'),
                _ => return Err(Error::InvalidSymbol { symbol: ch, position }),
            }
        }
        Self::new(&coords)
    }
}

impl Serialize for Z4Vector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Z4Vector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A nucleotide. The discriminant is the row/column index used by cost tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    A = 0,
    C = 1,
    G = 2,
    T = 3,
}

impl Base {
    pub const ALL: [Base; 4] = [Base::A, Base::C, Base::G, Base::T];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    /// Watson-Crick partner.
    pub fn complement(self) -> Base {
        match self {
            Base::A => Base::T,
            Base::T => Base::A,
            Base::G => Base::C,
            Base::C => Base::G,
        }
    }

    pub fn is_gc(self) -> bool {
        matches!(self, Base::G | Base::C)
    }

    pub fn to_char(self) -> char {
        match self {
            Base::A => 'A',
            Base::C => 'C',
            Base::G => 'G',
            Base::T => 'T',
        }
    }

    pub fn from_char(ch: char) -> Option<Base> {
        match ch {
            'A' => Some(Base::A),
            'C' => Some(Base::C),
            'G' => Some(Base::G),
            'T' => Some(Base::T),
            _ => None,
        }
    }

    /// Image of a Z4 residue under `phi`.
    pub fn from_residue(u: u8) -> Base {
        match u & 3 {
            0 => Base::G,
            1 => Base::A,
            2 => Base::C,
            _ => Base::T,
        }
    }

    pub fn residue(self) -> u8 {
        match self {
            Base::G => 0,
            Base::A => 1,
            Base::C => 2,
            Base::T => 3,
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// An oriented strand, stored 5' to 3'. May be empty.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DnaStrand(Vec<Base>);

impl DnaStrand {
    pub fn new(bases: Vec<Base>) -> Self {
        Self(bases)
    }

    /// Parses a strand written 3' to 5' and normalizes it to 5' to 3'.
    pub fn from_three_prime(s: &str) -> Result<Self> {
        let mut strand: DnaStrand = s.parse()?;
        strand.0.reverse();
        Ok(strand)
    }

    pub fn bases(&self) -> &[Base] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn gc_weight(&self) -> usize {
        self.0.iter().filter(|b| b.is_gc()).count()
    }

    pub fn reverse(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    pub fn complement(&self) -> Self {
        Self(self.0.iter().map(|b| b.complement()).collect())
    }

    pub fn reverse_complement(&self) -> Self {
        Self(self.0.iter().rev().map(|b| b.complement()).collect())
    }

    pub fn first(&self) -> Option<Base> {
        self.0.first().copied()
    }
}

impl From<Vec<Base>> for DnaStrand {
    fn from(bases: Vec<Base>) -> Self {
        Self(bases)
    }
}

impl fmt::Display for DnaStrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{}", b.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for DnaStrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DnaStrand({self})")
    }
}

impl FromStr for DnaStrand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .enumerate()
            .map(|(position, ch)| {
                Base::from_char(ch).ok_or(Error::InvalidSymbol { symbol: ch, position })
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

impl Serialize for DnaStrand {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DnaStrand {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn phi(x: &Z4Vector) -> DnaStrand {
    DnaStrand(x.iter().map(Base::from_residue).collect())
}

pub fn phi_inv(s: &DnaStrand) -> Result<Z4Vector> {
    let coords: Vec<u8> = s.bases().iter().map(|b| b.residue()).collect();
    Z4Vector::new(&coords)
}
