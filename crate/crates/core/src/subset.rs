//! Binary feature-subset genome.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A binary decision vector `x ∈ {0,1}^d`; bit `i` selects feature `i` (0-based).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FeatureSubset {
    bits: Vec<bool>,
}

impl FeatureSubset {
    pub fn new(bits: Vec<bool>) -> Self {
        FeatureSubset { bits }
    }

    pub fn empty(d: usize) -> Self {
        FeatureSubset {
            bits: vec![false; d],
        }
    }

    pub fn full(d: usize) -> Self {
        FeatureSubset { bits: vec![true; d] }
    }

    /// Builds a subset from 0-based feature indices.
    pub fn from_indices(d: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(d);
        for i in indices {
            s.bits[i] = true;
        }
        s
    }

    /// Parses a `0`/`1` string where the first character is feature 0.
    pub fn from_bitstring(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }

    pub fn dimension(&self) -> usize {
        self.bits.len()
    }

    /// `|x|`, the number of selected features.
    pub fn cardinality(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Selected indices in ascending order.
    pub fn indices(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        FeatureSubset::new(
            self.bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a || b)
                .collect(),
        )
    }

    /// Packed little-endian bytes (feature 0 is bit 0 of byte 0).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.bits.len().div_ceil(8)];
        for i in self.indices() {
            out[i / 8] |= 1 << (i % 8);
        }
        out
    }

    /// Hex rendering of the bitmask as an integer `Σ x_i 2^i`, most significant
    /// digit first, zero-padded to `ceil(d/4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.bits.len().div_ceil(4).max(1);
        (0..digits)
            .rev()
            .map(|g| {
                let mut nibble = 0u32;
                for b in 0..4 {
                    let i = g * 4 + b;
                    if i < self.bits.len() && self.bits[i] {
                        nibble |= 1 << b;
                    }
                }
                char::from_digit(nibble, 16).unwrap()
            })
            .collect()
    }

    /// Inverse of [`to_hex`](Self::to_hex) for a known dimension `d`.
    pub fn from_hex(hex: &str, d: usize) -> Result<Self> {
        let hex = hex.trim().trim_start_matches("0x");
        let mut bits = vec![false; d];
        for (g, c) in hex.chars().rev().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::InvalidConfig(format!("bad hex digit {c:?} in bitmask")))?;
            for b in 0..4 {
                if nibble & (1 << b) != 0 {
                    let i = g * 4 + b;
                    if i >= d {
                        return Err(Error::InvalidConfig(format!(
                            "bitmask {hex} sets bit {i} beyond dimension {d}"
                        )));
                    }
                    bits[i] = true;
                }
            }
        }
        Ok(FeatureSubset { bits })
    }

    /// Jaccard distance `1 - |A∩B| / |A∪B|`; two empty sets are at distance 0.
    pub fn jaccard_distance(&self, other: &Self) -> f64 {
        let (mut inter, mut union) = (0usize, 0usize);
        for (&a, &b) in self.bits.iter().zip(&other.bits) {
            inter += (a && b) as usize;
            union += (a || b) as usize;
        }
        if union == 0 {
            0.0
        } else {
            1.0 - inter as f64 / union as f64
        }
    }
}

impl fmt::Debug for FeatureSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FeatureSubset({}: {:?})", self.bits.len(), self.indices())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bitstring_and_cardinality() {
        let s = FeatureSubset::from_bitstring("10110").unwrap();
        assert_eq!(s.cardinality(), 3);
        assert_eq!(s.indices(), vec![0, 2, 3]);
        assert_eq!(s.to_hex(), "0d");
        assert!(FeatureSubset::from_bitstring("10a").is_none());
    }

    #[test]
    fn hex_rejects_out_of_range_bits() {
        assert!(FeatureSubset::from_hex("f", 3).is_err());
        assert!(FeatureSubset::from_hex("zz", 8).is_err());
    }

    #[test]
    fn jaccard() {
        let a = FeatureSubset::from_bitstring("1100").unwrap();
        let b = FeatureSubset::from_bitstring("0110").unwrap();
        assert!((a.jaccard_distance(&b) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(a.jaccard_distance(&a), 0.0);
    }

    proptest! {
        #[test]
        fn hex_round_trip(bits in proptest::collection::vec(any::<bool>(), 1..130)) {
            let s = FeatureSubset::new(bits);
            let back = FeatureSubset::from_hex(&s.to_hex(), s.dimension()).unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
