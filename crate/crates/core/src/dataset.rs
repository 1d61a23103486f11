//! Bit-vector datasets on the Hamming cube.

use std::fmt;

use rand::Rng;

use crate::error::{invalid, Error, Result};

const WORD: usize = 64;

/// A point of `{0,1}^dim`. Two datasets are neighbors when they differ in
/// exactly one position.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dataset {
    words: Vec<u64>,
    dim: usize,
}

impl Dataset {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dataset dimension must be at least 1"));
        }
        Ok(Self {
            words: vec![0; dim.div_ceil(WORD)],
            dim,
        })
    }

    pub fn ones(dim: usize) -> Result<Self> {
        let mut d = Self::zeros(dim)?;
        for w in d.words.iter_mut() {
            *w = u64::MAX;
        }
        d.mask_tail();
        Ok(d)
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let mut d = Self::zeros(bits.len())?;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                d.words[i / WORD] |= 1 << (i % WORD);
            }
        }
        Ok(d)
    }

    /// The `index`-th vertex of the cube: bit `i` of the dataset is bit `i`
    /// of `index`. Used for exhaustive enumeration.
    pub fn from_index(dim: usize, index: u64) -> Result<Self> {
        if dim > WORD {
            return Err(invalid(format!("from_index supports dim <= 64, got {dim}")));
        }
        if dim < WORD && index >> dim != 0 {
            return Err(invalid(format!("index {index} does not fit in {dim} bits")));
        }
        let mut d = Self::zeros(dim)?;
        d.words[0] = index;
        Ok(d)
    }

    /// Uniform draw from `{0,1}^dim`.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        let mut d = Self::zeros(dim)?;
        for w in d.words.iter_mut() {
            *w = rng.random();
        }
        d.mask_tail();
        Ok(d)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bit(&self, i: usize) -> Option<bool> {
        (i < self.dim).then(|| self.words[i / WORD] >> (i % WORD) & 1 == 1)
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.dim).map(|i| self.words[i / WORD] >> (i % WORD) & 1 == 1)
    }

    /// Copy of `self` with position `i` flipped.
    pub fn flipped(&self, i: usize) -> Result<Self> {
        if i >= self.dim {
            return Err(invalid(format!("bit {i} out of range for dim {}", self.dim)));
        }
        let mut d = self.clone();
        d.words[i / WORD] ^= 1 << (i % WORD);
        Ok(d)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn mask_tail(&mut self) {
        let rem = self.dim % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dataset({self})")
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Dataset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(invalid(format!("unexpected character {other:?} in bit string"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits)
    }
}

/// Number of positions in which `a` and `b` differ.
pub fn hamming_distance(a: &Dataset, b: &Dataset) -> Result<usize> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    Ok(a.words
        .iter()
        .zip(&b.words)
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(s: &str) -> Dataset {
        s.parse().unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(hamming_distance(&ds("0000"), &ds("0000")).unwrap(), 0);
        assert_eq!(hamming_distance(&ds("0000"), &ds("1111")).unwrap(), 4);
        assert_eq!(hamming_distance(&ds("0110"), &ds("0101")).unwrap(), 2);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let err = hamming_distance(&ds("010"), &ds("0101")).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { left: 3, right: 4 }));
    }

    #[test]
    fn zero_dimension_is_rejected() {
        assert!(Dataset::zeros(0).is_err());
        assert!(Dataset::from_bits(&[]).is_err());
    }

    #[test]
    fn ones_masks_unused_bits() {
        let d = Dataset::ones(70).unwrap();
        assert_eq!(d.weight(), 70);
        assert_eq!(hamming_distance(&d, &Dataset::zeros(70).unwrap()).unwrap(), 70);
    }

    #[test]
    fn display_round_trips() {
        let d = ds("1001101");
        assert_eq!(d.to_string(), "1001101");
        assert_eq!(d.bit(0), Some(true));
        assert_eq!(d.bit(1), Some(false));
        assert_eq!(d.bit(7), None);
    }

    #[test]
    fn from_index_matches_bits() {
        let d = Dataset::from_index(4, 0b0110).unwrap();
        assert_eq!(d.to_string(), "0110");
        assert!(Dataset::from_index(3, 8).is_err());
    }

    #[test]
    fn flipping_gives_a_neighbor() {
        let d = ds("0000");
        let e = d.flipped(2).unwrap();
        assert_eq!(hamming_distance(&d, &e).unwrap(), 1);
        assert!(d.flipped(4).is_err());
    }
}
