use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A binary vector of up to 64 coordinates, stored as a bit mask.
///
/// Coordinate `i` is bit `i` of `mask`, and coordinate 0 is the *leftmost*
/// symbol when the vector is printed, so `"100"` has coordinate 0 set.
/// Ordering is lexicographic on the printed string, which every deterministic
/// tie-break in this crate relies on.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: u8,
    mask: u64,
}

impl BitVector {
    pub fn zero(len: usize) -> Self {
        assert!(len <= 64, "BitVector supports at most 64 coordinates");
        BitVector { len: len as u8, mask: 0 }
    }

    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= 64);
        debug_assert!(len == 64 || mask < (1u64 << len));
        BitVector { len: len as u8, mask }
    }

    /// Vector with the listed coordinates set.
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut mask = 0u64;
        for &i in support {
            assert!(i < len);
            mask |= 1 << i;
        }
        Self::from_mask(len, mask)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len());
        (self.mask >> i) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len());
        if value {
            self.mask |= 1 << i;
        } else {
            self.mask &= !(1 << i);
        }
    }

    pub fn weight(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// True when every set coordinate of `self` is also set in `other`.
    pub fn subset_of(&self, other: &BitVector) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        debug_assert_eq!(self.len, other.len);
        BitVector { len: self.len, mask: self.mask ^ other.mask }
    }

    pub fn or(&self, other: &BitVector) -> BitVector {
        debug_assert_eq!(self.len, other.len);
        BitVector { len: self.len, mask: self.mask | other.mask }
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        debug_assert_eq!(self.len, other.len);
        BitVector { len: self.len, mask: self.mask & other.mask }
    }

    pub fn with_bit(&self, i: usize) -> BitVector {
        let mut v = *self;
        v.set(i, true);
        v
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.get(i)).collect()
    }

    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// Key whose integer order equals lexicographic order of the printed
    /// string: reverse the bits so coordinate 0 becomes the high bit.
    fn lex_key(&self) -> u64 {
        self.mask.reverse_bits() >> (64 - self.len as u32)
    }
}

impl Ord for BitVector {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.len, other.len);
        self.lex_key().cmp(&other.lex_key())
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b\"{self}\"")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s.is_empty() || s.len() > 64 {
            return Err(Error::BadState(s.to_string()));
        }
        let mut v = BitVector::zero(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return Err(Error::BadState(s.to_string())),
            }
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse_round_trip() {
        let v: BitVector = "1010010".parse().unwrap();
        assert_eq!(v.to_string(), "1010010");
        assert_eq!(v.weight(), 3);
        assert_eq!(v.support(), vec![0, 2, 5]);
    }

    #[test]
    fn lex_order_matches_string_order() {
        let mut strs: Vec<String> = (0u64..32).map(|m| BitVector::from_mask(5, m).to_string()).collect();
        let mut vecs: Vec<BitVector> = (0u64..32).map(|m| BitVector::from_mask(5, m)).collect();
        strs.sort();
        vecs.sort();
        let printed: Vec<String> = vecs.iter().map(|v| v.to_string()).collect();
        assert_eq!(strs, printed);
    }

    #[test]
    fn subset_test() {
        let a: BitVector = "0100".parse().unwrap();
        let b: BitVector = "0110".parse().unwrap();
        assert!(a.subset_of(&b));
        assert!(!b.subset_of(&a));
        assert!(a.subset_of(&a));
    }
}
