//! Sets of computational-basis valuations, stored as a bitmap over `2^n` indices.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValuationError {
    #[error("bitstring `{got}` has length {len}, expected {expected}")]
    WrongLength { got: String, len: usize, expected: usize },
    #[error("bitstring `{0}` contains a character other than 0 or 1")]
    BadCharacter(String),
    #[error("valuation sets over {0} and {1} qubits cannot be combined")]
    Mismatch(usize, usize),
    #[error("{0} qubits is beyond the enumeration bound")]
    TooLarge(usize),
}

/// Bound on qubit counts for which valuation sets are materialized.
pub const MAX_ENUMERATED_QUBITS: usize = 24;

pub fn bitstring(index: usize, n: usize) -> String {
    (0..n).map(|k| if (index >> (n - 1 - k)) & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn parse_bitstring(s: &str, n: usize) -> Result<usize, ValuationError> {
    if s.chars().count() != n {
        return Err(ValuationError::WrongLength { got: s.into(), len: s.chars().count(), expected: n });
    }
    let mut idx = 0usize;
    for ch in s.chars() {
        idx <<= 1;
        match ch {
            '0' => {}
            '1' => idx |= 1,
            _ => return Err(ValuationError::BadCharacter(s.into())),
        }
    }
    Ok(idx)
}

/// Bit of qubit `pos` (0 = most significant) in valuation `index`.
#[inline]
pub fn bit(index: usize, pos: usize, n: usize) -> bool {
    (index >> (n - 1 - pos)) & 1 == 1
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValuationSet {
    num_qubits: usize,
    members: Vec<bool>,
}

impl ValuationSet {
    pub fn empty(num_qubits: usize) -> Self {
        Self { num_qubits, members: vec![false; 1usize << num_qubits] }
    }

    pub fn all(num_qubits: usize) -> Self {
        Self { num_qubits, members: vec![true; 1usize << num_qubits] }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(num_qubits: usize, indices: I) -> Self {
        let mut s = Self::empty(num_qubits);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn from_bitstrings<I, S>(num_qubits: usize, strings: I) -> Result<Self, ValuationError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut s = Self::empty(num_qubits);
        for b in strings {
            s.insert(parse_bitstring(b.as_ref(), num_qubits)?);
        }
        Ok(s)
    }

    pub fn from_predicate<F: FnMut(usize) -> bool>(num_qubits: usize, mut pred: F) -> Self {
        Self { num_qubits, members: (0..1usize << num_qubits).map(&mut pred).collect() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.get(index).copied().unwrap_or(false)
    }

    /// Panics if `index` is out of range.
    pub fn insert(&mut self, index: usize) {
        self.members[index] = true;
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn is_full(&self) -> bool {
        self.members.iter().all(|&b| b)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    fn check(&self, other: &Self) -> Result<(), ValuationError> {
        if self.num_qubits != other.num_qubits {
            return Err(ValuationError::Mismatch(self.num_qubits, other.num_qubits));
        }
        Ok(())
    }

    pub fn intersection(&self, other: &Self) -> Result<Self, ValuationError> {
        self.check(other)?;
        Ok(Self {
            num_qubits: self.num_qubits,
            members: self.members.iter().zip(&other.members).map(|(a, b)| *a && *b).collect(),
        })
    }

    pub fn union(&self, other: &Self) -> Result<Self, ValuationError> {
        self.check(other)?;
        Ok(Self {
            num_qubits: self.num_qubits,
            members: self.members.iter().zip(&other.members).map(|(a, b)| *a || *b).collect(),
        })
    }

    pub fn complement(&self) -> Self {
        Self { num_qubits: self.num_qubits, members: self.members.iter().map(|b| !b).collect() }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.num_qubits == other.num_qubits && self.members.iter().zip(&other.members).all(|(a, b)| !a || *b)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.members.iter().zip(&other.members).all(|(a, b)| !(a & b))
    }

    pub fn to_bitstrings(&self) -> Vec<String> {
        self.iter().map(|i| bitstring(i, self.num_qubits)).collect()
    }

    /// Image under restriction to the qubit positions `positions` (in that order).
    pub fn project(&self, positions: &[usize]) -> Self {
        let n = self.num_qubits;
        let k = positions.len();
        let mut out = Self::empty(k);
        for v in self.iter() {
            let mut w = 0usize;
            for &p in positions {
                w = (w << 1) | usize::from(bit(v, p, n));
            }
            out.insert(w);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitstring_round_trip() {
        for i in 0..16 {
            assert_eq!(parse_bitstring(&bitstring(i, 4), 4).unwrap(), i);
        }
        assert_eq!(bitstring(1, 2), "01");
        assert!(parse_bitstring("012", 3).is_err());
        assert!(parse_bitstring("01", 3).is_err());
    }

    #[test]
    fn set_algebra() {
        let a = ValuationSet::from_bitstrings(2, ["00", "01"]).unwrap();
        let b = ValuationSet::from_bitstrings(2, ["01", "11"]).unwrap();
        assert_eq!(a.intersection(&b).unwrap().to_bitstrings(), vec!["01"]);
        assert_eq!(a.union(&b).unwrap().len(), 3);
        assert_eq!(a.complement().to_bitstrings(), vec!["10", "11"]);
        assert!(ValuationSet::empty(2).is_subset(&a));
    }

    #[test]
    fn projection_onto_positions() {
        let v = ValuationSet::from_bitstrings(3, ["011", "110"]).unwrap();
        assert_eq!(v.project(&[0]).to_bitstrings(), vec!["0", "1"]);
        assert_eq!(v.project(&[2, 0]).to_bitstrings(), vec!["01", "10"]);
        assert_eq!(v.project(&[]).len(), 1);
    }
}
