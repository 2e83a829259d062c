//! Truth tables of total Boolean functions.
//!
//! Entry i of the table is f at the assignment whose variable xj equals
//! bit j-1 of i, so x1 is the least significant bit of the index. The
//! bitstring form lists entries left to right in index order: OR on three
//! variables is "01111111".

use std::fmt;

use num_bigint::BigInt;

use crate::cube::{mask_n, Assignment, PartialAssignment};
use crate::error::{Error, Result};
use crate::poly::MultilinearPoly;
use crate::Rat;

/// Largest supported variable count for tables and the polynomial transform.
pub const MAX_N: u8 = 16;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: u8,
    bits: Vec<bool>,
}

impl TruthTable {
    /// Build from explicit entries; `bits.len()` must be exactly 2^n.
    /// n = 0 (a bare constant) is allowed internally so that restriction
    /// by a full assignment stays total; the function-spec grammar requires n >= 1.
    pub fn new(n: u8, bits: Vec<bool>) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::BadSpec(format!("n = {n} exceeds max {MAX_N}")));
        }
        if bits.len() != 1usize << n {
            return Err(Error::BadSpec(format!(
                "table for n = {n} needs {} bits, got {}",
                1usize << n,
                bits.len()
            )));
        }
        Ok(TruthTable { n, bits })
    }

    pub fn from_fn(n: u8, f: impl Fn(Assignment) -> bool) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::BadSpec(format!("n = {n} exceeds max {MAX_N}")));
        }
        let bits = (0..1u32 << n).map(|i| f(Assignment::new(n, i))).collect();
        Ok(TruthTable { n, bits })
    }

    pub fn constant(n: u8, value: bool) -> Self {
        TruthTable {
            n,
            bits: vec![value; 1usize << n],
        }
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    /// Number of table entries, 2^n.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Entry at a packed index (bit j-1 of the index = xj).
    pub fn bit(&self, index: u32) -> bool {
        self.bits[index as usize]
    }

    pub fn evaluate(&self, x: &Assignment) -> Result<bool> {
        if x.n() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: x.n(),
            });
        }
        Ok(self.bits[x.index() as usize])
    }

    /// Some(value) when the function is constant.
    pub fn constant_value(&self) -> Option<bool> {
        let first = self.bits[0];
        if self.bits.iter().all(|&b| b == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn complement(&self) -> TruthTable {
        TruthTable {
            n: self.n,
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }

    /// Subfunction on the free variables of `a`, renumbered in increasing
    /// order of original index (the k-th free variable becomes x_k).
    pub fn restrict(&self, a: &PartialAssignment) -> Result<TruthTable> {
        if a.n() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: a.n(),
            });
        }
        let free = a.free_vars();
        let m = free.len() as u8;
        let mut bits = Vec::with_capacity(1usize << m);
        for i in 0..1u32 << m {
            let full = a.complete(i);
            bits.push(self.bits[full.index() as usize]);
        }
        Ok(TruthTable { n: m, bits })
    }

    /// The unique multilinear polynomial agreeing with the table on {0,1}^n,
    /// by the iterated subset difference (Moebius) transform. Coefficients
    /// of a table-derived polynomial are always integers.
    pub fn to_polynomial(&self) -> MultilinearPoly {
        let size = 1usize << self.n;
        let mut g: Vec<i64> = self.bits.iter().map(|&b| b as i64).collect();
        for j in 0..self.n {
            let bit = 1usize << j;
            for m in 0..size {
                if m & bit != 0 {
                    g[m] -= g[m ^ bit];
                }
            }
        }
        let terms = g.iter().enumerate().filter_map(|(m, &c)| {
            if c != 0 {
                Some((m as u32, Rat::from_integer(BigInt::from(c))))
            } else {
                None
            }
        });
        MultilinearPoly::from_terms(self.n, terms).expect("masks in range by construction")
    }

    /// Entries as a 0/1 string in index order.
    pub fn bitstring(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    /// Packed entries for n <= 6 (entry i in bit i).
    pub fn packed(&self) -> Option<u64> {
        if self.n > 6 {
            return None;
        }
        let mut w = 0u64;
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                w |= 1 << i;
            }
        }
        Some(w)
    }

    pub fn from_packed(n: u8, word: u64) -> Result<Self> {
        if n > 6 {
            return Err(Error::BadSpec(format!(
                "packed tables need n <= 6, got {n}"
            )));
        }
        let bits = (0..1usize << n).map(|i| word >> i & 1 == 1).collect();
        TruthTable::new(n, bits)
    }

    /// Relabel variables: `perm[j]` is the new position (1-indexed) of
    /// original variable j+1. Measures that ignore labels are invariant
    /// under this.
    pub fn permute_vars(&self, perm: &[u8]) -> Result<TruthTable> {
        if perm.len() != self.n as usize {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: perm.len() as u8,
            });
        }
        let mut seen = 0u32;
        for &p in perm {
            if p == 0 || p > self.n || seen >> (p - 1) & 1 == 1 {
                return Err(Error::BadAssignment(format!("bad permutation {perm:?}")));
            }
            seen |= 1 << (p - 1);
        }
        let n = self.n;
        TruthTable::from_fn(n, |x| {
            // g(x) = f(y) with y_j = x_{perm[j]}
            let mut y = 0u32;
            for j in 0..n {
                let target = perm[j as usize];
                if x.index() >> (target - 1) & 1 == 1 {
                    y |= 1 << j;
                }
            }
            self.bits[y as usize]
        })
    }

    pub fn all_inputs(&self) -> impl Iterator<Item = Assignment> + '_ {
        let n = self.n;
        (0..1u32 << n).map(move |i| Assignment::new(n, i))
    }

    pub fn full_mask(&self) -> u32 {
        mask_n(self.n)
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable(n={}, {})", self.n, self.bitstring())
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tt:{}:{}", self.n, self.bitstring())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_spec;

    #[test]
    fn evaluate_or3() {
        let f = parse_spec("or:3").unwrap();
        assert!(!f.evaluate(&Assignment::parse("000").unwrap()).unwrap());
        assert!(f.evaluate(&Assignment::parse("010").unwrap()).unwrap());
        // arity mismatch rejected
        assert!(f.evaluate(&Assignment::parse("01").unwrap()).is_err());
    }

    #[test]
    fn evaluate_maj3_against_count_oracle() {
        let f = parse_spec("maj:3").unwrap();
        for i in 0..8u32 {
            let expect = i.count_ones() >= 2;
            assert_eq!(f.bit(i), expect, "maj:3 at index {i}");
        }
        assert!(f.evaluate(&Assignment::parse("110").unwrap()).unwrap());
    }

    #[test]
    fn complement_involution() {
        let f = parse_spec("or:3").unwrap();
        let nor = f.complement();
        assert_eq!(nor.bitstring(), "10000000");
        assert_eq!(nor.complement(), f);
        let zero = TruthTable::constant(2, false);
        assert_eq!(zero.complement(), TruthTable::constant(2, true));
    }

    #[test]
    fn restrict_or3() {
        let f = parse_spec("or:3").unwrap();
        // x1 = 1 absorbs
        let a = PartialAssignment::from_pairs(3, &[(1, true)]).unwrap();
        let g = f.restrict(&a).unwrap();
        assert_eq!(g.constant_value(), Some(true));
        assert_eq!(g.n(), 2);
        // x1 = 0 leaves OR on the rest
        let b = PartialAssignment::from_pairs(3, &[(1, false)]).unwrap();
        let h = f.restrict(&b).unwrap();
        assert_eq!(h, parse_spec("or:2").unwrap());
    }

    #[test]
    fn restrict_parity_shifts() {
        let f = parse_spec("parity:3").unwrap();
        let a = PartialAssignment::from_pairs(3, &[(2, true)]).unwrap();
        let g = f.restrict(&a).unwrap();
        let not_parity2 = parse_spec("parity:2").unwrap().complement();
        assert_eq!(g, not_parity2);
    }

    #[test]
    fn restrict_to_nothing() {
        let f = parse_spec("and:2").unwrap();
        let a = PartialAssignment::from_pairs(2, &[(1, true), (2, true)]).unwrap();
        let g = f.restrict(&a).unwrap();
        assert_eq!(g.n(), 0);
        assert_eq!(g.constant_value(), Some(true));
    }

    #[test]
    fn permute_keeps_value_on_mapped_points() {
        let f = parse_spec("dict:3:1").unwrap();
        let g = f.permute_vars(&[3, 1, 2]).unwrap(); // x1 -> position 3
        assert_eq!(g, parse_spec("dict:3:3").unwrap());
    }

    #[test]
    fn packed_roundtrip() {
        let f = parse_spec("maj:3").unwrap();
        let w = f.packed().unwrap();
        assert_eq!(TruthTable::from_packed(3, w).unwrap(), f);
    }
}
