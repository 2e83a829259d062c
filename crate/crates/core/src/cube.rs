//! Points, partial points, and variable blocks of the Boolean cube.
//!
//! Variables are 1-indexed (x1..xn). A full assignment packs the value of
//! xj into bit j-1 of a `u32`, so x1 is the least significant bit. The
//! string form reads left to right: "011" means x1=0, x2=1, x3=1.

use std::fmt;

use crate::error::{Error, Result};

/// A full assignment to n Boolean variables.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Assignment {
    n: u8,
    bits: u32,
}

impl Assignment {
    pub fn new(n: u8, bits: u32) -> Self {
        debug_assert!(n <= 32);
        debug_assert_eq!(bits & !mask_n(n), 0, "assignment bits outside 1..={n}");
        Assignment {
            n,
            bits: bits & mask_n(n),
        }
    }

    /// Parse "0110"-style text; the string length fixes n.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.is_empty() || t.len() > 16 {
            return Err(Error::BadAssignment(format!(
                "need 1..=16 bits, got {:?}",
                text
            )));
        }
        let mut bits = 0u32;
        for (i, ch) in t.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => {
                    return Err(Error::BadAssignment(format!(
                        "bad character {ch:?} in {text:?}"
                    )))
                }
            }
        }
        Ok(Assignment {
            n: t.len() as u8,
            bits,
        })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    /// Packed form: bit j-1 holds xj.
    pub fn index(&self) -> u32 {
        self.bits
    }

    pub fn get(&self, var: u8) -> Result<bool> {
        check_var(var, self.n)?;
        Ok(self.bits >> (var - 1) & 1 == 1)
    }

    pub fn with_var(&self, var: u8, value: bool) -> Result<Self> {
        check_var(var, self.n)?;
        let bit = 1u32 << (var - 1);
        let bits = if value {
            self.bits | bit
        } else {
            self.bits & !bit
        };
        Ok(Assignment { n: self.n, bits })
    }

    /// x^B: flip every variable in the block.
    pub fn flip_block(&self, block: &Block) -> Result<Self> {
        if block.mask() & !mask_n(self.n) != 0 {
            let var = 32 - (block.mask() & !mask_n(self.n)).leading_zeros() as u8;
            return Err(Error::VarOutOfRange { var, n: self.n });
        }
        Ok(Assignment {
            n: self.n,
            bits: self.bits ^ block.mask(),
        })
    }

    pub fn flip_var(&self, var: u8) -> Result<Self> {
        check_var(var, self.n)?;
        Ok(Assignment {
            n: self.n,
            bits: self.bits ^ (1 << (var - 1)),
        })
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.n {
            write!(f, "{}", (self.bits >> j) & 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Assignment({self})")
    }
}

/// A set of fixed variables together with their bit values.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PartialAssignment {
    n: u8,
    fixed: u32,
    values: u32, // bits set only at fixed positions
}

impl PartialAssignment {
    pub fn empty(n: u8) -> Self {
        debug_assert!(n <= 32);
        PartialAssignment {
            n,
            fixed: 0,
            values: 0,
        }
    }

    pub fn from_pairs(n: u8, pairs: &[(u8, bool)]) -> Result<Self> {
        let mut a = PartialAssignment::empty(n);
        for &(var, value) in pairs {
            a.fix(var, value)?;
        }
        Ok(a)
    }

    /// Fix a variable. Re-fixing with the same value is a no-op, which is
    /// what an oracle cache wants; a conflicting re-fix is rejected.
    pub fn fix(&mut self, var: u8, value: bool) -> Result<()> {
        check_var(var, self.n)?;
        let bit = 1u32 << (var - 1);
        if self.fixed & bit != 0 {
            if (self.values & bit != 0) == value {
                return Ok(());
            }
            return Err(Error::BadAssignment(format!(
                "x{var} already fixed to the opposite value"
            )));
        }
        self.fixed |= bit;
        if value {
            self.values |= bit;
        }
        Ok(())
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn fixed_mask(&self) -> u32 {
        self.fixed
    }

    pub fn values_mask(&self) -> u32 {
        self.values
    }

    pub fn is_fixed(&self, var: u8) -> bool {
        var >= 1 && var <= self.n && self.fixed >> (var - 1) & 1 == 1
    }

    pub fn value(&self, var: u8) -> Option<bool> {
        if self.is_fixed(var) {
            Some(self.values >> (var - 1) & 1 == 1)
        } else {
            None
        }
    }

    pub fn fixed_count(&self) -> u8 {
        self.fixed.count_ones() as u8
    }

    pub fn is_full(&self) -> bool {
        self.fixed == mask_n(self.n)
    }

    /// Free variables in increasing order of original index.
    pub fn free_vars(&self) -> Vec<u8> {
        (1..=self.n).filter(|&v| !self.is_fixed(v)).collect()
    }

    /// Fixed (variable, value) pairs in increasing variable order.
    pub fn fixed_pairs(&self) -> Vec<(u8, bool)> {
        (1..=self.n)
            .filter(|&v| self.is_fixed(v))
            .map(|v| (v, self.values >> (v - 1) & 1 == 1))
            .collect()
    }

    /// Does the full assignment agree with every fixed value?
    pub fn compatible(&self, x: &Assignment) -> bool {
        x.n() == self.n && x.index() & self.fixed == self.values
    }

    /// Complete to a full assignment by distributing `free_bits` over the
    /// free variables in increasing order (bit k goes to the k-th free var).
    pub fn complete(&self, free_bits: u32) -> Assignment {
        let mut bits = self.values;
        for (k, v) in self.free_vars().into_iter().enumerate() {
            if free_bits >> k & 1 == 1 {
                bits |= 1 << (v - 1);
            }
        }
        Assignment::new(self.n, bits)
    }

    pub fn as_full(&self) -> Option<Assignment> {
        if self.is_full() {
            Some(Assignment::new(self.n, self.values))
        } else {
            None
        }
    }

    /// Union with another partial assignment over the same variables;
    /// conflicting values are rejected.
    pub fn merge(&mut self, other: &PartialAssignment) -> Result<()> {
        if other.n != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        for (v, b) in other.fixed_pairs() {
            self.fix(v, b)?;
        }
        Ok(())
    }
}

impl fmt::Display for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, b)) in self.fixed_pairs().into_iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "x{v}={}", b as u8)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialAssignment({self})")
    }
}

/// A nonempty set of variables, stored as a bitmask (bit j-1 = xj).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block(u32);

impl Block {
    pub fn new(mask: u32) -> Result<Self> {
        if mask == 0 {
            return Err(Error::EmptyBlock);
        }
        Ok(Block(mask))
    }

    pub fn from_vars(vars: &[u8]) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::EmptyBlock);
        }
        let mut mask = 0u32;
        for &v in vars {
            if v == 0 || v > 32 {
                return Err(Error::VarOutOfRange { var: v, n: 32 });
            }
            mask |= 1 << (v - 1);
        }
        Ok(Block(mask))
    }

    pub fn mask(&self) -> u32 {
        self.0
    }

    pub fn len(&self) -> u8 {
        self.0.count_ones() as u8
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn contains(&self, var: u8) -> bool {
        (1..=32).contains(&var) && self.0 >> (var - 1) & 1 == 1
    }

    /// Member variables in increasing order.
    pub fn vars(&self) -> Vec<u8> {
        (0..32u8)
            .filter(|j| self.0 >> j & 1 == 1)
            .map(|j| j + 1)
            .collect()
    }

    pub fn is_subset_of(&self, other: &Block) -> bool {
        self.0 & other.0 == self.0
    }

    pub fn disjoint(&self, other: &Block) -> bool {
        self.0 & other.0 == 0
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vars().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Block{self}")
    }
}

pub(crate) fn mask_n(n: u8) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub(crate) fn check_var(var: u8, n: u8) -> Result<()> {
    if var == 0 || var > n {
        Err(Error::VarOutOfRange { var, n })
    } else {
        Ok(())
    }
}

/// All subsets of `mask`, nonempty, ordered by (size, variable-list lex).
/// This is the deterministic order used by subset searches.
pub fn subsets_by_size(mask: u32) -> Vec<u32> {
    let vars: Vec<u8> = Block(mask.max(1)).vars();
    let mut subs: Vec<u32> = Vec::new();
    if mask == 0 {
        return subs;
    }
    let k = vars.len();
    for sub in 1u32..(1 << k) {
        let mut m = 0u32;
        for (i, &v) in vars.iter().enumerate() {
            if sub >> i & 1 == 1 {
                m |= 1 << (v - 1);
            }
        }
        subs.push(m);
    }
    subs.sort_by_key(|&m| (m.count_ones(), var_list_key(m)));
    subs
}

/// Key realizing lexicographic order on the sorted variable list of a mask.
pub(crate) fn var_list_key(mask: u32) -> Vec<u8> {
    Block(mask.max(1)).vars()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assignment_roundtrip() {
        let x = Assignment::parse("101").unwrap();
        assert_eq!(x.n(), 3);
        assert!(x.get(1).unwrap());
        assert!(!x.get(2).unwrap());
        assert!(x.get(3).unwrap());
        assert_eq!(x.index(), 0b101);
        assert_eq!(x.to_string(), "101");
        assert!(Assignment::parse("01x").is_err());
        assert!(Assignment::parse("").is_err());
    }

    #[test]
    fn flip_block_examples() {
        // 000 with {1,3} -> 101
        let x = Assignment::parse("000").unwrap();
        let b = Block::from_vars(&[1, 3]).unwrap();
        assert_eq!(x.flip_block(&b).unwrap().to_string(), "101");
        // 110 with {2} -> 100
        let y = Assignment::parse("110").unwrap();
        let b2 = Block::from_vars(&[2]).unwrap();
        assert_eq!(y.flip_block(&b2).unwrap().to_string(), "100");
        // involution
        let z = y.flip_block(&b).unwrap().flip_block(&b).unwrap();
        assert_eq!(z, y);
        // out of range
        let far = Block::from_vars(&[5]).unwrap();
        assert!(x.flip_block(&far).is_err());
    }

    #[test]
    fn partial_assignment_basics() {
        let mut a = PartialAssignment::empty(4);
        a.fix(2, true).unwrap();
        a.fix(4, false).unwrap();
        assert_eq!(a.free_vars(), vec![1, 3]);
        assert_eq!(a.value(2), Some(true));
        assert_eq!(a.value(1), None);
        assert!(a.fix(2, true).is_ok()); // consistent refix
        assert!(a.fix(2, false).is_err()); // conflict
        let full = a.complete(0b10); // x1=0, x3=1
        assert_eq!(full.to_string(), "0110");
        assert!(a.compatible(&full));
        assert!(!a.compatible(&Assignment::parse("0010").unwrap()));
    }

    #[test]
    fn block_construction() {
        assert!(Block::new(0).is_err());
        let b = Block::from_vars(&[3, 1]).unwrap();
        assert_eq!(b.vars(), vec![1, 3]);
        assert_eq!(b.len(), 2);
        assert_eq!(b.to_string(), "{1,3}");
    }

    #[test]
    fn subset_order_is_size_then_lex() {
        // mask over {1,2,3}
        let subs = subsets_by_size(0b111);
        let as_vars: Vec<Vec<u8>> = subs.iter().map(|&m| var_list_key(m)).collect();
        assert_eq!(
            as_vars,
            vec![
                vec![1],
                vec![2],
                vec![3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3],
                vec![1, 2, 3],
            ]
        );
        // lex on var lists, not on masks: {1,4} before {2,3}
        let subs2 = subsets_by_size(0b1111);
        let pos_14 = subs2.iter().position(|&m| m == 0b1001).unwrap();
        let pos_23 = subs2.iter().position(|&m| m == 0b0110).unwrap();
        assert!(pos_14 < pos_23);
    }
}
