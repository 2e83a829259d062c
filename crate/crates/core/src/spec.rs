//! The function-spec grammar and the named function families.
//!
//! Grammar (UTF-8, case-sensitive):
//!
//! ```text
//! tt:<n>:<bitstring of length 2^n>
//! hex:<n>:<2^n/4 hex digits, same bit order as tt>
//! or:<n> | and:<n> | parity:<n> | maj:<odd n>
//! dict:<n>:<i>          dictator: f(x) = x_i
//! nandtree:<d>          complete binary NAND tree of depth d, N = 2^d
//! addr:<k>              addressing: N = k + 2^k, the k address bits
//!                       (x1 least significant) select one data bit
//! ```
//!
//! Table entry i is f at the assignment with x1 as the least significant
//! bit of i; the tt bitstring lists entries in index order.

use std::fmt;

use crate::error::{Error, Result};
use crate::table::{TruthTable, MAX_N};

/// A parsed function spec: either a raw table or a named family instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FuncSpec {
    Table {
        n: u8,
        bits: Vec<bool>,
        text: String,
    },
    Or(u8),
    And(u8),
    Parity(u8),
    Maj(u8),
    Dict(u8, u8),
    NandTree(u8),
    Addr(u8),
}

impl FuncSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let parts: Vec<&str> = t.split(':').collect();
        let bad = |msg: String| Err(Error::BadSpec(format!("{t:?}: {msg}")));
        match parts.as_slice() {
            ["tt", n, bits] => {
                let n = parse_n(n, t)?;
                let expect = 1usize << n;
                if bits.len() != expect {
                    return bad(format!("need {expect} bits, got {}", bits.len()));
                }
                let mut v = Vec::with_capacity(expect);
                for ch in bits.chars() {
                    match ch {
                        '0' => v.push(false),
                        '1' => v.push(true),
                        _ => return bad(format!("bad bit {ch:?}")),
                    }
                }
                Ok(FuncSpec::Table {
                    n,
                    bits: v,
                    text: t.to_string(),
                })
            }
            ["hex", n, digits] => {
                let n = parse_n(n, t)?;
                if n < 2 {
                    return bad("hex form needs n >= 2".into());
                }
                let expect = (1usize << n) / 4;
                if digits.len() != expect {
                    return bad(format!("need {expect} hex digits, got {}", digits.len()));
                }
                let mut v = Vec::with_capacity(1usize << n);
                for ch in digits.chars() {
                    let d = ch
                        .to_digit(16)
                        .ok_or_else(|| Error::BadSpec(format!("{t:?}: bad hex digit {ch:?}")))?;
                    // each digit expands to 4 table entries, most significant
                    // bit first, matching the tt bitstring order
                    for k in (0..4).rev() {
                        v.push(d >> k & 1 == 1);
                    }
                }
                Ok(FuncSpec::Table {
                    n,
                    bits: v,
                    text: t.to_string(),
                })
            }
            ["or", n] => Ok(FuncSpec::Or(parse_n(n, t)?)),
            ["and", n] => Ok(FuncSpec::And(parse_n(n, t)?)),
            ["parity", n] => Ok(FuncSpec::Parity(parse_n(n, t)?)),
            ["maj", n] => {
                let n = parse_n(n, t)?;
                if n % 2 == 0 {
                    return bad("maj needs odd n".into());
                }
                Ok(FuncSpec::Maj(n))
            }
            ["dict", n, i] => {
                let n = parse_n(n, t)?;
                let i: u8 = i
                    .parse()
                    .map_err(|_| Error::BadSpec(format!("{t:?}: bad index {i:?}")))?;
                if i == 0 || i > n {
                    return bad(format!("dictator index {i} out of 1..={n}"));
                }
                Ok(FuncSpec::Dict(n, i))
            }
            ["nandtree", d] => {
                let d: u8 = d
                    .parse()
                    .map_err(|_| Error::BadSpec(format!("{t:?}: bad depth {d:?}")))?;
                if d > 4 {
                    return bad(format!("nandtree depth {d} gives N > {MAX_N}"));
                }
                Ok(FuncSpec::NandTree(d))
            }
            ["addr", k] => {
                let k: u8 = k
                    .parse()
                    .map_err(|_| Error::BadSpec(format!("{t:?}: bad k {k:?}")))?;
                if k == 0 || k > 3 {
                    return bad(format!(
                        "addr k = {k} out of 1..=3 (N = k + 2^k <= {MAX_N})"
                    ));
                }
                Ok(FuncSpec::Addr(k))
            }
            _ => bad("unknown form".into()),
        }
    }

    pub fn n(&self) -> u8 {
        match *self {
            FuncSpec::Table { n, .. } => n,
            FuncSpec::Or(n) | FuncSpec::And(n) | FuncSpec::Parity(n) | FuncSpec::Maj(n) => n,
            FuncSpec::Dict(n, _) => n,
            FuncSpec::NandTree(d) => 1 << d,
            FuncSpec::Addr(k) => k + (1 << k),
        }
    }

    /// True for the named families (everything except raw tt/hex tables).
    pub fn is_named_family(&self) -> bool {
        !matches!(self, FuncSpec::Table { .. })
    }

    pub fn table(&self) -> TruthTable {
        match self {
            FuncSpec::Table { n, bits, .. } => {
                TruthTable::new(*n, bits.clone()).expect("validated at parse time")
            }
            FuncSpec::Or(n) => or_table(*n),
            FuncSpec::And(n) => and_table(*n),
            FuncSpec::Parity(n) => parity_table(*n),
            FuncSpec::Maj(n) => maj_table(*n),
            FuncSpec::Dict(n, i) => dict_table(*n, *i),
            FuncSpec::NandTree(d) => nandtree_table(*d),
            FuncSpec::Addr(k) => addr_table(*k),
        }
    }
}

impl fmt::Display for FuncSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuncSpec::Table { text, .. } => write!(f, "{text}"),
            FuncSpec::Or(n) => write!(f, "or:{n}"),
            FuncSpec::And(n) => write!(f, "and:{n}"),
            FuncSpec::Parity(n) => write!(f, "parity:{n}"),
            FuncSpec::Maj(n) => write!(f, "maj:{n}"),
            FuncSpec::Dict(n, i) => write!(f, "dict:{n}:{i}"),
            FuncSpec::NandTree(d) => write!(f, "nandtree:{d}"),
            FuncSpec::Addr(k) => write!(f, "addr:{k}"),
        }
    }
}

/// Parse a function-spec string straight to its truth table.
pub fn parse_spec(text: &str) -> Result<TruthTable> {
    Ok(FuncSpec::parse(text)?.table())
}

fn parse_n(text: &str, whole: &str) -> Result<u8> {
    let n: u8 = text
        .parse()
        .map_err(|_| Error::BadSpec(format!("{whole:?}: bad n {text:?}")))?;
    if n == 0 || n > MAX_N {
        return Err(Error::BadSpec(format!(
            "{whole:?}: n = {n} out of 1..={MAX_N}"
        )));
    }
    Ok(n)
}

pub fn or_table(n: u8) -> TruthTable {
    TruthTable::from_fn(n, |x| x.index() != 0).expect("n validated")
}

pub fn and_table(n: u8) -> TruthTable {
    let full = (1u32 << n) - 1;
    TruthTable::from_fn(n, |x| x.index() == full).expect("n validated")
}

pub fn parity_table(n: u8) -> TruthTable {
    TruthTable::from_fn(n, |x| x.index().count_ones() % 2 == 1).expect("n validated")
}

pub fn maj_table(n: u8) -> TruthTable {
    let threshold = (n as u32).div_ceil(2);
    TruthTable::from_fn(n, |x| x.index().count_ones() >= threshold).expect("n validated")
}

pub fn dict_table(n: u8, i: u8) -> TruthTable {
    TruthTable::from_fn(n, |x| x.index() >> (i - 1) & 1 == 1).expect("n validated")
}

/// Complete binary NAND tree of depth d over N = 2^d leaf variables,
/// leaves x1..xN left to right; depth 0 is the single variable x1.
pub fn nandtree_table(d: u8) -> TruthTable {
    let n = 1u8 << d;
    TruthTable::from_fn(n, |x| {
        fn eval(bits: u32, lo: u8, width: u8) -> bool {
            if width == 1 {
                return bits >> lo & 1 == 1;
            }
            let half = width / 2;
            !(eval(bits, lo, half) && eval(bits, lo + half, half))
        }
        eval(x.index(), 0, n)
    })
    .expect("n validated")
}

/// Addressing function on N = k + 2^k variables: x1..xk form the address
/// (x1 least significant) and select among data bits x_{k+1}..x_{k+2^k}.
pub fn addr_table(k: u8) -> TruthTable {
    let n = k + (1 << k);
    TruthTable::from_fn(n, |x| {
        let addr = x.index() & ((1 << k) - 1);
        x.index() >> (k as u32 + addr) & 1 == 1
    })
    .expect("n validated")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        assert_eq!(parse_spec("or:3").unwrap().bitstring(), "01111111");
        // tt:2:0110 is XOR of two variables
        assert_eq!(
            parse_spec("tt:2:0110").unwrap(),
            parse_spec("parity:2").unwrap()
        );
        assert_eq!(parse_spec("maj:3").unwrap().bitstring(), "00010111");
    }

    #[test]
    fn hex_matches_tt() {
        // "6" expands to 0110
        assert_eq!(
            parse_spec("hex:2:6").unwrap(),
            parse_spec("tt:2:0110").unwrap()
        );
        assert_eq!(
            parse_spec("hex:3:7f").unwrap(),
            parse_spec("tt:3:01111111").unwrap()
        );
    }

    #[test]
    fn malformed_specs_rejected() {
        for bad in [
            "",
            "or",
            "or:0",
            "or:17",
            "tt:2:011",
            "tt:2:01a0",
            "hex:1:0",
            "hex:2:g",
            "maj:4",
            "dict:3:0",
            "dict:3:4",
            "nandtree:5",
            "addr:0",
            "addr:4",
            "nope:3",
            "OR:3",
        ] {
            assert!(FuncSpec::parse(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn families_match_direct_definitions() {
        for n in 1..=6u8 {
            let or = or_table(n);
            let and = and_table(n);
            let parity = parity_table(n);
            for i in 0..1u32 << n {
                assert_eq!(or.bit(i), i != 0);
                assert_eq!(and.bit(i), i == (1 << n) - 1);
                assert_eq!(parity.bit(i), i.count_ones() % 2 == 1);
            }
        }
        for n in [1u8, 3, 5, 7] {
            let maj = maj_table(n);
            for i in 0..1u32 << n {
                assert_eq!(maj.bit(i), 2 * i.count_ones() > n as u32);
            }
        }
        for n in 1..=5u8 {
            for i in 1..=n {
                let dict = dict_table(n, i);
                for x in 0..1u32 << n {
                    assert_eq!(dict.bit(x), x >> (i - 1) & 1 == 1);
                }
            }
        }
    }

    #[test]
    fn nandtree_small_depths() {
        // depth 0: the single variable
        assert_eq!(nandtree_table(0), dict_table(1, 1));
        // depth 1: NAND(x1,x2) = NOT AND
        assert_eq!(nandtree_table(1), and_table(2).complement());
        // depth 2 checked against a hand evaluator
        let f = nandtree_table(2);
        for i in 0..16u32 {
            let a = i & 1 == 1;
            let b = i >> 1 & 1 == 1;
            let c = i >> 2 & 1 == 1;
            let d = i >> 3 & 1 == 1;
            let expect = !(!(a && b) && !(c && d));
            assert_eq!(f.bit(i), expect, "nandtree:2 at {i}");
        }
    }

    #[test]
    fn addr_selects_data_bit() {
        let f = addr_table(2); // n = 6
        for i in 0..64u32 {
            let addr = i & 0b11;
            let expect = i >> (2 + addr) & 1 == 1;
            assert_eq!(f.bit(i), expect, "addr:2 at {i}");
        }
    }

    #[test]
    fn display_roundtrip() {
        for s in [
            "or:3",
            "tt:2:0110",
            "maj:5",
            "dict:4:2",
            "nandtree:2",
            "addr:2",
        ] {
            let spec = FuncSpec::parse(s).unwrap();
            assert_eq!(spec.to_string(), s);
            assert_eq!(FuncSpec::parse(&spec.to_string()).unwrap(), spec);
        }
    }
}
