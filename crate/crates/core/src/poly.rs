//! Multilinear polynomials with exact rational coefficients.
//!
//! A polynomial over x1..xn is a map from variable subsets (bitmask, bit
//! j-1 = xj) to nonzero rational coefficients. Restriction substitutes 0/1
//! values but keeps the original variable labels, so traces stay readable
//! in the coordinates of the unrestricted function; `project_free`
//! renumbers onto the free variables when a standalone polynomial is
//! wanted.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::cube::{mask_n, var_list_key, Assignment, Block, PartialAssignment};
use crate::error::{Error, Result};
use crate::ratio::fmt_ratio;
use crate::Rat;

#[derive(Clone, PartialEq, Eq)]
pub struct MultilinearPoly {
    n: u8,
    terms: BTreeMap<u32, Rat>,
}

impl MultilinearPoly {
    pub fn zero(n: u8) -> Self {
        MultilinearPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: u8, value: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(0, value);
        }
        MultilinearPoly { n, terms }
    }

    /// Build from (subset mask, coefficient) pairs; zero coefficients are
    /// dropped, repeated masks are summed.
    pub fn from_terms(n: u8, terms: impl IntoIterator<Item = (u32, Rat)>) -> Result<Self> {
        let mut map: BTreeMap<u32, Rat> = BTreeMap::new();
        for (mask, coef) in terms {
            if mask & !mask_n(n) != 0 {
                let var = 32 - (mask & !mask_n(n)).leading_zeros() as u8;
                return Err(Error::VarOutOfRange { var, n });
            }
            let entry = map.entry(mask).or_insert_with(Rat::zero);
            *entry += coef;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(MultilinearPoly { n, terms: map })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rat)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn coefficient(&self, mask: u32) -> Rat {
        self.terms.get(&mask).cloned().unwrap_or_else(Rat::zero)
    }

    /// Degree = max subset size among present terms; 0 for the zero
    /// polynomial by convention.
    pub fn degree(&self) -> u8 {
        self.terms
            .keys()
            .map(|m| m.count_ones() as u8)
            .max()
            .unwrap_or(0)
    }

    /// Some(c) when the polynomial is the constant c (the zero polynomial
    /// is the constant 0).
    pub fn constant_value(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// Sum of coefficients over subsets contained in the support of x.
    pub fn evaluate(&self, x: &Assignment) -> Result<Rat> {
        if x.n() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: x.n(),
            });
        }
        let support = x.index();
        let mut acc = Rat::zero();
        for (&mask, coef) in &self.terms {
            if mask & support == mask {
                acc += coef;
            }
        }
        Ok(acc)
    }

    /// Substitute the fixed values of `a`. Variable labels are preserved;
    /// fixed variables simply stop appearing. Degree never increases.
    pub fn restrict(&self, a: &PartialAssignment) -> Result<MultilinearPoly> {
        if a.n() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: a.n(),
            });
        }
        let fixed = a.fixed_mask();
        let ones = a.values_mask();
        let mut map: BTreeMap<u32, Rat> = BTreeMap::new();
        for (&mask, coef) in &self.terms {
            let overlap = mask & fixed;
            // a fixed zero kills the term, fixed ones drop out of it
            if overlap & ones != overlap {
                continue;
            }
            let rest = mask & !fixed;
            let entry = map.entry(rest).or_insert_with(Rat::zero);
            *entry += coef;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(MultilinearPoly {
            n: self.n,
            terms: map,
        })
    }

    /// Renumber onto the free variables of `a` (k-th free variable becomes
    /// x_k). Every term must already avoid the fixed variables, i.e. call
    /// this on the output of [`restrict`](Self::restrict).
    pub fn project_free(&self, a: &PartialAssignment) -> Result<MultilinearPoly> {
        if a.n() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: a.n(),
            });
        }
        let free = a.free_vars();
        let m = free.len() as u8;
        let mut slot_of = [0u8; 33];
        for (k, &v) in free.iter().enumerate() {
            slot_of[v as usize] = k as u8 + 1;
        }
        let mut map = BTreeMap::new();
        for (&mask, coef) in &self.terms {
            if mask & a.fixed_mask() != 0 {
                return Err(Error::BadAssignment(
                    "polynomial still mentions a fixed variable".into(),
                ));
            }
            let mut new_mask = 0u32;
            for v in 1..=self.n {
                if mask >> (v - 1) & 1 == 1 {
                    new_mask |= 1 << (slot_of[v as usize] - 1);
                }
            }
            map.insert(new_mask, coef.clone());
        }
        Ok(MultilinearPoly { n: m, terms: map })
    }

    /// Masks of all terms of maximal degree (empty only for the zero
    /// polynomial).
    pub fn max_degree_masks(&self) -> Vec<u32> {
        let d = self.degree();
        self.terms
            .keys()
            .copied()
            .filter(|m| m.count_ones() as u8 == d)
            .collect()
    }

    /// Maxonomials as blocks, skipping the constant term.
    pub fn maxonomials(&self) -> Vec<Block> {
        self.max_degree_masks()
            .into_iter()
            .filter_map(|m| Block::new(m).ok())
            .collect()
    }

    /// Terms in canonical order: by degree, then lexicographic on the
    /// sorted variable list.
    pub fn canonical_terms(&self) -> Vec<(Vec<u8>, Rat)> {
        let mut out: Vec<(Vec<u8>, Rat)> = self
            .terms
            .iter()
            .map(|(&m, c)| {
                let vars = if m == 0 { Vec::new() } else { var_list_key(m) };
                (vars, c.clone())
            })
            .collect();
        out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        out
    }

    /// Serialization: a list of {vars, coef} records in canonical order,
    /// coefficients as "p/q" strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.canonical_terms()
                .into_iter()
                .map(|(vars, coef)| {
                    json!({
                        "vars": vars,
                        "coef": fmt_ratio(&coef),
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for MultilinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (vars, coef)) in self.canonical_terms().into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if vars.is_empty() {
                write!(f, "{coef}")?;
            } else {
                write!(f, "({coef})")?;
                for v in vars {
                    write!(f, "*x{v}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultilinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultilinearPoly[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rat_int;
    use crate::spec::parse_spec;

    fn poly_of(spec: &str) -> MultilinearPoly {
        parse_spec(spec).unwrap().to_polynomial()
    }

    #[test]
    fn or3_polynomial_is_inclusion_exclusion() {
        // x1 + x2 + x3 - x1x2 - x1x3 - x2x3 + x1x2x3
        let p = poly_of("or:3");
        assert_eq!(p.coefficient(0b001), rat_int(1));
        assert_eq!(p.coefficient(0b010), rat_int(1));
        assert_eq!(p.coefficient(0b100), rat_int(1));
        assert_eq!(p.coefficient(0b011), rat_int(-1));
        assert_eq!(p.coefficient(0b101), rat_int(-1));
        assert_eq!(p.coefficient(0b110), rat_int(-1));
        assert_eq!(p.coefficient(0b111), rat_int(1));
        assert_eq!(p.coefficient(0), rat_int(0));
        assert_eq!(p.term_count(), 7);
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn constant_and_parity_polynomials() {
        let zero = TruthTableZero::table();
        assert!(zero.to_polynomial().is_zero());
        assert_eq!(zero.to_polynomial().degree(), 0);

        // x1 + x2 - 2 x1x2
        let p = poly_of("parity:2");
        assert_eq!(p.coefficient(0b01), rat_int(1));
        assert_eq!(p.coefficient(0b10), rat_int(1));
        assert_eq!(p.coefficient(0b11), rat_int(-2));
        assert_eq!(p.term_count(), 3);
    }

    struct TruthTableZero;
    impl TruthTableZero {
        fn table() -> crate::TruthTable {
            crate::TruthTable::constant(3, false)
        }
    }

    #[test]
    fn evaluation_matches_table() {
        let f = parse_spec("or:3").unwrap();
        let p = f.to_polynomial();
        let x = Assignment::parse("110").unwrap();
        assert_eq!(p.evaluate(&x).unwrap(), rat_int(1));
        let empty = MultilinearPoly::zero(3);
        assert_eq!(empty.evaluate(&x).unwrap(), rat_int(0));
        // x1+x2+x3 at 101 -> 2
        let lin = MultilinearPoly::from_terms(
            3,
            [
                (0b001u32, rat_int(1)),
                (0b010, rat_int(1)),
                (0b100, rat_int(1)),
            ],
        )
        .unwrap();
        assert_eq!(
            lin.evaluate(&Assignment::parse("101").unwrap()).unwrap(),
            rat_int(2)
        );
    }

    #[test]
    fn restriction_examples() {
        let lin = MultilinearPoly::from_terms(
            3,
            [
                (0b001u32, rat_int(1)),
                (0b010, rat_int(1)),
                (0b100, rat_int(1)),
            ],
        )
        .unwrap();
        let a = PartialAssignment::from_pairs(3, &[(1, false)]).unwrap();
        let r = lin.restrict(&a).unwrap();
        assert_eq!(r.coefficient(0b010), rat_int(1));
        assert_eq!(r.coefficient(0b100), rat_int(1));
        assert_eq!(r.term_count(), 2);

        let prod = MultilinearPoly::from_terms(2, [(0b11u32, rat_int(1))]).unwrap();
        let fix1 = PartialAssignment::from_pairs(2, &[(1, true)]).unwrap();
        let r1 = prod.restrict(&fix1).unwrap();
        assert_eq!(r1.coefficient(0b10), rat_int(1));
        assert_eq!(r1.term_count(), 1);

        let fix2 = PartialAssignment::from_pairs(2, &[(2, false)]).unwrap();
        let r2 = prod.restrict(&fix2).unwrap();
        assert!(r2.is_zero());
    }

    #[test]
    fn project_renumbers_in_order() {
        // x2*x3 with x1 fixed: free vars 2,3 become 1,2
        let p = MultilinearPoly::from_terms(3, [(0b110u32, rat_int(5))]).unwrap();
        let a = PartialAssignment::from_pairs(3, &[(1, true)]).unwrap();
        let q = p.project_free(&a).unwrap();
        assert_eq!(q.n(), 2);
        assert_eq!(q.coefficient(0b11), rat_int(5));
    }

    #[test]
    fn canonical_order_is_degree_then_lex() {
        let p = MultilinearPoly::from_terms(
            4,
            [
                (0b1001u32, rat_int(1)), // {1,4}
                (0b0110, rat_int(1)),    // {2,3}
                (0b0001, rat_int(1)),    // {1}
                (0, rat_int(7)),
            ],
        )
        .unwrap();
        let order: Vec<Vec<u8>> = p.canonical_terms().into_iter().map(|(v, _)| v).collect();
        assert_eq!(
            order,
            vec![vec![], vec![1], vec![1, 4], vec![2, 3]],
            "{{1,4}} sorts before {{2,3}} in list-lex order"
        );
    }

    #[test]
    fn json_shape() {
        let p = poly_of("parity:2");
        let v = p.to_json();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 3);
        assert_eq!(arr[0]["vars"], serde_json::json!([1]));
        assert_eq!(arr[0]["coef"], "1/1");
        assert_eq!(arr[2]["vars"], serde_json::json!([1, 2]));
        assert_eq!(arr[2]["coef"], "-2/1");
    }
}
