//! Exact complexity measures of total Boolean functions.
//!
//! Everything here is exhaustive and exact: deterministic query complexity
//! by memoized minimax over restrictions, sensitivity and block
//! sensitivity from minimal sensitive blocks with a branch-and-bound
//! packing, certificate complexity by subset search, degree from the
//! polynomial transform, nondeterministic degree by rational nullspace
//! feasibility with an explicit witness, and approximate degree by an
//! exact-rational LP over the slack margin. No floating point touches a
//! feasibility or sign decision.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::cube::{subsets_by_size, var_list_key, Assignment, Block};
use crate::error::{Error, Result};
use crate::linalg::nullspace_basis;
use crate::lp::{maximize_free, LpOutcome};
use crate::poly::MultilinearPoly;
use crate::ratio::{fmt_ratio, rat_one};
use crate::table::TruthTable;
use crate::Rat;

/// Cap for the exhaustive measures (D, bs, C, ndeg).
pub const EXHAUSTIVE_CAP: u8 = 5;
/// Cap for approximate degree (LP with 2 * 2^n constraints).
pub const ADEG_CAP: u8 = 4;

fn check_cap(op: &'static str, n: u8, cap: u8) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded { op, n, cap })
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Deterministic query complexity
// ---------------------------------------------------------------------------

/// D(f): minimax recursion over variable fixings, memoized on the pair
/// (free-variable mask, restricted table bits) so isomorphic restrictions
/// reached along different query orders share work.
pub fn deterministic_complexity(f: &TruthTable) -> Result<u8> {
    check_cap("deterministic_complexity", f.n(), EXHAUSTIVE_CAP)?;
    let n = f.n();
    let packed = f.packed().expect("n <= 5 packs into u64");
    let mut memo: HashMap<(u32, u64), u8> = HashMap::new();
    Ok(minimax(f.full_mask(), n, packed, &mut memo))
}

fn minimax(free_mask: u32, m: u8, bits: u64, memo: &mut HashMap<(u32, u64), u8>) -> u8 {
    let size = 1u64 << (1 << m);
    let all = if size == 0 { u64::MAX } else { size - 1 };
    let table = bits & all;
    if table == 0 || table == all {
        return 0;
    }
    if let Some(&d) = memo.get(&(free_mask, table)) {
        return d;
    }
    let mut best = u8::MAX;
    for slot in 0..m {
        let var_bit = nth_set_bit(free_mask, slot);
        let lo = project_slot(table, m, slot, false);
        let hi = project_slot(table, m, slot, true);
        let sub_mask = free_mask & !var_bit;
        let d = 1 + minimax(sub_mask, m - 1, lo, memo).max(minimax(sub_mask, m - 1, hi, memo));
        if d < best {
            best = d;
        }
    }
    memo.insert((free_mask, table), best);
    best
}

fn nth_set_bit(mask: u32, k: u8) -> u32 {
    let mut m = mask;
    for _ in 0..k {
        m &= m - 1;
    }
    m & m.wrapping_neg()
}

/// Fix bit position `slot` of an m-variable packed table to `value`,
/// producing the packed table on m-1 variables.
fn project_slot(bits: u64, m: u8, slot: u8, value: bool) -> u64 {
    let mut out = 0u64;
    for i in 0..1u32 << (m - 1) {
        let low = i & ((1 << slot) - 1);
        let high = i >> slot;
        let idx = low | ((value as u32) << slot) | (high << (slot + 1));
        if bits >> idx & 1 == 1 {
            out |= 1 << i;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Sensitivity and block sensitivity
// ---------------------------------------------------------------------------

/// Number of single-bit flips changing f at x.
pub fn sensitivity_at(f: &TruthTable, x: &Assignment) -> u8 {
    let fx = f.bit(x.index());
    (0..f.n())
        .filter(|j| f.bit(x.index() ^ (1 << j)) != fx)
        .count() as u8
}

/// s(f) = max over inputs of the single-flip count.
pub fn sensitivity(f: &TruthTable) -> u8 {
    (0..1u32 << f.n())
        .map(|i| sensitivity_at(f, &Assignment::new(f.n(), i)))
        .max()
        .unwrap_or(0)
}

/// All minimal sensitive blocks of f at x.
#[derive(Clone, Debug)]
pub struct MinimalBlockSet {
    pub base: Assignment,
    pub blocks: Vec<Block>,
}

/// Enumerates candidate subsets in increasing size (lexicographic within a
/// size) and discards supersets of blocks already found: a sensitive set
/// with no smaller sensitive subset is exactly a minimal sensitive block.
pub fn minimal_sensitive_blocks(f: &TruthTable, x: &Assignment) -> Result<MinimalBlockSet> {
    check_cap("minimal_sensitive_blocks", f.n(), EXHAUSTIVE_CAP)?;
    if x.n() != f.n() {
        return Err(Error::ArityMismatch {
            expected: f.n(),
            got: x.n(),
        });
    }
    let fx = f.bit(x.index());
    let mut found: Vec<u32> = Vec::new();
    for mask in subsets_by_size(f.full_mask()) {
        if found.iter().any(|&b| b & !mask == 0) {
            continue; // contains a smaller sensitive block
        }
        if f.bit(x.index() ^ mask) != fx {
            found.push(mask);
        }
    }
    Ok(MinimalBlockSet {
        base: *x,
        blocks: found
            .into_iter()
            .map(|m| Block::new(m).expect("nonempty"))
            .collect(),
    })
}

/// bs_x(f): maximum disjoint packing of minimal sensitive blocks at x.
/// Every sensitive block contains a minimal one, so packing minimal blocks
/// attains the maximum over all sensitive blocks.
pub fn block_sensitivity_at(f: &TruthTable, x: &Assignment) -> Result<u8> {
    let set = minimal_sensitive_blocks(f, x)?;
    let masks: Vec<u32> = set.blocks.iter().map(|b| b.mask()).collect();
    let mut best = 0u8;
    pack(&masks, 0, &mut best);
    Ok(best)
}

/// Branch and bound: branch on the first remaining block (the enumeration
/// keeps size-then-lex order), bound by current + remaining count.
fn pack(blocks: &[u32], current: u8, best: &mut u8) {
    if current + blocks.len() as u8 <= *best {
        return;
    }
    let Some((&first, rest)) = blocks.split_first() else {
        if current > *best {
            *best = current;
        }
        return;
    };
    let disjoint: Vec<u32> = rest.iter().copied().filter(|&b| b & first == 0).collect();
    pack(&disjoint, current + 1, best);
    pack(rest, current, best);
}

pub fn block_sensitivity(f: &TruthTable) -> Result<u8> {
    check_cap("block_sensitivity", f.n(), EXHAUSTIVE_CAP)?;
    let mut best = 0;
    for i in 0..1u32 << f.n() {
        let bs = block_sensitivity_at(f, &Assignment::new(f.n(), i))?;
        if bs > best {
            best = bs;
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Certificate complexity
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertificateComplexity {
    pub c0: u8,
    pub c1: u8,
    pub c: u8,
}

/// Smallest certificate size at each input, maximized separately over
/// 0-inputs and 1-inputs. A constant function certifies with the empty set.
pub fn certificate_complexity(f: &TruthTable) -> Result<CertificateComplexity> {
    check_cap("certificate_complexity", f.n(), EXHAUSTIVE_CAP)?;
    let n = f.n();
    let mut c0 = 0u8;
    let mut c1 = 0u8;
    for i in 0..1u32 << n {
        let size = certificate_size_at(f, i);
        if f.bit(i) {
            c1 = c1.max(size);
        } else {
            c0 = c0.max(size);
        }
    }
    Ok(CertificateComplexity {
        c0,
        c1,
        c: c0.max(c1),
    })
}

fn certificate_size_at(f: &TruthTable, x: u32) -> u8 {
    if f.constant_value().is_some() {
        return 0;
    }
    let n = f.n();
    for mask in subsets_by_size(f.full_mask()) {
        if forces_constant(f, x, mask, n) {
            return mask.count_ones() as u8;
        }
    }
    n // the full assignment always certifies
}

fn forces_constant(f: &TruthTable, x: u32, fixed: u32, n: u8) -> bool {
    let value = f.bit(x);
    let free: Vec<u32> = (0..n as u32)
        .map(|j| 1u32 << j)
        .filter(|b| fixed & b == 0)
        .collect();
    let base = x & fixed;
    for combo in 0..1u32 << free.len() {
        let mut idx = base;
        for (k, bit) in free.iter().enumerate() {
            if combo >> k & 1 == 1 {
                idx |= bit;
            }
        }
        if f.bit(idx) != value {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Degrees
// ---------------------------------------------------------------------------

/// deg(f): degree of the multilinear representation.
pub fn degree(f: &TruthTable) -> u8 {
    f.to_polynomial().degree()
}

/// ndeg(f) together with a concrete witness polynomial p satisfying
/// p(x) = 0 exactly when f(x) = 0.
///
/// For each candidate degree d (ascending): the polynomials of degree <= d
/// vanishing on all 0-inputs form a rational vector space V_d, computed as
/// the nullspace of the monomial evaluation matrix. The representation is
/// feasible at degree d iff every 1-input has some basis element of V_d
/// that is nonzero there: each 1-input x cuts out a subspace
/// { p in V_d : p(x) = 0 }, and a finite-dimensional rational space is
/// never a finite union of proper subspaces.
pub fn ndeg_with_witness(f: &TruthTable) -> Result<(u8, MultilinearPoly)> {
    check_cap("nondeterministic_degree", f.n(), EXHAUSTIVE_CAP)?;
    let n = f.n();
    let zeros: Vec<u32> = (0..1u32 << n).filter(|&i| !f.bit(i)).collect();
    let ones: Vec<u32> = (0..1u32 << n).filter(|&i| f.bit(i)).collect();

    for d in 0..=n {
        let monos = monomials_up_to(n, d);
        let matrix: Vec<Vec<Rat>> = zeros
            .iter()
            .map(|&x| {
                monos
                    .iter()
                    .map(|&m| if m & x == m { rat_one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        let basis = nullspace_basis(matrix, monos.len());

        // basis element values at every 1-input
        let evals: Vec<Vec<Rat>> = basis
            .iter()
            .map(|v| {
                ones.iter()
                    .map(|&x| {
                        let mut acc = Rat::zero();
                        for (k, &m) in monos.iter().enumerate() {
                            if m & x == m {
                                acc += &v[k];
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();

        let feasible = (0..ones.len()).all(|oi| evals.iter().any(|ev| !ev[oi].is_zero()));
        if !feasible {
            continue;
        }

        let witness = combine_witness(n, &monos, &basis, &evals, ones.len());
        debug_assert_eq!(witness.degree(), d);
        for i in 0..1u32 << n {
            let v = witness.evaluate(&Assignment::new(n, i)).expect("same n");
            assert_eq!(
                v.is_zero(),
                !f.bit(i),
                "witness sign pattern broken at index {i}"
            );
        }
        return Ok((d, witness));
    }
    unreachable!("the exact polynomial of f is always a witness at d = n")
}

/// Greedy combination: walk the 1-inputs in order; whenever the running
/// combination vanishes at one, add an integer multiple of a basis element
/// nonzero there, picking the multiplier outside the finite set of values
/// that would kill an already-secured 1-input.
fn combine_witness(
    n: u8,
    monos: &[u32],
    basis: &[Vec<Rat>],
    evals: &[Vec<Rat>],
    num_ones: usize,
) -> MultilinearPoly {
    let mut coef = vec![Rat::zero(); monos.len()];
    let mut value = vec![Rat::zero(); num_ones];
    for oi in 0..num_ones {
        if !value[oi].is_zero() {
            continue;
        }
        let bi = (0..basis.len())
            .find(|&b| !evals[b][oi].is_zero())
            .expect("feasibility checked before combining");
        let mut t = 1i64;
        loop {
            let tr = Rat::from_integer(BigInt::from(t));
            let ok = (0..=oi).all(|oj| {
                let v = &value[oj] + &tr * &evals[bi][oj];
                !v.is_zero()
            });
            if ok {
                break;
            }
            t += 1;
        }
        let tr = Rat::from_integer(BigInt::from(t));
        for k in 0..coef.len() {
            let add = &tr * &basis[bi][k];
            coef[k] += add;
        }
        for oj in 0..num_ones {
            let add = &tr * &evals[bi][oj];
            value[oj] += add;
        }
    }
    MultilinearPoly::from_terms(
        n,
        monos
            .iter()
            .zip(coef)
            .filter(|(_, c)| !c.is_zero())
            .map(|(&m, c)| (m, c)),
    )
    .expect("monomial masks in range")
}

pub fn nondeterministic_degree(f: &TruthTable) -> Result<u8> {
    ndeg_with_witness(f).map(|(d, _)| d)
}

pub fn construct_ndeg_witness(f: &TruthTable) -> Result<MultilinearPoly> {
    ndeg_with_witness(f).map(|(_, w)| w)
}

fn monomials_up_to(n: u8, d: u8) -> Vec<u32> {
    let mut masks: Vec<u32> = (0..1u32 << n)
        .filter(|m| m.count_ones() <= d as u32)
        .collect();
    masks.sort_by_key(|&m| (m.count_ones(), var_list_key(m)));
    masks
}

/// Smallest d such that some degree-<=d polynomial is within epsilon of f
/// at every input (closed inequalities), decided by maximizing the slack
/// margin with the exact simplex: the system with margin delta has
/// p(x) - f(x) <= eps - delta and f(x) - p(x) <= eps - delta for all x,
/// and degree d suffices iff the optimal delta is >= 0.
pub fn approximate_degree(f: &TruthTable, epsilon: &Rat) -> Result<u8> {
    check_cap("approximate_degree", f.n(), ADEG_CAP)?;
    if !epsilon.is_positive() || *epsilon >= Rat::new(BigInt::from(1), BigInt::from(2)) {
        return Err(Error::EpsilonOutOfRange(fmt_ratio(epsilon)));
    }
    let n = f.n();
    for d in 0..=n {
        let monos = monomials_up_to(n, d);
        let nv = monos.len() + 1; // delta first, then the coefficients
        let mut objective = vec![Rat::zero(); nv];
        objective[0] = rat_one();
        let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(2 << n);
        let mut rhs: Vec<Rat> = Vec::with_capacity(2 << n);
        for x in 0..1u32 << n {
            let fx = if f.bit(x) { rat_one() } else { Rat::zero() };
            let mut up = vec![Rat::zero(); nv];
            let mut down = vec![Rat::zero(); nv];
            up[0] = rat_one();
            down[0] = rat_one();
            for (k, &m) in monos.iter().enumerate() {
                if m & x == m {
                    up[k + 1] = rat_one();
                    down[k + 1] = -rat_one();
                }
            }
            rows.push(up);
            rhs.push(&fx + epsilon);
            rows.push(down);
            rhs.push(epsilon - &fx);
        }
        match maximize_free(&objective, &rows, &rhs) {
            LpOutcome::Optimal { value, .. } => {
                if !value.is_negative() {
                    return Ok(d);
                }
            }
            // delta = -1 with the zero polynomial satisfies every row, and
            // adding the two rows of any x gives delta <= eps
            other => unreachable!("margin LP is feasible and bounded, got {other:?}"),
        }
    }
    unreachable!("the exact polynomial approximates f at d = n")
}

// ---------------------------------------------------------------------------
// Aggregate report
// ---------------------------------------------------------------------------

/// All measures of one function. Construction checks the provable
/// orderings (s <= bs <= d <= n, adeg <= deg, ndeg <= deg <= d).
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureReport {
    pub spec: String,
    pub n: u8,
    pub d: u8,
    pub s: u8,
    pub bs: u8,
    pub c0: u8,
    pub c1: u8,
    pub c: u8,
    pub deg: u8,
    pub ndeg: u8,
    pub adeg: u8,
    pub epsilon: Rat,
}

pub fn measure_report(f: &TruthTable, spec: &str, epsilon: &Rat) -> Result<MeasureReport> {
    let d = deterministic_complexity(f)?;
    let s = sensitivity(f);
    let bs = block_sensitivity(f)?;
    let cert = certificate_complexity(f)?;
    let deg = degree(f);
    let ndeg = nondeterministic_degree(f)?;
    let adeg = approximate_degree(f, epsilon)?;
    let report = MeasureReport {
        spec: spec.to_string(),
        n: f.n(),
        d,
        s,
        bs,
        c0: cert.c0,
        c1: cert.c1,
        c: cert.c,
        deg,
        ndeg,
        adeg,
        epsilon: epsilon.clone(),
    };
    assert!(report.s <= report.bs, "{spec}: s > bs");
    assert!(report.bs <= report.d, "{spec}: bs > D");
    assert!(report.d <= report.n, "{spec}: D > n");
    assert!(report.deg <= report.d, "{spec}: deg > D");
    assert!(report.ndeg <= report.deg, "{spec}: ndeg > deg");
    assert!(report.adeg <= report.deg, "{spec}: adeg > deg");
    Ok(report)
}

impl MeasureReport {
    pub fn to_json(&self) -> Value {
        json!({
            "spec": self.spec,
            "n": self.n,
            "d": self.d,
            "s": self.s,
            "bs": self.bs,
            "c0": self.c0,
            "c1": self.c1,
            "c": self.c,
            "deg": self.deg,
            "ndeg": self.ndeg,
            "adeg": self.adeg,
            "epsilon": fmt_ratio(&self.epsilon),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::PartialAssignment;
    use crate::ratio::rat_frac;
    use crate::spec::parse_spec;

    /// Plain minimax with no memoization, kept deliberately independent of
    /// the production recursion; used to freeze the derived D values.
    fn naive_d(f: &TruthTable) -> u8 {
        if f.constant_value().is_some() {
            return 0;
        }
        let mut best = u8::MAX;
        for v in 1..=f.n() {
            let mut worst = 0;
            for value in [false, true] {
                let a = PartialAssignment::from_pairs(f.n(), &[(v, value)]).unwrap();
                worst = worst.max(naive_d(&f.restrict(&a).unwrap()));
            }
            best = best.min(1 + worst);
        }
        best
    }

    #[test]
    fn deterministic_complexity_matches_naive_oracle() {
        for spec in [
            "or:3",
            "and:3",
            "parity:3",
            "maj:3",
            "dict:3:2",
            "nandtree:1",
        ] {
            let f = parse_spec(spec).unwrap();
            assert_eq!(deterministic_complexity(&f).unwrap(), naive_d(&f), "{spec}");
        }
        for word in 0..256u64 {
            let f = TruthTable::from_packed(3, word).unwrap();
            assert_eq!(deterministic_complexity(&f).unwrap(), naive_d(&f), "{word}");
        }
    }

    #[test]
    fn deterministic_complexity_frozen_values() {
        assert_eq!(
            deterministic_complexity(&TruthTable::constant(3, true)).unwrap(),
            0
        );
        assert_eq!(
            deterministic_complexity(&parse_spec("dict:3:2").unwrap()).unwrap(),
            1
        );
        // frozen from naive_d: the adversary keeps answering 0
        assert_eq!(
            deterministic_complexity(&parse_spec("or:4").unwrap()).unwrap(),
            4
        );
        assert_eq!(naive_d(&parse_spec("or:4").unwrap()), 4);
        assert!(deterministic_complexity(&parse_spec("or:6").unwrap()).is_err());
    }

    #[test]
    fn sensitivity_values() {
        let or3 = parse_spec("or:3").unwrap();
        assert_eq!(sensitivity_at(&or3, &Assignment::parse("000").unwrap()), 3);
        assert_eq!(sensitivity(&or3), 3);
        assert_eq!(sensitivity(&parse_spec("maj:3").unwrap()), 2);
        assert_eq!(sensitivity(&TruthTable::constant(4, false)), 0);
    }

    #[test]
    fn minimal_blocks_or3_parity2_maj3() {
        let or3 = parse_spec("or:3").unwrap();
        let set = minimal_sensitive_blocks(&or3, &Assignment::parse("000").unwrap()).unwrap();
        let masks: Vec<u32> = set.blocks.iter().map(|b| b.mask()).collect();
        assert_eq!(masks, vec![0b001, 0b010, 0b100]);

        let par2 = parse_spec("parity:2").unwrap();
        let set = minimal_sensitive_blocks(&par2, &Assignment::parse("00").unwrap()).unwrap();
        let masks: Vec<u32> = set.blocks.iter().map(|b| b.mask()).collect();
        assert_eq!(masks, vec![0b01, 0b10], "the pair {{1,2}} is not sensitive");

        let maj3 = parse_spec("maj:3").unwrap();
        let set = minimal_sensitive_blocks(&maj3, &Assignment::parse("110").unwrap()).unwrap();
        let masks: Vec<u32> = set.blocks.iter().map(|b| b.mask()).collect();
        assert_eq!(masks, vec![0b001, 0b010], "flipping x3 keeps the value");
    }

    /// Exhaustive packing over all sensitive blocks (not only minimal),
    /// as an independent oracle for bs.
    fn naive_bs_at(f: &TruthTable, x: u32) -> u8 {
        let fx = f.bit(x);
        let sensitive: Vec<u32> = (1..1u32 << f.n()).filter(|&b| f.bit(x ^ b) != fx).collect();
        fn go(blocks: &[u32], used: u32) -> u8 {
            let mut best = 0;
            for (i, &b) in blocks.iter().enumerate() {
                if b & used == 0 {
                    best = best.max(1 + go(&blocks[i + 1..], used | b));
                }
            }
            best
        }
        go(&sensitive, 0)
    }

    #[test]
    fn block_sensitivity_matches_naive_oracle() {
        for word in 0..256u64 {
            let f = TruthTable::from_packed(3, word).unwrap();
            for x in 0..8u32 {
                assert_eq!(
                    block_sensitivity_at(&f, &Assignment::new(3, x)).unwrap(),
                    naive_bs_at(&f, x),
                    "word {word} at {x}"
                );
            }
        }
    }

    #[test]
    fn block_sensitivity_frozen_values() {
        assert_eq!(block_sensitivity(&parse_spec("or:3").unwrap()).unwrap(), 3);
        assert_eq!(block_sensitivity(&parse_spec("maj:3").unwrap()).unwrap(), 2);
        assert_eq!(
            block_sensitivity(&TruthTable::constant(3, true)).unwrap(),
            0
        );
    }

    #[test]
    fn certificate_values() {
        let or3 = certificate_complexity(&parse_spec("or:3").unwrap()).unwrap();
        assert_eq!((or3.c0, or3.c1, or3.c), (3, 1, 3));
        let par3 = certificate_complexity(&parse_spec("parity:3").unwrap()).unwrap();
        assert_eq!((par3.c0, par3.c1), (3, 3));
        let maj3 = certificate_complexity(&parse_spec("maj:3").unwrap()).unwrap();
        assert_eq!((maj3.c0, maj3.c1), (2, 2));
        let konst = certificate_complexity(&TruthTable::constant(3, false)).unwrap();
        assert_eq!((konst.c0, konst.c1, konst.c), (0, 0, 0));
    }

    #[test]
    fn degree_values() {
        assert_eq!(degree(&parse_spec("or:3").unwrap()), 3);
        assert_eq!(degree(&parse_spec("parity:4").unwrap()), 4);
        assert_eq!(degree(&parse_spec("dict:5:1").unwrap()), 1);
        assert_eq!(degree(&TruthTable::constant(3, true)), 0);
    }

    #[test]
    fn ndeg_constant_zero_gets_zero_witness() {
        let (d, w) = ndeg_with_witness(&TruthTable::constant(3, false)).unwrap();
        assert_eq!(d, 0);
        assert!(w.is_zero());
        let (d1, w1) = ndeg_with_witness(&TruthTable::constant(3, true)).unwrap();
        assert_eq!(d1, 0);
        assert_eq!(w1.degree(), 0);
        assert!(!w1.is_zero());
    }

    #[test]
    fn ndeg_or3_is_linear() {
        let (d, w) = ndeg_with_witness(&parse_spec("or:3").unwrap()).unwrap();
        assert_eq!(d, 1);
        // the greedy combination lands exactly on x1 + x2 + x3
        let expected = MultilinearPoly::from_terms(
            3,
            [
                (0b001u32, rat_one()),
                (0b010, rat_one()),
                (0b100, rat_one()),
            ],
        )
        .unwrap();
        assert_eq!(w, expected);
    }

    #[test]
    fn ndeg_parity3_is_two() {
        // w(w-2) = 2*sum_{i<j} xi xj - sum_i xi vanishes exactly on even
        // weights, so degree 2 suffices; no linear polynomial has the even
        // weight points as its exact zero set (forcing c0 = 0 on 000 and
        // pairwise-sum cancellations kills every coefficient).
        let f = parse_spec("parity:3").unwrap();
        let (d, w) = ndeg_with_witness(&f).unwrap();
        assert_eq!(d, 2);
        for i in 0..8u32 {
            let v = w.evaluate(&Assignment::new(3, i)).unwrap();
            assert_eq!(v.is_zero(), !f.bit(i));
        }
    }

    #[test]
    fn ndeg_witness_sound_for_all_n3() {
        for word in 0..256u64 {
            let f = TruthTable::from_packed(3, word).unwrap();
            let (_, w) = ndeg_with_witness(&f).unwrap();
            for i in 0..8u32 {
                let v = w.evaluate(&Assignment::new(3, i)).unwrap();
                assert_eq!(v.is_zero(), !f.bit(i), "word {word} at {i}");
            }
        }
    }

    #[test]
    fn adeg_values() {
        let third = rat_frac(1, 3);
        assert_eq!(
            approximate_degree(&TruthTable::constant(3, true), &third).unwrap(),
            0
        );
        assert_eq!(
            approximate_degree(&parse_spec("dict:3:1").unwrap(), &third).unwrap(),
            1
        );
        // independent witness for d = 1: p = 1/3 + x1/3 + x2/3 deviates by
        // at most 1/3 everywhere; d = 0 needs c in [2/3,4/3] and [-1/3,1/3]
        // at once, which is empty
        let or2 = parse_spec("or:2").unwrap();
        let p = MultilinearPoly::from_terms(
            2,
            [
                (0u32, rat_frac(1, 3)),
                (0b01, rat_frac(1, 3)),
                (0b10, rat_frac(1, 3)),
            ],
        )
        .unwrap();
        for i in 0..4u32 {
            let x = Assignment::new(2, i);
            let fx = if or2.bit(i) { rat_one() } else { Rat::zero() };
            let dev = p.evaluate(&x).unwrap() - fx;
            assert!(dev.abs() <= third);
        }
        assert_eq!(approximate_degree(&or2, &third).unwrap(), 1);
        // epsilon validation
        assert!(approximate_degree(&or2, &rat_frac(1, 2)).is_err());
        assert!(approximate_degree(&or2, &rat_frac(0, 1)).is_err());
        assert!(approximate_degree(&parse_spec("or:5").unwrap(), &third).is_err());
    }

    #[test]
    fn adeg_parity_needs_full_degree() {
        let third = rat_frac(1, 3);
        assert_eq!(
            approximate_degree(&parse_spec("parity:2").unwrap(), &third).unwrap(),
            2
        );
        assert_eq!(
            approximate_degree(&parse_spec("parity:3").unwrap(), &third).unwrap(),
            3
        );
    }

    #[test]
    fn report_or3() {
        let f = parse_spec("or:3").unwrap();
        let r = measure_report(&f, "or:3", &rat_frac(1, 3)).unwrap();
        assert_eq!(
            (r.d, r.s, r.bs, r.c0, r.c1, r.deg, r.ndeg),
            (3, 3, 3, 3, 1, 3, 1)
        );
        let v = r.to_json();
        assert_eq!(v["spec"], "or:3");
        assert_eq!(v["epsilon"], "1/3");
        assert_eq!(v["d"], 3);
    }

    #[test]
    fn report_parity3() {
        let f = parse_spec("parity:3").unwrap();
        let r = measure_report(&f, "parity:3", &rat_frac(1, 3)).unwrap();
        assert_eq!(
            (r.d, r.s, r.bs, r.c0, r.c1, r.deg, r.ndeg, r.adeg),
            (3, 3, 3, 3, 3, 3, 2, 3)
        );
    }

    #[test]
    fn report_constant_zero() {
        let f = TruthTable::constant(3, false);
        let r = measure_report(&f, "tt:3:00000000", &rat_frac(1, 3)).unwrap();
        assert_eq!(
            (r.d, r.s, r.bs, r.c0, r.c1, r.c, r.deg, r.ndeg, r.adeg),
            (0, 0, 0, 0, 0, 0, 0, 0, 0)
        );
    }
}
