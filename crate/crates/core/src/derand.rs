//! Deterministic evaluation through maxonomial queries.
//!
//! Given a nondeterministic witness polynomial q for f (q(x) = 0 exactly
//! when f(x) = 0) and a bound on the block sensitivity, the evaluator
//! repeats at most bs+1 times: if the running polynomial is constant,
//! answer its sign (1 for any nonzero constant); otherwise query every
//! variable of its first maxonomial and substitute the answers. A loop
//! that exhausts all iterations answers 1 — on a 0-input each substitution
//! lowers the block sensitivity at the input, so the polynomial collapses
//! to a constant before the iterations run out.
//!
//! `extract_tree` unrolls the same strategy over both answers of every
//! query into a decision tree, giving a constructive depth bound of
//! (bs+1) * deg(q).

use std::collections::HashMap;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::cube::{subsets_by_size, var_list_key, Assignment, Block, PartialAssignment};
use crate::error::{Error, Result};
use crate::measures::{block_sensitivity, ndeg_with_witness};
use crate::poly::MultilinearPoly;
use crate::table::TruthTable;

/// A deterministic query strategy: internal nodes read one variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisionTree {
    Leaf(bool),
    Query {
        var: u8,
        on_zero: Box<DecisionTree>,
        on_one: Box<DecisionTree>,
    },
}

impl DecisionTree {
    pub fn evaluate(&self, x: &Assignment) -> Result<bool> {
        match self {
            DecisionTree::Leaf(b) => Ok(*b),
            DecisionTree::Query {
                var,
                on_zero,
                on_one,
            } => {
                if x.get(*var)? {
                    on_one.evaluate(x)
                } else {
                    on_zero.evaluate(x)
                }
            }
        }
    }

    pub fn depth(&self) -> u32 {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Query {
                on_zero, on_one, ..
            } => 1 + on_zero.depth().max(on_one.depth()),
        }
    }

    /// Negate every leaf; the result computes the complement function and
    /// has the same shape.
    pub fn flip_leaves(&self) -> DecisionTree {
        match self {
            DecisionTree::Leaf(b) => DecisionTree::Leaf(!b),
            DecisionTree::Query {
                var,
                on_zero,
                on_one,
            } => DecisionTree::Query {
                var: *var,
                on_zero: Box::new(on_zero.flip_leaves()),
                on_one: Box::new(on_one.flip_leaves()),
            },
        }
    }

    /// Number of variables read on the path that input x follows.
    pub fn path_len(&self, x: &Assignment) -> Result<u32> {
        match self {
            DecisionTree::Leaf(_) => Ok(0),
            DecisionTree::Query {
                var,
                on_zero,
                on_one,
            } => {
                let sub = if x.get(*var)? { on_one } else { on_zero };
                Ok(1 + sub.path_len(x)?)
            }
        }
    }

    /// Variables on the path that x follows, with the values read.
    pub fn path_queries(&self, x: &Assignment) -> Result<Vec<(u8, bool)>> {
        let mut out = Vec::new();
        let mut node = self;
        loop {
            match node {
                DecisionTree::Leaf(_) => return Ok(out),
                DecisionTree::Query {
                    var,
                    on_zero,
                    on_one,
                } => {
                    let v = x.get(*var)?;
                    out.push((*var, v));
                    node = if v { on_one } else { on_zero };
                }
            }
        }
    }

    /// {"q": var, "0": .., "1": ..} for queries, {"leaf": 0|1} for leaves.
    pub fn to_json(&self) -> Value {
        match self {
            DecisionTree::Leaf(b) => json!({ "leaf": *b as u8 }),
            DecisionTree::Query {
                var,
                on_zero,
                on_one,
            } => json!({
                "q": var,
                "0": on_zero.to_json(),
                "1": on_one.to_json(),
            }),
        }
    }

    /// Does the tree compute f on every input?
    pub fn agrees_with(&self, f: &TruthTable) -> bool {
        f.all_inputs()
            .all(|x| self.evaluate(&x).ok() == f.evaluate(&x).ok())
    }
}

/// Among terms of maximal degree, the lexicographically smallest variable
/// set (sorted index lists compared elementwise) — the fixed order that
/// makes "pick a maxonomial" deterministic.
pub fn first_maxonomial(p: &MultilinearPoly) -> Result<Block> {
    let masks = p.max_degree_masks();
    masks
        .into_iter()
        .filter(|&m| m != 0)
        .min_by_key(|&m| var_list_key(m))
        .map(|m| Block::new(m).expect("nonzero mask"))
        .ok_or(Error::ConstantPolynomial)
}

/// One maxonomial round: the variables read and their values, plus the
/// polynomial degree after substitution.
#[derive(Clone, Debug)]
pub struct DerandStep {
    pub maxonomial: Block,
    /// Values in increasing variable order of the maxonomial.
    pub values: Vec<bool>,
    pub degree_after: u8,
}

#[derive(Clone, Debug)]
pub struct DerandTrace {
    pub steps: Vec<DerandStep>,
    pub outcome: bool,
    pub query_count: u32,
}

/// Evaluate f at the input behind `oracle` using witness q. The loop body
/// runs at most bs_bound+1 times and each round reads deg(q) variables at
/// most, so query_count <= (bs_bound+1) * deg(q).
pub fn value_f(
    q: &MultilinearPoly,
    bs_bound: u8,
    mut oracle: impl FnMut(u8) -> bool,
) -> (bool, DerandTrace) {
    let mut p = q.clone();
    let mut steps = Vec::new();
    let mut query_count = 0u32;
    let mut fixed = PartialAssignment::empty(q.n());
    for _ in 0..=(bs_bound as u32) {
        if let Some(c) = p.constant_value() {
            return (
                !c.is_zero(),
                DerandTrace {
                    steps,
                    outcome: !c.is_zero(),
                    query_count,
                },
            );
        }
        let m = first_maxonomial(&p).expect("nonconstant polynomial");
        let mut round = PartialAssignment::empty(q.n());
        let mut values = Vec::with_capacity(m.len() as usize);
        for v in m.vars() {
            assert!(
                !fixed.is_fixed(v),
                "substitution removed x{v}; a later maxonomial cannot contain it"
            );
            let bit = oracle(v);
            values.push(bit);
            round.fix(v, bit).expect("fresh variable");
            fixed.fix(v, bit).expect("fresh variable");
            query_count += 1;
        }
        p = p.restrict(&round).expect("same n");
        steps.push(DerandStep {
            maxonomial: m,
            values,
            degree_after: p.degree(),
        });
    }
    // exhausting the loop is possible only when the input is a 1-instance
    (
        true,
        DerandTrace {
            steps,
            outcome: true,
            query_count,
        },
    )
}

/// Run [`value_f`] against a concrete input.
pub fn value_on(q: &MultilinearPoly, bs_bound: u8, x: &Assignment) -> Result<(bool, DerandTrace)> {
    if x.n() != q.n() {
        return Err(Error::ArityMismatch {
            expected: q.n(),
            got: x.n(),
        });
    }
    let idx = x.index();
    Ok(value_f(q, bs_bound, |v| idx >> (v - 1) & 1 == 1))
}

/// Unroll the strategy into a full decision tree by exploring both oracle
/// answers at every query. Identical restrictions reached along different
/// paths share subtrees through a memo keyed on (fixed variables, values,
/// iterations left).
pub fn extract_tree(q: &MultilinearPoly, bs_bound: u8) -> DecisionTree {
    let mut memo: HashMap<(u32, u32, u8), DecisionTree> = HashMap::new();
    build(
        q,
        &q.clone(),
        bs_bound + 1,
        PartialAssignment::empty(q.n()),
        &mut memo,
    )
}

fn build(
    q: &MultilinearPoly,
    p: &MultilinearPoly,
    iters_left: u8,
    fixed: PartialAssignment,
    memo: &mut HashMap<(u32, u32, u8), DecisionTree>,
) -> DecisionTree {
    if let Some(c) = p.constant_value() {
        return DecisionTree::Leaf(!c.is_zero());
    }
    if iters_left == 0 {
        return DecisionTree::Leaf(true);
    }
    let key = (fixed.fixed_mask(), fixed.values_mask(), iters_left);
    if let Some(t) = memo.get(&key) {
        return t.clone();
    }
    let m = first_maxonomial(p).expect("nonconstant polynomial");
    let vars = m.vars();
    for &v in &vars {
        assert!(!fixed.is_fixed(v), "maxonomial reuses fixed x{v}");
    }
    let tree = chain(q, p, iters_left, &fixed, &vars, 0, 0, memo);
    memo.insert(key, tree.clone());
    tree
}

#[allow(clippy::too_many_arguments)]
fn chain(
    q: &MultilinearPoly,
    p: &MultilinearPoly,
    iters_left: u8,
    fixed: &PartialAssignment,
    vars: &[u8],
    i: usize,
    chosen: u32, // bit k = value chosen for vars[k]
    memo: &mut HashMap<(u32, u32, u8), DecisionTree>,
) -> DecisionTree {
    if i == vars.len() {
        let mut round = PartialAssignment::empty(q.n());
        let mut next_fixed = *fixed;
        for (k, &v) in vars.iter().enumerate() {
            let bit = chosen >> k & 1 == 1;
            round.fix(v, bit).expect("fresh variable");
            next_fixed.fix(v, bit).expect("fresh variable");
        }
        let restricted = p.restrict(&round).expect("same n");
        return build(q, &restricted, iters_left - 1, next_fixed, memo);
    }
    DecisionTree::Query {
        var: vars[i],
        on_zero: Box::new(chain(q, p, iters_left, fixed, vars, i + 1, chosen, memo)),
        on_one: Box::new(chain(
            q,
            p,
            iters_left,
            fixed,
            vars,
            i + 1,
            chosen | (1 << i),
            memo,
        )),
    }
}

/// Find a subset B of the maxonomial M with f(w^B) = 1, where w is a
/// 0-input. Existence is guaranteed for any valid witness: restricting q
/// to M by w leaves M's coefficient intact (no larger term can fold onto
/// it), so the restricted polynomial is nonzero somewhere on the subcube.
pub fn maxonomial_block_witness(
    q: &MultilinearPoly,
    f: &TruthTable,
    w: &Assignment,
    m: &Block,
) -> Result<Block> {
    if f.evaluate(w)? {
        return Err(Error::BadAssignment(format!("{w} is not a 0-instance")));
    }
    debug_assert!(q.max_degree_masks().contains(&m.mask()), "not a maxonomial");
    for sub in subsets_by_size(m.mask()) {
        let b = Block::new(sub).expect("nonempty");
        if f.evaluate(&w.flip_block(&b)?)? {
            return Ok(b);
        }
    }
    Err(Error::MaxonomialWitnessMissing {
        input: w.to_string(),
    })
}

/// Build trees from minimum-degree witnesses of f and of its complement
/// (flipping the complement side's leaves) and keep the shallower; ties go
/// to the direct side.
pub fn derandomize_either_side(f: &TruthTable) -> Result<DecisionTree> {
    if let Some(c) = f.constant_value() {
        return Ok(DecisionTree::Leaf(c));
    }
    let bs = block_sensitivity(f)?;
    let (_, q_direct) = ndeg_with_witness(f)?;
    let direct = extract_tree(&q_direct, bs);
    let g = f.complement();
    // block sensitivity is invariant under output complement
    let (_, q_comp) = ndeg_with_witness(&g)?;
    let flipped = extract_tree(&q_comp, bs).flip_leaves();
    if flipped.depth() < direct.depth() {
        Ok(flipped)
    } else {
        Ok(direct)
    }
}
