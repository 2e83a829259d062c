//! Full enumeration of small functions with per-function measures, and the
//! verification sweep asserting the constant-free inequalities.
//!
//! The atlas enumerates every function at n <= 4 (or samples tables at
//! n = 5) and emits one row per function. The verifier reruns the
//! inequality checks per function and records violations instead of
//! failing fast, so a sweep reports everything it finds; big-O shaped
//! claims are never asserted against an invented constant — the harness
//! only tracks the largest observed ratio.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use bqlab_core::cube::{Assignment, PartialAssignment};
use bqlab_core::derand::{extract_tree, DecisionTree};
use bqlab_core::error::{Error, Result};
use bqlab_core::measures::{
    approximate_degree, block_sensitivity, block_sensitivity_at, certificate_complexity, degree,
    deterministic_complexity, minimal_sensitive_blocks, ndeg_with_witness, sensitivity,
};
use bqlab_core::ratio::fmt_ratio;
use bqlab_core::{Rat, TruthTable};

/// Full-enumeration ceiling (per-function rational elimination keeps the
/// 65 536 functions at n = 4 within desk scale).
pub const ATLAS_FULL_CAP: u8 = 4;
/// Sampling-only level.
pub const ATLAS_SAMPLE_N: u8 = 5;

/// One atlas row: the measure fields plus derived columns.
#[derive(Clone, Debug)]
pub struct AtlasRow {
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
    /// Approximate degree; absent above its n <= 4 cap (sampled n = 5 rows).
    pub adeg: Option<u8>,
    pub epsilon: Rat,
    /// Depth of the shallower of the two derandomizer trees (direct and
    /// complement side with flipped leaves).
    pub tree_depth: u32,
    /// (bs+1) * ndeg, the constructive depth bound.
    pub depth_bound: u32,
    /// bs / adeg^2; absent for constants (0/0) and when adeg is absent.
    pub ratio_bs_over_adeg2: Option<Rat>,
    /// D / ((bs+1) * ndeg); absent for constants (0/0). At most 1.
    pub ratio_d_over_bound: Option<Rat>,
}

pub fn csv_header() -> String {
    "spec,n,d,s,bs,c0,c1,c,deg,ndeg,adeg,epsilon,tree_depth,depth_bound,\
     ratio_bs_over_adeg2,ratio_d_over_bound"
        .replace(' ', "")
}

impl AtlasRow {
    pub fn csv(&self) -> String {
        let adeg = self.adeg.map(|v| v.to_string()).unwrap_or_default();
        let r1 = self
            .ratio_bs_over_adeg2
            .as_ref()
            .map(fmt_ratio)
            .unwrap_or_default();
        let r2 = self
            .ratio_d_over_bound
            .as_ref()
            .map(fmt_ratio)
            .unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.spec,
            self.n,
            self.d,
            self.s,
            self.bs,
            self.c0,
            self.c1,
            self.c,
            self.deg,
            self.ndeg,
            adeg,
            fmt_ratio(&self.epsilon),
            self.tree_depth,
            self.depth_bound,
            r1,
            r2
        )
    }
}

/// Measures and the derandomizer tree for one function; `adeg` comes from
/// the caller (per-orbit cache in sweeps, absent at n = 5).
fn row_for(f: &TruthTable, spec: String, epsilon: &Rat, adeg: Option<u8>) -> Result<AtlasRow> {
    let d = deterministic_complexity(f)?;
    let s = sensitivity(f);
    let bs = block_sensitivity(f)?;
    let cert = certificate_complexity(f)?;
    let deg = degree(f);
    let (ndeg, _witness) = ndeg_with_witness(f)?;
    let tree = bqlab_core::derand::derandomize_either_side(f)?;
    let depth_bound = (bs as u32 + 1) * ndeg as u32;
    let ratio_bs_over_adeg2 = adeg.and_then(|a| {
        if a == 0 {
            None
        } else {
            Some(Rat::new(
                BigInt::from(bs),
                BigInt::from(a as u32 * a as u32),
            ))
        }
    });
    let ratio_d_over_bound = if depth_bound == 0 {
        None
    } else {
        Some(Rat::new(BigInt::from(d), BigInt::from(depth_bound)))
    };
    assert!(s <= bs && bs <= d && d <= f.n(), "{spec}: ordering broken");
    assert!(ndeg <= deg && deg <= d, "{spec}: degree ordering broken");
    if let Some(a) = adeg {
        assert!(a <= deg, "{spec}: adeg above deg");
    }
    Ok(AtlasRow {
        spec,
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
        tree_depth: tree.depth(),
        depth_bound,
        ratio_bs_over_adeg2,
        ratio_d_over_bound,
    })
}

fn spec_of_table(f: &TruthTable) -> String {
    format!("tt:{}:{}", f.n(), f.bitstring())
}

/// Every function on n variables, one row each, in ascending table order.
pub fn atlas_full(n: u8, epsilon: &Rat) -> Result<Vec<AtlasRow>> {
    if n == 0 || n > ATLAS_FULL_CAP {
        return Err(Error::CapExceeded {
            op: "atlas (full enumeration)",
            n,
            cap: ATLAS_FULL_CAP,
        });
    }
    let count = 1u64 << (1u32 << n);
    let adeg = adeg_by_class(n, epsilon)?;
    (0..count)
        .into_par_iter()
        .map(|word| {
            let f = TruthTable::from_packed(n, word).expect("n <= 4");
            row_for(&f, spec_of_table(&f), epsilon, Some(adeg[word as usize]))
        })
        .collect()
}

/// Seeded uniform sample of tables at n = 5 (adeg is above its cap there
/// and is left absent).
pub fn atlas_sampled(n: u8, sample: u64, seed: u64, epsilon: &Rat) -> Result<Vec<AtlasRow>> {
    if n != ATLAS_SAMPLE_N {
        return Err(Error::BadSpec(format!(
            "sampling is for n = {ATLAS_SAMPLE_N}, got n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<u64> = (0..sample).map(|_| rng.next_u32() as u64).collect();
    words
        .into_par_iter()
        .map(|word| {
            let f = TruthTable::from_packed(n, word).expect("n = 5");
            row_for(&f, spec_of_table(&f), epsilon, None)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Class cache for the expensive per-function LP
//
// Approximate degree (like D, s, bs, deg, ndeg) is invariant under
// permuting variables and negating inputs: if p approximates f then
// p composed with the same relabeling approximates the relabeled function
// at the same degree. Full sweeps therefore solve the LP once per orbit of
// the group of 2^n * n! relabelings and share the value across the orbit.
// ---------------------------------------------------------------------------

fn permutations(n: u8) -> Vec<Vec<u8>> {
    fn go(prefix: &mut Vec<u8>, rest: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            go(prefix, rest, out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}

/// For every word on 2^n table entries, the smallest word in its orbit
/// under variable permutation + input negation.
pub fn np_canonical_map(n: u8) -> Vec<u16> {
    assert!((1..=4).contains(&n));
    let points = 1usize << n;
    let words = 1usize << points;
    // one point bijection per group element: where w's bit k lands
    let mut landings: Vec<Vec<u8>> = Vec::new();
    for perm in permutations(n) {
        for neg in 0..1u32 << n {
            let mut land = vec![0u8; points];
            for k in 0..points as u32 {
                // x -> y with y_{perm[j]} = x_j, then XOR with neg
                let mut y = 0u32;
                for j in 0..n {
                    if k >> j & 1 == 1 {
                        y |= 1 << perm[j as usize];
                    }
                }
                land[k as usize] = (y ^ neg) as u8;
            }
            landings.push(land);
        }
    }
    // nibble lookup tables per element: t = OR_g T[g][nibble_g(w)]
    let nibbles = points.div_ceil(4);
    let tables: Vec<Vec<[u16; 16]>> = landings
        .iter()
        .map(|land| {
            (0..nibbles)
                .map(|g| {
                    let mut t = [0u16; 16];
                    for (v, slot) in t.iter_mut().enumerate() {
                        for j in 0..4 {
                            let k = 4 * g + j;
                            if k < points && v >> j & 1 == 1 {
                                *slot |= 1 << land[k];
                            }
                        }
                    }
                    t
                })
                .collect()
        })
        .collect();
    (0..words as u32)
        .map(|w| {
            let mut best = u16::MAX;
            for elem in &tables {
                let mut t = 0u16;
                for (g, table) in elem.iter().enumerate() {
                    t |= table[(w >> (4 * g) & 15) as usize];
                }
                if t < best {
                    best = t;
                }
            }
            best
        })
        .collect()
}

/// Approximate degree for every word at this n, one LP run per orbit.
pub fn adeg_by_class(n: u8, epsilon: &Rat) -> Result<Vec<u8>> {
    let canon = np_canonical_map(n);
    let mut reps: Vec<u16> = canon.clone();
    reps.sort_unstable();
    reps.dedup();
    let per_rep: Vec<u8> = reps
        .par_iter()
        .map(|&w| {
            let f = TruthTable::from_packed(n, w as u64).expect("n <= 4");
            approximate_degree(&f, epsilon)
        })
        .collect::<Result<_>>()?;
    let mut of_rep = std::collections::HashMap::new();
    for (r, a) in reps.iter().zip(&per_rep) {
        of_rep.insert(*r, *a);
    }
    Ok(canon.iter().map(|c| of_rep[c]).collect())
}

/// One recorded inequality violation.
#[derive(Clone, Debug)]
pub struct Violation {
    pub spec: String,
    pub inequality: &'static str,
    pub values: String,
}

#[derive(Clone, Debug)]
pub struct VerifyResult {
    pub n: u8,
    pub functions_checked: u64,
    pub violations: Vec<Violation>,
    /// Largest observed constant per big-O shaped inequality.
    pub max_ratios: BTreeMap<&'static str, Rat>,
    /// Deepest min-side derandomizer tree seen (direct vs complement).
    pub max_min_side_tree_depth: u32,
}

impl VerifyResult {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// Violation counts grouped by inequality id.
    pub fn counts(&self) -> BTreeMap<&'static str, u64> {
        let mut out = BTreeMap::new();
        for v in &self.violations {
            *out.entry(v.inequality).or_insert(0) += 1;
        }
        out
    }
}

struct FnAudit {
    violations: Vec<Violation>,
    bs_over_adeg2: Option<Rat>,
    d_over_bound: Option<Rat>,
    min_side_depth: u32,
}

/// Per-function inequality checks:
/// (i) s <= bs, (ii) adeg <= ndeg <= deg, (iii) D <= (bs+1)*ndeg,
/// (iv) every minimal sensitive block has size <= s,
/// (v) per-input minimal-block counts <= N^bs,
/// (vi) the direct-side tree computes f with depth <= (bs+1)*ndeg,
/// (vii) substituting a maxonomial lowers bs at every 0-instance.
/// The derandomizer also runs against the complement (leaves flipped) and
/// the min-side depth is recorded as telemetry.
fn audit_function(f: &TruthTable, adeg: u8) -> Result<FnAudit> {
    let spec = spec_of_table(f);
    let mut violations = Vec::new();
    let mut record = |inequality: &'static str, values: String| {
        violations.push(Violation {
            spec: spec.clone(),
            inequality,
            values,
        });
    };

    let n = f.n();
    let d = deterministic_complexity(f)?;
    let s = sensitivity(f);
    let bs = block_sensitivity(f)?;
    let deg = degree(f);
    let (ndeg, witness) = ndeg_with_witness(f)?;

    if s > bs {
        record("s_le_bs", format!("s={s} bs={bs}"));
    }
    if adeg > ndeg {
        record("adeg_le_ndeg", format!("adeg={adeg} ndeg={ndeg}"));
    }
    if ndeg > deg {
        record("ndeg_le_deg", format!("ndeg={ndeg} deg={deg}"));
    }
    let bound = (bs as u32 + 1) * ndeg as u32;
    if d as u32 > bound {
        record("d_le_bs1_ndeg", format!("d={d} bound={bound}"));
    }

    for x in f.all_inputs() {
        let set = minimal_sensitive_blocks(f, &x)?;
        for b in &set.blocks {
            if b.len() > s {
                record("block_le_s", format!("x={x} block={b} s={s}"));
            }
        }
        let cap = (n as u64).pow(bs as u32);
        if set.blocks.len() as u64 > cap {
            record(
                "blocks_le_n_pow_bs",
                format!("x={x} count={} cap={cap}", set.blocks.len()),
            );
        }
    }

    let tree = extract_tree(&witness, bs);
    if !tree.agrees_with(f) {
        record("tree_agrees", "direct-side tree disagrees".into());
    }
    if tree.depth() > bound {
        record(
            "tree_depth_le_bound",
            format!("depth={} bound={bound}", tree.depth()),
        );
    }
    let complement = f.complement();
    let (_, comp_witness) = ndeg_with_witness(&complement)?;
    let flipped = extract_tree(&comp_witness, bs).flip_leaves();
    if !flipped.agrees_with(f) {
        record("tree_agrees", "complement-side tree disagrees".into());
    }
    let min_side_depth = tree.depth().min(flipped.depth());

    check_bs_decrease(f, &witness, bs, &mut record)?;

    let bs_over_adeg2 = if adeg > 0 {
        Some(Rat::new(
            BigInt::from(bs),
            BigInt::from(adeg as u32 * adeg as u32),
        ))
    } else {
        None
    };
    let d_over_bound = if bound > 0 {
        Some(Rat::new(BigInt::from(d), BigInt::from(bound)))
    } else {
        None
    };
    Ok(FnAudit {
        violations,
        bs_over_adeg2,
        d_over_bound,
        min_side_depth,
    })
}

fn check_bs_decrease(
    f: &TruthTable,
    witness: &bqlab_core::MultilinearPoly,
    bs: u8,
    record: &mut impl FnMut(&'static str, String),
) -> Result<()> {
    for w in f.all_inputs() {
        if f.evaluate(&w)? {
            continue;
        }
        let (_, trace) = bqlab_core::derand::value_on(witness, bs, &w)?;
        let mut acc = PartialAssignment::empty(f.n());
        let mut prev = block_sensitivity_at(f, &w)?;
        for step in &trace.steps {
            for v in step.maxonomial.vars() {
                acc.fix(v, w.get(v)?).expect("fresh variable");
            }
            let restricted = f.restrict(&acc)?;
            let free = acc.free_vars();
            let mut bits = 0u32;
            for (k, &v) in free.iter().enumerate() {
                if w.get(v)? {
                    bits |= 1 << k;
                }
            }
            let projected = Assignment::new(free.len() as u8, bits);
            let next = block_sensitivity_at(&restricted, &projected)?;
            if next >= prev {
                record(
                    "bs_decreases_per_maxonomial",
                    format!("w={w}: bs {prev} -> {next}"),
                );
            }
            prev = next;
        }
    }
    Ok(())
}

/// Check every function on n variables; collects violations and ratio
/// telemetry. Exit-worthy iff `violations` is nonempty.
pub fn verify(n: u8, epsilon: &Rat) -> Result<VerifyResult> {
    if n == 0 || n > ATLAS_FULL_CAP {
        return Err(Error::CapExceeded {
            op: "verify",
            n,
            cap: ATLAS_FULL_CAP,
        });
    }
    let count = 1u64 << (1u32 << n);
    let adeg = adeg_by_class(n, epsilon)?;
    let audits: Vec<FnAudit> = (0..count)
        .into_par_iter()
        .map(|word| {
            let f = TruthTable::from_packed(n, word).expect("n <= 4");
            audit_function(&f, adeg[word as usize])
        })
        .collect::<Result<_>>()?;

    let mut violations = Vec::new();
    let mut max_ratios: BTreeMap<&'static str, Rat> = BTreeMap::new();
    let mut bump = |key: &'static str, value: Option<Rat>| {
        if let Some(v) = value {
            max_ratios
                .entry(key)
                .and_modify(|cur| {
                    if v > *cur {
                        *cur = v.clone();
                    }
                })
                .or_insert(v);
        }
    };
    let mut max_min_side_tree_depth = 0;
    for audit in audits {
        bump("bs_over_adeg2", audit.bs_over_adeg2.clone());
        bump("d_over_bs1_ndeg", audit.d_over_bound.clone());
        max_min_side_tree_depth = max_min_side_tree_depth.max(audit.min_side_depth);
        violations.extend(audit.violations);
    }
    Ok(VerifyResult {
        n,
        functions_checked: count,
        violations,
        max_ratios,
        max_min_side_tree_depth,
    })
}

/// The direct-side derandomizer tree (used by the CLI's tree output).
pub fn direct_tree(f: &TruthTable) -> Result<DecisionTree> {
    let (_, witness) = ndeg_with_witness(f)?;
    let bs = block_sensitivity(f)?;
    Ok(extract_tree(&witness, bs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use bqlab_core::ratio::rat_frac;

    #[test]
    fn atlas_row_counts() {
        let eps = rat_frac(1, 3);
        assert_eq!(atlas_full(1, &eps).unwrap().len(), 4);
        assert_eq!(atlas_full(2, &eps).unwrap().len(), 16);
        assert!(atlas_full(5, &eps).is_err());
    }

    #[test]
    fn atlas_is_deterministic() {
        let eps = rat_frac(1, 3);
        let a: Vec<String> = atlas_full(2, &eps)
            .unwrap()
            .iter()
            .map(|r| r.csv())
            .collect();
        let b: Vec<String> = atlas_full(2, &eps)
            .unwrap()
            .iter()
            .map(|r| r.csv())
            .collect();
        assert_eq!(a, b);
        let s1: Vec<String> = atlas_sampled(5, 20, 99, &eps)
            .unwrap()
            .iter()
            .map(|r| r.csv())
            .collect();
        let s2: Vec<String> = atlas_sampled(5, 20, 99, &eps)
            .unwrap()
            .iter()
            .map(|r| r.csv())
            .collect();
        assert_eq!(s1, s2);
        // sampled rows have no adeg column value
        assert!(s1[0].contains(",,"));
    }

    #[test]
    fn atlas_rows_satisfy_depth_bound() {
        let eps = rat_frac(1, 3);
        for row in atlas_full(2, &eps).unwrap() {
            assert!(row.d as u32 <= row.depth_bound.max(row.d as u32));
            if let Some(r) = &row.ratio_d_over_bound {
                assert!(*r <= Rat::new(BigInt::from(1), BigInt::from(1)));
            }
        }
    }

    #[test]
    fn class_cache_matches_direct_adeg() {
        let eps = rat_frac(1, 3);
        // exhaustive at n = 2, seeded sample at n = 4
        let cached2 = adeg_by_class(2, &eps).unwrap();
        for w in 0..16u64 {
            let f = TruthTable::from_packed(2, w).unwrap();
            assert_eq!(cached2[w as usize], approximate_degree(&f, &eps).unwrap());
        }
        let cached4 = adeg_by_class(4, &eps).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..12 {
            let w = (rng.next_u32() & 0xFFFF) as u64;
            let f = TruthTable::from_packed(4, w).unwrap();
            assert_eq!(
                cached4[w as usize],
                approximate_degree(&f, &eps).unwrap(),
                "word {w}"
            );
        }
    }

    #[test]
    fn canonical_map_respects_orbits() {
        let canon = np_canonical_map(3);
        // the canonical form is idempotent and stays inside the orbit of
        // sampled relabelings
        for w in 0..256u16 {
            let c = canon[w as usize];
            assert_eq!(canon[c as usize], c, "idempotent at {w}");
            assert!(c <= w);
        }
        // permuting variables of a table does not change its class
        let f = TruthTable::from_packed(3, 0b00010111).unwrap(); // maj:3
        let g = f.permute_vars(&[2, 3, 1]).unwrap();
        assert_eq!(
            canon[f.packed().unwrap() as usize],
            canon[g.packed().unwrap() as usize]
        );
    }

    #[test]
    fn atlas_n3_every_row_meets_the_depth_bound() {
        let eps = rat_frac(1, 3);
        let rows = atlas_full(3, &eps).unwrap();
        assert_eq!(rows.len(), 256);
        for row in &rows {
            assert!(
                row.d as u32 <= (row.bs as u32 + 1) * row.ndeg as u32 || row.ndeg == 0,
                "{}",
                row.spec
            );
            assert!(row.tree_depth <= row.n as u32);
        }
    }

    /// Full n = 4 audit; slow on one core, run explicitly with
    /// `cargo test -p bqlab-cli verify_n4 -- --ignored --nocapture`.
    #[test]
    #[ignore]
    fn verify_n4_full_audit() {
        let res = verify(4, &rat_frac(1, 3)).unwrap();
        assert_eq!(res.functions_checked, 65536);
        let counts = res.counts();
        assert_eq!(
            counts.keys().copied().collect::<Vec<_>>(),
            vec!["adeg_le_ndeg"],
            "only the genuinely false ordering may be violated"
        );
        assert_eq!(counts["adeg_le_ndeg"], 26802);
    }

    #[test]
    fn verify_n2_finds_only_the_false_ordering() {
        let eps = rat_frac(1, 3);
        let res = verify(2, &eps).unwrap();
        assert_eq!(res.functions_checked, 16);
        let counts = res.counts();
        // the adeg <= ndeg ordering genuinely fails (two-variable parity
        // and its complement); everything else holds everywhere
        assert_eq!(
            counts.keys().copied().collect::<Vec<_>>(),
            vec!["adeg_le_ndeg"]
        );
        assert_eq!(counts["adeg_le_ndeg"], 2);
        let bad: Vec<&str> = res.violations.iter().map(|v| v.spec.as_str()).collect();
        assert!(bad.contains(&"tt:2:0110")); // XOR
        assert!(bad.contains(&"tt:2:1001")); // XNOR
    }
}
