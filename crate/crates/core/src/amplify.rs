//! Zero-error amplification of two-sided-error randomized algorithms.
//!
//! The amplified procedure runs the base algorithm a fixed number of times
//! with independent seeded randomness, pools every queried position (the
//! input is fixed, so repeated reads are cached), and then answers only if
//! the pooled partial assignment is a certificate — i.e. the restriction
//! of f by the observed values is constant. Otherwise it answers "?".
//! Because an answer is always read off a certificate, a wrong bit is
//! structurally impossible; the repetitions exist to make the query trace
//! rich enough that a certificate usually appears.
//!
//! The repetition count comes from the Hoeffding bound for a majority
//! vote: the smallest odd r with exp(-2 r (1/2 - e)^2) <= 1 / (2 N^bs),
//! where e is the declared per-run error.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cube::{Assignment, PartialAssignment};
use crate::derand::DecisionTree;
use crate::error::{Error, Result};
use crate::measures::block_sensitivity;
use crate::ratio::{fmt_ratio, rat_to_f64};
use crate::spec::FuncSpec;
use crate::table::TruthTable;
use crate::Rat;

/// A finite distribution over decision trees, or a seeded generative
/// procedure, together with its declared worst-case error and per-run
/// query budget.
#[derive(Clone, Debug)]
pub struct RandomizedAlgorithm {
    name: String,
    error_bound: Rat,
    query_budget: u32,
    kind: AlgKind,
}

#[derive(Clone, Debug)]
enum AlgKind {
    /// Explicit mixture: positive rational weights summing to one.
    Mixture(Vec<(Rat, DecisionTree)>),
    /// Read k distinct uniformly chosen positions; output 1 iff a 1 is
    /// seen. One-sided error for OR.
    SubsampleOr { n: u8, k: u8 },
}

impl RandomizedAlgorithm {
    /// Deterministic full read wrapped as a singleton mixture over the
    /// complete depth-n tree; error 0.
    pub fn full_read(f: &TruthTable) -> Self {
        let tree = complete_chain_tree(f);
        RandomizedAlgorithm {
            name: "full-read".into(),
            error_bound: Rat::zero(),
            query_budget: f.n() as u32,
            kind: AlgKind::Mixture(vec![(Rat::one(), tree)]),
        }
    }

    /// Subsampling algorithm for or:n with k = ceil(4n/5); worst-case
    /// error is exactly (n-k)/n, attained on inputs with a single one.
    pub fn subsample_or(n: u8) -> Self {
        let k = (4 * n as u32).div_ceil(5) as u8;
        RandomizedAlgorithm {
            name: "subsample-k".into(),
            error_bound: Rat::new(BigInt::from(n - k), BigInt::from(n)),
            query_budget: k as u32,
            kind: AlgKind::SubsampleOr { n, k },
        }
    }

    /// Explicit mixture with its exact worst-case error computed by full
    /// enumeration against f; weights must be positive and sum to one.
    pub fn tree_mixture(f: &TruthTable, parts: Vec<(Rat, DecisionTree)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::BadMixture("empty mixture".into()));
        }
        let mut total = Rat::zero();
        for (w, _) in &parts {
            if !w.is_positive() {
                return Err(Error::BadMixture(format!("weight {} not positive", w)));
            }
            total += w;
        }
        if !total.is_one() {
            return Err(Error::BadMixture(format!("weights sum to {total}, not 1")));
        }
        let error_bound = mixture_worst_case_error(&parts, f)?;
        let query_budget = parts.iter().map(|(_, t)| t.depth()).max().unwrap_or(0);
        Ok(RandomizedAlgorithm {
            name: "tree-mixture".into(),
            error_bound,
            query_budget,
            kind: AlgKind::Mixture(parts),
        })
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn error_bound(&self) -> &Rat {
        &self.error_bound
    }

    pub fn query_budget(&self) -> u32 {
        self.query_budget
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.kind, AlgKind::Mixture(_))
    }

    /// One seeded run against input x. Queried positions are merged into
    /// `seen` (consistent duplicates are fine: x is fixed). The run aborts
    /// if it tries to read more distinct positions than its budget.
    pub fn run_once(
        &self,
        x: &Assignment,
        rng: &mut ChaCha8Rng,
        seen: &mut PartialAssignment,
    ) -> Result<bool> {
        match &self.kind {
            AlgKind::Mixture(parts) => {
                let tree = sample_tree(parts, rng);
                let path = tree.path_queries(x)?;
                if path.len() as u32 > self.query_budget {
                    return Err(Error::QueryBudgetExceeded {
                        budget: self.query_budget,
                    });
                }
                for (var, val) in &path {
                    seen.fix(*var, *val)?;
                }
                tree.evaluate(x)
            }
            AlgKind::SubsampleOr { n, k } => {
                let picks = sample_distinct(*n, *k, rng);
                if picks.len() as u32 > self.query_budget {
                    return Err(Error::QueryBudgetExceeded {
                        budget: self.query_budget,
                    });
                }
                let mut saw_one = false;
                for var in picks {
                    let val = x.get(var)?;
                    seen.fix(var, val)?;
                    saw_one |= val;
                }
                Ok(saw_one)
            }
        }
    }
}

/// Weighted draw from the mixture: a 64-bit draw u is read as the dyadic
/// rational u/2^64 and matched against cumulative weights. Correctness of
/// the amplifier never depends on the draw, only reproducibility does.
fn sample_tree<'a>(parts: &'a [(Rat, DecisionTree)], rng: &mut ChaCha8Rng) -> &'a DecisionTree {
    let u = rng.next_u64();
    let point = Rat::new(BigInt::from(u), BigInt::one() << 64);
    let mut acc = Rat::zero();
    for (w, t) in parts {
        acc += w;
        if point < acc {
            return t;
        }
    }
    &parts.last().expect("nonempty mixture").1
}

/// k distinct variables from 1..=n by partial Fisher-Yates.
fn sample_distinct(n: u8, k: u8, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let mut pool: Vec<u8> = (1..=n).collect();
    let mut out = Vec::with_capacity(k as usize);
    for i in 0..k as usize {
        let j = i + (rng.next_u64() as usize) % (pool.len() - i);
        pool.swap(i, j);
        out.push(pool[i]);
    }
    out
}

/// Exact worst-case error of an explicit mixture against f: the largest,
/// over inputs, total weight of trees answering wrongly.
pub fn mixture_worst_case_error(parts: &[(Rat, DecisionTree)], f: &TruthTable) -> Result<Rat> {
    let mut worst = Rat::zero();
    for x in f.all_inputs() {
        let fx = f.evaluate(&x)?;
        let mut err = Rat::zero();
        for (w, t) in parts {
            if t.evaluate(&x)? != fx {
                err += w;
            }
        }
        if err > worst {
            worst = err;
        }
    }
    Ok(worst)
}

/// Smallest odd r with exp(-2 r (1/2 - e)^2) <= 1/(2 N^bs), evaluated as
/// r >= ln(2 N^bs) / (2 (1/2 - e)^2) and rounded up to the next odd
/// integer. Monotone in both bs and N.
pub fn repetitions_needed(bs: u8, n_vars: u8, per_run_error: &Rat) -> Result<u32> {
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    if per_run_error.is_negative() || *per_run_error >= half {
        return Err(Error::ErrorBoundOutOfRange(fmt_ratio(per_run_error)));
    }
    let gap = rat_to_f64(per_run_error) - 0.5;
    let denom = 2.0 * gap * gap;
    let target = std::f64::consts::LN_2 + bs as f64 * (n_vars as f64).ln();
    let r_min = target / denom;
    let mut r = r_min.ceil().max(1.0) as u32;
    if r.is_multiple_of(2) {
        r += 1;
    }
    Ok(r)
}

/// Some(bit) when the queried positions force f constant.
pub fn certificate_check(f: &TruthTable, queried: &PartialAssignment) -> Result<Option<bool>> {
    if queried.n() != f.n() {
        return Err(Error::ArityMismatch {
            expected: f.n(),
            got: queried.n(),
        });
    }
    Ok(f.restrict(queried)?.constant_value())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    Bit(bool),
    Unknown,
}

#[derive(Clone, Debug)]
pub struct AmplifierOutcome {
    pub answer: Answer,
    pub queried: PartialAssignment,
    pub repetitions: u32,
    pub per_run_outputs: Vec<bool>,
}

impl AmplifierOutcome {
    pub fn to_json(&self, seed: u64) -> Value {
        let answer = match self.answer {
            Answer::Bit(b) => json!(b as u8),
            Answer::Unknown => json!("?"),
        };
        json!({
            "answer": answer,
            "repetitions": self.repetitions,
            "queried": self
                .queried
                .fixed_pairs()
                .into_iter()
                .map(|(var, value)| json!({ "var": var, "value": value as u8 }))
                .collect::<Vec<_>>(),
            "per_run_outputs": self
                .per_run_outputs
                .iter()
                .map(|&b| b as u8)
                .collect::<Vec<_>>(),
            "seed": seed,
        })
    }
}

/// Run the algorithm repetitions_needed(bs(f), n, e) times on X with
/// per-repetition ChaCha substreams of `seed`, pool the queried positions,
/// and answer from the certificate check alone.
pub fn amplify_zero_error(
    f: &TruthTable,
    alg: &RandomizedAlgorithm,
    x: &Assignment,
    seed: u64,
) -> Result<AmplifierOutcome> {
    if x.n() != f.n() {
        return Err(Error::ArityMismatch {
            expected: f.n(),
            got: x.n(),
        });
    }
    let bs = block_sensitivity(f)?;
    let repetitions = repetitions_needed(bs, f.n(), alg.error_bound())?;
    let mut queried = PartialAssignment::empty(f.n());
    let mut per_run_outputs = Vec::with_capacity(repetitions as usize);
    for rep in 0..repetitions {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(rep as u64);
        per_run_outputs.push(alg.run_once(x, &mut rng, &mut queried)?);
    }
    let answer = match certificate_check(f, &queried)? {
        Some(bit) => Answer::Bit(bit),
        None => Answer::Unknown,
    };
    Ok(AmplifierOutcome {
        answer,
        queried,
        repetitions,
        per_run_outputs,
    })
}

#[derive(Clone, Debug)]
pub struct RateReport {
    pub rate: Rat,
    pub trials: u32,
    /// Trials whose answer was a bit different from f(X); the zero-error
    /// contract demands this stays 0.
    pub wrong: u32,
    /// 99% normal-approximation half-width of the rate estimate.
    pub half_width: f64,
}

impl RateReport {
    pub fn to_json(&self) -> Value {
        json!({
            "rate": fmt_ratio(&self.rate),
            "trials": self.trials,
            "wrong": self.wrong,
            "half_width": self.half_width,
        })
    }
}

/// Fraction of "?" outcomes over independent seeded trials.
pub fn estimate_question_rate(
    f: &TruthTable,
    alg: &RandomizedAlgorithm,
    x: &Assignment,
    trials: u32,
    seed: u64,
) -> Result<RateReport> {
    assert!(trials >= 1, "need at least one trial");
    let fx = f.evaluate(x)?;
    let mut unknown = 0u32;
    let mut wrong = 0u32;
    for trial in 0..trials {
        let outcome = amplify_zero_error(f, alg, x, splitmix64(seed, trial as u64))?;
        match outcome.answer {
            Answer::Unknown => unknown += 1,
            Answer::Bit(b) => {
                if b != fx {
                    wrong += 1;
                }
            }
        }
    }
    let rate = Rat::new(BigInt::from(unknown), BigInt::from(trials));
    let p = unknown as f64 / trials as f64;
    let half_width = 2.5758293035489004 * (p * (1.0 - p) / trials as f64).sqrt();
    Ok(RateReport {
        rate,
        trials,
        wrong,
        half_width,
    })
}

/// Counter-based expansion of one 64-bit seed into per-trial seeds.
pub fn splitmix64(seed: u64, counter: u64) -> u64 {
    let mut z = seed.wrapping_add(counter.wrapping_add(1).wrapping_mul(0x9E3779B97F4A7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Built-in algorithms for a named family: always "full-read" and a
/// singleton "tree-mixture" over a pruned query-in-order tree; or:n
/// additionally gets "subsample-k". Raw tt/hex specs are not covered.
pub fn builtin_algorithms(spec: &FuncSpec) -> Result<Vec<RandomizedAlgorithm>> {
    if !spec.is_named_family() {
        return Err(Error::UnsupportedFamily(spec.to_string()));
    }
    let f = spec.table();
    let mut algs = vec![RandomizedAlgorithm::full_read(&f)];
    if let FuncSpec::Or(n) = spec {
        algs.push(RandomizedAlgorithm::subsample_or(*n));
    }
    algs.push(RandomizedAlgorithm::tree_mixture(
        &f,
        vec![(Rat::one(), shortcut_chain_tree(&f))],
    )?);
    Ok(algs)
}

/// Max over inputs of the weighted expected number of queries; explicit
/// mixtures only (a generative procedure has no exact expectation).
pub fn worst_case_expected_queries(alg: &RandomizedAlgorithm, f: &TruthTable) -> Result<Rat> {
    let AlgKind::Mixture(parts) = &alg.kind else {
        return Err(Error::NotExplicit("worst_case_expected_queries"));
    };
    let mut worst = Rat::zero();
    for x in f.all_inputs() {
        let mut expected = Rat::zero();
        for (w, t) in parts {
            expected += w * Rat::from_integer(BigInt::from(t.path_len(&x)?));
        }
        if expected > worst {
            worst = expected;
        }
    }
    Ok(worst)
}

/// The complete depth-n tree querying x1..xn in order.
pub fn complete_chain_tree(f: &TruthTable) -> DecisionTree {
    fn go(f: &TruthTable, fixed: PartialAssignment) -> DecisionTree {
        match fixed.free_vars().first() {
            None => {
                let x = fixed.as_full().expect("all fixed");
                DecisionTree::Leaf(f.evaluate(&x).expect("same n"))
            }
            Some(&v) => {
                let mut zero = fixed;
                zero.fix(v, false).expect("free");
                let mut one = fixed;
                one.fix(v, true).expect("free");
                DecisionTree::Query {
                    var: v,
                    on_zero: Box::new(go(f, zero)),
                    on_one: Box::new(go(f, one)),
                }
            }
        }
    }
    go(f, PartialAssignment::empty(f.n()))
}

/// Query x1..xn in order but stop as soon as the restriction is constant.
pub fn shortcut_chain_tree(f: &TruthTable) -> DecisionTree {
    fn go(f: &TruthTable, fixed: PartialAssignment) -> DecisionTree {
        let restricted = f.restrict(&fixed).expect("same n");
        if let Some(c) = restricted.constant_value() {
            return DecisionTree::Leaf(c);
        }
        let v = fixed.free_vars()[0];
        let mut zero = fixed;
        zero.fix(v, false).expect("free");
        let mut one = fixed;
        one.fix(v, true).expect("free");
        DecisionTree::Query {
            var: v,
            on_zero: Box::new(go(f, zero)),
            on_one: Box::new(go(f, one)),
        }
    }
    go(f, PartialAssignment::empty(f.n()))
}
