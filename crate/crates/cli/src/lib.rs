//! Command-line front end: measure reports, polynomial dumps, the
//! derandomizer, the zero-error amplifier, atlas enumeration, and the
//! verification sweep.

pub mod atlas;

use std::io::Write;

use bqlab_core::amplify::{
    amplify_zero_error, builtin_algorithms, estimate_question_rate, RandomizedAlgorithm,
};
use bqlab_core::cube::Assignment;
use bqlab_core::derand::{derandomize_either_side, value_on};
use bqlab_core::measures::{block_sensitivity, measure_report, ndeg_with_witness};
use bqlab_core::ratio::{fmt_ratio, parse_ratio, rat_frac};
use bqlab_core::{Error, FuncSpec, Rat};

const USAGE: &str = "bqlab - query-complexity laboratory for total Boolean functions

USAGE:
  bqlab measures <spec> [--epsilon p/q] [--json]
  bqlab poly <spec>
  bqlab ndeg <spec> [--witness]
  bqlab derand <spec> [--input <bits>] [--trace] [--tree-out <file>]
  bqlab amplify <spec> --alg <name> --input <bits> --trials <t> --seed <s>
  bqlab atlas --n <n> [--sample <m> --seed <s>] [--out <file.csv>]
  bqlab verify --n <n>

FUNCTION SPECS:
  tt:<n>:<bitstring>   raw table, entry i at index i (x1 = low bit)
  hex:<n>:<digits>     same table, 4 entries per hex digit
  or:<n> and:<n> parity:<n> maj:<odd n> dict:<n>:<i>
  nandtree:<depth>     N = 2^depth
  addr:<k>             N = k + 2^k

EXIT STATUS:
  0 success, 1 verification violation, 2 usage error
";

/// Exit status: 0 ok, 1 verification violation, 2 usage error.
pub fn cli_dispatch(args: &[String], out: &mut dyn Write) -> i32 {
    match run(args, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            let _ = write!(out, "{USAGE}");
            2
        }
    }
}

fn run(args: &[String], out: &mut dyn Write) -> Result<i32, Error> {
    let Some(cmd) = args.first() else {
        return Err(Error::BadSpec("missing subcommand".into()));
    };
    match cmd.as_str() {
        "measures" => cmd_measures(&args[1..], out),
        "poly" => cmd_poly(&args[1..], out),
        "ndeg" => cmd_ndeg(&args[1..], out),
        "derand" => cmd_derand(&args[1..], out),
        "amplify" => cmd_amplify(&args[1..], out),
        "atlas" => cmd_atlas(&args[1..], out),
        "verify" => cmd_verify(&args[1..], out),
        other => Err(Error::BadSpec(format!("unknown subcommand {other:?}"))),
    }
}

/// Pull `--flag value` out of an argument list; remaining positionals are
/// returned in order.
struct Flags {
    positional: Vec<String>,
    values: Vec<(String, String)>,
    switches: Vec<String>,
}

fn parse_flags(
    args: &[String],
    value_flags: &[&str],
    switch_flags: &[&str],
) -> Result<Flags, Error> {
    let mut flags = Flags {
        positional: Vec::new(),
        values: Vec::new(),
        switches: Vec::new(),
    };
    let mut i = 0;
    while i < args.len() {
        let a = &args[i];
        if let Some(name) = a.strip_prefix("--") {
            if switch_flags.contains(&name) {
                flags.switches.push(name.to_string());
            } else if value_flags.contains(&name) {
                i += 1;
                let Some(v) = args.get(i) else {
                    return Err(Error::BadSpec(format!("--{name} needs a value")));
                };
                flags.values.push((name.to_string(), v.clone()));
            } else {
                return Err(Error::BadSpec(format!("unknown flag --{name}")));
            }
        } else {
            flags.positional.push(a.clone());
        }
        i += 1;
    }
    Ok(flags)
}

impl Flags {
    fn value(&self, name: &str) -> Option<&str> {
        self.values
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }

    fn switch(&self, name: &str) -> bool {
        self.switches.iter().any(|s| s == name)
    }

    fn one_positional(&self, what: &str) -> Result<&str, Error> {
        match self.positional.as_slice() {
            [one] => Ok(one),
            _ => Err(Error::BadSpec(format!(
                "expected exactly one {what}, got {:?}",
                self.positional
            ))),
        }
    }
}

fn default_epsilon() -> Rat {
    rat_frac(1, 3)
}

fn parse_input(text: &str, n: u8) -> Result<Assignment, Error> {
    let x = Assignment::parse(text)?;
    if x.n() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: x.n(),
        });
    }
    Ok(x)
}

fn cmd_measures(args: &[String], out: &mut dyn Write) -> Result<i32, Error> {
    let flags = parse_flags(args, &["epsilon"], &["json"])?;
    let spec_text = flags.one_positional("function spec")?;
    let spec = FuncSpec::parse(spec_text)?;
    let epsilon = match flags.value("epsilon") {
        Some(t) => parse_ratio(t)?,
        None => default_epsilon(),
    };
    let report = measure_report(&spec.table(), spec_text, &epsilon)?;
    if flags.switch("json") {
        let _ = writeln!(out, "{}", report.to_json());
    } else {
        let _ = writeln!(out, "spec    = {}", report.spec);
        let _ = writeln!(out, "n       = {}", report.n);
        let _ = writeln!(out, "d       = {}", report.d);
        let _ = writeln!(out, "s       = {}", report.s);
        let _ = writeln!(out, "bs      = {}", report.bs);
        let _ = writeln!(out, "c0      = {}", report.c0);
        let _ = writeln!(out, "c1      = {}", report.c1);
        let _ = writeln!(out, "c       = {}", report.c);
        let _ = writeln!(out, "deg     = {}", report.deg);
        let _ = writeln!(out, "ndeg    = {}", report.ndeg);
        let _ = writeln!(out, "adeg    = {}", report.adeg);
        let _ = writeln!(out, "epsilon = {}", fmt_ratio(&report.epsilon));
    }
    Ok(0)
}

fn cmd_poly(args: &[String], out: &mut dyn Write) -> Result<i32, Error> {
    let flags = parse_flags(args, &[], &[])?;
    let spec_text = flags.one_positional("function spec")?;
    let f = bqlab_core::parse_spec(spec_text)?;
    let _ = writeln!(out, "{}", f.to_polynomial().to_json());
    Ok(0)
}

fn cmd_ndeg(args: &[String], out: &mut dyn Write) -> Result<i32, Error> {
    let flags = parse_flags(args, &[], &["witness"])?;
    let spec_text = flags.one_positional("function spec")?;
    let f = bqlab_core::parse_spec(spec_text)?;
    let (d, witness) = ndeg_with_witness(&f)?;
    let _ = writeln!(out, "ndeg({spec_text}) = {d}");
    if flags.switch("witness") {
        let _ = writeln!(out, "{}", witness.to_json());
    }
    Ok(0)
}

fn cmd_derand(args: &[String], out: &mut dyn Write) -> Result<i32, Error> {
    let flags = parse_flags(args, &["input", "tree-out"], &["trace"])?;
    let spec_text = flags.one_positional("function spec")?;
    let f = bqlab_core::parse_spec(spec_text)?;

    if let Some(input) = flags.value("input") {
        let x = parse_input(input, f.n())?;
        let (_, witness) = ndeg_with_witness(&f)?;
        let bs = block_sensitivity(&f)?;
        let (answer, trace) = value_on(&witness, bs, &x)?;
        if flags.switch("trace") {
            for (k, step) in trace.steps.iter().enumerate() {
                let values: String = step
                    .values
                    .iter()
                    .map(|&b| if b { '1' } else { '0' })
                    .collect();
                let _ = writeln!(
                    out,
                    "step {}: M={} deg={} values={} newdeg={}",
                    k + 1,
                    step.maxonomial,
                    step.maxonomial.len(),
                    values,
                    step.degree_after
                );
            }
        }
        let _ = writeln!(
            out,
            "answer: {} (queries: {})",
            trace.outcome as u8, trace.query_count
        );
        if answer != f.evaluate(&x)? {
            let _ = writeln!(out, "MISMATCH with the table value");
            return Ok(1);
        }
    } else {
        let tree = derandomize_either_side(&f)?;
        let bs = block_sensitivity(&f)?;
        let (ndeg, _) = ndeg_with_witness(&f)?;
        let _ = writeln!(
            out,
            "tree depth {} (bound ({}+1)*{} = {}), agrees: {}",
            tree.depth(),
            bs,
            ndeg,
            (bs as u32 + 1) * ndeg as u32,
            tree.agrees_with(&f)
        );
    }

    if let Some(path) = flags.value("tree-out") {
        let tree = derandomize_either_side(&f)?;
        std::fs::write(path, format!("{}\n", tree.to_json()))
            .map_err(|e| Error::BadSpec(format!("cannot write {path}: {e}")))?;
        let _ = writeln!(out, "wrote tree to {path}");
    }
    Ok(0)
}

fn cmd_amplify(args: &[String], out: &mut dyn Write) -> Result<i32, Error> {
    let flags = parse_flags(args, &["alg", "input", "trials", "seed"], &[])?;
    let spec_text = flags.one_positional("function spec")?;
    let spec = FuncSpec::parse(spec_text)?;
    let f = spec.table();
    let alg_name = flags
        .value("alg")
        .ok_or_else(|| Error::BadSpec("--alg is required".into()))?;
    let input = flags
        .value("input")
        .ok_or_else(|| Error::BadSpec("--input is required".into()))?;
    let x = parse_input(input, f.n())?;
    let trials: u32 = flags
        .value("trials")
        .unwrap_or("1")
        .parse()
        .map_err(|_| Error::BadSpec("bad --trials".into()))?;
    if trials == 0 {
        return Err(Error::BadSpec("--trials must be >= 1".into()));
    }
    let seed: u64 = flags
        .value("seed")
        .unwrap_or("0")
        .parse()
        .map_err(|_| Error::BadSpec("bad --seed".into()))?;

    let algs = builtin_algorithms(&spec)?;
    let alg: &RandomizedAlgorithm =
        algs.iter().find(|a| a.name() == alg_name).ok_or_else(|| {
            Error::BadSpec(format!(
                "no built-in {alg_name:?} for {spec_text}; available: {}",
                algs.iter().map(|a| a.name()).collect::<Vec<_>>().join(", ")
            ))
        })?;

    if trials == 1 {
        let outcome = amplify_zero_error(&f, alg, &x, seed)?;
        let _ = writeln!(out, "{}", outcome.to_json(seed));
    } else {
        let report = estimate_question_rate(&f, alg, &x, trials, seed)?;
        let _ = writeln!(out, "{}", report.to_json());
    }
    Ok(0)
}

fn cmd_atlas(args: &[String], out: &mut dyn Write) -> Result<i32, Error> {
    let flags = parse_flags(args, &["n", "sample", "seed", "out"], &[])?;
    if !flags.positional.is_empty() {
        return Err(Error::BadSpec(format!(
            "unexpected arguments {:?}",
            flags.positional
        )));
    }
    let n: u8 = flags
        .value("n")
        .ok_or_else(|| Error::BadSpec("--n is required".into()))?
        .parse()
        .map_err(|_| Error::BadSpec("bad --n".into()))?;
    let epsilon = default_epsilon();
    let rows = match flags.value("sample") {
        None => atlas::atlas_full(n, &epsilon)?,
        Some(m) => {
            let sample: u64 = m
                .parse()
                .map_err(|_| Error::BadSpec("bad --sample".into()))?;
            let seed: u64 = flags
                .value("seed")
                .unwrap_or("0")
                .parse()
                .map_err(|_| Error::BadSpec("bad --seed".into()))?;
            atlas::atlas_sampled(n, sample, seed, &epsilon)?
        }
    };
    let mut csv = String::with_capacity(rows.len() * 64);
    csv.push_str(&atlas::csv_header());
    csv.push('\n');
    for row in &rows {
        csv.push_str(&row.csv());
        csv.push('\n');
    }
    match flags.value("out") {
        Some(path) => {
            std::fs::write(path, csv)
                .map_err(|e| Error::BadSpec(format!("cannot write {path}: {e}")))?;
            let _ = writeln!(out, "wrote {} rows to {path}", rows.len());
        }
        None => {
            let _ = out.write_all(csv.as_bytes());
        }
    }
    Ok(0)
}

fn cmd_verify(args: &[String], out: &mut dyn Write) -> Result<i32, Error> {
    let flags = parse_flags(args, &["n"], &[])?;
    let n: u8 = flags
        .value("n")
        .ok_or_else(|| Error::BadSpec("--n is required".into()))?
        .parse()
        .map_err(|_| Error::BadSpec("bad --n".into()))?;
    let result = atlas::verify(n, &default_epsilon())?;
    let _ = writeln!(
        out,
        "verify n={}: {} functions checked",
        result.n, result.functions_checked
    );
    for (key, value) in &result.max_ratios {
        let _ = writeln!(out, "max {key} = {}", fmt_ratio(value));
    }
    let _ = writeln!(
        out,
        "max min-side tree depth = {}",
        result.max_min_side_tree_depth
    );
    if result.ok() {
        let _ = writeln!(out, "violations: none");
        Ok(0)
    } else {
        let counts = result.counts();
        let _ = writeln!(out, "violations: {}", result.violations.len());
        for (kind, count) in &counts {
            let _ = writeln!(out, "  {kind}: {count}");
        }
        for v in result.violations.iter().take(10) {
            let _ = writeln!(out, "    {} {} ({})", v.spec, v.inequality, v.values);
        }
        if result.violations.len() > 10 {
            let _ = writeln!(out, "    ... and {} more", result.violations.len() - 10);
        }
        Ok(1)
    }
}
