//! Command-line front end: `mul`, `verify`, `count`, `bench`.
//!
//! Exit codes: 0 success, 1 verification or self-check failure, 2 usage or
//! parse error.

use std::ffi::OsString;
use std::hint::black_box;
use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use crate::octonion::{direct_mul, SplitOctonion};
use crate::scalars::{with_counting, Counted, OpCounts, ParseScalarError, Rational};
use crate::schedule::{apply, fast_mul, prepare};
use crate::verify::{self, Fault, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Relative tolerance for `mul --float --check`.
pub const FLOAT_CHECK_TOLERANCE: f64 = 1e-12;
/// Relative tolerance between benchmark checksums.
pub const CHECKSUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "splitoct", version, about = "Split-octonion products with 28 multiplications")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Direct,
    Fast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountAlgo {
    Direct,
    Fast,
    /// Apply-only cost against a prepared multiplier, with preparation listed separately.
    Prepared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    TableSign,
    Coefficient,
    PostStep,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiply two split-octonions, `x * b`.
    Mul {
        /// Left operand: eight comma-separated scalars (integers, decimals, or p/q).
        #[arg(allow_hyphen_values = true, required_unless_present = "x_flag", conflicts_with = "x_flag")]
        x: Option<String>,
        /// Right operand.
        #[arg(allow_hyphen_values = true, required_unless_present = "b_flag", conflicts_with = "b_flag")]
        b: Option<String>,
        #[arg(long = "x", id = "x_flag", allow_hyphen_values = true, value_name = "X")]
        x_flag: Option<String>,
        #[arg(long = "b", id = "b_flag", allow_hyphen_values = true, value_name = "B")]
        b_flag: Option<String>,
        #[arg(long, value_enum, default_value_t = Algo::Fast)]
        algo: Algo,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Compute in double precision instead of exact rationals.
        #[arg(long)]
        float: bool,
        /// Also compute with the other algorithm and fail if the results differ.
        #[arg(long)]
        check: bool,
    },
    /// Run the basis, random, symbolic and operation-count checks.
    Verify {
        /// Number of random rational pairs (0 skips the random check).
        #[arg(long, default_value_t = 1000)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also check the schedule as a polynomial identity.
        #[arg(long)]
        symbolic: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
    /// Report multiplications, additions and shifts for one product.
    Count {
        #[arg(long, value_enum, default_value_t = CountAlgo::Fast)]
        algo: CountAlgo,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Time direct and fast products over doubles (informational).
    Bench {
        /// Products per timed run.
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        iters: u64,
        /// Add a row for applying one prepared multiplier.
        #[arg(long)]
        reuse_prepared: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OctonionParseError {
    #[error("expected 8 comma-separated scalars, found {0}")]
    FieldCount(usize),
    #[error("field {index}: {source}")]
    Scalar {
        index: usize,
        #[source]
        source: ParseScalarError,
    },
}

/// Parses `c0,c1,...,c7`.
pub fn parse_octonion(text: &str) -> Result<SplitOctonion<Rational>, OctonionParseError> {
    let fields: Vec<&str> = text.split(',').collect();
    if fields.len() != 8 {
        return Err(OctonionParseError::FieldCount(fields.len()));
    }
    let mut out = Vec::with_capacity(8);
    for (index, f) in fields.into_iter().enumerate() {
        out.push(f.parse::<Rational>().map_err(|source| OctonionParseError::Scalar { index, source })?);
    }
    Ok(SplitOctonion::new(out.try_into().expect("eight fields")))
}

fn float_text(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        v.to_string()
    }
}

/// Largest componentwise difference relative to the largest reference component.
pub fn relative_error(got: &SplitOctonion<f64>, reference: &SplitOctonion<f64>) -> f64 {
    let scale = reference.coeffs().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = got
        .coeffs()
        .iter()
        .zip(reference.coeffs())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match cli.command {
        Command::Mul { x, b, x_flag, b_flag, algo, format, float, check } => {
            let x = x.or(x_flag).unwrap_or_default();
            let b = b.or(b_flag).unwrap_or_default();
            cmd_mul(&x, &b, algo, format, float, check, out, err)
        }
        Command::Verify { random, seed, symbolic, format, inject_fault } => {
            cmd_verify(VerifyOptions { random, seed, symbolic }, format, inject_fault, out, err)
        }
        Command::Count { algo, format } => cmd_count(algo, format, out),
        Command::Bench { iters, reuse_prepared, seed, format } => cmd_bench(iters, reuse_prepared, seed, format, out, err),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_mul(
    x: &str,
    b: &str,
    algo: Algo,
    format: Format,
    float: bool,
    check: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let operands = parse_octonion(x)
        .map_err(|e| format!("invalid x: {e}"))
        .and_then(|x| parse_octonion(b).map(|b| (x, b)).map_err(|e| format!("invalid b: {e}")));
    let (x, b) = match operands {
        Ok(v) => v,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };

    let (fields, json_coeffs, agrees) = if float {
        let xf = x.map(Rational::to_f64);
        let bf = b.map(Rational::to_f64);
        let run = |a: Algo| match a {
            Algo::Direct => direct_mul(&xf, &bf),
            Algo::Fast => fast_mul(&xf, &bf),
        };
        let y = run(algo);
        let agrees = !check || relative_error(&y, &run(other(algo))) <= FLOAT_CHECK_TOLERANCE;
        let fields: Vec<String> = y.coeffs().iter().map(|&v| float_text(v)).collect();
        let json: Vec<serde_json::Value> = y.coeffs().iter().map(|&v| json!(v)).collect();
        (fields, json, agrees)
    } else {
        let run = |a: Algo| match a {
            Algo::Direct => direct_mul(&x, &b),
            Algo::Fast => fast_mul(&x, &b),
        };
        let y = run(algo);
        let agrees = !check || y == run(other(algo));
        let fields: Vec<String> = y.coeffs().iter().map(ToString::to_string).collect();
        let json = fields.iter().map(|s| json!(s)).collect();
        (fields, json, agrees)
    };

    match format {
        Format::Text => {
            let _ = writeln!(out, "{}", fields.join(","));
        }
        Format::Json => {
            let _ = writeln!(out, "{}", json!({ "coeffs": json_coeffs }));
        }
    }
    if !agrees {
        let _ = writeln!(err, "error: direct and fast products disagree");
        return EXIT_FAILURE;
    }
    EXIT_OK
}

fn other(a: Algo) -> Algo {
    match a {
        Algo::Direct => Algo::Fast,
        Algo::Fast => Algo::Direct,
    }
}

pub fn cmd_verify(
    opts: VerifyOptions,
    format: Format,
    fault: Option<FaultArg>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let report = match fault {
        None => verify::run_verification(&opts),
        Some(f) => {
            let fault = match f {
                FaultArg::TableSign => Fault::TableSign,
                FaultArg::Coefficient => Fault::Coefficient,
                FaultArg::PostStep => Fault::PostStep,
            };
            let (table, sched) = fault.inject();
            verify::run_verification_with(&opts, &table, &sched)
        }
    };
    match format {
        Format::Text => {
            let _ = write!(out, "{}", report.to_text());
        }
        Format::Json => {
            let _ = writeln!(out, "{}", report.to_json());
        }
    }
    if report.pass {
        EXIT_OK
    } else {
        let _ = writeln!(err, "verification failed");
        EXIT_FAILURE
    }
}

fn count_sample() -> (SplitOctonion<Counted<Rational>>, SplitOctonion<Counted<Rational>>) {
    let (x, b) = verify::random_pair(0, 0);
    (x.map(|c| Counted::new(c.clone())), b.map(|c| Counted::new(c.clone())))
}

fn counts_json(c: &OpCounts) -> serde_json::Value {
    json!({ "mults": c.mults, "adds": c.adds, "shifts": c.shifts })
}

/// Measured counts for `algo`; `Prepared` returns `(apply, Some(prep))`.
pub fn measure_counts(algo: CountAlgo) -> (OpCounts, Option<OpCounts>) {
    let (x, b) = count_sample();
    match algo {
        CountAlgo::Direct => (with_counting(|| direct_mul(&x, &b)).1, None),
        CountAlgo::Fast => (with_counting(|| fast_mul(&x, &b)).1, None),
        CountAlgo::Prepared => {
            let (p, prep) = with_counting(|| prepare(&b));
            (with_counting(|| apply(&p, &x)).1, Some(prep))
        }
    }
}

pub fn cmd_count(algo: CountAlgo, format: Format, out: &mut dyn Write) -> i32 {
    let (counts, prep) = measure_counts(algo);
    match format {
        Format::Text => {
            let _ = writeln!(out, "mults: {}\nadds: {}\nshifts: {}", counts.mults, counts.adds, counts.shifts);
            if let Some(p) = prep {
                let _ = writeln!(out, "prep.mults: {}\nprep.adds: {}\nprep.shifts: {}", p.mults, p.adds, p.shifts);
            }
        }
        Format::Json => {
            let mut v = counts_json(&counts);
            if let Some(p) = prep {
                v["prep"] = counts_json(&p);
            }
            let _ = writeln!(out, "{v}");
        }
    }
    EXIT_OK
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub name: &'static str,
    pub ns_per_op: f64,
    pub checksum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub rows: Vec<BenchRow>,
    pub checksums_match: bool,
}

const BENCH_RUNS: usize = 5;

fn bench_operands(n: usize, seed: u64) -> Vec<SplitOctonion<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| SplitOctonion::from_fn(|_| rng.gen_range(-1e3..=1e3))).collect()
}

fn checksum(ys: &[SplitOctonion<f64>]) -> f64 {
    ys.iter().flat_map(|y| y.coeffs()).map(|v| v.abs()).sum()
}

/// Median ns/op over five timed runs after one warmup run.
fn time_stream(n: usize, mut run: impl FnMut(&mut Vec<SplitOctonion<f64>>)) -> (f64, Vec<SplitOctonion<f64>>) {
    let mut buf = Vec::with_capacity(n);
    run(&mut buf);
    let mut samples = Vec::with_capacity(BENCH_RUNS);
    for _ in 0..BENCH_RUNS {
        buf.clear();
        let start = Instant::now();
        run(&mut buf);
        black_box(&buf);
        samples.push(start.elapsed().as_nanos() as f64 / n as f64);
    }
    samples.sort_by(f64::total_cmp);
    (samples[BENCH_RUNS / 2].max(f64::MIN_POSITIVE), buf)
}

fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Single-threaded timing of direct, fast and (optionally) prepared-apply
/// products over the same operand stream.
pub fn run_bench(iters: u64, reuse_prepared: bool, seed: u64) -> BenchResult {
    let n = iters as usize;
    let xs = bench_operands(n, seed);
    let bs = bench_operands(n, seed.wrapping_add(1));

    let (direct_ns, direct_out) = time_stream(n, |buf| {
        buf.extend(xs.iter().zip(&bs).map(|(x, b)| direct_mul(black_box(x), black_box(b))))
    });
    let (fast_ns, fast_out) = time_stream(n, |buf| {
        buf.extend(xs.iter().zip(&bs).map(|(x, b)| fast_mul(black_box(x), black_box(b))))
    });
    let direct_sum = checksum(&direct_out);
    let fast_sum = checksum(&fast_out);
    let mut matches = rel_diff(direct_sum, fast_sum) <= CHECKSUM_TOLERANCE;
    let mut rows = vec![
        BenchRow { name: "direct", ns_per_op: direct_ns, checksum: direct_sum },
        BenchRow { name: "fast", ns_per_op: fast_ns, checksum: fast_sum },
    ];

    if reuse_prepared {
        let b = &bs[0];
        let p = prepare(b);
        let (ns, ys) = time_stream(n, |buf| buf.extend(xs.iter().map(|x| apply(&p, black_box(x)))));
        let sum = checksum(&ys);
        let reference: Vec<_> = xs.iter().map(|x| direct_mul(x, b)).collect();
        matches &= rel_diff(sum, checksum(&reference)) <= CHECKSUM_TOLERANCE;
        rows.push(BenchRow { name: "prepared-apply", ns_per_op: ns, checksum: sum });
    }
    BenchResult { rows, checksums_match: matches }
}

pub fn cmd_bench(
    iters: u64,
    reuse_prepared: bool,
    seed: u64,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let result = run_bench(iters, reuse_prepared, seed);
    match format {
        Format::Text => {
            let _ = writeln!(out, "# timings depend on the machine; informational only");
            let _ = writeln!(out, "{:<16} {:>12} {:>22}", "path", "ns/op", "checksum");
            for r in &result.rows {
                let _ = writeln!(out, "{:<16} {:>12.2} {:>22.12e}", r.name, r.ns_per_op, r.checksum);
            }
            let _ = writeln!(out, "checksums_match: {}", result.checksums_match);
        }
        Format::Json => {
            let rows: Vec<_> = result
                .rows
                .iter()
                .map(|r| json!({ "path": r.name, "ns_per_op": r.ns_per_op, "checksum": r.checksum }))
                .collect();
            let _ = writeln!(out, "{}", json!({ "rows": rows, "checksums_match": result.checksums_match }));
        }
    }
    if result.checksums_match {
        EXIT_OK
    } else {
        let _ = writeln!(err, "error: benchmark checksums disagree");
        EXIT_FAILURE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_octonion_fields() {
        let o = parse_octonion("1,-2,3/4,0.5,0,0,0,-3/7").unwrap();
        assert_eq!(o.to_string(), "1,-2,3/4,1/2,0,0,0,-3/7");
        assert_eq!(parse_octonion("1,2,3"), Err(OctonionParseError::FieldCount(3)));
        assert!(matches!(
            parse_octonion("1,2,3,4,5,6,7,1/0"),
            Err(OctonionParseError::Scalar { index: 7, .. })
        ));
        assert!(parse_octonion("1,2,3,4,5,6,7,").is_err());
    }

    #[test]
    fn relative_error_is_normwise() {
        let a = SplitOctonion::new([1e6, 1e-9, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let b = SplitOctonion::new([1e6, 2e-9, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(relative_error(&a, &b) < 1e-14);
        assert_eq!(relative_error(&a, &a), 0.0);
    }

    #[test]
    fn measured_counts() {
        assert_eq!(measure_counts(CountAlgo::Direct), (OpCounts::new(64, 56, 0), None));
        assert_eq!(measure_counts(CountAlgo::Fast), (OpCounts::new(28, 92, 14), None));
        assert_eq!(
            measure_counts(CountAlgo::Prepared),
            (OpCounts::new(28, 68, 0), Some(OpCounts::new(0, 24, 14)))
        );
    }
}
