//! Oracle harness for the fast product.
//!
//! Every checker compares against the schoolbook product or the Cayley table
//! using exact rational (or symbolic) arithmetic, and reports the first
//! failing case. Checkers that accept an alternative table, schedule, or
//! product closure exist so tests can confirm each checker actually fails
//! on a damaged implementation.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::batch;
use crate::octonion::{
    build_coeff_matrix, conjugate, direct_mul, matvec, quadratic_form, table_mul, CayleyTable, SplitOctonion,
};
use crate::scalars::{with_counting, Counted, OpCounts, Polynomial16, Rational};
use crate::schedule::{self, apply, fast_mul, prepare, toeplitz4_factor_check, BlockDecomposition, MulSchedule};

pub type RationalOct = SplitOctonion<Rational>;

/// A product implementation under test.
pub type ProductFn<'a> = &'a (dyn Fn(&RationalOct, &RationalOct) -> RationalOct + Sync);

pub const DIRECT_TARGET: OpCounts = OpCounts::new(64, 56, 0);
/// Shift count of the fast path has no published target; only mults/adds are audited.
pub const FAST_TARGET: OpCounts = OpCounts::new(28, 92, 0);
pub const MULT_SAVINGS: u64 = 36;

/// Numerators in [-99, 99], denominators in [1, 99], canonicalized.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.gen_range(-99..=99), rng.gen_range(1..=99))
}

pub fn random_octonion(rng: &mut impl Rng) -> RationalOct {
    SplitOctonion::from_fn(|_| random_rational(rng))
}

/// Generator for case `index` of stream `stream`; independent of evaluation order.
pub fn case_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((stream << 40) | index);
    rng
}

/// The `index`-th random operand pair for `seed`.
pub fn random_pair(seed: u64, index: u64) -> (RationalOct, RationalOct) {
    let mut rng = case_rng(seed, 0, index);
    (random_octonion(&mut rng), random_octonion(&mut rng))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisMismatch {
    pub path: String,
    pub i: usize,
    pub j: usize,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisFragment {
    pub passed: usize,
    pub total: usize,
    pub first_failure: Option<BasisMismatch>,
}

impl BasisFragment {
    pub fn pass(&self) -> bool {
        self.passed == self.total && self.first_failure.is_none()
    }
}

fn matrix_mul(x: &RationalOct, b: &RationalOct) -> RationalOct {
    matvec(&build_coeff_matrix(b), x)
}

/// The four product paths: coordinate formulas, table expansion, matrix, fast.
pub fn standard_paths() -> Vec<(&'static str, ProductFn<'static>)> {
    vec![
        ("direct", &|x, b| direct_mul(x, b)),
        ("table", &|x, b| table_mul(x, b)),
        ("matrix", &matrix_mul),
        ("fast", &|x, b| fast_mul(x, b)),
    ]
}

/// All 64 `e_i * e_j` through every standard path, against the standard table.
pub fn exhaustive_basis_check() -> BasisFragment {
    basis_check_with(&CayleyTable::standard(), &standard_paths())
}

pub fn basis_check_with(table: &CayleyTable, paths: &[(&str, ProductFn<'_>)]) -> BasisFragment {
    let mut passed = 0;
    let mut first_failure = None;
    for i in 0..8 {
        for j in 0..8 {
            let expected: RationalOct = table.get(i, j).to_octonion();
            let (x, b) = (RationalOct::basis(i), RationalOct::basis(j));
            let bad = paths.iter().find_map(|(name, f)| {
                let got = f(&x, &b);
                (got != expected).then(|| BasisMismatch {
                    path: name.to_string(),
                    i,
                    j,
                    expected: expected.to_string(),
                    got: got.to_string(),
                })
            });
            match bad {
                None => passed += 1,
                Some(m) => {
                    first_failure.get_or_insert(m);
                }
            }
        }
    }
    BasisFragment { passed, total: 64, first_failure }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RandomMismatch {
    pub index: u64,
    pub x: String,
    pub b: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RandomFragment {
    pub requested: usize,
    pub passed: usize,
    pub seed: u64,
    pub first_failure: Option<RandomMismatch>,
}

impl RandomFragment {
    pub fn pass(&self) -> bool {
        self.passed == self.requested && self.first_failure.is_none()
    }
}

/// `fast_mul` against `direct_mul` on `n` seeded random rational pairs.
pub fn random_equivalence(n: usize, seed: u64) -> RandomFragment {
    random_equivalence_with(n, seed, &|x, b| fast_mul(x, b))
}

pub fn random_equivalence_with(n: usize, seed: u64, candidate: ProductFn<'_>) -> RandomFragment {
    let ok = batch::map_indexed(n, |i| {
        let (x, b) = random_pair(seed, i as u64);
        candidate(&x, &b) == direct_mul(&x, &b)
    });
    let passed = ok.iter().filter(|&&v| v).count();
    let first_failure = ok.iter().position(|&v| !v).map(|i| {
        let (x, b) = random_pair(seed, i as u64);
        RandomMismatch {
            index: i as u64,
            expected: direct_mul(&x, &b).to_string(),
            got: candidate(&x, &b).to_string(),
            x: x.to_string(),
            b: b.to_string(),
        }
    });
    RandomFragment { requested: n, passed, seed, first_failure }
}

/// Equivalence on explicitly given pairs; `seed` is recorded only.
pub fn equivalence_on_pairs(pairs: &[(RationalOct, RationalOct)], candidate: ProductFn<'_>) -> RandomFragment {
    let mut passed = 0;
    let mut first_failure = None;
    for (i, (x, b)) in pairs.iter().enumerate() {
        let expected = direct_mul(x, b);
        let got = candidate(x, b);
        if got == expected {
            passed += 1;
        } else if first_failure.is_none() {
            first_failure = Some(RandomMismatch {
                index: i as u64,
                x: x.to_string(),
                b: b.to_string(),
                expected: expected.to_string(),
                got: got.to_string(),
            });
        }
    }
    RandomFragment { requested: pairs.len(), passed, seed: 0, first_failure }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolicMismatch {
    pub path: String,
    pub output: usize,
    /// `got - expected`, nonzero.
    pub difference: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolicFragment {
    pub pass: bool,
    pub outputs_matched: usize,
    pub toeplitz_identities: bool,
    pub first_failure: Option<SymbolicMismatch>,
}

fn symbolic_operands() -> (SplitOctonion<Polynomial16>, SplitOctonion<Polynomial16>) {
    (SplitOctonion::from_fn(Polynomial16::x), SplitOctonion::from_fn(Polynomial16::b))
}

/// The eight `y_i` as polynomials in `x0..x7, b0..b7`.
pub fn reference_polynomials() -> SplitOctonion<Polynomial16> {
    let (x, b) = symbolic_operands();
    direct_mul(&x, &b)
}

fn compare_symbolic(
    path: &str,
    got: &SplitOctonion<Polynomial16>,
    expected: &SplitOctonion<Polynomial16>,
) -> (usize, Option<SymbolicMismatch>) {
    let mut matched = 0;
    let mut first = None;
    for i in 0..8 {
        if got[i] == expected[i] {
            matched += 1;
        } else if first.is_none() {
            first = Some(SymbolicMismatch {
                path: path.to_string(),
                output: i,
                difference: (got[i].clone() - expected[i].clone()).to_string(),
            });
        }
    }
    (matched, first)
}

/// Replays the standard schedule and the unrolled evaluator over symbolic
/// operands, and checks the Toeplitz block identities.
pub fn symbolic_check() -> SymbolicFragment {
    let mut frag = symbolic_check_with(schedule::schedule_as_data());
    let (x, b) = symbolic_operands();
    let (matched, failure) = compare_symbolic("unrolled", &fast_mul(&x, &b), &reference_polynomials());
    frag.outputs_matched = frag.outputs_matched.min(matched);
    if frag.first_failure.is_none() {
        frag.first_failure = failure;
    }
    frag.pass = frag.pass && frag.first_failure.is_none();
    frag
}

pub fn symbolic_check_with(schedule: &MulSchedule) -> SymbolicFragment {
    let (x, b) = symbolic_operands();
    let got = schedule.evaluate(&x, &b);
    let (outputs_matched, first_failure) = compare_symbolic("schedule", &got, &reference_polynomials());
    let blocks = BlockDecomposition::new(&b);
    let toeplitz_identities = toeplitz4_factor_check(&blocks) && blocks.butterfly_split_holds(&b);
    SymbolicFragment {
        pass: first_failure.is_none() && toeplitz_identities,
        outputs_matched,
        toeplitz_identities,
        first_failure,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountAudit {
    pub direct: OpCounts,
    pub fast: OpCounts,
    pub prep: OpCounts,
    pub prepared_apply: OpCounts,
    pub structural: OpCounts,
    pub direct_target: OpCounts,
    pub fast_target: OpCounts,
    pub mult_savings: i64,
    pub direct_total: u64,
    pub fast_total: u64,
    pub pass: bool,
    pub mismatches: Vec<String>,
}

fn measure<T>(f: impl FnOnce() -> T) -> OpCounts {
    with_counting(f).1
}

/// Measures direct and fast products under the counting scalar.
pub fn count_audit() -> CountAudit {
    let (x, b) = random_pair(0x5eed, 0);
    let x = x.map(|c| Counted::new(c.clone()));
    let b = b.map(|c| Counted::new(c.clone()));

    let direct = measure(|| direct_mul(&x, &b));
    let fast = measure(|| fast_mul(&x, &b));
    let prepared = prepare(&b);
    let prep = measure(|| prepare(&b));
    let prepared_apply = measure(|| apply(&prepared, &x));
    let structural = schedule::schedule_as_data().structural_counts();

    let mut mismatches = Vec::new();
    let mut expect = |what: &str, got: (u64, u64), want: (u64, u64)| {
        if got != want {
            mismatches.push(format!("{what}: measured {}/{}, target {}/{}", got.0, got.1, want.0, want.1));
        }
    };
    expect("direct", (direct.mults, direct.adds), (DIRECT_TARGET.mults, DIRECT_TARGET.adds));
    expect("fast", (fast.mults, fast.adds), (FAST_TARGET.mults, FAST_TARGET.adds));
    expect("structural", (structural.mults, structural.adds), (fast.mults, fast.adds));
    expect("prepared apply", (prepared_apply.mults, 0), (FAST_TARGET.mults, 0));
    if prep.mults != 0 {
        mismatches.push(format!("preparation spent {} multiplications", prep.mults));
    }
    if structural.shifts != fast.shifts {
        mismatches.push(format!("shifts: measured {}, structural {}", fast.shifts, structural.shifts));
    }
    let mult_savings = direct.mults as i64 - fast.mults as i64;
    if mult_savings != MULT_SAVINGS as i64 {
        mismatches.push(format!("savings: measured {mult_savings}, target {MULT_SAVINGS}"));
    }
    let (direct_total, fast_total) = (direct.arithmetic_total(), fast.arithmetic_total());
    if direct_total != fast_total {
        mismatches.push(format!("total work: direct {direct_total}, fast {fast_total}"));
    }

    CountAudit {
        direct,
        fast,
        prep,
        prepared_apply,
        structural,
        direct_target: DIRECT_TARGET,
        fast_target: FAST_TARGET,
        mult_savings,
        direct_total,
        fast_total,
        pass: mismatches.is_empty(),
        mismatches,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyOutcome {
    pub name: String,
    pub samples: usize,
    pub passed: bool,
    pub counterexample: Option<String>,
}

/// Checks `holds` on the fixed cases first, then on `samples` random cases
/// drawn from stream `stream`, reporting the first failure in that order.
#[allow(clippy::too_many_arguments)]
pub fn run_property<T>(
    name: &str,
    seed: u64,
    stream: u64,
    samples: usize,
    fixed: &[T],
    draw: impl Fn(&mut ChaCha8Rng) -> T + Sync + Send,
    holds: impl Fn(&T) -> bool + Sync + Send,
    show: impl Fn(&T) -> String,
) -> PropertyOutcome
where
    T: Send,
{
    let counterexample = match fixed.iter().find(|c| !holds(c)) {
        Some(c) => Some(show(c)),
        None => batch::find_first(samples, |i| !holds(&draw(&mut case_rng(seed, stream, i as u64))))
            .map(|i| show(&draw(&mut case_rng(seed, stream, i as u64)))),
    };
    PropertyOutcome {
        name: name.to_string(),
        samples: fixed.len() + samples,
        passed: counterexample.is_none(),
        counterexample,
    }
}

fn basis_pairs() -> Vec<(RationalOct, RationalOct)> {
    (0..8)
        .flat_map(|i| (0..8).map(move |j| (RationalOct::basis(i), RationalOct::basis(j))))
        .collect()
}

fn draw_pair(rng: &mut ChaCha8Rng) -> (RationalOct, RationalOct) {
    (random_octonion(rng), random_octonion(rng))
}

fn show_pair((x, b): &(RationalOct, RationalOct)) -> String {
    format!("x = {x}; b = {b}")
}

/// `x * b == b * x`; false for this algebra, kept to show the harness can fail.
pub fn commutativity_property(seed: u64, samples: usize) -> PropertyOutcome {
    run_property(
        "commutativity",
        seed,
        99,
        samples,
        &basis_pairs(),
        draw_pair,
        |(x, b)| direct_mul(x, b) == direct_mul(b, x),
        show_pair,
    )
}

/// The structural laws of the algebra, on the basis pairs and `samples`
/// random rational cases each.
pub fn property_suite(seed: u64, samples: usize) -> Vec<PropertyOutcome> {
    let basis = basis_pairs();
    let mut out = vec![
        run_property(
            "norm multiplicativity",
            seed,
            1,
            samples,
            &basis,
            draw_pair,
            |(x, y)| quadratic_form(&direct_mul(x, y)) == quadratic_form(x) * quadratic_form(y),
            show_pair,
        ),
        run_property(
            "left alternative law",
            seed,
            2,
            samples,
            &basis,
            draw_pair,
            |(x, y)| direct_mul(&direct_mul(x, x), y) == direct_mul(x, &direct_mul(x, y)),
            show_pair,
        ),
        run_property(
            "right alternative law",
            seed,
            3,
            samples,
            &basis,
            draw_pair,
            |(x, y)| direct_mul(&direct_mul(y, x), x) == direct_mul(y, &direct_mul(x, x)),
            show_pair,
        ),
        run_property(
            "conjugation anti-automorphism",
            seed,
            4,
            samples,
            &basis,
            draw_pair,
            |(x, y)| conjugate(&direct_mul(x, y)) == direct_mul(&conjugate(y), &conjugate(x)),
            show_pair,
        ),
    ];

    type Quad = (Rational, RationalOct, RationalOct, RationalOct);
    let draw_quad = |rng: &mut ChaCha8Rng| -> Quad {
        (random_rational(rng), random_octonion(rng), random_octonion(rng), random_octonion(rng))
    };
    let show_quad = |(a, p, q, r): &Quad| format!("alpha = {a}; u = {p}; v = {q}; w = {r}");
    out.push(run_property(
        "bilinearity (left operand)",
        seed,
        5,
        samples,
        &[],
        draw_quad,
        |(a, x, x2, b)| {
            direct_mul(&(x.scalar_mul(a) + x2.clone()), b) == direct_mul(x, b).scalar_mul(a) + direct_mul(x2, b)
        },
        show_quad,
    ));
    out.push(run_property(
        "bilinearity (right operand)",
        seed,
        6,
        samples,
        &[],
        draw_quad,
        |(a, b, b2, x)| {
            direct_mul(x, &(b.scalar_mul(a) + b2.clone())) == direct_mul(x, b).scalar_mul(a) + direct_mul(x, b2)
        },
        show_quad,
    ));

    let p = SplitOctonion::new([1, 0, 0, 0, 1, 0, 0, 0].map(Rational::from_integer));
    let q = SplitOctonion::new([1, 0, 0, 0, -1, 0, 0, 0].map(Rational::from_integer));
    out.push(run_property(
        "zero divisor (1 + e4)(1 - e4) = 0",
        seed,
        7,
        0,
        &[(p, q)],
        draw_pair,
        |(p, q)| !p.is_zero() && !q.is_zero() && direct_mul(p, q).is_zero() && fast_mul(p, q).is_zero(),
        show_pair,
    ));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VerifyOptions {
    pub random: usize,
    pub seed: u64,
    pub symbolic: bool,
}

/// Result of a full verification run. Contains no timings, so equal
/// options always produce byte-identical renderings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub basis: BasisFragment,
    pub random: RandomFragment,
    pub symbolic: Option<SymbolicFragment>,
    pub counts: CountAudit,
    pub pass: bool,
}

/// A deliberate defect, used to confirm the harness can fail end to end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// `e5 * e6` sign flipped in the reference table.
    TableSign,
    /// `c0` scaled by 1/4 instead of 1/8 in the schedule's preparation.
    Coefficient,
    /// Last post-addition removed from the schedule.
    PostStep,
}

impl Fault {
    pub fn inject(self) -> (CayleyTable, MulSchedule) {
        let mut table = CayleyTable::standard();
        let mut sched = MulSchedule::standard();
        match self {
            Fault::TableSign => {
                let e = table.get(5, 6);
                table = table.with_entry(5, 6, e.negated());
            }
            Fault::Coefficient => {
                let target = sched.coeff_slots[0];
                for step in &mut sched.prep {
                    if let schedule::Step::Shift { dst, k, .. } = step {
                        if *dst == target {
                            *k += 1;
                        }
                    }
                }
            }
            Fault::PostStep => {
                sched.post.pop();
            }
        }
        (table, sched)
    }
}

/// Full verification of the standard table, schedule, and unrolled product.
pub fn run_verification(opts: &VerifyOptions) -> VerificationReport {
    let mut paths = standard_paths();
    let interpreted = |x: &RationalOct, b: &RationalOct| schedule::schedule_as_data().evaluate(x, b);
    paths.push(("schedule", &interpreted));
    let basis = basis_check_with(&CayleyTable::standard(), &paths);
    let random = random_equivalence(opts.random, opts.seed);
    let symbolic = opts.symbolic.then(symbolic_check);
    assemble(basis, random, symbolic)
}

/// Verification against an arbitrary table and interpreted schedule.
pub fn run_verification_with(opts: &VerifyOptions, table: &CayleyTable, sched: &MulSchedule) -> VerificationReport {
    let interpreted = |x: &RationalOct, b: &RationalOct| sched.evaluate(x, b);
    let paths: Vec<(&str, ProductFn<'_>)> = vec![
        ("direct", &|x, b| direct_mul(x, b)),
        ("table", &|x, b| table_mul(x, b)),
        ("matrix", &matrix_mul),
        ("schedule", &interpreted),
    ];
    let basis = basis_check_with(table, &paths);
    let random = random_equivalence_with(opts.random, opts.seed, &interpreted);
    let symbolic = opts.symbolic.then(|| symbolic_check_with(sched));
    assemble(basis, random, symbolic)
}

fn assemble(basis: BasisFragment, random: RandomFragment, symbolic: Option<SymbolicFragment>) -> VerificationReport {
    let counts = count_audit();
    if let Some(s) = &symbolic {
        assert!(
            !s.pass || random.pass(),
            "harness bug: symbolic identity holds but a sampled case failed"
        );
    }
    let pass = basis.pass() && random.pass() && symbolic.as_ref().is_none_or(|s| s.pass) && counts.pass;
    VerificationReport { basis, random, symbolic, counts, pass }
}

fn fmt_counts(c: &OpCounts) -> String {
    format!("mults={} adds={} shifts={}", c.mults, c.adds, c.shifts)
}

impl VerificationReport {
    /// `key: value` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let w = &mut s;
        let _ = writeln!(w, "basis: {}/{}", self.basis.passed, self.basis.total);
        match &self.basis.first_failure {
            None => {
                let _ = writeln!(w, "basis.first_failure: none");
            }
            Some(m) => {
                let _ = writeln!(
                    w,
                    "basis.first_failure: path={} i={} j={} expected={} got={}",
                    m.path, m.i, m.j, m.expected, m.got
                );
            }
        }
        let _ = writeln!(w, "random: {}/{}", self.random.passed, self.random.requested);
        let _ = writeln!(w, "random.seed: {}", self.random.seed);
        match &self.random.first_failure {
            None => {
                let _ = writeln!(w, "random.first_failure: none");
            }
            Some(m) => {
                let _ = writeln!(
                    w,
                    "random.first_failure: index={} x={} b={} expected={} got={}",
                    m.index, m.x, m.b, m.expected, m.got
                );
            }
        }
        match &self.symbolic {
            None => {
                let _ = writeln!(w, "symbolic: skipped");
            }
            Some(sym) => {
                let _ = writeln!(w, "symbolic: {}", if sym.pass { "pass" } else { "fail" });
                let _ = writeln!(w, "symbolic.outputs_matched: {}/8", sym.outputs_matched);
                let _ = writeln!(w, "symbolic.toeplitz_identities: {}", sym.toeplitz_identities);
                if let Some(m) = &sym.first_failure {
                    let _ = writeln!(w, "symbolic.first_failure: path={} y{} difference={}", m.path, m.output, m.difference);
                }
            }
        }
        let c = &self.counts;
        let _ = writeln!(w, "counts.direct: {}", fmt_counts(&c.direct));
        let _ = writeln!(w, "counts.direct_target: mults={} adds={}", c.direct_target.mults, c.direct_target.adds);
        let _ = writeln!(w, "counts.fast: {}", fmt_counts(&c.fast));
        let _ = writeln!(w, "counts.fast_target: mults={} adds={}", c.fast_target.mults, c.fast_target.adds);
        let _ = writeln!(w, "counts.prep: {}", fmt_counts(&c.prep));
        let _ = writeln!(w, "counts.prepared_apply: {}", fmt_counts(&c.prepared_apply));
        let _ = writeln!(w, "counts.mult_savings: {}", c.mult_savings);
        let _ = writeln!(w, "counts.total: direct={} fast={}", c.direct_total, c.fast_total);
        for m in &c.mismatches {
            let _ = writeln!(w, "counts.mismatch: {m}");
        }
        let _ = writeln!(w, "pass: {}", self.pass);
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
