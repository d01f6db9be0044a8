//! Split-octonion product with 28 multiplications and 92 additions.
//!
//! `B8(b)` is split as a 2x2 block butterfly `[[P, Q], [Q, P]]` plus a
//! sparse correction. The butterfly halves `P + Q` and `P - Q` are each a
//! symmetric Toeplitz matrix plus a single-row term; the Toeplitz parts are
//! diagonalized by two levels of `H2` butterflies (4 products each), the
//! single rows need `diag(b4, b1, b2, b3)` (4 products each) and the
//! correction has twelve entries `-2 b_k`. Every `1/2` and `1/4` factor is
//! folded into the b-side coefficients.
//!
//! Coefficient layout of a [`PreparedMultiplier`]:
//!
//! | slots    | value                                   |
//! |----------|-----------------------------------------|
//! | 0..4     | `c0/8 .. c3/8`                          |
//! | 4..8     | `b4, b1, b2, b3` (applied to `x_lo + x_hi`) |
//! | 8..12    | `c4/8 .. c7/8`                          |
//! | 12..16   | `b4, b1, b2, b3` (applied to `x_lo - x_hi`) |
//! | 16..28   | `2 b_k` correction terms                |
//!
//! [`apply`] is the hand-unrolled evaluator; [`schedule_as_data`] returns
//! the same algorithm as an interpretable [`MulSchedule`].

mod blocks;
mod program;

use std::ops::Range;
use std::sync::OnceLock;

use crate::octonion::SplitOctonion;
use crate::scalars::{OpCounts, ScalarRing};

pub use blocks::{toeplitz4_factor_check, BlockDecomposition, SquareMatrix};
pub use program::{MulSchedule, MulStep, ScheduleError, Slot, Step, Term};

pub const COEFF_COUNT: usize = 28;
pub const E_PATH: Range<usize> = 0..4;
pub const T4_SUM: Range<usize> = 4..8;
pub const F_PATH: Range<usize> = 8..12;
pub const T4_DIFF: Range<usize> = 12..16;
pub const CORRECTION: Range<usize> = 16..28;

/// Operation counts of [`prepare`].
pub const PREP_COUNTS: OpCounts = OpCounts::new(0, 24, 14);
/// Operation counts of [`apply`].
pub const APPLY_COUNTS: OpCounts = OpCounts::new(28, 68, 0);
/// Operation counts of one complete [`fast_mul`].
pub const FAST_COUNTS: OpCounts = OpCounts::new(28, 92, 14);

/// The 28 b-dependent coefficients of the fast product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreparedMultiplier<S> {
    coeffs: [S; COEFF_COUNT],
}

impl<S> PreparedMultiplier<S> {
    pub fn coeffs(&self) -> &[S; COEFF_COUNT] {
        &self.coeffs
    }

    /// Builds a multiplier from raw coefficients. Nothing checks that they
    /// came from [`prepare`].
    pub fn from_coeffs(coeffs: [S; COEFF_COUNT]) -> Self {
        PreparedMultiplier { coeffs }
    }

    /// Operation counts spent by [`prepare`]; no multiplications.
    pub fn prep_counts(&self) -> OpCounts {
        PREP_COUNTS
    }
}

impl<S: ScalarRing> PreparedMultiplier<S> {
    /// `c0..c7` without the folded `1/8` factor.
    pub fn unscaled_c(&self) -> [S; 8] {
        let mut it = self.coeffs[E_PATH].iter().chain(&self.coeffs[F_PATH]);
        std::array::from_fn(|_| it.next().unwrap().clone().scale_pow2(3))
    }

    /// The `diag(b4, b1, b2, b3)` slots used on the sum half.
    pub fn t4_coeffs(&self) -> &[S] {
        &self.coeffs[T4_SUM]
    }
}

fn butterfly4<S: ScalarRing>(p: [S; 4]) -> [S; 4] {
    let [p0, p1, p2, p3] = p;
    [
        p0.clone() + p2.clone(),
        p1.clone() + p3.clone(),
        p0 - p2,
        p1 - p3,
    ]
}

fn butterfly2x2<S: ScalarRing>(p: [S; 4]) -> [S; 4] {
    let [p0, p1, p2, p3] = p;
    [
        p0.clone() + p1.clone(),
        p0 - p1,
        p2.clone() + p3.clone(),
        p2 - p3,
    ]
}

/// Derives the 28 coefficients from `b` with 24 additions and 14 shifts.
pub fn prepare<S: ScalarRing>(b: &SplitOctonion<S>) -> PreparedMultiplier<S> {
    let [b0, b1, b2, b3, b4, b5, b6, b7] = b.coeffs().clone();

    let toeplitz_e = [
        b0.clone() - b4.clone(),
        b1.clone() + b5.clone(),
        b2.clone() + b6.clone(),
        b3.clone() + b7.clone(),
    ];
    let toeplitz_f = [
        b0 + b4.clone(),
        b1.clone() - b5.clone(),
        b2.clone() - b6.clone(),
        b3.clone() - b7.clone(),
    ];
    let c_e = butterfly2x2(butterfly4(toeplitz_e)).map(|c| c.scale_pow2(-3));
    let c_f = butterfly2x2(butterfly4(toeplitz_f)).map(|c| c.scale_pow2(-3));

    let d1 = b1.clone().scale_pow2(1);
    let d2 = b2.clone().scale_pow2(1);
    let d3 = b3.clone().scale_pow2(1);
    let d5 = b5.scale_pow2(1);
    let d6 = b6.scale_pow2(1);
    let d7 = b7.scale_pow2(1);

    let [e0, e1, e2, e3] = c_e;
    let [f0, f1, f2, f3] = c_f;
    PreparedMultiplier {
        coeffs: [
            e0, e1, e2, e3,
            b4.clone(), b1.clone(), b2.clone(), b3.clone(),
            f0, f1, f2, f3,
            b4, b1, b2, b3,
            d2.clone(), d6.clone(), d3.clone(), d7.clone(), d1.clone(), d5.clone(),
            d7, d3, d5, d1, d6, d2,
        ],
    }
}

/// One Toeplitz half: `H2` butterflies around four coefficient products.
fn toeplitz_half<S: ScalarRing>(c: &[S], u: [S; 4]) -> [S; 4] {
    let z = butterfly2x2(butterfly4(u));
    let mut k = c.iter();
    let m = z.map(|zi| k.next().unwrap().clone() * zi);
    butterfly4(butterfly2x2(m))
}

/// Computes `x * b` from a prepared `b` with 28 multiplications and 68
/// additions.
pub fn apply<S: ScalarRing>(p: &PreparedMultiplier<S>, x: &SplitOctonion<S>) -> SplitOctonion<S> {
    let k = &p.coeffs;
    let xs = x.coeffs();
    let u: [S; 4] = std::array::from_fn(|i| xs[i].clone() + xs[i + 4].clone());
    let v: [S; 4] = std::array::from_fn(|i| xs[i].clone() - xs[i + 4].clone());

    let mut e = toeplitz_half(&k[E_PATH], u.clone());
    let mut f = toeplitz_half(&k[F_PATH], v.clone());

    let mut tu = k[T4_SUM].iter().zip(u).map(|(c, ui)| c.clone() * ui);
    let mut tv = k[T4_DIFF].iter().zip(v).map(|(c, vi)| c.clone() * vi);
    let [t0, t1, t2, t3] = std::array::from_fn(|_| tu.next().unwrap());
    let [s0, s1, s2, s3] = std::array::from_fn(|_| tv.next().unwrap());

    // single-row corrections: +(b4, -b1, -b2, -b3) on the sum half,
    // -(b4, b1, b2, b3) on the difference half
    let [e0, ..] = &mut e;
    *e0 = e0.clone() + t0 - t1 - t2 - t3;
    let [f0, ..] = &mut f;
    *f0 = f0.clone() - s0 - s1 - s2 - s3;

    let [e0, e1, e2, e3] = e;
    let [f0, f1, f2, f3] = f;
    let m = |slot: usize, j: usize| k[slot].clone() * xs[j].clone();
    let y0 = e0.clone() + f0.clone();
    let y1 = e1.clone() + f1.clone() - m(16, 3) - m(17, 7);
    let y2 = e2.clone() + f2.clone() - m(18, 1) - m(19, 5);
    let y3 = e3.clone() + f3.clone() - m(20, 2) - m(21, 6);
    let y4 = e0 - f0;
    let y5 = e1 - f1 - m(22, 2) - m(23, 6);
    let y6 = e2 - f2 - m(24, 3) - m(25, 7);
    let y7 = e3 - f3 - m(26, 1) - m(27, 5);

    SplitOctonion::new([y0, y1, y2, y3, y4, y5, y6, y7])
}

/// `x * b` via [`prepare`] and [`apply`]: 28 multiplications, 92 additions.
pub fn fast_mul<S: ScalarRing>(x: &SplitOctonion<S>, b: &SplitOctonion<S>) -> SplitOctonion<S> {
    apply(&prepare(b), x)
}

/// The fast product as an immutable, interpretable program.
pub fn schedule_as_data() -> &'static MulSchedule {
    static SCHEDULE: OnceLock<MulSchedule> = OnceLock::new();
    SCHEDULE.get_or_init(program::build_standard)
}

impl MulSchedule {
    pub fn standard() -> MulSchedule {
        schedule_as_data().clone()
    }

    /// Interprets the preparation steps into a [`PreparedMultiplier`].
    pub fn prepare<S: ScalarRing>(&self, b: &SplitOctonion<S>) -> Option<PreparedMultiplier<S>> {
        let coeffs: [S; COEFF_COUNT] = self.eval_prepare(b).try_into().ok()?;
        Some(PreparedMultiplier { coeffs })
    }
}
