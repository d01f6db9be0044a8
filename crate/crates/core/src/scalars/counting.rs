use std::cell::Cell;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::ScalarRing;

/// Tally of arithmetic events for one computation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpCounts {
    pub mults: u64,
    pub adds: u64,
    pub shifts: u64,
}

impl OpCounts {
    pub const fn new(mults: u64, adds: u64, shifts: u64) -> Self {
        OpCounts { mults, adds, shifts }
    }

    /// Multiplications plus additions; shifts are not counted.
    pub const fn arithmetic_total(&self) -> u64 {
        self.mults + self.adds
    }
}

impl Add for OpCounts {
    type Output = OpCounts;
    fn add(self, rhs: OpCounts) -> OpCounts {
        OpCounts {
            mults: self.mults + rhs.mults,
            adds: self.adds + rhs.adds,
            shifts: self.shifts + rhs.shifts,
        }
    }
}

impl AddAssign for OpCounts {
    fn add_assign(&mut self, rhs: OpCounts) {
        *self = *self + rhs;
    }
}

thread_local! {
    static TALLY: Cell<OpCounts> = const { Cell::new(OpCounts::new(0, 0, 0)) };
}

fn bump(f: impl FnOnce(&mut OpCounts)) {
    TALLY.with(|t| {
        let mut c = t.get();
        f(&mut c);
        t.set(c);
    });
}

struct Frame {
    outer: OpCounts,
}

impl Drop for Frame {
    fn drop(&mut self) {
        // Fold the inner tally into the enclosing one so nested measurements
        // stay additive.
        TALLY.with(|t| t.set(self.outer + t.get()));
    }
}

/// Runs `computation` with a fresh tally and returns its result together with
/// the arithmetic performed on [`Counted`] values inside it.
///
/// Tallies are per thread, so concurrent invocations on different threads do
/// not interfere. Nested calls report their own counts and also contribute
/// them to the enclosing call.
pub fn with_counting<T>(computation: impl FnOnce() -> T) -> (T, OpCounts) {
    let frame = Frame {
        outer: TALLY.with(|t| t.replace(OpCounts::default())),
    };
    let result = computation();
    let counts = TALLY.with(|t| t.get());
    drop(frame);
    (result, counts)
}

/// Scalar wrapper that records every arithmetic event in the current tally.
///
/// Additions and subtractions count as adds, `scale_pow2` counts as a shift,
/// and a product counts as a multiplication unless one side was created with
/// [`Counted::power_of_two`], in which case it is a shift. Negation is free.
#[derive(Debug, Clone)]
pub struct Counted<S> {
    value: S,
    pow2: Option<i32>,
}

impl<S> Counted<S> {
    pub fn new(value: S) -> Self {
        Counted { value, pow2: None }
    }

    pub fn value(&self) -> &S {
        &self.value
    }

    pub fn into_inner(self) -> S {
        self.value
    }
}

impl<S: ScalarRing> Counted<S> {
    /// The constant `2^k`, tagged so that multiplying by it counts as a shift.
    pub fn power_of_two(k: i32) -> Self {
        Counted {
            value: S::one().scale_pow2(k),
            pow2: Some(k),
        }
    }
}

impl<S: PartialEq> PartialEq for Counted<S> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl<S: ScalarRing> Add for Counted<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        bump(|c| c.adds += 1);
        Counted::new(self.value + rhs.value)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<S: ScalarRing> Sub for Counted<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        bump(|c| c.adds += 1);
        Counted::new(self.value - rhs.value)
    }
}

impl<S: ScalarRing> Neg for Counted<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Counted::new(-self.value)
    }
}

impl<S: ScalarRing> Mul for Counted<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        match (self.pow2, rhs.pow2) {
            (Some(j), Some(k)) => Counted::power_of_two(j + k),
            (Some(k), None) => rhs.scale_pow2(k),
            (None, Some(k)) => self.scale_pow2(k),
            (None, None) => {
                bump(|c| c.mults += 1);
                Counted::new(self.value * rhs.value)
            }
        }
    }
}

impl<S: ScalarRing> ScalarRing for Counted<S> {
    fn zero() -> Self {
        Counted::new(S::zero())
    }

    fn one() -> Self {
        Counted::new(S::one())
    }

    fn scale_pow2(self, k: i32) -> Self {
        bump(|c| c.shifts += 1);
        Counted::new(self.value.scale_pow2(k))
    }
}
