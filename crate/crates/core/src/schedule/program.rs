//! The fast product as data: a straight-line program over two tapes.
//!
//! The b-tape is seeded with `b0..b7` and the preparation steps derive the 28
//! multiplier coefficients from it. The x-tape is seeded with `x0..x7`; the
//! pre-addition steps, 28 coefficient multiplications and post-addition steps
//! then produce `y0..y7`. Tapes start zeroed, and the only operations are
//! signed two-term additions, power-of-two shifts, and coefficient products,
//! so no literal constant can ever be multiplied in.

use thiserror::Error;

use crate::octonion::SplitOctonion;
use crate::scalars::{OpCounts, ScalarRing};

use super::COEFF_COUNT;

pub type Slot = usize;

/// Operand of a signed addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term {
    pub slot: Slot,
    pub negate: bool,
}

impl Term {
    pub const fn plus(slot: Slot) -> Self {
        Term { slot, negate: false }
    }

    pub const fn minus(slot: Slot) -> Self {
        Term { slot, negate: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    /// `dst = ±lhs ± rhs`; one addition.
    Add { dst: Slot, lhs: Term, rhs: Term },
    /// `dst = src * 2^k`; one shift.
    Shift { dst: Slot, src: Slot, k: i32 },
}

impl Step {
    pub fn dst(&self) -> Slot {
        match *self {
            Step::Add { dst, .. } | Step::Shift { dst, .. } => dst,
        }
    }

    fn reads(&self) -> [Slot; 2] {
        match *self {
            Step::Add { lhs, rhs, .. } => [lhs.slot, rhs.slot],
            Step::Shift { src, .. } => [src, src],
        }
    }

    fn run<S: ScalarRing>(&self, tape: &mut [S]) {
        match *self {
            Step::Add { dst, lhs, rhs } => {
                let a = tape[lhs.slot].clone();
                let b = tape[rhs.slot].clone();
                tape[dst] = match (lhs.negate, rhs.negate) {
                    (false, false) => a + b,
                    (false, true) => a - b,
                    (true, false) => b - a,
                    (true, true) => -(a + b),
                };
            }
            Step::Shift { dst, src, k } => {
                tape[dst] = tape[src].clone().scale_pow2(k);
            }
        }
    }
}

/// `x_tape[dst] = x_tape[src] * coeffs[coeff]`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MulStep {
    pub dst: Slot,
    pub src: Slot,
    pub coeff: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("expected {COEFF_COUNT} multiplication steps, found {0}")]
    MulStepCount(usize),
    #[error("expected {COEFF_COUNT} coefficient slots, found {0}")]
    CoeffSlotCount(usize),
    #[error("{stage} step {index} reads slot {slot} before it is written")]
    ReadBeforeWrite { stage: &'static str, index: usize, slot: Slot },
    #[error("{stage} step {index} overwrites slot {slot}")]
    Overwrite { stage: &'static str, index: usize, slot: Slot },
    #[error("{stage} step {index} touches slot {slot} outside the tape")]
    OutOfTape { stage: &'static str, index: usize, slot: Slot },
    #[error("coefficient {0} is used by more than one multiplication")]
    CoeffReused(usize),
    #[error("multiplication step {0} references coefficient {1} which does not exist")]
    UnknownCoeff(usize, usize),
    #[error("output or coefficient slot {0} is never written")]
    Unwritten(Slot),
}

/// The complete fast product as an interpretable straight-line program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MulSchedule {
    pub b_tape_len: usize,
    pub prep: Vec<Step>,
    /// b-tape slot holding each of the 28 multiplier coefficients.
    pub coeff_slots: Vec<Slot>,
    pub x_tape_len: usize,
    pub pre_x: Vec<Step>,
    pub mul_steps: Vec<MulStep>,
    pub post: Vec<Step>,
    /// x-tape slots holding `y0..y7`.
    pub outputs: [Slot; 8],
}

fn step_counts(steps: &[Step]) -> OpCounts {
    steps.iter().fold(OpCounts::default(), |mut c, s| {
        match s {
            Step::Add { .. } => c.adds += 1,
            Step::Shift { .. } => c.shifts += 1,
        }
        c
    })
}

impl MulSchedule {
    /// Derives the 28 coefficients from `b`.
    pub fn eval_prepare<S: ScalarRing>(&self, b: &SplitOctonion<S>) -> Vec<S> {
        let mut tape = vec![S::zero(); self.b_tape_len];
        tape[..8].clone_from_slice(b.coeffs());
        for step in &self.prep {
            step.run(&mut tape);
        }
        self.coeff_slots.iter().map(|&s| tape[s].clone()).collect()
    }

    /// Runs the x-side program against prepared coefficients.
    pub fn eval_apply<S: ScalarRing>(&self, coeffs: &[S], x: &SplitOctonion<S>) -> SplitOctonion<S> {
        let mut tape = vec![S::zero(); self.x_tape_len];
        tape[..8].clone_from_slice(x.coeffs());
        for step in &self.pre_x {
            step.run(&mut tape);
        }
        for m in &self.mul_steps {
            tape[m.dst] = tape[m.src].clone() * coeffs[m.coeff].clone();
        }
        for step in &self.post {
            step.run(&mut tape);
        }
        SplitOctonion::from_fn(|i| tape[self.outputs[i]].clone())
    }

    pub fn evaluate<S: ScalarRing>(&self, x: &SplitOctonion<S>, b: &SplitOctonion<S>) -> SplitOctonion<S> {
        let coeffs = self.eval_prepare(b);
        self.eval_apply(&coeffs, x)
    }

    pub fn prep_counts(&self) -> OpCounts {
        step_counts(&self.prep)
    }

    pub fn apply_counts(&self) -> OpCounts {
        let mut c = step_counts(&self.pre_x) + step_counts(&self.post);
        c.mults += self.mul_steps.len() as u64;
        c
    }

    /// Operation counts read off the program text, without evaluating it.
    pub fn structural_counts(&self) -> OpCounts {
        self.prep_counts() + self.apply_counts()
    }

    /// Checks the program is well formed: single assignment, no reads of
    /// unwritten slots, exactly 28 products each using its own coefficient.
    pub fn validate(&self) -> Result<(), ScheduleError> {
        if self.mul_steps.len() != COEFF_COUNT {
            return Err(ScheduleError::MulStepCount(self.mul_steps.len()));
        }
        if self.coeff_slots.len() != COEFF_COUNT {
            return Err(ScheduleError::CoeffSlotCount(self.coeff_slots.len()));
        }

        let mut b_written = vec![false; self.b_tape_len];
        b_written[..8].fill(true);
        check_steps("prep", &self.prep, &mut b_written)?;
        for &s in &self.coeff_slots {
            if !b_written.get(s).copied().unwrap_or(false) {
                return Err(ScheduleError::Unwritten(s));
            }
        }

        let mut x_written = vec![false; self.x_tape_len];
        x_written[..8].fill(true);
        check_steps("pre_x", &self.pre_x, &mut x_written)?;
        let mut used = [false; COEFF_COUNT];
        for (index, m) in self.mul_steps.iter().enumerate() {
            if m.coeff >= COEFF_COUNT {
                return Err(ScheduleError::UnknownCoeff(index, m.coeff));
            }
            if std::mem::replace(&mut used[m.coeff], true) {
                return Err(ScheduleError::CoeffReused(m.coeff));
            }
            let stage = "mul";
            if m.src >= x_written.len() || m.dst >= x_written.len() {
                return Err(ScheduleError::OutOfTape { stage, index, slot: m.src.max(m.dst) });
            }
            if !x_written[m.src] {
                return Err(ScheduleError::ReadBeforeWrite { stage, index, slot: m.src });
            }
            if std::mem::replace(&mut x_written[m.dst], true) {
                return Err(ScheduleError::Overwrite { stage, index, slot: m.dst });
            }
        }
        check_steps("post", &self.post, &mut x_written)?;
        for &s in &self.outputs {
            if !x_written.get(s).copied().unwrap_or(false) {
                return Err(ScheduleError::Unwritten(s));
            }
        }
        Ok(())
    }
}

fn check_steps(stage: &'static str, steps: &[Step], written: &mut [bool]) -> Result<(), ScheduleError> {
    for (index, step) in steps.iter().enumerate() {
        for slot in step.reads() {
            match written.get(slot) {
                None => return Err(ScheduleError::OutOfTape { stage, index, slot }),
                Some(false) => return Err(ScheduleError::ReadBeforeWrite { stage, index, slot }),
                Some(true) => {}
            }
        }
        let dst = step.dst();
        match written.get_mut(dst) {
            None => return Err(ScheduleError::OutOfTape { stage, index, slot: dst }),
            Some(w) if *w => return Err(ScheduleError::Overwrite { stage, index, slot: dst }),
            Some(w) => *w = true,
        }
    }
    Ok(())
}

/// Appends steps to a tape that starts with eight seeded slots.
struct Builder {
    steps: Vec<Step>,
    next: Slot,
}

impl Builder {
    fn new(next: Slot) -> Self {
        Builder { steps: Vec::new(), next }
    }

    fn fresh(&mut self) -> Slot {
        let s = self.next;
        self.next += 1;
        s
    }

    fn signed(&mut self, lhs: Term, rhs: Term) -> Slot {
        let dst = self.fresh();
        self.steps.push(Step::Add { dst, lhs, rhs });
        dst
    }

    fn add(&mut self, a: Slot, b: Slot) -> Slot {
        self.signed(Term::plus(a), Term::plus(b))
    }

    fn sub(&mut self, a: Slot, b: Slot) -> Slot {
        self.signed(Term::plus(a), Term::minus(b))
    }

    fn shift(&mut self, src: Slot, k: i32) -> Slot {
        let dst = self.fresh();
        self.steps.push(Step::Shift { dst, src, k });
        dst
    }

    /// `[p0 + p2, p1 + p3, p0 - p2, p1 - p3]`, i.e. `(H2 ⊗ I2) p`.
    fn butterfly4(&mut self, p: [Slot; 4]) -> [Slot; 4] {
        [self.add(p[0], p[2]), self.add(p[1], p[3]), self.sub(p[0], p[2]), self.sub(p[1], p[3])]
    }

    /// `H2` applied to both halves: `[p0 + p1, p0 - p1, p2 + p3, p2 - p3]`.
    fn butterfly2x2(&mut self, p: [Slot; 4]) -> [Slot; 4] {
        [self.add(p[0], p[1]), self.sub(p[0], p[1]), self.add(p[2], p[3]), self.sub(p[2], p[3])]
    }

    fn into_steps(self) -> (Vec<Step>, Slot) {
        (self.steps, self.next)
    }
}

/// Correction products `(output row, x index, b index)`; each subtracts
/// `2 b_k x_j` from `y_row`. The order fixes coefficient slots 16..28.
pub(crate) const CORRECTION_TERMS: [(usize, usize, usize); 12] = [
    (1, 3, 2),
    (1, 7, 6),
    (2, 1, 3),
    (2, 5, 7),
    (3, 2, 1),
    (3, 6, 5),
    (5, 2, 7),
    (5, 6, 3),
    (6, 3, 5),
    (6, 7, 1),
    (7, 1, 6),
    (7, 5, 2),
];

pub(crate) fn build_standard() -> MulSchedule {
    // b-side
    let mut bp = Builder::new(8);
    let toeplitz_e = [bp.sub(0, 4), bp.add(1, 5), bp.add(2, 6), bp.add(3, 7)];
    let toeplitz_f = [bp.add(0, 4), bp.sub(1, 5), bp.sub(2, 6), bp.sub(3, 7)];
    // [a, b, c, d] then [a + b, a - b, c + d, c - d] = c0..c3
    let abcd = bp.butterfly4(toeplitz_e);
    let c_e = bp.butterfly2x2(abcd);
    let efgh = bp.butterfly4(toeplitz_f);
    let c_f = bp.butterfly2x2(efgh);
    let scaled_e = c_e.map(|s| bp.shift(s, -3));
    let scaled_f = c_f.map(|s| bp.shift(s, -3));
    let mut doubled = [None; 8];
    for &(_, _, k) in &CORRECTION_TERMS {
        if doubled[k].is_none() {
            doubled[k] = Some(bp.shift(k, 1));
        }
    }
    let diag = [4, 1, 2, 3];
    let mut coeff_slots = Vec::with_capacity(COEFF_COUNT);
    coeff_slots.extend(scaled_e);
    coeff_slots.extend(diag);
    coeff_slots.extend(scaled_f);
    coeff_slots.extend(diag);
    coeff_slots.extend(CORRECTION_TERMS.iter().map(|&(_, _, k)| doubled[k].unwrap()));
    let (prep, b_tape_len) = bp.into_steps();

    // x-side pre-additions
    let mut xp = Builder::new(8);
    let u = [xp.add(0, 4), xp.add(1, 5), xp.add(2, 6), xp.add(3, 7)];
    let v = [xp.sub(0, 4), xp.sub(1, 5), xp.sub(2, 6), xp.sub(3, 7)];
    let wu = xp.butterfly4(u);
    let zu = xp.butterfly2x2(wu);
    let wv = xp.butterfly4(v);
    let zv = xp.butterfly2x2(wv);
    let (pre_x, mut next) = xp.into_steps();

    // products
    let mut mul_steps = Vec::with_capacity(COEFF_COUNT);
    let mut mul = |src: Slot| {
        let dst = next;
        next += 1;
        mul_steps.push(MulStep { dst, src, coeff: mul_steps.len() });
        dst
    };
    let me = zu.map(&mut mul);
    let tu = u.map(&mut mul);
    let mf = zv.map(&mut mul);
    let tv = v.map(&mut mul);
    let corr: Vec<Slot> = CORRECTION_TERMS.iter().map(|&(_, j, _)| mul(j)).collect();

    // post-additions
    let mut pp = Builder::new(next);
    let re = pp.butterfly2x2(me);
    let he = pp.butterfly4(re);
    let rf = pp.butterfly2x2(mf);
    let hf = pp.butterfly4(rf);

    let mut e0 = pp.add(he[0], tu[0]);
    for &t in &tu[1..] {
        e0 = pp.sub(e0, t);
    }
    let mut f0 = pp.sub(hf[0], tv[0]);
    for &t in &tv[1..] {
        f0 = pp.sub(f0, t);
    }
    let e = [e0, he[1], he[2], he[3]];
    let f = [f0, hf[1], hf[2], hf[3]];
    let mut y: [Slot; 8] = [0; 8];
    for i in 0..4 {
        y[i] = pp.add(e[i], f[i]);
    }
    for i in 0..4 {
        y[4 + i] = pp.sub(e[i], f[i]);
    }
    for (&(row, _, _), &p) in CORRECTION_TERMS.iter().zip(&corr) {
        y[row] = pp.sub(y[row], p);
    }
    let (post, x_tape_len) = pp.into_steps();

    MulSchedule {
        b_tape_len,
        prep,
        coeff_slots,
        x_tape_len,
        pre_x,
        mul_steps,
        post,
        outputs: y,
    }
}
