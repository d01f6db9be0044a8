//! Block structure of `B8(b)` behind the fast product, kept as explicit
//! matrices so each factorization step can be checked as an identity.

use std::fmt;

use crate::octonion::{build_coeff_matrix, SplitOctonion};
use crate::scalars::ScalarRing;

/// Small dense square matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct SquareMatrix<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for SquareMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.n)).finish()
    }
}

impl<S: ScalarRing> SquareMatrix<S> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(f(r, c));
            }
        }
        SquareMatrix { n, data }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_fn(n, |_, _| S::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |r, c| if r == c { S::one() } else { S::zero() })
    }

    /// `[[1, 1], [1, -1]]`
    pub fn h2() -> Self {
        Self::from_fn(2, |r, c| if r == 1 && c == 1 { -S::one() } else { S::one() })
    }

    /// `[[a, b], [b, a]]` for square blocks `a`, `b` of equal size.
    pub fn block_symmetric(a: &Self, b: &Self) -> Self {
        assert_eq!(a.n, b.n);
        let h = a.n;
        Self::from_fn(2 * h, |r, c| {
            let diag = (r < h) == (c < h);
            let src = if diag { a } else { b };
            src.get(r % h, c % h).clone()
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.n + c]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        Self::from_fn(self.n, |r, c| {
            (0..self.n).fold(S::zero(), |acc, k| acc + self.get(r, k).clone() * rhs.get(k, c).clone())
        })
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        Self::from_fn(self.n, |r, c| self.get(r, c).clone() + rhs.get(r, c).clone())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        Self::from_fn(self.n, |r, c| self.get(r, c).clone() - rhs.get(r, c).clone())
    }

    pub fn scale_pow2(&self, k: i32) -> Self {
        Self::from_fn(self.n, |r, c| self.get(r, c).clone().scale_pow2(k))
    }

    /// Block-diagonal `self ⊕ rhs`.
    pub fn direct_sum(&self, rhs: &Self) -> Self {
        let n = self.n + rhs.n;
        Self::from_fn(n, |r, c| match (r < self.n, c < self.n) {
            (true, true) => self.get(r, c).clone(),
            (false, false) => rhs.get(r - self.n, c - self.n).clone(),
            _ => S::zero(),
        })
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let m = rhs.n;
        Self::from_fn(self.n * m, |r, c| self.get(r / m, c / m).clone() * rhs.get(r % m, c % m).clone())
    }

    pub fn is_symmetric_toeplitz(&self) -> bool {
        (0..self.n).all(|r| (0..self.n).all(|c| self.get(r, c) == self.get(0, r.abs_diff(c))))
    }

    /// Leading `k x k` sub-block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, k: usize) -> Self {
        Self::from_fn(k, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    /// `[[A, B], [B, A]]` with `A`, `B` symmetric Toeplitz; the shape the
    /// 4x4 Toeplitz stage relies on.
    pub fn is_symmetric_block_toeplitz(&self) -> bool {
        if !self.n.is_multiple_of(2) {
            return false;
        }
        let h = self.n / 2;
        let a = self.block(0, 0, h);
        let b = self.block(0, h, h);
        a.is_symmetric_toeplitz() && b.is_symmetric_toeplitz() && Self::block_symmetric(&a, &b) == *self
    }
}

/// Build a matrix from `±b_k` entries of a 4x4 layout.
fn signed_sum4<S: ScalarRing>(b: &[S; 8], layout: [[&[(i8, usize)]; 4]; 4]) -> SquareMatrix<S> {
    SquareMatrix::from_fn(4, |r, c| {
        layout[r][c].iter().fold(S::zero(), |acc, &(sign, k)| {
            if sign < 0 {
                acc - b[k].clone()
            } else {
                acc + b[k].clone()
            }
        })
    })
}

fn two_by_two<S: ScalarRing>(a: S, b: S) -> SquareMatrix<S> {
    SquareMatrix::from_fn(2, |r, c| if r == c { a.clone() } else { b.clone() })
}

/// The intermediate blocks of the factorization for one right operand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition<S> {
    /// Butterfly halves of `B8` before the Toeplitz split.
    pub e4_0: SquareMatrix<S>,
    pub f4_0: SquareMatrix<S>,
    pub e4_1: SquareMatrix<S>,
    pub f4_1: SquareMatrix<S>,
    pub m4_1: SquareMatrix<S>,
    pub m4_2: SquareMatrix<S>,
    pub a2: SquareMatrix<S>,
    pub b2: SquareMatrix<S>,
    pub c2: SquareMatrix<S>,
    pub d2: SquareMatrix<S>,
    pub e2_0: SquareMatrix<S>,
    pub f2_0: SquareMatrix<S>,
    pub k2_0: SquareMatrix<S>,
    pub l2_0: SquareMatrix<S>,
}

impl<S: ScalarRing> BlockDecomposition<S> {
    pub fn new(b: &SplitOctonion<S>) -> Self {
        let bc = b.coeffs();
        let s = |k: usize| bc[k].clone();
        const P: i8 = 1;
        const M: i8 = -1;

        let e4_0 = signed_sum4(
            bc,
            [
                [&[(P, 0), (P, 4)], &[(M, 1), (P, 5)], &[(M, 2), (P, 6)], &[(M, 3), (P, 7)]],
                [&[(P, 1), (P, 5)], &[(P, 0), (M, 4)], &[(P, 3), (P, 7)], &[(P, 2), (P, 6)]],
                [&[(P, 2), (P, 6)], &[(P, 3), (P, 7)], &[(P, 0), (M, 4)], &[(P, 1), (P, 5)]],
                [&[(P, 3), (P, 7)], &[(P, 2), (P, 6)], &[(P, 1), (P, 5)], &[(P, 0), (M, 4)]],
            ],
        );
        let f4_0 = signed_sum4(
            bc,
            [
                [&[(P, 0), (M, 4)], &[(M, 1), (M, 5)], &[(M, 2), (M, 6)], &[(M, 3), (M, 7)]],
                [&[(P, 1), (M, 5)], &[(P, 0), (P, 4)], &[(P, 3), (M, 7)], &[(P, 2), (M, 6)]],
                [&[(P, 2), (M, 6)], &[(P, 3), (M, 7)], &[(P, 0), (P, 4)], &[(P, 1), (M, 5)]],
                [&[(P, 3), (M, 7)], &[(P, 2), (M, 6)], &[(P, 1), (M, 5)], &[(P, 0), (P, 4)]],
            ],
        );

        let a2 = two_by_two(s(0) - s(4), s(1) + s(5));
        let b2 = two_by_two(s(2) + s(6), s(3) + s(7));
        let c2 = two_by_two(s(0) + s(4), s(1) - s(5));
        let d2 = two_by_two(s(2) - s(6), s(3) - s(7));
        let e4_1 = SquareMatrix::block_symmetric(&a2, &b2);
        let f4_1 = SquareMatrix::block_symmetric(&c2, &d2);

        let first_row = |row: [S; 4]| SquareMatrix::from_fn(4, |r, c| if r == 0 { row[c].clone() } else { S::zero() });
        let m4_1 = first_row([s(4), -s(1), -s(2), -s(3)]);
        let m4_2 = first_row([-s(4), -s(1), -s(2), -s(3)]);

        BlockDecomposition {
            e4_0,
            f4_0,
            e4_1,
            f4_1,
            m4_1,
            m4_2,
            e2_0: a2.add(&b2),
            f2_0: a2.sub(&b2),
            k2_0: c2.add(&d2),
            l2_0: c2.sub(&d2),
            a2,
            b2,
            c2,
            d2,
        }
    }

    /// `E4(0) = E4(1) + 2 M4(1)` and `F4(0) = F4(1) + 2 M4(2)`.
    pub fn toeplitz_split_holds(&self) -> bool {
        self.e4_1.is_symmetric_block_toeplitz()
            && self.f4_1.is_symmetric_block_toeplitz()
            && self.e4_0 == self.e4_1.add(&self.m4_1.scale_pow2(1))
            && self.f4_0 == self.f4_1.add(&self.m4_2.scale_pow2(1))
    }

    pub fn sum_difference_blocks_hold(&self) -> bool {
        self.e2_0 == self.a2.add(&self.b2)
            && self.f2_0 == self.a2.sub(&self.b2)
            && self.k2_0 == self.c2.add(&self.d2)
            && self.l2_0 == self.c2.sub(&self.d2)
    }

    /// `E4(1) = (H2 ⊗ I2) · ½[(A2 + B2) ⊕ (A2 − B2)] · (H2 ⊗ I2)`
    pub fn e4_factorization_holds(&self) -> bool {
        butterfly_factor4(&self.e2_0, &self.f2_0) == self.e4_1
    }

    /// `F4(1) = (H2 ⊗ I2) · ½[(C2 + D2) ⊕ (C2 − D2)] · (H2 ⊗ I2)`
    pub fn f4_factorization_holds(&self) -> bool {
        butterfly_factor4(&self.k2_0, &self.l2_0) == self.f4_1
    }

    /// Each of `E2(0), F2(0), K2(0), L2(0)` equals `H2 · ½[(p + q) ⊕ (p − q)] · H2`.
    pub fn two_by_two_factorizations_hold(&self) -> bool {
        [&self.e2_0, &self.f2_0, &self.k2_0, &self.l2_0].into_iter().all(|m| {
            let p = m.get(0, 0).clone();
            let q = m.get(0, 1).clone();
            let h = SquareMatrix::<S>::h2();
            let diag = SquareMatrix::from_fn(2, |r, c| match (r, c) {
                (0, 0) => p.clone() + q.clone(),
                (1, 1) => p.clone() - q.clone(),
                _ => S::zero(),
            });
            h.mul(&diag.scale_pow2(-1)).mul(&h) == *m
        })
    }

    /// `B8 = [[P, Q], [Q, P]] + C` with `P = ½(E4(0) + F4(0))`,
    /// `Q = ½(E4(0) − F4(0))` and `C` the twelve `−2 b_k` correction terms.
    pub fn butterfly_split_holds(&self, b: &SplitOctonion<S>) -> bool {
        let p = self.e4_0.add(&self.f4_0).scale_pow2(-1);
        let q = self.e4_0.sub(&self.f4_0).scale_pow2(-1);
        let split = SquareMatrix::block_symmetric(&p, &q);
        let mut correction = SquareMatrix::<S>::zero(8);
        for &(row, col, k) in &super::program::CORRECTION_TERMS {
            correction.data[row * 8 + col] = -b.coeffs()[k].clone().scale_pow2(1);
        }
        let b8 = build_coeff_matrix(b);
        let full = SquareMatrix::from_fn(8, |r, c| b8.get(r, c).clone());
        split.add(&correction) == full
    }
}

fn butterfly_factor4<S: ScalarRing>(sum: &SquareMatrix<S>, diff: &SquareMatrix<S>) -> SquareMatrix<S> {
    let w = SquareMatrix::<S>::h2().kron(&SquareMatrix::identity(2));
    w.mul(&sum.direct_sum(diff).scale_pow2(-1)).mul(&w)
}

/// Checks every identity behind the Toeplitz stage for the given blocks:
/// the Toeplitz-plus-row splits, the sum/difference blocks, both 4x4
/// butterfly factorizations, and the four 2x2 `H2` factorizations.
pub fn toeplitz4_factor_check<S: ScalarRing>(blocks: &BlockDecomposition<S>) -> bool {
    blocks.toeplitz_split_holds()
        && blocks.sum_difference_blocks_hold()
        && blocks.e4_factorization_holds()
        && blocks.f4_factorization_holds()
        && blocks.two_by_two_factorizations_hold()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rational;

    fn m(n: usize, v: &[i64]) -> SquareMatrix<Rational> {
        SquareMatrix::from_fn(n, |r, c| Rational::from_integer(v[r * n + c]))
    }

    #[test]
    fn kron_and_direct_sum() {
        let h = SquareMatrix::<Rational>::h2();
        let w = h.kron(&SquareMatrix::identity(2));
        assert_eq!(w, m(4, &[1, 0, 1, 0, 0, 1, 0, 1, 1, 0, -1, 0, 0, 1, 0, -1]));
        assert_eq!(w.mul(&w), SquareMatrix::identity(4).scale_pow2(1));
        let d = m(1, &[3]).direct_sum(&m(1, &[5]));
        assert_eq!(d, m(2, &[3, 0, 0, 5]));
    }

    #[test]
    fn toeplitz_shapes() {
        assert!(m(3, &[1, 2, 3, 2, 1, 2, 3, 2, 1]).is_symmetric_toeplitz());
        assert!(!m(2, &[1, 2, 3, 1]).is_symmetric_toeplitz());
        let dyadic = m(4, &[1, 2, 3, 4, 2, 1, 4, 3, 3, 4, 1, 2, 4, 3, 2, 1]);
        assert!(dyadic.is_symmetric_block_toeplitz());
        assert!(!dyadic.is_symmetric_toeplitz());
    }
}
