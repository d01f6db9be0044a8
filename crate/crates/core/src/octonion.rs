//! The split-octonion value type, its Cayley table, and the schoolbook
//! product in three independent forms (coordinate formulas, table expansion,
//! and the 8x8 coefficient matrix).
//!
//! Products are always `x * b` with `x` on the left. The coefficient matrix
//! is built from the right operand, so `matvec(&build_coeff_matrix(&b), &x)`
//! equals `direct_mul(&x, &b)`.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::scalars::ScalarRing;

/// `c0 + c1 e1 + ... + c7 e7` over a scalar ring.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SplitOctonion<S> {
    coeffs: [S; 8],
}

impl<S> SplitOctonion<S> {
    pub const fn new(coeffs: [S; 8]) -> Self {
        SplitOctonion { coeffs }
    }

    pub fn from_fn(f: impl FnMut(usize) -> S) -> Self {
        SplitOctonion { coeffs: std::array::from_fn(f) }
    }

    pub fn coeffs(&self) -> &[S; 8] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> [S; 8] {
        self.coeffs
    }

    pub fn map<T>(&self, f: impl FnMut(&S) -> T) -> SplitOctonion<T> {
        let mut f = f;
        SplitOctonion::from_fn(|i| f(&self.coeffs[i]))
    }
}

impl<S: ScalarRing> SplitOctonion<S> {
    pub fn zero() -> Self {
        Self::from_fn(|_| S::zero())
    }

    pub fn one() -> Self {
        Self::basis(0)
    }

    /// The unit `e_i`, with `e_0 = 1`.
    pub fn basis(i: usize) -> Self {
        assert!(i < 8, "basis index out of range");
        Self::from_fn(|k| if k == i { S::one() } else { S::zero() })
    }

    pub fn real(&self) -> &S {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(ScalarRing::is_zero)
    }

    pub fn scalar_mul(&self, s: &S) -> Self {
        self.map(|c| s.clone() * c.clone())
    }

    pub fn conjugate(&self) -> Self {
        conjugate(self)
    }

    pub fn quadratic_form(&self) -> S {
        quadratic_form(self)
    }
}

impl<S> Index<usize> for SplitOctonion<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.coeffs[i]
    }
}

impl<S: fmt::Debug> fmt::Debug for SplitOctonion<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl<S: fmt::Display> fmt::Display for SplitOctonion<S> {
    /// Eight comma-separated coefficients, no spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl<S: ScalarRing> Add for SplitOctonion<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut r = rhs.coeffs.into_iter();
        SplitOctonion::new(self.coeffs.map(|a| a + r.next().unwrap()))
    }
}

impl<S: ScalarRing> Sub for SplitOctonion<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut r = rhs.coeffs.into_iter();
        SplitOctonion::new(self.coeffs.map(|a| a - r.next().unwrap()))
    }
}

impl<S: ScalarRing> Neg for SplitOctonion<S> {
    type Output = Self;
    fn neg(self) -> Self {
        SplitOctonion::new(self.coeffs.map(|a| -a))
    }
}

impl<S: ScalarRing> Mul for SplitOctonion<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        direct_mul(&self, &rhs)
    }
}

impl<S: ScalarRing> Mul for &SplitOctonion<S> {
    type Output = SplitOctonion<S>;
    fn mul(self, rhs: Self) -> SplitOctonion<S> {
        direct_mul(self, rhs)
    }
}

/// Signed basis unit, one entry of the Cayley table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisProduct {
    pub negative: bool,
    pub index: usize,
}

impl BasisProduct {
    pub const fn pos(index: usize) -> Self {
        BasisProduct { negative: false, index }
    }

    pub const fn neg(index: usize) -> Self {
        BasisProduct { negative: true, index }
    }

    pub fn negated(self) -> Self {
        BasisProduct { negative: !self.negative, index: self.index }
    }

    pub fn to_octonion<S: ScalarRing>(self) -> SplitOctonion<S> {
        let e = SplitOctonion::basis(self.index);
        if self.negative {
            -e
        } else {
            e
        }
    }
}

impl fmt::Display for BasisProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negative { "-" } else { "" };
        if self.index == 0 {
            write!(f, "{sign}1")
        } else {
            write!(f, "{sign}e{}", self.index)
        }
    }
}

const P: fn(usize) -> BasisProduct = BasisProduct::pos;
const N: fn(usize) -> BasisProduct = BasisProduct::neg;

/// Row `i`, column `j` holds `e_i * e_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    entries: [[BasisProduct; 8]; 8],
}

impl CayleyTable {
    pub fn standard() -> Self {
        CayleyTable {
            entries: [
                [P(0), P(1), P(2), P(3), P(4), P(5), P(6), P(7)],
                [P(1), N(0), P(3), N(2), N(5), P(4), N(7), P(6)],
                [P(2), N(3), N(0), P(1), N(6), P(7), P(4), N(5)],
                [P(3), P(2), N(1), N(0), N(7), N(6), P(5), P(4)],
                [P(4), P(5), P(6), P(7), P(0), P(1), P(2), P(3)],
                [P(5), N(4), N(7), P(6), N(1), P(0), P(3), N(2)],
                [P(6), P(7), N(4), N(5), N(2), N(3), P(0), P(1)],
                [P(7), N(6), P(5), N(4), N(3), P(2), N(1), P(0)],
            ],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> BasisProduct {
        self.entries[i][j]
    }

    /// Replaces one entry; used to build deliberately wrong tables.
    pub fn with_entry(mut self, i: usize, j: usize, entry: BasisProduct) -> Self {
        self.entries[i][j] = entry;
        self
    }

    pub fn rows(&self) -> &[[BasisProduct; 8]; 8] {
        &self.entries
    }
}

impl Default for CayleyTable {
    fn default() -> Self {
        Self::standard()
    }
}

/// Schoolbook product from the eight coordinate formulas.
pub fn direct_mul<S: ScalarRing>(x: &SplitOctonion<S>, b: &SplitOctonion<S>) -> SplitOctonion<S> {
    let [x0, x1, x2, x3, x4, x5, x6, x7] = x.coeffs.clone();
    let [b0, b1, b2, b3, b4, b5, b6, b7] = b.coeffs.clone();
    let m = |a: &S, c: &S| a.clone() * c.clone();

    let y0 = m(&x0, &b0) - m(&x1, &b1) - m(&x2, &b2) - m(&x3, &b3)
        + m(&x4, &b4) + m(&x5, &b5) + m(&x6, &b6) + m(&x7, &b7);
    let y1 = m(&x0, &b1) + m(&x1, &b0) + m(&x2, &b3) - m(&x3, &b2)
        + m(&x4, &b5) - m(&x5, &b4) + m(&x6, &b7) - m(&x7, &b6);
    let y2 = m(&x0, &b2) - m(&x1, &b3) + m(&x2, &b0) + m(&x3, &b1)
        + m(&x4, &b6) - m(&x5, &b7) - m(&x6, &b4) + m(&x7, &b5);
    let y3 = m(&x0, &b3) + m(&x1, &b2) - m(&x2, &b1) + m(&x3, &b0)
        + m(&x4, &b7) + m(&x5, &b6) - m(&x6, &b5) - m(&x7, &b4);
    let y4 = m(&x0, &b4) + m(&x1, &b5) + m(&x2, &b6) + m(&x3, &b7)
        + m(&x4, &b0) - m(&x5, &b1) - m(&x6, &b2) - m(&x7, &b3);
    let y5 = m(&x0, &b5) - m(&x1, &b4) - m(&x2, &b7) + m(&x3, &b6)
        + m(&x4, &b1) + m(&x5, &b0) - m(&x6, &b3) + m(&x7, &b2);
    let y6 = m(&x0, &b6) + m(&x1, &b7) - m(&x2, &b4) - m(&x3, &b5)
        + m(&x4, &b2) + m(&x5, &b3) + m(&x6, &b0) - m(&x7, &b1);
    let y7 = m(&x0, &b7) - m(&x1, &b6) + m(&x2, &b5) - m(&x3, &b4)
        + m(&x4, &b3) - m(&x5, &b2) + m(&x6, &b1) + m(&x7, &b0);

    SplitOctonion::new([y0, y1, y2, y3, y4, y5, y6, y7])
}

/// Product by expanding `sum x_i b_j (e_i e_j)` through the standard table.
pub fn table_mul<S: ScalarRing>(x: &SplitOctonion<S>, b: &SplitOctonion<S>) -> SplitOctonion<S> {
    table_mul_with(&CayleyTable::standard(), x, b)
}

pub fn table_mul_with<S: ScalarRing>(
    table: &CayleyTable,
    x: &SplitOctonion<S>,
    b: &SplitOctonion<S>,
) -> SplitOctonion<S> {
    let mut out: [S; 8] = std::array::from_fn(|_| S::zero());
    for i in 0..8 {
        for j in 0..8 {
            let e = table.get(i, j);
            let term = x.coeffs[i].clone() * b.coeffs[j].clone();
            let slot = &mut out[e.index];
            *slot = if e.negative {
                slot.clone() - term
            } else {
                slot.clone() + term
            };
        }
    }
    SplitOctonion::new(out)
}

/// Right-multiplication matrix `B8(b)` with `Y = B8 X` for `y = x * b`.
#[derive(Clone, PartialEq, Eq)]
pub struct CoeffMatrix8<S> {
    rows: [[S; 8]; 8],
}

impl<S> CoeffMatrix8<S> {
    pub fn from_rows(rows: [[S; 8]; 8]) -> Self {
        CoeffMatrix8 { rows }
    }

    pub fn rows(&self) -> &[[S; 8]; 8] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.rows[r][c]
    }
}

impl<S: ScalarRing> CoeffMatrix8<S> {
    pub fn identity() -> Self {
        CoeffMatrix8 {
            rows: std::array::from_fn(|r| std::array::from_fn(|c| if r == c { S::one() } else { S::zero() })),
        }
    }
}

impl<S: fmt::Debug> fmt::Debug for CoeffMatrix8<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.iter()).finish()
    }
}

/// Entry `(r, c)` of `B8` is `±b_k`; copied from the matrix display.
const B8_LAYOUT: [[(i8, usize); 8]; 8] = [
    [(1, 0), (-1, 1), (-1, 2), (-1, 3), (1, 4), (1, 5), (1, 6), (1, 7)],
    [(1, 1), (1, 0), (1, 3), (-1, 2), (1, 5), (-1, 4), (1, 7), (-1, 6)],
    [(1, 2), (-1, 3), (1, 0), (1, 1), (1, 6), (-1, 7), (-1, 4), (1, 5)],
    [(1, 3), (1, 2), (-1, 1), (1, 0), (1, 7), (1, 6), (-1, 5), (-1, 4)],
    [(1, 4), (1, 5), (1, 6), (1, 7), (1, 0), (-1, 1), (-1, 2), (-1, 3)],
    [(1, 5), (-1, 4), (-1, 7), (1, 6), (1, 1), (1, 0), (-1, 3), (1, 2)],
    [(1, 6), (1, 7), (-1, 4), (-1, 5), (1, 2), (1, 3), (1, 0), (-1, 1)],
    [(1, 7), (-1, 6), (1, 5), (-1, 4), (1, 3), (-1, 2), (1, 1), (1, 0)],
];

pub fn build_coeff_matrix<S: ScalarRing>(b: &SplitOctonion<S>) -> CoeffMatrix8<S> {
    CoeffMatrix8 {
        rows: std::array::from_fn(|r| {
            std::array::from_fn(|c| {
                let (sign, k) = B8_LAYOUT[r][c];
                let v = b.coeffs[k].clone();
                if sign < 0 {
                    -v
                } else {
                    v
                }
            })
        }),
    }
}

/// Dense 8x8 matrix-vector product: 64 multiplications, 56 additions.
pub fn matvec<S: ScalarRing>(m: &CoeffMatrix8<S>, x: &SplitOctonion<S>) -> SplitOctonion<S> {
    SplitOctonion::from_fn(|r| {
        let row = &m.rows[r];
        (1..8).fold(row[0].clone() * x.coeffs[0].clone(), |acc, c| {
            acc + row[c].clone() * x.coeffs[c].clone()
        })
    })
}

pub fn conjugate<S: ScalarRing>(o: &SplitOctonion<S>) -> SplitOctonion<S> {
    SplitOctonion::from_fn(|i| if i == 0 { o.coeffs[0].clone() } else { -o.coeffs[i].clone() })
}

/// Real part of `o * conjugate(o)`, i.e. `c0² + c1² + c2² + c3² − c4² − c5² − c6² − c7²`.
pub fn quadratic_form<S: ScalarRing>(o: &SplitOctonion<S>) -> S {
    let [n, ..] = direct_mul(o, &conjugate(o)).into_coeffs();
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{with_counting, Counted, OpCounts, Rational};

    type O = SplitOctonion<Rational>;

    fn oct(v: [i64; 8]) -> O {
        SplitOctonion::new(v.map(Rational::from_integer))
    }

    fn e(i: usize) -> O {
        O::basis(i)
    }

    #[test]
    fn identity_element() {
        let b = oct([3, -1, 4, 1, -5, 9, 2, -6]);
        assert_eq!(direct_mul(&O::one(), &b), b);
        assert_eq!(direct_mul(&b, &O::one()), b);
    }

    #[test]
    fn named_basis_products() {
        assert_eq!(direct_mul(&e(1), &e(2)), e(3));
        assert_eq!(direct_mul(&e(4), &e(4)), O::one());
        assert_eq!(direct_mul(&e(5), &e(6)), e(3));
        assert_eq!(table_mul(&e(1), &e(1)), -O::one());
        assert_eq!(table_mul(&O::one(), &O::one()), O::one());
    }

    #[test]
    fn table_diagonal_and_identity_rows() {
        let t = CayleyTable::standard();
        for i in 0..8 {
            assert_eq!(t.get(0, i), BasisProduct::pos(i));
            assert_eq!(t.get(i, 0), BasisProduct::pos(i));
        }
        for i in 1..4 {
            assert_eq!(t.get(i, i), BasisProduct::neg(0));
        }
        for i in 4..8 {
            assert_eq!(t.get(i, i), BasisProduct::pos(0));
        }
    }

    #[test]
    fn all_basis_pairs_match_table() {
        let t = CayleyTable::standard();
        for i in 0..8 {
            for j in 0..8 {
                let want = t.get(i, j).to_octonion::<Rational>();
                assert_eq!(direct_mul(&e(i), &e(j)), want, "e{i} e{j}");
                assert_eq!(table_mul(&e(i), &e(j)), want, "e{i} e{j}");
                assert_eq!(matvec(&build_coeff_matrix(&e(j)), &e(i)), want, "e{i} e{j}");
            }
        }
    }

    #[test]
    fn zero_divisor() {
        let p = oct([1, 0, 0, 0, 1, 0, 0, 0]);
        let q = oct([1, 0, 0, 0, -1, 0, 0, 0]);
        assert!(!p.is_zero() && !q.is_zero());
        assert!(direct_mul(&p, &q).is_zero());
        assert_eq!(quadratic_form(&p), Rational::zero());
    }

    #[test]
    fn coefficient_matrix_layout() {
        let b = SplitOctonion::from_fn(|i| Rational::from_integer(i as i64 + 1));
        let m = build_coeff_matrix(&b);
        let row0: Vec<i64> = vec![1, -2, -3, -4, 5, 6, 7, 8];
        for c in 0..8 {
            assert_eq!(m.get(0, c), &Rational::from_integer(row0[c]));
            assert_eq!(m.get(c, 0), &b[c]);
        }
        assert_eq!(build_coeff_matrix(&O::one()), CoeffMatrix8::identity());
        let x = oct([2, 0, -1, 7, 3, 3, -8, 1]);
        assert_eq!(matvec(&CoeffMatrix8::identity(), &x), x);
    }

    #[test]
    fn matvec_costs_64_mults_56_adds() {
        let b = oct([1, 2, 3, 4, 5, 6, 7, 8]).map(|c| Counted::new(c.clone()));
        let x = oct([8, 7, 6, 5, 4, 3, 2, 1]).map(|c| Counted::new(c.clone()));
        let m = build_coeff_matrix(&b);
        let (_, counts) = with_counting(|| matvec(&m, &x));
        assert_eq!(counts, OpCounts::new(64, 56, 0));
        let (_, counts) = with_counting(|| direct_mul(&x, &b));
        assert_eq!(counts, OpCounts::new(64, 56, 0));
    }

    #[test]
    fn conjugation_and_norm() {
        assert_eq!(conjugate(&O::one()), O::one());
        assert_eq!(conjugate(&e(3)), -e(3));
        assert_eq!(quadratic_form(&O::one()), Rational::one());
        assert_eq!(quadratic_form(&e(4)), -Rational::one());
        let o = oct([1, 2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(quadratic_form(&o), Rational::from_integer(1 + 4 + 9 + 16 - 25 - 36 - 49 - 64));
        let full = direct_mul(&o, &conjugate(&o));
        assert!(full.coeffs()[1..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn coefficientwise_ops() {
        let x = oct([1, 2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(x.clone() + O::zero(), x);
        assert!((x.clone() - x.clone()).is_zero());
        assert_eq!(
            oct([1, 1, 0, 0, 0, 0, 0, 0]).scalar_mul(&Rational::from_integer(2)),
            oct([2, 2, 0, 0, 0, 0, 0, 0])
        );
        assert_eq!(-x.clone() + x, O::zero());
    }

    #[test]
    fn noncommutative_and_nonassociative() {
        assert_eq!(direct_mul(&e(1), &e(2)), e(3));
        assert_eq!(direct_mul(&e(2), &e(1)), -e(3));
        let witness = (1..8).any(|i| {
            (1..8).any(|j| {
                (1..8).any(|k| {
                    direct_mul(&direct_mul(&e(i), &e(j)), &e(k)) != direct_mul(&e(i), &direct_mul(&e(j), &e(k)))
                })
            })
        });
        assert!(witness);
    }

    #[test]
    fn display_is_comma_separated() {
        let x = SplitOctonion::new([1, -2, 3, 0, 0, 0, 0, 7].map(|n| Rational::new(n, 2)));
        assert_eq!(x.to_string(), "1/2,-1,3/2,0,0,0,0,7/2");
    }
}
