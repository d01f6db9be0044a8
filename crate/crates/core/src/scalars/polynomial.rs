use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Rational, ScalarRing};

/// Exponent vector over the sixteen indeterminates `x0..x7, b0..b7`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial([u8; 16]);

impl Monomial {
    pub fn exponents(&self) -> &[u8; 16] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut out = [0u8; 16];
        for (o, (a, b)) in out.iter_mut().zip(self.0.iter().zip(other.0.iter())) {
            *o = a.checked_add(*b).expect("monomial exponent overflow");
        }
        Monomial(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate().filter(|(_, e)| **e > 0) {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            let (name, idx) = if i < 8 { ('x', i) } else { ('b', i - 8) };
            write!(f, "{name}{idx}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Multivariate polynomial with rational coefficients in `x0..x7, b0..b7`.
///
/// Terms are stored in a sorted map with zero coefficients removed, so two
/// polynomials are equal exactly when they are the same symbolic expression.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Polynomial16 {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial16 {
    pub fn constant(c: Rational) -> Self {
        let mut p = Polynomial16::default();
        p.insert(Monomial::default(), c);
        p
    }

    /// The indeterminate with flat index `var` (0..8 are `x`, 8..16 are `b`).
    pub fn var(var: usize) -> Self {
        assert!(var < 16, "indeterminate index out of range");
        let mut m = [0u8; 16];
        m[var] = 1;
        let mut p = Polynomial16::default();
        p.terms.insert(Monomial(m), Rational::one());
        p
    }

    pub fn x(i: usize) -> Self {
        assert!(i < 8);
        Self::var(i)
    }

    pub fn b(i: usize) -> Self {
        assert!(i < 8);
        Self::var(8 + i)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the monomial with the given exponent vector.
    pub fn coefficient(&self, exponents: [u8; 16]) -> Rational {
        self.terms
            .get(&Monomial(exponents))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn insert(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Substitutes concrete values for all sixteen indeterminates.
    pub fn eval<S: ScalarRing + From<Rational>>(&self, values: &[S; 16]) -> S {
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut term = S::from(c.clone());
            for (v, &e) in values.iter().zip(m.0.iter()) {
                for _ in 0..e {
                    term = term * v.clone();
                }
            }
            acc = acc + term;
        }
        acc
    }
}

/// Canonical-form equality; decides symbolic identity.
pub fn poly_equal(p: &Polynomial16, q: &Polynomial16) -> bool {
    p == q
}

impl Polynomial16 {
    pub fn poly_equal(&self, other: &Polynomial16) -> bool {
        poly_equal(self, other)
    }
}

impl fmt::Display for Polynomial16 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = mag == Rational::one();
            if m.degree() == 0 {
                write!(f, "{mag}")?;
            } else if unit {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial16 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for Polynomial16 {
    type Output = Polynomial16;
    fn add(mut self, rhs: Polynomial16) -> Polynomial16 {
        for (m, c) in rhs.terms {
            self.insert(m, c);
        }
        self
    }
}

impl Sub for Polynomial16 {
    type Output = Polynomial16;
    fn sub(self, rhs: Polynomial16) -> Polynomial16 {
        self + (-rhs)
    }
}

impl Neg for Polynomial16 {
    type Output = Polynomial16;
    fn neg(mut self) -> Polynomial16 {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul for Polynomial16 {
    type Output = Polynomial16;
    fn mul(self, rhs: Polynomial16) -> Polynomial16 {
        let mut out = Polynomial16::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert(ma.times(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl From<Rational> for Polynomial16 {
    fn from(c: Rational) -> Self {
        Polynomial16::constant(c)
    }
}

impl ScalarRing for Polynomial16 {
    fn zero() -> Self {
        Polynomial16::default()
    }

    fn one() -> Self {
        Polynomial16::constant(Rational::one())
    }

    fn scale_pow2(mut self, k: i32) -> Self {
        for c in self.terms.values_mut() {
            *c = c.clone().scale_pow2(k);
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(i: usize) -> Polynomial16 {
        Polynomial16::x(i)
    }

    fn b(i: usize) -> Polynomial16 {
        Polynomial16::b(i)
    }

    #[test]
    fn commutative_products_are_equal() {
        assert!(poly_equal(&(x(0) * b(0)), &(x(0) * b(0))));
        assert!(poly_equal(&(x(0) * b(0)), &(b(0) * x(0))));
        assert!(!poly_equal(&(x(0) * b(0)), &(x(0) * b(1))));
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = x(1) * b(2) + x(3) - x(1) * b(2) - x(3);
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn display_is_readable() {
        let p = x(0) * b(0) - x(1) * b(1) + Polynomial16::constant(Rational::new(1, 2)) * x(2) * x(2);
        assert_eq!(p.to_string(), "1/2*x2^2 - x1*b1 + x0*b0");
    }

    #[test]
    fn scale_pow2_scales_every_coefficient() {
        let p = (x(0) + b(3)).scale_pow2(-3);
        assert_eq!(p.coefficient({ let mut e = [0; 16]; e[0] = 1; e }), Rational::new(1, 8));
        assert_eq!(p.clone().scale_pow2(3), x(0) + b(3));
    }

    #[test]
    fn eval_substitutes_values() {
        let p = x(0) * b(0) - x(1) * b(1);
        let mut vals: [Rational; 16] = std::array::from_fn(|_| Rational::zero());
        vals[0] = Rational::from_integer(3);
        vals[8] = Rational::from_integer(5);
        vals[1] = Rational::new(1, 2);
        vals[9] = Rational::from_integer(4);
        assert_eq!(p.eval(&vals), Rational::from_integer(13));
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial16> {
        proptest::collection::vec((0usize..16, 0usize..16, -5i64..=5), 0..5).prop_map(|terms| {
            terms.into_iter().fold(Polynomial16::default(), |acc, (i, j, c)| {
                acc + Polynomial16::constant(Rational::from_integer(c))
                    * Polynomial16::var(i)
                    * Polynomial16::var(j)
            })
        })
    }

    proptest! {
        #[test]
        fn ring_laws_hold(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(p.clone() * (q.clone() + r.clone()), p.clone() * q.clone() + p.clone() * r.clone());
            prop_assert_eq!((p.clone() * q.clone()) * r.clone(), p.clone() * (q.clone() * r.clone()));
            prop_assert_eq!((p.clone() + q.clone()) + r.clone(), p.clone() + (q.clone() + r));
            prop_assert_eq!(p.clone() * q.clone(), q * p);
        }
    }
}
