//! Sparse bivariate polynomials in `v` and `q` with exact integer
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// `Σ c · v^a q^b`, keyed by `(a, b)`. Zero coefficients are never stored,
/// and iteration follows `(a, b)` ascending, which is the canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BivariatePolynomial {
    terms: BTreeMap<(u32, u32), i128>,
}

fn overflow(op: &str) -> Error {
    Error::Overflow(format!("polynomial {op}"))
}

impl BivariatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0, 0)
    }

    /// `coeff · v^v_exp · q^q_exp`.
    pub fn monomial(coeff: i128, v_exp: u32, q_exp: u32) -> Self {
        let mut p = Self::zero();
        if coeff != 0 {
            p.terms.insert((v_exp, q_exp), coeff);
        }
        p
    }

    pub fn v() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn q() -> Self {
        Self::monomial(1, 0, 1)
    }

    /// A polynomial in `q` alone from its coefficient list, constant first.
    pub fn from_q_coefficients(coeffs: &[i128]) -> Self {
        let mut p = Self::zero();
        for (b, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                p.terms.insert((0, b as u32), c);
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, v_exp: u32, q_exp: u32) -> i128 {
        self.terms.get(&(v_exp, q_exp)).copied().unwrap_or(0)
    }

    /// `(v_exp, q_exp, coeff)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, i128)> + '_ {
        self.terms.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: (u32, u32), c: i128) -> Result<()> {
        let entry = self.terms.entry(key).or_insert(0);
        *entry = entry.checked_add(c).ok_or_else(|| overflow("addition"))?;
        if *entry == 0 {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (&k, &c) in &other.terms {
            out.add_term(k, c)?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (&k, &c) in &other.terms {
            out.add_term(k, c.checked_neg().ok_or_else(|| overflow("negation"))?)?;
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (&(a1, b1), &c1) in &self.terms {
            for (&(a2, b2), &c2) in &other.terms {
                let c = c1
                    .checked_mul(c2)
                    .ok_or_else(|| overflow("multiplication"))?;
                let key = (
                    a1.checked_add(a2).ok_or_else(|| overflow("exponent"))?,
                    b1.checked_add(b2).ok_or_else(|| overflow("exponent"))?,
                );
                out.add_term(key, c)?;
            }
        }
        Ok(out)
    }

    /// Multiplies by `coeff · v^v_exp · q^q_exp`.
    pub fn checked_scale(&self, coeff: i128, v_exp: u32, q_exp: u32) -> Result<Self> {
        self.checked_mul(&Self::monomial(coeff, v_exp, q_exp))
    }

    /// `self · v^v_exp · q^q_exp`; never overflows coefficients.
    pub fn shift(&self, v_exp: u32, q_exp: u32) -> Self {
        BivariatePolynomial {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), &c)| ((a + v_exp, b + q_exp), c))
                .collect(),
        }
    }

    /// Exact value at `(v, q)`; `0^0 = 1`.
    pub fn evaluate(&self, v: i128, q: i128) -> Result<i128> {
        let eval_err = || overflow("evaluation");
        let mut total: i128 = 0;
        for (&(a, b), &c) in &self.terms {
            let va = v.checked_pow(a).ok_or_else(eval_err)?;
            let qb = q.checked_pow(b).ok_or_else(eval_err)?;
            let term = c
                .checked_mul(va)
                .and_then(|x| x.checked_mul(qb))
                .ok_or_else(eval_err)?;
            total = total.checked_add(term).ok_or_else(eval_err)?;
        }
        Ok(total)
    }

    /// Coefficient of `v^v_exp` as a polynomial in `q`.
    pub fn v_slice(&self, v_exp: u32) -> Self {
        BivariatePolynomial {
            terms: self
                .terms
                .range((v_exp, 0)..=(v_exp, u32::MAX))
                .map(|(&(_, b), &c)| ((0, b), c))
                .collect(),
        }
    }

    /// First `(v_exp, q_exp)` in canonical order where the two differ, with
    /// both coefficients there.
    pub fn first_difference(&self, other: &Self) -> Option<(u32, u32, i128, i128)> {
        let mut keys: Vec<(u32, u32)> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .copied()
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter().find_map(|(a, b)| {
            let (x, y) = (self.coeff(a, b), other.coeff(a, b));
            (x != y).then_some((a, b, x, y))
        })
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (&(a, b), &c)) in self.terms.iter().enumerate() {
            match (i, c < 0) {
                (0, true) => write!(f, "-{}", c.unsigned_abs())?,
                (0, false) => write!(f, "{c}")?,
                (_, true) => write!(f, " - {}", c.unsigned_abs())?,
                (_, false) => write!(f, " + {c}")?,
            }
            for (var, exp) in [('v', a), ('q', b)] {
                match exp {
                    0 => {}
                    1 => write!(f, "*{var}")?,
                    e => write!(f, "*{var}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermRecord {
    v: u32,
    q: u32,
    coeff: i128,
}

/// `{"terms": [{"v": a, "q": b, "coeff": c}, ...]}` in canonical order.
impl Serialize for BivariatePolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRecord> = self
            .terms()
            .map(|(v, q, coeff)| TermRecord { v, q, coeff })
            .collect();
        let mut s = serializer.serialize_struct("BivariatePolynomial", 1)?;
        s.serialize_field("terms", &terms)?;
        s.end()
    }
}

impl Add for &BivariatePolynomial {
    type Output = BivariatePolynomial;

    fn add(self, rhs: Self) -> BivariatePolynomial {
        self.checked_add(rhs).expect("coefficient overflow")
    }
}

impl Sub for &BivariatePolynomial {
    type Output = BivariatePolynomial;

    fn sub(self, rhs: Self) -> BivariatePolynomial {
        self.checked_sub(rhs).expect("coefficient overflow")
    }
}

impl Mul for &BivariatePolynomial {
    type Output = BivariatePolynomial;

    fn mul(self, rhs: Self) -> BivariatePolynomial {
        self.checked_mul(rhs).expect("coefficient overflow")
    }
}

impl Neg for &BivariatePolynomial {
    type Output = BivariatePolynomial;

    fn neg(self) -> BivariatePolynomial {
        BivariatePolynomial::zero() - self.clone()
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for BivariatePolynomial {
            type Output = BivariatePolynomial;

            fn $method(self, rhs: Self) -> BivariatePolynomial {
                (&self).$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl std::iter::Sum for BivariatePolynomial {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, p| acc + p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type P = BivariatePolynomial;

    #[test]
    fn arithmetic_examples() {
        let one_plus_q = P::one() + P::q();
        assert_eq!(&one_plus_q + &P::q(), P::one() + P::monomial(2, 0, 1));
        assert_eq!(P::v() * P::v(), P::monomial(1, 2, 0));
        assert_eq!(&P::q() * &one_plus_q, P::q() + P::monomial(1, 0, 2));
        assert_eq!(
            one_plus_q.checked_scale(3, 1, 0).unwrap(),
            P::monomial(3, 1, 0) + P::monomial(3, 1, 1)
        );
        assert!((&one_plus_q - &one_plus_q).is_zero());
    }

    #[test]
    fn evaluation_examples() {
        let p = P::one() + P::monomial(2, 0, 1) + P::monomial(1, 3, 0);
        assert_eq!(p.evaluate(1, 1).unwrap(), 4);
        assert_eq!(P::monomial(1, 0, 3).evaluate(1, 0).unwrap(), 0);
        assert_eq!(P::one().evaluate(0, 0).unwrap(), 1);
        assert!(P::monomial(1, 200, 0).evaluate(2, 1).is_err());
    }

    #[test]
    fn canonical_text() {
        let p = P::monomial(1, 0, 3) + P::monomial(2, 3, 1) + P::monomial(1, 3, 0);
        assert_eq!(p.to_string(), "1*q^3 + 1*v^3 + 2*v^3*q");
        assert_eq!(P::zero().to_string(), "0");
        assert_eq!(P::one().to_string(), "1");
        let d = P::monomial(1, 5, 1) - P::monomial(1, 4, 1);
        assert_eq!(d.to_string(), "-1*v^4*q + 1*v^5*q");
        assert_eq!((P::one() - P::v()).to_string(), "1 - 1*v");
    }

    #[test]
    fn overflow_is_an_error() {
        let big = P::monomial(i128::MAX, 0, 0);
        assert!(big.checked_add(&P::one()).is_err());
        assert!(big.checked_mul(&P::monomial(2, 0, 0)).is_err());
    }

    #[test]
    fn first_difference_is_canonical() {
        let a = P::monomial(1, 0, 3) + P::monomial(1, 3, 0);
        let b = P::one() + P::monomial(1, 3, 0);
        assert_eq!(a.first_difference(&b), Some((0, 0, 0, 1)));
        assert_eq!(a.first_difference(&a), None);
    }

    fn arb_poly() -> impl Strategy<Value = P> {
        proptest::collection::vec((0u32..4, 0u32..5, -5i128..=5), 0..6)
            .prop_map(|ts| ts.into_iter().map(|(a, b, c)| P::monomial(c, a, b)).sum())
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert!(a.terms().all(|(_, _, x)| x != 0));
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in arb_poly(), b in arb_poly(), v in -3i128..=3, q in -3i128..=3) {
            let (ea, eb) = (a.evaluate(v, q).unwrap(), b.evaluate(v, q).unwrap());
            prop_assert_eq!((&a + &b).evaluate(v, q).unwrap(), ea + eb);
            prop_assert_eq!((&a * &b).evaluate(v, q).unwrap(), ea * eb);
            let sum: i128 = a.terms().map(|(_, _, x)| x).sum();
            prop_assert_eq!(a.evaluate(1, 1).unwrap(), sum);
        }
    }
}
