//! Finitely supported Laurent polynomials over an odd prime field.
//!
//! These are the exact matrix entries for elements of GL_m(k((z))). The even/odd
//! split f = f_even + f_odd (with f_even, f_odd/z in k((z^2))) is the workhorse of
//! every reduction step.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use std::collections::BTreeMap;
use std::fmt;

/// A Laurent polynomial sum c_e z^e with finitely many nonzero c_e in F_p.
///
/// Invariant: no stored zero coefficients, so `support` is canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    field: PrimeField,
    support: BTreeMap<i64, u64>,
}

impl LaurentPoly {
    pub fn zero(field: PrimeField) -> Self {
        LaurentPoly {
            field,
            support: BTreeMap::new(),
        }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::monomial(field, 0, 1)
    }

    /// c * z^e (stores nothing when c reduces to zero).
    pub fn monomial(field: PrimeField, exp: i64, coeff: i64) -> Self {
        let mut support = BTreeMap::new();
        let c = field.reduce_i64(coeff);
        if c != 0 {
            support.insert(exp, c);
        }
        LaurentPoly { field, support }
    }

    pub fn from_pairs(field: PrimeField, pairs: &[(i64, i64)]) -> Self {
        let mut out = Self::zero(field);
        for &(e, c) in pairs {
            out.add_term(e, field.reduce_i64(c));
        }
        out
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn support(&self) -> &BTreeMap<i64, u64> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> u64 {
        *self.support.get(&exp).unwrap_or(&0)
    }

    /// Minimal exponent of the support; `None` is the +infinity sentinel of the zero element.
    pub fn valuation(&self) -> Option<i64> {
        self.support.keys().next().copied()
    }

    pub fn degree(&self) -> Option<i64> {
        self.support.keys().next_back().copied()
    }

    pub(crate) fn add_term(&mut self, exp: i64, coeff: u64) {
        if coeff == 0 {
            return;
        }
        let f = self.field;
        let entry = self.support.entry(exp).or_insert(0);
        *entry = f.add(*entry, coeff);
        if *entry == 0 {
            self.support.remove(&exp);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field);
        let mut out = self.clone();
        for (&e, &c) in &other.support {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.field);
        for (&e, &c) in &self.support {
            out.support.insert(e, self.field.neg(c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field);
        let mut out = Self::zero(self.field);
        for (&e1, &c1) in &self.support {
            for (&e2, &c2) in &other.support {
                out.add_term(e1 + e2, self.field.mul(c1, c2));
            }
        }
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = self.field.reduce_i64(c);
        let mut out = Self::zero(self.field);
        for (&e, &a) in &self.support {
            out.add_term(e, self.field.mul(a, c));
        }
        out
    }

    /// Multiply by z^k.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = Self::zero(self.field);
        for (&e, &c) in &self.support {
            out.support.insert(e + k, c);
        }
        out
    }

    /// f(-z): negate coefficients at odd exponents.
    pub fn substitute_neg_z(&self) -> Self {
        let mut out = Self::zero(self.field);
        for (&e, &c) in &self.support {
            let c = if e.rem_euclid(2) == 1 {
                self.field.neg(c)
            } else {
                c
            };
            out.support.insert(e, c);
        }
        out
    }

    /// Part of f supported on even exponents, so f_even lies in k((z^2)).
    pub fn even_part(&self) -> Self {
        self.parity_part(0)
    }

    /// Part of f supported on odd exponents, so f_odd / z lies in k((z^2)).
    pub fn odd_part(&self) -> Self {
        self.parity_part(1)
    }

    /// Terms whose exponent is congruent to `parity` mod 2.
    pub fn parity_part(&self, parity: i64) -> Self {
        let parity = parity.rem_euclid(2);
        let mut out = Self::zero(self.field);
        for (&e, &c) in &self.support {
            if e.rem_euclid(2) == parity {
                out.support.insert(e, c);
            }
        }
        out
    }

    /// True when all exponents are even, i.e. the entry lies in k((z^2)).
    pub fn is_even(&self) -> bool {
        self.support.keys().all(|e| e.rem_euclid(2) == 0)
    }

    /// Serialize as the JSON array of [exponent, coefficient] pairs.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.support
                .iter()
                .map(|(&e, &c)| serde_json::json!([e, c]))
                .collect(),
        )
    }

    pub fn from_json(field: PrimeField, v: &serde_json::Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("expected an array of [exp, coeff] pairs".into()))?;
        let mut out = Self::zero(field);
        for item in arr {
            let pair = item
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::Parse("expected [exp, coeff]".into()))?;
            let e = pair[0]
                .as_i64()
                .ok_or_else(|| Error::Parse("exponent must be an integer".into()))?;
            let c = pair[1]
                .as_i64()
                .ok_or_else(|| Error::Parse("coefficient must be an integer".into()))?;
            out.add_term(e, field.reduce_i64(c));
        }
        Ok(out)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in &self.support {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{}", c)?,
                1 if c == 1 => write!(f, "z")?,
                1 => write!(f, "{}z", c)?,
                _ if c == 1 => write!(f, "z^{}", e)?,
                _ => write!(f, "{}z^{}", c, e)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn valuation_examples() {
        // z^2 + z^3 -> 2
        let f = LaurentPoly::from_pairs(f3(), &[(2, 1), (3, 1)]);
        assert_eq!(f.valuation(), Some(2));
        // 0 -> +infinity sentinel
        assert_eq!(LaurentPoly::zero(f3()).valuation(), None);
        // 2 z^-1 + 1 -> -1
        let f = LaurentPoly::from_pairs(f3(), &[(-1, 2), (0, 1)]);
        assert_eq!(f.valuation(), Some(-1));
    }

    #[test]
    fn parity_split_recomposes() {
        let f = LaurentPoly::from_pairs(f3(), &[(-1, 2), (0, 1), (3, 2), (4, 1)]);
        let even = f.even_part();
        let odd = f.odd_part();
        assert_eq!(even.add(&odd), f);
        assert!(even.is_even());
        assert!(odd.shift(-1).is_even());
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let f = LaurentPoly::from_pairs(f3(), &[(1, 2), (1, 1)]);
        assert!(f.is_zero());
    }

    #[test]
    fn neg_z_substitution() {
        let f = LaurentPoly::from_pairs(f3(), &[(1, 1), (2, 1)]);
        let g = f.substitute_neg_z();
        assert_eq!(g.coeff(1), 2); // -1 mod 3
        assert_eq!(g.coeff(2), 1);
    }

    #[test]
    fn json_round_trip() {
        let f = LaurentPoly::from_pairs(f3(), &[(-2, 1), (5, 2)]);
        let back = LaurentPoly::from_json(f3(), &f.to_json()).unwrap();
        assert_eq!(f, back);
    }
}
