//! Truncated Laurent series with pessimistic precision tracking.
//!
//! A `TruncSeries` knows its coefficients for all exponents strictly below `prec`
//! and nothing above. Every arithmetic result carries the worst-case precision of
//! its operands (adjusted for valuation shifts), so a stored nonzero coefficient
//! is always certain. Comparisons only ever assert equality of known coefficients.
//!
//! The reduction algorithm divides by units of k[[z]] and k((z^2)); those inverses
//! are genuinely infinite series, which is the whole reason this type exists.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::laurent::LaurentPoly;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    field: PrimeField,
    /// Exponents < prec are known; anything at or above is unknown.
    prec: i64,
    /// Known nonzero coefficients, all at exponents < prec.
    coeffs: BTreeMap<i64, u64>,
}

impl TruncSeries {
    pub fn zero_to(field: PrimeField, prec: i64) -> Self {
        TruncSeries {
            field,
            prec,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_laurent(f: &LaurentPoly, prec: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        for (&e, &c) in f.support() {
            if e < prec {
                coeffs.insert(e, c);
            }
        }
        TruncSeries {
            field: f.field(),
            prec,
            coeffs,
        }
    }

    pub fn monomial(field: PrimeField, exp: i64, coeff: i64, prec: i64) -> Self {
        let mut s = Self::zero_to(field, prec);
        let c = field.reduce_i64(coeff);
        if c != 0 && exp < prec {
            s.coeffs.insert(exp, c);
        }
        s
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, u64> {
        &self.coeffs
    }

    pub fn coeff(&self, e: i64) -> u64 {
        debug_assert!(e < self.prec, "coefficient {} beyond precision {}", e, self.prec);
        *self.coeffs.get(&e).unwrap_or(&0)
    }

    /// True when every known coefficient vanishes. The tail may still be nonzero.
    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exact valuation when a nonzero coefficient is stored, else `None`
    /// (meaning: valuation >= prec, possibly +infinity).
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Lower bound for the valuation: the true valuation is >= this.
    fn val_floor(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    fn insert(&mut self, e: i64, c: u64) {
        if c != 0 && e < self.prec {
            self.coeffs.insert(e, c);
        }
    }

    fn clamp(&mut self, prec: i64) {
        self.prec = self.prec.min(prec);
        let cut = self.prec;
        self.coeffs.retain(|&e, _| e < cut);
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field);
        let prec = self.prec.min(other.prec);
        let mut out = Self::zero_to(self.field, prec);
        for (&e, &c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if e < prec {
                let cur = *out.coeffs.get(&e).unwrap_or(&0);
                let s = self.field.add(cur, c);
                if s == 0 {
                    out.coeffs.remove(&e);
                } else {
                    out.coeffs.insert(e, s);
                }
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero_to(self.field, self.prec);
        for (&e, &c) in &self.coeffs {
            out.coeffs.insert(e, self.field.neg(c));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field);
        // The unknown tail of one factor meets the valuation floor of the other.
        let prec = (self.prec + other.val_floor()).min(other.prec + self.val_floor());
        let mut out = Self::zero_to(self.field, prec);
        for (&e1, &c1) in &self.coeffs {
            for (&e2, &c2) in &other.coeffs {
                let e = e1 + e2;
                if e < prec {
                    let cur = *out.coeffs.get(&e).unwrap_or(&0);
                    let s = self.field.add(cur, self.field.mul(c1, c2));
                    if s == 0 {
                        out.coeffs.remove(&e);
                    } else {
                        out.coeffs.insert(e, s);
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = self.field.reduce_i64(c);
        let mut out = Self::zero_to(self.field, self.prec);
        for (&e, &a) in &self.coeffs {
            let m = self.field.mul(a, c);
            if m != 0 {
                out.coeffs.insert(e, m);
            }
        }
        out
    }

    /// Multiply by z^k (exact; shifts the precision window along).
    pub fn shift(&self, k: i64) -> Self {
        let mut out = Self::zero_to(self.field, self.prec + k);
        for (&e, &c) in &self.coeffs {
            out.coeffs.insert(e + k, c);
        }
        out
    }

    /// Multiplicative inverse. Requires a stored nonzero coefficient; the
    /// result is known on `prec - 2v` leading exponents starting at `-v`.
    pub fn invert(&self) -> Result<Self> {
        let v = self.valuation().ok_or(Error::ZeroInvert)?;
        let f = self.field;
        let n = self.prec - v; // number of known coefficients of the unit part
        let u0 = self.coeff(v);
        let u0inv = f.inv(u0);
        // w * u = 1 with u = self / z^v; solve coefficients of w iteratively.
        let mut w: Vec<u64> = vec![0; n.max(0) as usize];
        if n > 0 {
            w[0] = u0inv;
            for i in 1..n {
                let mut acc = 0u64;
                for j in 0..i {
                    let uc = self.coeff(v + (i - j));
                    if uc != 0 && w[j as usize] != 0 {
                        acc = f.add(acc, f.mul(uc, w[j as usize]));
                    }
                }
                w[i as usize] = f.mul(f.neg(acc), u0inv);
            }
        }
        let mut out = Self::zero_to(f, self.prec - 2 * v);
        for (i, &c) in w.iter().enumerate() {
            out.insert(-v + i as i64, c);
        }
        Ok(out)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.invert()?))
    }

    /// Terms with exponent congruent to `parity` mod 2 (precision unchanged).
    pub fn parity_part(&self, parity: i64) -> Self {
        let parity = parity.rem_euclid(2);
        let mut out = Self::zero_to(self.field, self.prec);
        for (&e, &c) in &self.coeffs {
            if e.rem_euclid(2) == parity {
                out.coeffs.insert(e, c);
            }
        }
        out
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.keys().all(|e| e.rem_euclid(2) == 0)
    }

    /// Equality of every coefficient both sides know.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let prec = self.prec.min(other.prec);
        let lo = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .next()
            .copied();
        let lo = match lo {
            Some(l) => l,
            None => return true,
        };
        for e in lo..prec {
            if *self.coeffs.get(&e).unwrap_or(&0) != *other.coeffs.get(&e).unwrap_or(&0) {
                return false;
            }
        }
        true
    }

    /// The known part as an exact Laurent polynomial.
    pub fn known_part(&self) -> LaurentPoly {
        let pairs: Vec<(i64, i64)> = self.coeffs.iter().map(|(&e, &c)| (e, c as i64)).collect();
        LaurentPoly::from_pairs(self.field, &pairs)
    }

    /// Drop precision to `prec` (used by tests to model noisy inputs).
    pub fn truncated(&self, prec: i64) -> Self {
        let mut out = self.clone();
        out.clamp(prec);
        out
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(z^{})", self.known_part(), self.prec)
    }
}

/// Invert an exact Laurent polynomial to the stated precision: the result g
/// satisfies f*g = 1 on all coefficients known at the combined precision and
/// has valuation -v(f). `n` counts the known coefficients past the valuation.
pub fn series_invert(f: &LaurentPoly, n: i64) -> Result<TruncSeries> {
    let v = f.valuation().ok_or(Error::ZeroInvert)?;
    let s = TruncSeries::from_laurent(f, v + n + 1);
    s.invert()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn invert_one() {
        let one = LaurentPoly::one(f5());
        let g = series_invert(&one, 5).unwrap();
        assert_eq!(g.coeff(0), 1);
        assert!(g.coeffs().len() == 1);
    }

    #[test]
    fn invert_one_plus_z() {
        // (1+z)^-1 = 1 - z + z^2 - z^3 ... ; check by multiplying back.
        let f = LaurentPoly::from_pairs(f5(), &[(0, 1), (1, 1)]);
        let g = series_invert(&f, 3).unwrap();
        assert_eq!(g.coeff(0), 1);
        assert_eq!(g.coeff(1), 4);
        assert_eq!(g.coeff(2), 1);
        assert_eq!(g.coeff(3), 4);
        let prod = TruncSeries::from_laurent(&f, 10).mul(&g);
        let one = TruncSeries::from_laurent(&LaurentPoly::one(f5()), 10);
        assert!(prod.agrees_with(&one));
    }

    #[test]
    fn invert_monomial() {
        let f = LaurentPoly::monomial(f5(), 1, 1);
        let g = series_invert(&f, 3).unwrap();
        assert_eq!(g.valuation(), Some(-1));
        assert_eq!(g.coeff(-1), 1);
    }

    #[test]
    fn invert_zero_fails() {
        assert!(series_invert(&LaurentPoly::zero(f5()), 3).is_err());
    }

    #[test]
    fn precision_tracks_through_mul() {
        let a = TruncSeries::from_laurent(&LaurentPoly::from_pairs(f5(), &[(2, 1)]), 6);
        let b = TruncSeries::from_laurent(&LaurentPoly::from_pairs(f5(), &[(1, 1)]), 4);
        let c = a.mul(&b);
        // unknown tail of b (>= z^4) times z^2 pollutes at z^6; a's tail times z^1 at z^7.
        assert_eq!(c.prec(), 6);
        assert_eq!(c.coeff(3), 1);
    }

    #[test]
    fn agreement_is_on_known_window() {
        let a = TruncSeries::from_laurent(&LaurentPoly::from_pairs(f5(), &[(0, 1), (7, 3)]), 5);
        let b = TruncSeries::from_laurent(&LaurentPoly::from_pairs(f5(), &[(0, 1), (9, 2)]), 8);
        assert!(a.agrees_with(&b));
    }
}
