//! Deterministic coset-representative families for the double cosets
//! K pi^mu K with mu = {1^l} (vertical) or mu = {l} (horizontal), together
//! with their symbolic Haar-measure counts.
//!
//! The vertical family A_l consists of upper-triangular matrices with
//! diagonal entries in {1, z}, exactly l of them z, and the entry (i, j)
//! (i < j) free over F_p exactly when the row diagonal is 1 and the column
//! diagonal is z. The horizontal family is the Hermite-form enumeration with
//! diag z^{d_i}, sum d_i = l, entries above of degree < d_column, filtered by
//! dominant coweight {l, 0^(m-1)}.

use crate::coweight::dominant_coweight;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::laurent::LaurentPoly;
use crate::matrix::{subsets, LMatrix};
use crate::qpoly::{q_binomial, q_int, QPoly};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The two supported mu families, by the count l of nontrivial parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MuFamily {
    /// mu = {-1^l} (acting inverses range over the vertical family A_l).
    Vertical(usize),
    /// mu = {-l}, l >= 1 (the horizontal / dual family).
    Horizontal(usize),
}

impl MuFamily {
    /// Accepts "1^2", "-1^2", "1", "-1" (vertical), "2", "-2" (horizontal),
    /// and "0" (the identity family, vertical with l = 0).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let core = s.strip_prefix('-').unwrap_or(s);
        if let Some((base, exp)) = core.split_once('^') {
            if base.trim() == "1" {
                let l: usize = exp
                    .trim()
                    .parse()
                    .map_err(|e: std::num::ParseIntError| Error::Parse(e.to_string()))?;
                return Ok(MuFamily::Vertical(l));
            }
            return Err(Error::UnsupportedMu(s.to_string()));
        }
        let l: i64 = core
            .trim()
            .parse()
            .map_err(|e: std::num::ParseIntError| Error::Parse(e.to_string()))?;
        match l {
            0 => Ok(MuFamily::Vertical(0)),
            1 => Ok(MuFamily::Vertical(1)),
            x if x >= 2 => Ok(MuFamily::Horizontal(x as usize)),
            _ => Err(Error::UnsupportedMu(s.to_string())),
        }
    }

    pub fn size(&self) -> usize {
        match *self {
            MuFamily::Vertical(l) => l,
            MuFamily::Horizontal(l) => l,
        }
    }
}

impl fmt::Display for MuFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MuFamily::Vertical(l) => write!(f, "-1^{}", l),
            MuFamily::Horizontal(l) => write!(f, "-{}", l),
        }
    }
}

/// A fully materialized family of representatives in deterministic order.
#[derive(Clone, Debug)]
pub struct CosetFamily {
    pub dim: usize,
    pub mu: MuFamily,
    pub reps: Vec<LMatrix>,
    pub expected_count: QPoly,
}

/// The symbolic count of representatives: q-binomial(m, l) for {1^l},
/// q^((m-1)(l-1)) [m] for {l}.
pub fn coset_count(m: usize, mu: MuFamily) -> QPoly {
    match mu {
        MuFamily::Vertical(l) => q_binomial(m as i64, l as i64),
        MuFamily::Horizontal(l) => q_int(m as i64)
            .shifted(((m - 1) * (l - 1)) as i64)
            .expect("nonnegative shift"),
    }
}

fn odometer_step(coeffs: &mut [u64], p: u64) -> bool {
    let mut k = coeffs.len();
    while k > 0 {
        k -= 1;
        coeffs[k] += 1;
        if coeffs[k] < p {
            return true;
        }
        coeffs[k] = 0;
    }
    false
}

/// All upper-triangular X with diagonal in {1, z}, exactly l entries z, and
/// (i, j) free over F_p iff X_ii = 1 and X_jj = z. Lexicographic in
/// (z-position set, coefficient tuple).
pub fn enum_vertical_reps(m: usize, l: usize, field: PrimeField) -> Result<CosetFamily> {
    if l > m {
        return Err(Error::Precondition(format!(
            "vertical family needs l <= m, got l={} m={}",
            l, m
        )));
    }
    let p = field.modulus();
    let mut reps = Vec::new();
    for zset in subsets(m, l) {
        let is_z = |i: usize| zset.binary_search(&i).is_ok();
        let mut free: Vec<(usize, usize)> = Vec::new();
        for i in 0..m {
            for j in (i + 1)..m {
                if !is_z(i) && is_z(j) {
                    free.push((i, j));
                }
            }
        }
        let mut coeffs = vec![0u64; free.len()];
        loop {
            let mut x = LMatrix::zero(field, m);
            for i in 0..m {
                *x.at_mut(i, i) = LaurentPoly::monomial(field, if is_z(i) { 1 } else { 0 }, 1);
            }
            for (slot, &(i, j)) in free.iter().enumerate() {
                *x.at_mut(i, j) = LaurentPoly::monomial(field, 0, coeffs[slot] as i64);
            }
            reps.push(x);
            if !odometer_step(&mut coeffs, p) {
                break;
            }
        }
    }
    Ok(CosetFamily {
        dim: m,
        mu: MuFamily::Vertical(l),
        reps,
        expected_count: coset_count(m, MuFamily::Vertical(l)),
    })
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if parts == 0 {
        return out;
    }
    let mut cur = vec![0usize; parts];
    fn rec(total: usize, idx: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if idx + 1 == cur.len() {
            cur[idx] = total;
            out.push(cur.clone());
            return;
        }
        for v in 0..=total {
            cur[idx] = v;
            rec(total - v, idx + 1, cur, out);
        }
    }
    rec(total, 0, &mut cur, &mut out);
    out
}

/// Right-coset representatives of K \ (K pi^{l} K): Hermite forms with
/// diagonal z^{d_i}, sum d_i = l, entry (i, j) a polynomial of degree < d_j,
/// filtered by dominant coweight {l, 0^(m-1)}.
pub fn enum_row_reps(m: usize, l: usize, field: PrimeField) -> Result<CosetFamily> {
    if l < 1 {
        return Err(Error::Precondition("horizontal family needs l >= 1".into()));
    }
    let p = field.modulus();
    let mut target = vec![0i64; m];
    target[0] = l as i64;
    let mut reps = Vec::new();
    for d in compositions(l, m) {
        // free coefficient slots: (i, j, exponent e) with i < j, e < d_j
        let mut slots: Vec<(usize, usize, usize)> = Vec::new();
        for j in 0..m {
            for i in 0..j {
                for e in 0..d[j] {
                    slots.push((i, j, e));
                }
            }
        }
        let mut coeffs = vec![0u64; slots.len()];
        loop {
            let mut x = LMatrix::zero(field, m);
            for i in 0..m {
                *x.at_mut(i, i) = LaurentPoly::monomial(field, d[i] as i64, 1);
            }
            for (slot, &(i, j, e)) in slots.iter().enumerate() {
                if coeffs[slot] != 0 {
                    let t = LaurentPoly::monomial(field, e as i64, coeffs[slot] as i64);
                    *x.at_mut(i, j) = x.at(i, j).add(&t);
                }
            }
            if dominant_coweight(&x)?.parts() == target.as_slice() {
                reps.push(x);
            }
            if !odometer_step(&mut coeffs, p) {
                break;
            }
        }
    }
    Ok(CosetFamily {
        dim: m,
        mu: MuFamily::Horizontal(l),
        reps,
        expected_count: coset_count(m, MuFamily::Horizontal(l)),
    })
}

pub fn enum_family(m: usize, mu: MuFamily, field: PrimeField) -> Result<CosetFamily> {
    match mu {
        MuFamily::Vertical(l) => enum_vertical_reps(m, l, field),
        MuFamily::Horizontal(l) => enum_row_reps(m, l, field),
    }
}

/// KX = KY, i.e. X Y^{-1} lies in GL_m(k[[z]]): used for distinctness spot
/// checks. Computed through the adjugate to stay exact.
pub fn same_right_coset(x: &LMatrix, y: &LMatrix) -> Result<bool> {
    let dety = y.det();
    let vdet_y = dety.valuation().ok_or(Error::Singular)?;
    let detx = x.det();
    let vdet_x = detx.valuation().ok_or(Error::Singular)?;
    if vdet_x != vdet_y {
        return Ok(false);
    }
    let prod = x.mul(&y.adjugate());
    for i in 0..x.dim() {
        for j in 0..x.dim() {
            if let Some(v) = prod.at(i, j).valuation() {
                if v < vdet_y {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn vertical_2_1_family() {
        // {diag(z,1)} plus {[[1,c],[0,z]] : c in F_p}: count q+1
        let fam = enum_vertical_reps(2, 1, f3()).unwrap();
        assert_eq!(fam.reps.len(), 4);
        assert_eq!(fam.expected_count.eval(3), 4);
    }

    #[test]
    fn vertical_trivial() {
        let fam = enum_vertical_reps(3, 0, f3()).unwrap();
        assert_eq!(fam.reps.len(), 1);
        assert_eq!(fam.reps[0], LMatrix::identity(f3(), 3));
    }

    #[test]
    fn vertical_counts_match_symbolic() {
        for m in 1..=4 {
            for l in 0..=m {
                let fam = enum_vertical_reps(m, l, f3()).unwrap();
                assert_eq!(
                    fam.reps.len() as i128,
                    fam.expected_count.eval(3),
                    "m={} l={}",
                    m,
                    l
                );
            }
        }
        // (4, 2, 3): expand q-binomial(4,2) at q=3 -> 130
        let fam = enum_vertical_reps(4, 2, f3()).unwrap();
        assert_eq!(fam.reps.len(), 130);
    }

    #[test]
    fn row_family_m2_matches_paper_family() {
        // (2, 2, 3): 12 representatives; explicit family check
        let fam = enum_row_reps(2, 2, f3()).unwrap();
        assert_eq!(fam.reps.len(), 12);
        assert_eq!(fam.expected_count.eval(3), 12);
        let f = f3();
        let mut expected: Vec<LMatrix> = Vec::new();
        expected.push(LMatrix::diag_powers(f, &[2, 0]));
        for b0 in 1..3i64 {
            let mut m = LMatrix::diag_powers(f, &[1, 1]);
            *m.at_mut(0, 1) = LaurentPoly::monomial(f, 0, b0);
            expected.push(m);
        }
        for b0 in 0..3i64 {
            for b1 in 0..3i64 {
                let mut m = LMatrix::diag_powers(f, &[0, 2]);
                *m.at_mut(0, 1) = LaurentPoly::from_pairs(f, &[(0, b0), (1, b1)]);
                expected.push(m);
            }
        }
        assert_eq!(expected.len(), fam.reps.len());
        for e in &expected {
            assert!(
                fam.reps.iter().any(|r| r == e),
                "missing representative {}",
                e
            );
        }
    }

    #[test]
    fn row_counts_match_measure() {
        for (m, l) in [(2usize, 1usize), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1)] {
            let fam = enum_row_reps(m, l, f3()).unwrap();
            assert_eq!(
                fam.reps.len() as i128,
                fam.expected_count.eval(3),
                "m={} l={}",
                m,
                l
            );
        }
    }

    #[test]
    fn distinct_representatives() {
        let fam = enum_vertical_reps(3, 1, f3()).unwrap();
        for (a, x) in fam.reps.iter().enumerate() {
            for y in fam.reps.iter().skip(a + 1) {
                assert!(!same_right_coset(x, y).unwrap());
            }
        }
        let fam = enum_row_reps(2, 2, f3()).unwrap();
        for (a, x) in fam.reps.iter().enumerate() {
            for y in fam.reps.iter().skip(a + 1) {
                assert!(!same_right_coset(x, y).unwrap());
            }
        }
    }

    #[test]
    fn mu_parsing() {
        assert_eq!(MuFamily::parse("-1^2").unwrap(), MuFamily::Vertical(2));
        assert_eq!(MuFamily::parse("1^3").unwrap(), MuFamily::Vertical(3));
        assert_eq!(MuFamily::parse("-2").unwrap(), MuFamily::Horizontal(2));
        assert_eq!(MuFamily::parse("-1").unwrap(), MuFamily::Vertical(1));
        assert_eq!(MuFamily::parse("0").unwrap(), MuFamily::Vertical(0));
        assert!(MuFamily::parse("x").is_err());
    }
}
