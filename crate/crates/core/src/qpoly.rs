//! Integer-coefficient polynomials in the formal variable q, with the
//! q-combinatorics every closed formula is built from: q-integers [n],
//! q-factorials, Gaussian binomials, q-multinomials and the falling
//! product [n]_k = [n][n-1]...[n-k+1].
//!
//! Degrees are nonnegative by construction. A formula that arrives at a
//! negative power of q is a bug upstream, so shifting errors out instead
//! of wrapping.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Canonical Z[q] polynomial: no stored zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct QPoly {
    coeffs: BTreeMap<u32, i64>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(deg: u32, c: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != 0 {
            coeffs.insert(deg, c);
        }
        QPoly { coeffs }
    }

    /// c * q^deg for a signed degree; errors when deg < 0.
    pub fn monomial_checked(deg: i64, c: i64) -> Result<Self> {
        if c != 0 && deg < 0 {
            return Err(Error::NegativeDegree(deg));
        }
        Ok(Self::monomial(deg.max(0) as u32, c))
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(0, c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, deg: u32) -> i64 {
        *self.coeffs.get(&deg).unwrap_or(&0)
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, i64> {
        &self.coeffs
    }

    fn add_term(&mut self, deg: u32, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(deg).or_insert(0);
        *entry = entry.checked_add(c).expect("QPoly coefficient overflow");
        if *entry == 0 {
            self.coeffs.remove(&deg);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&d, &c) in &other.coeffs {
            out.add_term(d, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&d, &c) in &other.coeffs {
            out.add_term(d, -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        QPoly::zero().sub(self)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = QPoly::zero();
        for (&d1, &c1) in &self.coeffs {
            for (&d2, &c2) in &other.coeffs {
                out.add_term(d1 + d2, c1.checked_mul(c2).expect("QPoly coefficient overflow"));
            }
        }
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        self.mul(&Self::constant(c))
    }

    /// Multiply by q^k for signed k; errors if any degree would go negative.
    pub fn shifted(&self, k: i64) -> Result<Self> {
        let mut out = QPoly::zero();
        for (&d, &c) in &self.coeffs {
            let nd = d as i64 + k;
            if nd < 0 {
                return Err(Error::NegativeDegree(nd));
            }
            out.add_term(nd as u32, c);
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = QPoly::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Exact integer evaluation at q = q0.
    pub fn eval(&self, q0: i64) -> i128 {
        let mut acc: i128 = 0;
        for (&d, &c) in &self.coeffs {
            let mut term: i128 = c as i128;
            for _ in 0..d {
                term = term.checked_mul(q0 as i128).expect("QPoly eval overflow");
            }
            acc = acc.checked_add(term).expect("QPoly eval overflow");
        }
        acc
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.values().all(|&c| c >= 0)
    }

    /// JSON array of [degree, coefficient] pairs.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|(&d, &c)| serde_json::json!([d, c]))
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("expected an array of [degree, coeff] pairs".into()))?;
        let mut out = QPoly::zero();
        for item in arr {
            let pair = item
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Error::Parse("expected [degree, coeff]".into()))?;
            let d = pair[0]
                .as_u64()
                .ok_or_else(|| Error::Parse("degree must be a nonnegative integer".into()))?;
            let c = pair[1]
                .as_i64()
                .ok_or_else(|| Error::Parse("coefficient must be an integer".into()))?;
            out.add_term(d as u32, c);
        }
        Ok(out)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&d, &c) in self.coeffs.iter().rev() {
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match d {
                0 => write!(f, "{}", a)?,
                1 if a == 1 => write!(f, "q")?,
                1 => write!(f, "{}q", a)?,
                _ if a == 1 => write!(f, "q^{}", d)?,
                _ => write!(f, "{}q^{}", a, d)?,
            }
        }
        Ok(())
    }
}

/// [n] = 1 + q + ... + q^(n-1); zero for n <= 0.
pub fn q_int(n: i64) -> QPoly {
    let mut out = QPoly::zero();
    if n > 0 {
        for d in 0..n {
            out.add_term(d as u32, 1);
        }
    }
    out
}

/// [n]! = [n][n-1]...[1]; the empty product for n <= 0.
pub fn q_factorial(n: i64) -> QPoly {
    let mut out = QPoly::one();
    for i in 1..=n.max(0) {
        out = out.mul(&q_int(i));
    }
    out
}

/// Gaussian binomial via the q-Pascal recurrence
/// binom(n,k) = binom(n-1,k) + q^(n-k) binom(n-1,k-1). Zero outside 0<=k<=n.
pub fn q_binomial(n: i64, k: i64) -> QPoly {
    if k < 0 || n < 0 || k > n {
        return QPoly::zero();
    }
    let k = k.min(n - k);
    let mut row: Vec<QPoly> = vec![QPoly::one()];
    for m in 1..=n {
        let width = (k.min(m) + 1) as usize;
        let mut next: Vec<QPoly> = Vec::with_capacity(width);
        for j in 0..width as i64 {
            let stay = if (j as usize) < row.len() {
                row[j as usize].clone()
            } else {
                QPoly::zero()
            };
            let carry = if j >= 1 {
                row[(j - 1) as usize]
                    .shifted(m - j)
                    .expect("q-Pascal carry stays nonnegative")
            } else {
                QPoly::zero()
            };
            next.push(stay.add(&carry));
        }
        row = next;
    }
    row[k as usize].clone()
}

/// q-multinomial [n]! / ([a_1]! ... [a_r]! [n - sum a_i]!).
/// Zero when any part is negative or the parts exceed n.
pub fn q_multinomial(n: i64, parts: &[i64]) -> QPoly {
    if n < 0 || parts.iter().any(|&a| a < 0) {
        return QPoly::zero();
    }
    let total: i64 = parts.iter().sum();
    if total > n {
        return QPoly::zero();
    }
    let mut rest = n;
    let mut out = QPoly::one();
    for &a in parts {
        out = out.mul(&q_binomial(rest, a));
        rest -= a;
    }
    out
}

/// Falling product [n]_k = [n][n-1]...[n-k+1]; zero once a factor [0] or a
/// negative index appears.
pub fn q_falling(n: i64, k: i64) -> QPoly {
    if k < 0 {
        return QPoly::zero();
    }
    let mut out = QPoly::one();
    for t in 0..k {
        if n - t <= 0 {
            return QPoly::zero();
        }
        out = out.mul(&q_int(n - t));
    }
    out
}

/// (q - 1)^k.
pub fn q_minus_one_pow(k: u32) -> QPoly {
    QPoly::monomial(1, 1).sub(&QPoly::one()).pow(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_int_two_is_q_plus_one() {
        // multinomial(2; [1]) = [2]
        assert_eq!(q_multinomial(2, &[1]), q_int(2));
        assert_eq!(q_int(2).to_string(), "q + 1");
    }

    #[test]
    fn multinomial_4_2() {
        // [4]!/([2]![2]!) expanded symbolically: q^4 + q^3 + 2q^2 + q + 1
        let expect = QPoly::from_json(&serde_json::json!([[0, 1], [1, 1], [2, 2], [3, 1], [4, 1]]))
            .unwrap();
        assert_eq!(q_multinomial(4, &[2]), expect);
        // independent route through factorials and symmetry
        assert_eq!(q_multinomial(4, &[2]), q_binomial(4, 2));
    }

    #[test]
    fn negative_part_gives_zero() {
        assert!(q_multinomial(3, &[1, -1, 1]).is_zero());
        assert!(q_multinomial(2, &[2, 1]).is_zero());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(q_int(2).eval(3), 4);
        // q^2 (q - 1) at 3 -> 18
        let p = QPoly::monomial(2, 1).mul(&q_minus_one_pow(1));
        assert_eq!(p.eval(3), 18);
        assert_eq!(QPoly::zero().eval(7), 0);
    }

    #[test]
    fn multinomial_symmetry() {
        for n in 0..=8 {
            for a in 0..=n {
                for b in 0..=(n - a) {
                    assert_eq!(q_multinomial(n, &[a, b]), q_multinomial(n, &[b, a]));
                }
            }
        }
    }

    #[test]
    fn pascal_recurrence_holds() {
        for n in 1..=12 {
            for k in 1..n {
                let lhs = q_binomial(n, k);
                let rhs =
                    q_binomial(n - 1, k).add(&q_binomial(n - 1, k - 1).shifted(n - k).unwrap());
                assert_eq!(lhs, rhs, "n={} k={}", n, k);
            }
        }
    }

    #[test]
    fn falling_product() {
        // [3]_2 = [3][2]
        assert_eq!(q_falling(3, 2), q_int(3).mul(&q_int(2)));
        assert!(q_falling(2, 3).is_zero());
        assert_eq!(q_falling(5, 0), QPoly::one());
    }

    /// Brute subspace census of F_q^m: collect every span as a sorted vector set.
    fn count_subspaces(q: u64, m: u32) -> i128 {
        let qu = q as usize;
        let n_vec = qu.pow(m);
        let add = |a: usize, b: usize| -> usize {
            let (mut a, mut b, mut out, mut mul) = (a, b, 0usize, 1usize);
            for _ in 0..m {
                out += ((a + b) % qu) * mul;
                a /= qu;
                b /= qu;
                mul *= qu;
            }
            out
        };
        let mut spans: std::collections::BTreeSet<Vec<usize>> = std::collections::BTreeSet::new();
        // close each subset of generators of size <= m under addition
        let mut frontier: Vec<Vec<usize>> = vec![vec![0]];
        spans.insert(vec![0]);
        while let Some(space) = frontier.pop() {
            for g in 1..n_vec {
                let mut set: std::collections::BTreeSet<usize> = space.iter().copied().collect();
                let mut stack: Vec<usize> = vec![g];
                while let Some(v) = stack.pop() {
                    if set.insert(v) {
                        let members: Vec<usize> = set.iter().copied().collect();
                        for &w in &members {
                            let s = add(v, w);
                            if !set.contains(&s) {
                                stack.push(s);
                            }
                        }
                    }
                }
                let closed: Vec<usize> = set.into_iter().collect();
                if spans.insert(closed.clone()) {
                    frontier.push(closed);
                }
            }
        }
        spans.len() as i128
    }

    #[test]
    fn binomial_row_sums_count_subspaces() {
        // sum_k binom(m,k) at q=3 equals the number of subspaces of F_3^m,
        // counted by a direct closure enumeration.
        for m in 1..=3 {
            let total: i128 = (0..=m as i64).map(|k| q_binomial(m as i64, k).eval(3)).sum();
            assert_eq!(total, count_subspaces(3, m), "m={}", m);
        }
    }
}
