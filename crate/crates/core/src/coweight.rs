//! Coweight invariants of matrices over k((z)): the dominant coweight from
//! the Cartan decomposition, the hat invariants that pin the two-dimensional
//! blocks of the symmetric coweight, the full symmetric coweight through the
//! reduction, and the Pieri / dual Pieri strip checks.

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::matrix::{subsets, LMatrix};
use crate::reduce::{block_reduce, ReductionWitness};
use crate::shapes::{Partition, SymCoweight};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// rho(M): the i-th partial sum from the bottom equals the valuation of the
/// gcd (fractional ideal) of all i x i minors. Exact Laurent minors make the
/// valuations exact for any sign pattern.
pub fn dominant_coweight(m: &LMatrix) -> Result<Partition> {
    let n = m.dim();
    let mut sums = Vec::with_capacity(n);
    for i in 1..=n {
        match m.minor_valuation(i) {
            Some(v) => sums.push(v),
            None => return Err(Error::Singular),
        }
    }
    let mut parts = Vec::with_capacity(n);
    let mut prev = 0i64;
    for (idx, &s) in sums.iter().enumerate() {
        parts.push(s - prev);
        prev = s;
        let _ = idx;
    }
    parts.reverse();
    Partition::from_sorted(parts)
}

/// The invariants read off B-hat = B(z) * B(-z)^{-1}: the multiset of
/// two-dimensional block exponents of sigma(B), and det-valuation parity.
/// Computed through the adjugate so everything stays an exact Laurent
/// polynomial: rho(B * adj(B(-z))) minus v(det B(-z)) in every part.
pub fn hat_invariants(b: &LMatrix) -> Result<(Vec<i64>, i64)> {
    let bneg = b.substitute_neg_z();
    let det = bneg.det();
    let vdet = det.valuation().ok_or(Error::Singular)?;
    let m = b.mul(&bneg.adjugate());
    let rho = dominant_coweight(&m)?;
    let mut big: Vec<i64> = rho
        .parts()
        .iter()
        .map(|p| p - vdet)
        .filter(|&x| x > 0)
        .map(|x| x + 1)
        .collect();
    big.sort_unstable_by(|a, b| b.cmp(a));
    Ok((big, vdet.rem_euclid(2)))
}

/// An invariant independent of the reduction path: the number of
/// one-dimensional `1` blocks plus the number of two-dimensional blocks.
///
/// It is the k-dimension of (V ∩ L)/(V ∩ zL) where V is the k((z^2))-span of
/// B's columns and L the standard lattice, computed from exact minors of the
/// even/odd coefficient stack. Used as a cross-check oracle in tests.
pub fn even_unit_rank(b: &LMatrix) -> Result<i64> {
    let m = b.dim();
    let f = b.field();
    // stack rows 0..m: even parts; rows m..2m: odd parts / z. All entries even.
    let mut stack: Vec<Vec<LaurentPoly>> = vec![vec![LaurentPoly::zero(f); m]; 2 * m];
    let mut stack_shifted = stack.clone();
    for i in 0..m {
        for j in 0..m {
            let e = b.at(i, j).even_part();
            let o = b.at(i, j).odd_part().shift(-1);
            stack[i][j] = e.clone();
            stack[m + i][j] = o.clone();
            stack_shifted[i][j] = e.shift(-2);
            stack_shifted[m + i][j] = o;
        }
    }
    let v1 = rect_min_minor_val(&stack, m).ok_or(Error::Singular)?;
    let v2 = rect_min_minor_val(&stack_shifted, m).ok_or(Error::Singular)?;
    // valuations live in z = w^(1/2); halve to count over k[[w]]
    debug_assert_eq!((v1 - v2).rem_euclid(2), 0);
    Ok((v1 - v2) / 2)
}

/// Minimum valuation over all maximal (size x size) minors of a tall grid.
fn rect_min_minor_val(grid: &[Vec<LaurentPoly>], size: usize) -> Option<i64> {
    let rows_all = grid.len();
    let mut best: Option<i64> = None;
    for rows in subsets(rows_all, size) {
        let cols: Vec<usize> = (0..size).collect();
        if let Some(v) = grid_det(grid, &rows, &cols).valuation() {
            best = Some(best.map_or(v, |b: i64| b.min(v)));
        }
    }
    best
}

fn grid_det(grid: &[Vec<LaurentPoly>], rows: &[usize], cols: &[usize]) -> LaurentPoly {
    let field = grid[0][0].field();
    match rows.len() {
        0 => LaurentPoly::one(field),
        1 => grid[rows[0]][cols[0]].clone(),
        _ => {
            let mut acc = LaurentPoly::zero(field);
            let rest: Vec<usize> = rows[1..].to_vec();
            for (idx, &c) in cols.iter().enumerate() {
                let a = &grid[rows[0]][c];
                if a.is_zero() {
                    continue;
                }
                let sub_cols: Vec<usize> = cols
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != idx)
                    .map(|(_, &cc)| cc)
                    .collect();
                let term = a.mul(&grid_det(grid, &rest, &sub_cols));
                if idx % 2 == 0 {
                    acc = acc.add(&term);
                } else {
                    acc = acc.sub(&term);
                }
            }
            acc
        }
    }
}

/// Default working precision for a matrix, from the spec'd policy.
pub fn default_precision(b: &LMatrix) -> i64 {
    let hi = b.max_entry_degree().unwrap_or(0);
    let lo = b.min_entry_valuation().unwrap_or(0);
    2 * (b.dim() as i64) * (hi - lo).max(1) + 8
}

/// Reduce and read off the symmetric coweight, with one doubling-stability
/// recomputation and the hat-invariant cross-check. Disagreement retries with
/// doubled precision up to four times, then fails loudly.
pub fn symmetric_coweight_with(b: &LMatrix, precision: Option<i64>) -> Result<SymCoweight> {
    if b.det().is_zero() {
        return Err(Error::Singular);
    }
    let (hat_big, hat_parity) = hat_invariants(b)?;
    let mut n = precision.unwrap_or_else(|| default_precision(b)).max(16);
    let mut last_err: Option<Error> = None;
    for _ in 0..5 {
        match reduce_consistent(b, n, &hat_big, hat_parity) {
            Ok(sigma) => return Ok(sigma),
            Err(e @ Error::PrecisionExhausted)
            | Err(e @ Error::ReductionBudget)
            | Err(e @ Error::InvariantMismatch(_)) => {
                last_err = Some(e);
                n *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::InvariantMismatch("retries exhausted".into())))
}

fn reduce_consistent(
    b: &LMatrix,
    n: i64,
    hat_big: &[i64],
    hat_parity: i64,
) -> Result<SymCoweight> {
    let w1 = block_reduce(b, n)?;
    let w2 = block_reduce(b, 2 * n)?;
    if w1.sigma != w2.sigma {
        return Err(Error::InvariantMismatch(format!(
            "sigma {} at N={} vs {} at 2N",
            w1.sigma, n, w2.sigma
        )));
    }
    let sigma = w1.sigma;
    if sigma.big_parts() != hat_big {
        return Err(Error::InvariantMismatch(format!(
            "big parts {:?} vs hat {:?}",
            sigma.big_parts(),
            hat_big
        )));
    }
    if sigma.det_valuation().rem_euclid(2) != hat_parity {
        return Err(Error::InvariantMismatch(format!(
            "parity {} vs hat {}",
            sigma.det_valuation().rem_euclid(2),
            hat_parity
        )));
    }
    Ok(sigma)
}

pub fn symmetric_coweight(b: &LMatrix) -> Result<SymCoweight> {
    symmetric_coweight_with(b, None)
}

/// Full reduction with witness, at the policy precision unless overridden.
pub fn reduce_witness(b: &LMatrix, precision: Option<i64>) -> Result<ReductionWitness> {
    if b.det().is_zero() {
        return Err(Error::Singular);
    }
    let n = precision.unwrap_or_else(|| default_precision(b)).max(16);
    block_reduce(b, n)
}

/// Size bounds for the random equivalence sampler.
#[derive(Clone, Copy, Debug)]
pub struct SampleBounds {
    pub factors: usize,
    pub max_degree: i64,
    /// allow z^-2 exponents on the right factor
    pub allow_negative_even: bool,
}

impl Default for SampleBounds {
    fn default() -> Self {
        SampleBounds {
            factors: 6,
            max_degree: 3,
            allow_negative_even: true,
        }
    }
}

/// k * Lambda * h for random k over k[z] (unit determinant valuation) and h a
/// product of elementary matrices with even-exponent Laurent entries. Both
/// factors are exact, so sigma of the output equals sigma(Lambda) by
/// construction.
pub fn sample_equivalent(lambda: &LMatrix, seed: u64, bounds: SampleBounds) -> LMatrix {
    let f = lambda.field();
    let m = lambda.dim();
    let p = f.modulus() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut left = LMatrix::identity(f, m);
    let mut right = LMatrix::identity(f, m);
    if m > 1 {
        for _ in 0..bounds.factors {
            // left factor: polynomial elementary / permutation / unit diagonal
            match rng.gen_range(0..3) {
                0 => {
                    let i = rng.gen_range(0..m);
                    let mut j = rng.gen_range(0..m);
                    while j == i {
                        j = rng.gen_range(0..m);
                    }
                    let mut fpoly = LaurentPoly::zero(f);
                    for e in 0..=bounds.max_degree {
                        if rng.gen_bool(0.5) {
                            fpoly = fpoly.add(&LaurentPoly::monomial(f, e, rng.gen_range(0..p)));
                        }
                    }
                    let mut e = LMatrix::identity(f, m);
                    *e.at_mut(i, j) = fpoly;
                    left = left.mul(&e);
                }
                1 => {
                    let mut idx: Vec<usize> = (0..m).collect();
                    idx.shuffle(&mut rng);
                    let mut e = LMatrix::zero(f, m);
                    for (r, &c) in idx.iter().enumerate() {
                        *e.at_mut(r, c) = LaurentPoly::one(f);
                    }
                    left = left.mul(&e);
                }
                _ => {
                    let i = rng.gen_range(0..m);
                    let mut u = LaurentPoly::monomial(f, 0, rng.gen_range(1..p));
                    for e in 1..=bounds.max_degree {
                        if rng.gen_bool(0.4) {
                            u = u.add(&LaurentPoly::monomial(f, e, rng.gen_range(0..p)));
                        }
                    }
                    let mut e = LMatrix::identity(f, m);
                    *e.at_mut(i, i) = u;
                    left = left.mul(&e);
                }
            }
            // right factor: even-exponent elementary / permutation / even monomial diagonal
            match rng.gen_range(0..3) {
                0 => {
                    let i = rng.gen_range(0..m);
                    let mut j = rng.gen_range(0..m);
                    while j == i {
                        j = rng.gen_range(0..m);
                    }
                    let lo = if bounds.allow_negative_even { -1 } else { 0 };
                    let mut fpoly = LaurentPoly::zero(f);
                    for t in lo..=(bounds.max_degree / 2) {
                        if rng.gen_bool(0.5) {
                            fpoly =
                                fpoly.add(&LaurentPoly::monomial(f, 2 * t, rng.gen_range(0..p)));
                        }
                    }
                    let mut e = LMatrix::identity(f, m);
                    *e.at_mut(i, j) = fpoly;
                    right = right.mul(&e);
                }
                1 => {
                    let mut idx: Vec<usize> = (0..m).collect();
                    idx.shuffle(&mut rng);
                    let mut e = LMatrix::zero(f, m);
                    for (r, &c) in idx.iter().enumerate() {
                        *e.at_mut(r, c) = LaurentPoly::one(f);
                    }
                    right = right.mul(&e);
                }
                _ => {
                    let i = rng.gen_range(0..m);
                    let t = if bounds.allow_negative_even {
                        rng.gen_range(-1..=1)
                    } else {
                        rng.gen_range(0..=1)
                    };
                    let mut e = LMatrix::identity(f, m);
                    *e.at_mut(i, i) = LaurentPoly::monomial(f, 2 * t, rng.gen_range(1..p));
                    right = right.mul(&e);
                }
            }
        }
    }
    left.mul(lambda).mul(&right)
}

/// A random element of GL_m(k[[z]]) with polynomial entries: a product of
/// elementary matrices, permutations, and unit-diagonal scalings.
pub fn sample_unit(field: crate::field::PrimeField, m: usize, seed: u64, bounds: SampleBounds) -> LMatrix {
    let p = field.modulus() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = LMatrix::identity(field, m);
    if m == 1 {
        *out.at_mut(0, 0) = LaurentPoly::monomial(field, 0, rng.gen_range(1..p));
        return out;
    }
    for _ in 0..bounds.factors {
        match rng.gen_range(0..3) {
            0 => {
                let i = rng.gen_range(0..m);
                let mut j = rng.gen_range(0..m);
                while j == i {
                    j = rng.gen_range(0..m);
                }
                let mut fpoly = LaurentPoly::zero(field);
                for e in 0..=bounds.max_degree {
                    if rng.gen_bool(0.5) {
                        fpoly = fpoly.add(&LaurentPoly::monomial(field, e, rng.gen_range(0..p)));
                    }
                }
                let mut e = LMatrix::identity(field, m);
                *e.at_mut(i, j) = fpoly;
                out = out.mul(&e);
            }
            1 => {
                let mut idx: Vec<usize> = (0..m).collect();
                idx.shuffle(&mut rng);
                let mut e = LMatrix::zero(field, m);
                for (r, &c) in idx.iter().enumerate() {
                    *e.at_mut(r, c) = LaurentPoly::one(field);
                }
                out = out.mul(&e);
            }
            _ => {
                let i = rng.gen_range(0..m);
                let mut u = LaurentPoly::monomial(field, 0, rng.gen_range(1..p));
                for e in 1..=bounds.max_degree {
                    if rng.gen_bool(0.4) {
                        u = u.add(&LaurentPoly::monomial(field, e, rng.gen_range(0..p)));
                    }
                }
                let mut e = LMatrix::identity(field, m);
                *e.at_mut(i, i) = u;
                out = out.mul(&e);
            }
        }
    }
    out
}

/// rho(A) = {1^l, 0^(m-l)} for some l.
pub fn is_vertical_type(a: &LMatrix) -> Result<bool> {
    let rho = dominant_coweight(a)?;
    Ok(rho.parts().iter().all(|&p| p == 0 || p == 1))
}

/// rho(A) = {l, 0^(m-1)}.
pub fn is_horizontal_type(a: &LMatrix) -> Result<bool> {
    let rho = dominant_coweight(a)?;
    let parts = rho.parts();
    Ok(parts.iter().skip(1).all(|&p| p == 0) && parts.first().map_or(false, |&p| p >= 0))
}

/// sigma(B) ~ sigma(AB): padded parts move by at most one per row
/// (vertical strip added and removed).
pub fn pieri_check(a: &LMatrix, b: &LMatrix) -> Result<bool> {
    if !is_vertical_type(a)? {
        return Err(Error::Precondition(
            "pieri_check requires rho(A) = {1^l}".into(),
        ));
    }
    let sb = symmetric_coweight(b)?.padded();
    let sab = symmetric_coweight(&a.mul(b))?.padded();
    Ok(sb
        .iter()
        .zip(sab.iter())
        .all(|(&x, &y)| (x - y).abs() <= 1))
}

/// sigma(B) ~' sigma(AB): the interleaving a_{i+1} <= b_i <= a_{i-1}
/// (horizontal strip added and removed).
pub fn dual_pieri_check(a: &LMatrix, b: &LMatrix) -> Result<bool> {
    if !is_horizontal_type(a)? {
        return Err(Error::Precondition(
            "dual_pieri_check requires rho(A) = {l, 0...}".into(),
        ));
    }
    let sb = symmetric_coweight(b)?.padded();
    let sab = symmetric_coweight(&a.mul(b))?.padded();
    let m = sb.len();
    for i in 0..m {
        let upper = if i == 0 { i64::MAX } else { sb[i - 1] };
        let lower = if i + 1 < m { sb[i + 1] } else { i64::MIN };
        if !(lower <= sab[i] && sab[i] <= upper) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    fn z(e: i64) -> LaurentPoly {
        LaurentPoly::monomial(f3(), e, 1)
    }

    fn upper2(a: LaurentPoly, b: LaurentPoly, d: LaurentPoly) -> LMatrix {
        let mut m = LMatrix::zero(f3(), 2);
        *m.at_mut(0, 0) = a;
        *m.at_mut(0, 1) = b;
        *m.at_mut(1, 1) = d;
        m
    }

    #[test]
    fn dominant_of_diagonal() {
        let m = LMatrix::diag_powers(f3(), &[3, 1, 0]);
        assert_eq!(dominant_coweight(&m).unwrap().parts(), &[3, 1, 0]);
    }

    #[test]
    fn dominant_of_blocks() {
        for i in 2..6 {
            let m = upper2(z(0), z(1), z(i));
            assert_eq!(dominant_coweight(&m).unwrap().parts(), &[i, 0]);
        }
        // [[z^5, -2 z^3],[0, -z^5]] at p=3: entry gcd z^3, det z^10
        let m = upper2(z(5), LaurentPoly::monomial(f3(), 3, -2), z(5).neg());
        assert_eq!(dominant_coweight(&m).unwrap().parts(), &[7, 3]);
    }

    #[test]
    fn dominant_scaling_shift() {
        let mut m = upper2(z(0), z(1), z(3));
        *m.at_mut(1, 0) = LaurentPoly::from_pairs(f3(), &[(2, 2)]);
        let rho = dominant_coweight(&m).unwrap();
        for k in [-2i64, 1, 4] {
            let shifted = m.scale_all(k);
            assert_eq!(
                dominant_coweight(&shifted).unwrap(),
                rho.add_scalar(k),
                "k={}",
                k
            );
        }
    }

    #[test]
    fn singular_rejected() {
        let m = upper2(z(0), z(1), LaurentPoly::zero(f3()));
        assert!(matches!(dominant_coweight(&m), Err(Error::Singular)));
    }

    #[test]
    fn hat_invariants_of_blocks() {
        // [[1, z],[0, z^i]] -> ({i}, i mod 2)
        for i in 2..7 {
            let m = upper2(z(0), z(1), z(i));
            let (big, parity) = hat_invariants(&m).unwrap();
            assert_eq!(big, vec![i]);
            assert_eq!(parity, i.rem_euclid(2));
        }
        // diag(z, 1) -> (empty, 1)
        let m = LMatrix::diag_powers(f3(), &[1, 0]);
        let (big, parity) = hat_invariants(&m).unwrap();
        assert!(big.is_empty());
        assert_eq!(parity, 1);
        // [[z, z^2],[0, z^4]] -> ({3}, 1)
        let m = upper2(z(1), z(2), z(4));
        let (big, parity) = hat_invariants(&m).unwrap();
        assert_eq!(big, vec![3]);
        assert_eq!(parity, 1);
    }

    #[test]
    fn even_unit_rank_distinguishes_z_from_one() {
        // diag(z^2, 1) ~ identity: two `1` blocks; diag(z, z): two z blocks.
        let a = LMatrix::diag_powers(f3(), &[2, 0]);
        let b = LMatrix::diag_powers(f3(), &[1, 1]);
        assert_eq!(even_unit_rank(&a).unwrap(), 2);
        assert_eq!(even_unit_rank(&b).unwrap(), 0);
        // one 2-dim block: rank 1
        let c = upper2(z(0), z(1), z(4));
        assert_eq!(even_unit_rank(&c).unwrap(), 1);
    }

    #[test]
    fn sigma_of_spec_examples() {
        // diag(1, z) -> padded {1, 0}
        let m = LMatrix::diag_powers(f3(), &[0, 1]);
        assert_eq!(symmetric_coweight(&m).unwrap().padded(), vec![1, 0]);
        // [[z, z^2],[0, z^4]] -> {3, 0}
        let m = upper2(z(1), z(2), z(4));
        assert_eq!(symmetric_coweight(&m).unwrap().padded(), vec![3, 0]);
        // [[1, z + c z^3],[0, z^4]] -> {4, 0} for every c
        for c in 0..3 {
            let b = LaurentPoly::from_pairs(f3(), &[(1, 1), (3, c)]);
            let m = upper2(z(0), b, z(4));
            assert_eq!(symmetric_coweight(&m).unwrap().padded(), vec![4, 0], "c={}", c);
        }
    }

    #[test]
    fn reduction_witness_validates() {
        let m = upper2(z(1), z(2), z(4));
        let w = reduce_witness(&m, None).unwrap();
        assert!(w.validate(&m));
        assert_eq!(w.sigma.padded(), vec![3, 0]);
    }

    #[test]
    fn sigma_canonical_four_dim() {
        // [[1,z],[0,z^3]] ⊕ [[1,z],[0,z^2]] -> padded {3,2,0,0}
        let mut m = LMatrix::zero(f3(), 4);
        *m.at_mut(0, 0) = z(0);
        *m.at_mut(0, 1) = z(1);
        *m.at_mut(1, 1) = z(3);
        *m.at_mut(2, 2) = z(0);
        *m.at_mut(2, 3) = z(1);
        *m.at_mut(3, 3) = z(2);
        assert_eq!(symmetric_coweight(&m).unwrap().padded(), vec![3, 2, 0, 0]);
    }

    #[test]
    fn sigma_invariant_under_sampling() {
        let sigma = SymCoweight::from_padded(&[4, 0]).unwrap();
        let lambda = LMatrix::canonical_form(f3(), &sigma);
        for seed in [7u64, 42, 99] {
            let b = sample_equivalent(&lambda, seed, SampleBounds::default());
            assert_eq!(symmetric_coweight(&b).unwrap(), sigma, "seed={}", seed);
        }
    }

    #[test]
    fn sigma_with_negative_valuations() {
        // scaling by z^-2 on the right leaves the class unchanged
        let m = upper2(z(0), z(1), z(3)).scale_all(-2);
        assert_eq!(symmetric_coweight(&m).unwrap().padded(), vec![3, 0]);
    }

    #[test]
    fn pieri_spec_cases() {
        // A = z I2, B = [[1,z],[0,z^3]]: sigma(AB) = {3,0}
        let b = upper2(z(0), z(1), z(3));
        let a = LMatrix::diag_powers(f3(), &[1, 1]);
        let ab = a.mul(&b);
        assert_eq!(symmetric_coweight(&ab).unwrap().padded(), vec![3, 0]);
        assert!(pieri_check(&a, &b).unwrap());
        // A = diag(z,1): sigma(AB) = {2,0}
        let a = LMatrix::diag_powers(f3(), &[1, 0]);
        let ab = a.mul(&b);
        assert_eq!(symmetric_coweight(&ab).unwrap().padded(), vec![2, 0]);
        assert!(pieri_check(&a, &b).unwrap());
        // A = I is always fine
        let a = LMatrix::identity(f3(), 2);
        assert!(pieri_check(&a, &b).unwrap());
    }
}
