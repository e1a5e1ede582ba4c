//! Closed-form QPoly evaluators for the structure constants h_{mu,nu}^lambda:
//! the uniform-shape product formula, the one-dimensional-sector formula, the
//! general paired-tuple sum, its corollary form on gapped shapes, the
//! tableau sum, and the dual (horizontal) case tables.

use crate::combinatorics::{
    enum_paired_diagrams, enum_paired_tuples, enum_tableaux, tableau_weight, tuple_exponent,
    TupleClass,
};
use crate::error::{Error, Result};
use crate::qpoly::{q_binomial, q_falling, q_int, q_minus_one_pow, q_multinomial, QPoly};
use crate::shapes::SymCoweight;
use std::collections::BTreeMap;

/// h for nu = {a^n} (any a > 1), lambda = {(a+1)^j, a^(n-j-k), (a-1)^k},
/// l = 2i + j + k:  q^(n(i+j) - i(i+j+k)) * multinomial(n; i, j, k).
pub fn h_computen(n: i64, i: i64, j: i64, k: i64) -> QPoly {
    let mult = q_multinomial(n, &[i, j, k]);
    if mult.is_zero() {
        return QPoly::zero();
    }
    let exp = n * (i + j) - i * (i + j + k);
    mult.shifted(exp).expect("computen exponent is nonnegative on its domain")
}

/// The reduced factor h-tilde: the bare multinomial.
pub fn h_tilde(n: i64, i: i64, j: i64, k: i64) -> QPoly {
    q_multinomial(n, &[i, j, k])
}

/// h for nu = {1^n2, 0^n1}: a pairs become 2-blocks, b ones drop to 0,
/// c zeros rise to 1:
///   q^(a(a-1)/2) (q-1)^a [n1-c]_a multinomial(n2; a, b) binomial(n1, c).
pub fn h_compute1(n1: i64, n2: i64, a: i64, b: i64, c: i64) -> QPoly {
    if a < 0 || b < 0 || c < 0 {
        return QPoly::zero();
    }
    let falling = q_falling(n1 - c, a);
    let mult = q_multinomial(n2, &[a, b]);
    let binom = q_binomial(n1, c);
    let prod = falling.mul(&mult).mul(&binom).mul(&q_minus_one_pow(a as u32));
    if prod.is_zero() {
        return QPoly::zero();
    }
    prod.shifted(a * (a - 1) / 2)
        .expect("compute1 exponent is nonnegative")
}

fn class_value(class: &TupleClass, nu: &SymCoweight) -> Result<QPoly> {
    let r = tuple_exponent(class, nu);
    let n2 = nu.count_z() as i64;
    let n1 = nu.count_one() as i64;
    let o = &class.one;
    let hbar = h_compute1(
        n1,
        n2,
        o.pairs as i64,
        o.one_to_zero as i64,
        o.zero_to_one as i64,
    );
    let mut value = hbar;
    for st in &class.big {
        value = value.mul(&h_tilde(
            st.count as i64,
            st.both as i64,
            st.plus as i64,
            st.minus as i64,
        ));
    }
    if value.is_zero() {
        return Ok(QPoly::zero());
    }
    if r < 0 {
        return Err(Error::NegativeDegree(r));
    }
    value.shifted(r)
}

/// The general vertical structure constant: sum over paired-tuple classes of
/// q^r([w]) * hbar_1 * prod h-tilde.
pub fn h_mainthm(l: usize, nu: &SymCoweight, lambda: &SymCoweight) -> Result<QPoly> {
    if nu.dim() != lambda.dim() {
        return Err(Error::Precondition(format!(
            "shape dimensions differ: {} vs {}",
            nu, lambda
        )));
    }
    let mut acc = QPoly::zero();
    for class in enum_paired_tuples(l, nu, lambda) {
        acc = acc.add(&class_value(&class, nu)?);
    }
    Ok(acc)
}

/// The corollary form: nu with t1 = 0 and distinct parts differing by at
/// least 2, where the plus/minus statistics are pinned by lambda alone.
pub fn h_corollary(l: usize, nu: &SymCoweight, lambda: &SymCoweight) -> Result<QPoly> {
    if nu.t1() != 0 {
        return Err(Error::Precondition(format!(
            "corollary needs t1(nu) = 0, got {}",
            nu
        )));
    }
    let mut counts: BTreeMap<i64, i64> = BTreeMap::new();
    for &a in nu.big_parts() {
        *counts.entry(a).or_insert(0) += 1;
    }
    let values: Vec<(i64, i64)> = counts.into_iter().rev().collect();
    for w in values.windows(2) {
        if w[0].0 - w[1].0 < 2 {
            return Err(Error::Precondition(format!(
                "corollary needs distinct parts differing by at least 2, got {}",
                nu
            )));
        }
    }
    if nu.dim() != lambda.dim() {
        return Err(Error::Precondition("shape dimensions differ".into()));
    }
    // multiplicities of lambda's padded parts
    let mut lam_mult: BTreeMap<i64, i64> = BTreeMap::new();
    for &x in &lambda.padded() {
        *lam_mult.entry(x).or_insert(0) += 1;
    }
    // solve for plus/minus per value, top down; a value v+1 in lambda can come
    // from v going up or (only when v+2 is also a part) from v+2 coming down.
    let mut plus: BTreeMap<i64, i64> = BTreeMap::new();
    let mut minus: BTreeMap<i64, i64> = BTreeMap::new();
    let mut consumed: BTreeMap<i64, i64> = BTreeMap::new(); // lambda parts explained so far
    for &(v, n_v) in &values {
        let up = lam_mult.get(&(v + 1)).copied().unwrap_or(0) - consumed.get(&(v + 1)).copied().unwrap_or(0);
        let stay = lam_mult.get(&v).copied().unwrap_or(0) - consumed.get(&v).copied().unwrap_or(0);
        // `stay` may exceed what this value keeps when v-2 is also a part and
        // rises; here stay counts only this value's blocks, so bound it.
        let stay = stay.min(n_v - up);
        let down = n_v - up - stay;
        if up < 0 || stay < 0 || down < 0 {
            return Ok(QPoly::zero());
        }
        *consumed.entry(v + 1).or_insert(0) += up;
        *consumed.entry(v).or_insert(0) += stay;
        *consumed.entry(v - 1).or_insert(0) += down;
        plus.insert(v, up);
        minus.insert(v, down);
    }
    // all nonzero lambda parts must be explained
    for (&x, &cnt) in &lam_mult {
        if x > 0 && consumed.get(&x).copied().unwrap_or(0) != cnt {
            return Ok(QPoly::zero());
        }
    }
    let total_pm: i64 = values
        .iter()
        .map(|&(v, _)| plus[&v] + minus[&v])
        .sum();
    if (l as i64) < total_pm || (l as i64 - total_pm) % 2 != 0 {
        return Ok(QPoly::zero());
    }
    let big_m = (l as i64 - total_pm) / 2;
    // r = sum_{i<j} n_i n_j + sum_{i<j} n_i (plus_j - minus_j) + sum n_i plus_i,
    // with i < j in partition order (larger value first) mirroring mainthm.
    let mut r = 0i64;
    for (x, &(vx, nx)) in values.iter().enumerate() {
        for &(vy, ny) in values.iter().skip(x + 1) {
            r += nx * ny;
            r += ny * (plus[&vx] - minus[&vx]);
            let _ = vy;
        }
        r += nx * plus[&vx];
    }
    let ms: Vec<i64> = values
        .iter()
        .map(|&(v, n_v)| n_v - plus[&v] - minus[&v])
        .collect();
    if ms.iter().any(|&m| m < 0) {
        return Ok(QPoly::zero());
    }
    let s: i64 = ms.iter().sum();
    // constant part of the exponent: -1/2 (S - 2M)^2 + 1/2 sum m_i^2
    let mut cross = 0i64;
    for (x, &mx) in ms.iter().enumerate() {
        for &my in ms.iter().skip(x + 1) {
            cross += mx * my;
        }
    }
    let exp_base = r - cross + 2 * s * big_m - 2 * big_m * big_m;
    // prefactor: prod binom(n_i; plus_i, minus_i) as a q-multinomial
    let mut pref = QPoly::one();
    for &(v, n_v) in &values {
        pref = pref.mul(&q_multinomial(n_v, &[minus[&v], plus[&v]]));
    }
    // e-sum
    let mut acc = QPoly::zero();
    let mut stack: Vec<(usize, i64, Vec<i64>)> = vec![(0, big_m, Vec::new())];
    while let Some((idx, rem, es)) = stack.pop() {
        if idx == ms.len() {
            if rem != 0 {
                continue;
            }
            let mut term = QPoly::one();
            let mut exp = exp_base;
            for (i, &e) in es.iter().enumerate() {
                term = term.mul(&q_binomial(ms[i], e));
                exp += e * (e - ms[i]);
            }
            if term.is_zero() {
                continue;
            }
            if exp < 0 {
                return Err(Error::NegativeDegree(exp));
            }
            acc = acc.add(&term.shifted(exp)?);
            continue;
        }
        for e in 0..=rem.min(ms[idx]) {
            let mut es2 = es.clone();
            es2.push(e);
            stack.push((idx + 1, rem - e, es2));
        }
    }
    Ok(pref.mul(&acc))
}

/// The tableau sum: h = sum over paired diagrams and semi-tableaux of wt.
pub fn h_young(l: usize, nu: &SymCoweight, lambda: &SymCoweight) -> Result<QPoly> {
    let mut acc = QPoly::zero();
    for d in enum_paired_diagrams(l, nu, lambda)? {
        for t in enum_tableaux(&d) {
            acc = acc.add(&tableau_weight(&t));
        }
    }
    Ok(acc)
}

/// Validity of (i, j) for the dual-n table: 0 <= i, j <= l, i + j <= l, and
/// l - (i + j) even.
pub fn p_dual_valid(l: i64, i: i64, j: i64) -> bool {
    i >= 0 && j >= 0 && i <= l && j <= l && i + j <= l && (l - i - j) % 2 == 0
}

/// The horizontal structure constant p_l^{i,j} = h_{-l, {a^n}}^{a+i, a^(n-2), a-j}
/// for n >= 2 and l < a - 1, from the seven-case table. Two corrections are
/// applied relative to the source: the (i=l, j=0) exponent reads
/// (2l-1)n - (l-1), forced by the stated symmetry from the (0, l) case; both
/// are guarded by the brute-force suite. Invalid (i, j) gives zero.
pub fn p_dual(n: i64, l: i64, i: i64, j: i64) -> Result<QPoly> {
    if n < 2 || l < 1 {
        return Err(Error::Precondition(format!(
            "p_dual needs n >= 2 and l >= 1, got n={} l={}",
            n, l
        )));
    }
    if !p_dual_valid(l, i, j) {
        return Ok(QPoly::zero());
    }
    let nn = q_int(n);
    let nn1 = q_int(n).mul(&q_int(n - 1));
    let qm1 = q_minus_one_pow(1);
    let value = if i >= 1 && j >= 1 && i + j < l {
        nn1.mul(&q_minus_one_pow(2))
            .shifted((l + i - 2) * n - (l + i + j) / 2 + 1)?
    } else if i >= 1 && j >= 1 && i + j == l {
        nn1.mul(&qm1).shifted((l + i - 2) * n - l + 2)?
    } else if j == 0 && i == l {
        // corrected exponent: (2l-1)n - (l-1)
        nn.shifted((2 * l - 1) * n - (l - 1))?
    } else if j == 0 && i < l {
        nn.mul(&qm1).shifted((l + i - 1) * n - (l + i) / 2)?
    } else if i == 0 && j == l {
        nn.shifted((l - 1) * n - (l - 1))?
    } else {
        // i == 0, j <= l (covers i = j = 0 as the j -> 0 limit of the row)
        nn.mul(&qm1).shifted((l - 1) * n - (l + j) / 2)?
    };
    Ok(value)
}

/// The n = 1 (GL_2) horizontal case: h_{-l, {a}}^{a+j}.
pub fn h_dual1(l: i64, j: i64) -> Result<QPoly> {
    if l < 1 || j.abs() > l || (l - j).rem_euclid(2) != 0 {
        return Err(Error::Precondition(format!(
            "dual_1 needs |j| <= l and j = l (mod 2), got l={} j={}",
            l, j
        )));
    }
    if j == l {
        return QPoly::one().shifted(l);
    }
    if j == -l {
        return Ok(QPoly::one());
    }
    q_minus_one_pow(1).shifted((j + l) / 2 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(parts: &[i64]) -> SymCoweight {
        SymCoweight::from_padded(parts).unwrap()
    }

    #[test]
    fn computen_desk_cases() {
        // forced by brute force over A_1 acting on [[1,z],[0,z^3]] at p=3
        assert_eq!(h_computen(1, 0, 1, 0), QPoly::monomial(1, 1)); // q
        assert_eq!(h_computen(1, 0, 0, 1), QPoly::one());
        assert_eq!(h_computen(1, 1, 0, 0), QPoly::one());
        assert!(h_computen(1, 1, 1, 0).is_zero()); // parts exceed n
    }

    #[test]
    fn compute1_desk_cases() {
        assert_eq!(h_compute1(1, 1, 1, 0, 0), q_minus_one_pow(1));
        assert_eq!(h_compute1(1, 1, 0, 1, 0), QPoly::one());
        assert_eq!(h_compute1(1, 1, 0, 0, 1), QPoly::one());
        assert!(h_compute1(1, 1, 2, 0, 0).is_zero());
    }

    #[test]
    fn mainthm_single_block() {
        let nu = shape(&[3, 0]);
        assert_eq!(
            h_mainthm(1, &nu, &shape(&[4, 0])).unwrap(),
            QPoly::monomial(1, 1)
        );
        assert_eq!(h_mainthm(2, &nu, &shape(&[3, 0])).unwrap(), QPoly::one());
        assert_eq!(h_mainthm(1, &nu, &shape(&[2, 0])).unwrap(), QPoly::one());
        assert!(h_mainthm(1, &nu, &shape(&[3, 0])).unwrap().is_zero());
    }

    #[test]
    fn mainthm_matches_computen_on_uniform() {
        // nu = {a^n} padded: h_mainthm(2i+j+k) = h_computen(n, i, j, k)
        for (n, a) in [(1i64, 3i64), (2, 3), (2, 4), (3, 3)] {
            let mut nu_parts = vec![a; n as usize];
            nu_parts.extend(std::iter::repeat(0).take(n as usize));
            let nu = shape(&nu_parts);
            for i in 0..=n {
                for j in 0..=(n - i) {
                    for k in 0..=(n - i - j) {
                        let l = (2 * i + j + k) as usize;
                        if l > 3 {
                            continue;
                        }
                        let mut lam_parts = Vec::new();
                        lam_parts.extend(std::iter::repeat(a + 1).take(j as usize));
                        lam_parts.extend(std::iter::repeat(a).take((n - j - k) as usize));
                        lam_parts.extend(std::iter::repeat(a - 1).take(k as usize));
                        lam_parts.extend(std::iter::repeat(0).take(n as usize));
                        let lam = shape(&lam_parts);
                        assert_eq!(
                            h_mainthm(l, &nu, &lam).unwrap(),
                            h_computen(n, i, j, k),
                            "n={} a={} (i,j,k)=({},{},{})",
                            n,
                            a,
                            i,
                            j,
                            k
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn young_matches_computen_on_uniform() {
        for (n, a) in [(1i64, 3i64), (1, 7), (2, 3), (2, 4), (2, 5)] {
            let mut nu_parts = vec![a; n as usize];
            nu_parts.extend(std::iter::repeat(0).take(n as usize));
            let nu = shape(&nu_parts);
            for i in 0..=n {
                for j in 0..=(n - i) {
                    for k in 0..=(n - i - j) {
                        let l = (2 * i + j + k) as usize;
                        if l > 3 {
                            continue;
                        }
                        let mut lam_parts = Vec::new();
                        lam_parts.extend(std::iter::repeat(a + 1).take(j as usize));
                        lam_parts.extend(std::iter::repeat(a).take((n - j - k) as usize));
                        lam_parts.extend(std::iter::repeat(a - 1).take(k as usize));
                        lam_parts.extend(std::iter::repeat(0).take(n as usize));
                        let lam = shape(&lam_parts);
                        assert_eq!(
                            h_young(l, &nu, &lam).unwrap(),
                            h_computen(n, i, j, k),
                            "n={} a={} (i,j,k)=({},{},{})",
                            n,
                            a,
                            i,
                            j,
                            k
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn dual1_cases_and_sum() {
        assert_eq!(h_dual1(2, 2).unwrap(), QPoly::monomial(2, 1));
        assert_eq!(h_dual1(2, -2).unwrap(), QPoly::one());
        assert_eq!(h_dual1(2, 0).unwrap(), q_minus_one_pow(1));
        // sum telescopes to q^(l-1) [2]
        for l in 1..=5i64 {
            let mut acc = QPoly::zero();
            let mut j = -l;
            while j <= l {
                acc = acc.add(&h_dual1(l, j).unwrap());
                j += 2;
            }
            let expect = q_int(2).shifted(l - 1).unwrap();
            assert_eq!(acc, expect, "l={}", l);
        }
        assert!(h_dual1(2, 1).is_err());
    }

    #[test]
    fn dual_n_symmetry_and_sum() {
        for n in 2..=4i64 {
            for l in 1..=4i64 {
                // symmetry p^{i,j} = q^{(i-j)n} p^{j,i}
                for i in 0..=l {
                    for j in 0..=l {
                        if !p_dual_valid(l, i, j) {
                            continue;
                        }
                        let pij = p_dual(n, l, i, j).unwrap();
                        let pji = p_dual(n, l, j, i).unwrap();
                        if i >= j {
                            assert_eq!(
                                pij,
                                pji.shifted((i - j) * n).unwrap(),
                                "n={} l={} i={} j={}",
                                n,
                                l,
                                i,
                                j
                            );
                        }
                    }
                }
                // sum over valid (i,j) equals q^((2n-1)(l-1)) [2n]
                let mut acc = QPoly::zero();
                for i in 0..=l {
                    for j in 0..=l {
                        acc = acc.add(&p_dual(n, l, i, j).unwrap());
                    }
                }
                let expect = q_int(2 * n).shifted((2 * n - 1) * (l - 1)).unwrap();
                assert_eq!(acc, expect, "sum n={} l={}", n, l);
            }
        }
    }

    #[test]
    fn corollary_agrees_with_mainthm() {
        let nus = [shape(&[4, 2, 0, 0]), shape(&[5, 3, 0, 0]), shape(&[5, 2, 0, 0])];
        for nu in &nus {
            for l in 0..=3usize {
                for lam in candidate_lambdas(nu) {
                    let main = h_mainthm(l, nu, &lam).unwrap();
                    let cor = h_corollary(l, nu, &lam).unwrap();
                    assert_eq!(main, cor, "nu={} l={} lambda={}", nu, l, lam);
                }
            }
        }
        // identity action: h(0, nu, nu) = 1
        let nu = shape(&[4, 2, 0, 0]);
        assert_eq!(h_corollary(0, &nu, &nu).unwrap(), QPoly::one());
        // out-of-domain shape errors
        assert!(h_corollary(1, &shape(&[3, 2, 0, 0]), &shape(&[4, 2, 0, 0])).is_err());
        assert!(h_corollary(1, &shape(&[3, 1, 0, 0]), &shape(&[4, 1, 0, 0])).is_err());
    }

    /// All shapes reachable by moving each part by at most one, as candidates.
    fn candidate_lambdas(nu: &SymCoweight) -> Vec<SymCoweight> {
        let padded = nu.padded();
        let n = padded.len();
        let mut out = std::collections::BTreeSet::new();
        for mask_up in 0u32..(1 << n) {
            for mask_dn in 0u32..(1 << n) {
                if mask_up & mask_dn != 0 {
                    continue;
                }
                let parts: Vec<i64> = (0..n)
                    .map(|r| {
                        padded[r] + ((mask_up >> r) & 1) as i64 - ((mask_dn >> r) & 1) as i64
                    })
                    .collect();
                if parts.iter().any(|&p| p < 0) {
                    continue;
                }
                if let Ok(s) = SymCoweight::from_padded(&parts) {
                    if s.dim() == n {
                        out.insert(s);
                    }
                }
            }
        }
        out.into_iter().collect()
    }
}
