//! The combinatorial indexing sets of the structure-constant formulas:
//! equivalence classes of paired tuples with their omega statistics and the
//! exponent r([w]), and paired diagrams with semi-tableaux and weights.
//!
//! Conventions (these resolve genuine ambiguities in the source material and
//! are validated against the brute-force engine):
//!   - `plus` counts pairs whose part row alone is boxed (value -> value+1),
//!     `minus` the opposite; `plus` plays the role of omega^{0,1} and `minus`
//!     of omega^{1,0} everywhere.
//!   - a pair between a 1-part and a free 0-row consumes one box.
//!   - in the cross terms over distinct part values, indices follow the
//!     partition order (larger value first).

use crate::error::{Error, Result};
use crate::qpoly::{q_minus_one_pow, QPoly};
use crate::shapes::SymCoweight;
use serde::Serialize;
use std::collections::BTreeMap;

/// Omega statistics of one part value i > 1 of nu.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaStats {
    pub value: i64,
    /// multiplicity of the value in nu
    pub count: usize,
    /// omega^{0,0}: untouched pairs
    pub neither: usize,
    /// omega^{1,1}: both rows boxed (value unchanged)
    pub both: usize,
    /// part row alone boxed: value -> value + 1
    pub plus: usize,
    /// zero row alone boxed: value -> value - 1
    pub minus: usize,
}

/// Omega statistics of the one-dimensional sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OneSector {
    /// pairs (1-part, free 0-row) that become a 2-block
    pub pairs: usize,
    /// unpaired 1-parts with a box: 1 -> 0
    pub one_to_zero: usize,
    /// unpaired free 0-rows with a box: 0 -> 1
    pub zero_to_one: usize,
}

impl OneSector {
    pub fn total(&self) -> usize {
        self.pairs + self.one_to_zero + self.zero_to_one
    }
}

/// One equivalence class of paired tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TupleClass {
    /// stats per part value > 1, in decreasing value order
    pub big: Vec<OmegaStats>,
    pub one: OneSector,
}

fn padded_of_class(nu: &SymCoweight, class: &TupleClass) -> Vec<i64> {
    let mut parts: Vec<i64> = Vec::new();
    for st in &class.big {
        for _ in 0..st.plus {
            parts.push(st.value + 1);
        }
        for _ in 0..(st.neither + st.both) {
            parts.push(st.value);
        }
        for _ in 0..st.minus {
            parts.push(st.value - 1);
        }
        // each original pair keeps its zero partner
        for _ in 0..st.count {
            parts.push(0);
        }
    }
    let n2 = nu.count_z();
    let n1 = nu.count_one();
    let o = &class.one;
    for _ in 0..o.pairs {
        parts.push(2);
        parts.push(0);
    }
    for _ in 0..(n2 - o.pairs - o.one_to_zero) {
        parts.push(1);
    }
    for _ in 0..o.zero_to_one {
        parts.push(1);
    }
    for _ in 0..o.one_to_zero {
        parts.push(0);
    }
    for _ in 0..(n1 - o.pairs - o.zero_to_one) {
        parts.push(0);
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

fn compositions4(n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=(n - a) {
            for c in 0..=(n - a - b) {
                out.push((a, b, c, n - a - b - c));
            }
        }
    }
    out
}

/// All equivalence classes of paired tuples of size l transforming nu into
/// lambda. Empty when W is empty.
pub fn enum_paired_tuples(l: usize, nu: &SymCoweight, lambda: &SymCoweight) -> Vec<TupleClass> {
    let mut values: BTreeMap<i64, usize> = BTreeMap::new();
    for &a in nu.big_parts() {
        *values.entry(a).or_insert(0) += 1;
    }
    let values: Vec<(i64, usize)> = values.into_iter().rev().collect();
    let n2 = nu.count_z();
    let n1 = nu.count_one();
    let target = lambda.padded();
    let mut out = Vec::new();
    // per-value splits (neither, both, plus, minus)
    let mut splits: Vec<Vec<OmegaStats>> = vec![Vec::new()];
    for &(v, n) in &values {
        let mut next = Vec::new();
        for prev in &splits {
            for (neither, both, plus, minus) in compositions4(n) {
                let mut s = prev.clone();
                s.push(OmegaStats {
                    value: v,
                    count: n,
                    neither,
                    both,
                    plus,
                    minus,
                });
                next.push(s);
            }
        }
        splits = next;
    }
    for big in &splits {
        let used: usize = big.iter().map(|s| 2 * s.both + s.plus + s.minus).sum();
        if used > l {
            continue;
        }
        let rest = l - used;
        for pairs in 0..=n2.min(n1) {
            for one_to_zero in 0..=(n2 - pairs) {
                if pairs + one_to_zero > rest {
                    continue;
                }
                let zero_to_one = rest - pairs - one_to_zero;
                if pairs + zero_to_one > n1 {
                    continue;
                }
                let class = TupleClass {
                    big: big.clone(),
                    one: OneSector {
                        pairs,
                        one_to_zero,
                        zero_to_one,
                    },
                };
                if padded_of_class(nu, &class) == target {
                    out.push(class);
                }
            }
        }
    }
    out
}

/// The exponent r([w]) of a class, per the displayed formula with n_i the
/// multiplicity of value i in nu and t_1 the size of the one-dimensional
/// sector.
pub fn tuple_exponent(class: &TupleClass, nu: &SymCoweight) -> i64 {
    let t1 = nu.t1() as i64;
    let one_total = class.one.total() as i64;
    let sum_dot1: i64 = class.big.iter().map(|s| (s.plus + s.both) as i64).sum();
    let sum_diff: i64 = class
        .big
        .iter()
        .map(|s| s.neither as i64 - s.both as i64)
        .sum();
    let term1 = sum_dot1 * t1;
    let term2 = sum_diff * one_total;
    // cross terms over distinct values; class.big is in decreasing value
    // order, and the formula's i < j pairs the multiplicity of the smaller
    // value with the (plus - minus) of the larger.
    let mut term3 = 0i64;
    let mut term4 = 0i64;
    for (x, sx) in class.big.iter().enumerate() {
        for sy in class.big.iter().skip(x + 1) {
            // sx.value > sy.value
            term3 += (sx.count * sy.count) as i64;
            term4 += sy.count as i64 * (sx.plus as i64 - sx.minus as i64);
        }
    }
    let term5: i64 = class
        .big
        .iter()
        .map(|s| s.count as i64 * s.plus as i64)
        .sum();
    let sum_sq: i64 = class
        .big
        .iter()
        .map(|s| (s.neither * s.neither + s.both * s.both) as i64)
        .sum();
    let term6 = -(sum_diff * sum_diff - sum_sq) / 2;
    term1 + term2 + term3 + term4 + term5 + term6
}

/// A paired diagram: the padded shape nu (all blocks two-dimensional, rows in
/// decreasing order) with at most one added box per row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairedDiagram {
    pub nu: Vec<i64>,
    pub boxed: Vec<bool>,
}

impl PairedDiagram {
    pub fn n(&self) -> usize {
        self.nu.len()
    }

    /// Reduced-shape values r_i = omega_i - omega_{n-i+1} over the pairs,
    /// unsorted (row order).
    pub fn reduced(&self) -> Vec<i64> {
        let n = self.n();
        (0..n / 2)
            .map(|i| {
                let wi = self.nu[i] + self.boxed[i] as i64;
                let wj = self.nu[n - 1 - i] + self.boxed[n - 1 - i] as i64;
                wi - wj
            })
            .collect()
    }
}

/// A filling of the added boxes by distinct numbers from 1..=n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairedTableau {
    pub diagram: PairedDiagram,
    /// number assigned to each row, 0 when the row has no box
    pub fill: Vec<usize>,
}

fn check_precondition(nu: &SymCoweight) -> Result<()> {
    if nu.count_z() != 0 || nu.count_one() != 0 {
        return Err(Error::Precondition(format!(
            "paired diagrams need every block two-dimensional, got {}",
            nu
        )));
    }
    Ok(())
}

/// D_{l,nu}^lambda: diagrams whose reduced-shape multiset (with the paired
/// zeros) is lambda.
pub fn enum_paired_diagrams(
    l: usize,
    nu: &SymCoweight,
    lambda: &SymCoweight,
) -> Result<Vec<PairedDiagram>> {
    check_precondition(nu)?;
    let padded = nu.padded();
    let n = padded.len();
    let target = lambda.padded();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != l {
            continue;
        }
        let boxed: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        let d = PairedDiagram {
            nu: padded.clone(),
            boxed,
        };
        let mut parts = d.reduced();
        parts.extend(std::iter::repeat(0).take(n / 2));
        parts.sort_unstable_by(|a, b| b.cmp(a));
        if parts == target {
            out.push(d);
        }
    }
    Ok(out)
}

/// T_omega: all legal fillings of the added boxes.
///   1. each number at most once;
///   2. 2k+1 only in row k+1;
///   3. 2k in rows k+1 ..= n-k+1, except that 2k may not sit in a zero row j
///      whose own block value equals the value of 2k's block and whose
///      partner row holds a larger number.
pub fn enum_tableaux(diagram: &PairedDiagram) -> Vec<PairedTableau> {
    let n = diagram.n();
    let rows: Vec<usize> = (0..n).filter(|&r| diagram.boxed[r]).collect();
    let mut out = Vec::new();
    let mut fill = vec![0usize; n];
    fn allowed(diagram: &PairedDiagram, row0: usize, x: usize) -> bool {
        let n = diagram.n();
        let r = row0 + 1; // 1-based
        if x % 2 == 1 {
            let k = (x - 1) / 2;
            r == k + 1
        } else {
            let k = x / 2;
            r >= k + 1 && r <= n - k + 1
        }
    }
    fn rec(
        diagram: &PairedDiagram,
        rows: &[usize],
        idx: usize,
        used: &mut Vec<bool>,
        fill: &mut Vec<usize>,
        out: &mut Vec<PairedTableau>,
    ) {
        let n = diagram.n();
        if idx == rows.len() {
            // rule-3 exception, checked once the partner numbers are known
            for &r0 in rows {
                let x = fill[r0];
                if x % 2 == 0 {
                    let k = x / 2;
                    let j = r0 + 1;
                    if diagram.nu[r0] == 0 {
                        let partner = n - j; // 0-based index of row n-j+1
                        let partner_num = fill[partner];
                        if diagram.nu[k - 1] == diagram.nu[partner]
                            && partner_num > x
                        {
                            return;
                        }
                    }
                }
            }
            out.push(PairedTableau {
                diagram: diagram.clone(),
                fill: fill.clone(),
            });
            return;
        }
        let r0 = rows[idx];
        for x in 1..=n {
            if !used[x] && allowed(diagram, r0, x) {
                used[x] = true;
                fill[r0] = x;
                rec(diagram, rows, idx + 1, used, fill, out);
                fill[r0] = 0;
                used[x] = false;
            }
        }
    }
    let mut used = vec![false; n + 1];
    rec(diagram, &rows, 0, &mut used, &mut fill, &mut out);
    out
}

/// Weight of one tableau: the product over filled numbers of the per-number
/// weights read off the subtableau chain. Returns the zero polynomial when a
/// pivot count comes out empty (no matrix realizes the configuration).
pub fn tableau_weight(t: &PairedTableau) -> QPoly {
    let n = t.diagram.n();
    let half = n / 2;
    // row lengths within subtableau i: boxes count when their number >= n-2i+1
    let omega = |i: usize, r0: usize| -> i64 {
        let mut len = t.diagram.nu[r0];
        if t.diagram.boxed[r0] && t.fill[r0] >= n - 2 * i + 1 {
            len += 1;
        }
        len
    };
    // label of 1-based row R inside subtableau i
    let label = |i: usize, r: usize| -> (i64, i64) {
        let partner = n - r + 1;
        (
            omega(i, r - 1) - omega(i, partner - 1),
            (n - r) as i64,
        )
    };
    let sub_rows = |i: usize| -> std::ops::RangeInclusive<usize> { (half - i + 1)..=(half + i) };
    let has_box_in = |i: usize, r: usize| -> bool {
        t.diagram.boxed[r - 1] && t.fill[r - 1] >= n - 2 * i + 1
    };
    let count_s = |i: usize, threshold: (i64, i64)| -> i64 {
        sub_rows(i)
            .filter(|&r| !has_box_in(i, r) && label(i, r) < threshold)
            .count() as i64
    };
    let mut total = QPoly::one();
    for r0 in 0..n {
        if !t.diagram.boxed[r0] {
            continue;
        }
        let x = t.fill[r0];
        let r = r0 + 1;
        let wt = if x % 2 == 1 {
            let k = (x - 1) / 2;
            let i = half - k;
            QPoly::monomial(count_s(i, (i64::MAX, i64::MAX)) as u32, 1)
        } else {
            let k = x / 2;
            let i = half - k + 1;
            let (a, _) = label(i, r);
            if r == n - k + 1 {
                let partner_filled = sub_rows(i)
                    .any(|rr| t.diagram.boxed[rr - 1] && t.fill[rr - 1] == 2 * k - 1);
                let thr = if partner_filled { (a, (n - r) as i64) } else { (a - 1, (n - r) as i64) };
                QPoly::monomial(count_s(i, thr) as u32, 1)
            } else {
                let s = count_s(i, (a - 1, (n - r) as i64));
                if s == 0 {
                    return QPoly::zero();
                }
                QPoly::monomial((s - 1) as u32, 1).mul(&q_minus_one_pow(1))
            }
        };
        total = total.mul(&wt);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::q_int;

    fn shape(parts: &[i64]) -> SymCoweight {
        SymCoweight::from_padded(parts).unwrap()
    }

    #[test]
    fn single_pair_classes() {
        // (1, {3,0}, {4,0}): one class with plus = 1
        let cls = enum_paired_tuples(1, &shape(&[3, 0]), &shape(&[4, 0]));
        assert_eq!(cls.len(), 1);
        assert_eq!(cls[0].big[0].plus, 1);
        assert_eq!(tuple_exponent(&cls[0], &shape(&[3, 0])), 1);
        // (1, {3,0}, {2,0}): minus = 1, exponent 0
        let cls = enum_paired_tuples(1, &shape(&[3, 0]), &shape(&[2, 0]));
        assert_eq!(cls.len(), 1);
        assert_eq!(cls[0].big[0].minus, 1);
        assert_eq!(tuple_exponent(&cls[0], &shape(&[3, 0])), 0);
        // (2, {3,0}, {3,0}): both = 1, exponent 0
        let cls = enum_paired_tuples(2, &shape(&[3, 0]), &shape(&[3, 0]));
        assert_eq!(cls.len(), 1);
        assert_eq!(cls[0].big[0].both, 1);
        assert_eq!(tuple_exponent(&cls[0], &shape(&[3, 0])), 0);
    }

    #[test]
    fn size_zero_classes() {
        let nu = shape(&[3, 1, 0, 0]);
        let cls = enum_paired_tuples(0, &nu, &nu);
        assert_eq!(cls.len(), 1);
        let other = shape(&[3, 2, 0, 0]);
        assert!(enum_paired_tuples(0, &nu, &other).is_empty());
    }

    #[test]
    fn nu_hat_matches_lambda() {
        // every enumerated class reproduces lambda exactly
        let nu = shape(&[3, 1, 0, 0]);
        for l in 0..=3usize {
            for lam in [
                shape(&[4, 1, 0, 0]),
                shape(&[3, 2, 0, 0]),
                shape(&[2, 1, 0, 0]),
                shape(&[3, 1, 0, 0]),
                shape(&[3, 0, 0, 0]),
            ] {
                for c in enum_paired_tuples(l, &nu, &lam) {
                    assert_eq!(super::padded_of_class(&nu, &c), lam.padded());
                }
            }
        }
    }

    #[test]
    fn diagram_enumeration_examples() {
        // (1, {3,0}, {4,0}): one diagram, box on row 1, one tableau filled 1
        let d = enum_paired_diagrams(1, &shape(&[3, 0]), &shape(&[4, 0])).unwrap();
        assert_eq!(d.len(), 1);
        assert!(d[0].boxed[0] && !d[0].boxed[1]);
        let t = enum_tableaux(&d[0]);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].fill[0], 1);
        assert_eq!(tableau_weight(&t[0]), QPoly::monomial(1, 1));
        // (1, {3,0}, {2,0}): box on row 2, filled with 2, weight 1
        let d = enum_paired_diagrams(1, &shape(&[3, 0]), &shape(&[2, 0])).unwrap();
        assert_eq!(d.len(), 1);
        assert!(!d[0].boxed[0] && d[0].boxed[1]);
        let t = enum_tableaux(&d[0]);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].fill[1], 2);
        assert_eq!(tableau_weight(&t[0]), QPoly::one());
        // (0, nu, nu): the empty tableau
        let d = enum_paired_diagrams(0, &shape(&[3, 0]), &shape(&[3, 0])).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(enum_tableaux(&d[0]).len(), 1);
    }

    #[test]
    fn paper_worked_example_weights() {
        // nu = {4,4,3,3,2} padded to ten rows; boxes on rows 1, 4, 5, 8 filled
        // 1, 2, 6, 4; weights (q-1)q^2, (q-1), (q-1)q^4, q^6.
        let nu = vec![4, 4, 3, 3, 2, 0, 0, 0, 0, 0];
        let mut boxed = vec![false; 10];
        let mut fill = vec![0usize; 10];
        for (row, num) in [(0usize, 1usize), (3, 2), (4, 6), (7, 4)] {
            boxed[row] = true;
            fill[row] = num;
        }
        let t = PairedTableau {
            diagram: PairedDiagram { nu, boxed },
            fill,
        };
        // wt_6 * wt_4 * wt_2 * wt_1 = (q-1)q^2 * (q-1) * (q-1)q^4 * q^6
        let expect = QPoly::monomial(12, 1).mul(&q_minus_one_pow(3));
        assert_eq!(tableau_weight(&t), expect);
    }

    #[test]
    fn tableaux_are_duplicate_free() {
        let nu = shape(&[4, 2, 0, 0]);
        for l in 0..=3usize {
            for lam in [shape(&[5, 2, 0, 0]), shape(&[4, 3, 0, 0]), shape(&[3, 2, 0, 0])] {
                for d in enum_paired_diagrams(l, &nu, &lam).unwrap() {
                    let ts = enum_tableaux(&d);
                    let mut seen = std::collections::BTreeSet::new();
                    for t in &ts {
                        assert!(seen.insert(format!("{:?}", t.fill)));
                    }
                }
            }
        }
    }

    #[test]
    fn precondition_rejects_one_dim_sector() {
        let nu = shape(&[3, 1, 0, 0]);
        assert!(enum_paired_diagrams(1, &nu, &nu).is_err());
    }

    #[test]
    fn one_sector_moves() {
        // nu = {1, 0}: l = 1 families
        let nu = shape(&[1, 0]);
        let to_two = enum_paired_tuples(1, &nu, &shape(&[2, 0]));
        assert_eq!(to_two.len(), 1);
        assert_eq!(to_two[0].one.pairs, 1);
        let to_zero = enum_paired_tuples(1, &nu, &shape(&[0, 0]));
        assert_eq!(to_zero.len(), 1);
        assert_eq!(to_zero[0].one.one_to_zero, 1);
        let to_one = enum_paired_tuples(1, &nu, &shape(&[1, 1]));
        assert_eq!(to_one.len(), 1);
        assert_eq!(to_one[0].one.zero_to_one, 1);
    }

    #[test]
    fn weight_switch_rules_small() {
        // nu = {a, a}: the stay-move tableau of the second block must use
        // rule 4 (partner filled) and come out with weight 1; the pivot move
        // uses rule 2 with the (q-1) factor. Checked against [2]q-type sums
        // in the formulas tests; here just the individual weights for a = 4.
        let nu = vec![4, 4, 0, 0];
        // diagram boxes rows 2,3 (0-based 1,2), fill 3 at row 2 and 4 at row 3
        let d = PairedDiagram {
            nu: nu.clone(),
            boxed: vec![false, true, true, false],
        };
        let ts = enum_tableaux(&d);
        // fillings: (3@row2, 4@row3) and (2@row2, 4@row3); (3@row2, 2@row3)
        // is blocked by the rule-3 exception.
        assert_eq!(ts.len(), 2);
        let total: QPoly = ts
            .iter()
            .map(tableau_weight)
            .fold(QPoly::zero(), |acc, w| acc.add(&w));
        // 1 + (q-1) = q
        assert_eq!(total, QPoly::monomial(1, 1));
        let _ = q_int(2);
    }
}
