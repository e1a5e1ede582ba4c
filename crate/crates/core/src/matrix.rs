//! Square matrices over k((z)) with exact Laurent-polynomial entries.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::laurent::LaurentPoly;
use crate::shapes::SymCoweight;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LMatrix {
    field: PrimeField,
    dim: usize,
    entries: Vec<LaurentPoly>,
}

impl LMatrix {
    pub fn zero(field: PrimeField, dim: usize) -> Self {
        LMatrix {
            field,
            dim,
            entries: vec![LaurentPoly::zero(field); dim * dim],
        }
    }

    pub fn identity(field: PrimeField, dim: usize) -> Self {
        let mut m = Self::zero(field, dim);
        for i in 0..dim {
            *m.at_mut(i, i) = LaurentPoly::one(field);
        }
        m
    }

    pub fn from_fn(field: PrimeField, dim: usize, mut f: impl FnMut(usize, usize) -> LaurentPoly) -> Self {
        let mut m = Self::zero(field, dim);
        for i in 0..dim {
            for j in 0..dim {
                *m.at_mut(i, j) = f(i, j);
            }
        }
        m
    }

    /// diag(z^e1, ..., z^em).
    pub fn diag_powers(field: PrimeField, exps: &[i64]) -> Self {
        let mut m = Self::zero(field, exps.len());
        for (i, &e) in exps.iter().enumerate() {
            *m.at_mut(i, i) = LaurentPoly::monomial(field, e, 1);
        }
        m
    }

    /// The canonical block-diagonal matrix Pi^sigma: blocks in nondecreasing
    /// valuation order (1-blocks, then z-blocks, then [[1,z],[0,z^a]] by a).
    pub fn canonical_form(field: PrimeField, sigma: &SymCoweight) -> Self {
        let dim = sigma.dim();
        let mut m = Self::zero(field, dim);
        let mut pos = 0usize;
        for _ in 0..sigma.count_one() {
            *m.at_mut(pos, pos) = LaurentPoly::one(field);
            pos += 1;
        }
        for _ in 0..sigma.count_z() {
            *m.at_mut(pos, pos) = LaurentPoly::monomial(field, 1, 1);
            pos += 1;
        }
        let mut big = sigma.big_parts().to_vec();
        big.sort_unstable();
        for a in big {
            *m.at_mut(pos, pos) = LaurentPoly::one(field);
            *m.at_mut(pos, pos + 1) = LaurentPoly::monomial(field, 1, 1);
            *m.at_mut(pos + 1, pos + 1) = LaurentPoly::monomial(field, a, 1);
            pos += 2;
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.dim + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut LaurentPoly {
        &mut self.entries[i * self.dim + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.field, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut acc = LaurentPoly::zero(self.field);
                for k in 0..self.dim {
                    if !self.at(i, k).is_zero() && !other.at(k, j).is_zero() {
                        acc = acc.add(&self.at(i, k).mul(other.at(k, j)));
                    }
                }
                *out.at_mut(i, j) = acc;
            }
        }
        out
    }

    /// Entrywise substitution z -> -z.
    pub fn substitute_neg_z(&self) -> Self {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.substitute_neg_z();
        }
        out
    }

    /// Exact determinant of the submatrix on `rows` x `cols`, by cofactor
    /// expansion along the first listed row.
    fn sub_det(&self, rows: &[usize], cols: &[usize]) -> LaurentPoly {
        debug_assert_eq!(rows.len(), cols.len());
        match rows.len() {
            0 => LaurentPoly::one(self.field),
            1 => self.at(rows[0], cols[0]).clone(),
            _ => {
                let mut acc = LaurentPoly::zero(self.field);
                let r = rows[0];
                let rest: Vec<usize> = rows[1..].to_vec();
                for (idx, &c) in cols.iter().enumerate() {
                    let a = self.at(r, c);
                    if a.is_zero() {
                        continue;
                    }
                    let sub_cols: Vec<usize> = cols
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != idx)
                        .map(|(_, &cc)| cc)
                        .collect();
                    let minor = self.sub_det(&rest, &sub_cols);
                    let term = a.mul(&minor);
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

    pub fn det(&self) -> LaurentPoly {
        let all: Vec<usize> = (0..self.dim).collect();
        self.sub_det(&all, &all)
    }

    /// Classical adjugate: adj(M)[i][j] = (-1)^(i+j) det(M with row j, col i removed).
    pub fn adjugate(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zero(self.field, n);
        let all: Vec<usize> = (0..n).collect();
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = all.iter().copied().filter(|&r| r != j).collect();
                let cols: Vec<usize> = all.iter().copied().filter(|&c| c != i).collect();
                let mut cof = self.sub_det(&rows, &cols);
                if (i + j) % 2 == 1 {
                    cof = cof.neg();
                }
                *out.at_mut(i, j) = cof;
            }
        }
        out
    }

    /// Minimum valuation over all i x i minors; None when every minor is zero.
    pub fn minor_valuation(&self, size: usize) -> Option<i64> {
        let n = self.dim;
        assert!(size >= 1 && size <= n);
        let mut best: Option<i64> = None;
        let rows_sets = subsets(n, size);
        let cols_sets = subsets(n, size);
        for rows in &rows_sets {
            for cols in &cols_sets {
                if let Some(v) = self.sub_det(rows, cols).valuation() {
                    best = Some(best.map_or(v, |b: i64| b.min(v)));
                }
            }
        }
        best
    }

    pub fn min_entry_valuation(&self) -> Option<i64> {
        self.entries.iter().filter_map(|e| e.valuation()).min()
    }

    pub fn max_entry_degree(&self) -> Option<i64> {
        self.entries.iter().filter_map(|e| e.degree()).max()
    }

    /// True when every entry lies in k((z^2)).
    pub fn is_even(&self) -> bool {
        self.entries.iter().all(|e| e.is_even())
    }

    pub fn scale_all(&self, k: i64) -> Self {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.shift(k);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut entries = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if !self.at(i, j).is_zero() {
                    entries.push(serde_json::json!([i, j, self.at(i, j).to_json()]));
                }
            }
        }
        serde_json::json!({
            "p": self.field.modulus(),
            "dim": self.dim,
            "entries": entries,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("matrix JSON must be an object".into()))?;
        let p = obj
            .get("p")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Parse("missing prime field 'p'".into()))?;
        let field = PrimeField::new(p)?;
        let dim = obj
            .get("dim")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Parse("missing 'dim'".into()))? as usize;
        let mut m = Self::zero(field, dim);
        if let Some(entries) = obj.get("entries") {
            let arr = entries
                .as_array()
                .ok_or_else(|| Error::Parse("'entries' must be an array".into()))?;
            for item in arr {
                let triple = item
                    .as_array()
                    .filter(|a| a.len() == 3)
                    .ok_or_else(|| Error::Parse("entry must be [row, col, poly]".into()))?;
                let i = triple[0]
                    .as_u64()
                    .ok_or_else(|| Error::Parse("row index".into()))? as usize;
                let j = triple[1]
                    .as_u64()
                    .ok_or_else(|| Error::Parse("col index".into()))? as usize;
                if i >= dim || j >= dim {
                    return Err(Error::Parse(format!("entry ({}, {}) out of range", i, j)));
                }
                *m.at_mut(i, j) = LaurentPoly::from_json(field, &triple[2])?;
            }
        }
        Ok(m)
    }
}

impl fmt::Display for LMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            write!(f, "[")?;
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// All size-k subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    fn z(e: i64) -> LaurentPoly {
        LaurentPoly::monomial(f3(), e, 1)
    }

    #[test]
    fn det_of_triangular() {
        let mut m = LMatrix::zero(f3(), 3);
        *m.at_mut(0, 0) = z(1);
        *m.at_mut(0, 1) = z(0);
        *m.at_mut(1, 1) = z(2);
        *m.at_mut(2, 2) = z(4);
        assert_eq!(m.det(), z(7));
    }

    #[test]
    fn adjugate_times_matrix_is_det() {
        let mut m = LMatrix::zero(f3(), 2);
        *m.at_mut(0, 0) = LaurentPoly::from_pairs(f3(), &[(0, 1), (1, 2)]);
        *m.at_mut(0, 1) = z(1);
        *m.at_mut(1, 0) = z(3);
        *m.at_mut(1, 1) = LaurentPoly::from_pairs(f3(), &[(2, 1)]);
        let d = m.det();
        let prod = m.mul(&m.adjugate());
        for i in 0..2 {
            for j in 0..2 {
                if i == j {
                    assert_eq!(*prod.at(i, j), d);
                } else {
                    assert!(prod.at(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let mut m = LMatrix::zero(f3(), 2);
        *m.at_mut(0, 0) = LaurentPoly::from_pairs(f3(), &[(-1, 2), (3, 1)]);
        *m.at_mut(1, 1) = z(2);
        let back = LMatrix::from_json(&m.to_json()).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn canonical_form_layout() {
        let s = SymCoweight::new(vec![3], 1, 1).unwrap();
        let m = LMatrix::canonical_form(f3(), &s);
        // blocks in nondecreasing valuation order: 1, z, [[1,z],[0,z^3]]
        assert_eq!(*m.at(0, 0), z(0));
        assert_eq!(*m.at(1, 1), z(1));
        assert_eq!(*m.at(2, 2), z(0));
        assert_eq!(*m.at(2, 3), z(1));
        assert_eq!(*m.at(3, 3), z(3));
        assert_eq!(m.det(), z(4));
    }
}
