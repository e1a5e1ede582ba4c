//! The block-diagonal reduction: given B over k((z)), produce g in GL_m(k[[z]]),
//! h in GL_m(k((z^2))) and a canonical block-diagonal Lambda with g*B*h = Lambda,
//! working in truncated series arithmetic.
//!
//! Allowed operations are left row operations over k[[z]] (coefficients of
//! valuation >= 0, unit scalings, swaps) and right column operations over
//! k((z^2)) (even-exponent coefficients of any valuation, even-valuation unit
//! scalings, swaps). Every helper below preserves that discipline; the witness
//! matrices record the accumulated products.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::laurent::LaurentPoly;
use crate::matrix::LMatrix;
use crate::series::TruncSeries;
use crate::shapes::SymCoweight;

/// A diagonal block of the canonical form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    /// 1 (exponent 0) or z (exponent 1).
    One { exp: i64 },
    /// [[1, z], [0, z^a]] with a >= 2.
    Two { a: i64 },
}

impl Block {
    pub fn size(&self) -> usize {
        match self {
            Block::One { .. } => 1,
            Block::Two { .. } => 2,
        }
    }

    /// Sort key: the valuation profile used for the nondecreasing block order.
    fn order_key(&self) -> (i64, i64) {
        match *self {
            Block::One { exp } => (exp, 0),
            Block::Two { a } => (a, 1),
        }
    }
}

/// Result of a successful reduction, per the witness contract: g*B*h agrees
/// with Lambda on all coefficients known at the working precision.
#[derive(Clone, Debug)]
pub struct ReductionWitness {
    pub g: Vec<Vec<TruncSeries>>,
    pub h: Vec<Vec<TruncSeries>>,
    pub lambda: LMatrix,
    pub sigma: SymCoweight,
    pub precision: i64,
}

impl ReductionWitness {
    /// Check g*B*h = Lambda on every known coefficient, that h has
    /// even-exponent entries, and that g has nonnegative valuations.
    pub fn validate(&self, b: &LMatrix) -> bool {
        let m = b.dim();
        let f = b.field();
        let inf = i64::MAX / 8;
        let bt: Vec<Vec<TruncSeries>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| TruncSeries::from_laurent(b.at(i, j), inf))
                    .collect()
            })
            .collect();
        let gb = mat_mul(&self.g, &bt, f);
        let gbh = mat_mul(&gb, &self.h, f);
        for i in 0..m {
            for j in 0..m {
                let lam = TruncSeries::from_laurent(self.lambda.at(i, j), inf);
                if !gbh[i][j].agrees_with(&lam) {
                    return false;
                }
            }
        }
        let h_even = self.h.iter().flatten().all(|e| e.is_even());
        let g_integral = self
            .g
            .iter()
            .flatten()
            .all(|e| e.valuation().map_or(true, |v| v >= 0));
        h_even && g_integral
    }
}

fn mat_mul(
    a: &[Vec<TruncSeries>],
    b: &[Vec<TruncSeries>],
    field: PrimeField,
) -> Vec<Vec<TruncSeries>> {
    let m = a.len();
    let inf = i64::MAX / 8;
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = TruncSeries::zero_to(field, inf);
                    for k in 0..m {
                        acc = acc.add(&a[i][k].mul(&b[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Working state: the matrix being reduced plus both witness accumulators.
struct Reducer {
    field: PrimeField,
    m: usize,
    mat: Vec<Vec<TruncSeries>>,
    g: Vec<Vec<TruncSeries>>,
    h: Vec<Vec<TruncSeries>>,
    ops: u64,
    budget: u64,
}

impl Reducer {
    fn new(b: &LMatrix, prec: i64) -> Self {
        let m = b.dim();
        let f = b.field();
        let inf = i64::MAX / 8;
        let mat = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| TruncSeries::from_laurent(b.at(i, j), prec))
                    .collect()
            })
            .collect();
        let eye = |_: usize| -> Vec<Vec<TruncSeries>> {
            (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| {
                            TruncSeries::from_laurent(
                                &if i == j {
                                    LaurentPoly::one(f)
                                } else {
                                    LaurentPoly::zero(f)
                                },
                                inf,
                            )
                        })
                        .collect()
                })
                .collect()
        };
        Reducer {
            field: f,
            m,
            mat,
            g: eye(0),
            h: eye(0),
            ops: 0,
            budget: 40_000 + 4_000 * (m as u64) * (m as u64),
        }
    }

    fn spend(&mut self) -> Result<()> {
        self.ops += 1;
        if self.ops > self.budget {
            return Err(Error::ReductionBudget);
        }
        Ok(())
    }

    // ---- left (row) operations: accumulate into g ----

    fn row_axpy(&mut self, dst: usize, src: usize, c: &TruncSeries) -> Result<()> {
        self.spend()?;
        debug_assert!(c.valuation().map_or(true, |v| v >= 0), "row coeff below k[[z]]");
        for j in 0..self.m {
            self.mat[dst][j] = self.mat[dst][j].add(&c.mul(&self.mat[src][j]));
            self.g[dst][j] = self.g[dst][j].add(&c.mul(&self.g[src][j]));
        }
        Ok(())
    }

    fn row_scale(&mut self, r: usize, u: &TruncSeries) -> Result<()> {
        self.spend()?;
        debug_assert_eq!(u.valuation(), Some(0), "row scale must be a unit of k[[z]]");
        for j in 0..self.m {
            self.mat[r][j] = self.mat[r][j].mul(u);
            self.g[r][j] = self.g[r][j].mul(u);
        }
        Ok(())
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        if a != b {
            self.mat.swap(a, b);
            self.g.swap(a, b);
        }
    }

    // ---- right (column) operations: accumulate into h ----

    fn col_axpy(&mut self, dst: usize, src: usize, c: &TruncSeries) -> Result<()> {
        self.spend()?;
        debug_assert!(c.is_even(), "column coeff must lie in k((z^2))");
        for i in 0..self.m {
            let t = c.mul(&self.mat[i][src]);
            self.mat[i][dst] = self.mat[i][dst].add(&t);
            let t = c.mul(&self.h[i][src]);
            self.h[i][dst] = self.h[i][dst].add(&t);
        }
        Ok(())
    }

    fn col_scale(&mut self, cidx: usize, u: &TruncSeries) -> Result<()> {
        self.spend()?;
        debug_assert!(u.is_even(), "column scale must lie in k((z^2))");
        debug_assert!(u.valuation().map_or(false, |v| v % 2 == 0));
        for i in 0..self.m {
            self.mat[i][cidx] = self.mat[i][cidx].mul(u);
            self.h[i][cidx] = self.h[i][cidx].mul(u);
        }
        Ok(())
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.m {
                self.mat[i].swap(a, b);
                self.h[i].swap(a, b);
            }
        }
    }

    // ---- helpers ----

    fn monomial(&self, e: i64) -> TruncSeries {
        TruncSeries::monomial(self.field, e, 1, i64::MAX / 8)
    }

    fn entry(&self, i: usize, j: usize) -> &TruncSeries {
        &self.mat[i][j]
    }

    /// Make the entry at (r, cown) with exact valuation monic by a row scale,
    /// restoring the single-entry column `cown`... used on 1-dim block rows:
    /// scale row r by u^-1 and column rcol by u so the block entry survives.
    fn monicize_via_row(&mut self, r: usize, rcol: usize, target: usize) -> Result<i64> {
        let e = self.entry(r, target).clone();
        let v = e.valuation().expect("monicize of known-nonzero entry");
        let u = e.shift(-v);
        let uinv = u.invert()?;
        self.row_scale(r, &uinv)?;
        // the block's own entry got scaled too; undo with the column
        self.col_scale(rcol, &u)?;
        Ok(v)
    }

    /// Triangularize the leading h x h square by left operations; diagonals
    /// become exact monic powers of z.
    fn hermite(&mut self, h: usize) -> Result<()> {
        for c in 0..h {
            let mut pivot: Option<(usize, i64)> = None;
            for r in c..h {
                if let Some(v) = self.entry(r, c).valuation() {
                    if pivot.map_or(true, |(_, pv)| v < pv) {
                        pivot = Some((r, v));
                    }
                }
            }
            let (pr, pv) = pivot.ok_or(Error::PrecisionExhausted)?;
            self.row_swap(c, pr);
            let u = self.entry(c, c).shift(-pv);
            let uinv = u.invert()?;
            self.row_scale(c, &uinv)?;
            for r in (c + 1)..h {
                if !self.entry(r, c).is_known_zero() {
                    let coeff = self.entry(r, c).shift(-pv).neg();
                    self.row_axpy(r, c, &coeff)?;
                }
            }
        }
        Ok(())
    }

    /// Even-exponent rescale of a lone diagonal z^d down to z^(d mod 2).
    fn finalize_one(&mut self, pos: usize) -> Result<Block> {
        let v = self
            .entry(pos, pos)
            .valuation()
            .ok_or(Error::PrecisionExhausted)?;
        let drop = 2 * (v.div_euclid(2));
        if drop != 0 {
            self.col_scale(pos, &self.monomial(-drop))?;
        }
        // make it exactly monic
        let u = self.entry(pos, pos).shift(-(v - drop));
        let uinv = u.invert()?;
        self.row_scale(pos, &uinv)?;
        Ok(Block::One { exp: v.rem_euclid(2) })
    }

    /// Move a split block living on `rows` x `cols` to the trailing positions
    /// of the prefix [0, h). The remainder is re-reduced afterwards, so only
    /// the split block's own structure has to survive the swaps.
    fn move_to_end(&mut self, h: usize, rows: &mut [usize], cols: &mut [usize]) {
        let s = rows.len();
        for k in (0..s).rev() {
            let dest = h - (s - k);
            let r = rows[k];
            self.row_swap(r, dest);
            for x in rows.iter_mut() {
                if *x == dest {
                    *x = r;
                }
            }
            rows[k] = dest;
            let c = cols[k];
            self.col_swap(c, dest);
            for x in cols.iter_mut() {
                if *x == dest {
                    *x = c;
                }
            }
            cols[k] = dest;
        }
    }

    /// Canonicalize the 2x2 configuration (rt,cl)=z^w, (rt,cr)=z^c pure monic,
    /// (rb,cl)=0, (rb,cr)=monic z^d, with c !≡ w (mod 2). Column cl must have
    /// no other entries; column cr none besides these two rows. Returns the
    /// blocks produced in position order (rt,cl) then (rb,cr).
    fn normalize_2x2(
        &mut self,
        rt: usize,
        rb: usize,
        cl: usize,
        cr: usize,
        w: i64,
        c: i64,
        d: i64,
    ) -> Result<Vec<(Vec<usize>, Vec<usize>, Block)>> {
        debug_assert!(w == 0 || w == 1);
        if c >= d {
            // row kill splits into two 1-dim blocks
            let coeff = self.monomial(c - d).neg();
            self.row_axpy(rt, rb, &coeff)?;
            let drop = 2 * (d.div_euclid(2));
            if drop != 0 {
                self.col_scale(cr, &self.monomial(-drop))?;
            }
            Ok(vec![
                (vec![rt], vec![cl], Block::One { exp: w }),
                (vec![rb], vec![cr], Block::One { exp: d.rem_euclid(2) }),
            ])
        } else if w == 0 {
            self.col_scale(cr, &self.monomial(1 - c))?;
            let a = d + 1 - c;
            Ok(vec![(vec![rt, rb], vec![cl, cr], Block::Two { a })])
        } else {
            // [[z, z^c],[0, z^d]] with c even: rotate into [[1,z],[0,z^(d-c+1)]]
            self.col_scale(cr, &self.monomial(-c))?;
            self.col_swap(cl, cr);
            let coeff = self.monomial(d - c).neg();
            self.row_axpy(rb, rt, &coeff)?;
            let m1 = TruncSeries::monomial(self.field, 0, -1, i64::MAX / 8);
            self.row_scale(rb, &m1)?;
            let a = d - c + 1;
            Ok(vec![(vec![rt, rb], vec![cl, cr], Block::Two { a })])
        }
    }
}

/// Position-tagged block list for a canonical prefix.
#[derive(Clone, Debug)]
struct Placed {
    start: usize,
    block: Block,
}

fn place(blocks: &[Block]) -> Vec<Placed> {
    let mut out = Vec::with_capacity(blocks.len());
    let mut pos = 0usize;
    for &b in blocks {
        out.push(Placed { start: pos, block: b });
        pos += b.size();
    }
    out
}

impl Reducer {
    /// Reduce the prefix [0, h) to canonical blocks, returned in position order.
    fn reduce_prefix(&mut self, h: usize) -> Result<Vec<Block>> {
        if h == 0 {
            return Ok(Vec::new());
        }
        self.hermite(h)?;
        if h == 1 {
            return Ok(vec![self.finalize_one(0)?]);
        }
        let max_passes = 16 + 4 * self.m + 2 * h;
        for _pass in 0..max_passes {
            let blocks = self.reduce_prefix(h - 1)?;
            let placed = place(&blocks);
            let j = h - 1;
            self.normalize_column(&placed, j)?;
            self.kill_high(j)?;
            // column empty above the diagonal: the diagonal splits as 1-dim
            if (0..j).all(|p| self.entry(p, j).is_known_zero()) {
                let mut out = blocks;
                out.push(self.finalize_one(j)?);
                return Ok(out);
            }
            let (pstar, vstar) = self.min_col_entry(j);
            match locate(&placed, pstar) {
                Location::OneDim { row, w } => {
                    match self.case_one_dim(&placed, j, row, w, vstar)? {
                        Outcome::Split(done) => return Ok(done),
                        Outcome::Continue => continue,
                    }
                }
                Location::TwoSecond { top, a } => {
                    return self.case_two_dim(j, top, a, vstar);
                }
                Location::TwoFirst => {
                    unreachable!("first rows of 2-dim blocks are cleared by normalize_column")
                }
            }
        }
        Err(Error::ReductionBudget)
    }

    /// Step 1: per-block normalization of the active column.
    /// 1-dim rows keep only the opposite-parity part of their entry; first
    /// rows of 2-dim blocks are cleared entirely (the odd part moves into the
    /// second row).
    fn normalize_column(&mut self, placed: &[Placed], j: usize) -> Result<()> {
        for pl in placed {
            match pl.block {
                Block::One { exp } => {
                    let p = pl.start;
                    let same = self.entry(p, j).parity_part(exp);
                    if !same.is_known_zero() {
                        let coeff = same.shift(-exp).neg();
                        self.col_axpy(j, p, &coeff)?;
                    }
                }
                Block::Two { .. } => {
                    let t = pl.start;
                    let f = self.entry(t, j).clone();
                    if !f.is_known_zero() {
                        let fe = f.parity_part(0);
                        let fo = f.parity_part(1);
                        if !fe.is_known_zero() {
                            self.col_axpy(j, t, &fe.neg())?;
                        }
                        if !fo.is_known_zero() {
                            self.col_axpy(j, t + 1, &fo.shift(-1).neg())?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Step 2: entries with valuation at or above the diagonal die against row j.
    fn kill_high(&mut self, j: usize) -> Result<()> {
        let dj = self
            .entry(j, j)
            .valuation()
            .ok_or(Error::PrecisionExhausted)?;
        for p in 0..j {
            if let Some(v) = self.entry(p, j).valuation() {
                if v >= dj {
                    let coeff = self.entry(p, j).shift(-dj).neg();
                    self.row_axpy(p, j, &coeff)?;
                }
            }
        }
        Ok(())
    }

    fn min_col_entry(&self, j: usize) -> (usize, i64) {
        let mut best: Option<(usize, i64)> = None;
        for p in 0..j {
            if let Some(v) = self.entry(p, j).valuation() {
                if best.map_or(true, |(_, bv)| v < bv) {
                    best = Some((p, v));
                }
            }
        }
        best.expect("min_col_entry on a nonempty column")
    }
}

enum Location {
    OneDim { row: usize, w: i64 },
    TwoSecond { top: usize, a: i64 },
    TwoFirst,
}

fn locate(placed: &[Placed], row: usize) -> Location {
    for pl in placed {
        match pl.block {
            Block::One { exp } if pl.start == row => {
                return Location::OneDim { row, w: exp };
            }
            Block::Two { a } if pl.start == row => {
                let _ = a;
                return Location::TwoFirst;
            }
            Block::Two { a } if pl.start + 1 == row => {
                return Location::TwoSecond { top: pl.start, a };
            }
            _ => {}
        }
    }
    unreachable!("row {} not covered by the canonical prefix", row)
}

enum Outcome {
    Split(Vec<Block>),
    Continue,
}

impl Reducer {
    /// The least-valuation entry sits at a 2-dim block's second row: after the
    /// pivot absorbs the whole column, the block sheds a 1-dim factor.
    fn case_two_dim(&mut self, j: usize, top: usize, _a: i64, vstar: i64) -> Result<Vec<Block>> {
        let t1 = top + 1;
        let x = self.entry(t1, j).clone();
        // P1/P2: every other entry in the column (diagonal included) dies
        // against row t1; junk lands in column t1 and is re-reduced later.
        let xinv = x.invert()?;
        for q in 0..=j {
            if q == t1 {
                continue;
            }
            if !self.entry(q, j).is_known_zero() {
                let coeff = self.entry(q, j).mul(&xinv).neg();
                self.row_axpy(q, t1, &coeff)?;
            }
        }
        // P3: make the pivot monic.
        let u = x.shift(-vstar);
        self.row_scale(t1, &u.invert()?)?;
        // P4: remove the vstar-parity part of the block diagonal using the
        // now-lone column j.
        let s = self.entry(t1, t1).clone();
        let sp = s.parity_part(vstar.rem_euclid(2));
        if !sp.is_known_zero() {
            self.col_axpy(t1, j, &sp.shift(-vstar).neg())?;
        }
        let s2 = self.entry(t1, t1).clone();
        if !s2.is_known_zero() {
            // P5b: normalize the leftover diagonal and detach the pivot row.
            let aprime = s2.valuation().unwrap();
            let fe3 = s2.shift(-aprime);
            let fe3inv = fe3.invert()?;
            self.col_scale(t1, &fe3inv)?;
            self.row_scale(top, &fe3)?;
            self.col_scale(top, &fe3inv)?;
            // P6/P7: clear the block's second row against its first.
            self.row_axpy(t1, top, &self.monomial(aprime - 1).neg())?;
            self.col_axpy(top, j, &self.monomial(aprime - 1 - vstar))?;
        }
        // split the 1-dim factor z^vstar living on (row t1, col j)
        let mut rows = vec![t1];
        let mut cols = vec![j];
        self.move_to_end(j + 1, &mut rows, &mut cols);
        let drop = 2 * (vstar.div_euclid(2));
        if drop != 0 {
            self.col_scale(cols[0], &self.monomial(-drop))?;
        }
        let one = Block::One { exp: vstar.rem_euclid(2) };
        let mut out = self.reduce_prefix(j)?;
        out.push(one);
        Ok(out)
    }

    /// The least-valuation entry sits at a 1-dim block row.
    fn case_one_dim(
        &mut self,
        placed: &[Placed],
        j: usize,
        pstar: usize,
        w: i64,
        _vstar: i64,
    ) -> Result<Outcome> {
        // monicize the pivot entry
        let cstar = self.monicize_via_row(pstar, pstar, j)?;
        // trick 2: other one-dim entries die against the pivot row
        for pl in placed {
            if let Block::One { exp: wl } = pl.block {
                let l = pl.start;
                if l == pstar || self.entry(l, j).is_known_zero() {
                    continue;
                }
                let cl = self.monicize_via_row(l, l, j)?;
                self.row_axpy(l, pstar, &self.monomial(cl - cstar).neg())?;
                self.col_axpy(pstar, l, &self.monomial(cl - cstar + w - wl))?;
            }
        }
        // collect 2-dim blocks that still hold column entries
        let two_blocks: Vec<(usize, i64)> = placed
            .iter()
            .filter_map(|pl| match pl.block {
                Block::Two { a } if !self.entry(pl.start + 1, j).is_known_zero() => {
                    Some((pl.start, a))
                }
                _ => None,
            })
            .collect();
        if two_blocks.is_empty() {
            // pure 2x2 split against the diagonal
            let dj = self
                .entry(j, j)
                .valuation()
                .ok_or(Error::PrecisionExhausted)?;
            let parts = self.normalize_2x2(pstar, j, pstar, j, w, cstar, dj)?;
            return Ok(Outcome::Split(self.finish_split(j + 1, parts)?));
        }
        // part 1: bring each loaded block to semi-form
        let mut semis: Vec<SemiBlock> = Vec::new();
        for &(top, _a) in &two_blocks {
            if let Some(sb) = self.semi_normalize(top, j)? {
                semis.push(sb);
            }
        }
        if semis.is_empty() {
            // every entry dissolved during normalization; rescan
            return Ok(Outcome::Continue);
        }
        // pick the block with the least entry valuation
        semis.sort_by_key(|s| (s.e, s.top));
        let t = semis[0].clone();
        if t.e - cstar >= t.aprime - t.u2 {
            self.aprime_kill(&t, pstar, cstar, j)?;
            Ok(Outcome::Continue)
        } else {
            let parts = self.bprime_split(&t, pstar, cstar, w, j)?;
            Ok(Outcome::Split(self.finish_split(j + 1, parts)?))
        }
    }

    fn finish_split(
        &mut self,
        h: usize,
        parts: Vec<(Vec<usize>, Vec<usize>, Block)>,
    ) -> Result<Vec<Block>> {
        // Only the trailing part is detached; any leading 1-dim remnant stays
        // in the prefix and is re-reduced.
        let (mut rows, mut cols, block) = parts.last().cloned().expect("split produced a block");
        self.move_to_end(h, &mut rows, &mut cols);
        let mut out = self.reduce_prefix(h - block.size())?;
        out.push(block);
        Ok(out)
    }
}

/// A 2-dim block beaten into semi-form: (top,top) pure, (top,top+1) pure of
/// valuation u2 with the opposite parity, (top+1,top+1) pure of valuation
/// aprime, entry (top+1, j) = z^e monic with e = aprime (mod 2).
#[derive(Clone, Debug)]
struct SemiBlock {
    top: usize,
    u2: i64,
    aprime: i64,
    e: i64,
}

impl Reducer {
    /// Part 1 of the one-dim case: normalize the entry of the 2-dim block at
    /// `top` to a monic power of z whose parity matches the block diagonal.
    /// Returns None when the entry dissolves or the block degenerates (the
    /// caller rescans).
    fn semi_normalize(&mut self, top: usize, j: usize) -> Result<Option<SemiBlock>> {
        let t1 = top + 1;
        let entry = self.entry(t1, j).clone();
        let e = match entry.valuation() {
            Some(e) => e,
            None => return Ok(None),
        };
        let f1 = entry.shift(-e);
        let k = self
            .entry(t1, t1)
            .valuation()
            .ok_or(Error::PrecisionExhausted)?;
        if f1.is_even() {
            // trick 1: even unit scalings leave the block canonical
            let f1inv = f1.invert()?;
            self.row_scale(t1, &f1inv)?;
            self.col_scale(t1, &f1)?;
            self.row_scale(top, &f1inv)?;
            self.col_scale(top, &f1)?;
            if (k - e).rem_euclid(2) == 0 {
                return Ok(Some(SemiBlock { top, u2: 1, aprime: k, e }));
            }
            // rewrite [[1,z],[0,z^k]] as [[z,1],[0,z^(k-1)]]
            self.col_swap(top, t1);
            self.row_axpy(t1, top, &self.monomial(k - 1).neg())?;
            let m1 = TruncSeries::monomial(self.field, 0, -1, i64::MAX / 8);
            self.row_scale(t1, &m1)?;
            return Ok(Some(SemiBlock { top, u2: 0, aprime: k - 1, e }));
        }
        // mixed unit: rotate the mixedness into the diagonal and peel it off
        self.row_scale(t1, &f1.invert()?)?;
        let s = self.entry(t1, t1).clone();
        let sp = s.parity_part(e.rem_euclid(2));
        if sp.is_known_zero() {
            // diagonal already pure of the entry's opposite parity: that is
            // not semi-form; fall through to the generic dance with J = 0.
        } else if s.parity_part((e + 1).rem_euclid(2)).is_known_zero() {
            // diagonal pure of the entry's parity: already semi-form
            return Ok(Some(SemiBlock { top, u2: 1, aprime: k, e }));
        } else {
            self.row_axpy(t1, top, &sp.shift(-1).neg())?;
        }
        let s2 = self.entry(t1, t1).clone();
        let aprime = match s2.valuation() {
            Some(a) => a,
            None => return Ok(None), // block degenerated; rescan
        };
        let jj = self.entry(t1, top).clone();
        if !jj.is_known_zero() {
            let coeff = jj.mul(&s2.invert()?).neg();
            self.col_axpy(top, t1, &coeff)?;
        }
        // first row: (top,top) = tau mixed, (top,top+1) = z
        let tau = self.entry(top, top).clone();
        let u0 = tau.valuation().ok_or(Error::PrecisionExhausted)?;
        let f2 = tau.shift(-u0);
        self.row_scale(top, &f2.invert()?)?;
        let psi = self.entry(top, t1).clone();
        let psip = psi.parity_part(u0.rem_euclid(2));
        if !psip.is_known_zero() {
            self.col_axpy(t1, top, &psip.shift(-u0).neg())?;
        }
        let psi2 = self.entry(top, t1).clone();
        let u2 = match psi2.valuation() {
            Some(v) => v,
            None => return Ok(None), // block fell apart into 1-dims; rescan
        };
        Ok(Some(SemiBlock { top, u2, aprime, e }))
    }

    /// A'-branch: remove the block's column entry outright.
    fn aprime_kill(&mut self, t: &SemiBlock, pstar: usize, cstar: i64, j: usize) -> Result<()> {
        let (r1, r2) = (t.top, t.top + 1);
        let delta = self.entry(r2, r2).clone();
        let ecoeff = self.entry(r2, j).mul(&delta.invert()?).neg();
        self.col_axpy(j, r2, &ecoeff)?;
        let phi = self.entry(r1, j).clone();
        if !phi.is_known_zero() {
            let coeff = phi.shift(-cstar).neg();
            self.row_axpy(r1, pstar, &coeff)?;
        }
        let chi = self.entry(r1, pstar).clone();
        if !chi.is_known_zero() {
            let alpha = self.entry(r1, r1).clone();
            let coeff = chi.mul(&alpha.invert()?).neg();
            self.col_axpy(pstar, r1, &coeff)?;
        }
        Ok(())
    }

    /// B'-branch: the pivot row and the block's second row split off together
    /// as a 2-dim block.
    fn bprime_split(
        &mut self,
        t: &SemiBlock,
        pstar: usize,
        cstar: i64,
        w: i64,
        j: usize,
    ) -> Result<Vec<(Vec<usize>, Vec<usize>, Block)>> {
        let (r1, r2) = (t.top, t.top + 1);
        let e_inv = self.entry(r2, j).invert()?;
        // transfer every other loaded row (and the diagonal) into column r2
        for q in 0..=j {
            if q == r2 || q == pstar {
                continue;
            }
            if !self.entry(q, j).is_known_zero() {
                let coeff = self.entry(q, j).mul(&e_inv).neg();
                self.row_axpy(q, r2, &coeff)?;
            }
        }
        // clear the block diagonal into column r2
        let delta = self.entry(r2, r2).clone();
        if !delta.is_known_zero() {
            let coeff = delta.mul(&e_inv).neg();
            self.col_axpy(r2, j, &coeff)?;
        }
        // repair the pivot row
        let omega = self.entry(pstar, r2).clone();
        if !omega.is_known_zero() {
            let beta = self.entry(r1, r2).clone();
            let coeff = omega.mul(&beta.invert()?).neg();
            self.row_axpy(pstar, r1, &coeff)?;
        }
        let chi2 = self.entry(pstar, r1).clone();
        if !chi2.is_known_zero() {
            let coeff = chi2.shift(-w).neg();
            self.col_axpy(r1, pstar, &coeff)?;
        }
        // rows (pstar, r2) x cols (pstar, j) now carry [[z^w, z^cstar],[0, z^e]]
        self.normalize_2x2(pstar, r2, pstar, j, w, cstar, t.e)
    }
}

/// Reduce B at the given precision.
pub fn block_reduce(b: &LMatrix, precision: i64) -> Result<ReductionWitness> {
    let m = b.dim();
    let f = b.field();
    if m == 0 {
        return Err(Error::Precondition("empty matrix".into()));
    }
    let mut red = Reducer::new(b, precision);
    // right-scale by an even power of z so all valuations are nonnegative
    if let Some(minv) = b.min_entry_valuation() {
        if minv < 0 {
            let k = (-minv + 1) / 2;
            for c in 0..m {
                red.col_scale(c, &red.monomial(2 * k))?;
            }
        }
    } else {
        return Err(Error::Singular);
    }
    let blocks = red.reduce_prefix(m)?;
    // sort blocks into nondecreasing valuation order by adjacent block swaps:
    // swapping blocks A|B in place is a left rotation of their row/col range
    // by size(A), realized as single-step row+col swaps (conjugation by a
    // permutation, which is legal on both sides).
    let mut order: Vec<Block> = blocks;
    loop {
        let mut swapped = false;
        let placed = place(&order);
        for i in 0..placed.len().saturating_sub(1) {
            if placed[i].block.order_key() > placed[i + 1].block.order_key() {
                let start = placed[i].start;
                let sa = placed[i].block.size();
                let sb = placed[i + 1].block.size();
                for _ in 0..sa {
                    for p in start..(start + sa + sb - 1) {
                        red.row_swap(p, p + 1);
                        red.col_swap(p, p + 1);
                    }
                }
                order.swap(i, i + 1);
                swapped = true;
                break;
            }
        }
        if !swapped {
            break;
        }
    }
    let sorted: Vec<Block> = order;
    let mut big = Vec::new();
    let mut count_z = 0usize;
    let mut count_one = 0usize;
    for b2 in &sorted {
        match *b2 {
            Block::One { exp: 0 } => count_one += 1,
            Block::One { .. } => count_z += 1,
            Block::Two { a } => big.push(a),
        }
    }
    let sigma = SymCoweight::new(big, count_z, count_one)?;
    let lambda = LMatrix::canonical_form(f, &sigma);
    Ok(ReductionWitness {
        g: red.g,
        h: red.h,
        lambda,
        sigma,
        precision,
    })
}
