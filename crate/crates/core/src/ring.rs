//! Arithmetic in the truncated polynomial ring `R = F_q[t]/(t^n)` and in
//! matrices over it.
//!
//! Elements are stored as packed base-`q` integers whose most significant
//! digit is the constant term, so the derived `Ord` on [`RingElem`] is the
//! lexicographic order on coefficient sequences `(c_0, c_1, ..., c_{n-1})`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{check_budget, HallError, Result};
use crate::fq;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingParams {
    pub q: u32,
    pub n: u32,
}

/// Largest ring we are willing to index with a `u32`.
const MAX_RING_SIZE: u64 = 1 << 24;
/// Rings up to this size get precomputed addition/multiplication tables.
const TABLE_LIMIT: u32 = 512;

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl RingParams {
    pub fn new(q: u32, n: u32) -> Result<Self> {
        if !is_prime(q as u64) {
            return Err(HallError::InvalidParams(format!("q = {q} is not prime")));
        }
        if n == 0 {
            return Err(HallError::InvalidParams("n must be at least 1".into()));
        }
        let size = (q as u64).checked_pow(n).filter(|&s| s <= MAX_RING_SIZE);
        if size.is_none() {
            return Err(HallError::InvalidParams(format!("|R| = {q}^{n} is too large")));
        }
        Ok(RingParams { q, n })
    }

    pub fn size(&self) -> u64 {
        (self.q as u64).pow(self.n)
    }
}

impl fmt::Display for RingParams {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "F_{}[t]/(t^{})", self.q, self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RingElem(pub(crate) u32);

impl RingElem {
    pub const ZERO: RingElem = RingElem(0);

    pub fn index(self) -> u32 {
        self.0
    }
}

#[derive(Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
}

/// Ring context for `F_q[t]/(t^n)`.
#[derive(Clone, Debug)]
pub struct Ring {
    params: RingParams,
    size: u32,
    /// `place[i] = q^(n-1-i)`, the weight of the coefficient of `t^i`.
    place: Vec<u32>,
    tables: Option<Arc<Tables>>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params
    }
}

impl Eq for Ring {}

impl Ring {
    pub fn new(params: RingParams) -> Result<Self> {
        let params = RingParams::new(params.q, params.n)?;
        let size = params.size() as u32;
        let place = (0..params.n).map(|i| params.q.pow(params.n - 1 - i)).collect();
        let mut ring = Ring { params, size, place, tables: None };
        if size <= TABLE_LIMIT {
            let s = size as usize;
            let mut add = vec![0; s * s];
            let mut mul = vec![0; s * s];
            let mut neg = vec![0; s];
            for a in 0..size {
                neg[a as usize] = ring.neg_slow(RingElem(a)).0;
                for b in 0..size {
                    add[a as usize * s + b as usize] = ring.add_slow(RingElem(a), RingElem(b)).0;
                    mul[a as usize * s + b as usize] = ring.mul_slow(RingElem(a), RingElem(b)).0;
                }
            }
            ring.tables = Some(Arc::new(Tables { add, mul, neg }));
        }
        Ok(ring)
    }

    pub fn with(q: u32, n: u32) -> Result<Self> {
        Ring::new(RingParams { q, n })
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn q(&self) -> u32 {
        self.params.q
    }

    pub fn n(&self) -> u32 {
        self.params.n
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Builds an element from its coefficients `c_0, c_1, ...` (missing ones are zero).
    pub fn elem(&self, coeffs: &[u32]) -> Result<RingElem> {
        if coeffs.len() > self.params.n as usize {
            return Err(HallError::ParamMismatch(format!(
                "{} coefficients given for n = {}",
                coeffs.len(),
                self.params.n
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.params.q) {
            return Err(HallError::ParamMismatch(format!(
                "coefficient {c} is not a residue mod {}",
                self.params.q
            )));
        }
        Ok(self.pack_digits(coeffs))
    }

    pub fn from_index(&self, idx: u32) -> Result<RingElem> {
        if idx < self.size {
            Ok(RingElem(idx))
        } else {
            Err(HallError::ParamMismatch(format!("index {idx} outside {}", self.params)))
        }
    }

    fn pack_digits(&self, coeffs: &[u32]) -> RingElem {
        RingElem(coeffs.iter().zip(&self.place).map(|(&c, &p)| c * p).sum())
    }

    pub fn coeffs(&self, a: RingElem) -> Vec<u32> {
        self.place.iter().map(|&p| (a.0 / p) % self.params.q).collect()
    }

    pub fn zero(&self) -> RingElem {
        RingElem(0)
    }

    pub fn one(&self) -> RingElem {
        RingElem(self.place[0])
    }

    /// `t^k`, which is zero for `k >= n`.
    pub fn t_pow(&self, k: u32) -> RingElem {
        if k >= self.params.n {
            RingElem(0)
        } else {
            RingElem(self.place[k as usize])
        }
    }

    /// Embeds an integer as a constant.
    pub fn constant(&self, c: u64) -> RingElem {
        RingElem((c % self.params.q as u64) as u32 * self.place[0])
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElem> {
        (0..self.size).map(RingElem)
    }

    pub fn is_unit(&self, a: RingElem) -> bool {
        a.0 >= self.place[0]
    }

    /// Largest `k` with `t^k | a`; `n` for zero.
    pub fn valuation(&self, a: RingElem) -> u32 {
        self.place.iter().filter(|&&p| a.0 < p).count() as u32
    }

    /// Constant term, i.e. reduction mod `t`.
    pub fn residue(&self, a: RingElem) -> u32 {
        a.0 / self.place[0]
    }

    /// Multiplication by `t^k`.
    pub fn shift_up(&self, a: RingElem, k: u32) -> RingElem {
        if k >= self.params.n {
            RingElem(0)
        } else {
            RingElem(a.0 / self.params.q.pow(k))
        }
    }

    /// Exact division by `t^k`, normalised so that the discarded top
    /// coefficients are zero. Requires `valuation(a) >= k`.
    pub fn shift_down(&self, a: RingElem, k: u32) -> RingElem {
        debug_assert!(self.valuation(a) >= k);
        if k == 0 {
            return a;
        }
        RingElem(a.0 * self.params.q.pow(k))
    }

    pub fn add(&self, a: RingElem, b: RingElem) -> RingElem {
        match &self.tables {
            Some(t) => RingElem(t.add[a.0 as usize * self.size as usize + b.0 as usize]),
            None => self.add_slow(a, b),
        }
    }

    pub fn neg(&self, a: RingElem) -> RingElem {
        match &self.tables {
            Some(t) => RingElem(t.neg[a.0 as usize]),
            None => self.neg_slow(a),
        }
    }

    pub fn sub(&self, a: RingElem, b: RingElem) -> RingElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: RingElem, b: RingElem) -> RingElem {
        match &self.tables {
            Some(t) => RingElem(t.mul[a.0 as usize * self.size as usize + b.0 as usize]),
            None => self.mul_slow(a, b),
        }
    }

    fn add_slow(&self, a: RingElem, b: RingElem) -> RingElem {
        let q = self.params.q;
        let (x, y) = (self.coeffs(a), self.coeffs(b));
        let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % q).collect();
        self.pack_digits(&s)
    }

    fn neg_slow(&self, a: RingElem) -> RingElem {
        let q = self.params.q;
        let s: Vec<u32> = self.coeffs(a).iter().map(|&c| (q - c) % q).collect();
        self.pack_digits(&s)
    }

    fn mul_slow(&self, a: RingElem, b: RingElem) -> RingElem {
        let q = self.params.q as u64;
        let n = self.params.n as usize;
        let (x, y) = (self.coeffs(a), self.coeffs(b));
        let mut prod = vec![0u64; n];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n - i {
                prod[i + j] = (prod[i + j] + x[i] as u64 * y[j] as u64) % q;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        self.pack_digits(&prod)
    }

    /// Inverse of a unit by t-adic Newton lifting `x <- x (2 - a x)`.
    pub fn inverse(&self, a: RingElem) -> Result<RingElem> {
        if !self.is_unit(a) {
            return Err(HallError::NotInvertible);
        }
        let c0 = fq::inv_mod(self.residue(a), self.params.q);
        let mut x = self.constant(c0 as u64);
        let two = self.constant(2);
        let mut precision = 1;
        while precision < self.params.n {
            x = self.mul(x, self.sub(two, self.mul(a, x)));
            precision *= 2;
        }
        debug_assert_eq!(self.mul(a, x), self.one());
        Ok(x)
    }

    pub fn format_elem(&self, a: RingElem) -> String {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs(a).into_iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            terms.push(match (c, k) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    // ---- matrices ----

    pub fn mat_zero(&self, rows: usize, cols: usize) -> RMatrix {
        RMatrix::zero(rows, cols)
    }

    pub fn mat_identity(&self, r: usize) -> RMatrix {
        let mut m = RMatrix::zero(r, r);
        for i in 0..r {
            m.set(i, i, self.one());
        }
        m
    }

    /// Builds a matrix from rows of coefficient lists.
    pub fn mat_from_coeffs(&self, rows: &[Vec<Vec<u32>>]) -> Result<RMatrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(HallError::Shape("ragged matrix rows".into()));
            }
            for c in row {
                entries.push(self.elem(c)?);
            }
        }
        RMatrix::from_entries(rows.len(), cols, entries)
    }

    pub fn mat_mul(&self, a: &RMatrix, b: &RMatrix) -> Result<RMatrix> {
        if a.cols != b.rows {
            return Err(HallError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                a.rows, a.cols, b.rows, b.cols
            )));
        }
        let mut out = RMatrix::zero(a.rows, b.cols);
        for i in 0..a.rows {
            for k in 0..a.cols {
                let x = a.get(i, k);
                if x.0 == 0 {
                    continue;
                }
                for j in 0..b.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, self.add(cur, self.mul(x, b.get(k, j))));
                }
            }
        }
        Ok(out)
    }

    pub fn mat_add(&self, a: &RMatrix, b: &RMatrix) -> Result<RMatrix> {
        self.zip_with(a, b, |x, y| self.add(x, y))
    }

    pub fn mat_sub(&self, a: &RMatrix, b: &RMatrix) -> Result<RMatrix> {
        self.zip_with(a, b, |x, y| self.sub(x, y))
    }

    fn zip_with(
        &self,
        a: &RMatrix,
        b: &RMatrix,
        f: impl Fn(RingElem, RingElem) -> RingElem,
    ) -> Result<RMatrix> {
        if a.rows != b.rows || a.cols != b.cols {
            return Err(HallError::Shape("entrywise operation on different shapes".into()));
        }
        let entries = a.entries.iter().zip(&b.entries).map(|(&x, &y)| f(x, y)).collect();
        Ok(RMatrix { rows: a.rows, cols: a.cols, entries })
    }

    /// Reduction mod `t` as rows of residues.
    pub fn reduce_mod_t(&self, m: &RMatrix) -> Vec<Vec<u32>> {
        (0..m.rows)
            .map(|i| (0..m.cols).map(|j| self.residue(m.get(i, j))).collect())
            .collect()
    }

    pub fn rank_mod_t(&self, m: &RMatrix) -> usize {
        fq::rank(&self.reduce_mod_t(m), m.cols, self.params.q)
    }

    /// A square matrix over a local ring is invertible iff its reduction is.
    pub fn is_invertible(&self, m: &RMatrix) -> bool {
        m.rows == m.cols && self.rank_mod_t(m) == m.rows
    }

    /// Gauss-Jordan inversion with unit pivots.
    pub fn mat_inverse(&self, m: &RMatrix) -> Result<RMatrix> {
        if m.rows != m.cols {
            return Err(HallError::Shape(format!("{}x{} matrix is not square", m.rows, m.cols)));
        }
        let r = m.rows;
        let mut a = m.clone();
        let mut inv = self.mat_identity(r);
        for col in 0..r {
            let piv = (col..r)
                .find(|&i| self.is_unit(a.get(i, col)))
                .ok_or(HallError::NotInvertible)?;
            a.swap_rows(col, piv);
            inv.swap_rows(col, piv);
            let s = self.inverse(a.get(col, col))?;
            a.scale_row(self, col, s);
            inv.scale_row(self, col, s);
            for i in 0..r {
                if i == col {
                    continue;
                }
                let f = a.get(i, col);
                if f.0 != 0 {
                    a.add_row_multiple(self, i, col, self.neg(f));
                    inv.add_row_multiple(self, i, col, self.neg(f));
                }
            }
        }
        Ok(inv)
    }

    /// `|GL_r(R)| = q^((n-1) r^2) * prod_{i<r} (q^r - q^i)`.
    pub fn gl_order(&self, r: usize) -> u128 {
        let q = self.params.q as u128;
        let n = self.params.n;
        let r32 = r as u32;
        let mut count = q.pow((n - 1) * r32 * r32);
        for i in 0..r32 {
            count *= q.pow(r32) - q.pow(i);
        }
        count
    }

    /// Every invertible `r x r` matrix exactly once, lexicographically.
    pub fn enumerate_gl(&self, r: usize, budget: u64) -> Result<GlIter<'_>> {
        let total = (self.size as u128).checked_pow((r * r) as u32).unwrap_or(u128::MAX);
        check_budget(|| format!("GL_{r}({})", self.params), total, budget)?;
        Ok(GlIter { ring: self, cur: Some(RMatrix::zero(r, r)) })
    }

    /// Canonical "local column echelon form" of the column span of `m`.
    ///
    /// Pivot rows are the rows at which the rank of the reduction mod `t`
    /// increases when scanning top to bottom; the result is `m * P^-1` where
    /// `P` is the square submatrix on the pivot rows, so it carries the
    /// identity there. Returns `None` when the span is not a free direct
    /// summand of rank `cols`.
    pub fn echelon_summand_form(&self, m: &RMatrix) -> Result<Option<RMatrix>> {
        if m.cols > m.rows {
            return Err(HallError::Shape(format!(
                "{}x{} generator matrix has more columns than rows",
                m.rows, m.cols
            )));
        }
        let Some(pivots) = self.pivot_rows(m) else {
            return Ok(None);
        };
        let p = m.select_rows(&pivots);
        let pinv = self.mat_inverse(&p)?;
        Ok(Some(self.mat_mul(m, &pinv)?))
    }

    /// Rank-increase rows of the reduction mod `t`, if it has full column rank.
    pub(crate) fn pivot_rows(&self, m: &RMatrix) -> Option<Vec<usize>> {
        let q = self.params.q;
        let red = self.reduce_mod_t(m);
        let mut basis: Vec<Vec<u32>> = Vec::new();
        let mut pivots = Vec::new();
        for (i, row) in red.into_iter().enumerate() {
            if pivots.len() == m.cols {
                break;
            }
            basis.push(row);
            if fq::rank(&basis, m.cols, q) > pivots.len() {
                pivots.push(i);
            } else {
                basis.pop();
            }
        }
        (pivots.len() == m.cols).then_some(pivots)
    }

    /// All free rank-`s` direct summands of `R^r`, each as its echelon form.
    pub fn free_summands(&self, r: usize, s: usize, budget: u64) -> Result<Vec<RMatrix>> {
        if s > r {
            return Ok(Vec::new());
        }
        let count = self.free_summand_count(r, s);
        check_budget(|| format!("free Grassmannian G({s},{r})"), count, budget)?;
        let q_nonunit = self.place[0]; // |tR| = q^(n-1)
        let mut out = Vec::with_capacity(count as usize);
        for pivots in subsets(r, s) {
            // Free positions and the number of values each may take.
            let mut slots = Vec::new();
            for i in 0..r {
                if pivots.contains(&i) {
                    continue;
                }
                for (j, &p) in pivots.iter().enumerate() {
                    slots.push((i, j, if i < p { q_nonunit } else { self.size }));
                }
            }
            let mut digits = vec![0u32; slots.len()];
            loop {
                let mut m = RMatrix::zero(r, s);
                for (j, &p) in pivots.iter().enumerate() {
                    m.set(p, j, self.one());
                }
                for (&(i, j, _), &d) in slots.iter().zip(&digits) {
                    m.set(i, j, RingElem(d));
                }
                out.push(m);
                if !odometer(&mut digits, slots.iter().map(|s| s.2)) {
                    break;
                }
            }
        }
        Ok(out)
    }

    /// Closed-form size of the free Grassmannian as produced by [`Ring::free_summands`].
    pub fn free_summand_count(&self, r: usize, s: usize) -> u128 {
        if s > r {
            return 0;
        }
        let size = self.size as u128;
        let nonunit = self.place[0] as u128;
        subsets(r, s)
            .map(|pivots| {
                let mut c: u128 = 1;
                for i in (0..r).filter(|i| !pivots.contains(i)) {
                    for &p in &pivots {
                        c *= if i < p { nonunit } else { size };
                    }
                }
                c
            })
            .sum()
    }

    /// Solves `w c = y` for a matrix `w` in echelon form (identity on `pivots`).
    pub(crate) fn solve_in_span(
        &self,
        w: &RMatrix,
        pivots: &[usize],
        y: &[RingElem],
    ) -> Option<Vec<RingElem>> {
        let c: Vec<RingElem> = pivots.iter().map(|&p| y[p]).collect();
        for (i, &yi) in y.iter().enumerate().take(w.rows) {
            let mut acc = RingElem(0);
            for (j, &cj) in c.iter().enumerate() {
                acc = self.add(acc, self.mul(w.get(i, j), cj));
            }
            if acc != yi {
                return None;
            }
        }
        Some(c)
    }

    pub fn format_matrix(&self, m: &RMatrix) -> String {
        let rows: Vec<String> = (0..m.rows)
            .map(|i| {
                let cells: Vec<String> = (0..m.cols).map(|j| self.format_elem(m.get(i, j))).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
}

/// Advances a mixed-radix counter (last digit fastest). Returns false on wrap-around.
pub(crate) fn odometer(digits: &mut [u32], radices: impl IntoIterator<Item = u32>) -> bool {
    let radices: Vec<u32> = radices.into_iter().collect();
    for k in (0..digits.len()).rev() {
        digits[k] += 1;
        if digits[k] < radices[k] {
            return true;
        }
        digits[k] = 0;
    }
    false
}

/// Increasing `s`-subsets of `0..r` in lexicographic order.
pub(crate) fn subsets(r: usize, s: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = (s <= r).then(|| (0..s).collect());
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut k = s;
        loop {
            if k == 0 {
                cur = None;
                break;
            }
            k -= 1;
            if next[k] < r - s + k {
                next[k] += 1;
                for j in k + 1..s {
                    next[j] = next[j - 1] + 1;
                }
                cur = Some(next);
                break;
            }
        }
        Some(out)
    })
}

pub struct GlIter<'a> {
    ring: &'a Ring,
    cur: Option<RMatrix>,
}

impl Iterator for GlIter<'_> {
    type Item = RMatrix;

    fn next(&mut self) -> Option<RMatrix> {
        let size = self.ring.size;
        loop {
            let m = self.cur.take()?;
            let mut next = m.clone();
            let mut advanced = false;
            for k in (0..next.entries.len()).rev() {
                next.entries[k].0 += 1;
                if next.entries[k].0 < size {
                    advanced = true;
                    break;
                }
                next.entries[k].0 = 0;
            }
            if advanced {
                self.cur = Some(next);
            }
            if self.ring.is_invertible(&m) {
                return Some(m);
            }
        }
    }
}

/// Dense row-major matrix over `R`. Shapes may be empty (`0 x m`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RingElem>,
}

impl RMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RMatrix { rows, cols, entries: vec![RingElem(0); rows * cols] }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<RingElem>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(HallError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RMatrix { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[RingElem] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> RingElem {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.0 == 0)
    }

    pub fn column(&self, j: usize) -> Vec<RingElem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn select_rows(&self, rows: &[usize]) -> RMatrix {
        let mut out = RMatrix::zero(rows.len(), self.cols);
        for (k, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                out.set(k, j, self.get(i, j));
            }
        }
        out
    }

    pub fn from_columns(rows: usize, cols: &[Vec<RingElem>]) -> RMatrix {
        let mut out = RMatrix::zero(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                out.set(i, j, v);
            }
        }
        out
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub(crate) fn scale_row(&mut self, ring: &Ring, i: usize, s: RingElem) {
        for j in 0..self.cols {
            let v = ring.mul(self.get(i, j), s);
            self.set(i, j, v);
        }
    }

    /// `row[dst] += f * row[src]`
    pub(crate) fn add_row_multiple(&mut self, ring: &Ring, dst: usize, src: usize, f: RingElem) {
        for j in 0..self.cols {
            let v = ring.add(self.get(dst, j), ring.mul(f, self.get(src, j)));
            self.set(dst, j, v);
        }
    }

    /// `col[dst] += f * col[src]`
    pub(crate) fn add_col_multiple(&mut self, ring: &Ring, dst: usize, src: usize, f: RingElem) {
        for i in 0..self.rows {
            let v = ring.add(self.get(i, dst), ring.mul(self.get(i, src), f));
            self.set(i, dst, v);
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;

    const PARAMS: [(u32, u32); 4] = [(2, 1), (2, 2), (3, 2), (2, 3)];

    fn elem(ring: &Ring, c: &[u32]) -> RingElem {
        ring.elem(c).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(RingParams::new(4, 2).is_err());
        assert!(RingParams::new(2, 0).is_err());
        assert!(RingParams::new(1, 3).is_err());
    }

    #[test]
    fn t_squared_vanishes_at_n2() {
        let r = Ring::with(2, 2).unwrap();
        assert_eq!(r.mul(r.t_pow(1), r.t_pow(1)), r.zero());
    }

    #[test]
    fn product_mod_three() {
        let r = Ring::with(3, 3).unwrap();
        let a = elem(&r, &[1, 1]);
        let b = elem(&r, &[1, 2]);
        assert_eq!(r.mul(a, b), elem(&r, &[1, 0, 2]));
    }

    #[test]
    fn additive_identity() {
        for (q, n) in PARAMS {
            let r = Ring::with(q, n).unwrap();
            for x in r.elements() {
                assert_eq!(r.add(x, r.zero()), x);
            }
        }
    }

    #[test]
    fn ring_axioms_exhaustive() {
        for (q, n) in PARAMS {
            let r = Ring::with(q, n).unwrap();
            let els: Vec<_> = r.elements().collect();
            for &a in &els {
                for &b in &els {
                    assert_eq!(r.mul(a, b), r.mul_slow(a, b));
                    assert_eq!(r.add(a, b), r.add(b, a));
                    for &c in &els {
                        assert_eq!(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)));
                        assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
                    }
                }
            }
            assert_eq!(
                (0..n).fold(r.one(), |acc, _| r.mul(acc, r.t_pow(1))),
                r.zero(),
                "t^n = 0"
            );
        }
    }

    #[test]
    fn unit_count_and_inverse_agree_with_search() {
        for (q, n) in PARAMS {
            let r = Ring::with(q, n).unwrap();
            let units: Vec<_> = r.elements().filter(|&a| r.is_unit(a)).collect();
            assert_eq!(units.len() as u64, r.size() as u64 - (q as u64).pow(n - 1));
            for &a in &units {
                let searched = r.elements().find(|&b| r.mul(a, b) == r.one()).unwrap();
                assert_eq!(r.inverse(a).unwrap(), searched);
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let r = Ring::with(2, 2).unwrap();
        let u = elem(&r, &[1, 1]);
        assert_eq!(r.inverse(u).unwrap(), u);
        assert_eq!(r.inverse(r.one()).unwrap(), r.one());
        assert_eq!(r.inverse(r.t_pow(1)), Err(HallError::NotInvertible));
    }

    #[test]
    fn valuation_and_shifts() {
        let r = Ring::with(3, 3).unwrap();
        for a in r.elements() {
            let v = r.valuation(a);
            if a == r.zero() {
                assert_eq!(v, 3);
                continue;
            }
            let u = r.shift_down(a, v);
            assert!(r.is_unit(u));
            assert_eq!(r.mul(u, r.t_pow(v)), a);
            assert_eq!(r.shift_up(a, 1), r.mul(a, r.t_pow(1)));
        }
    }

    #[test]
    fn matrix_inverse_examples() {
        let r = Ring::with(2, 2).unwrap();
        let id = r.mat_identity(2);
        assert_eq!(r.mat_inverse(&id).unwrap(), id);
        let u = r.mat_from_coeffs(&[vec![vec![1], vec![0, 1]], vec![vec![0], vec![1]]]).unwrap();
        // Direct multiplication oracle: u * u = 1.
        assert_eq!(r.mat_mul(&u, &u).unwrap(), id);
        assert_eq!(r.mat_inverse(&u).unwrap(), u);
        let s = r.mat_from_coeffs(&[vec![vec![0, 1], vec![0]], vec![vec![0], vec![1]]]).unwrap();
        assert_eq!(r.mat_inverse(&s), Err(HallError::NotInvertible));
    }

    #[test]
    fn gl_counts_match_closed_formula() {
        for (q, n) in [(2, 1), (2, 2), (3, 1)] {
            let r = Ring::with(q, n).unwrap();
            for rank in 0..=2 {
                let all: Vec<_> = r.enumerate_gl(rank, DEFAULT).unwrap().collect();
                assert_eq!(all.len() as u128, r.gl_order(rank), "q={q} n={n} r={rank}");
                for m in &all {
                    let inv = r.mat_inverse(m).unwrap();
                    assert_eq!(r.mat_mul(&inv, m).unwrap(), r.mat_identity(rank));
                }
                let mut sorted = all.clone();
                sorted.sort();
                assert_eq!(sorted, all, "lexicographic order");
            }
        }
        let r = Ring::with(2, 1).unwrap();
        assert_eq!(r.enumerate_gl(1, DEFAULT).unwrap().count(), 1);
        assert_eq!(r.enumerate_gl(2, DEFAULT).unwrap().count(), 6);
        let r = Ring::with(2, 2).unwrap();
        let units: Vec<_> = r.enumerate_gl(1, DEFAULT).unwrap().map(|m| m.get(0, 0)).collect();
        assert_eq!(units, vec![r.one(), elem(&r, &[1, 1])]);
    }

    #[test]
    fn gl_budget_is_enforced() {
        let r = Ring::with(3, 2).unwrap();
        assert!(matches!(r.enumerate_gl(2, 1000), Err(HallError::BudgetExceeded { .. })));
    }

    const DEFAULT: u64 = crate::error::DEFAULT_BUDGET;

    fn span(r: &Ring, m: &RMatrix) -> BTreeSet<Vec<RingElem>> {
        let mut out = BTreeSet::new();
        let mut digits = vec![0u32; m.cols()];
        loop {
            let c = RMatrix::from_columns(m.cols(), &[digits.iter().map(|&d| RingElem(d)).collect()]);
            out.insert(r.mat_mul(m, &c).unwrap().column(0));
            if !odometer(&mut digits, std::iter::repeat_n(r.size(), m.cols())) {
                break;
            }
        }
        out
    }

    #[test]
    fn echelon_examples() {
        let r = Ring::with(2, 2).unwrap();
        let col = |a: &[u32], b: &[u32]| r.mat_from_coeffs(&[vec![a.to_vec()], vec![b.to_vec()]]).unwrap();
        let m = col(&[1, 1], &[0, 1]);
        let e = r.echelon_summand_form(&m).unwrap().unwrap();
        assert_eq!(e, col(&[1], &[0, 1]));
        assert_eq!(span(&r, &m), span(&r, &e));
        let m = col(&[0, 1], &[1]);
        assert_eq!(r.echelon_summand_form(&m).unwrap().unwrap(), m);
        assert_eq!(r.echelon_summand_form(&col(&[0, 1], &[0, 1])).unwrap(), None);
        let wide = RMatrix::zero(1, 2);
        assert!(matches!(r.echelon_summand_form(&wide), Err(HallError::Shape(_))));
    }

    #[test]
    fn echelon_is_canonical_for_lines_in_plane() {
        for (q, n) in PARAMS {
            let r = Ring::with(q, n).unwrap();
            let mut forms = BTreeSet::new();
            for a in r.elements() {
                for b in r.elements() {
                    let m = RMatrix::from_columns(2, &[vec![a, b]]);
                    if let Some(e) = r.echelon_summand_form(&m).unwrap() {
                        assert_eq!(span(&r, &m), span(&r, &e));
                        forms.insert(e);
                    }
                }
            }
            let expected = (q as usize).pow(n) + (q as usize).pow(n - 1);
            assert_eq!(forms.len(), expected);
            let spans: BTreeSet<_> = forms.iter().map(|e| span(&r, e)).collect();
            assert_eq!(spans.len(), forms.len(), "distinct forms have distinct spans");
            let direct: BTreeSet<_> = r.free_summands(2, 1, DEFAULT).unwrap().into_iter().collect();
            assert_eq!(direct, forms);
        }
    }

    #[test]
    fn free_summands_are_fixed_points_of_echelon() {
        let r = Ring::with(2, 2).unwrap();
        for (rr, s) in [(3, 1), (3, 2), (2, 2), (2, 0), (4, 2)] {
            let all = r.free_summands(rr, s, DEFAULT).unwrap();
            assert_eq!(all.len() as u128, r.free_summand_count(rr, s));
            for m in &all {
                assert_eq!(r.echelon_summand_form(m).unwrap().as_ref(), Some(m));
            }
        }
    }

    #[test]
    fn subsets_enumerate_binomial() {
        assert_eq!(subsets(4, 2).count(), 6);
        assert_eq!(subsets(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(2, 3).count(), 0);
    }

    #[test]
    fn formatting() {
        let r = Ring::with(3, 3).unwrap();
        assert_eq!(r.format_elem(elem(&r, &[1, 0, 2])), "1+2t^2");
        assert_eq!(r.format_elem(r.t_pow(1)), "t");
        assert_eq!(r.format_elem(r.zero()), "0");
    }
}
