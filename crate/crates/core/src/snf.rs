//! Sparse integer matrices and their Smith normal form over arbitrary
//! precision integers.
//!
//! The elimination keeps rows as sorted sparse vectors with a column index,
//! picks pivots of least absolute value (ties broken by the Markowitz count
//! `(row_nnz - 1)(col_nnz - 1)`), and records every elementary row and
//! column operation. The transforms `U` and `V` with `U·M·V = diag(d)` are
//! never stored densely; they are replayed from the operation logs when
//! applied to a vector or materialized on request.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, BigInt)>>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    /// Builds a matrix from `(row, col, value)` triples. Zero values are
    /// dropped; a repeated position is an error.
    pub fn from_triples(rows: usize, cols: usize, triples: impl IntoIterator<Item = (usize, usize, BigInt)>) -> Result<Self> {
        let mut data: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); rows];
        for (r, c, v) in triples {
            if r >= rows || c >= cols {
                return Err(Error::input(format!("entry ({r},{c}) outside a {rows}x{cols} matrix")));
            }
            if !v.is_zero() {
                data[r].push((c, v));
            }
        }
        for (r, row) in data.iter_mut().enumerate() {
            row.sort_by_key(|e| e.0);
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::input(format!("duplicate entry in row {r}")));
            }
        }
        Ok(SparseIntMatrix { rows, cols, data })
    }

    /// Builds from per-row lists of small entries, summing repeated columns.
    pub(crate) fn from_row_lists(rows: usize, cols: usize, lists: Vec<Vec<(usize, i64)>>) -> Self {
        debug_assert_eq!(lists.len(), rows);
        let data = lists
            .into_iter()
            .map(|mut row| {
                row.sort_unstable_by_key(|e| e.0);
                let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(row.len());
                let mut i = 0;
                while i < row.len() {
                    let c = row[i].0;
                    let mut s = 0i64;
                    while i < row.len() && row[i].0 == c {
                        s += row[i].1;
                        i += 1;
                    }
                    if s != 0 {
                        out.push((c, BigInt::from(s)));
                    }
                }
                out
            })
            .collect();
        SparseIntMatrix { rows, cols, data }
    }

    pub fn from_dense(dense: &[Vec<BigInt>]) -> Self {
        let cols = dense.first().map_or(0, Vec::len);
        let data = dense
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect()
            })
            .collect();
        SparseIntMatrix {
            rows: dense.len(),
            cols,
            data,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                out[r][*c] = v.clone();
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.data[r]
            .binary_search_by_key(&c, |e| e.0)
            .map(|i| self.data[r][i].1.clone())
            .unwrap_or_default()
    }

    pub fn row(&self, r: usize) -> &[(usize, BigInt)] {
        &self.data[r]
    }

    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols);
        self.data
            .iter()
            .map(|row| row.iter().map(|(c, v)| v * &x[*c]).sum())
            .collect()
    }

    pub fn mul(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, other.rows);
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: std::collections::BTreeMap<usize, BigInt> = Default::default();
                for (k, a) in row {
                    for (c, b) in &other.data[*k] {
                        *acc.entry(*c).or_default() += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseIntMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        let mut data: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.triples() {
            data[c].push((r, v.clone()));
        }
        SparseIntMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Op {
    Swap(usize, usize),
    /// line `target` += factor · line `source`
    AddMul { target: usize, source: usize, factor: BigInt },
    Negate(usize),
}

/// Result of a Smith normal form computation: `U·M·V = diag(d₁, …, d_r, 0, …)`
/// with `d₁ | d₂ | … | d_r` positive and `U`, `V` unimodular.
#[derive(Debug, Clone)]
pub struct SmithNormalForm {
    rows: usize,
    cols: usize,
    diagonal: Vec<BigInt>,
    row_ops: Vec<Op>,
    col_ops: Vec<Op>,
    tracked: bool,
}

impl SmithNormalForm {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// The nonzero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.diagonal
    }

    pub fn has_transforms(&self) -> bool {
        self.tracked
    }

    fn require_transforms(&self) {
        assert!(self.tracked, "Smith form was computed without transforms");
    }

    /// `x ← U·x` (length `rows`).
    pub fn apply_u(&self, x: &mut [BigInt]) {
        self.require_transforms();
        for op in &self.row_ops {
            apply_forward(op, x);
        }
    }

    /// `x ← U⁻¹·x` (length `rows`).
    pub fn apply_u_inv(&self, x: &mut [BigInt]) {
        self.require_transforms();
        for op in self.row_ops.iter().rev() {
            apply_inverse(op, x);
        }
    }

    /// `x ← V·x` (length `cols`).
    pub fn apply_v(&self, x: &mut [BigInt]) {
        self.require_transforms();
        for op in self.col_ops.iter().rev() {
            apply_transposed(op, x);
        }
    }

    /// `x ← V⁻¹·x` (length `cols`).
    pub fn apply_v_inv(&self, x: &mut [BigInt]) {
        self.require_transforms();
        for op in &self.col_ops {
            apply_transposed_inverse(op, x);
        }
    }

    fn materialize(&self, n: usize, apply: impl Fn(&mut [BigInt])) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); n]; n];
        for j in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[j] = BigInt::one();
            apply(&mut e);
            for (i, v) in e.into_iter().enumerate() {
                out[i][j] = v;
            }
        }
        out
    }

    pub fn u_matrix(&self) -> Vec<Vec<BigInt>> {
        self.materialize(self.rows, |x| self.apply_u(x))
    }

    pub fn v_matrix(&self) -> Vec<Vec<BigInt>> {
        self.materialize(self.cols, |x| self.apply_v(x))
    }

    /// The full diagonal matrix `U·M·V`.
    pub fn diagonal_matrix(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, v) in self.diagonal.iter().enumerate() {
            d[i][i] = v.clone();
        }
        d
    }
}

// Row operation F = I + f·e_t·e_sᵀ applied as x ← F x.
fn apply_forward(op: &Op, x: &mut [BigInt]) {
    match op {
        Op::Swap(a, b) => x.swap(*a, *b),
        Op::AddMul { target, source, factor } => {
            let add = factor * &x[*source];
            x[*target] += add;
        }
        Op::Negate(i) => x[*i] = -std::mem::take(&mut x[*i]),
    }
}

fn apply_inverse(op: &Op, x: &mut [BigInt]) {
    match op {
        Op::AddMul { target, source, factor } => {
            let sub = factor * &x[*source];
            x[*target] -= sub;
        }
        other => apply_forward(other, x),
    }
}

// Column operation E = I + f·e_s·e_tᵀ applied as x ← E x.
fn apply_transposed(op: &Op, x: &mut [BigInt]) {
    match op {
        Op::AddMul { target, source, factor } => {
            let add = factor * &x[*target];
            x[*source] += add;
        }
        other => apply_forward(other, x),
    }
}

fn apply_transposed_inverse(op: &Op, x: &mut [BigInt]) {
    match op {
        Op::AddMul { target, source, factor } => {
            let sub = factor * &x[*target];
            x[*source] -= sub;
        }
        other => apply_forward(other, x),
    }
}

struct Engine {
    rows: Vec<Vec<(usize, BigInt)>>,
    col_rows: Vec<BTreeSet<usize>>,
    row_ops: Vec<Op>,
    col_ops: Vec<Op>,
    track: bool,
}

impl Engine {
    fn new(m: &SparseIntMatrix, track: bool) -> Self {
        let mut col_rows = vec![BTreeSet::new(); m.cols];
        for (r, row) in m.data.iter().enumerate() {
            for (c, _) in row {
                col_rows[*c].insert(r);
            }
        }
        Engine {
            rows: m.data.clone(),
            col_rows,
            row_ops: Vec::new(),
            col_ops: Vec::new(),
            track,
        }
    }

    fn get(&self, r: usize, c: usize) -> Option<&BigInt> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |e| e.0).ok().map(|i| &row[i].1)
    }

    fn set(&mut self, r: usize, c: usize, v: BigInt) {
        let row = &mut self.rows[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(i) => {
                if v.is_zero() {
                    row.remove(i);
                    self.col_rows[c].remove(&r);
                } else {
                    row[i].1 = v;
                }
            }
            Err(i) => {
                if !v.is_zero() {
                    row.insert(i, (c, v));
                    self.col_rows[c].insert(r);
                }
            }
        }
    }

    /// row t += f · row s
    fn row_addmul(&mut self, t: usize, s: usize, f: BigInt) {
        let src = std::mem::take(&mut self.rows[s]);
        let dst = std::mem::take(&mut self.rows[t]);
        let mut merged = Vec::with_capacity(dst.len() + src.len());
        let (mut i, mut j) = (0, 0);
        while i < dst.len() || j < src.len() {
            let take_dst = j == src.len() || (i < dst.len() && dst[i].0 < src[j].0);
            let take_src = i == dst.len() || (j < src.len() && src[j].0 < dst[i].0);
            if take_dst {
                merged.push(dst[i].clone());
                i += 1;
            } else if take_src {
                let c = src[j].0;
                merged.push((c, &f * &src[j].1));
                self.col_rows[c].insert(t);
                j += 1;
            } else {
                let c = dst[i].0;
                let v = &dst[i].1 + &f * &src[j].1;
                if v.is_zero() {
                    self.col_rows[c].remove(&t);
                } else {
                    merged.push((c, v));
                }
                i += 1;
                j += 1;
            }
        }
        self.rows[s] = src;
        self.rows[t] = merged;
        if self.track {
            self.row_ops.push(Op::AddMul { target: t, source: s, factor: f });
        }
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for &(c, _) in &self.rows[a] {
            self.col_rows[c].remove(&a);
        }
        for &(c, _) in &self.rows[b] {
            self.col_rows[c].remove(&b);
        }
        self.rows.swap(a, b);
        for &(c, _) in &self.rows[a] {
            self.col_rows[c].insert(a);
        }
        for &(c, _) in &self.rows[b] {
            self.col_rows[c].insert(b);
        }
        if self.track {
            self.row_ops.push(Op::Swap(a, b));
        }
    }

    fn row_negate(&mut self, i: usize) {
        for e in &mut self.rows[i] {
            e.1 = -std::mem::take(&mut e.1);
        }
        if self.track {
            self.row_ops.push(Op::Negate(i));
        }
    }

    /// col t += f · col s
    fn col_addmul(&mut self, t: usize, s: usize, f: BigInt) {
        let rows: Vec<usize> = self.col_rows[s].iter().copied().collect();
        for r in rows {
            let add = &f * self.get(r, s).expect("indexed entry");
            let cur = self.get(r, t).cloned().unwrap_or_default();
            self.set(r, t, cur + add);
        }
        if self.track {
            self.col_ops.push(Op::AddMul { target: t, source: s, factor: f });
        }
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let touched: BTreeSet<usize> = self.col_rows[a].union(&self.col_rows[b]).copied().collect();
        for r in touched {
            let row = &mut self.rows[r];
            for e in row.iter_mut() {
                if e.0 == a {
                    e.0 = b;
                } else if e.0 == b {
                    e.0 = a;
                }
            }
            row.sort_by_key(|e| e.0);
        }
        self.col_rows.swap(a, b);
        if self.track {
            self.col_ops.push(Op::Swap(a, b));
        }
    }

    fn pick_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, &BigInt, usize)> = None;
        for r in t..self.rows.len() {
            let row = &self.rows[r];
            for (c, v) in row {
                let mk = (row.len() - 1) * (self.col_rows[*c].len() - 1);
                let better = match &best {
                    None => true,
                    Some((_, _, bv, bmk)) => {
                        let (a, b) = (v.magnitude(), bv.magnitude());
                        a < b || (a == b && mk < *bmk)
                    }
                };
                if better {
                    if v.magnitude().is_one() && mk == 0 {
                        return Some((r, *c));
                    }
                    best = Some((r, *c, v, mk));
                }
            }
        }
        best.map(|(r, c, _, _)| (r, c))
    }

    /// Clears row `t` and column `t` except the pivot at `(t, t)`.
    fn clear(&mut self, t: usize) {
        loop {
            loop {
                let others: Vec<usize> = self.col_rows[t].iter().copied().filter(|&r| r != t).collect();
                if others.is_empty() {
                    break;
                }
                for r in others {
                    let p = self.get(t, t).expect("pivot").clone();
                    let v = self.get(r, t).expect("entry").clone();
                    let q = &v / &p;
                    if !q.is_zero() {
                        self.row_addmul(r, t, -q);
                    }
                    if self.get(r, t).is_some() {
                        self.row_swap(r, t);
                        break;
                    }
                }
            }
            let others: Vec<usize> = self.rows[t].iter().map(|e| e.0).filter(|&c| c != t).collect();
            let mut swapped = false;
            for c in others {
                let p = self.get(t, t).expect("pivot").clone();
                let v = self.get(t, c).expect("entry").clone();
                let q = &v / &p;
                if !q.is_zero() {
                    self.col_addmul(c, t, -q);
                }
                if self.get(t, c).is_some() {
                    self.col_swap(c, t);
                    swapped = true;
                    break;
                }
            }
            if !swapped {
                return;
            }
        }
    }

    fn run(mut self, nrows: usize, ncols: usize) -> SmithNormalForm {
        let mut t = 0;
        while let Some((r, c)) = self.pick_pivot(t) {
            self.row_swap(t, r);
            self.col_swap(t, c);
            self.clear(t);
            t += 1;
        }
        let rank = t;
        for i in 0..rank {
            if self.get(i, i).expect("diagonal").is_negative() {
                self.row_negate(i);
            }
        }
        for i in 0..rank {
            for j in i + 1..rank {
                let di = self.get(i, i).expect("diagonal").clone();
                let dj = self.get(j, j).expect("diagonal").clone();
                if dj.is_multiple_of(&di) {
                    continue;
                }
                self.col_addmul(i, j, BigInt::one());
                self.clear(i);
                for k in [i, j] {
                    if self.get(k, k).expect("diagonal").is_negative() {
                        self.row_negate(k);
                    }
                }
            }
        }
        let diagonal = (0..rank).map(|i| self.get(i, i).expect("diagonal").clone()).collect();
        SmithNormalForm {
            rows: nrows,
            cols: ncols,
            diagonal,
            row_ops: self.row_ops,
            col_ops: self.col_ops,
            tracked: self.track,
        }
    }
}

/// Smith normal form with transforms.
pub fn smith_normal_form(m: &SparseIntMatrix) -> SmithNormalForm {
    Engine::new(m, true).run(m.rows, m.cols)
}

/// Smith normal form without recording transforms (invariant factors only).
pub fn smith_invariants(m: &SparseIntMatrix) -> SmithNormalForm {
    Engine::new(m, false).run(m.rows, m.cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(rows: &[&[i64]]) -> SparseIntMatrix {
        SparseIntMatrix::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    fn dense_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let inner = b.len();
        let cols = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                    .collect()
            })
            .collect()
    }

    /// Determinant by fraction-free elimination (Bareiss).
    fn det(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        let mut a = m.to_vec();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn check(m: &SparseIntMatrix) -> SmithNormalForm {
        let snf = smith_normal_form(m);
        let u = snf.u_matrix();
        let v = snf.v_matrix();
        let prod = dense_mul(&dense_mul(&u, &m.to_dense()), &v);
        assert_eq!(prod, snf.diagonal_matrix());
        if m.rows() > 0 {
            assert!(det(&u).magnitude().is_one());
        }
        if m.cols() > 0 {
            assert!(det(&v).magnitude().is_one());
        }
        for w in snf.invariant_factors().windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert!(snf.invariant_factors().iter().all(|d| d.is_positive()));
        snf
    }

    fn factors(snf: &SmithNormalForm) -> Vec<i64> {
        snf.invariant_factors().iter().map(|d| i64::try_from(d).unwrap()).collect()
    }

    #[test]
    fn diag_2_3() {
        assert_eq!(factors(&check(&big(&[&[2, 0], &[0, 3]]))), vec![1, 6]);
    }

    #[test]
    fn zero_matrix_has_empty_diagonal() {
        assert!(check(&SparseIntMatrix::zeros(3, 4)).invariant_factors().is_empty());
    }

    #[test]
    fn three_by_two() {
        assert_eq!(factors(&check(&big(&[&[2, 0], &[0, 2], &[1, 1]]))), vec![1, 2]);
    }

    #[test]
    fn needs_divisibility_fixup() {
        assert_eq!(factors(&check(&big(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 10]]))), vec![2, 2, 60]);
    }

    #[test]
    fn inverse_transforms_round_trip() {
        let m = big(&[&[3, 5, 7], &[2, 4, 8], &[1, 0, 9], &[6, 6, 6]]);
        let snf = check(&m);
        let x: Vec<BigInt> = [1, -2, 3, 5].iter().map(|&v| BigInt::from(v)).collect();
        let mut y = x.clone();
        snf.apply_u(&mut y);
        snf.apply_u_inv(&mut y);
        assert_eq!(x, y);
        let z: Vec<BigInt> = [4, 0, -1].iter().map(|&v| BigInt::from(v)).collect();
        let mut w = z.clone();
        snf.apply_v_inv(&mut w);
        snf.apply_v(&mut w);
        assert_eq!(z, w);
    }

    #[test]
    fn invariants_only_agrees() {
        let m = big(&[&[12, 18, 0], &[6, 0, 4], &[0, 8, 2]]);
        assert_eq!(check(&m).invariant_factors(), smith_invariants(&m).invariant_factors());
    }

    #[test]
    fn duplicate_triples_rejected() {
        let t = vec![(0, 0, BigInt::one()), (0, 0, BigInt::one())];
        assert!(SparseIntMatrix::from_triples(1, 1, t).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn random_sparse_matrices(
            rows in 1usize..9,
            cols in 1usize..9,
            entries in proptest::collection::vec((0usize..9, 0usize..9, -20i64..20), 0..30),
        ) {
            let mut seen = BTreeSet::new();
            let triples: Vec<_> = entries
                .into_iter()
                .filter(|(r, c, _)| *r < rows && *c < cols && seen.insert((*r, *c)))
                .map(|(r, c, v)| (r, c, BigInt::from(v)))
                .collect();
            let m = SparseIntMatrix::from_triples(rows, cols, triples).unwrap();
            let snf = check(&m);
            let fast = smith_invariants(&m);
            prop_assert_eq!(snf.invariant_factors(), fast.invariant_factors());
        }
    }
}
