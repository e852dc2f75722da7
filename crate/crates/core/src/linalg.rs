//! Exact linear algebra: Smith normal form over Z, sparse rank over a field,
//! dense kernel/solve routines used by the cohomology modules.
//!
//! Everything is exact (BigInt / exact field elements). The sparse routines
//! use Markowitz-style pivoting with deterministic tie-breaking, so results
//! and intermediate orderings are reproducible run to run.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

use crate::field::Field;

// ---------------------------------------------------------------------------
// Dense Smith normal form over Z with optional transform tracking
// ---------------------------------------------------------------------------

/// Result of a Smith normal form computation: `U * A * V = D` with `U`, `V`
/// unimodular and `D` diagonal with `diag[0] | diag[1] | ...` (all >= 0).
pub struct Snf {
    pub diag: Vec<BigInt>,
    /// Row transform, present when requested. `u` is `m x m`.
    pub u: Option<Vec<Vec<BigInt>>>,
    /// Column transform, present when requested. `v` is `n x n`.
    pub v: Option<Vec<Vec<BigInt>>>,
    pub rows: usize,
    pub cols: usize,
}

impl Snf {
    /// Invariant factors > 1 (the torsion part of the cokernel).
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diag.iter().filter(|d| **d > BigInt::one()).cloned().collect()
    }

    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Dense SNF. `track` requests the U and V transforms (needed for solving).
pub fn snf_dense(mut a: Vec<Vec<BigInt>>, track: bool) -> Snf {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut u = if track { Some(identity(m)) } else { None };
    let mut v = if track { Some(identity(n)) } else { None };

    let mut t = 0usize;
    while t < m.min(n) {
        // Locate a nonzero entry of minimal absolute value in the submatrix.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        if let Some(u) = u.as_mut() {
            u.swap(t, pi);
        }
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            if let Some(v) = v.as_mut() {
                for row in v.iter_mut() {
                    row.swap(t, pj);
                }
            }
        }

        loop {
            // Clear column t below/above the pivot with rounded division.
            let mut dirty = false;
            for i in (0..m).filter(|&i| i != t) {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = rounded_div(&a[i][t], &a[t][t]);
                if !q.is_zero() {
                    for j in 0..n {
                        let s = &a[t][j] * &q;
                        a[i][j] -= s;
                    }
                    if let Some(u) = u.as_mut() {
                        for j in 0..m {
                            let s = &u[t][j] * &q;
                            u[i][j] -= s;
                        }
                    }
                }
                if !a[i][t].is_zero() {
                    // Remainder is strictly smaller: swap it into pivot place.
                    a.swap(t, i);
                    if let Some(u) = u.as_mut() {
                        u.swap(t, i);
                    }
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Clear row t.
            for j in (0..n).filter(|&j| j != t) {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = rounded_div(&a[t][j], &a[t][t]);
                if !q.is_zero() {
                    for i in 0..m {
                        let s = &a[i][t] * &q;
                        a[i][j] -= s;
                    }
                    if let Some(v) = v.as_mut() {
                        for i in 0..n {
                            let s = &v[i][t] * &q;
                            v[i][j] -= s;
                        }
                    }
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    if let Some(v) = v.as_mut() {
                        for row in v.iter_mut() {
                            row.swap(t, j);
                        }
                    }
                    dirty = true;
                    break;
                }
            }
            if !dirty {
                break;
            }
        }

        // Enforce divisibility: pivot must divide every remaining entry.
        let mut fixed = true;
        'div: for i in t + 1..m {
            for j in t + 1..n {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    // Fold row i into row t and restart this pivot.
                    for k in 0..n {
                        let s = a[i][k].clone();
                        a[t][k] += s;
                    }
                    if let Some(u) = u.as_mut() {
                        for k in 0..m {
                            let s = u[i][k].clone();
                            u[t][k] += s;
                        }
                    }
                    fixed = false;
                    break 'div;
                }
            }
        }
        if !fixed {
            continue;
        }
        if a[t][t].is_negative() {
            for j in 0..n {
                a[t][j] = -a[t][j].clone();
            }
            if let Some(u) = u.as_mut() {
                for j in 0..m {
                    u[t][j] = -u[t][j].clone();
                }
            }
        }
        t += 1;
    }

    let diag = (0..m.min(n)).map(|i| a[i][i].clone()).collect();
    Snf { diag, u, v, rows: m, cols: n }
}

/// Rounded (nearest-integer) division for SNF remainder shrinking.
fn rounded_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = (a / b, a % b);
    if &r.abs() * 2 > b.abs() {
        if (r >= BigInt::zero()) == (b >= &BigInt::zero()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Solves `A x = b` over Z via SNF with transforms. Returns any solution.
pub fn solve_integer(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    assert_eq!(b.len(), m);
    let snf = snf_dense(a.to_vec(), true);
    let u = snf.u.as_ref().unwrap();
    let v = snf.v.as_ref().unwrap();
    // y_i = (U b)_i / d_i where defined; consistency elsewhere.
    let ub: Vec<BigInt> =
        (0..m).map(|i| (0..m).map(|j| &u[i][j] * &b[j]).sum::<BigInt>()).collect();
    let mut y = vec![BigInt::zero(); n];
    for i in 0..m {
        let d = if i < snf.diag.len() { snf.diag[i].clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            if !(&ub[i] % &d).is_zero() {
                return None;
            }
            if i < n {
                y[i] = &ub[i] / &d;
            }
        }
    }
    Some((0..n).map(|i| (0..n).map(|j| &v[i][j] * &y[j]).sum::<BigInt>()).collect())
}

// ---------------------------------------------------------------------------
// Sparse matrices: integer SNF (hybrid) and rank over a field
// ---------------------------------------------------------------------------

/// Sparse matrix held row-wise; the building block for the big bar-complex
/// and simplicial differentials.
#[derive(Clone)]
pub struct SparseMat<T> {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, T)>,
}

impl<T> SparseMat<T> {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMat { rows, cols, entries: Vec::new() }
    }

    pub fn push(&mut self, r: usize, c: usize, v: T) {
        debug_assert!(r < self.rows && c < self.cols);
        self.entries.push((r, c, v));
    }
}

struct Workspace<T> {
    row: Vec<BTreeMap<usize, T>>,
    /// For each column, the set of rows with a (possibly stale) entry.
    col_rows: Vec<BTreeMap<usize, ()>>,
    live_rows: BTreeMap<usize, ()>,
    live_cols: BTreeMap<usize, ()>,
}

impl<T: Clone> Workspace<T> {
    fn build(m: &SparseMat<T>, is_zero: impl Fn(&T) -> bool) -> Self {
        let mut row: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); m.rows];
        let mut col_rows: Vec<BTreeMap<usize, ()>> = vec![BTreeMap::new(); m.cols];
        for (r, c, v) in &m.entries {
            if !is_zero(v) {
                row[*r].insert(*c, v.clone());
                col_rows[*c].insert(*r, ());
            }
        }
        Workspace {
            row,
            col_rows,
            live_rows: (0..m.rows).map(|r| (r, ())).collect(),
            live_cols: (0..m.cols).map(|c| (c, ())).collect(),
        }
    }
}

/// Rank over an exact field, sparse elimination with Markowitz pivoting.
pub fn rank_sparse<F: Field>(m: &SparseMat<F>) -> usize {
    let mut ws = Workspace::build(m, |v: &F| v.is_zero());
    let mut rank = 0usize;
    loop {
        // Pick the nonzero pivot minimizing (nnz(row)-1)*(nnz(col)-1),
        // breaking ties by (row, col) for determinism.
        let mut best: Option<(usize, usize, usize)> = None;
        for (&r, _) in ws.live_rows.iter() {
            let nr = ws.row[r].len();
            if nr == 0 {
                continue;
            }
            for (&c, _) in ws.row[r].iter() {
                let score = (nr - 1) * (ws.col_rows[c].len().saturating_sub(1));
                if best.map_or(true, |(s, br, bc)| {
                    score < s || (score == s && (r, c) < (br, bc))
                }) {
                    best = Some((score, r, c));
                }
            }
            // A singleton row is already optimal.
            if let Some((0, _, _)) = best {
                break;
            }
        }
        let Some((_, pr, pc)) = best else { break };
        rank += 1;
        let pivot = ws.row[pr][&pc].clone();
        let pinv = pivot.inv();
        let prow: Vec<(usize, F)> = ws.row[pr].iter().map(|(c, v)| (*c, v.clone())).collect();
        let targets: Vec<usize> =
            ws.col_rows[pc].keys().copied().filter(|&r| r != pr && ws.live_rows.contains_key(&r)).collect();
        for r in targets {
            let Some(val) = ws.row[r].get(&pc).cloned() else { continue };
            if val.is_zero() {
                ws.row[r].remove(&pc);
                continue;
            }
            let factor = val * pinv.clone();
            for (c, pv) in &prow {
                let delta = -(factor.clone() * pv.clone());
                let cur = ws.row[r].get(c).cloned().unwrap_or_else(F::zero);
                let next = cur + delta;
                if next.is_zero() {
                    ws.row[r].remove(c);
                } else {
                    ws.row[r].insert(*c, next);
                    ws.col_rows[*c].insert(r, ());
                }
            }
            ws.row[r].remove(&pc);
        }
        // Retire pivot row and column.
        ws.live_rows.remove(&pr);
        ws.live_cols.remove(&pc);
        for (c, _) in prow {
            ws.col_rows[c].remove(&pr);
        }
        ws.row[pr].clear();
    }
    rank
}

/// Invariant factors of a sparse integer matrix: unit-pivot sparse phase,
/// then dense SNF on the remaining core. Returns the full diagonal
/// (including 1s and trailing zeros omitted), in divisibility order.
pub fn snf_sparse(m: &SparseMat<BigInt>) -> Vec<BigInt> {
    let mut ws = Workspace::build(m, |v: &BigInt| v.is_zero());
    let one = BigInt::one();
    let mut units = 0usize;
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for (&r, _) in ws.live_rows.iter() {
            for (&c, v) in ws.row[r].iter() {
                if v.abs() == one {
                    let score = (ws.row[r].len() - 1) * (ws.col_rows[c].len().saturating_sub(1));
                    if best.map_or(true, |(s, br, bc)| {
                        score < s || (score == s && (r, c) < (br, bc))
                    }) {
                        best = Some((score, r, c));
                    }
                }
            }
            if let Some((0, _, _)) = best {
                break;
            }
        }
        let Some((_, pr, pc)) = best else { break };
        units += 1;
        let pivot = ws.row[pr][&pc].clone(); // +/- 1
        let prow: Vec<(usize, BigInt)> = ws.row[pr].iter().map(|(c, v)| (*c, v.clone())).collect();
        let targets: Vec<usize> =
            ws.col_rows[pc].keys().copied().filter(|&r| r != pr && ws.live_rows.contains_key(&r)).collect();
        for r in targets {
            let Some(val) = ws.row[r].get(&pc).cloned() else { continue };
            if val.is_zero() {
                ws.row[r].remove(&pc);
                continue;
            }
            let q = &val * &pivot; // val / pivot since pivot = ±1
            for (c, pv) in &prow {
                let delta = &q * pv;
                let cur = ws.row[r].get(c).cloned().unwrap_or_else(BigInt::zero);
                let next = cur - delta;
                if next.is_zero() {
                    ws.row[r].remove(c);
                } else {
                    ws.row[r].insert(*c, next);
                    ws.col_rows[*c].insert(r, ());
                }
            }
            ws.row[r].remove(&pc);
        }
        // Row pr's remaining entries are cleared by column ops touching only
        // row pr (its column pc is now a singleton), so simply retire both.
        ws.live_rows.remove(&pr);
        ws.live_cols.remove(&pc);
        for (c, _) in prow {
            ws.col_rows[c].remove(&pr);
        }
        ws.row[pr].clear();
    }

    // Extract the remaining core densely.
    let rows: Vec<usize> =
        ws.live_rows.keys().copied().filter(|&r| !ws.row[r].is_empty()).collect();
    let mut cols: BTreeMap<usize, usize> = BTreeMap::new();
    for &r in &rows {
        for (&c, _) in ws.row[r].iter() {
            let next = cols.len();
            cols.entry(c).or_insert(next);
        }
    }
    let mut dense = vec![vec![BigInt::zero(); cols.len()]; rows.len()];
    for (i, &r) in rows.iter().enumerate() {
        for (&c, v) in ws.row[r].iter() {
            dense[i][cols[&c]] = v.clone();
        }
    }
    let core = snf_dense(dense, false);
    let mut diag = vec![BigInt::one(); units];
    diag.extend(core.diag.into_iter().filter(|d| !d.is_zero()));
    diag
}

impl<T: Clone> SparseMat<T> {
    pub fn transpose(&self) -> SparseMat<T> {
        let mut out = SparseMat::new(self.cols, self.rows);
        out.entries = self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())).collect();
        out.entries.sort_by_key(|(r, c, _)| (*r, *c));
        out
    }

    /// Rows as dense vectors (small matrices only).
    pub fn dense_rows(&self, zero: impl Fn() -> T) -> Vec<Vec<T>> {
        let mut rows: Vec<Vec<T>> = (0..self.rows).map(|_| (0..self.cols).map(|_| zero()).collect()).collect();
        for (r, c, v) in &self.entries {
            rows[*r][*c] = v.clone();
        }
        rows
    }
}

// ---------------------------------------------------------------------------
// Incremental reduced echelon form over a field
// ---------------------------------------------------------------------------

/// A row space held in fully reduced echelon form, built incrementally.
///
/// Invariants: every stored row has a unit pivot, and every pivot column is
/// zero in all other rows. Reducing a vector therefore yields the canonical
/// normal form of its class modulo the row space, and `express` recovers
/// exact coordinates of a member of the row space in terms of the vectors
/// inserted (when transform tracking is enabled).
pub struct Echelon<F> {
    cols: usize,
    /// (pivot column, sparse row sorted by column, unit pivot included).
    rows: Vec<(usize, Vec<(usize, F)>)>,
    pivot_of_col: Vec<Option<usize>>,
    /// Row i of the echelon as a combination of inserted vectors.
    trans: Option<Vec<Vec<F>>>,
    inserted: usize,
}

impl<F: Field> Echelon<F> {
    pub fn new(cols: usize) -> Echelon<F> {
        Echelon { cols, rows: Vec::new(), pivot_of_col: vec![None; cols], trans: None, inserted: 0 }
    }

    /// Tracks how each echelon row combines the inserted vectors;
    /// `sources` is the total number of insertions that will be made.
    pub fn with_transform(cols: usize, sources: usize) -> Echelon<F> {
        Echelon {
            cols,
            rows: Vec::new(),
            pivot_of_col: vec![None; cols],
            trans: Some(Vec::with_capacity(sources)),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|(c, _)| *c).collect();
        p.sort_unstable();
        p
    }

    /// Reduces `v` in place to its normal form modulo the row space;
    /// returns (echelon row, multiplier) pairs with v_in = v_out + Σ mult·row.
    pub fn reduce_in_place(&self, v: &mut [F]) -> Vec<(usize, F)> {
        assert_eq!(v.len(), self.cols);
        let mut mults = Vec::new();
        for c in 0..self.cols {
            if v[c].is_zero() {
                continue;
            }
            let Some(ri) = self.pivot_of_col[c] else { continue };
            let coeff = v[c].clone();
            for (cc, val) in &self.rows[ri].1 {
                let s = coeff.clone() * val.clone();
                v[*cc] = v[*cc].clone() - s;
            }
            debug_assert!(v[c].is_zero());
            mults.push((ri, coeff));
        }
        mults
    }

    /// Inserts a vector; returns the new echelon row index unless the
    /// vector lies in the current row space.
    pub fn insert_dense(&mut self, mut v: Vec<F>) -> Option<usize> {
        let source = self.inserted;
        self.inserted += 1;
        let mults = self.reduce_in_place(&mut v);
        let mut tvec = self.trans.as_ref().map(|tr| {
            let mut t = vec![F::zero(); self.inserted];
            t[source] = F::one();
            for (ri, coeff) in &mults {
                for (j, tv) in tr[*ri].iter().enumerate() {
                    let s = coeff.clone() * tv.clone();
                    t[j] = t[j].clone() - s;
                }
            }
            t
        });
        let p = (0..self.cols).find(|&c| !v[c].is_zero())?;
        let inv = v[p].inv();
        let row: Vec<(usize, F)> = (p..self.cols)
            .filter(|&c| !v[c].is_zero())
            .map(|c| (c, v[c].clone() * inv.clone()))
            .collect();
        if let Some(t) = tvec.as_mut() {
            for x in t.iter_mut() {
                *x = x.clone() * inv.clone();
            }
        }
        // Back-clean: clear the new pivot column from existing rows.
        for i in 0..self.rows.len() {
            let Ok(pos) = self.rows[i].1.binary_search_by_key(&p, |(c, _)| *c) else { continue };
            let coeff = self.rows[i].1[pos].1.clone();
            let merged = sparse_axpy(&self.rows[i].1, &row, &coeff);
            self.rows[i].1 = merged;
            if let (Some(tr), Some(t)) = (self.trans.as_mut(), tvec.as_ref()) {
                for (j, tv) in t.iter().enumerate() {
                    let s = coeff.clone() * tv.clone();
                    if j < tr[i].len() {
                        tr[i][j] = tr[i][j].clone() - s;
                    } else if !s.is_zero() {
                        while tr[i].len() < j {
                            tr[i].push(F::zero());
                        }
                        tr[i].push(-s);
                    }
                }
            }
        }
        let idx = self.rows.len();
        self.rows.push((p, row));
        self.pivot_of_col[p] = Some(idx);
        if let (Some(tr), Some(t)) = (self.trans.as_mut(), tvec) {
            tr.push(t);
        }
        Some(idx)
    }

    pub fn insert_sparse(&mut self, entries: &[(usize, F)]) -> Option<usize> {
        let mut v = vec![F::zero(); self.cols];
        for (c, val) in entries {
            v[*c] = val.clone();
        }
        self.insert_dense(v)
    }

    /// Writes `v` (which must lie in the row space) as a combination of the
    /// inserted vectors. Requires transform tracking. Returns None if `v`
    /// is not in the row space.
    pub fn express(&self, v: &[F]) -> Option<Vec<F>> {
        let tr = self.trans.as_ref().expect("echelon built without transform tracking");
        let mut w = v.to_vec();
        let mults = self.reduce_in_place(&mut w);
        if w.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut out = vec![F::zero(); self.inserted];
        for (ri, coeff) in mults {
            for (j, tv) in tr[ri].iter().enumerate() {
                let s = coeff.clone() * tv.clone();
                out[j] = out[j].clone() + s;
            }
        }
        Some(out)
    }

    /// Basis of {x : R x = 0} where R is the inserted row space: one vector
    /// per non-pivot column, in ascending column order.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if self.pivot_of_col[f].is_some() {
                continue;
            }
            let mut x = vec![F::zero(); self.cols];
            x[f] = F::one();
            for (p, row) in &self.rows {
                if let Ok(pos) = row.binary_search_by_key(&f, |(c, _)| *c) {
                    x[*p] = -row[pos].1.clone();
                }
            }
            basis.push(x);
        }
        basis
    }
}

/// result = a − coeff · b for sorted sparse rows.
fn sparse_axpy<F: Field>(a: &[(usize, F)], b: &[(usize, F)], coeff: &F) -> Vec<(usize, F)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let s = coeff.clone() * b[j].1.clone();
            if !s.is_zero() {
                out.push((b[j].0, -s));
            }
            j += 1;
        } else {
            let s = coeff.clone() * b[j].1.clone();
            let val = a[i].1.clone() - s;
            if !val.is_zero() {
                out.push((a[i].0, val));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Builds the echelon of a sparse matrix's rows (in row order).
pub fn echelon_of<F: Field>(m: &SparseMat<F>) -> Echelon<F> {
    let mut by_row: Vec<Vec<(usize, F)>> = vec![Vec::new(); m.rows];
    for (r, c, v) in &m.entries {
        if !v.is_zero() {
            by_row[*r].push((*c, v.clone()));
        }
    }
    let mut ech = Echelon::new(m.cols);
    for row in &mut by_row {
        row.sort_by_key(|(c, _)| *c);
        ech.insert_sparse(row);
    }
    ech
}

// ---------------------------------------------------------------------------
// Dense routines over a field: rref, kernel basis, solve
// ---------------------------------------------------------------------------

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<F: Field>(a: &mut Vec<Vec<F>>) -> Vec<usize> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..n {
        let Some(pr) = (r..m).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, pr);
        let inv = a[r][c].inv();
        for j in c..n {
            a[r][j] = a[r][j].clone() * inv.clone();
        }
        for i in 0..m {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..n {
                    let s = f.clone() * a[r][j].clone();
                    a[i][j] = a[i][j].clone() - s;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    pivots
}

/// Basis of the right kernel {x : A x = 0}, as column vectors.
pub fn kernel_basis<F: Field>(a: &[Vec<F>]) -> Vec<Vec<F>> {
    let n = if a.is_empty() { 0 } else { a[0].len() };
    let mut work = a.to_vec();
    let pivots = rref(&mut work);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let free: Vec<usize> = (0..n).filter(|c| !pivot_set.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut x = vec![F::zero(); n];
        x[fc] = F::one();
        for (ri, &pc) in pivots.iter().enumerate() {
            // row ri reads: x_pc + sum_{free c} a[ri][c] x_c = 0
            x[pc] = -work[ri][fc].clone();
        }
        basis.push(x);
    }
    basis
}

/// Solves `A x = b` over a field; returns any solution if consistent.
pub fn solve_field<F: Field>(a: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<F>> = (0..m)
        .map(|i| {
            let mut row = a[i].clone();
            row.push(b[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&n) {
        return None; // pivot in the augmented column: inconsistent
    }
    let mut x = vec![F::zero(); n];
    for (ri, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[ri][n].clone();
    }
    Some(x)
}

/// Rank of a dense matrix over a field.
pub fn rank_dense<F: Field>(a: &[Vec<F>]) -> usize {
    let mut work = a.to_vec();
    rref(&mut work).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn dense(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| bi(v)).collect()).collect()
    }

    #[test]
    fn snf_known_matrix() {
        // Classic example: diag(1, 3, 21) is wrong for this one; the correct
        // invariant factors of [[2,4,4],[-6,6,12],[10,4,16]] are 2, 2, 156.
        let a = dense(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let snf = snf_dense(a, false);
        assert_eq!(snf.diag, vec![bi(2), bi(2), bi(156)]);
    }

    #[test]
    fn snf_divisibility_and_transforms() {
        let a = dense(&[&[6, 4], &[4, 8], &[2, 0]]);
        let snf = snf_dense(a.clone(), true);
        for w in snf.diag.windows(2) {
            if !w[1].is_zero() && !w[0].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken");
            }
        }
        // Check U A V = D.
        let u = snf.u.unwrap();
        let v = snf.v.unwrap();
        let mut prod = vec![vec![bi(0); 2]; 3];
        for i in 0..3 {
            for j in 0..2 {
                let mut s = bi(0);
                for k in 0..3 {
                    for l in 0..2 {
                        s += &u[i][k] * &a[k][l] * &v[l][j];
                    }
                }
                prod[i][j] = s;
            }
        }
        for i in 0..3 {
            for j in 0..2 {
                let expect = if i == j { snf.diag[i].clone() } else { bi(0) };
                assert_eq!(prod[i][j], expect, "U A V mismatch at ({i},{j})");
            }
        }
    }

    #[test]
    fn sparse_snf_agrees_with_dense() {
        let rows: Vec<Vec<i64>> = vec![
            vec![2, 0, 0, -4, 0],
            vec![0, 0, 6, 0, 3],
            vec![1, 1, 0, 0, 0],
            vec![0, 5, 0, 10, 0],
        ];
        let dense_m: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&v| bi(v)).collect()).collect();
        let mut sp = SparseMat::new(4, 5);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                if v != 0 {
                    sp.push(i, j, bi(v));
                }
            }
        }
        let d1: Vec<BigInt> =
            snf_dense(dense_m, false).diag.into_iter().filter(|d| !d.is_zero()).collect();
        let d2 = snf_sparse(&sp);
        assert_eq!(d1, d2);
    }

    #[test]
    fn solve_integer_membership() {
        // im A = span{(2,0),(0,3)}; (2,3) is in the image, (1,0) is not.
        let a = dense(&[&[2, 0], &[0, 3]]);
        assert!(solve_integer(&a, &[bi(2), bi(3)]).is_some());
        assert!(solve_integer(&a, &[bi(1), bi(0)]).is_none());
        let x = solve_integer(&a, &[bi(4), bi(-9)]).unwrap();
        assert_eq!(x, vec![bi(2), bi(-3)]);
    }

    #[test]
    fn rank_and_kernel_rational() {
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        let a: Vec<Vec<BigRational>> = vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(0), q(1), q(1)],
        ];
        assert_eq!(rank_dense(&a), 2);
        let ker = kernel_basis(&a);
        assert_eq!(ker.len(), 1);
        for row in &a {
            let dot = (0..3).fold(q(0), |acc, i| acc + &row[i] * &ker[0][i]);
            assert_eq!(dot, q(0));
        }
        let mut sp = SparseMat::new(3, 3);
        for (i, row) in a.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    sp.push(i, j, v.clone());
                }
            }
        }
        assert_eq!(rank_sparse(&sp), 2);
    }

    #[test]
    fn solve_field_consistency() {
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        let x = solve_field(&a, &[q(3), q(1)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        let sing = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(solve_field(&sing, &[q(0), q(1)]).is_none());
    }

    fn random_sparse(rows: usize, cols: usize, seed: u64) -> SparseMat<BigRational> {
        let mut state = seed;
        let mut m = SparseMat::new(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                if state % 3 == 0 {
                    m.push(r, c, BigRational::from_integer(BigInt::from((state % 11) as i64 - 5)));
                }
            }
        }
        m
    }

    #[test]
    fn echelon_agrees_with_dense_routines() {
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        for seed in [3u64, 17, 99, 1234] {
            let m = random_sparse(7, 9, seed);
            let ech = echelon_of(&m);
            assert_eq!(ech.rank(), rank_sparse(&m));
            // Kernel agrees in dimension with the dense routine and every
            // member really lies in the kernel.
            let dense = m.dense_rows(|| q(0));
            let dense_ker = kernel_basis(&dense);
            let ker = ech.kernel_basis();
            assert_eq!(ker.len(), dense_ker.len());
            for v in &ker {
                for row in &dense {
                    let dot = (0..9).fold(q(0), |acc, i| acc + &row[i] * &v[i]);
                    assert!(dot.is_zero());
                }
            }
            // Normal-form reduction is idempotent and kills row-space vectors.
            for row in &dense {
                let mut w = row.clone();
                ech.reduce_in_place(&mut w);
                assert!(w.iter().all(|x| x.is_zero()));
            }
        }
    }

    #[test]
    fn echelon_express_recovers_coefficients() {
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        let basis = vec![
            vec![q(1), q(2), q(0), q(1)],
            vec![q(0), q(1), q(1), q(0)],
            vec![q(3), q(0), q(0), q(-1)],
        ];
        let mut ech = Echelon::with_transform(4, basis.len());
        for v in &basis {
            assert!(ech.insert_dense(v.clone()).is_some());
        }
        let coeffs = [q(2), q(-3), q(5)];
        let mut target = vec![q(0); 4];
        for (c, v) in coeffs.iter().zip(&basis) {
            for i in 0..4 {
                target[i] = target[i].clone() + c * &v[i];
            }
        }
        let got = ech.express(&target).unwrap();
        assert_eq!(got, coeffs.to_vec());
        // A vector outside the span is rejected.
        assert!(ech.express(&[q(0), q(0), q(1), q(1)]).is_none());
        // Dependent insertions are reported as such.
        assert!(ech.insert_dense(basis[0].clone()).is_none());
    }
}
