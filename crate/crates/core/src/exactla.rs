//! Exact sparse linear algebra over the rationals, with a rank mod p
//! cross-check.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type SparseRow = Vec<(usize, BigRational)>;

/// Row-major sparse matrix; each row is sorted by column with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<SparseRow>,
}

impl SparseMat {
    pub fn zeros(n_rows: usize, n_cols: usize) -> SparseMat {
        SparseMat { n_rows, n_cols, rows: vec![Vec::new(); n_rows] }
    }

    pub fn identity(n: usize) -> SparseMat {
        SparseMat::from_rows(n, (0..n).map(|i| vec![(i, BigRational::one())]).collect())
    }

    /// Builds a matrix from possibly unsorted rows; duplicate columns are summed
    /// and zeros dropped.
    pub fn from_rows(n_cols: usize, rows: Vec<SparseRow>) -> SparseMat {
        let rows: Vec<SparseRow> = rows
            .into_iter()
            .map(|r| {
                let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
                for (c, v) in r {
                    assert!(c < n_cols, "column {c} out of range {n_cols}");
                    *acc.entry(c).or_insert_with(BigRational::zero) += v;
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseMat { n_rows: rows.len(), n_cols, rows }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> SparseMat {
        let n_cols = rows.first().map_or(0, |r| r.len());
        SparseMat::from_rows(
            n_cols,
            rows.iter()
                .map(|r| r.iter().enumerate().map(|(c, &v)| (c, BigRational::from_integer(v.into()))).collect())
                .collect(),
        )
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn transpose(&self) -> SparseMat {
        let mut cols: Vec<SparseRow> = vec![Vec::new(); self.n_cols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                cols[*c].push((r, v.clone()));
            }
        }
        SparseMat { n_rows: self.n_cols, n_cols: self.n_rows, rows: cols }
    }

    /// Exports the `row col value` triple list, preceded by a `#` header line.
    pub fn to_triples(&self, header: &str) -> String {
        let mut s = format!("# {header} rows={} cols={}\n", self.n_rows, self.n_cols);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                writeln!(s, "{r} {c} {v}").unwrap();
            }
        }
        s
    }

    /// Parses the triple list written by [`SparseMat::to_triples`].
    pub fn from_triples(text: &str) -> std::result::Result<SparseMat, String> {
        let mut lines = text.lines();
        let header = lines.next().ok_or("empty triple file")?;
        let field = |name: &str| -> std::result::Result<usize, String> {
            header
                .split_whitespace()
                .find_map(|w| w.strip_prefix(name))
                .ok_or(format!("header lacks `{name}`"))?
                .parse()
                .map_err(|e| format!("bad `{name}`: {e}"))
        };
        let (n_rows, n_cols) = (field("rows=")?, field("cols=")?);
        let mut rows: Vec<SparseRow> = vec![Vec::new(); n_rows];
        for (i, line) in lines.enumerate() {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [r, c, v] = parts.as_slice() else {
                return Err(format!("line {}: expected `row col value`", i + 2));
            };
            let r: usize = r.parse().map_err(|e| format!("line {}: {e}", i + 2))?;
            let c: usize = c.parse().map_err(|e| format!("line {}: {e}", i + 2))?;
            let v: BigRational = v.parse().map_err(|e| format!("line {}: {e}", i + 2))?;
            if r >= n_rows || c >= n_cols {
                return Err(format!("line {}: index out of range", i + 2));
            }
            rows[r].push((c, v));
        }
        Ok(SparseMat::from_rows(n_cols, rows))
    }
}

/// `a - f * b` for sorted sparse rows.
fn axpy(a: &SparseRow, f: &BigRational, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                let v = va - f * vb;
                if !v.is_zero() {
                    out.push((*ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (_, Some((cb, vb))) => {
                out.push((*cb, -(f * vb)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn entry(row: &SparseRow, col: usize) -> Option<&BigRational> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|i| &row[i].1)
}

/// Rank over the rationals by sparse elimination with Markowitz pivot
/// selection. Ties break on lowest column, then lowest row.
pub fn rank(m: &SparseMat) -> usize {
    let mut active: Vec<SparseRow> = m.rows.iter().filter(|r| !r.is_empty()).cloned().collect();
    let mut rank = 0;
    while !active.is_empty() {
        let mut col_count = vec![0usize; m.n_cols];
        for row in &active {
            for (c, _) in row {
                col_count[*c] += 1;
            }
        }
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for (ri, row) in active.iter().enumerate() {
            for (c, _) in row {
                let cost = (row.len() - 1) * (col_count[*c] - 1);
                let cand = (cost, *c, ri, row.len());
                if best.is_none_or(|b| (cand.0, cand.1, cand.2) < (b.0, b.1, b.2)) {
                    best = Some(cand);
                }
            }
        }
        let (_, pc, pr, _) = best.expect("active rows are nonempty");
        let pivot_row = active.swap_remove(pr);
        let pv = entry(&pivot_row, pc).unwrap().clone();
        let mut next = Vec::with_capacity(active.len());
        for row in active {
            let reduced = match entry(&row, pc) {
                Some(v) => axpy(&row, &(v / &pv), &pivot_row),
                None => row,
            };
            if !reduced.is_empty() {
                next.push(reduced);
            }
        }
        active = next;
        rank += 1;
    }
    rank
}

/// Reduced row echelon form: pivot columns (increasing) and the matching
/// normalized rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub pivots: Vec<usize>,
    pub rows: Vec<SparseRow>,
    pub n_cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns that carry no pivot, i.e. a basis of the quotient by the row space.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.n_cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.n_cols).filter(|&c| !is_pivot[c]).collect()
    }

    pub fn to_matrix(&self) -> SparseMat {
        SparseMat::from_rows(self.n_cols, self.rows.clone())
    }

    /// Reduces a dense vector modulo the row space; the result vanishes on
    /// every pivot column.
    pub fn reduce(&self, v: &mut [BigRational]) {
        for (p, row) in self.pivots.iter().zip(&self.rows) {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (c, x) in row {
                v[*c] -= &f * x;
            }
        }
    }
}

/// Gauss-Jordan elimination column by column. The pivot for each column is the
/// shortest remaining row with a nonzero there (lowest index on ties). The
/// output is the unique reduced row echelon form of the row space.
pub fn echelonize(m: &SparseMat) -> Echelon {
    let mut pending: Vec<SparseRow> = m.rows.iter().filter(|r| !r.is_empty()).cloned().collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut done: Vec<SparseRow> = Vec::new();
    for col in 0..m.n_cols {
        let pick = pending
            .iter()
            .enumerate()
            .filter(|(_, r)| r[0].0 == col)
            .min_by_key(|(i, r)| (r.len(), *i))
            .map(|(i, _)| i);
        let Some(pi) = pick else { continue };
        let mut prow = pending.remove(pi);
        let inv = prow[0].1.recip();
        for (_, v) in prow.iter_mut() {
            *v *= &inv;
        }
        pending = pending
            .into_iter()
            .filter_map(|r| {
                let r = if r[0].0 == col {
                    let f = r[0].1.clone();
                    axpy(&r, &f, &prow)
                } else {
                    r
                };
                (!r.is_empty()).then_some(r)
            })
            .collect();
        for row in done.iter_mut() {
            if let Some(f) = entry(row, col).cloned() {
                *row = axpy(row, &f, &prow);
            }
        }
        pivots.push(col);
        done.push(prow);
    }
    Echelon { pivots, rows: done, n_cols: m.n_cols }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn residue(x: &BigInt, p: u64) -> u64 {
    let r = x % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    r.to_u64().unwrap()
}

/// Rank of the matrix reduced mod `p`. Entries whose denominator vanishes
/// mod `p` make the reduction undefined and are reported as a bad prime.
pub fn rank_modp(m: &SparseMat, p: u64) -> Result<usize> {
    if p <= 1 << 20 || !is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    let mut rows: Vec<Vec<(usize, u64)>> = Vec::with_capacity(m.n_rows);
    for row in &m.rows {
        let mut out = Vec::with_capacity(row.len());
        for (c, v) in row {
            let den = residue(v.denom(), p);
            if den == 0 {
                return Err(Error::BadPrime(p));
            }
            let x = mul_mod(residue(v.numer(), p), pow_mod(den, p - 2, p), p);
            if x != 0 {
                out.push((*c, x));
            }
        }
        if !out.is_empty() {
            rows.push(out);
        }
    }
    let mut rank = 0;
    while let Some(pi) = (0..rows.len()).min_by_key(|&i| (rows[i][0].0, rows[i].len(), i)) {
        let prow = rows.swap_remove(pi);
        let (pc, pv) = prow[0];
        let inv = pow_mod(pv, p - 2, p);
        rows = rows
            .into_iter()
            .filter_map(|r| {
                if r[0].0 != pc {
                    return Some(r);
                }
                let f = mul_mod(r[0].1, inv, p);
                let mut acc: BTreeMap<usize, u64> = r.into_iter().collect();
                for &(c, v) in &prow {
                    let e = acc.entry(c).or_insert(0);
                    *e = (*e + p - mul_mod(f, v, p)) % p;
                }
                let out: Vec<(usize, u64)> = acc.into_iter().filter(|&(_, v)| v != 0).collect();
                (!out.is_empty()).then_some(out)
            })
            .collect();
        rank += 1;
    }
    Ok(rank)
}
