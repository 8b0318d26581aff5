//! Exact sparse matrices over the rationals and their ranks.
//!
//! Rank is computed by sparse fraction-free elimination on integer rows.
//! Pivots are chosen Markowitz style: the column with the fewest entries,
//! then a row with a unit entry, then the shortest row. Elimination first
//! runs on `i64` with overflow checks and restarts on `BigInt` if needed.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, BigRational)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, BigRational::one()));
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triples; duplicates add up and
    /// zeros are dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, BigRational)>,
    ) -> Result<Self> {
        let mut acc: Vec<BTreeMap<usize, BigRational>> = vec![BTreeMap::new(); rows];
        for (i, j, v) in triplets {
            if i >= rows || j >= cols {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({i}, {j}) outside {rows}x{cols}"
                )));
            }
            *acc[i].entry(j).or_insert_with(BigRational::zero) += v;
        }
        let data = acc
            .into_iter()
            .map(|row| row.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Ok(SparseMatrix { rows, cols, data })
    }

    pub fn from_integer_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self> {
        Self::from_triplets(
            rows,
            cols,
            triplets
                .into_iter()
                .map(|(i, j, v)| (i, j, BigRational::from_integer(v.into()))),
        )
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

    pub fn row(&self, i: usize) -> &[(usize, BigRational)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> BigRational {
        self.data[i]
            .binary_search_by_key(&j, |(c, _)| *c)
            .map(|k| self.data[i][k].1.clone())
            .unwrap_or_else(|_| BigRational::zero())
    }

    /// Entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![Vec::new(); self.cols];
        for (i, j, v) in self.triplets() {
            data[j].push((i, v.clone()));
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let mut data = vec![Vec::new(); self.rows];
        for (i, j, v) in self.triplets() {
            data[row_perm[i]].push((col_perm[j], v.clone()));
        }
        for row in &mut data {
            row.sort_by_key(|(j, _)| *j);
        }
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|row| row.iter().map(|(j, v)| (*j, v * factor)).collect())
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// The submatrix on the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_pos = vec![None; self.cols];
        for (k, &c) in cols.iter().enumerate() {
            col_pos[c] = Some(k);
        }
        let data = rows
            .iter()
            .map(|&i| {
                let mut row: Vec<(usize, BigRational)> = self.data[i]
                    .iter()
                    .filter_map(|(j, v)| col_pos[*j].map(|k| (k, v.clone())))
                    .collect();
                row.sort_by_key(|(k, _)| *k);
                row
            })
            .collect();
        SparseMatrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        rank(self)
    }
}

/// Exact product `a * b`.
pub fn multiply(a: &SparseMatrix, b: &SparseMatrix) -> Result<SparseMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let data = a
        .data
        .par_iter()
        .map(|row| {
            let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
            for (k, x) in row {
                for (j, y) in &b.data[*k] {
                    *acc.entry(*j).or_insert_with(BigRational::zero) += x * y;
                }
            }
            acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
        })
        .collect();
    Ok(SparseMatrix {
        rows: a.rows,
        cols: b.cols,
        data,
    })
}

trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn gcd(&self, other: &Self) -> Self;
    fn div_exact(&self, other: &Self) -> Self;
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn neg_mul(&self, other: &Self) -> Option<Self>;
}

impl Scalar for i64 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn neg_mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)?.checked_neg()
    }
}

impl Scalar for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn neg_mul(&self, other: &Self) -> Option<Self> {
        Some(-(self * other))
    }
}

type Row<T> = Vec<(usize, T)>;

struct Overflow;

fn reduce_content<T: Scalar>(row: &mut Row<T>) {
    let Some(first) = row.first() else { return };
    let mut g = first.1.clone();
    for (_, v) in row.iter().skip(1) {
        if g.is_unit() {
            return;
        }
        g = g.gcd(v);
    }
    if !g.is_unit() && !g.is_zero() {
        for (_, v) in row.iter_mut() {
            *v = v.div_exact(&g);
        }
    }
}

/// `s <- a*s - b*r`, merging the two sorted rows.
fn combine<T: Scalar>(
    s: &Row<T>,
    a: &T,
    r: &Row<T>,
    b: &T,
) -> std::result::Result<Row<T>, Overflow> {
    let mut out = Vec::with_capacity(s.len() + r.len());
    let (mut i, mut j) = (0, 0);
    while i < s.len() || j < r.len() {
        let cs = s.get(i).map_or(usize::MAX, |x| x.0);
        let cr = r.get(j).map_or(usize::MAX, |x| x.0);
        let (col, val) = match cs.cmp(&cr) {
            std::cmp::Ordering::Less => {
                i += 1;
                (cs, s[i - 1].1.mul(a).ok_or(Overflow)?)
            }
            std::cmp::Ordering::Greater => {
                j += 1;
                (cr, r[j - 1].1.neg_mul(b).ok_or(Overflow)?)
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
                (
                    cs,
                    T::mul_sub(&s[i - 1].1, a, &r[j - 1].1, b).ok_or(Overflow)?,
                )
            }
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    Ok(out)
}

fn entry_at<T>(row: &Row<T>, c: usize) -> &T {
    &row[row
        .binary_search_by_key(&c, |x| x.0)
        .expect("column present in row")]
    .1
}

fn eliminate<T: Scalar>(
    mut rows: Vec<Row<T>>,
    cols: usize,
) -> std::result::Result<usize, Overflow> {
    rows.retain(|r| !r.is_empty());
    let mut active = vec![true; rows.len()];
    let mut count = vec![0usize; cols];
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); cols];
    for (i, row) in rows.iter().enumerate() {
        for (c, _) in row {
            count[*c] += 1;
            col_rows[*c].push(i);
        }
    }
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..cols)
        .filter(|&c| count[c] > 0)
        .map(|c| Reverse((count[c], c)))
        .collect();
    let mut rank = 0;
    while let Some(Reverse((k, c))) = heap.pop() {
        if count[c] == 0 {
            continue;
        }
        if k != count[c] {
            heap.push(Reverse((count[c], c)));
            continue;
        }
        let mut holders: Vec<usize> = std::mem::take(&mut col_rows[c]);
        holders.sort_unstable();
        holders.dedup();
        holders.retain(|&i| active[i] && rows[i].binary_search_by_key(&c, |x| x.0).is_ok());
        let pivot = *holders
            .iter()
            .min_by_key(|&&i| (!entry_at(&rows[i], c).is_unit(), rows[i].len(), i))
            .expect("column count is positive");
        active[pivot] = false;
        rank += 1;
        let prow = std::mem::take(&mut rows[pivot]);
        for (col, _) in &prow {
            count[*col] -= 1;
        }
        let p = entry_at(&prow, c).clone();
        for &i in holders.iter().filter(|&&i| i != pivot) {
            let v = entry_at(&rows[i], c).clone();
            let g = p.gcd(&v);
            let (a, b) = (p.div_exact(&g), v.div_exact(&g));
            let old = std::mem::take(&mut rows[i]);
            for (col, _) in &old {
                count[*col] -= 1;
            }
            let mut new = combine(&old, &a, &prow, &b)?;
            reduce_content(&mut new);
            for (col, _) in &new {
                count[*col] += 1;
                if old.binary_search_by_key(col, |x| x.0).is_err() {
                    col_rows[*col].push(i);
                    heap.push(Reverse((count[*col], *col)));
                }
            }
            if new.is_empty() {
                active[i] = false;
            }
            rows[i] = new;
        }
        for (col, _) in &prow {
            if count[*col] > 0 {
                heap.push(Reverse((count[*col], *col)));
            }
        }
    }
    Ok(rank)
}

fn integer_rows(m: &SparseMatrix) -> Vec<Row<BigInt>> {
    m.data
        .iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |l, (_, v)| l.lcm(v.denom()));
            let mut out: Row<BigInt> = row
                .iter()
                .map(|(j, v)| (*j, (v * &lcm).to_integer()))
                .collect();
            reduce_content(&mut out);
            out
        })
        .collect()
}

/// Exact rank over the rationals.
pub fn rank(m: &SparseMatrix) -> usize {
    // Eliminate along the shorter side.
    let m = if m.cols > m.rows {
        std::borrow::Cow::Owned(m.transpose())
    } else {
        std::borrow::Cow::Borrowed(m)
    };
    let big = integer_rows(&m);
    let small: Option<Vec<Row<i64>>> = big
        .iter()
        .map(|row| {
            row.iter()
                .map(|(j, v)| v.to_i64().map(|x| (*j, x)))
                .collect()
        })
        .collect();
    if let Some(small) = small {
        if let Ok(r) = eliminate(small, m.cols) {
            return r;
        }
    }
    match eliminate(big, m.cols) {
        Ok(r) => r,
        Err(Overflow) => unreachable!("big integers do not overflow"),
    }
}

/// `dim H_k = n_k - rank(d_k) - rank(d_{k+1})`, where `boundaries[i]` maps
/// grade `i + 1` to grade `i`. Missing trailing boundaries are zero maps.
pub fn homology_dims(boundaries: &[SparseMatrix], counts: &[usize]) -> Result<Vec<usize>> {
    if boundaries.len() + 1 > counts.len().max(1) {
        return Err(Error::DimensionMismatch(format!(
            "{} boundaries for {} grades",
            boundaries.len(),
            counts.len()
        )));
    }
    for (i, b) in boundaries.iter().enumerate() {
        if b.rows != counts[i] || b.cols != counts[i + 1] {
            return Err(Error::DimensionMismatch(format!(
                "boundary {} is {}x{}, expected {}x{}",
                i + 1,
                b.rows,
                b.cols,
                counts[i],
                counts[i + 1]
            )));
        }
    }
    let ranks: Vec<usize> = boundaries.par_iter().map(rank).collect();
    Ok(counts
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let into = if k > 0 {
                ranks.get(k - 1).copied().unwrap_or(0)
            } else {
                0
            };
            let out = ranks.get(k).copied().unwrap_or(0);
            n - into - out
        })
        .collect())
}
