//! Exact linear algebra over the rationals: fraction-free elimination on
//! primitive integer rows, with a dense Bareiss path for small matrices.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Sparse integer row, sorted by column, no zeros.
pub type IntRow = Vec<(usize, BigInt)>;
/// Sparse rational row, sorted by column, no zeros.
pub type RatRow = Vec<(usize, Rational)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: BTreeMap::new() }
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::new(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
            }
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) outside {}x{}", self.rows, self.cols);
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn sparse_rows(&self) -> Vec<RatRow> {
        let mut out = vec![Vec::new(); self.rows];
        for (&(r, c), v) in &self.entries {
            out[r].push((c, v.clone()));
        }
        out
    }

    pub fn from_sparse_rows(cols: usize, rows: &[RatRow]) -> Self {
        let mut m = Self::new(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (c, v) in r {
                m.set(i, *c, v.clone());
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let mut out = vec![Rational::zero(); self.rows];
        for (&(r, c), a) in &self.entries {
            out[r] += a * &v[c];
        }
        Ok(out)
    }
}

fn content(row: &IntRow) -> BigInt {
    row.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v))
}

/// Divides out the content and makes the leading entry positive.
fn make_primitive(row: &mut IntRow) {
    if row.is_empty() {
        return;
    }
    let mut g = content(row);
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// Clears denominators of a rational row, giving a primitive integer row.
pub fn to_int_row(row: &[(usize, Rational)]) -> IntRow {
    let l = row.iter().fold(BigInt::one(), |l, (_, v)| l.lcm(v.denom()));
    let mut out: IntRow = row
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| (*c, v.numer() * (&l / v.denom())))
        .collect();
    make_primitive(&mut out);
    out
}

/// `a·x − b·y` on sorted sparse rows.
fn combine(a: &BigInt, x: &IntRow, b: &BigInt, y: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// An incrementally built echelon form. Each stored row is primitive and its
/// pivot is its smallest column, so callers choose what "leading" means by
/// how they number columns.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<IntRow>,
    pivot_row: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    /// Remainder of `row` after eliminating every pivot column, primitive.
    pub fn reduce(&self, mut row: IntRow) -> IntRow {
        make_primitive(&mut row);
        let mut cursor = 0usize;
        loop {
            let hit = row
                .iter()
                .find(|(c, _)| *c >= cursor && self.pivot_row.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((col, v)) = hit else {
                break;
            };
            let r = &self.rows[self.pivot_row[&col]];
            let a = &r[0].1;
            let g = a.gcd(&v);
            row = combine(&(a / &g), &row, &(&v / &g), r);
            make_primitive(&mut row);
            cursor = col + 1;
        }
        row
    }

    /// Adds `row` to the span; returns whether the rank grew.
    pub fn insert(&mut self, row: IntRow) -> bool {
        let r = self.reduce(row);
        if r.is_empty() {
            return false;
        }
        self.pivot_row.insert(r[0].0, self.rows.len());
        self.rows.push(r);
        true
    }

    pub fn insert_rational(&mut self, row: &[(usize, Rational)]) -> bool {
        self.insert(to_int_row(row))
    }

    pub fn contains(&self, row: IntRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// Reduced row echelon form: rows sorted by pivot, pivot entries 1, and
    /// every pivot column zero outside its own row.
    pub fn into_rref(self) -> Vec<RatRow> {
        let mut rows = self.rows;
        rows.sort_by_key(|r| r[0].0);
        back_substitute_int(rows)
    }
}

fn back_substitute_int(mut rows: Vec<IntRow>) -> Vec<RatRow> {
    let pivots: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, r)| (r[0].0, i)).collect();
    for i in (0..rows.len()).rev() {
        let mut cursor = rows[i][0].0 + 1;
        loop {
            let hit = rows[i]
                .iter()
                .find(|(c, _)| *c >= cursor && pivots.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((col, v)) = hit else {
                break;
            };
            let k = pivots[&col];
            let a = rows[k][0].1.clone();
            let g = a.gcd(&v);
            let next = combine(&(&a / &g), &rows[i], &(&v / &g), &rows[k]);
            rows[i] = next;
            make_primitive(&mut rows[i]);
            cursor = col + 1;
        }
    }
    rows.into_iter()
        .map(|r| {
            let lead = r[0].1.clone();
            r.into_iter().map(|(c, v)| (c, Rational::new(v, lead.clone()))).collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    pub reduced: RatMatrix,
    pub pivots: Vec<usize>,
}

const DENSE_LIMIT: usize = 64;

/// Exact row reduction; dense Bareiss below 64×64, sparse otherwise.
pub fn rref_rank(a: &RatMatrix) -> Rref {
    if a.rows < DENSE_LIMIT && a.cols < DENSE_LIMIT {
        rref_dense(a)
    } else {
        rref_sparse(a)
    }
}

fn finish(cols: usize, rows: Vec<RatRow>) -> Rref {
    let pivots = rows.iter().map(|r| r[0].0).collect();
    Rref { rank: rows.len(), reduced: RatMatrix::from_sparse_rows(cols, &rows), pivots }
}

pub fn rref_sparse(a: &RatMatrix) -> Rref {
    let mut e = Echelon::new();
    for row in a.sparse_rows() {
        e.insert_rational(&row);
    }
    finish(a.cols, e.into_rref())
}

/// Bareiss fraction-free forward elimination followed by back-substitution.
pub fn rref_dense(a: &RatMatrix) -> Rref {
    let mut m: Vec<Vec<BigInt>> = a
        .sparse_rows()
        .iter()
        .map(|r| {
            let mut dense = vec![BigInt::zero(); a.cols];
            for (c, v) in to_int_row(r) {
                dense[c] = v;
            }
            dense
        })
        .collect();
    let mut prev = BigInt::one();
    let mut r = 0usize;
    for c in 0..a.cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for j in c + 1..a.cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    let rows: Vec<IntRow> = m
        .into_iter()
        .take(r)
        .map(|row| {
            let mut s: IntRow = row.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
            make_primitive(&mut s);
            s
        })
        .collect();
    finish(a.cols, back_substitute_int(rows))
}

/// Basis of `{v : A v = 0}`, one vector per non-pivot column.
pub fn kernel_basis(a: &RatMatrix) -> Vec<Vec<Rational>> {
    let rref = rref_rank(a);
    kernel_from_rref(a.cols, &rref.reduced.sparse_rows())
}

/// Kernel vectors read off reduced rows: free column `f` gives `e_f` minus
/// the column `f` entries placed at the pivots.
pub fn kernel_from_rref(cols: usize, rows: &[RatRow]) -> Vec<Vec<Rational>> {
    let pivots: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
    let is_pivot: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut out = Vec::new();
    for f in (0..cols).filter(|c| !is_pivot.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        for (r, &p) in rows.iter().zip(&pivots) {
            if let Some((_, x)) = r.iter().find(|(c, _)| *c == f) {
                v[p] = -x.clone();
            }
        }
        out.push(v);
    }
    out
}

/// Sparse kernel: rows are the equations, returns sparse kernel vectors.
pub fn kernel_sparse(cols: usize, equations: impl IntoIterator<Item = IntRow>) -> Vec<RatRow> {
    let mut e = Echelon::new();
    for row in equations {
        e.insert(row);
        if e.rank() == cols {
            break;
        }
    }
    let rows = e.into_rref();
    let mut free_entries: HashMap<usize, Vec<(usize, Rational)>> = HashMap::new();
    let mut is_pivot = vec![false; cols];
    for r in &rows {
        is_pivot[r[0].0] = true;
        for (c, v) in &r[1..] {
            free_entries.entry(*c).or_default().push((r[0].0, -v.clone()));
        }
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = free_entries.remove(&f).unwrap_or_default();
            v.push((f, Rational::one()));
            v.sort_by_key(|(c, _)| *c);
            v
        })
        .collect()
}

/// Coordinates of `v` in terms of `basis`, if it lies in the span.
pub fn in_span(v: &[Rational], basis: &[Vec<Rational>]) -> Result<Option<Vec<Rational>>> {
    let dim = v.len();
    if let Some(bad) = basis.iter().find(|b| b.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: bad.len() });
    }
    // Columns are the basis vectors followed by v; solve by row reduction.
    let k = basis.len();
    let mut a = RatMatrix::new(dim, k + 1);
    for i in 0..dim {
        for (j, b) in basis.iter().enumerate() {
            a.set(i, j, b[i].clone());
        }
        a.set(i, k, v[i].clone());
    }
    let rref = rref_rank(&a);
    if rref.pivots.contains(&k) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); k];
    for (i, &p) in rref.pivots.iter().enumerate() {
        x[p] = rref.reduced.get(i, k);
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rref_rank(&RatMatrix::identity(3)).rank, 3);
        assert_eq!(rref_rank(&RatMatrix::from_i64(&[vec![1, 2], vec![2, 4]]).unwrap()).rank, 1);
        assert_eq!(rref_rank(&RatMatrix::new(3, 4)).rank, 0);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&RatMatrix::from_i64(&[vec![1, 1]]).unwrap()), vec![ints(&[-1, 1])]);
        assert!(kernel_basis(&RatMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&RatMatrix::from_i64(&[vec![1, 2], vec![2, 4]]).unwrap()), vec![ints(&[-2, 1])]);
    }

    #[test]
    fn span_examples() {
        let v = ints(&[3, 1]);
        assert_eq!(in_span(&v, &[v.clone()]).unwrap(), Some(ints(&[1])));
        assert_eq!(in_span(&ints(&[0, 0]), &[ints(&[1, 2]), ints(&[0, 1])]).unwrap(), Some(ints(&[0, 0])));
        assert_eq!(in_span(&ints(&[1, 0]), &[ints(&[0, 1])]).unwrap(), None);
        assert!(in_span(&ints(&[1, 0]), &[ints(&[0, 1, 2])]).is_err());
    }

    #[test]
    fn dense_and_sparse_agree() {
        let a = RatMatrix::from_i64(&[vec![2, 4, 1, 0], vec![1, 2, 0, 3], vec![3, 6, 1, 3], vec![0, 0, 5, -1]]).unwrap();
        let (d, s) = (rref_dense(&a), rref_sparse(&a));
        assert_eq!(d, s);
        assert_eq!(d.rank, 3);
        assert_eq!(d.pivots, vec![0, 2, 3]);
    }

    #[test]
    fn sparse_kernel_matches_dense() {
        let a = RatMatrix::from_i64(&[vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, 0, 1]]).unwrap();
        let dense = kernel_basis(&a);
        let sparse: Vec<Vec<Rational>> = kernel_sparse(4, a.sparse_rows().iter().map(|r| to_int_row(r)))
            .into_iter()
            .map(|r| {
                let mut v = vec![Rational::zero(); 4];
                for (c, x) in r {
                    v[c] = x;
                }
                v
            })
            .collect();
        assert_eq!(dense, sparse);
    }
}
