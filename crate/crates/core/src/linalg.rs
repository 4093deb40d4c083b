//! Exact linear algebra over the rationals: a sparse echelon solver used by
//! every "solve for monomial coefficients" step, and small dense helpers for
//! Jacobians and Jordan analysis.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::poly::Rational;

/// Sparse row: strictly increasing column indices with nonzero entries.
pub type SparseRow = Vec<(usize, Rational)>;

/// `row += c * other`, both sparse.
fn axpy(row: &SparseRow, c: &Rational, other: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let take_left = j == other.len() || (i < row.len() && row[i].0 < other[j].0);
        let take_right = i == row.len() || (j < other.len() && other[j].0 < row[i].0);
        if take_left {
            out.push(row[i].clone());
            i += 1;
        } else if take_right {
            out.push((other[j].0, c * &other[j].1));
            j += 1;
        } else {
            let v = &row[i].1 + c * &other[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Reduced row echelon form of a sparse matrix with `ncols` columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    /// pivot column -> normalized row (pivot entry 1, other pivot columns 0)
    rows: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: BTreeMap::new() }
    }

    /// Reduces `row` against the current pivots (without back-substitution
    /// into older rows); returns the remainder.
    fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut k = 0;
        while k < row.len() {
            let col = row[k].0;
            if let Some(p) = self.rows.get(&col) {
                // pivot rows start at `col` and vanish on other pivot
                // columns, so entries before k stay put
                let c = -row[k].1.clone();
                row = axpy(&row, &c, p);
            } else {
                k += 1;
            }
        }
        row
    }

    /// Inserts a row; returns `true` if it increased the rank.
    pub fn push(&mut self, row: SparseRow) -> bool {
        debug_assert!(row.iter().all(|(c, _)| *c < self.ncols));
        let row = self.reduce(row);
        let Some((pc, pv)) = row.first().cloned() else {
            return false;
        };
        let inv = pv.recip();
        let row: SparseRow = row.into_iter().map(|(c, v)| (c, v * &inv)).collect();
        // eliminate the new pivot from the existing rows
        let keys: Vec<usize> = self.rows.keys().copied().collect();
        for k in keys {
            let r = &self.rows[&k];
            if let Ok(pos) = r.binary_search_by_key(&pc, |(c, _)| *c) {
                let c = -r[pos].1.clone();
                let new = axpy(r, &c, &row);
                self.rows.insert(k, new);
            }
        }
        self.rows.insert(pc, row);
        true
    }

    pub fn from_rows<I: IntoIterator<Item = SparseRow>>(ncols: usize, rows: I) -> Self {
        let mut e = Echelon::new(ncols);
        for r in rows {
            e.push(r);
        }
        e
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseRow> {
        self.rows.values()
    }

    pub fn contains(&self, row: &SparseRow) -> bool {
        self.reduce(row.clone()).is_empty()
    }

    /// Remainder of `row` modulo the row space (reduced against all pivots).
    pub fn remainder(&self, row: SparseRow) -> SparseRow {
        self.reduce(row)
    }

    /// Kernel basis, one vector per free column in increasing order; each
    /// vector has a 1 in its free column and 0 in the other free columns.
    pub fn kernel(&self) -> Vec<SparseRow> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.rows.contains_key(c)).collect();
        let mut by_free: BTreeMap<usize, SparseRow> =
            free.iter().map(|&f| (f, vec![(f, Rational::one())])).collect();
        for (&p, row) in &self.rows {
            for (c, v) in row.iter().skip(1) {
                by_free.get_mut(c).expect("non-pivot column").push((p, -v.clone()));
            }
        }
        by_free
            .into_values()
            .map(|mut v| {
                v.sort_by_key(|(c, _)| *c);
                v
            })
            .collect()
    }
}

/// Solves `A x = b` for the sparse columns of `A`; free variables are 0.
pub fn solve_columns<K: Ord + Clone>(
    columns: &[Vec<(K, Rational)>],
    rhs: &[(K, Rational)],
) -> Option<Vec<Rational>> {
    let rows = columns_to_rows(columns, Some(rhs));
    let n = columns.len();
    let e = Echelon::from_rows(n + 1, rows);
    if e.rows.contains_key(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (&p, row) in &e.rows {
        if let Some((_, v)) = row.iter().find(|(c, _)| *c == n) {
            x[p] = v.clone();
        }
    }
    Some(x)
}

/// Kernel of the map whose `j`-th column image is `columns[j]`.
pub fn kernel_of_columns<K: Ord + Clone>(columns: &[Vec<(K, Rational)>]) -> Vec<SparseRow> {
    let rows = columns_to_rows(columns, None);
    Echelon::from_rows(columns.len(), rows).kernel()
}

/// Rank of the map whose columns are given sparsely.
pub fn rank_of_columns<K: Ord + Clone>(columns: &[Vec<(K, Rational)>]) -> usize {
    let rows = columns_to_rows(columns, None);
    Echelon::from_rows(columns.len(), rows).rank()
}

/// Transposes column data keyed by row labels into sparse rows. With a
/// right-hand side it becomes the extra last column.
fn columns_to_rows<K: Ord + Clone>(
    columns: &[Vec<(K, Rational)>],
    rhs: Option<&[(K, Rational)]>,
) -> Vec<SparseRow> {
    let mut rows: BTreeMap<K, SparseRow> = BTreeMap::new();
    let extra = rhs.map(|r| (columns.len(), r));
    for (j, col) in columns.iter().enumerate().map(|(j, c)| (j, c.as_slice())).chain(extra) {
        for (k, v) in col {
            if !v.is_zero() {
                rows.entry(k.clone()).or_default().push((j, v.clone()));
            }
        }
    }
    rows.into_values()
        .map(|mut r| {
            r.sort_by_key(|(c, _)| *c);
            // merge duplicate columns from repeated keys
            let mut merged: SparseRow = Vec::with_capacity(r.len());
            for (c, v) in r {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            merged
        })
        .collect()
}

/// Dense square or rectangular matrix.
pub type Matrix = Vec<Vec<Rational>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = Rational::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// `a - lambda * I`.
pub fn shift(a: &Matrix, lambda: &Rational) -> Matrix {
    let mut m = a.clone();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= lambda;
    }
    m
}

pub fn mat_pow(a: &Matrix, e: u32) -> Matrix {
    let mut out = identity(a.len());
    for _ in 0..e {
        out = mat_mul(&out, a);
    }
    out
}

fn dense_to_rows(a: &Matrix) -> Vec<SparseRow> {
    a.iter()
        .map(|row| row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect())
        .collect()
}

pub fn rank(a: &Matrix) -> usize {
    let ncols = a.first().map_or(0, Vec::len);
    Echelon::from_rows(ncols, dense_to_rows(a)).rank()
}

/// Right kernel basis of a dense matrix, as dense vectors.
pub fn kernel(a: &Matrix, ncols: usize) -> Vec<Vec<Rational>> {
    Echelon::from_rows(ncols, dense_to_rows(a))
        .kernel()
        .into_iter()
        .map(|v| to_dense(&v, ncols))
        .collect()
}

pub fn to_dense(v: &SparseRow, n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n];
    for (c, x) in v {
        out[*c] = x.clone();
    }
    out
}

pub fn is_zero_matrix(a: &Matrix) -> bool {
    a.iter().all(|r| r.iter().all(Zero::is_zero))
}

pub fn is_nilpotent(a: &Matrix) -> bool {
    is_zero_matrix(&mat_pow(a, a.len() as u32))
}

pub fn trace(a: &Matrix) -> Rational {
    a.iter().enumerate().map(|(i, r)| r[i].clone()).fold(Rational::zero(), |s, x| s + x)
}

/// Characteristic polynomial `det(t I - A)` as coefficients `c_0..c_n`
/// (`c_n = 1`), by the Faddeev–LeVerrier recursion.
pub fn char_poly(a: &Matrix) -> Vec<Rational> {
    let n = a.len();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        let am = mat_mul(a, &next);
        coeffs[n - k] = -trace(&am) / Rational::from_integer((k as i64).into());
        m = next;
    }
    coeffs
}

/// Determinant via elimination.
pub fn det(a: &Matrix) -> Rational {
    let n = a.len();
    let mut m = a.clone();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        let pv = m[c][c].clone();
        d *= &pv;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &pv;
            let (upper, lower) = m.split_at_mut(r);
            for (x, p) in lower[0][c..].iter_mut().zip(&upper[c][c..]) {
                *x -= &f * p;
            }
        }
    }
    d
}

/// Inverse by Gauss–Jordan elimination, `None` when singular.
pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut m: Matrix = a.iter().zip(identity(n)).map(|(r, e)| r.iter().cloned().chain(e).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(p, c);
        let pv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &pv;
        }
        let pivot = m[c].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 1);
        for v in &k {
            for row in &a {
                let s: Rational = row.iter().zip(v).map(|(x, y)| x * y).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn solve_with_free_variables_zero() {
        // x0 + x1 = 3, x2 = 2 ; x1 free
        let cols = vec![vec![(0, int(1))], vec![(0, int(1))], vec![(1, int(1))]];
        let x = solve_columns(&cols, &[(0, int(3)), (1, int(2))]).unwrap();
        assert_eq!(x, vec![int(3), int(0), int(2)]);
        assert!(solve_columns(&cols[..1], &[(1, int(1))]).is_none());
    }

    #[test]
    fn char_poly_and_det() {
        let a = m(&[&[2, 1], &[0, 3]]);
        assert_eq!(char_poly(&a), vec![int(6), int(-5), int(1)]);
        assert_eq!(det(&a), int(6));
        let n = m(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert!(is_nilpotent(&n));
        assert_eq!(char_poly(&n), vec![int(0), int(0), int(0), int(1)]);
        let b = vec![vec![rat(1, 2), int(1)], vec![int(1), int(2)]];
        assert_eq!(det(&b), int(0));
    }

    /// Random sparse systems: the echelon kernel must be annihilated by every
    /// row and have dimension ncols - rank (checked against dense elimination).
    #[test]
    fn random_kernels() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let (r, c) = (rng.gen_range(1..6), rng.gen_range(1..7));
            let a: Matrix = (0..r)
                .map(|_| (0..c).map(|_| int(if rng.gen_bool(0.5) { rng.gen_range(-3..4) } else { 0 })).collect())
                .collect();
            let k = kernel(&a, c);
            assert_eq!(k.len() + rank(&a), c);
            for v in &k {
                for row in &a {
                    let s: Rational = row.iter().zip(v).map(|(x, y)| x * y).sum();
                    assert!(s.is_zero());
                }
            }
        }
    }
}
