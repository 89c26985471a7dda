//! Matrices whose entries are homogeneous forms, with graded row and column twists.

use serde::{Deserialize, Serialize};

use super::field::PrimeField;
use super::form::Poly;
use crate::error::{Error, Result};

/// Entry (i, j) has degree `row_twists[i] - col_twists[j]`; it describes a
/// map from the sum of O(col_twists) to the sum of O(row_twists).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixOfForms {
    field: PrimeField,
    row_twists: Vec<i64>,
    col_twists: Vec<i64>,
    entries: Vec<Vec<Poly>>,
}

impl MatrixOfForms {
    pub fn new(field: PrimeField, row_twists: Vec<i64>, col_twists: Vec<i64>, entries: Vec<Vec<Poly>>) -> Result<Self> {
        if entries.len() != row_twists.len() {
            return Err(Error::Dimension(format!("{} rows for {} row twists", entries.len(), row_twists.len())));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != col_twists.len() {
                return Err(Error::Dimension(format!("row {i} has {} entries", row.len())));
            }
            for (j, e) in row.iter().enumerate() {
                if e.field() != field {
                    return Err(Error::FieldMismatch(e.field().p(), field.p()));
                }
                let d = row_twists[i] - col_twists[j];
                if e.is_zero() {
                    continue;
                }
                if d < 0 || e.degree() as i64 != d {
                    return Err(Error::DegreeMismatch(format!(
                        "entry ({i},{j}) has degree {} but twists require {d}",
                        e.degree()
                    )));
                }
            }
        }
        let entries = entries
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(j, e)| {
                        let d = row_twists[i] - col_twists[j];
                        if e.is_zero() && d >= 0 {
                            Poly::zero(field, d as u32)
                        } else {
                            e
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(MatrixOfForms { field, row_twists, col_twists, entries })
    }

    pub fn from_fn(
        field: PrimeField,
        row_twists: Vec<i64>,
        col_twists: Vec<i64>,
        mut entry: impl FnMut(usize, usize, i64) -> Poly,
    ) -> Result<Self> {
        let entries = (0..row_twists.len())
            .map(|i| (0..col_twists.len()).map(|j| entry(i, j, row_twists[i] - col_twists[j])).collect())
            .collect();
        Self::new(field, row_twists, col_twists, entries)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn nrows(&self) -> usize {
        self.row_twists.len()
    }
    pub fn ncols(&self) -> usize {
        self.col_twists.len()
    }
    pub fn row_twists(&self) -> &[i64] {
        &self.row_twists
    }
    pub fn col_twists(&self) -> &[i64] {
        &self.col_twists
    }
    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i][j]
    }
    pub fn entries(&self) -> &[Vec<Poly>] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        self.nrows() == self.ncols()
            && (0..self.nrows()).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.iter().all(|e| e.is_zero()))
    }

    /// Composition self * other, defined when other's rows match self's columns.
    pub fn compose(&self, other: &MatrixOfForms) -> Result<MatrixOfForms> {
        if self.col_twists != other.row_twists {
            return Err(Error::Dimension("twists do not match for composition".into()));
        }
        let f = self.field;
        let mut entries = Vec::with_capacity(self.nrows());
        for i in 0..self.nrows() {
            let mut row = Vec::with_capacity(other.ncols());
            for j in 0..other.ncols() {
                let d = self.row_twists[i] - other.col_twists[j];
                let mut acc = Poly::zero(f, d.max(0) as u32);
                for k in 0..self.ncols() {
                    let (a, b) = (&self.entries[i][k], &other.entries[k][j]);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b)?)?;
                }
                row.push(acc);
            }
            entries.push(row);
        }
        MatrixOfForms::new(f, self.row_twists.clone(), other.col_twists.clone(), entries)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> MatrixOfForms {
        MatrixOfForms {
            field: self.field,
            row_twists: rows.iter().map(|&i| self.row_twists[i]).collect(),
            col_twists: cols.iter().map(|&j| self.col_twists[j]).collect(),
            entries: rows.iter().map(|&i| cols.iter().map(|&j| self.entries[i][j].clone()).collect()).collect(),
        }
    }

    fn det_degree(&self) -> i64 {
        self.row_twists.iter().sum::<i64>() - self.col_twists.iter().sum::<i64>()
    }

    /// Determinant by fraction-free (Bareiss) elimination with exact division.
    pub fn determinant(&self) -> Result<Poly> {
        let n = self.nrows();
        if n != self.ncols() {
            return Err(Error::NotSquare(n, self.ncols()));
        }
        let f = self.field;
        let dd = self.det_degree();
        if n == 0 {
            return Ok(Poly::one(f));
        }
        if dd < 0 {
            return Ok(Poly::zero(f, 0));
        }
        let mut a: Vec<Vec<Poly>> = self.entries.clone();
        let mut prev = Poly::one(f);
        let mut sign_neg = false;
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                    return Ok(Poly::zero(f, dd as u32));
                };
                a.swap(k, r);
                sign_neg = !sign_neg;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = a[k][k].mul(&a[i][j])?.sub(&a[i][k].mul(&a[k][j])?)?;
                    a[i][j] = t.div_exact(&prev)?;
                }
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        let det = if det.is_zero() { Poly::zero(f, dd as u32) } else { det };
        Ok(if sign_neg { det.neg() } else { det })
    }

    /// Cofactor expansion along the first row; exponential, used as a reference.
    pub fn determinant_laplace(&self) -> Result<Poly> {
        let n = self.nrows();
        if n != self.ncols() {
            return Err(Error::NotSquare(n, self.ncols()));
        }
        let f = self.field;
        if n == 0 {
            return Ok(Poly::one(f));
        }
        let dd = self.det_degree();
        if dd < 0 {
            return Ok(Poly::zero(f, 0));
        }
        let mut acc = Poly::zero(f, dd as u32);
        let rows: Vec<usize> = (1..n).collect();
        for j in 0..n {
            if self.entries[0][j].is_zero() {
                continue;
            }
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let minor = self.submatrix(&rows, &cols).determinant_laplace()?;
            let term = self.entries[0][j].mul(&minor)?;
            acc = if j % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
        }
        Ok(acc)
    }

    /// All k x k minors, in lexicographic order of (rows, cols); zeros dropped.
    pub fn minors(&self, k: usize) -> Result<Vec<Poly>> {
        let mut out = Vec::new();
        for rows in combinations(self.nrows(), k) {
            for cols in combinations(self.ncols(), k) {
                let m = self.submatrix(&rows, &cols).determinant()?;
                if !m.is_zero() {
                    out.push(m);
                }
            }
        }
        Ok(out)
    }

    /// Minors of a symmetric matrix, skipping transposed duplicates.
    pub fn symmetric_minors(&self, k: usize) -> Result<Vec<Poly>> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let mut out = Vec::new();
        let combos = combinations(self.nrows(), k);
        for (a, rows) in combos.iter().enumerate() {
            for cols in &combos[a..] {
                let m = self.submatrix(rows, cols).determinant()?;
                if !m.is_zero() {
                    out.push(m);
                }
            }
        }
        Ok(out)
    }

    pub fn eval(&self, pt: &[u64; 4]) -> super::linalg::DenseMatrix {
        let mut m = super::linalg::DenseMatrix::zeros(self.nrows(), self.ncols());
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                m.set(i, j, self.entries[i][j].eval(pt));
            }
        }
        m
    }
}

/// k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(4, 4).len(), 1);
        assert_eq!(combinations(4, 0).len(), 1);
        assert_eq!(combinations(6, 3)[19], vec![3, 4, 5]);
    }

    #[test]
    fn bareiss_matches_laplace() {
        let f = PrimeField::new(32003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rt = vec![-1, -2, -2, -3];
        let ct = vec![-5, -4, -4, -3];
        for _ in 0..3 {
            let m = MatrixOfForms::from_fn(f, rt.clone(), ct.clone(), |_, _, d| Poly::random(f, d as u32, &mut rng)).unwrap();
            assert_eq!(m.determinant().unwrap(), m.determinant_laplace().unwrap());
        }
        // zero pivot forces a row swap
        let x = |i| Poly::var(f, i);
        let m = MatrixOfForms::new(f, vec![1, 1], vec![0, 0], vec![vec![Poly::zero(f, 1), x(0)], vec![x(1), x(2)]]).unwrap();
        assert_eq!(m.determinant().unwrap(), m.determinant_laplace().unwrap());
    }
}
