//! Dense linear algebra over F_p.

use super::field::PrimeField;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            m.row_mut(i).copy_from_slice(row);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &DenseMatrix, f: PrimeField) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u64], f: PrimeField) -> Vec<u64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(0, |s, (a, b)| f.add(s, f.mul(*a, *b))))
            .collect()
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self, f: PrimeField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c));
            for v in self.row_mut(r)[c..].iter_mut() {
                *v = f.mul(*v, inv);
            }
            let pivot_row: Vec<u64> = self.row(r)[c..].to_vec();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let a = self.get(i, c);
                if a == 0 {
                    continue;
                }
                let row = self.row_mut(i);
                for (k, &pv) in pivot_row.iter().enumerate() {
                    if pv != 0 {
                        row[c + k] = f.sub_mul(row[c + k], a, pv);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: PrimeField) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // row echelon without back substitution
        let mut m = self.clone();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in c..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c));
            for i in r + 1..m.rows {
                let a = m.get(i, c);
                if a == 0 {
                    continue;
                }
                let a = f.mul(a, inv);
                for j in c..m.cols {
                    let pv = m.data[r * m.cols + j];
                    if pv != 0 {
                        let idx = i * m.cols + j;
                        m.data[idx] = f.sub_mul(m.data[idx], a, pv);
                    }
                }
            }
            r += 1;
        }
        r
    }

    /// Basis of the right kernel {v : A v = 0}.
    pub fn nullspace(&self, f: PrimeField) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    pub fn determinant(&self, f: PrimeField) -> Result<u64> {
        if self.rows != self.cols {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1u64;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| m.get(i, c) != 0) else {
                return Ok(0);
            };
            if pr != c {
                for j in 0..n {
                    m.data.swap(pr * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let pv = m.get(c, c);
            det = f.mul(det, pv);
            let inv = f.inv(pv);
            for i in c + 1..n {
                let a = f.mul(m.get(i, c), inv);
                if a == 0 {
                    continue;
                }
                for j in c..n {
                    let v = f.sub_mul(m.get(i, j), a, m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self, f: PrimeField) -> Option<DenseMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            aug.row_mut(i)[..n].copy_from_slice(self.row(i));
            aug.set(i, n + i, 1);
        }
        let piv = aug.rref(f);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            out.row_mut(i).copy_from_slice(&aug.row(i)[n..]);
        }
        Some(out)
    }

    /// Characteristic polynomial det(tI - A), low degree first, via Hessenberg reduction.
    pub fn charpoly(&self, f: PrimeField) -> Result<Vec<u64>> {
        if self.rows != self.cols {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut h = self.clone();
        // similarity transforms to upper Hessenberg form
        for c in 0..n.saturating_sub(2) {
            let Some(pr) = (c + 1..n).find(|&i| h.get(i, c) != 0) else {
                continue;
            };
            if pr != c + 1 {
                for j in 0..n {
                    h.data.swap(pr * n + j, (c + 1) * n + j);
                }
                for i in 0..n {
                    h.data.swap(i * n + pr, i * n + c + 1);
                }
            }
            let inv = f.inv(h.get(c + 1, c));
            for i in c + 2..n {
                let u = f.mul(h.get(i, c), inv);
                if u == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = f.sub_mul(h.get(i, j), u, h.get(c + 1, j));
                    h.set(i, j, v);
                }
                for k in 0..n {
                    let v = f.add(h.get(k, c + 1), f.mul(u, h.get(k, i)));
                    h.set(k, c + 1, v);
                }
            }
        }
        // p_k(t) = charpoly of leading k x k block
        let mut ps: Vec<Vec<u64>> = vec![vec![1]];
        for k in 1..=n {
            let hk = h.get(k - 1, k - 1);
            let mut next = vec![0u64; k + 1];
            for (d, &c) in ps[k - 1].iter().enumerate() {
                next[d + 1] = f.add(next[d + 1], c);
                next[d] = f.sub_mul(next[d], hk, c);
            }
            let mut prod = 1u64;
            for i in (1..k).rev() {
                prod = f.mul(prod, h.get(i, i - 1));
                if prod == 0 {
                    break;
                }
                let coef = f.mul(prod, h.get(i - 1, k - 1));
                for (d, &c) in ps[i - 1].iter().enumerate() {
                    next[d] = f.sub_mul(next[d], coef, c);
                }
            }
            ps.push(next);
        }
        Ok(ps.pop().unwrap())
    }
}
