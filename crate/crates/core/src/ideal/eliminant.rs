//! Reducedness of zero-dimensional schemes via a generic eliminant.
//!
//! After a random change of coordinates, multiplication by x1/x0 acts on the
//! degree-d part of R/I once the Hilbert function has stabilised. Its
//! characteristic polynomial has one root per point, with multiplicity equal
//! to the local length, so the scheme is reduced iff it is squarefree.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::groebner::NormalForm;
use super::{random_invertible, Ideal};
use crate::error::{Error, Result};
use crate::poly::monomial::binom3;
use crate::poly::univariate;
use crate::poly::{DenseMatrix, Monomial};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminantReport {
    /// Characteristic polynomial of x1/x0, lowest degree first.
    pub eliminant: Vec<u64>,
    /// Degree of the scheme.
    pub degree: u64,
    /// Number of distinct roots of the eliminant.
    pub distinct_roots: u64,
    pub squarefree: bool,
    pub attempts: u32,
}

impl EliminantReport {
    pub fn reduced(&self) -> bool {
        self.squarefree
    }
}

fn multiplication_matrices(ideal: &Ideal) -> Option<(DenseMatrix, DenseMatrix)> {
    let deg = ideal.degree().ok()? as i64;
    let start = (0..=ideal.hilbert_series().regularity_index() + 1).find(|&n| ideal.hilbert_function(n) == deg)?;
    let d = start as u32;
    let src = ideal.standard_monomials(d);
    let dst = ideal.standard_monomials(d + 1);
    if src.len() != dst.len() {
        return None;
    }
    let mut pos = vec![usize::MAX; binom3(d as usize + 1)];
    for (k, m) in dst.iter().enumerate() {
        pos[m.index()] = k;
    }
    let n = src.len();
    let mut nf = NormalForm::new(ideal.field(), ideal.groebner_basis());
    let mut mats = [DenseMatrix::zeros(n, n), DenseMatrix::zeros(n, n)];
    for (var, mat) in mats.iter_mut().enumerate() {
        for (col, s) in src.iter().enumerate() {
            let m = s.mul(&Monomial::var(var));
            let mut row = vec![0u64; binom3(d as usize + 1)];
            row[m.index()] = 1;
            nf.reduce_dense(d + 1, &mut row);
            for (idx, &v) in row.iter().enumerate() {
                if v != 0 {
                    mat.set(pos[idx], col, v);
                }
            }
        }
    }
    let [a, b] = mats;
    Some((a, b))
}

/// Tests whether a saturated zero-dimensional ideal defines a reduced scheme.
/// Unlucky projections are retried with fresh coordinates up to `max_attempts`.
pub fn squarefree_eliminant<R: Rng + ?Sized>(ideal: &Ideal, rng: &mut R, max_attempts: u32) -> Result<EliminantReport> {
    let f = ideal.field();
    let pd = ideal.projective_dimension();
    if pd > 0 {
        return Err(Error::NotZeroDimensional(pd));
    }
    if pd < 0 {
        return Ok(EliminantReport { eliminant: vec![1], degree: 0, distinct_roots: 0, squarefree: true, attempts: 0 });
    }
    let degree = ideal.degree()?;
    let mut best: Option<EliminantReport> = None;
    for attempt in 1..=max_attempts.max(1) {
        let a = random_invertible(f, rng);
        let moved = ideal.transform(&a)?;
        let Some((m0, m1)) = multiplication_matrices(&moved) else {
            log::debug!("eliminant attempt {attempt}: Hilbert function did not stabilise");
            continue;
        };
        let Some(inv) = m0.inverse(f) else {
            log::debug!("eliminant attempt {attempt}: x0 is a zero divisor");
            continue;
        };
        let t = inv.mul(&m1, f)?;
        let cp = t.charpoly(f)?;
        let distinct = univariate::radical_degree(f, &cp) as u64;
        let report = EliminantReport {
            squarefree: distinct == degree,
            eliminant: cp,
            degree,
            distinct_roots: distinct,
            attempts: attempt,
        };
        if report.squarefree {
            return Ok(report);
        }
        if best.as_ref().is_none_or(|b| b.distinct_roots < distinct) {
            best = Some(report);
        }
    }
    best.ok_or_else(|| Error::RetriesExhausted(max_attempts, "no usable coordinate system".into()))
        .map(|mut b| {
            b.attempts = max_attempts;
            b
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Poly, PrimeField};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fat_point_is_not_reduced() {
        let f = PrimeField::new(32003).unwrap();
        let x = |i| Poly::var(f, i);
        let i = Ideal::new(f, vec![x(1).pow(2), x(2), x(3)]).unwrap();
        assert_eq!(i.degree().unwrap(), 2);
        let r = squarefree_eliminant(&i, &mut ChaCha8Rng::seed_from_u64(3), 4).unwrap();
        assert!(!r.reduced());
        assert_eq!(r.distinct_roots, 1);
    }

    #[test]
    fn complete_intersection_points_are_reduced() {
        let f = PrimeField::new(32003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let gens = vec![Poly::random(f, 2, &mut rng), Poly::random(f, 2, &mut rng), Poly::random(f, 3, &mut rng)];
        let i = Ideal::new(f, gens).unwrap();
        assert_eq!(i.degree().unwrap(), 12);
        let r = squarefree_eliminant(&i, &mut rng, 4).unwrap();
        assert!(r.reduced());
        assert_eq!(r.eliminant.len(), 13);
    }
}
