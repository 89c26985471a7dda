//! N-defects of finite point sets.
//!
//! d_N(w) = h^0(I_w(N)) - C(N+3, 3) + |w|, the failure of w to impose
//! independent conditions on forms of degree N. Two routes are provided: the
//! Hilbert function of a saturated ideal, and the rank of the evaluation
//! matrix of explicit rational points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::poly::monomial::{binom3, monomials_of_degree};
use crate::poly::{DenseMatrix, Poly, PrimeField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DefectMethod {
    Hilbert,
    Evaluation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectReport {
    #[serde(rename = "N")]
    pub n: u32,
    pub point_count: u64,
    /// dim of the degree-N part of the ideal of the points.
    pub h0_in: u64,
    pub defect: u64,
    pub method: DefectMethod,
}

/// N = 3 deg(B) / 2 - 4 for a nodal surface of even degree.
pub fn clemens_n(deg_b: u32) -> Result<u32> {
    if !deg_b.is_multiple_of(2) || deg_b < 2 {
        return Err(Error::OddDegree(deg_b));
    }
    (3 * deg_b / 2).checked_sub(4).ok_or(Error::OddDegree(deg_b))
}

/// Defect from the Hilbert function of a saturated zero-dimensional ideal.
pub fn defect_hilbert(ideal: &Ideal, n: u32) -> Result<DefectReport> {
    let count = ideal.degree()?;
    let hf = ideal.hilbert_function(n as i64) as u64;
    let h0_in = binom3(n as usize) as u64 - hf;
    Ok(DefectReport { n, point_count: count, h0_in, defect: count - hf, method: DefectMethod::Hilbert })
}

/// Projective points normalised so that the last nonzero coordinate is 1.
fn normalise(field: PrimeField, points: &[[u64; 4]]) -> Result<Vec<[u64; 4]>> {
    let mut out: Vec<[u64; 4]> = Vec::with_capacity(points.len());
    for p in points {
        let p = p.map(|c| c % field.p());
        let Some(k) = (0..4).rev().find(|&i| p[i] != 0) else {
            return Err(Error::Invalid("the zero vector is not a point".into()));
        };
        let inv = field.inv(p[k]);
        out.push(p.map(|c| field.mul(c, inv)));
    }
    let mut sorted = out.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != out.len() {
        return Err(Error::RepeatedPoint);
    }
    Ok(out)
}

/// Rows: points; columns: monomials of degree d.
pub fn evaluation_matrix(field: PrimeField, points: &[[u64; 4]], d: u32) -> DenseMatrix {
    let mons = monomials_of_degree(d);
    let mut m = DenseMatrix::zeros(points.len(), mons.len());
    for (i, p) in points.iter().enumerate() {
        for (j, mon) in mons.iter().enumerate() {
            let v = (0..4).fold(1, |acc, k| field.mul(acc, field.pow(p[k], mon.0[k] as u64)));
            m.set(i, j, v);
        }
    }
    m
}

/// Defect as the dimension of the kernel of (evaluation at the points)^T,
/// i.e. |w| minus the rank of the evaluation matrix.
pub fn defect_eval(field: PrimeField, points: &[[u64; 4]], n: u32) -> Result<DefectReport> {
    let pts = normalise(field, points)?;
    let rank = evaluation_matrix(field, &pts, n).rank(field) as u64;
    let count = pts.len() as u64;
    Ok(DefectReport {
        n,
        point_count: count,
        h0_in: binom3(n as usize) as u64 - rank,
        defect: count - rank,
        method: DefectMethod::Evaluation,
    })
}

/// The (saturated, radical) ideal of a finite set of rational points. Forms
/// of every degree up to one past the first degree where the points impose
/// independent conditions generate it.
pub fn points_ideal(field: PrimeField, points: &[[u64; 4]]) -> Result<Ideal> {
    let pts = normalise(field, points)?;
    if pts.is_empty() {
        return Ideal::new(field, vec![Poly::one(field)]);
    }
    let mut gens = Vec::new();
    let mut d = 1u32;
    let mut separated = false;
    loop {
        let ev = evaluation_matrix(field, &pts, d);
        for v in ev.nullspace(field) {
            gens.push(Poly::from_dense(field, d, &v));
        }
        if separated {
            break;
        }
        separated = ev.rank(field) == pts.len();
        d += 1;
    }
    Ideal::new(field, gens)
}

/// d_N(sub) <= d_N(sup) when V(sub) is contained in V(sup).
pub fn defect_monotonicity_check(sub: &Ideal, sup: &Ideal, n: u32) -> Result<bool> {
    if !sup.is_subset_of(sub) {
        return Err(Error::Hypothesis("V(sub) is not contained in V(sup)".into()));
    }
    Ok(defect_hilbert(sub, n)?.defect <= defect_hilbert(sup, n)?.defect)
}
