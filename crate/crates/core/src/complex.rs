//! Complexes of split bundles on P^3 and their hypercohomology.
//!
//! Cohomology of O(a) lives in degrees 0 and 3 only, with monomial bases of
//! R_a and of the dual of R_{-4-a}. The first page of the hypercohomology
//! spectral sequence therefore has two nonzero rows whose differentials are
//! multiplication matrices; for complexes with at most four terms it
//! degenerates at the second page.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::monomial::{dim_degree, monomials_of_degree};
use crate::poly::{DenseMatrix, MatrixOfForms, Poly, PrimeField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    EsF,
    EsIw,
    EulerReplaced,
}

/// A bounded complex of direct sums of line bundles; `terms[k]` sits in
/// cohomological position `start + k`, and `maps[k]: terms[k] -> terms[k+1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleComplex {
    pub start: i64,
    pub terms: Vec<Vec<i64>>,
    pub maps: Vec<MatrixOfForms>,
    pub provenance: Provenance,
}

/// Hypercohomology dimensions; `dims[k]` is H^{start+k}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypercohomology {
    pub start: i64,
    pub dims: Vec<u64>,
}

impl Hypercohomology {
    pub fn get(&self, j: i64) -> u64 {
        if j < self.start {
            return 0;
        }
        self.dims.get((j - self.start) as usize).copied().unwrap_or(0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, &d)| if (self.start + k as i64).rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

/// chi(O(a)) as the Hilbert polynomial C(a+3, 3).
pub fn chi_line(a: i64) -> i64 {
    (a + 1) * (a + 2) * (a + 3) / 6
}

impl BundleComplex {
    pub fn new(start: i64, terms: Vec<Vec<i64>>, maps: Vec<MatrixOfForms>, provenance: Provenance) -> Result<Self> {
        if terms.is_empty() || maps.len() + 1 != terms.len() {
            return Err(Error::Dimension(format!("{} terms with {} maps", terms.len(), maps.len())));
        }
        for (k, m) in maps.iter().enumerate() {
            if m.col_twists() != terms[k].as_slice() || m.row_twists() != terms[k + 1].as_slice() {
                return Err(Error::Dimension(format!("map {k} does not match its terms")));
            }
        }
        for k in 1..maps.len() {
            if !maps[k].compose(&maps[k - 1])?.is_zero() {
                return Err(Error::Invalid(format!("maps {} and {k} do not compose to zero", k - 1)));
            }
        }
        Ok(BundleComplex { start, terms, maps, provenance })
    }

    pub fn single(field: PrimeField, twists: Vec<i64>) -> Self {
        let _ = field;
        BundleComplex { start: 0, terms: vec![twists], maps: vec![], provenance: Provenance::EulerReplaced }
    }

    pub fn end(&self) -> i64 {
        self.start + self.terms.len() as i64 - 1
    }

    pub fn twist(&self, n: i64) -> BundleComplex {
        let f = |v: &Vec<i64>| v.iter().map(|t| t + n).collect::<Vec<_>>();
        BundleComplex {
            start: self.start,
            terms: self.terms.iter().map(f).collect(),
            maps: self
                .maps
                .iter()
                .map(|m| {
                    MatrixOfForms::new(
                        m.field(),
                        m.row_twists().iter().map(|t| t + n).collect(),
                        m.col_twists().iter().map(|t| t + n).collect(),
                        m.entries().to_vec(),
                    )
                    .expect("twisting preserves degrees")
                })
                .collect(),
            provenance: self.provenance,
        }
    }

    /// Euler characteristic of the complex twisted by n, from the terms alone.
    pub fn euler_characteristic(&self, n: i64) -> i64 {
        self.terms
            .iter()
            .enumerate()
            .map(|(k, t)| {
                let s: i64 = t.iter().map(|a| chi_line(a + n)).sum();
                if (self.start + k as i64).rem_euclid(2) == 0 {
                    s
                } else {
                    -s
                }
            })
            .sum()
    }

    /// Hypercohomology of the complex twisted by n.
    pub fn hypercohomology(&self, n: i64) -> Result<Hypercohomology> {
        let len = self.terms.len();
        let e1_0: Vec<u64> = self.terms.iter().map(|t| t.iter().map(|a| dim_degree(a + n) as u64).sum()).collect();
        let e1_3: Vec<u64> = self.terms.iter().map(|t| t.iter().map(|a| dim_degree(-4 - n - a) as u64).sum()).collect();
        let mut r0 = vec![0u64; len.saturating_sub(1)];
        let mut r3 = vec![0u64; len.saturating_sub(1)];
        for (k, m) in self.maps.iter().enumerate() {
            if e1_0[k] > 0 && e1_0[k + 1] > 0 {
                r0[k] = sections_matrix(m, n).rank(m.field()) as u64;
            }
            if e1_3[k] > 0 && e1_3[k + 1] > 0 {
                r3[k] = top_matrix(m, n).rank(m.field()) as u64;
            }
        }
        let e2 = |e1: &[u64], r: &[u64], k: usize| -> u64 {
            let out = if k + 1 < len { r[k] } else { 0 };
            let inc = if k > 0 { r[k - 1] } else { 0 };
            e1[k] - out - inc
        };
        let e2_0: Vec<u64> = (0..len).map(|k| e2(&e1_0, &r0, k)).collect();
        let e2_3: Vec<u64> = (0..len).map(|k| e2(&e1_3, &r3, k)).collect();
        // d_4 : E^{p,3} -> E^{p+4,0} is the only possible higher differential
        for p in 0..len {
            if p + 4 < len && e2_3[p] > 0 && e2_0[p + 4] > 0 {
                return Err(Error::Degeneration(format!("complex of length {len} admits a nonzero d_4")));
            }
        }
        let start = self.start;
        let mut dims = vec![0u64; len + 3];
        for k in 0..len {
            dims[k] += e2_0[k];
            dims[k + 3] += e2_3[k];
        }
        Ok(Hypercohomology { start, dims })
    }
}

/// Matrix of H^0 of a map of split bundles twisted by n.
pub fn sections_matrix(m: &MatrixOfForms, n: i64) -> DenseMatrix {
    let src: Vec<i64> = m.col_twists().iter().map(|a| a + n).collect();
    let dst: Vec<i64> = m.row_twists().iter().map(|a| a + n).collect();
    multiplication_matrix(m, &src, &dst, false)
}

/// A matrix whose rank equals that of H^3 of the map twisted by n: the
/// transpose action R_{-4-n-t_i} -> R_{-4-n-s_j} of the same entries.
pub fn top_matrix(m: &MatrixOfForms, n: i64) -> DenseMatrix {
    let src: Vec<i64> = m.row_twists().iter().map(|a| -4 - n - a).collect();
    let dst: Vec<i64> = m.col_twists().iter().map(|a| -4 - n - a).collect();
    multiplication_matrix(m, &src, &dst, true)
}

fn multiplication_matrix(m: &MatrixOfForms, src: &[i64], dst: &[i64], transposed: bool) -> DenseMatrix {
    let f = m.field();
    let offsets = |degs: &[i64]| {
        let mut o = Vec::with_capacity(degs.len() + 1);
        let mut acc = 0usize;
        o.push(0);
        for &d in degs {
            acc += dim_degree(d);
            o.push(acc);
        }
        o
    };
    let so = offsets(src);
    let dof = offsets(dst);
    let mut out = DenseMatrix::zeros(*dof.last().unwrap(), *so.last().unwrap());
    for (b, &sd) in src.iter().enumerate() {
        if sd < 0 {
            continue;
        }
        let mons = monomials_of_degree(sd as u32);
        for (a, &dd) in dst.iter().enumerate() {
            if dd < 0 {
                continue;
            }
            let e: &Poly = if transposed { m.entry(b, a) } else { m.entry(a, b) };
            if e.is_zero() {
                continue;
            }
            for (c, mon) in mons.iter().enumerate() {
                for (t, coef) in e.terms() {
                    let r = dof[a] + t.mul(mon).index();
                    let col = so[b] + c;
                    let v = f.add(out.get(r, col), *coef);
                    out.set(r, col, v);
                }
            }
        }
    }
    out
}

/// Total complex of the tensor product, with the Koszul sign on the second factor.
pub fn tensor(a: &BundleComplex, b: &BundleComplex, field: PrimeField) -> Result<BundleComplex> {
    let start = a.start + b.start;
    let len = a.terms.len() + b.terms.len() - 1;
    // index of summand (i, j, u, v): position i+j, blocks ordered by i then u then v
    let mut layout: Vec<Vec<(usize, usize, usize, usize)>> = vec![Vec::new(); len];
    let mut terms: Vec<Vec<i64>> = vec![Vec::new(); len];
    for i in 0..a.terms.len() {
        for j in 0..b.terms.len() {
            for (u, ta) in a.terms[i].iter().enumerate() {
                for (v, tb) in b.terms[j].iter().enumerate() {
                    layout[i + j].push((i, j, u, v));
                    terms[i + j].push(ta + tb);
                }
            }
        }
    }
    let mut maps = Vec::with_capacity(len - 1);
    for p in 0..len - 1 {
        let src = &layout[p];
        let dst = &layout[p + 1];
        let mut entries = vec![vec![Poly::zero(field, 0); src.len()]; dst.len()];
        for (c, &(i, j, u, v)) in src.iter().enumerate() {
            for (r, &(i2, j2, u2, v2)) in dst.iter().enumerate() {
                if i2 == i + 1 && j2 == j && v2 == v {
                    entries[r][c] = a.maps[i].entry(u2, u).clone();
                } else if i2 == i && j2 == j + 1 && u2 == u {
                    let e = b.maps[j].entry(v2, v);
                    let sign_neg = (a.start + i as i64).rem_euclid(2) == 1;
                    entries[r][c] = if sign_neg { e.neg() } else { e.clone() };
                }
            }
        }
        maps.push(MatrixOfForms::new(field, terms[p + 1].clone(), terms[p].clone(), entries)?);
    }
    BundleComplex::new(start, terms, maps, Provenance::EulerReplaced)
}
