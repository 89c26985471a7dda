//! Cohomology of the sheaf F = coker(Phi) and of I_w(5), computed from
//! explicit complexes of split bundles built out of Phi.

use serde::{Deserialize, Serialize};

use crate::complex::{BundleComplex, Provenance};
use crate::determinantal::SymmetricSection;
use crate::error::{Error, Result};
use crate::poly::{DenseMatrix, MatrixOfForms, Poly, PrimeField};

/// The presentation of F as a complex with F in position 0.
///
/// Split E: [E^dual(-6-delta) -> E] in positions -1, 0. With Omega blocks the
/// Euler-lifted matrix is flanked by the variable column and row of each
/// block, giving a complex in positions -2..1.
pub fn build_es_f(phi: &SymmetricSection) -> Result<BundleComplex> {
    let f = phi.field();
    let m = &phi.realized;
    if phi.omega_rows.is_empty() {
        return BundleComplex::new(-1, vec![m.col_twists().to_vec(), m.row_twists().to_vec()], vec![m.clone()], Provenance::EsF);
    }
    let blocks = &phi.omega_rows;
    let n = m.nrows();
    // block alpha: rows r..r+4 of twist t-1, columns of twist -t-5-delta
    let low: Vec<i64> = blocks.iter().map(|&r| m.col_twists()[r] - 1).collect();
    let high: Vec<i64> = blocks.iter().map(|&r| m.row_twists()[r] + 1).collect();
    let col = MatrixOfForms::from_fn(f, m.col_twists().to_vec(), low.clone(), |i, a, d| {
        let r = blocks[a];
        if (r..r + 4).contains(&i) {
            Poly::var(f, i - r)
        } else {
            Poly::zero(f, d.max(0) as u32)
        }
    })?;
    let row = MatrixOfForms::from_fn(f, high.clone(), m.row_twists().to_vec(), |a, j, d| {
        let r = blocks[a];
        if (r..r + 4).contains(&j) {
            Poly::var(f, j - r)
        } else {
            Poly::zero(f, d.max(0) as u32)
        }
    })?;
    debug_assert_eq!(col.nrows(), n);
    BundleComplex::new(-2, vec![low, m.col_twists().to_vec(), m.row_twists().to_vec(), high], vec![col, m.clone(), row], Provenance::EsF)
}

/// (h^0, h^1, h^2) of F(n).
pub fn sheaf_f_cohomology(phi: &SymmetricSection, n: i64) -> Result<[u64; 3]> {
    let h = build_es_f(phi)?.hypercohomology(n)?;
    check_support(&h, 0, 2)?;
    Ok([h.get(0), h.get(1), h.get(2)])
}

fn check_support(h: &crate::complex::Hypercohomology, lo: i64, hi: i64) -> Result<()> {
    for j in h.start..h.start + h.dims.len() as i64 {
        if (j < lo || j > hi) && h.get(j) != 0 {
            return Err(Error::Degeneration(format!("hypercohomology in degree {j}; the presentation is not exact")));
        }
    }
    Ok(())
}

/// Index of e_a e_b (a <= b) among the pairs of 0..r.
fn sym_index(r: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    a * r - a * (a + 1) / 2 + b
}

/// The resolution [L^2 E^dual(-7-delta) -psi-> sl(E)(-1) -phi-> S^2 E(5+delta)]
/// of I_w(5), in positions -2..0, for split E.
///
/// phi(X) = X Phi + Phi X^T and psi(S) = Phi S, where sl(E) has the basis of
/// off-diagonal units E_ij followed by E_kk - E_rr.
pub fn build_es_iw(phi: &SymmetricSection) -> Result<BundleComplex> {
    if !phi.omega_rows.is_empty() {
        return Err(Error::NonSplitTerm("the I_w(5) resolution needs a split bundle".into()));
    }
    let f = phi.field();
    let m = &phi.realized;
    let s: Vec<i64> = m.row_twists().to_vec();
    let r = s.len();
    let delta = -(m.col_twists()[0] + s[0]) - 6;
    let pairs_le: Vec<(usize, usize)> = (0..r).flat_map(|a| (a..r).map(move |b| (a, b))).collect();
    let pairs_lt: Vec<(usize, usize)> = (0..r).flat_map(|a| (a + 1..r).map(move |b| (a, b))).collect();
    let off: Vec<(usize, usize)> = (0..r).flat_map(|a| (0..r).filter(move |&b| b != a).map(move |b| (a, b))).collect();

    let t_sym: Vec<i64> = pairs_le.iter().map(|&(a, b)| s[a] + s[b] + 5 + delta).collect();
    let mut t_sl: Vec<i64> = off.iter().map(|&(a, b)| s[a] - s[b] - 1).collect();
    t_sl.extend(std::iter::repeat_n(-1, r - 1));
    let t_wedge: Vec<i64> = pairs_lt.iter().map(|&(a, b)| -s[a] - s[b] - 7 - delta).collect();

    // sl coordinates of an r x r traceless matrix of forms
    let sl_index = |a: usize, b: usize| off.iter().position(|&p| p == (a, b));
    let zero = |d: i64| Poly::zero(f, d.max(0) as u32);
    let p = |a: usize, b: usize| m.entry(a, b);

    // phi: column for each sl basis element
    let mut phi_cols: Vec<Vec<Poly>> = Vec::new();
    let image_of_unit = |i: usize, j: usize| -> Vec<(usize, Poly)> {
        // E_ij Phi + Phi E_ji, entry (a, b) = [a = i] Phi_jb + [b = i] Phi_aj
        let mut out = Vec::new();
        for (k, &(a, b)) in pairs_le.iter().enumerate() {
            let mut e: Option<Poly> = None;
            if a == i {
                e = Some(p(j, b).clone());
            }
            if b == i {
                let t = p(a, j).clone();
                e = Some(match e {
                    Some(x) => x.add(&t).expect("same degree"),
                    None => t,
                });
            }
            if let Some(e) = e {
                out.push((k, e));
            }
        }
        out
    };
    for (c, &(i, j)) in off.iter().enumerate() {
        let mut col: Vec<Poly> = t_sym.iter().map(|&d| zero(d - t_sl[c])).collect();
        for (k, e) in image_of_unit(i, j) {
            col[k] = e;
        }
        phi_cols.push(col);
    }
    for k in 0..r - 1 {
        let c = off.len() + k;
        let mut col: Vec<Poly> = t_sym.iter().map(|&d| zero(d - t_sl[c])).collect();
        for (idx, e) in image_of_unit(k, k) {
            col[idx] = col[idx].add(&e)?;
        }
        for (idx, e) in image_of_unit(r - 1, r - 1) {
            col[idx] = col[idx].sub(&e)?;
        }
        phi_cols.push(col);
    }
    let phi_entries: Vec<Vec<Poly>> = (0..t_sym.len()).map(|row| phi_cols.iter().map(|c| c[row].clone()).collect()).collect();
    let phi_map = MatrixOfForms::new(f, t_sym, t_sl.clone(), phi_entries)?;

    // psi: S = E_ij - E_ji, Phi S = sum_a Phi_ai E_aj - Phi_aj E_ai
    let mut psi_entries: Vec<Vec<Poly>> = t_sl.iter().map(|&d| t_wedge.iter().map(|&w| zero(d - w)).collect()).collect();
    for (c, &(i, j)) in pairs_lt.iter().enumerate() {
        let mut diag: Vec<Poly> = vec![zero(t_sl[t_sl.len() - 1] - t_wedge[c]); r];
        for a in 0..r {
            for (col_unit, e) in [(j, p(a, i).clone()), (i, p(a, j).neg())] {
                if a == col_unit {
                    diag[a] = diag[a].add(&e)?;
                } else {
                    let k = sl_index(a, col_unit).expect("off-diagonal");
                    psi_entries[k][c] = psi_entries[k][c].add(&e)?;
                }
            }
        }
        // traceless diagonal sum c_a E_aa = sum_{k<r-1} c_k (E_kk - E_rr)
        for (k, d) in diag.iter().take(r - 1).enumerate() {
            let row = off.len() + k;
            psi_entries[row][c] = psi_entries[row][c].add(d)?;
        }
    }
    let psi_map = MatrixOfForms::new(f, t_sl.clone(), t_wedge.clone(), psi_entries)?;
    BundleComplex::new(-2, vec![t_wedge, t_sl, phi_map.row_twists().to_vec()], vec![psi_map, phi_map], Provenance::EsIw)
}

/// (h^0(I_w(5)), h^1(I_w(5))).
pub fn hypercoh_iw5(phi: &SymmetricSection) -> Result<(u64, u64)> {
    let h = build_es_iw(phi)?.hypercohomology(0)?;
    check_support(&h, 0, 1)?;
    Ok((h.get(0), h.get(1)))
}

/// F(4) is 0-regular: h^i(F(4-i)) = 0 for i = 1, 2, 3.
pub fn cm_regularity_check(phi: &SymmetricSection) -> Result<bool> {
    let es = build_es_f(phi)?;
    for i in 1..=3i64 {
        if es.hypercohomology(4 - i)?.get(i) != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// An element of L^2 W (x) V with dim V = 4, as coefficients on
/// (e_a ^ e_b) (x) v_c for a < b.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phi11 {
    pub k: usize,
    pub coeffs: Vec<u64>,
}

impl Phi11 {
    pub fn zero(k: usize) -> Self {
        Phi11 { k, coeffs: vec![0; k * k.saturating_sub(1) / 2 * 4] }
    }

    fn pair_index(&self, a: usize, b: usize) -> usize {
        a * self.k - a * (a + 1) / 2 + (b - a - 1)
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> u64 {
        self.coeffs[4 * self.pair_index(a, b) + c]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, v: u64) {
        let i = 4 * self.pair_index(a, b) + c;
        self.coeffs[i] = v;
    }
}

const V_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// phi(xi (x) v) = sum (xi(w') w'' - xi(w'') w') (x) (v ^ v_i) for
/// Phi11 = sum w' ^ w'' (x) v_i, as coefficients on e_p e_q (x) (v_u ^ v_w),
/// indexed by 6 * sym_index(p, q) + pair(u, w).
pub fn phi11_contraction(field: PrimeField, phi11: &Phi11, xi: &[Vec<u64>], v: &[u64; 4]) -> Result<Vec<u64>> {
    let k = phi11.k;
    if xi.len() != k || xi.iter().any(|r| r.len() != k) {
        return Err(Error::Dimension(format!("xi must be {k} x {k}")));
    }
    if k > 6 || phi11.coeffs.len() != k * k.saturating_sub(1) / 2 * 4 {
        return Err(Error::Dimension("Phi11 has the wrong shape".into()));
    }
    let f = field;
    let mut out = vec![0u64; k * (k + 1) / 2 * 6];
    // v ^ v_c = sum_u v_u e_u ^ e_c
    let wedge = |c: usize| -> Vec<(usize, u64)> {
        (0..4)
            .filter(|&u| u != c && v[u] != 0)
            .map(|u| {
                let (lo, hi, sg) = if u < c { (u, c, v[u]) } else { (c, u, f.neg(v[u])) };
                (V_PAIRS.iter().position(|&p| p == (lo, hi)).expect("pair"), sg)
            })
            .collect()
    };
    for a in 0..k {
        for b in a + 1..k {
            for c in 0..4 {
                let coef = phi11.get(a, b, c);
                if coef == 0 {
                    continue;
                }
                let wv = wedge(c);
                for d in 0..k {
                    // xi(e_a) e_b - xi(e_b) e_a
                    for (x, y, s) in [(d, b, xi[d][a]), (d, a, f.neg(xi[d][b]))] {
                        if s == 0 {
                            continue;
                        }
                        let row = sym_index(k, x, y);
                        for &(pi, pv) in &wv {
                            let idx = 6 * row + pi;
                            out[idx] = f.add(out[idx], f.mul(coef, f.mul(s, pv)));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Rank of xi (x) v -> phi11_contraction over all of Hom(W, W) (x) V.
pub fn phi11_rank(field: PrimeField, phi11: &Phi11) -> Result<usize> {
    let k = phi11.k;
    let mut cols: Vec<Vec<u64>> = Vec::with_capacity(4 * k * k);
    for i in 0..k {
        for j in 0..k {
            for u in 0..4 {
                let mut xi = vec![vec![0u64; k]; k];
                xi[i][j] = 1;
                let mut v = [0u64; 4];
                v[u] = 1;
                cols.push(phi11_contraction(field, phi11, &xi, &v)?);
            }
        }
    }
    if cols.is_empty() || cols[0].is_empty() {
        return Ok(0);
    }
    Ok(DenseMatrix::from_rows(&cols).rank(field))
}
