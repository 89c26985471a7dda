//! Homogeneous F4-style Groebner bases in degree reverse lexicographic order.
//!
//! Pairs are processed one degree at a time. All S-polynomials of the current
//! degree are reduced together as dense rows against monomial multiples of the
//! basis, and the surviving rows are put into reduced echelon form. For
//! homogeneous input this yields the reduced Groebner basis directly.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poly::monomial::{binom3, monomials_of_degree};
use crate::poly::{Monomial, Poly, PrimeField};

/// Default bound on the degree of S-pairs before giving up.
pub const DEFAULT_DEGREE_CAP: u32 = 30;

#[derive(Clone, Copy, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

fn lm(g: &Poly) -> Monomial {
    g.leading_monomial().expect("basis elements are nonzero")
}

/// Gebauer-Moeller installation of a new element `h = basis[k]`.
fn update(basis: &[Poly], pairs: &mut Vec<Pair>, k: usize) {
    let hl = lm(&basis[k]);
    let mut c: Vec<Pair> = (0..k).map(|i| Pair { i, j: k, lcm: lm(&basis[i]).lcm(&hl) }).collect();
    let mut d: Vec<Pair> = Vec::new();
    while let Some(p) = c.pop() {
        let coprime = lm(&basis[p.i]).coprime(&hl);
        let dominated = c.iter().chain(d.iter()).any(|q| q.lcm.divides(&p.lcm));
        if coprime || !dominated {
            d.push(p);
        }
    }
    // Buchberger's product criterion
    let e: Vec<Pair> = d.into_iter().filter(|p| !lm(&basis[p.i]).coprime(&hl)).collect();
    pairs.retain(|p| {
        !(hl.divides(&p.lcm)
            && lm(&basis[p.i]).lcm(&hl) != p.lcm
            && lm(&basis[p.j]).lcm(&hl) != p.lcm)
    });
    pairs.extend(e);
}

/// Reduced Groebner basis of the ideal generated by homogeneous `gens`,
/// monic and sorted by increasing leading monomial.
pub fn groebner_basis(field: PrimeField, gens: &[Poly], degree_cap: u32) -> Result<Vec<Poly>> {
    let mut pending: BTreeMap<u32, Vec<Poly>> = BTreeMap::new();
    for g in gens {
        if g.field() != field {
            return Err(Error::FieldMismatch(g.field().p(), field.p()));
        }
        if !g.is_zero() {
            pending.entry(g.degree()).or_default().push(g.clone());
        }
    }
    let mut basis: Vec<Poly> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    loop {
        let pd = pairs.iter().map(|p| p.lcm.degree()).min();
        let gd = pending.keys().next().copied();
        let d = match (pd, gd) {
            (None, None) => break,
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => a.min(b),
        };
        if d > degree_cap {
            return Err(Error::DegreeCapExceeded(degree_cap));
        }
        let (now, later): (Vec<Pair>, Vec<Pair>) = pairs.iter().partition(|p| p.lcm.degree() == d);
        pairs = later;
        let new_gens = pending.remove(&d).unwrap_or_default();
        let new = reduce_degree(field, d, &basis, &now, &new_gens);
        if new.is_empty() {
            continue;
        }
        if d == 0 {
            return Ok(vec![Poly::one(field)]);
        }
        for h in new {
            basis.push(h);
            let k = basis.len() - 1;
            update(&basis, &mut pairs, k);
        }
        log::trace!("groebner degree {d}: {} elements, {} pairs", basis.len(), pairs.len());
    }
    basis.sort_by_key(lm);
    Ok(basis)
}

/// Per-column reducers of one degree slice: sparse rows (column, coefficient)
/// with leading coefficient 1 at the owning column.
struct SliceReducers {
    rows: Vec<Option<Vec<(usize, u64)>>>,
}

impl SliceReducers {
    fn new(ncols: usize) -> Self {
        SliceReducers { rows: vec![None; ncols] }
    }

    fn build_for(&mut self, mons: &[Monomial], basis: &[Poly], c: usize) -> bool {
        if self.rows[c].is_some() {
            return true;
        }
        let m = mons[c];
        let best = basis
            .iter()
            .filter(|g| lm(g).divides(&m))
            .min_by_key(|g| g.num_terms());
        match best {
            Some(g) => {
                let u = lm(g).quotient(&m).unwrap();
                self.rows[c] = Some(g.terms().iter().map(|(t, a)| (t.mul(&u).index(), *a)).collect());
                true
            }
            None => false,
        }
    }

    fn reduce(&self, field: PrimeField, row: &mut [u64]) {
        for c in 0..row.len() {
            let a = row[c];
            if a == 0 {
                continue;
            }
            if let Some(r) = &self.rows[c] {
                for &(k, b) in r {
                    row[k] = field.sub_mul(row[k], a, b);
                }
            }
        }
    }
}

fn reduce_degree(field: PrimeField, d: u32, basis: &[Poly], pairs: &[Pair], gens: &[Poly]) -> Vec<Poly> {
    let ncols = binom3(d as usize);
    let mons = monomials_of_degree(d);
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(pairs.len() + gens.len());
    for p in pairs {
        let (gi, gj) = (&basis[p.i], &basis[p.j]);
        let ui = lm(gi).quotient(&p.lcm).unwrap();
        let uj = lm(gj).quotient(&p.lcm).unwrap();
        let mut row = vec![0u64; ncols];
        for (t, a) in gi.terms().iter().skip(1) {
            let k = t.mul(&ui).index();
            row[k] = field.add(row[k], *a);
        }
        for (t, a) in gj.terms().iter().skip(1) {
            let k = t.mul(&uj).index();
            row[k] = field.sub(row[k], *a);
        }
        rows.push(row);
    }
    for g in gens {
        rows.push(g.to_dense());
    }
    // symbolic preprocessing: reducer columns only ever introduce later columns
    let mut present = vec![false; ncols];
    for row in &rows {
        for (c, &v) in row.iter().enumerate() {
            if v != 0 {
                present[c] = true;
            }
        }
    }
    let mut red = SliceReducers::new(ncols);
    for c in 0..ncols {
        if present[c] && red.build_for(&mons, basis, c) {
            for &(k, _) in red.rows[c].as_ref().unwrap() {
                present[k] = true;
            }
        }
    }
    let mut survivors: Vec<Vec<u64>> = Vec::new();
    for mut row in rows {
        red.reduce(field, &mut row);
        if row.iter().any(|&v| v != 0) {
            survivors.push(row);
        }
    }
    if survivors.is_empty() {
        return Vec::new();
    }
    let mut mat = crate::poly::DenseMatrix::from_rows(&survivors);
    let pivots = mat.rref(field);
    (0..pivots.len()).map(|r| Poly::from_dense(field, d, mat.row(r))).collect()
}

/// Reduces forms of a fixed degree modulo a Groebner basis, caching the
/// reducer table per degree.
pub struct NormalForm<'a> {
    field: PrimeField,
    basis: &'a [Poly],
    tables: BTreeMap<u32, (Vec<Monomial>, SliceReducers)>,
}

impl<'a> NormalForm<'a> {
    pub fn new(field: PrimeField, basis: &'a [Poly]) -> Self {
        NormalForm { field, basis, tables: BTreeMap::new() }
    }

    fn table(&mut self, d: u32) -> &SliceReducers {
        let basis = self.basis;
        let entry = self.tables.entry(d).or_insert_with(|| {
            let mons = monomials_of_degree(d);
            let mut red = SliceReducers::new(mons.len());
            for c in 0..mons.len() {
                red.build_for(&mons, basis, c);
            }
            (mons, red)
        });
        &entry.1
    }

    /// Dense reduction in place; the result is supported on standard monomials.
    pub fn reduce_dense(&mut self, d: u32, row: &mut [u64]) {
        let f = self.field;
        self.table(d).reduce(f, row);
    }

    pub fn reduce(&mut self, g: &Poly) -> Poly {
        let mut row = g.to_dense();
        self.reduce_dense(g.degree(), &mut row);
        Poly::from_dense(self.field, g.degree(), &row)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fld() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    fn p(terms: &[([u16; 4], i64)]) -> Poly {
        let f = fld();
        let d = terms[0].0.iter().map(|&e| e as u32).sum();
        Poly::from_terms(f, d, terms.iter().map(|(e, c)| (Monomial(*e), f.from_i64(*c)))).unwrap()
    }

    #[test]
    fn twisted_cubic() {
        // 2x2 minors of [[x0,x1,x2],[x1,x2,x3]]
        let g = vec![
            p(&[([1, 0, 1, 0], 1), ([0, 2, 0, 0], -1)]),
            p(&[([1, 0, 0, 1], 1), ([0, 1, 1, 0], -1)]),
            p(&[([0, 1, 0, 1], 1), ([0, 0, 2, 0], -1)]),
        ];
        let gb = groebner_basis(fld(), &g, 30).unwrap();
        assert_eq!(gb.len(), 3);
        let lms: Vec<Monomial> = gb.iter().map(|g| g.leading_monomial().unwrap()).collect();
        assert!(lms.contains(&Monomial([0, 2, 0, 0])));
        assert!(lms.contains(&Monomial([0, 1, 1, 0])));
        assert!(lms.contains(&Monomial([0, 0, 2, 0])));
    }

    #[test]
    fn unit_ideal() {
        let g = vec![p(&[([1, 0, 0, 0], 1)]), Poly::one(fld())];
        assert_eq!(groebner_basis(fld(), &g, 30).unwrap(), vec![Poly::one(fld())]);
    }

    #[test]
    fn degree_cap_is_reported() {
        let g = vec![
            p(&[([3, 0, 0, 0], 1), ([0, 1, 2, 0], 1)]),
            p(&[([0, 3, 0, 0], 1), ([1, 0, 0, 2], 1)]),
            p(&[([0, 0, 3, 0], 1), ([1, 1, 1, 0], 1)]),
        ];
        assert!(matches!(groebner_basis(fld(), &g, 4), Err(Error::DegreeCapExceeded(4))));
    }
}
