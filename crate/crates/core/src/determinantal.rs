//! Symmetric sections of S^2E(6+delta), their free presentations, the branch
//! sextic, the corank-2 locus and the singular scheme.
//!
//! Split summands give a symmetric matrix of forms directly. Each Omega^1(t)
//! summand is lifted through its Euler sequence to four rows of twist t-1 and
//! four columns of twist -t-5-delta, subject to the contraction identity
//! x . block = 0. The lifted matrix presents coker(Phi) plus one free rank-one
//! summand per Omega block, which shifts the Fitting index by the number of
//! blocks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bundle::BundleSpec;
use crate::error::{Error, Result};
use crate::ideal::eliminant::{squarefree_eliminant, EliminantReport};
use crate::ideal::Ideal;
use crate::poly::monomial::{binom3, monomials_of_degree};
use crate::poly::univariate;
use crate::poly::{DenseMatrix, MatrixOfForms, Monomial, Poly, PrimeField};

/// Eliminant retries used by [`nodality_check`].
pub const ELIMINANT_ATTEMPTS: u32 = 8;
/// Random lines tried by [`irreducibility_probe`].
pub const PROBE_LINES: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricSection {
    pub spec: BundleSpec,
    pub seed: u64,
    /// Coordinates in the basis of the section space used for sampling.
    pub coefficients: Vec<u64>,
    pub realized: MatrixOfForms,
    /// First row of each lifted Omega block.
    pub omega_rows: Vec<usize>,
}

/// A free presentation of coker(Phi), possibly with extra free summands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub matrix: MatrixOfForms,
    /// Fitt_i(F) = Fitt_{i + fitting_shift}(coker matrix).
    pub fitting_shift: usize,
}

/// Row twists of the realized matrix and the first row of each Omega block.
fn layout(spec: &BundleSpec) -> (Vec<i64>, Vec<usize>) {
    let mut rows = Vec::new();
    let mut omega_rows = Vec::new();
    for t in spec.omega_twists() {
        omega_rows.push(rows.len());
        rows.extend([t - 1; 4]);
    }
    rows.extend(spec.line_twists());
    (rows, omega_rows)
}

/// Map from entry position to unknown index, upper triangle only.
struct Unknowns {
    n: usize,
    offsets: Vec<usize>,
    degrees: Vec<u32>,
    total: usize,
}

impl Unknowns {
    fn new(rows: &[i64], shift: i64) -> Result<Self> {
        let n = rows.len();
        let mut offsets = Vec::new();
        let mut degrees = Vec::new();
        let mut total = 0;
        for i in 0..n {
            for j in i..n {
                let d = rows[i] + rows[j] + shift;
                let d = if d < 0 { 0 } else { d as u32 };
                let size = if rows[i] + rows[j] + shift < 0 { 0 } else { binom3(d as usize) };
                offsets.push(total);
                degrees.push(d);
                total += size;
            }
        }
        if total == 0 {
            return Err(Error::InvalidBundle("no sections of S^2E(6+delta)".into()));
        }
        Ok(Unknowns { n, offsets, degrees, total })
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        a * self.n - a * (a + 1) / 2 + b
    }

    fn size(&self, slot: usize) -> usize {
        let end = self.offsets.get(slot + 1).copied().unwrap_or(self.total);
        end - self.offsets[slot]
    }
}

/// Euler contraction conditions: for every Omega block and every column j,
/// sum_i x_i M[r+i][j] = 0.
fn contraction_system(u: &Unknowns, omega_rows: &[usize]) -> DenseMatrix {
    let mut eqs: Vec<Vec<u64>> = Vec::new();
    for &r in omega_rows {
        for j in 0..u.n {
            let slot = u.slot(r, j);
            if u.size(slot) == 0 {
                continue;
            }
            let d = u.degrees[slot];
            let mut block = vec![vec![0u64; u.total]; binom3(d as usize + 1)];
            for i in 0..4 {
                let s = u.slot(r + i, j);
                for (k, m) in monomials_of_degree(d).iter().enumerate() {
                    let target = m.mul(&Monomial::var(i)).index();
                    block[target][u.offsets[s] + k] = 1;
                }
            }
            eqs.extend(block);
        }
    }
    if eqs.is_empty() {
        DenseMatrix::zeros(0, u.total)
    } else {
        DenseMatrix::from_rows(&eqs)
    }
}

fn realize(field: PrimeField, u: &Unknowns, rows: &[i64], shift: i64, values: &[u64]) -> Result<MatrixOfForms> {
    let n = rows.len();
    let cols: Vec<i64> = rows.iter().map(|r| -r - shift).collect();
    MatrixOfForms::from_fn(field, rows.to_vec(), cols, |i, j, d| {
        if d < 0 {
            return Poly::zero(field, 0);
        }
        let s = u.slot(i, j);
        let off = u.offsets[s];
        Poly::from_dense(field, d as u32, &values[off..off + u.size(s)])
    })
    .inspect(|m| {
        debug_assert_eq!(m.nrows(), n);
    })
}

/// Random symmetric section for the spec, deterministic in (spec, seed, p).
pub fn sample_phi(spec: &BundleSpec, seed: u64, field: PrimeField) -> Result<SymmetricSection> {
    if !spec.is_accepted() {
        return Err(Error::InvalidBundle(format!("{:?}", spec.validate())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (rows, omega_rows) = layout(spec);
    let shift = 6 + spec.delta as i64;
    let u = Unknowns::new(&rows, shift)?;
    let (coefficients, values) = if omega_rows.is_empty() {
        let v: Vec<u64> = (0..u.total).map(|_| field.random(&mut rng)).collect();
        (v.clone(), v)
    } else {
        let basis = contraction_system(&u, &omega_rows).nullspace(field);
        if basis.is_empty() {
            return Err(Error::InvalidBundle("section space is zero".into()));
        }
        let coords: Vec<u64> = (0..basis.len()).map(|_| field.random(&mut rng)).collect();
        let mut v = vec![0u64; u.total];
        for (c, b) in coords.iter().zip(&basis) {
            for (x, y) in v.iter_mut().zip(b) {
                *x = field.add(*x, field.mul(*c, *y));
            }
        }
        (coords, v)
    };
    let realized = realize(field, &u, &rows, shift, &values)?;
    Ok(SymmetricSection { spec: spec.clone(), seed, coefficients, realized, omega_rows })
}

impl SymmetricSection {
    /// Wraps an explicit symmetric matrix for a split spec.
    pub fn from_matrix(spec: &BundleSpec, matrix: MatrixOfForms) -> Result<Self> {
        if !spec.is_split() {
            return Err(Error::InvalidBundle("explicit matrices are supported for split specs only".into()));
        }
        if !matrix.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let (rows, _) = layout(spec);
        if matrix.row_twists() != rows.as_slice() {
            return Err(Error::DegreeMismatch(format!("row twists {:?}, spec needs {:?}", matrix.row_twists(), rows)));
        }
        let shift = 6 + spec.delta as i64;
        if matrix.col_twists().iter().zip(&rows).any(|(c, r)| *c != -r - shift) {
            return Err(Error::DegreeMismatch("column twists do not match E^dual(-6-delta)".into()));
        }
        Ok(SymmetricSection { spec: spec.clone(), seed: 0, coefficients: vec![], realized: matrix, omega_rows: vec![] })
    }

    pub fn field(&self) -> PrimeField {
        self.realized.field()
    }

    pub fn presentation(&self) -> Presentation {
        Presentation { matrix: self.realized.clone(), fitting_shift: self.omega_rows.len() }
    }

    /// Checks x . block = 0 for every lifted Omega block.
    pub fn contraction_holds(&self) -> bool {
        let m = &self.realized;
        self.omega_rows.iter().all(|&r| {
            (0..m.ncols()).all(|j| {
                let mut acc = Poly::zero(self.field(), m.entry(r, j).degree() + 1);
                for i in 0..4 {
                    let t = Poly::var(self.field(), i).mul(m.entry(r + i, j)).expect("same field");
                    acc = acc.add(&t).expect("same degree");
                }
                acc.is_zero()
            })
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Irreducibility {
    /// Some line restriction excludes every factor degree 1, 2, 3.
    Irreducible,
    /// The probe could not exclude a factorization.
    PossiblyReducible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchSextic {
    pub poly: Poly,
    pub irreducibility: Irreducibility,
}

/// Generator of the saturated Fitt_0 of coker(Phi), normalised to be monic.
///
/// Split case: the determinant. Lifted case: the kernel of the lifted matrix
/// is spanned by the variable vectors of the Omega blocks, so the maximal
/// minor that omits the first row and column of each block equals
/// B * prod x_0^2; B is recovered by exact division.
pub fn branch_sextic<R: Rng + ?Sized>(phi: &SymmetricSection, rng: &mut R) -> Result<BranchSextic> {
    let f = phi.field();
    let m = &phi.realized;
    let b = if phi.omega_rows.is_empty() {
        m.determinant()?
    } else {
        let keep: Vec<usize> = (0..m.nrows()).filter(|i| !phi.omega_rows.contains(i)).collect();
        let minor = m.submatrix(&keep, &keep).determinant()?;
        let x0 = Poly::var(f, 0).pow(2 * phi.omega_rows.len() as u32);
        if minor.is_zero() {
            minor
        } else {
            minor.div_exact(&x0).map_err(|_| Error::Degeneration("Fitting ideal is not principal".into()))?
        }
    };
    if b.is_zero() {
        return Err(Error::Degeneration("determinant vanishes identically".into()));
    }
    let poly = b.monic();
    let irreducibility = irreducibility_probe(&poly, rng, PROBE_LINES);
    Ok(BranchSextic { poly, irreducibility })
}

/// Restriction of g to the line p + s q, as a polynomial in s.
fn restrict_to_line(g: &Poly, p: &[u64; 4], q: &[u64; 4]) -> Vec<u64> {
    let f = g.field();
    let mut acc: Vec<u64> = vec![];
    for (m, c) in g.terms() {
        let mut t = vec![*c];
        for i in 0..4 {
            for _ in 0..m.0[i] {
                t = univariate::mul(f, &t, &[p[i], q[i]]);
            }
        }
        acc = univariate::add(f, &acc, &t);
    }
    univariate::trim(acc)
}

/// Probabilistic irreducibility test: a factor of degree a forces every line
/// restriction to have a factor-degree sub-multiset summing to a, so one line
/// without such a subset rules out a for good.
pub fn irreducibility_probe<R: Rng + ?Sized>(g: &Poly, rng: &mut R, lines: usize) -> Irreducibility {
    let f = g.field();
    let n = g.degree() as usize;
    let mut open: Vec<usize> = (1..=n / 2).collect();
    for _ in 0..lines {
        if open.is_empty() {
            break;
        }
        let p: [u64; 4] = std::array::from_fn(|_| f.random(rng));
        let q: [u64; 4] = std::array::from_fn(|_| f.random(rng));
        let r = restrict_to_line(g, &p, &q);
        if univariate::degree(&r) != Some(n) || !univariate::is_squarefree(f, &r) {
            continue;
        }
        let degs = univariate::factor_degrees(f, &r);
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for d in degs {
            for s in (d..=n).rev() {
                sums[s] |= sums[s - d];
            }
        }
        open.retain(|&a| sums[a]);
    }
    if open.is_empty() {
        Irreducibility::Irreducible
    } else {
        Irreducibility::PossiblyReducible
    }
}

/// Saturated Fitt_1 of coker(Phi): the scheme w where Phi has corank 2.
pub fn corank2_ideal<R: Rng + ?Sized>(phi: &SymmetricSection, rng: &mut R) -> Result<Ideal> {
    let pres = phi.presentation();
    let size = pres.matrix.nrows() - 1 - pres.fitting_shift;
    let minors = if size == 0 { vec![Poly::one(phi.field())] } else { pres.matrix.symmetric_minors(size)? };
    let ideal = Ideal::new(phi.field(), minors)?.saturate(rng)?;
    let pd = ideal.projective_dimension();
    if pd > 0 {
        return Err(Error::Degeneration(format!("corank-2 locus has dimension {pd}")));
    }
    Ok(ideal)
}

/// Saturation of the ideal of partial derivatives.
pub fn jacobian_ideal<R: Rng + ?Sized>(b: &Poly, rng: &mut R) -> Result<Ideal> {
    let gens: Vec<Poly> = (0..4).map(|i| b.derivative(i)).filter(|g| !g.is_zero()).collect();
    Ideal::new(b.field(), gens)?.saturate(rng)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodalityReport {
    pub nodal: bool,
    /// Dimension of Sing(B); -1 when smooth.
    pub singular_dimension: i64,
    pub eliminant: Option<EliminantReport>,
}

/// B is nodal iff its singular scheme is finite and reduced.
pub fn nodality_check<R: Rng + ?Sized>(b: &Poly, rng: &mut R) -> Result<NodalityReport> {
    let sing = jacobian_ideal(b, rng)?;
    nodality_of(&sing, rng)
}

/// Nodality from an already computed singular scheme.
pub fn nodality_of<R: Rng + ?Sized>(sing: &Ideal, rng: &mut R) -> Result<NodalityReport> {
    let dim = sing.projective_dimension();
    if dim > 0 {
        return Ok(NodalityReport { nodal: false, singular_dimension: dim, eliminant: None });
    }
    let report = squarefree_eliminant(sing, rng, ELIMINANT_ATTEMPTS)?;
    Ok(NodalityReport { nodal: report.reduced(), singular_dimension: dim, eliminant: Some(report) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleContact {
    /// Monic cubic C, free of the eliminated variable.
    pub cubic: Poly,
    /// B = scalar * C^2 modulo h.
    pub scalar: u64,
    /// The curve C on the plane is non-reduced.
    pub multiplicity_warning: bool,
}

/// Square root of g when g = c * C^2, with C monic.
fn square_root(g: &Poly) -> Option<(Poly, u64)> {
    let f = g.field();
    let (lm, lc) = g.leading()?;
    if !g.degree().is_multiple_of(2) || lm.0.iter().any(|e| e % 2 != 0) {
        return None;
    }
    let g = g.scale(f.inv(lc));
    let head = Monomial(lm.0.map(|e| e / 2));
    let mut root = Poly::monomial(f, head, 1);
    let half = f.inv(2);
    for _ in 0..=binom3(head.degree() as usize) {
        let rest = g.sub(&root.pow(2)).ok()?;
        let Some((m, c)) = rest.leading() else {
            return Some((root, lc));
        };
        let t = head.quotient(&m)?;
        if t >= head {
            return None;
        }
        root = root.add(&Poly::monomial(f, t, f.mul(c, half))).ok()?;
    }
    None
}

/// Detects whether the plane h = 0 meets B along a cubic with multiplicity 2.
pub fn plane_double_contact(b: &Poly, h: &Poly) -> Result<Option<DoubleContact>> {
    let f = b.field();
    if h.degree() != 1 || h.is_zero() {
        return Err(Error::Invalid("h must be a nonzero linear form".into()));
    }
    let coeffs: [u64; 4] = std::array::from_fn(|i| h.coeff(&Monomial::var(i)));
    let k = (0..4).rev().find(|&i| coeffs[i] != 0).expect("nonzero");
    let inv = f.inv(coeffs[k]);
    let mut a = [[0u64; 4]; 4];
    for (i, row) in a.iter_mut().enumerate() {
        if i == k {
            for j in 0..4 {
                if j != k {
                    row[j] = f.neg(f.mul(coeffs[j], inv));
                }
            }
        } else {
            row[i] = 1;
        }
    }
    let restricted = b.linear_substitute(&a);
    if restricted.is_zero() {
        return Ok(None);
    }
    let Some((cubic, scalar)) = square_root(&restricted) else {
        return Ok(None);
    };
    let mut gens = vec![h.clone(), cubic.clone()];
    gens.extend((0..4).map(|i| cubic.derivative(i)).filter(|g| !g.is_zero()));
    let multiplicity_warning = Ideal::new(f, gens)?.projective_dimension() >= 1;
    Ok(Some(DoubleContact { cubic, scalar, multiplicity_warning }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fld() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    fn rng(s: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(s)
    }

    fn z40() -> BundleSpec {
        BundleSpec { delta: 0, omega: vec![(-1, 1)], line: [(-2, 1)].into_iter().collect() }
    }

    #[test]
    fn split_shapes() {
        let z35 = sample_phi(&BundleSpec::split(1, &[(-3, 6)]), 1, fld()).unwrap();
        assert_eq!(z35.realized.nrows(), 6);
        assert!(z35.realized.is_symmetric());
        assert!(z35.realized.entries().iter().flatten().all(|e| e.degree() == 1));
        let z32 = sample_phi(&BundleSpec::split(0, &[(-2, 3)]), 42, fld()).unwrap();
        assert!(z32.realized.entries().iter().flatten().all(|e| e.degree() == 2));
        assert_eq!(z32, sample_phi(&BundleSpec::split(0, &[(-2, 3)]), 42, fld()).unwrap());
    }

    #[test]
    fn lifted_block_contracts() {
        let phi = sample_phi(&z40(), 7, fld()).unwrap();
        assert!(phi.realized.is_symmetric());
        assert!(phi.contraction_holds());
        assert!(!phi.realized.is_zero());
        let b = branch_sextic(&phi, &mut rng(1)).unwrap();
        assert_eq!(b.poly.degree(), 6);
    }

    #[test]
    fn lifted_fitting_ideal_is_principal() {
        let phi = sample_phi(&z40(), 3, fld()).unwrap();
        let b = branch_sextic(&phi, &mut rng(2)).unwrap().poly;
        let fitt = Ideal::new(fld(), phi.realized.symmetric_minors(4).unwrap()).unwrap().saturate(&mut rng(3)).unwrap();
        assert!(fitt.ideal_equal(&Ideal::new(fld(), vec![b]).unwrap()));
    }

    #[test]
    fn z31_degree() {
        let phi = sample_phi(&BundleSpec::split(1, &[(-3, 3), (-2, 1)]), 5, fld()).unwrap();
        let b = branch_sextic(&phi, &mut rng(5)).unwrap();
        assert_eq!(b.poly.degree(), 6);
        assert_eq!(b.irreducibility, Irreducibility::Irreducible);
        let w = corank2_ideal(&phi, &mut rng(6)).unwrap();
        assert_eq!(w.degree().unwrap(), 31);
        let sing = jacobian_ideal(&b.poly, &mut rng(7)).unwrap();
        assert!(w.ideal_equal(&sing));
    }

    #[test]
    fn diagonal_is_degenerate() {
        let f = fld();
        let spec = BundleSpec::split(0, &[(-2, 3)]);
        let mut r = rng(9);
        let q: Vec<Poly> = (0..3).map(|_| Poly::random(f, 2, &mut r)).collect();
        let m = MatrixOfForms::from_fn(f, vec![-2; 3], vec![-4; 3], |i, j, d| if i == j { q[i].clone() } else { Poly::zero(f, d as u32) }).unwrap();
        let phi = SymmetricSection::from_matrix(&spec, m).unwrap();
        let b = branch_sextic(&phi, &mut r).unwrap();
        let prod = q[0].mul(&q[1]).unwrap().mul(&q[2]).unwrap().monic();
        assert_eq!(b.poly, prod);
        assert_eq!(b.irreducibility, Irreducibility::PossiblyReducible);
        assert!(matches!(corank2_ideal(&phi, &mut r), Err(Error::Degeneration(_))));
    }

    #[test]
    fn fitting_ideals_are_presentation_independent() {
        let f = fld();
        let phi = sample_phi(&BundleSpec::split(1, &[(-3, 6)]), 11, f).unwrap();
        let mut r = rng(12);
        let n = 6;
        let p = loop {
            let m = DenseMatrix::from_rows(&(0..n).map(|_| (0..n).map(|_| f.random(&mut r)).collect()).collect::<Vec<_>>());
            if m.determinant(f).unwrap() != 0 {
                break m;
            }
        };
        let scalar = |m: &DenseMatrix, rt: i64, ct: i64| {
            MatrixOfForms::from_fn(f, vec![rt; n], vec![ct; n], |i, j, _| Poly::constant(f, m.get(i, j))).unwrap()
        };
        let left = scalar(&p, -3, -3);
        let right = scalar(&p.transpose(), -4, -4);
        let other = left.compose(&phi.realized).unwrap().compose(&right).unwrap();
        let w1 = Ideal::new(f, phi.realized.minors(5).unwrap()).unwrap().saturate(&mut r).unwrap();
        let w2 = Ideal::new(f, other.minors(5).unwrap()).unwrap().saturate(&mut r).unwrap();
        assert!(w1.ideal_equal(&w2));
        assert_eq!(
            Ideal::new(f, vec![phi.realized.determinant().unwrap()]).unwrap(),
            Ideal::new(f, vec![other.determinant().unwrap()]).unwrap()
        );
    }

    #[test]
    fn fermat_is_smooth() {
        let f = fld();
        let fermat = (0..4).fold(Poly::zero(f, 6), |acc, i| acc.add(&Poly::var(f, i).pow(6)).unwrap());
        let rep = nodality_check(&fermat, &mut rng(1)).unwrap();
        assert!(rep.nodal);
        assert_eq!(rep.singular_dimension, -1);
    }

    #[test]
    fn a2_point_is_not_a_node() {
        // local equation x0^2 + x1^2 + x2^3 at (0:0:0:1)
        let f = fld();
        let x = |i| Poly::var(f, i);
        let mut r = rng(21);
        let q = x(0).pow(2).add(&x(1).pow(2)).unwrap();
        let mut b = x(3).pow(4).mul(&q).unwrap().add(&x(3).pow(3).mul(&x(2).pow(3)).unwrap()).unwrap();
        for m in monomials_of_degree(6) {
            if m.0[0] + m.0[1] + m.0[2] >= 4 {
                b = b.add(&Poly::monomial(f, m, f.random(&mut r))).unwrap();
            }
        }
        let rep = nodality_check(&b, &mut r).unwrap();
        assert!(!rep.nodal);
    }

    #[test]
    fn double_contact_by_construction() {
        let f = fld();
        let mut r = rng(31);
        let c = Poly::random(f, 3, &mut r);
        let h = Poly::var(f, 3);
        let quintic = Poly::random(f, 5, &mut r);
        let b = c.pow(2).add(&h.mul(&quintic).unwrap()).unwrap();
        let dc = plane_double_contact(&b, &h).unwrap().unwrap();
        let c0 = c.linear_substitute(&[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]]);
        assert_eq!(dc.cubic, c0.monic());
        assert!(!dc.multiplicity_warning);

        let cube = Poly::var(f, 0).pow(3);
        let b2 = cube.pow(2).add(&h.mul(&quintic).unwrap()).unwrap();
        let dc2 = plane_double_contact(&b2, &h).unwrap().unwrap();
        assert_eq!(dc2.cubic, cube);
        assert!(dc2.multiplicity_warning);
    }

    #[test]
    fn generic_plane_has_no_double_contact() {
        let f = fld();
        let phi = sample_phi(&BundleSpec::split(0, &[(-2, 3)]), 42, f).unwrap();
        let b = branch_sextic(&phi, &mut rng(1)).unwrap().poly;
        let h = Poly::linear(f, &[3, 5, 7, 11]);
        assert!(plane_double_contact(&b, &h).unwrap().is_none());
    }
}
