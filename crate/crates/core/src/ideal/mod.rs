//! Homogeneous ideals in F_p[x0..x3]: Groebner bases, saturation, Hilbert
//! data and zero-dimensional reducedness tests.

pub mod eliminant;
pub mod groebner;
pub mod hilbert;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use eliminant::{squarefree_eliminant, EliminantReport};
pub use groebner::{groebner_basis, NormalForm, DEFAULT_DEGREE_CAP};
pub use hilbert::HilbertSeries;

use crate::error::{Error, Result};
use crate::poly::form::PolyWire;
use crate::poly::monomial::monomials_of_degree;
use crate::poly::{DenseMatrix, Monomial, Poly, PrimeField};

/// A homogeneous ideal together with its reduced Groebner basis.
#[derive(Clone, Debug)]
pub struct Ideal {
    field: PrimeField,
    generators: Vec<Poly>,
    basis: Vec<Poly>,
    series: HilbertSeries,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.basis == other.basis
    }
}

impl Ideal {
    pub fn new(field: PrimeField, generators: Vec<Poly>) -> Result<Self> {
        Self::with_degree_cap(field, generators, DEFAULT_DEGREE_CAP)
    }

    pub fn with_degree_cap(field: PrimeField, generators: Vec<Poly>, cap: u32) -> Result<Self> {
        let basis = groebner_basis(field, &generators, cap)?;
        let lms: Vec<Monomial> = basis.iter().filter_map(|g| g.leading_monomial()).collect();
        let series = HilbertSeries::of_monomial_ideal(&lms);
        Ok(Ideal { field, generators, basis, series })
    }

    pub fn zero(field: PrimeField) -> Self {
        Ideal { field, generators: vec![], basis: vec![], series: HilbertSeries::of_monomial_ideal(&[]) }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }
    pub fn groebner_basis(&self) -> &[Poly] {
        &self.basis
    }
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().filter_map(|g| g.leading_monomial()).collect()
    }
    pub fn hilbert_series(&self) -> &HilbertSeries {
        &self.series
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].degree() == 0
    }

    pub fn normal_form(&self, g: &Poly) -> Poly {
        NormalForm::new(self.field, &self.basis).reduce(g)
    }

    pub fn contains(&self, g: &Poly) -> bool {
        self.normal_form(g).is_zero()
    }

    /// self is contained in other
    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        let mut nf = NormalForm::new(other.field, &other.basis);
        self.basis.iter().all(|g| nf.reduce(g).is_zero())
    }

    /// Equality of ideals, decided by comparing reduced Groebner bases.
    pub fn ideal_equal(&self, other: &Ideal) -> bool {
        self == other
    }

    pub fn hilbert_function(&self, n: i64) -> i64 {
        self.series.hilbert_function(n)
    }

    pub fn hilbert_polynomial(&self, n: i64) -> i64 {
        self.series.hilbert_polynomial(n)
    }

    pub fn krull_dimension(&self) -> i64 {
        self.series.krull_dimension()
    }

    pub fn projective_dimension(&self) -> i64 {
        self.series.projective_dimension()
    }

    /// Degree of a zero-dimensional (or empty) projective scheme.
    pub fn degree(&self) -> Result<u64> {
        let pd = self.projective_dimension();
        if pd > 0 {
            return Err(Error::NotZeroDimensional(pd));
        }
        Ok(self.series.degree() as u64)
    }

    /// Standard monomials of degree d, descending.
    pub fn standard_monomials(&self, d: u32) -> Vec<Monomial> {
        let lms = self.leading_monomials();
        monomials_of_degree(d).into_iter().filter(|m| !lms.iter().any(|l| l.divides(m))).collect()
    }

    /// The image under x_i -> sum_j a[i][j] x_j.
    pub fn transform(&self, a: &[[u64; 4]; 4]) -> Result<Ideal> {
        let gens: Vec<Poly> = self.basis.iter().map(|g| g.linear_substitute(a)).collect();
        Ideal::new(self.field, gens)
    }

    /// Saturation with respect to the irrelevant ideal, computed as I : l^inf
    /// for a random linear form l. Fails with probability about deg/p when l
    /// vanishes at a point of the zero set.
    pub fn saturate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Ideal> {
        let f = self.field;
        if self.basis.is_empty() || self.is_unit() {
            return Ok(self.clone());
        }
        let a: [u64; 4] = [f.random(rng), f.random(rng), f.random(rng), f.random_nonzero(rng)];
        let inv = f.inv(a[3]);
        // psi: x3 -> l, psi^{-1}: x3 -> (x3 - a0 x0 - a1 x1 - a2 x2) / a3
        let psi = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], a];
        let mut psi_inv = psi;
        psi_inv[3] = [f.neg(f.mul(a[0], inv)), f.neg(f.mul(a[1], inv)), f.neg(f.mul(a[2], inv)), inv];
        let pulled = self.transform(&psi_inv)?;
        let stripped: Vec<Poly> = pulled.basis.iter().map(|g| g.strip_variable(3).1).collect();
        let pushed: Vec<Poly> = stripped.iter().map(|g| g.linear_substitute(&psi)).collect();
        Ideal::new(f, pushed)
    }

    pub fn to_wire(&self) -> IdealWire {
        IdealWire {
            char: self.field.p(),
            generators: self.generators.iter().map(|g| g.to_wire()).collect(),
            groebner_basis: Some(self.basis.iter().map(|g| g.to_wire()).collect()),
        }
    }

    pub fn from_wire(w: &IdealWire) -> Result<Ideal> {
        let field = PrimeField::new(w.char)?;
        let gens = w.generators.iter().map(Poly::from_wire).collect::<Result<Vec<_>>>()?;
        for g in &gens {
            if g.field() != field {
                return Err(Error::FieldMismatch(g.field().p(), field.p()));
            }
        }
        Ideal::new(field, gens)
    }
}

/// JSON form of an ideal. The Groebner basis is informational and
/// recomputed on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealWire {
    pub char: u64,
    pub generators: Vec<PolyWire>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groebner_basis: Option<Vec<PolyWire>>,
}

/// A uniformly random invertible 4x4 matrix over F_p.
pub fn random_invertible<R: Rng + ?Sized>(f: PrimeField, rng: &mut R) -> [[u64; 4]; 4] {
    loop {
        let mut a = [[0u64; 4]; 4];
        for row in a.iter_mut() {
            for v in row.iter_mut() {
                *v = f.random(rng);
            }
        }
        let m = DenseMatrix::from_rows(&a.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
        if m.determinant(f).unwrap() != 0 {
            return a;
        }
    }
}
