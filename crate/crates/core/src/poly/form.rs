//! Homogeneous forms over F_p in x0..x3, stored as sparse term lists.

use serde::{Deserialize, Serialize};

use super::field::PrimeField;
use super::monomial::{binom3, monomials_of_degree, Monomial, NVARS};
use crate::error::{Error, Result};

/// A homogeneous form. Terms are sorted in descending monomial order with
/// nonzero coefficients; the zero form still carries a degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: PrimeField,
    degree: u32,
    terms: Vec<(Monomial, u64)>,
}

impl Poly {
    pub fn zero(field: PrimeField, degree: u32) -> Self {
        Poly { field, degree, terms: Vec::new() }
    }

    pub fn constant(field: PrimeField, c: u64) -> Self {
        Self::monomial(field, Monomial::ONE, c)
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    pub fn var(field: PrimeField, i: usize) -> Self {
        Self::monomial(field, Monomial::var(i), 1)
    }

    pub fn monomial(field: PrimeField, m: Monomial, c: u64) -> Self {
        let c = c % field.p();
        let terms = if c == 0 { vec![] } else { vec![(m, c)] };
        Poly { field, degree: m.degree(), terms }
    }

    /// Linear form sum a_i x_i.
    pub fn linear(field: PrimeField, a: &[u64; NVARS]) -> Self {
        let mut dense = vec![0u64; NVARS];
        for i in 0..NVARS {
            dense[Monomial::var(i).index()] = a[i] % field.p();
        }
        Self::from_dense(field, 1, &dense)
    }

    /// Builds a form from arbitrary terms; duplicates are merged and all
    /// monomials must have degree `degree`.
    pub fn from_terms(field: PrimeField, degree: u32, terms: impl IntoIterator<Item = (Monomial, u64)>) -> Result<Self> {
        let mut v: Vec<(Monomial, u64)> = Vec::new();
        for (m, c) in terms {
            if m.degree() != degree {
                return Err(Error::NotHomogeneous(format!("monomial {m} in a form of degree {degree}")));
            }
            v.push((m, c % field.p()));
        }
        v.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, u64)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = field.add(last.1, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Ok(Poly { field, degree, terms: out })
    }

    /// From a dense coefficient vector indexed by [`Monomial::index`].
    pub fn from_dense(field: PrimeField, degree: u32, dense: &[u64]) -> Self {
        debug_assert_eq!(dense.len(), binom3(degree as usize));
        let mons = monomials_of_degree(degree);
        let terms = dense
            .iter()
            .zip(mons)
            .filter(|(c, _)| **c != 0)
            .map(|(c, m)| (m, *c))
            .collect();
        Poly { field, degree, terms }
    }

    pub fn to_dense(&self) -> Vec<u64> {
        let mut v = vec![0u64; binom3(self.degree as usize)];
        for (m, c) in &self.terms {
            v[m.index()] = *c;
        }
        v
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }
    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }
    #[inline]
    pub fn terms(&self) -> &[(Monomial, u64)] {
        &self.terms
    }
    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    pub fn leading(&self) -> Option<(Monomial, u64)> {
        self.terms.first().copied()
    }
    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|t| t.0)
    }

    pub fn coeff(&self, m: &Monomial) -> u64 {
        self.terms
            .binary_search_by(|t| m.cmp(&t.0))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    fn check_field(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p(), other.field.p()));
        }
        Ok(())
    }

    fn merge(&self, other: &Poly, sign: bool) -> Result<Poly> {
        self.check_field(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(if sign { other.neg() } else { other.clone() });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!("{} vs {}", self.degree, other.degree)));
        }
        let f = self.field;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let nb = |c: u64| if sign { f.neg(c) } else { c };
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 > b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 > a[i].0 {
                out.push((b[j].0, nb(b[j].1)));
                j += 1;
            } else {
                let c = f.add(a[i].1, nb(b[j].1));
                if c != 0 {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Ok(Poly { field: f, degree: self.degree, terms: out })
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.merge(other, true)
    }

    pub fn neg(&self) -> Poly {
        self.scale(self.field.neg(1))
    }

    pub fn scale(&self, c: u64) -> Poly {
        let c = c % self.field.p();
        if c == 0 {
            return Poly::zero(self.field, self.degree);
        }
        Poly {
            field: self.field,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, a)| (*m, self.field.mul(*a, c))).collect(),
        }
    }

    /// Scales so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) if c != 1 => self.scale(self.field.inv(c)),
            _ => self.clone(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u64) -> Poly {
        let c = c % self.field.p();
        if c == 0 {
            return Poly::zero(self.field, self.degree + m.degree());
        }
        Poly {
            field: self.field,
            degree: self.degree + m.degree(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), self.field.mul(*a, c))).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        let f = self.field;
        let d = self.degree + other.degree;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(f, d));
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms[0];
            return Ok(other.mul_monomial(&m, c));
        }
        if other.terms.len() == 1 {
            let (m, c) = other.terms[0];
            return Ok(self.mul_monomial(&m, c));
        }
        let mut acc = vec![0u64; binom3(d as usize)];
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let k = ma.mul(mb).index();
                acc[k] = f.add(acc[k], f.mul(*ca, *cb));
            }
        }
        Ok(Poly::from_dense(f, d, &acc))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one(self.field);
        for _ in 0..e {
            r = r.mul(self).expect("same field");
        }
        r
    }

    /// Exact division; fails if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        self.check_field(d)?;
        let f = self.field;
        let (lm, lc) = d.leading().ok_or_else(|| Error::NotDivisible("division by zero".into()))?;
        if d.degree > self.degree {
            if self.is_zero() {
                return Err(Error::NotDivisible("degree of divisor exceeds dividend".into()));
            }
            return Err(Error::NotDivisible("degree of divisor exceeds dividend".into()));
        }
        let qd = self.degree - d.degree;
        if self.is_zero() {
            return Ok(Poly::zero(f, qd));
        }
        let inv = f.inv(lc);
        let mut rem = self.to_dense();
        let mons = monomials_of_degree(self.degree);
        let mut q = vec![0u64; binom3(qd as usize)];
        for k in 0..rem.len() {
            let c = rem[k];
            if c == 0 {
                continue;
            }
            let Some(u) = lm.quotient(&mons[k]) else {
                return Err(Error::NotDivisible(format!("leftover term {}", mons[k])));
            };
            let a = f.mul(c, inv);
            q[u.index()] = a;
            for (m, b) in &d.terms {
                let idx = m.mul(&u).index();
                rem[idx] = f.sub_mul(rem[idx], a, *b);
            }
        }
        Ok(Poly::from_dense(f, qd, &q))
    }

    /// Largest power of x_i dividing a nonzero form, and the cofactor.
    pub fn strip_variable(&self, i: usize) -> (u32, Poly) {
        if self.is_zero() {
            return (0, self.clone());
        }
        let k = self.terms.iter().map(|(m, _)| m.0[i]).min().unwrap_or(0);
        if k == 0 {
            return (0, self.clone());
        }
        let mut terms: Vec<(Monomial, u64)> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0;
                e[i] -= k;
                (Monomial(e), *c)
            })
            .collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        (k as u32, Poly { field: self.field, degree: self.degree - k as u32, terms })
    }

    pub fn eval(&self, pt: &[u64; NVARS]) -> u64 {
        let f = self.field;
        let mut pows: Vec<Vec<u64>> = Vec::with_capacity(NVARS);
        for &x in pt {
            let mut v = Vec::with_capacity(self.degree as usize + 1);
            let mut acc = 1u64;
            for _ in 0..=self.degree {
                v.push(acc);
                acc = f.mul(acc, x % f.p());
            }
            pows.push(v);
        }
        let mut s = 0u64;
        for (m, c) in &self.terms {
            let mut t = *c;
            for i in 0..NVARS {
                t = f.mul(t, pows[i][m.0[i] as usize]);
            }
            s = f.add(s, t);
        }
        s
    }

    /// Partial derivative with respect to x_i.
    pub fn derivative(&self, i: usize) -> Poly {
        let f = self.field;
        if self.degree == 0 {
            return Poly::zero(f, 0);
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let c2 = f.mul(*c, e as u64 % f.p());
            if c2 == 0 {
                continue;
            }
            let mut ex = m.0;
            ex[i] -= 1;
            terms.push((Monomial(ex), c2));
        }
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Poly { field: f, degree: self.degree - 1, terms }
    }

    /// Substitutes x_i -> images[i]; all images must share one degree.
    pub fn substitute(&self, images: &[Poly; NVARS]) -> Result<Poly> {
        let f = self.field;
        let e = images[0].degree;
        for g in images {
            self.check_field(g)?;
            if g.degree != e && !g.is_zero() {
                return Err(Error::DegreeMismatch("substitution images of unequal degree".into()));
            }
        }
        let out_deg = self.degree * e;
        let mut pows: Vec<Vec<Poly>> = Vec::with_capacity(NVARS);
        for (i, g) in images.iter().enumerate() {
            let maxe = self.terms.iter().map(|(m, _)| m.0[i]).max().unwrap_or(0);
            let mut v = vec![Poly::one(f)];
            for k in 1..=maxe as usize {
                let next = v[k - 1].mul(g)?;
                v.push(next);
            }
            pows.push(v);
        }
        let mut acc = vec![0u64; binom3(out_deg as usize)];
        for (m, c) in &self.terms {
            let mut t = Poly::constant(f, *c);
            for i in 0..NVARS {
                t = t.mul(&pows[i][m.0[i] as usize])?;
            }
            for (mm, cc) in &t.terms {
                let k = mm.index();
                acc[k] = f.add(acc[k], *cc);
            }
        }
        Ok(Poly::from_dense(f, out_deg, &acc))
    }

    /// Linear change of coordinates x_i -> sum_j a[i][j] x_j.
    pub fn linear_substitute(&self, a: &[[u64; NVARS]; NVARS]) -> Poly {
        let imgs = [0, 1, 2, 3].map(|i| Poly::linear(self.field, &a[i]));
        self.substitute(&imgs).expect("linear substitution")
    }

    pub fn random<R: rand::Rng + ?Sized>(field: PrimeField, degree: u32, rng: &mut R) -> Poly {
        let dense: Vec<u64> = (0..binom3(degree as usize)).map(|_| field.random(rng)).collect();
        Poly::from_dense(field, degree, &dense)
    }

    pub fn to_wire(&self) -> PolyWire {
        PolyWire {
            char: self.field.p(),
            degree: Some(self.degree),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermWire { exponents: m.0, coeff: c.to_string() })
                .collect(),
        }
    }

    pub fn from_wire(w: &PolyWire) -> Result<Poly> {
        let field = PrimeField::new(w.char)?;
        let degree = match (w.degree, w.terms.first()) {
            (Some(d), _) => d,
            (None, Some(t)) => t.exponents.iter().map(|&e| e as u32).sum(),
            (None, None) => return Err(Error::Invalid("zero form without degree".into())),
        };
        let mut terms = Vec::with_capacity(w.terms.len());
        for t in &w.terms {
            let c: u64 = t
                .coeff
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("bad coefficient {:?}", t.coeff)))?;
            if c >= w.char {
                return Err(Error::Invalid(format!("coefficient {c} not reduced mod {}", w.char)));
            }
            terms.push((Monomial(t.exponents), c));
        }
        Poly::from_terms(field, degree, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermWire {
    pub exponents: [u16; NVARS],
    pub coeff: String,
}

/// JSON form of a polynomial: `{"char": p, "degree": d, "terms": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyWire {
    pub char: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    pub terms: Vec<TermWire>,
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_wire().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = PolyWire::deserialize(d)?;
        Poly::from_wire(&w).map_err(serde::de::Error::custom)
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if *m == Monomial::ONE {
                write!(f, "{c}")?;
            } else if *c == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fld() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn division_inverts_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let a = Poly::random(fld(), 3, &mut rng);
            let b = Poly::random(fld(), 4, &mut rng);
            let ab = a.mul(&b).unwrap();
            assert_eq!(ab.div_exact(&b).unwrap(), a);
        }
        let x0 = Poly::var(fld(), 0);
        let x1 = Poly::var(fld(), 1);
        assert!(x0.mul(&x0).unwrap().div_exact(&x1).is_err());
    }

    #[test]
    fn euler_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = Poly::random(fld(), 5, &mut rng);
        let mut s = Poly::zero(fld(), 5);
        for i in 0..4 {
            s = s.add(&Poly::var(fld(), i).mul(&f.derivative(i)).unwrap()).unwrap();
        }
        assert_eq!(s, f.scale(5));
    }

    #[test]
    fn substitution_matches_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = Poly::random(fld(), 4, &mut rng);
        let a = [[1, 2, 3, 4], [0, 1, 5, 6], [7, 0, 1, 0], [2, 2, 2, 1]];
        let g = f.linear_substitute(&a);
        let pt = [3u64, 1, 4, 1];
        let mut img = [0u64; 4];
        for i in 0..4 {
            img[i] = (0..4).map(|j| a[i][j] * pt[j]).sum::<u64>() % 101;
        }
        assert_eq!(g.eval(&pt), f.eval(&img));
    }

    #[test]
    fn wire_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = Poly::random(fld(), 3, &mut rng);
        let s = serde_json::to_string(&f).unwrap();
        let g: Poly = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
        let z = Poly::zero(fld(), 2);
        let zs = serde_json::to_string(&z).unwrap();
        assert_eq!(serde_json::from_str::<Poly>(&zs).unwrap(), z);
    }
}
