//! Bundles of the form sum of Omega^1(t) and O(s) on P^3: validation, Bott
//! cohomology, cohomology tables of tensor expressions, Riemann-Roch and the
//! arithmetic candidate enumerator for 1/2-even sets.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::{tensor, BundleComplex, Provenance};
use crate::error::{Error, Result};
use crate::poly::monomial::dim_degree;
use crate::poly::{MatrixOfForms, Poly, PrimeField};

/// E = sum of Omega^1(t)^mult plus sum of O(s)^mult, with parity delta.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleSpec {
    pub delta: u8,
    #[serde(default)]
    pub omega: Vec<(i64, u32)>,
    #[serde(default, with = "twist_map")]
    pub line: BTreeMap<i64, u32>,
}

mod twist_map {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<i64, u32>, s: S) -> Result<S::Ok, S::Error> {
        let sm: BTreeMap<String, u32> = m.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        sm.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<i64, u32>, D::Error> {
        let sm = BTreeMap::<String, u32>::deserialize(d)?;
        sm.into_iter()
            .map(|(k, v)| k.trim().parse::<i64>().map(|k| (k, v)).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Outcome of [`BundleSpec::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Validation {
    Accepted,
    Rejected(String),
}

impl BundleSpec {
    pub fn split(delta: u8, line: &[(i64, u32)]) -> Self {
        BundleSpec { delta, omega: vec![], line: line.iter().copied().collect() }
    }

    /// The shape Omega^1(-2)^k + O(-2)^m2 + O(-3)^m3 + O(-4)^m4 with delta = 1.
    pub fn half_even(k: u32, m2: u32, m3: u32, m4: u32) -> Self {
        let mut line = BTreeMap::new();
        for (t, m) in [(-2, m2), (-3, m3), (-4, m4)] {
            if m > 0 {
                line.insert(t, m);
            }
        }
        let omega = if k > 0 { vec![(-2, k)] } else { vec![] };
        BundleSpec { delta: 1, omega, line }
    }

    pub fn rank(&self) -> i64 {
        3 * self.omega.iter().map(|o| o.1 as i64).sum::<i64>() + self.line.values().map(|&m| m as i64).sum::<i64>()
    }

    /// c1(Omega^1(t)) = -4 + 3t and c1(O(s)) = s.
    pub fn c1(&self) -> i64 {
        self.omega.iter().map(|&(t, m)| (3 * t - 4) * m as i64).sum::<i64>()
            + self.line.iter().map(|(&s, &m)| s * m as i64).sum::<i64>()
    }

    /// Accepted iff 2 c1 + rank (6 + delta) = 6.
    pub fn validate(&self) -> Validation {
        if self.delta > 1 {
            return Validation::Rejected(format!("delta must be 0 or 1, got {}", self.delta));
        }
        if self.rank() == 0 {
            return Validation::Rejected("zero bundle".into());
        }
        if self.omega.iter().any(|o| o.1 == 0) || self.line.values().any(|&m| m == 0) {
            return Validation::Rejected("zero multiplicity".into());
        }
        let lhs = 2 * self.c1() + self.rank() * (6 + self.delta as i64);
        if lhs == 6 {
            Validation::Accepted
        } else {
            Validation::Rejected(format!("2c1 + rank(6+delta) = {lhs}, expected 6"))
        }
    }

    pub fn is_accepted(&self) -> bool {
        self.validate() == Validation::Accepted
    }

    pub fn is_split(&self) -> bool {
        self.omega.is_empty()
    }

    /// (k, m2, m3, m4) when the spec has the 1/2-even shape.
    pub fn half_even_dims(&self) -> Option<(u32, u32, u32, u32)> {
        if self.delta != 1 {
            return None;
        }
        let k = match self.omega.as_slice() {
            [] => 0,
            [(-2, k)] => *k,
            _ => return None,
        };
        if self.line.keys().any(|t| ![-2, -3, -4].contains(t)) {
            return None;
        }
        let g = |t| self.line.get(&t).copied().unwrap_or(0);
        Some((k, g(-2), g(-3), g(-4)))
    }

    /// Line-bundle twists in a fixed order: omega blocks are not included.
    pub fn line_twists(&self) -> Vec<i64> {
        self.line.iter().flat_map(|(&t, &m)| std::iter::repeat_n(t, m as usize)).collect()
    }

    pub fn omega_twists(&self) -> Vec<i64> {
        self.omega.iter().flat_map(|&(t, m)| std::iter::repeat_n(t, m as usize)).collect()
    }
}

/// The kinds of summand that appear in tensor expressions of E.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Elementary {
    O,
    Omega,
    T,
    S2Omega,
    L2Omega,
    S2T,
    L2T,
    OmegaT,
}

/// h^0..h^3 of O(n) by Bott's formula.
pub fn bott_line(n: i64) -> [u64; 4] {
    [dim_degree(n) as u64, 0, 0, dim_degree(-4 - n) as u64]
}

/// h^0..h^3 of Omega^1(n) from the Euler sequence 0 -> Omega^1(n) -> O(n-1)^4 -> O(n) -> 0.
pub fn bott_omega(n: i64) -> [u64; 4] {
    let h0 = 4 * dim_degree(n - 1) as i64 - dim_degree(n) as i64 + if n == 0 { 1 } else { 0 };
    let h3 = 4 * dim_degree(-3 - n) as i64 - dim_degree(-4 - n) as i64;
    [h0.max(0) as u64, (n == 0) as u64, 0, h3.max(0) as u64]
}

pub fn bott_cohomology(kind: Elementary, n: i64) -> Option<[u64; 4]> {
    match kind {
        Elementary::O => Some(bott_line(n)),
        Elementary::Omega => Some(bott_omega(n)),
        _ => None,
    }
}

fn lin(f: PrimeField, i: usize) -> Poly {
    Poly::var(f, i)
}

fn pairs_le() -> Vec<(usize, usize)> {
    (0..4).flat_map(|i| (i..4).map(move |j| (i, j))).collect()
}

fn pairs_lt() -> Vec<(usize, usize)> {
    (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect()
}

/// A complex of split bundles quasi-isomorphic to the elementary bundle twisted by t.
pub fn euler_complex(kind: Elementary, t: i64, f: PrimeField) -> Result<BundleComplex> {
    let x = |i| lin(f, i);
    let z = |d: u32| Poly::zero(f, d);
    let c = match kind {
        Elementary::O => BundleComplex::single(f, vec![t]),
        Elementary::Omega => {
            let m = MatrixOfForms::new(f, vec![t], vec![t - 1; 4], vec![(0..4).map(x).collect()])?;
            BundleComplex::new(0, vec![vec![t - 1; 4], vec![t]], vec![m], Provenance::EulerReplaced)?
        }
        Elementary::T => {
            let m = MatrixOfForms::new(f, vec![t + 1; 4], vec![t], (0..4).map(|i| vec![x(i)]).collect())?;
            BundleComplex::new(-1, vec![vec![t], vec![t + 1; 4]], vec![m], Provenance::EulerReplaced)?
        }
        Elementary::S2Omega => {
            // e_i e_j -> x_j e_i + x_i e_j
            let src = pairs_le();
            let mut e = vec![vec![z(1); src.len()]; 4];
            for (c, &(i, j)) in src.iter().enumerate() {
                e[i][c] = e[i][c].add(&x(j))?;
                e[j][c] = e[j][c].add(&x(i))?;
            }
            let m = MatrixOfForms::new(f, vec![t - 1; 4], vec![t - 2; 10], e)?;
            BundleComplex::new(0, vec![vec![t - 2; 10], vec![t - 1; 4]], vec![m], Provenance::EulerReplaced)?
        }
        Elementary::L2Omega => {
            // e_i ^ e_j -> x_i e_j - x_j e_i -> contraction with x
            let src = pairs_lt();
            let mut e = vec![vec![z(1); src.len()]; 4];
            for (c, &(i, j)) in src.iter().enumerate() {
                e[j][c] = x(i);
                e[i][c] = x(j).neg();
            }
            let m0 = MatrixOfForms::new(f, vec![t - 1; 4], vec![t - 2; 6], e)?;
            let m1 = MatrixOfForms::new(f, vec![t], vec![t - 1; 4], vec![(0..4).map(x).collect()])?;
            BundleComplex::new(0, vec![vec![t - 2; 6], vec![t - 1; 4], vec![t]], vec![m0, m1], Provenance::EulerReplaced)?
        }
        Elementary::S2T => {
            // e_i -> s e_i with s = sum x_j e_j
            let dst = pairs_le();
            let mut e = vec![vec![z(1); 4]; dst.len()];
            for (r, &(a, b)) in dst.iter().enumerate() {
                e[r][a] = e[r][a].add(&x(b))?;
                if a != b {
                    e[r][b] = e[r][b].add(&x(a))?;
                }
            }
            let m = MatrixOfForms::new(f, vec![t + 2; 10], vec![t + 1; 4], e)?;
            BundleComplex::new(-1, vec![vec![t + 1; 4], vec![t + 2; 10]], vec![m], Provenance::EulerReplaced)?
        }
        Elementary::L2T => {
            // 1 -> s, e_i -> s ^ e_i
            let m0 = MatrixOfForms::new(f, vec![t + 1; 4], vec![t], (0..4).map(|i| vec![x(i)]).collect())?;
            let dst = pairs_lt();
            let mut e = vec![vec![z(1); 4]; dst.len()];
            for (r, &(a, b)) in dst.iter().enumerate() {
                // s ^ e_i = sum_j x_j e_j ^ e_i
                e[r][b] = x(a);
                e[r][a] = x(b).neg();
            }
            let m1 = MatrixOfForms::new(f, vec![t + 2; 6], vec![t + 1; 4], e)?;
            BundleComplex::new(-2, vec![vec![t], vec![t + 1; 4], vec![t + 2; 6]], vec![m0, m1], Provenance::EulerReplaced)?
        }
        Elementary::OmegaT => {
            let a = euler_complex(Elementary::Omega, t, f)?;
            let b = euler_complex(Elementary::T, 0, f)?;
            tensor(&a, &b, f)?
        }
    };
    Ok(c)
}

/// h^0..h^3 of an elementary bundle twisted by t, from its Euler complex.
pub fn elementary_cohomology(kind: Elementary, t: i64, f: PrimeField) -> Result<[u64; 4]> {
    let c = euler_complex(kind, t, f)?;
    let h = c.hypercohomology(0)?;
    for j in h.start..h.start + h.dims.len() as i64 {
        if !(0..=3).contains(&j) && h.get(j) != 0 {
            return Err(Error::Invalid(format!("{kind:?}({t}) has hypercohomology in degree {j}")));
        }
    }
    Ok([h.get(0), h.get(1), h.get(2), h.get(3)])
}

/// A formal direct sum of twisted elementary bundles, with integer
/// multiplicities (a trace summand may be subtracted).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleExpr {
    pub summands: BTreeMap<(Elementary, i64), i64>,
}

impl BundleExpr {
    fn add(&mut self, kind: Elementary, t: i64, mult: i64) {
        if mult == 0 {
            return;
        }
        let e = self.summands.entry((kind, t)).or_insert(0);
        *e += mult;
        if *e == 0 {
            self.summands.remove(&(kind, t));
        }
    }

    pub fn rank(&self) -> i64 {
        self.summands
            .iter()
            .map(|(&(k, _), &m)| {
                m * match k {
                    Elementary::O => 1,
                    Elementary::Omega | Elementary::T | Elementary::L2Omega | Elementary::L2T => 3,
                    Elementary::S2Omega | Elementary::S2T => 6,
                    Elementary::OmegaT => 9,
                }
            })
            .sum()
    }

    pub fn cohomology(&self, f: PrimeField) -> Result<[i64; 4]> {
        let mut h = [0i64; 4];
        for (&(kind, t), &m) in &self.summands {
            let c = elementary_cohomology(kind, t, f)?;
            for i in 0..4 {
                h[i] += m * c[i] as i64;
            }
        }
        if h.iter().any(|&v| v < 0) {
            return Err(Error::Invalid("negative cohomology in a formal difference".into()));
        }
        Ok(h)
    }

    /// Euler characteristic from the split terms of each Euler complex.
    pub fn euler_characteristic(&self, f: PrimeField) -> Result<i64> {
        let mut chi = 0;
        for (&(kind, t), &m) in &self.summands {
            chi += m * euler_complex(kind, t, f)?.euler_characteristic(0);
        }
        Ok(chi)
    }
}

/// Which bundle expression of E to tabulate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expression {
    E,
    Dual,
    Sym2,
    Wedge2Dual,
    Traceless,
}

fn c2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// Decomposition of the expression of E twisted by n into elementary summands.
pub fn decompose(spec: &BundleSpec, expr: Expression, n: i64) -> BundleExpr {
    use Elementary::*;
    let mut out = BundleExpr::default();
    let om: Vec<(i64, i64)> = spec.omega.iter().map(|&(t, m)| (t, m as i64)).collect();
    let li: Vec<(i64, i64)> = spec.line.iter().map(|(&t, &m)| (t, m as i64)).collect();
    match expr {
        Expression::E => {
            om.iter().for_each(|&(t, m)| out.add(Omega, t + n, m));
            li.iter().for_each(|&(s, m)| out.add(O, s + n, m));
        }
        Expression::Dual => {
            om.iter().for_each(|&(t, m)| out.add(T, n - t, m));
            li.iter().for_each(|&(s, m)| out.add(O, n - s, m));
        }
        Expression::Sym2 | Expression::Wedge2Dual => {
            let sym = expr == Expression::Sym2;
            let sg = if sym { 1 } else { -1 };
            let (big_s, big_l, small) = if sym { (S2Omega, L2Omega, Omega) } else { (L2T, S2T, T) };
            for (a, &(t, m)) in om.iter().enumerate() {
                // S^2(Omega(t) x W) = S^2W x S^2Omega(2t) + L^2W x L^2Omega(2t); dually for L^2
                out.add(big_s, sg * 2 * t + n, m * (m + 1) / 2);
                out.add(big_l, sg * 2 * t + n, c2(m));
                for &(t2, m2) in &om[a + 1..] {
                    out.add(big_s, sg * (t + t2) + n, m * m2);
                    out.add(big_l, sg * (t + t2) + n, m * m2);
                }
                for &(s, ms) in &li {
                    out.add(small, sg * (t + s) + n, m * ms);
                }
            }
            for (a, &(s, m)) in li.iter().enumerate() {
                let self_mult = if sym { m * (m + 1) / 2 } else { c2(m) };
                out.add(O, sg * 2 * s + n, self_mult);
                for &(s2, m2) in &li[a + 1..] {
                    out.add(O, sg * (s + s2) + n, m * m2);
                }
            }
        }
        Expression::Traceless => {
            for &(t, m) in &om {
                for &(t2, m2) in &om {
                    out.add(OmegaT, t - t2 + n, m * m2);
                }
                for &(s, ms) in &li {
                    out.add(Omega, t - s + n, m * ms);
                    out.add(T, s - t + n, m * ms);
                }
            }
            for &(s, m) in &li {
                for &(s2, m2) in &li {
                    out.add(O, s - s2 + n, m * m2);
                }
            }
            out.add(O, n, -1);
        }
    }
    out
}

/// h^i of one expression at one twist, i = 0..3.
pub type CohomologyRow = [i64; 4];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub expression: Expression,
    pub rows: BTreeMap<i64, CohomologyRow>,
}

pub fn cohomology_table(spec: &BundleSpec, expr: Expression, twists: impl IntoIterator<Item = i64>, f: PrimeField) -> Result<CohomologyTable> {
    let mut rows = BTreeMap::new();
    for n in twists {
        rows.insert(n, decompose(spec, expr, n).cohomology(f)?);
    }
    Ok(CohomologyTable { expression: expr, rows })
}

/// Tables for S^2E(6), sl(E)(-1) and L^2E^dual(-8) of a 1/2-even shaped spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedTables {
    pub sym2_e_6: CohomologyRow,
    pub sl_e_minus1: CohomologyRow,
    pub wedge2_dual_minus8: CohomologyRow,
}

pub fn derived_dim_tables(spec: &BundleSpec, f: PrimeField) -> Result<DerivedTables> {
    if spec.half_even_dims().is_none() {
        return Err(Error::InvalidBundle("spec is not of the form Omega(-2)^k + O(-2)^m2 + O(-3)^m3 + O(-4)^m4 with delta 1".into()));
    }
    Ok(DerivedTables {
        sym2_e_6: decompose(spec, Expression::Sym2, 6).cohomology(f)?,
        sl_e_minus1: decompose(spec, Expression::Traceless, -1).cohomology(f)?,
        wedge2_dual_minus8: decompose(spec, Expression::Wedge2Dual, -8).cohomology(f)?,
    })
}

/// chi(F(n)) = (44 + 3(2n - delta)(2n - 4 - delta) - |w|) / 4.
pub fn chi_rr(delta: u8, node_count: i64, n: i64) -> Result<i64> {
    let d = delta as i64;
    let num = 44 + 3 * (2 * n - d) * (2 * n - 4 - d) - node_count;
    if num.rem_euclid(4) != 0 {
        return Err(Error::Invalid(format!("(delta={delta}, |w|={node_count}) gives non-integral chi at n={n}")));
    }
    Ok(num / 4)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CandidateStatus {
    /// Passes the arithmetic constraints, not decided by them.
    Admitted,
    /// Excluded by the vanishing-defect analysis of the spectral sequence.
    Excluded,
    /// One of the two tuples that remain.
    Surviving,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub k: u32,
    pub m2: u32,
    pub m3: u32,
    pub m4: u32,
    pub nodes: u32,
    pub status: CandidateStatus,
}

/// Every (k, m2, m3, m4) with entries at most `bound` satisfying
/// |w| = 35 - 4(m2 - k) >= 1, m3 <= 6 - k, k + 3 m2 + m3 - m4 = 6 and,
/// when m2 = 1, m3 >= m4.
pub fn enumerate_candidates(bound: u32) -> Vec<Candidate> {
    let mut out = Vec::new();
    for k in 0..=bound {
        for m2 in 0..=bound {
            for m3 in 0..=bound {
                for m4 in 0..=bound {
                    let nodes = 35 - 4 * (m2 as i64 - k as i64);
                    if nodes < 1 || m3 as i64 > 6 - k as i64 {
                        continue;
                    }
                    if (k + 3 * m2 + m3) as i64 - m4 as i64 != 6 {
                        continue;
                    }
                    if m2 == 1 && m3 < m4 {
                        continue;
                    }
                    let excluded = m2 >= 2 || (m2 == 0 && ![0, 4, 5, 6].contains(&k)) || (m2 == 1 && k != 0);
                    // the remaining analysis forces m4 = 0, and m3 >= 4 when m2 = 0
                    let surviving = !excluded && k == 0 && m4 == 0 && (m2 == 1 || m3 >= 4);
                    let status = if excluded {
                        CandidateStatus::Excluded
                    } else if surviving {
                        CandidateStatus::Surviving
                    } else {
                        CandidateStatus::Admitted
                    };
                    out.push(Candidate { k, m2, m3, m4, nodes: nodes as u32, status });
                }
            }
        }
    }
    out
}
