//! Hilbert series of monomial ideals in four variables.
//!
//! The series of R/J is N(t)/(1-t)^4; N is computed by the pivot recursion
//! N(J) = N(J + (x^e)) + t^e N(J : x^e).

use serde::{Deserialize, Serialize};

use crate::poly::Monomial;

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn poly_mul_one_minus_t_pow(n: &mut Vec<i64>, e: usize) {
    let mut out = vec![0i64; n.len() + e];
    for (k, &c) in n.iter().enumerate() {
        out[k] += c;
        out[k + e] -= c;
    }
    *n = out;
}

fn add_shifted(acc: &mut Vec<i64>, other: &[i64], shift: usize) {
    if acc.len() < other.len() + shift {
        acc.resize(other.len() + shift, 0);
    }
    for (k, &c) in other.iter().enumerate() {
        acc[k + shift] += c;
    }
}

fn numerator_rec(gens: Vec<Monomial>) -> Vec<i64> {
    let gens = minimalize(gens);
    if gens.is_empty() {
        return vec![1];
    }
    let pairwise_coprime = gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| a.coprime(b)));
    if pairwise_coprime {
        let mut n = vec![1i64];
        for g in &gens {
            poly_mul_one_minus_t_pow(&mut n, g.degree() as usize);
        }
        return n;
    }
    // pivot on the variable occurring in most non-pure-power generators
    let mut best = (0usize, 0usize);
    for v in 0..4 {
        let cnt = gens.iter().filter(|m| m.0[v] > 0 && m.degree() > m.0[v] as u32).count();
        if cnt > best.1 {
            best = (v, cnt);
        }
    }
    let v = best.0;
    let mut exps: Vec<u16> = gens
        .iter()
        .filter(|m| m.0[v] > 0 && m.degree() > m.0[v] as u32)
        .map(|m| m.0[v])
        .collect();
    exps.sort_unstable();
    let e = exps[exps.len() / 2].max(1);
    let mut piv = Monomial::ONE;
    piv.0[v] = e;
    let mut plus = gens.clone();
    plus.push(piv);
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|m| {
            let mut x = *m;
            x.0[v] = x.0[v].saturating_sub(e);
            x
        })
        .collect();
    let mut n = numerator_rec(plus);
    add_shifted(&mut n, &numerator_rec(colon), e as usize);
    while n.last() == Some(&0) {
        n.pop();
    }
    n
}

/// C(m+3, 3) as a polynomial in m (so it vanishes at m = -1, -2, -3).
fn binom3_poly(m: i64) -> i64 {
    (m + 1) * (m + 2) * (m + 3) / 6
}

/// Hilbert series data of R/J for a monomial ideal J.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSeries {
    /// Coefficients of N(t), lowest degree first.
    pub numerator: Vec<i64>,
}

impl HilbertSeries {
    pub fn of_monomial_ideal(gens: &[Monomial]) -> Self {
        let mut numerator = numerator_rec(gens.to_vec());
        while numerator.last() == Some(&0) {
            numerator.pop();
        }
        HilbertSeries { numerator }
    }

    pub fn hilbert_function(&self, n: i64) -> i64 {
        self.numerator
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let m = n - k as i64;
                if m < 0 {
                    0
                } else {
                    c * binom3_poly(m)
                }
            })
            .sum()
    }

    pub fn hilbert_polynomial(&self, n: i64) -> i64 {
        self.numerator.iter().enumerate().map(|(k, &c)| c * binom3_poly(n - k as i64)).sum()
    }

    /// HF(n) = HP(n) for every n at or above this index.
    pub fn regularity_index(&self) -> i64 {
        (self.numerator.len() as i64 - 1 - 3).max(0)
    }

    /// (multiplicity of t = 1 as a root of N, value of the quotient at 1).
    fn split_at_one(&self) -> (usize, i64) {
        let mut q = self.numerator.clone();
        let mut j = 0;
        while !q.is_empty() && q.iter().sum::<i64>() == 0 {
            // synthetic division by (1 - t)
            let mut out = vec![0i64; q.len() - 1];
            let mut acc = 0;
            for k in 0..q.len() - 1 {
                acc += q[k];
                out[k] = acc;
            }
            q = out;
            j += 1;
            while q.last() == Some(&0) {
                q.pop();
            }
        }
        (j, q.iter().sum())
    }

    /// Krull dimension of R/J; -1 for the unit ideal.
    pub fn krull_dimension(&self) -> i64 {
        if self.numerator.is_empty() {
            return -1;
        }
        4 - self.split_at_one().0 as i64
    }

    /// Dimension of the projective zero set; -1 when empty.
    pub fn projective_dimension(&self) -> i64 {
        (self.krull_dimension() - 1).max(-1)
    }

    /// Degree of the projective scheme (0 when empty).
    pub fn degree(&self) -> i64 {
        if self.projective_dimension() < 0 {
            return 0;
        }
        self.split_at_one().1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::monomial::monomials_of_degree;

    fn brute(gens: &[Monomial], n: u32) -> i64 {
        monomials_of_degree(n).iter().filter(|m| !gens.iter().any(|g| g.divides(m))).count() as i64
    }

    #[test]
    fn matches_standard_monomial_count() {
        let cases: Vec<Vec<Monomial>> = vec![
            vec![],
            vec![Monomial([2, 0, 0, 0])],
            vec![Monomial([1, 1, 0, 0]), Monomial([0, 1, 1, 0]), Monomial([0, 0, 2, 1]), Monomial([3, 0, 0, 1])],
            vec![Monomial([0, 2, 0, 0]), Monomial([0, 1, 1, 0]), Monomial([0, 0, 2, 0])],
            vec![Monomial([2, 1, 0, 0]), Monomial([1, 0, 3, 0]), Monomial([0, 2, 2, 1]), Monomial([0, 0, 0, 4])],
        ];
        for gens in cases {
            let hs = HilbertSeries::of_monomial_ideal(&gens);
            for n in 0..14 {
                assert_eq!(hs.hilbert_function(n), brute(&gens, n as u32), "{gens:?} at {n}");
            }
            let r = hs.regularity_index();
            for n in r..r + 5 {
                assert_eq!(hs.hilbert_function(n), hs.hilbert_polynomial(n));
            }
        }
    }

    #[test]
    fn dimensions() {
        assert_eq!(HilbertSeries::of_monomial_ideal(&[]).projective_dimension(), 3);
        let plane_quadric = HilbertSeries::of_monomial_ideal(&[Monomial([2, 0, 0, 0])]);
        assert_eq!((plane_quadric.projective_dimension(), plane_quadric.degree()), (2, 2));
        let twisted = HilbertSeries::of_monomial_ideal(&[Monomial([0, 2, 0, 0]), Monomial([0, 1, 1, 0]), Monomial([0, 0, 2, 0])]);
        assert_eq!((twisted.projective_dimension(), twisted.degree()), (1, 3));
        let unit = HilbertSeries::of_monomial_ideal(&[Monomial::ONE]);
        assert_eq!(unit.krull_dimension(), -1);
        let fat = HilbertSeries::of_monomial_ideal(&[Monomial([0, 2, 0, 0]), Monomial([0, 0, 1, 0]), Monomial([0, 0, 0, 1])]);
        assert_eq!((fat.projective_dimension(), fat.degree()), (0, 2));
        let irrelevant = HilbertSeries::of_monomial_ideal(&[Monomial::var(0), Monomial::var(1), Monomial::var(2), Monomial::var(3)]);
        assert_eq!(irrelevant.projective_dimension(), -1);
    }
}
