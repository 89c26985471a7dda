//! Univariate polynomials over F_p, coefficients stored low degree first.

use super::field::PrimeField;

pub type UPoly = Vec<u64>;

pub fn trim(mut a: UPoly) -> UPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Degree, or None for the zero polynomial.
pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(f: PrimeField, a: &[u64], b: &[u64]) -> UPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0))).collect())
}

pub fn sub(f: PrimeField, a: &[u64], b: &[u64]) -> UPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0))).collect())
}

pub fn mul(f: PrimeField, a: &[u64], b: &[u64]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// (quotient, remainder). Panics on division by zero.
pub fn divrem(f: PrimeField, a: &[u64], b: &[u64]) -> (UPoly, UPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let mut r = trim(a.to_vec());
    if r.len() <= db {
        return (vec![], r);
    }
    let inv = f.inv(b[db]);
    let mut q = vec![0u64; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(r[dr], inv);
        q[dr - db] = c;
        for i in 0..=db {
            r[dr - db + i] = f.sub_mul(r[dr - db + i], c, b[i]);
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn monic(f: PrimeField, a: &[u64]) -> UPoly {
    let a = trim(a.to_vec());
    match a.last() {
        Some(&lc) => {
            let inv = f.inv(lc);
            a.iter().map(|&c| f.mul(c, inv)).collect()
        }
        None => a,
    }
}

pub fn gcd(f: PrimeField, a: &[u64], b: &[u64]) -> UPoly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = divrem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

pub fn derivative(f: PrimeField, a: &[u64]) -> UPoly {
    trim(a.iter().enumerate().skip(1).map(|(i, &c)| f.mul(c, i as u64 % f.p())).collect())
}

pub fn eval(f: PrimeField, a: &[u64], x: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

fn mulmod(f: PrimeField, a: &[u64], b: &[u64], m: &[u64]) -> UPoly {
    divrem(f, &mul(f, a, b), m).1
}

fn pow_mod(f: PrimeField, a: &[u64], mut e: u64, m: &[u64]) -> UPoly {
    let mut base = divrem(f, a, m).1;
    let mut r = divrem(f, &[1], m).1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(f, &r, &base, m);
        }
        base = mulmod(f, &base, &base, m);
        e >>= 1;
    }
    r
}

pub fn is_squarefree(f: PrimeField, a: &[u64]) -> bool {
    match degree(a) {
        None => false,
        Some(0) => true,
        Some(_) => {
            let d = derivative(f, a);
            !d.is_empty() && degree(&gcd(f, a, &d)) == Some(0)
        }
    }
}

/// Degree of the radical, i.e. number of distinct roots in the algebraic closure.
pub fn radical_degree(f: PrimeField, a: &[u64]) -> usize {
    let a = trim(a.to_vec());
    if degree(&a).unwrap_or(0) == 0 {
        return 0;
    }
    let d = derivative(f, &a);
    if d.is_empty() {
        // a(x) = b(x^p), and F_p elements are their own p-th roots
        let b: UPoly = a.iter().step_by(f.p() as usize).copied().collect();
        return radical_degree(f, &b);
    }
    let mut g = gcd(f, &a, &d);
    let w = divrem(f, &a, &g).0;
    // strip from g every root shared with w; what is left is a p-th power
    loop {
        let y = gcd(f, &g, &w);
        if degree(&y).unwrap_or(0) == 0 {
            break;
        }
        g = divrem(f, &g, &y).0;
    }
    degree(&w).unwrap_or(0) + radical_degree(f, &g)
}

/// Degrees of the irreducible factors of a squarefree polynomial, with repetition.
pub fn factor_degrees(f: PrimeField, a: &[u64]) -> Vec<usize> {
    let mut g = monic(f, a);
    let mut out = Vec::new();
    let mut h = divrem(f, &[0, 1], &g).1; // x^{p^i} mod g
    let mut i = 0;
    while degree(&g).unwrap_or(0) >= 2 * (i + 1) {
        i += 1;
        h = pow_mod(f, &h, f.p(), &g);
        let t = sub(f, &h, &[0, 1]);
        let d = gcd(f, &g, &t);
        let dd = degree(&d).unwrap_or(0);
        if dd > 0 {
            for _ in 0..dd / i {
                out.push(i);
            }
            g = divrem(f, &g, &d).0;
            h = divrem(f, &h, &g).1;
        }
    }
    if let Some(dg) = degree(&g) {
        if dg > 0 {
            out.push(dg);
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_and_radical() {
        let f = PrimeField::new(101).unwrap();
        let a = mul(f, &[1, 1], &[2, 1]);
        assert!(is_squarefree(f, &a));
        let b = mul(f, &a, &[1, 1]);
        assert!(!is_squarefree(f, &b));
        assert_eq!(radical_degree(f, &b), 2);
        // (x^101 - 1) = (x-1)^101 in char 101
        let mut c = vec![0u64; 102];
        c[0] = 100;
        c[101] = 1;
        assert_eq!(radical_degree(f, &c), 1);
    }

    #[test]
    fn distinct_degree_pattern() {
        let f = PrimeField::new(7).unwrap();
        // (x^2+1) irreducible mod 7, times (x-1)(x-2), times x^3+x+1?
        let q = mul(f, &[1, 0, 1], &mul(f, &[6, 1], &[5, 1]));
        assert_eq!(factor_degrees(f, &q), vec![1, 1, 2]);
    }
}
