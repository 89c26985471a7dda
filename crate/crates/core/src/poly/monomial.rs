//! Monomials in x0..x3 under degree reverse lexicographic order with x0 > x1 > x2 > x3.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

pub const NVARS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Monomial(pub [u16; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn var(i: usize) -> Self {
        let mut e = [0; NVARS];
        e[i] = 1;
        Monomial(e)
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
            self.0[3] + other.0[3],
        ])
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        (0..NVARS).all(|i| self.0[i] <= other.0[i])
    }

    /// other / self, if self divides other.
    #[inline]
    pub fn quotient(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial([
                other.0[0] - self.0[0],
                other.0[1] - self.0[1],
                other.0[2] - self.0[2],
                other.0[3] - self.0[3],
            ]))
        } else {
            None
        }
    }

    #[inline]
    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut e = [0; NVARS];
        for (i, v) in e.iter_mut().enumerate() {
            *v = self.0[i].max(other.0[i]);
        }
        Monomial(e)
    }

    #[inline]
    pub fn coprime(&self, other: &Monomial) -> bool {
        (0..NVARS).all(|i| self.0[i] == 0 || other.0[i] == 0)
    }

    /// Position within the degree slice, listed in descending order.
    #[inline]
    pub fn index(&self) -> usize {
        let d = self.degree() as usize;
        let [_, e1, e2, e3] = self.0.map(|e| e as usize);
        let s = d - e3;
        binom3(d) - binom3(s) + e2 * (s + 1) - e2 * e2.saturating_sub(1) / 2 + e1
    }

    pub fn from_index(d: u32, idx: usize) -> Monomial {
        monomials_of_degree(d)[idx]
    }
}

/// Number of monomials of degree d in four variables, C(d+3,3).
#[inline]
pub fn binom3(d: usize) -> usize {
    (d + 1) * (d + 2) * (d + 3) / 6
}

/// dim_k R_d for R = k[x0..x3]; zero for negative d.
pub fn dim_degree(d: i64) -> usize {
    if d < 0 {
        0
    } else {
        binom3(d as usize)
    }
}

/// All monomials of degree d, in descending degrevlex order.
pub fn monomials_of_degree(d: u32) -> Vec<Monomial> {
    let d = d as u16;
    let mut out = Vec::with_capacity(binom3(d as usize));
    for e3 in 0..=d {
        for e2 in 0..=d - e3 {
            for e1 in 0..=d - e3 - e2 {
                out.push(Monomial([d - e3 - e2 - e1, e1, e2, e3]));
            }
        }
    }
    out
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for i in (0..NVARS).rev() {
            match self.0[i].cmp(&other.0[i]) {
                Ordering::Equal => continue,
                o => return o.reverse(),
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}
