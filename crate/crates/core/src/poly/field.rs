//! Prime fields F_p with word-sized arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest accepted characteristic. Keeps products of two reduced elements below 2^64.
pub const MAX_CHAR: u64 = (1 << 32) - 1;

/// The default characteristic used by presets and the CLI.
pub const DEFAULT_CHAR: u64 = 32003;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u64,
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    /// Odd primes up to [`MAX_CHAR`]. Characteristic 2 is rejected because
    /// symmetric determinantal constructions need 2 to be invertible.
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidField(p, "characteristic 2 is not supported"));
        }
        if p > MAX_CHAR {
            return Err(Error::InvalidField(p, "characteristic too large"));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(p, "not a prime"));
        }
        Ok(PrimeField { p })
    }

    pub fn default_field() -> Self {
        PrimeField { p: DEFAULT_CHAR }
    }

    #[inline]
    pub fn p(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    /// a - b*c
    #[inline]
    pub fn sub_mul(self, a: u64, b: u64, c: u64) -> u64 {
        self.sub(a, b * c % self.p)
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero element. Panics on zero.
    pub fn inv(self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        let (mut t, mut new_t) = (0i64, 1i64);
        let (mut r, mut new_r) = (self.p as i64, (a % self.p) as i64);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        if t < 0 {
            t += self.p as i64;
        }
        t as u64
    }

    #[inline]
    pub fn div(self, a: u64, b: u64) -> u64 {
        self.mul(a, self.inv(b))
    }

    pub fn from_i64(self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    /// Symmetric representative in (-p/2, p/2].
    pub fn to_i64(self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    pub fn random<R: rand::Rng + ?Sized>(self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    pub fn random_nonzero<R: rand::Rng + ?Sized>(self, rng: &mut R) -> u64 {
        rng.gen_range(1..self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_characteristics() {
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(32004).is_err());
        assert!(PrimeField::new(3).is_ok());
        assert!(PrimeField::new(1000003).is_ok());
    }

    #[test]
    fn inverse_roundtrip() {
        let f = PrimeField::new(65537).unwrap();
        for a in [1u64, 2, 3, 12345, 65536] {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        assert_eq!(f.pow(3, 65536), 1);
    }
}
