//! Arithmetic in the prime field GF(p), 2 <= p <= 97.
//!
//! Field elements are stored as plain `u32` residues inside matrices and
//! vectors; [`Field`] carries the modulus and an inverse table so the hot
//! loops stay free of per-element modulus bookkeeping. [`FieldElem`] is the
//! self-describing value type used at API boundaries.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported characteristic.
pub const MAX_PRIME: u32 = 97;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

static FIELDS: OnceLock<Vec<Option<Field>>> = OnceLock::new();

/// Shared field context for `p`. Panics if `p` is not a supported prime;
/// use [`Field::new`] to validate untrusted input first.
pub fn gf(p: u32) -> &'static Field {
    let table = FIELDS.get_or_init(|| {
        (0..=MAX_PRIME)
            .map(|q| if is_prime(q) { Field::new(q).ok() } else { None })
            .collect()
    });
    table
        .get(p as usize)
        .and_then(|f| f.as_ref())
        .unwrap_or_else(|| panic!("unsupported characteristic {p}"))
}

/// A prime field context.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Field {
    p: u32,
    #[serde(skip)]
    inv: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

impl TryFrom<u32> for Field {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Field::new(p)
    }
}

impl From<Field> for u32 {
    fn from(f: Field) -> u32 {
        f.p
    }
}

impl Field {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(Error::NotPrime(p));
        }
        let mut inv = vec![0; p as usize];
        for a in 1..p {
            // a^(p-2) by repeated multiplication; p is tiny.
            let mut r = 1u32;
            for _ in 0..p - 2 {
                r = r * a % p;
            }
            inv[a as usize] = r;
        }
        Ok(Field { p, inv })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        a * b % self.p
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0 && a < self.p, "inverse of {a} in GF({})", self.p);
        self.inv[a as usize]
    }

    /// Reduce an arbitrary signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(&self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }

    /// `(-1)^k` as a field element.
    #[inline]
    pub fn sign(&self, k: usize) -> u32 {
        if k.is_multiple_of(2) {
            1
        } else {
            self.p - 1
        }
    }

    /// Binomial coefficient `C(n, k)` reduced mod p (Lucas' theorem).
    pub fn binomial(&self, mut n: u64, mut k: u64) -> u32 {
        let p = self.p as u64;
        let mut r = 1u32;
        while n > 0 || k > 0 {
            let (nd, kd) = (n % p, k % p);
            if kd > nd {
                return 0;
            }
            r = self.mul(r, small_binomial(nd, kd, self));
            n /= p;
            k /= p;
        }
        r
    }

    /// `1/n!` for `n < p`.
    pub fn inv_factorial(&self, n: u32) -> u32 {
        assert!(n < self.p);
        let mut f = 1;
        for i in 1..=n {
            f = self.mul(f, i);
        }
        self.inv(f)
    }

    pub fn elem(&self, value: i64) -> FieldElem {
        FieldElem {
            value: self.reduce(value),
            p: self.p,
        }
    }
}

fn small_binomial(n: u64, k: u64, f: &Field) -> u32 {
    // n < p, so the factorials are invertible.
    let mut num = 1u32;
    let mut den = 1u32;
    for i in 0..k {
        num = f.mul(num, ((n - i) % f.p as u64) as u32);
        den = f.mul(den, ((i + 1) % f.p as u64) as u32);
    }
    f.mul(num, f.inv(den))
}

/// A residue together with its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElem {
    value: u32,
    p: u32,
}

impl FieldElem {
    pub fn new(value: i64, p: u32) -> Result<Self> {
        if !is_prime(p) || p > MAX_PRIME {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldElem {
            value: value.rem_euclid(p as i64) as u32,
            p,
        })
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inverse(self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        let mut r = 1u32;
        for _ in 0..self.p - 2 {
            r = r * self.value % self.p;
        }
        Some(FieldElem { value: r, p: self.p })
    }

    fn check(self, other: Self) {
        assert_eq!(self.p, other.p, "mixed characteristics");
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, o: Self) -> Self {
        self.check(o);
        FieldElem {
            value: (self.value + o.value) % self.p,
            p: self.p,
        }
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, o: Self) -> Self {
        self.check(o);
        FieldElem {
            value: (self.value + self.p - o.value) % self.p,
            p: self.p,
        }
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, o: Self) -> Self {
        self.check(o);
        FieldElem {
            value: self.value * o.value % self.p,
            p: self.p,
        }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> Self {
        FieldElem {
            value: (self.p - self.value) % self.p,
            p: self.p,
        }
    }
}
