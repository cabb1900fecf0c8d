//! Prime-field arithmetic.
//!
//! Elements are stored as canonical `u64` representatives in `[0, q)`.
//! Matrices keep raw `u64` buffers and borrow the modulus for reduction, so
//! the raw-value helpers on [`FieldModulus`] are the hot path; [`FieldElement`]
//! is the checked, self-describing form used at API boundaries.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The characteristic `q` of a prime field GF(q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FieldModulus(u64);

impl FieldModulus {
    pub fn new(q: u64) -> Result<Self> {
        if is_prime(q) {
            Ok(Self(q))
        } else {
            Err(Error::NotPrime(q))
        }
    }

    /// Smallest prime `p >= n` (with `n` clamped to at least 2).
    pub fn smallest_prime_geq(n: u64) -> Self {
        let mut p = n.max(2);
        while !is_prime(p) {
            p += 1;
        }
        Self(p)
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    /// Serialized element width: the smallest of 1, 2, 4, 8 bytes holding `q - 1`.
    pub fn width_bytes(self) -> usize {
        let max = self.0 - 1;
        if max <= u8::MAX as u64 {
            1
        } else if max <= u16::MAX as u64 {
            2
        } else if max <= u32::MAX as u64 {
            4
        } else {
            8
        }
    }

    pub fn element(self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.0,
            modulus: self,
        }
    }

    pub fn zero(self) -> FieldElement {
        self.element(0)
    }

    pub fn one(self) -> FieldElement {
        self.element(1)
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u64 {
        x % self.0
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let (s, overflow) = a.overflowing_add(b);
        if overflow || s >= self.0 {
            s.wrapping_sub(self.0)
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.0 - (b - a)
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        if self.0 <= 1 << 32 {
            (a * b) % self.0
        } else {
            ((a as u128 * b as u128) % self.0 as u128) as u64
        }
    }

    pub fn pow(self, base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.0;
        let mut b = base % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(self, a: u64) -> Result<u64> {
        let a = a % self.0;
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let (mut old_r, mut r) = (a as i128, self.0 as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let quot = old_r / r;
            (old_r, r) = (r, old_r - quot * r);
            (old_s, s) = (s, old_s - quot * s);
        }
        debug_assert_eq!(old_r, 1);
        Ok(old_s.rem_euclid(self.0 as i128) as u64)
    }

    /// Largest number of unreduced `(q-1)^2` products that can be summed onto a
    /// value below `q` without overflowing `u64`. Zero when even one product
    /// does not fit, which forces eager reduction.
    pub(crate) fn lazy_budget(self) -> u64 {
        let m = self.0 - 1;
        match m.checked_mul(m) {
            Some(0) => u64::MAX,
            Some(sq) => (u64::MAX - self.0) / sq,
            None => 0,
        }
    }

    pub fn encode_value(self, value: u64, out: &mut Vec<u8>) {
        let bytes = value.to_le_bytes();
        out.extend_from_slice(&bytes[..self.width_bytes()]);
    }

    /// Reads one little-endian element of this field's width. Returns the raw
    /// integer, which may be `>= q`; range checks belong to the caller.
    pub fn decode_raw(self, bytes: &[u8]) -> u64 {
        let mut buf = [0u8; 8];
        buf[..bytes.len()].copy_from_slice(bytes);
        u64::from_le_bytes(buf)
    }
}

impl TryFrom<u64> for FieldModulus {
    type Error = Error;
    fn try_from(q: u64) -> Result<Self> {
        Self::new(q)
    }
}

impl From<FieldModulus> for u64 {
    fn from(m: FieldModulus) -> u64 {
        m.0
    }
}

impl fmt::Display for FieldModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0)
    }
}

/// An element of GF(q) carrying its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: FieldModulus,
}

// Checked arithmetic: mixing moduli is an error, so these cannot be the std operator traits.
#[allow(clippy::should_implement_trait)]
impl FieldElement {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> FieldModulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_field(self, other: Self) -> Result<FieldModulus> {
        if self.modulus == other.modulus {
            Ok(self.modulus)
        } else {
            Err(Error::ModulusMismatch {
                left: self.modulus.0,
                right: other.modulus.0,
            })
        }
    }

    pub fn add(self, other: Self) -> Result<Self> {
        let m = self.same_field(other)?;
        Ok(m.element(m.add(self.value, other.value)))
    }

    pub fn sub(self, other: Self) -> Result<Self> {
        let m = self.same_field(other)?;
        Ok(m.element(m.sub(self.value, other.value)))
    }

    pub fn mul(self, other: Self) -> Result<Self> {
        let m = self.same_field(other)?;
        Ok(m.element(m.mul(self.value, other.value)))
    }

    pub fn neg(self) -> Self {
        self.modulus.element(self.modulus.neg(self.value))
    }

    pub fn inv(self) -> Result<Self> {
        Ok(self.modulus.element(self.modulus.inv(self.value)?))
    }

    pub fn pow(self, exp: u64) -> Self {
        self.modulus.element(self.modulus.pow(self.value, exp))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
