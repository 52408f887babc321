//! Exponents in Z_p: honest integers or digit vectors known modulo p^M.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::Fe;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PadicInt {
    /// An ordinary integer viewed in Z_p; every digit is available.
    Exact { p: u32, value: BigInt },
    /// The residue class of `Σ digits[i]·p^i` modulo `p^M`, `M = digits.len()`.
    Truncated { p: u32, digits: Vec<u32> },
}

impl PadicInt {
    pub fn exact(p: u32, value: impl Into<BigInt>) -> PadicInt {
        PadicInt::Exact { p, value: value.into() }
    }

    pub fn truncated(p: u32, digits: Vec<u32>) -> Result<PadicInt> {
        if let Some(&d) = digits.iter().find(|&&d| d >= p) {
            return Err(Error::InvalidSpec(format!("digit {d} out of range for p = {p}")));
        }
        Ok(PadicInt::Truncated { p, digits })
    }

    /// First `m` digits of an integer, as a truncated value.
    pub fn truncate_int(p: u32, value: impl Into<BigInt>, m: usize) -> PadicInt {
        let exact = PadicInt::exact(p, value);
        let digits = (0..m).map(|i| exact.digit(i as u64).expect("exact")).collect();
        PadicInt::Truncated { p, digits }
    }

    pub fn prime(&self) -> u32 {
        match self {
            PadicInt::Exact { p, .. } | PadicInt::Truncated { p, .. } => *p,
        }
    }

    /// Number of known digits; `None` when every digit is known.
    pub fn precision(&self) -> Option<u64> {
        match self {
            PadicInt::Exact { .. } => None,
            PadicInt::Truncated { digits, .. } => Some(digits.len() as u64),
        }
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        match self {
            PadicInt::Exact { value, .. } => Some(value),
            PadicInt::Truncated { .. } => None,
        }
    }

    /// `Some(n)` when the value is an exact integer fitting in i64.
    pub fn as_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|v| v.to_i64())
    }

    /// Digit `i` of the base-p expansion. Negative integers use the standard
    /// expansion, which is eventually `p - 1`.
    pub fn digit(&self, i: u64) -> Result<u32> {
        match self {
            PadicInt::Exact { p, value } => {
                let scale = BigInt::from(*p).pow(i as u32);
                let shifted = value.div_floor(&scale);
                Ok(shifted.mod_floor(&BigInt::from(*p)).to_u32().expect("digit < p"))
            }
            PadicInt::Truncated { digits, .. } => digits
                .get(i as usize)
                .copied()
                .ok_or(Error::PrecisionExhausted { needed: i, available: digits.len() as u64 }),
        }
    }

    /// Digits `0..count`, failing if a truncated value does not carry them.
    pub fn digits(&self, count: u64) -> Result<Vec<u32>> {
        (0..count).map(|i| self.digit(i)).collect()
    }

    /// Additive inverse in Z_p. Truncated values keep their precision.
    pub fn neg(&self) -> PadicInt {
        match self {
            PadicInt::Exact { p, value } => PadicInt::Exact { p: *p, value: -value },
            PadicInt::Truncated { p, digits } => {
                // -y = (complement digits) + 1
                let p = *p;
                let mut out: Vec<u32> = digits.iter().map(|d| p - 1 - d).collect();
                for d in out.iter_mut() {
                    if *d == p - 1 {
                        *d = 0;
                    } else {
                        *d += 1;
                        break;
                    }
                }
                PadicInt::Truncated { p, digits: out }
            }
        }
    }

    /// True for an exact integer `>= 0`.
    pub fn is_nonnegative_integer(&self) -> bool {
        matches!(self, PadicInt::Exact { value, .. } if !value.is_negative())
    }

    /// Compact descriptor used in cache keys and reports: the integer itself,
    /// or `[d0,d1,...]+O(p^M)`.
    pub fn descriptor(&self) -> String {
        match self {
            PadicInt::Exact { value, .. } => value.to_string(),
            PadicInt::Truncated { p, digits } => {
                let ds: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
                format!("[{}]+O({}^{})", ds.join(","), p, digits.len())
            }
        }
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

/// Binomial coefficient `C(y, k) mod p` by Lucas' theorem on base-p digits.
pub fn lucas_binom(y: &PadicInt, k: &BigInt) -> Result<Fe> {
    if k.is_negative() {
        return Ok(Fe::ZERO);
    }
    let p = y.prime();
    let pb = BigInt::from(p);
    let mut rest = k.clone();
    let mut acc: u64 = 1;
    let mut i = 0u64;
    while !rest.is_zero() {
        let (next, kd) = rest.div_mod_floor(&pb);
        let kd = kd.to_u32().expect("digit");
        let yd = y.digit(i)?;
        acc = acc * small_binom_mod(yd, kd, p) as u64 % p as u64;
        if acc == 0 {
            return Ok(Fe::ZERO);
        }
        rest = next;
        i += 1;
    }
    Ok(Fe(acc as u32))
}

/// `C(n, k) mod p` for digits `n, k < p`.
pub fn small_binom_mod(n: u32, k: u32, p: u32) -> u32 {
    if k > n {
        return 0;
    }
    let p = p as u64;
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k as u64 {
        num = num * ((n as u64 - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    // den is a unit since k < p
    (num * mod_inv(den, p) % p) as u32
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Convenience for small machine-size k.
pub fn lucas_binom_u64(y: &PadicInt, k: u64) -> Result<Fe> {
    lucas_binom(y, &BigInt::from(k))
}

impl PadicInt {
    /// Exact value of a truncated number's digits as an integer in `[0, p^M)`.
    pub fn residue(&self) -> BigInt {
        match self {
            PadicInt::Exact { value, .. } => value.clone(),
            PadicInt::Truncated { p, digits } => digits
                .iter()
                .rev()
                .fold(BigInt::zero(), |acc, &d| acc * BigInt::from(*p) + BigInt::from(d)),
        }
    }

    pub fn one(p: u32) -> PadicInt {
        PadicInt::Exact { p, value: BigInt::one() }
    }
}
