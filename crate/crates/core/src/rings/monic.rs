//! Enumeration of A_+(e), the monic polynomials of degree e over F_q, and of
//! monic primes.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::scalars::{Fe, Field};

use super::poly::ThetaPoly;

/// Default cap on the number of monics enumerated per degree.
pub const DEFAULT_CAP: u64 = 1_000_000;

/// `θ^e + Σ_{i<e} c_i θ^i` indexed by `Σ c_i q^i`. Contiguous index ranges
/// fix the high coefficients, so the range splits into blocks by leading
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicRange {
    q: u32,
    degree: usize,
    count: u64,
}

impl MonicRange {
    pub fn new(f: &Field, degree: usize, cap: u64) -> Result<MonicRange> {
        let q = f.base_order();
        let count = (q as u128).checked_pow(degree as u32).unwrap_or(u128::MAX);
        if count > cap as u128 {
            return Err(Error::CapExceeded { requested: count, cap });
        }
        Ok(MonicRange { q, degree, count: count as u64 })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn nth(&self, mut idx: u64) -> ThetaPoly {
        let mut coeffs = Vec::with_capacity(self.degree + 1);
        for _ in 0..self.degree {
            coeffs.push(Fe((idx % self.q as u64) as u32));
            idx /= self.q as u64;
        }
        coeffs.push(Fe::ONE);
        ThetaPoly::new(coeffs)
    }

    /// Up to `parts` disjoint contiguous index blocks covering the range.
    pub fn blocks(&self, parts: usize) -> Vec<Range<u64>> {
        let parts = parts.max(1) as u64;
        let size = self.count.div_ceil(parts).max(1);
        (0..self.count).step_by(size as usize).map(|s| s..(s + size).min(self.count)).collect()
    }

    /// Calls `visit` with the coefficient vector (lowest first, leading 1
    /// included) of every monic whose index lies in `range`, in order.
    pub fn for_each_in(&self, range: Range<u64>, mut visit: impl FnMut(&[Fe])) {
        if range.is_empty() {
            return;
        }
        let q = self.q;
        let mut coeffs = self.nth(range.start).coeffs().to_vec();
        coeffs.resize(self.degree + 1, Fe::ZERO);
        coeffs[self.degree] = Fe::ONE;
        for _ in range {
            visit(&coeffs);
            // odometer increment on c_0..c_{e-1}
            for c in coeffs.iter_mut().take(self.degree) {
                if c.0 + 1 < q {
                    c.0 += 1;
                    break;
                }
                c.0 = 0;
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = ThetaPoly> + '_ {
        (0..self.count).map(|i| self.nth(i))
    }
}

/// All monics of degree `e` in deterministic order.
pub fn monic_enumerate(f: &Field, e: usize, cap: u64) -> Result<Vec<ThetaPoly>> {
    Ok(MonicRange::new(f, e, cap)?.iter().collect())
}

/// Monic irreducibles of degree `1..=dmax`, by trial division by the primes of
/// degree at most half the candidate's.
pub fn prime_enumerate(f: &Field, dmax: usize, cap: u64) -> Result<Vec<ThetaPoly>> {
    MonicRange::new(f, dmax, cap)?;
    let mut primes: Vec<ThetaPoly> = Vec::new();
    for d in 1..=dmax {
        let range = MonicRange::new(f, d, cap)?;
        let mut found = Vec::new();
        for a in range.iter() {
            let composite = primes
                .iter()
                .take_while(|pr| pr.degree().unwrap() * 2 <= d)
                .any(|pr| a.rem(pr, f).map(|r| r.is_zero()).unwrap_or(false));
            if !composite {
                found.push(a);
            }
        }
        primes.extend(found);
    }
    Ok(primes)
}

/// Whether a monic polynomial is irreducible over F_q.
pub fn is_irreducible(a: &ThetaPoly, f: &Field) -> Result<bool> {
    let d = match a.degree() {
        None | Some(0) => return Ok(false),
        Some(d) => d,
    };
    for k in 1..=d / 2 {
        for b in MonicRange::new(f, k, u64::MAX)?.iter() {
            if a.rem(&b, f)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
