//! Laurent series in 1/θ over E with absolute precision.
//!
//! A value is `Σ_{e ≥ val} c_e θ^{-e}` known modulo `O(θ^{-prec})`, so the
//! additive valuation is `v_∞(θ^{-1}) = 1` and `|θ|_∞ = q`. Values with only
//! finitely many nonzero terms can be flagged exact, in which case the
//! precision is infinite and every coefficient past the stored ones is zero.
//!
//! Precision rules:
//! - sum: the minimum of the operands' precisions;
//! - product of `(v1, N1)` and `(v2, N2)`: `min(N1 + v2, N2 + v1)`;
//! - inverse of a unit: the same relative precision, `N - 2v` absolutely;
//! - exact combined with exact stays exact.

use std::cmp::{max, min};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::padic::small_binom_mod;
use crate::scalars::{Fe, Field, PadicInt};

/// Stand-in for infinite precision; large enough to survive additions.
pub const INF_PREC: i64 = i64::MAX / 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentSeries {
    val: i64,
    coeffs: Vec<Fe>,
    prec: i64,
    exact: bool,
}

/// JSON form `{val, prec, coeffs, exact}` with coefficients rendered by the
/// field (`g+1`, ...).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesWire {
    pub val: i64,
    pub prec: i64,
    pub coeffs: Vec<String>,
    pub exact: bool,
}

#[inline]
fn sat_add(a: i64, b: i64) -> i64 {
    if a >= INF_PREC || b >= INF_PREC {
        INF_PREC
    } else {
        a + b
    }
}

impl LaurentSeries {
    /// Exact value `Σ coeffs[i] θ^{-(val+i)}`.
    pub fn exact(val: i64, coeffs: Vec<Fe>) -> LaurentSeries {
        let mut s = LaurentSeries { val, prec: 0, coeffs, exact: true };
        s.normalize();
        s
    }

    /// Value known modulo `O(θ^{-prec})`; coefficients at or past `prec` are
    /// discarded.
    pub fn with_prec(val: i64, coeffs: Vec<Fe>, prec: i64) -> LaurentSeries {
        let mut s = LaurentSeries { val, prec, coeffs, exact: false };
        s.normalize();
        s
    }

    pub fn zero() -> LaurentSeries {
        LaurentSeries { val: 0, coeffs: Vec::new(), prec: 0, exact: true }
    }

    /// `O(θ^{-prec})`.
    pub fn zero_to(prec: i64) -> LaurentSeries {
        LaurentSeries { val: prec, coeffs: Vec::new(), prec, exact: false }
    }

    pub fn one() -> LaurentSeries {
        LaurentSeries::constant(Fe::ONE)
    }

    pub fn constant(c: Fe) -> LaurentSeries {
        LaurentSeries::exact(0, vec![c])
    }

    /// `c·θ^{-e}`.
    pub fn monomial(c: Fe, e: i64) -> LaurentSeries {
        LaurentSeries::exact(e, vec![c])
    }

    /// `θ^k`.
    pub fn theta_pow(k: i64) -> LaurentSeries {
        LaurentSeries::monomial(Fe::ONE, -k)
    }

    fn normalize(&mut self) {
        if self.exact {
            while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                self.coeffs.pop();
            }
            let lead = self.coeffs.iter().position(|c| !c.is_zero());
            match lead {
                None => {
                    self.coeffs.clear();
                    self.val = 0;
                }
                Some(k) => {
                    self.coeffs.drain(..k);
                    self.val += k as i64;
                }
            }
            self.prec = self.val + self.coeffs.len() as i64;
        } else {
            let known = max(0, self.prec - self.val) as usize;
            self.coeffs.truncate(known);
            self.coeffs.resize(known, Fe::ZERO);
            match self.coeffs.iter().position(|c| !c.is_zero()) {
                None => {
                    self.coeffs.clear();
                    self.val = self.prec;
                }
                Some(k) => {
                    self.coeffs.drain(..k);
                    self.val += k as i64;
                }
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Absolute precision; `None` for exact values.
    pub fn prec(&self) -> Option<i64> {
        if self.exact {
            None
        } else {
            Some(self.prec)
        }
    }

    /// Absolute precision with [`INF_PREC`] for exact values.
    pub fn abs_prec(&self) -> i64 {
        if self.exact {
            INF_PREC
        } else {
            self.prec
        }
    }

    /// v_∞ of the value, `None` if no nonzero coefficient is known.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.val)
        }
    }

    /// A lower bound for v_∞: the valuation, or the precision for values that
    /// vanish to precision (`INF_PREC` for exact zero).
    pub fn val_bound(&self) -> i64 {
        match self.valuation() {
            Some(v) => v,
            None => self.abs_prec(),
        }
    }

    /// Exponent of the first stored coefficient (valuation for nonzero values).
    pub fn start(&self) -> i64 {
        self.val
    }

    /// Stored coefficients, starting at [`Self::start`].
    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    /// Exactly zero (not merely zero to precision).
    pub fn is_zero(&self) -> bool {
        self.exact && self.coeffs.is_empty()
    }

    /// No nonzero coefficient known.
    pub fn vanishes(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `θ^{-e}`, `None` when beyond precision.
    pub fn coeff(&self, e: i64) -> Option<Fe> {
        if e >= self.abs_prec() {
            return None;
        }
        if e < self.val {
            return Some(Fe::ZERO);
        }
        Some(self.coeffs.get((e - self.val) as usize).copied().unwrap_or(Fe::ZERO))
    }

    #[inline]
    fn coeff_or_zero(&self, e: i64) -> Fe {
        if e < self.val {
            return Fe::ZERO;
        }
        self.coeffs.get((e - self.val) as usize).copied().unwrap_or(Fe::ZERO)
    }

    pub fn leading(&self) -> Option<Fe> {
        self.coeffs.first().copied()
    }

    /// Known modulo `O(θ^{-n})` at most.
    pub fn truncate(&self, n: i64) -> LaurentSeries {
        if n >= self.abs_prec() {
            return self.clone();
        }
        LaurentSeries::with_prec(self.val, self.coeffs.clone(), n)
    }

    /// Same value, forgetting exactness if it is exact.
    pub fn to_prec(&self, n: i64) -> LaurentSeries {
        LaurentSeries::with_prec(self.val, self.coeffs.clone(), min(n, self.abs_prec()))
    }

    /// Marks a value exact. Only meaningful when the caller knows the tail is
    /// zero (e.g. a finite sum of exact terms).
    pub fn into_exact(self) -> LaurentSeries {
        LaurentSeries::exact(self.val, self.coeffs)
    }

    /// Precision below which `self` and `other` are known to agree: the first
    /// differing exponent, capped at the smaller precision.
    pub fn agreement(&self, other: &LaurentSeries, f: &Field) -> i64 {
        let d = self.sub(other, f);
        d.val_bound()
    }

    fn build(lo: i64, hi: i64, prec: i64, exact: bool, coeff: impl Fn(i64) -> Fe) -> LaurentSeries {
        let coeffs: Vec<Fe> = if hi > lo { (lo..hi).map(coeff).collect() } else { Vec::new() };
        if exact {
            LaurentSeries::exact(lo, coeffs)
        } else {
            LaurentSeries::with_prec(lo, coeffs, prec)
        }
    }

    fn end(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn add(&self, other: &LaurentSeries, f: &Field) -> LaurentSeries {
        let exact = self.exact && other.exact;
        let prec = min(self.abs_prec(), other.abs_prec());
        let lo = match (self.vanishes(), other.vanishes()) {
            (true, true) => {
                return if exact { LaurentSeries::zero() } else { LaurentSeries::zero_to(prec) };
            }
            (true, false) => other.val,
            (false, true) => self.val,
            (false, false) => min(self.val, other.val),
        };
        let lo = min(lo, prec);
        let hi = if exact { max(self.end(), other.end()) } else { prec };
        LaurentSeries::build(lo, hi, prec, exact, |e| f.add(self.coeff_or_zero(e), other.coeff_or_zero(e)))
    }

    pub fn neg(&self, f: &Field) -> LaurentSeries {
        LaurentSeries {
            val: self.val,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            prec: self.prec,
            exact: self.exact,
        }
    }

    pub fn sub(&self, other: &LaurentSeries, f: &Field) -> LaurentSeries {
        self.add(&other.neg(f), f)
    }

    pub fn scale(&self, c: Fe, f: &Field) -> LaurentSeries {
        if c.is_zero() {
            return if self.exact {
                LaurentSeries::zero()
            } else {
                // c·(a + O(θ^{-N})) = O(θ^{-N})
                LaurentSeries::zero_to(self.prec)
            };
        }
        LaurentSeries {
            val: self.val,
            coeffs: self.coeffs.iter().map(|&x| f.mul(c, x)).collect(),
            prec: self.prec,
            exact: self.exact,
        }
    }

    /// Multiplication by θ^k (exact, shifts precision by -k).
    pub fn shift(&self, k: i64) -> LaurentSeries {
        LaurentSeries {
            val: self.val - k,
            coeffs: self.coeffs.clone(),
            prec: self.prec - k,
            exact: self.exact,
        }
    }

    pub fn mul(&self, other: &LaurentSeries, f: &Field) -> LaurentSeries {
        self.mul_trunc(other, INF_PREC, f)
    }

    /// Product known to at most `O(θ^{-limit})`; only the needed terms are
    /// computed.
    pub fn mul_trunc(&self, other: &LaurentSeries, limit: i64, f: &Field) -> LaurentSeries {
        if self.is_zero() || other.is_zero() {
            return LaurentSeries::zero();
        }
        let va = self.val_bound();
        let vb = other.val_bound();
        let natural = min(sat_add(self.abs_prec(), vb), sat_add(other.abs_prec(), va));
        let exact = self.exact && other.exact && limit >= INF_PREC;
        let prec = min(natural, limit);
        if self.vanishes() || other.vanishes() {
            return LaurentSeries::zero_to(prec);
        }
        let lo = va + vb;
        let hi = if exact { self.end() + other.end() - 1 } else { prec };
        if hi <= lo {
            return LaurentSeries::zero_to(prec);
        }
        let len = (hi - lo) as usize;
        let mut out = vec![Fe::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let room = len.saturating_sub(i);
            for (j, &b) in other.coeffs.iter().take(room).enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        if exact {
            LaurentSeries::exact(lo, out)
        } else {
            LaurentSeries::with_prec(lo, out, prec)
        }
    }

    /// Multiplicative inverse known to at most `O(θ^{-target})`.
    ///
    /// Exact monomials invert exactly. Anything vanishing to its precision
    /// is an error carrying that precision.
    pub fn inv(&self, target: i64, f: &Field) -> Result<LaurentSeries> {
        if self.vanishes() {
            return Err(Error::ZeroToPrecision { prec: self.abs_prec() });
        }
        let v = self.val;
        let c0_inv = f.inv(self.coeffs[0])?;
        if self.exact && self.coeffs.len() == 1 {
            return Ok(LaurentSeries::monomial(c0_inv, -v));
        }
        let rel = if self.exact { INF_PREC } else { self.prec - v };
        let prec = min(target, sat_add(-v, rel));
        let len = max(0, prec + v) as usize;
        let mut out: Vec<Fe> = Vec::with_capacity(len);
        for k in 0..len {
            if k == 0 {
                out.push(c0_inv);
                continue;
            }
            let mut acc = Fe::ZERO;
            for i in 1..=k.min(self.coeffs.len() - 1) {
                acc = f.add(acc, f.mul(self.coeffs[i], out[k - i]));
            }
            out.push(f.neg(f.mul(acc, c0_inv)));
        }
        Ok(LaurentSeries::with_prec(-v, out, prec))
    }

    /// `self / other` known to at most `O(θ^{-target})`.
    pub fn div(&self, other: &LaurentSeries, target: i64, f: &Field) -> Result<LaurentSeries> {
        if self.is_zero() {
            return Ok(LaurentSeries::zero());
        }
        let inv_target = if target >= INF_PREC { INF_PREC } else { target - min(self.val_bound(), target) };
        let inv = other.inv(inv_target, f)?;
        Ok(self.mul_trunc(&inv, target, f))
    }

    /// Integer power known to at most `O(θ^{-target})`. Nonnegative powers
    /// of exact values stay exact when `target` is [`INF_PREC`].
    pub fn pow_int(&self, k: i64, target: i64, f: &Field) -> Result<LaurentSeries> {
        if k < 0 {
            // v(self^-k) = -k·v; pick inverse precision so the power reaches target
            let v = self.val_bound();
            let inv_target = if target >= INF_PREC {
                INF_PREC
            } else {
                target + (k.unsigned_abs() as i64 - 1) * v
            };
            let inv = self.inv(inv_target, f)?;
            return inv.pow_int(-k, target, f);
        }
        let mut acc = LaurentSeries::one();
        let mut base = self.clone();
        let mut e = k as u64;
        let v = self.val_bound();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_trunc(&base, limit_for(target, v, e), f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_trunc(&base, limit_for(target, v, e * 2), f);
            }
        }
        Ok(if target < INF_PREC { acc.truncate(target) } else { acc })
    }

    /// The `p^i`-th power, computed coefficientwise (characteristic p).
    pub fn frobenius(&self, i: u32, f: &Field) -> LaurentSeries {
        if i == 0 || self.is_zero() {
            return self.clone();
        }
        let scale = (f.characteristic() as i64).pow(i);
        let mut coeffs = vec![Fe::ZERO; (self.coeffs.len().saturating_sub(1)) * scale as usize + 1];
        if self.coeffs.is_empty() {
            coeffs.clear();
        }
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[k * scale as usize] = f.pow(c, scale as u64);
        }
        if self.exact {
            LaurentSeries::exact(self.val * scale, coeffs)
        } else {
            LaurentSeries::with_prec(self.val * scale, coeffs, self.prec.saturating_mul(scale))
        }
    }

    /// Whether the value is `1 + m` with `v_∞(m) ≥ 1`.
    pub fn is_one_unit(&self) -> bool {
        self.valuation() == Some(0) && self.coeffs[0] == Fe::ONE && self.abs_prec() >= 1
    }

    /// `u^y` for a 1-unit `u` and `y ∈ Z_p`, by the binomial series
    /// `Σ_k C(y,k) m^k` with `m = u - 1`, truncated at `O(θ^{-n})`.
    ///
    /// The sum is evaluated in its Lucas-factored form
    /// `Π_i Σ_{k_i < p} C(y_i, k_i) (m^{p^i})^{k_i}`, which is the same series
    /// regrouped by base-p digits of k. Terms with `k·v(m) ≥ n` are dropped,
    /// so digit `i` of `y` is needed exactly when `p^i·v(m) < n`; a truncated
    /// `y` lacking such a digit is a precision error.
    ///
    /// An exact `u` raised to an exact `y ≥ 0` gives an exact result.
    pub fn one_unit_pow(&self, y: &PadicInt, n: i64, f: &Field) -> Result<LaurentSeries> {
        if !self.is_one_unit() {
            return Err(Error::NotOneUnit(format!("valuation {:?}, leading {:?}", self.valuation(), self.leading())));
        }
        let p = f.characteristic();
        if y.prime() != p {
            return Err(Error::InvalidSpec(format!("exponent in Z_{} used in characteristic {p}", y.prime())));
        }
        let m = self.sub(&LaurentSeries::one(), f);
        let exact_result = self.exact && y.is_nonnegative_integer();
        let target = if exact_result { INF_PREC } else { min(n, self.abs_prec()) };
        if m.vanishes() {
            return Ok(if exact_result { LaurentSeries::one() } else { LaurentSeries::one().truncate(target) });
        }
        let vm = m.val_bound();
        let digits: Vec<u32> = if exact_result {
            // finitely many nonzero digits
            let mut rest = y.as_integer().expect("exact").clone();
            let pb = num_bigint::BigInt::from(p);
            let mut ds = Vec::new();
            while rest > num_bigint::BigInt::from(0) {
                let (next, d) = num_integer::Integer::div_mod_floor(&rest, &pb);
                ds.push(num_traits::ToPrimitive::to_u32(&d).expect("digit"));
                rest = next;
            }
            ds
        } else {
            let mut ds = Vec::new();
            let mut scale = 1i64;
            while scale.saturating_mul(vm) < target {
                ds.push(y.digit(ds.len() as u64)?);
                scale = scale.saturating_mul(p as i64);
            }
            ds
        };
        let mut acc = LaurentSeries::one();
        for (i, &d) in digits.iter().enumerate() {
            let i = i as u32;
            if d > 0 {
                let mi = m.frobenius(i, f);
                let mut factor = LaurentSeries::one();
                let mut power = LaurentSeries::one();
                for k in 1..=d {
                    power = power.mul_trunc(&mi, target, f);
                    let c = Fe(small_binom_mod(d, k, p));
                    factor = factor.add(&power.scale(c, f), f);
                }
                acc = acc.mul_trunc(&factor, target, f);
            }
        }
        Ok(if exact_result { acc } else { acc.truncate(target) })
    }

    /// Substitutes this series into a polynomial's variable: `Σ c_i self^i`.
    pub fn horner(&self, coeffs: &[Fe], f: &Field) -> LaurentSeries {
        let mut acc = LaurentSeries::zero();
        for &c in coeffs.iter().rev() {
            acc = acc.mul(self, f).add(&LaurentSeries::constant(c), f);
        }
        acc
    }

    /// `c_v*θ^{-v} + … + O(θ^{-N})`.
    pub fn render(&self, f: &Field) -> String {
        let mut terms = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.val + k as i64;
            let cs = f.render(c);
            let mono = match -e {
                0 => String::new(),
                1 => "θ".to_string(),
                k => format!("θ^{{{k}}}"),
            };
            let term = if mono.is_empty() {
                cs
            } else if c == Fe::ONE {
                mono
            } else if cs.contains('+') {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            terms.push(term);
        }
        if !self.exact {
            terms.push(format!("O(θ^{{{}}})", -self.prec));
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    pub fn to_wire(&self, f: &Field) -> SeriesWire {
        SeriesWire {
            val: self.val,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|&c| f.render(c)).collect(),
            exact: self.exact,
        }
    }

    pub fn from_wire(w: &SeriesWire, f: &Field) -> Result<LaurentSeries> {
        let coeffs = w
            .coeffs
            .iter()
            .map(|s| super::parse::parse_scalar(s, f))
            .collect::<Result<Vec<_>>>()?;
        let s = if w.exact {
            LaurentSeries::exact(w.val, coeffs)
        } else {
            LaurentSeries::with_prec(w.val, coeffs, w.prec)
        };
        if s.val != w.val && !s.coeffs.is_empty() {
            return Err(Error::Parse("series leading coefficient is zero".into()));
        }
        Ok(s)
    }
}

/// Truncation limit for an intermediate factor of a power: later factors
/// have valuation ≥ `v` each, and at most `remaining` of them remain.
fn limit_for(target: i64, v: i64, remaining: u64) -> i64 {
    if target >= INF_PREC {
        return INF_PREC;
    }
    if v >= 0 {
        target
    } else {
        target.saturating_add((remaining as i64).saturating_mul(-v))
    }
}
