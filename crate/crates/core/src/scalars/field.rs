//! Finite fields F_p ⊆ F_q ⊆ E = F_{q^n} as a two-step tower.
//!
//! Elements are stored as an index into the coefficient space: an element of
//! E is `Σ c_i h^i` with `c_i ∈ F_q`, and each `c_i` is `Σ d_k g^k` with
//! `d_k ∈ F_p`. The index packs all base-p digits, `d_{i,k}` at position
//! `i·m0 + k`. With this layout F_p is exactly the indices `< p`, F_q the
//! indices `< q`, and the natural order on indices is the lexicographic order
//! on coefficient vectors (lowest coefficient least significant).
//!
//! Multiplication goes through discrete log tables built once per field;
//! addition is XOR in characteristic 2 and a Zech-style lookup otherwise.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order we are willing to tabulate.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// An element of the top field E, identified by its packed coefficient index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }
}

/// Which subfield of the tower an enumeration or membership test refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Prime,
    Base,
    Extension,
}

/// The user-facing description of the tower.
///
/// `modulus_q` has coefficients in F_p (degree `m0`); `modulus_e` has
/// coefficients in F_q given by their packed index (degree `n`). Both lists
/// are lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m0: u32,
    pub n: u32,
    pub modulus_q: Vec<u32>,
    pub modulus_e: Vec<u32>,
}

impl FieldSpec {
    /// Shipped default representation of F_q with E = F_q.
    pub fn default_for_q(q: u32) -> Result<FieldSpec> {
        let (p, m0, modulus_q) = match q {
            2 => (2, 1, vec![0, 1]),
            3 => (3, 1, vec![0, 1]),
            4 => (2, 2, vec![1, 1, 1]),
            5 => (5, 1, vec![0, 1]),
            7 => (7, 1, vec![0, 1]),
            8 => (2, 3, vec![1, 1, 0, 1]),
            9 => (3, 2, vec![1, 0, 1]),
            16 => (2, 4, vec![1, 1, 0, 0, 1]),
            _ => {
                return Err(Error::InvalidSpec(format!(
                    "no shipped modulus for q = {q}; supply one explicitly"
                )))
            }
        };
        Ok(FieldSpec { p, m0, n: 1, modulus_q, modulus_e: vec![0, 1] })
    }

    /// Default F_q together with a degree-`n` extension E, using the first
    /// irreducible monic modulus found in lexicographic order.
    pub fn with_extension(q: u32, n: u32) -> Result<FieldSpec> {
        FieldSpec::default_for_q(q)?.extended(n)
    }

    /// The same F_q with E of degree `n` over it, by the first irreducible
    /// monic modulus in lexicographic order.
    pub fn extended(self, n: u32) -> Result<FieldSpec> {
        let base = FieldSpec { n: 1, modulus_e: vec![0, 1], ..self };
        if n <= 1 {
            return Ok(base);
        }
        let bq = Field::new(&base)?;
        let q = bq.base_order();
        let total = (q as u64).checked_pow(n).unwrap_or(u64::MAX);
        if total > MAX_FIELD_ORDER {
            return Err(Error::InvalidSpec(format!("|E| = {q}^{n} exceeds {MAX_FIELD_ORDER}")));
        }
        // low coefficients in lexicographic order; constant term nonzero
        for code in 0..(q as u64).pow(n) {
            let mut modulus = Vec::with_capacity(n as usize + 1);
            let mut c = code;
            for _ in 0..n {
                modulus.push((c % q as u64) as u32);
                c /= q as u64;
            }
            if modulus[0] == 0 {
                continue;
            }
            modulus.push(1);
            let spec = FieldSpec { modulus_e: modulus, n, ..base.clone() };
            if Field::new(&spec).is_ok() {
                return Ok(spec);
            }
        }
        Err(Error::InvalidSpec(format!("no irreducible modulus of degree {n} found")))
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.m0)
    }

    /// Semantic descriptor used in cache keys and reports.
    pub fn descriptor(&self) -> String {
        format!(
            "p={};m0={};n={};mq={:?};me={:?}",
            self.p, self.m0, self.n, self.modulus_q, self.modulus_e
        )
    }
}

struct Tables {
    order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Tables {
    /// Builds log tables from a slow multiplication, failing if no element of
    /// multiplicative order `order - 1` exists (i.e. the quotient ring is not a
    /// field and the modulus was reducible).
    fn build(order: u32, slow_mul: impl Fn(u32, u32) -> u32) -> Option<Tables> {
        let group = order - 1;
        if group == 0 {
            return None;
        }
        let prime_factors = distinct_prime_factors(group as u64);
        let slow_pow = |a: u32, mut e: u64| {
            let mut base = a;
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                e >>= 1;
            }
            acc
        };
        let gen = (1..order).find(|&g| {
            slow_pow(g, group as u64) == 1
                && prime_factors.iter().all(|&r| slow_pow(g, group as u64 / r) != 1)
        })?;
        let mut exp = vec![0u32; 2 * group as usize];
        let mut log = vec![0u32; order as usize];
        let mut x = 1u32;
        for i in 0..group {
            exp[i as usize] = x;
            exp[(i + group) as usize] = x;
            log[x as usize] = i;
            x = slow_mul(x, gen);
        }
        if x != 1 {
            return None;
        }
        Some(Tables { order, exp, log })
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn digits_of(mut x: u32, base: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = x % base;
        x /= base;
    }
    out
}

fn pack(digits: &[u32], base: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * base + d)
}

/// Reduce-and-multiply of coefficient vectors over a small field given by
/// closures; `modulus` is made monic by the caller.
fn poly_mulmod(
    a: &[u32],
    b: &[u32],
    modulus: &[u32],
    add: &impl Fn(u32, u32) -> u32,
    mul: &impl Fn(u32, u32) -> u32,
    neg: &impl Fn(u32) -> u32,
) -> Vec<u32> {
    let deg = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * deg];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = add(prod[i + j], mul(x, y));
        }
    }
    for k in (deg..prod.len()).rev() {
        let c = prod[k];
        if c != 0 {
            for (i, &m) in modulus.iter().enumerate().take(deg) {
                prod[k - deg + i] = add(prod[k - deg + i], neg(mul(c, m)));
            }
            prod[k] = 0;
        }
    }
    prod.truncate(deg);
    prod
}

struct FieldInner {
    spec: FieldSpec,
    p: u32,
    q: u32,
    order: u32,
    tables: Tables,
}

/// Arithmetic context for the tower described by a [`FieldSpec`].
///
/// Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct Field {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field").field("spec", &self.inner.spec).finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.spec == other.inner.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: &FieldSpec) -> Result<Field> {
        let p = spec.p;
        if !is_prime(p) {
            return Err(Error::InvalidSpec(format!("p = {p} is not prime")));
        }
        if spec.m0 == 0 || spec.n == 0 {
            return Err(Error::InvalidSpec("extension degrees must be positive".into()));
        }
        if spec.modulus_q.len() != spec.m0 as usize + 1 || spec.modulus_e.len() != spec.n as usize + 1 {
            return Err(Error::InvalidSpec("modulus length must be degree + 1".into()));
        }
        let q64 = (p as u64).checked_pow(spec.m0).unwrap_or(u64::MAX);
        let order64 = q64.checked_pow(spec.n).unwrap_or(u64::MAX);
        if order64 > MAX_FIELD_ORDER {
            return Err(Error::InvalidSpec(format!("field order exceeds {MAX_FIELD_ORDER}")));
        }
        let q = q64 as u32;
        let order = order64 as u32;
        if spec.modulus_q.iter().any(|&c| c >= p) {
            return Err(Error::InvalidSpec("modulus_q coefficient out of range".into()));
        }
        if spec.modulus_e.iter().any(|&c| c >= q) {
            return Err(Error::InvalidSpec("modulus_e coefficient out of range".into()));
        }

        // F_q from F_p
        let fp_add = |a: u32, b: u32| (a + b) % p;
        let fp_mul = |a: u32, b: u32| (a * b) % p;
        let fp_neg = |a: u32| (p - a) % p;
        let fp_inv = |a: u32| (1..p).find(|&x| (a * x) % p == 1).unwrap_or(0);
        let lead = *spec.modulus_q.last().unwrap();
        if lead == 0 {
            return Err(Error::InvalidSpec("modulus_q has zero leading coefficient".into()));
        }
        let li = fp_inv(lead);
        let mq: Vec<u32> = spec.modulus_q.iter().map(|&c| fp_mul(c, li)).collect();
        let m0 = spec.m0 as usize;
        let slow_q = |a: u32, b: u32| {
            let prod = poly_mulmod(&digits_of(a, p, m0), &digits_of(b, p, m0), &mq, &fp_add, &fp_mul, &fp_neg);
            pack(&prod, p)
        };
        let tq = Tables::build(q, slow_q).ok_or(Error::ReducibleModulus { level: "F_q" })?;
        if spec.n == 1 {
            return Ok(Field {
                inner: Arc::new(FieldInner { spec: spec.clone(), p, q, order, tables: tq }),
            });
        }

        // E from F_q
        let fq_add = |a: u32, b: u32| add_digits(a, b, p);
        let fq_mul = |a: u32, b: u32| tq.mul(a, b);
        let neg_one = p - 1;
        let fq_neg = |a: u32| tq.mul(a, neg_one);
        let lead = *spec.modulus_e.last().unwrap();
        if lead == 0 {
            return Err(Error::InvalidSpec("modulus_e has zero leading coefficient".into()));
        }
        let li = (1..q).find(|&x| tq.mul(lead, x) == 1).unwrap();
        let me: Vec<u32> = spec.modulus_e.iter().map(|&c| tq.mul(c, li)).collect();
        let n = spec.n as usize;
        let slow_e = |a: u32, b: u32| {
            let prod = poly_mulmod(&digits_of(a, q, n), &digits_of(b, q, n), &me, &fq_add, &fq_mul, &fq_neg);
            pack(&prod, q)
        };
        let te = Tables::build(order, slow_e).ok_or(Error::ReducibleModulus { level: "E" })?;
        Ok(Field { inner: Arc::new(FieldInner { spec: spec.clone(), p, q, order, tables: te }) })
    }

    /// Convenience constructor with the shipped modulus for `q` and E = F_q.
    pub fn for_q(q: u32) -> Result<Field> {
        Field::new(&FieldSpec::default_for_q(q)?)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.inner.spec
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    /// q = |F_q|.
    #[inline]
    pub fn base_order(&self) -> u32 {
        self.inner.q
    }

    /// |E|.
    #[inline]
    pub fn order(&self) -> u32 {
        self.inner.order
    }

    pub fn level_order(&self, level: Level) -> u32 {
        match level {
            Level::Prime => self.inner.p,
            Level::Base => self.inner.q,
            Level::Extension => self.inner.order,
        }
    }

    /// Smallest subfield of the tower containing `a`.
    pub fn level_of(&self, a: Fe) -> Level {
        if a.0 < self.inner.p {
            Level::Prime
        } else if a.0 < self.inner.q {
            Level::Base
        } else {
            Level::Extension
        }
    }

    pub fn check(&self, a: Fe) -> Result<Fe> {
        if a.0 < self.inner.order {
            Ok(a)
        } else {
            Err(Error::NotInField { index: a.0 as u64, order: self.inner.order as u64 })
        }
    }

    /// Errors unless both contexts describe the same tower.
    pub fn ensure_same(&self, other: &Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Image of the integer `n` in F_p.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.inner.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.inner.p;
        if p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        // a + b = a·(1 + b/a)
        let t = &self.inner.tables;
        let group = t.order - 1;
        let la = t.log[a.0 as usize];
        let lb = t.log[b.0 as usize];
        let r = t.exp[(lb + group - la) as usize];
        let r1 = if r % p == p - 1 { r - (p - 1) } else { r + 1 };
        if r1 == 0 {
            Fe::ZERO
        } else {
            Fe(t.exp[(la + t.log[r1 as usize]) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.inner.p == 2 {
            a
        } else {
            Fe(self.inner.tables.mul(a.0, self.inner.p - 1))
        }
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.inner.tables.mul(a.0, b.0))
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let t = &self.inner.tables;
        let group = t.order - 1;
        let l = t.log[a.0 as usize];
        Ok(Fe(t.exp[((group - l) % group) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for a machine-size exponent; `0^0 = 1`.
    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let t = &self.inner.tables;
        let group = (t.order - 1) as u64;
        let l = t.log[a.0 as usize] as u64;
        Fe(t.exp[((l * (e % group)) % group) as usize])
    }

    /// `a^e` for an arbitrary-size signed exponent. Negative exponents of zero
    /// are a division by zero.
    pub fn pow_big(&self, a: Fe, e: &BigInt) -> Result<Fe> {
        if e.is_zero() {
            return Ok(Fe::ONE);
        }
        if a.is_zero() {
            return if e.is_negative() { Err(Error::DivisionByZero) } else { Ok(Fe::ZERO) };
        }
        let group = BigInt::from(self.inner.order - 1);
        let r = e.mod_floor(&group).to_u64().expect("reduced exponent fits");
        Ok(self.pow(a, r))
    }

    /// The p-th power map.
    #[inline]
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.inner.p as u64)
    }

    /// All elements of `level` in lexicographic order of coefficient vectors.
    pub fn enumerate(&self, level: Level, cap: u64) -> Result<Vec<Fe>> {
        let card = self.level_order(level) as u64;
        if card > cap {
            return Err(Error::CapExceeded { requested: card as u128, cap });
        }
        Ok((0..card as u32).map(Fe).collect())
    }

    /// Base-p digit vector of `a` restricted to `level` (length = degree of
    /// `level` over F_p).
    pub fn coeffs(&self, a: Fe, level: Level) -> Vec<u32> {
        let p = self.inner.p;
        let len = match level {
            Level::Prime => 1,
            Level::Base => self.inner.spec.m0,
            Level::Extension => self.inner.spec.m0 * self.inner.spec.n,
        };
        digits_of(a.0, p, len as usize)
    }

    /// The class of `x` in F_p[x]/(modulus_q).
    pub fn gen_base(&self) -> Fe {
        let spec = &self.inner.spec;
        if spec.m0 >= 2 {
            Fe(self.inner.p)
        } else {
            // root of c0 + c1 x
            let p = self.inner.p as i64;
            let c0 = spec.modulus_q[0] as i64;
            let c1 = spec.modulus_q[1] as i64;
            let inv = (1..p).find(|x| (c1 * x) % p == 1).unwrap();
            Fe(((-c0 * inv).rem_euclid(p)) as u32)
        }
    }

    /// The class of `x` in F_q[x]/(modulus_e).
    pub fn gen_ext(&self) -> Fe {
        let spec = &self.inner.spec;
        if spec.n >= 2 {
            Fe(self.inner.q)
        } else {
            let c0 = Fe(spec.modulus_e[0]);
            let c1 = Fe(spec.modulus_e[1]);
            self.neg(self.mul(c0, self.inv(c1).expect("monic-ish modulus")))
        }
    }

    /// Renders `a` as a polynomial in `g` (generator of F_q over F_p), and in
    /// `h` (generator of E over F_q) when n > 1.
    pub fn render(&self, a: Fe) -> String {
        let spec = &self.inner.spec;
        if spec.n == 1 {
            return self.render_base(a.0);
        }
        let coeffs = digits_of(a.0, self.inner.q, spec.n as usize);
        render_poly(&coeffs, "h", |c| self.render_base(c), |c| self.render_base(c).contains('+'))
    }

    fn render_base(&self, c: u32) -> String {
        let digits = digits_of(c, self.inner.p, self.inner.spec.m0 as usize);
        render_poly(&digits, "g", |d| d.to_string(), |_| false)
    }
}

fn add_digits(mut a: u32, mut b: u32, p: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    let mut out = 0;
    let mut place = 1;
    while a > 0 || b > 0 {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn render_poly(
    coeffs: &[u32],
    var: &str,
    show: impl Fn(u32) -> String,
    compound: impl Fn(u32) -> bool,
) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let term = if i == 0 {
            show(c)
        } else if c == 1 {
            mono
        } else if compound(c) {
            format!("({})*{mono}", show(c))
        } else {
            format!("{}*{mono}", show(c))
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_one_plus_one() {
        let f = Field::for_q(2).unwrap();
        assert_eq!(f.add(Fe::ONE, Fe::ONE), Fe::ZERO);
    }

    #[test]
    fn f3_inverse_of_two() {
        let f = Field::for_q(3).unwrap();
        assert_eq!(f.inv(Fe(2)).unwrap(), Fe(2));
        assert_eq!(f.inv(Fe::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn f4_u_squared() {
        // modulus u^2+u+1: u = index 2, u+1 = index 3
        let f = Field::for_q(4).unwrap();
        let u = f.gen_base();
        assert_eq!(u, Fe(2));
        assert_eq!(f.mul(u, u), Fe(3));
        assert_eq!(f.render(f.mul(u, u)), "g+1");
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x+1)^2 over F_2
        let spec = FieldSpec { p: 2, m0: 2, n: 1, modulus_q: vec![1, 0, 1], modulus_e: vec![0, 1] };
        assert_eq!(Field::new(&spec).unwrap_err(), Error::ReducibleModulus { level: "F_q" });
        // x^2 + 1 over F_5 splits since 2^2 = -1
        let spec = FieldSpec { p: 5, m0: 2, n: 1, modulus_q: vec![1, 0, 1], modulus_e: vec![0, 1] };
        assert!(Field::new(&spec).is_err());
    }

    #[test]
    fn enumeration_and_cap() {
        let f = Field::for_q(3).unwrap();
        assert_eq!(f.enumerate(Level::Base, 10).unwrap(), vec![Fe(0), Fe(1), Fe(2)]);
        let f4 = Field::for_q(4).unwrap();
        let all = f4.enumerate(Level::Base, 10).unwrap();
        assert_eq!(all.len(), 4);
        assert!(matches!(f4.enumerate(Level::Base, 3), Err(Error::CapExceeded { cap: 3, .. })));
    }

    #[test]
    fn tower_embeds_base_field() {
        let spec = FieldSpec::with_extension(3, 2).unwrap();
        let e = Field::new(&spec).unwrap();
        let base = Field::for_q(3).unwrap();
        assert_eq!(e.order(), 9);
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(e.mul(Fe(a), Fe(b)), base.mul(Fe(a), Fe(b)));
                assert_eq!(e.add(Fe(a), Fe(b)), base.add(Fe(a), Fe(b)));
            }
        }
        assert_eq!(e.level_of(Fe(2)), Level::Prime);
        assert_eq!(e.level_of(Fe(5)), Level::Extension);
    }

    #[test]
    fn tower_over_f4() {
        let spec = FieldSpec::with_extension(4, 2).unwrap();
        let e = Field::new(&spec).unwrap();
        assert_eq!(e.order(), 16);
        let h = e.gen_ext();
        // h satisfies its modulus
        let m = &spec.modulus_e;
        let val = m
            .iter()
            .enumerate()
            .fold(Fe::ZERO, |acc, (i, &c)| e.add(acc, e.mul(Fe(c), e.pow(h, i as u64))));
        assert_eq!(val, Fe::ZERO);
        assert!(e.render(Fe(7)).contains('h'));
    }

    #[test]
    fn lagrange_and_frobenius() {
        for q in [2, 3, 4, 5, 8, 9] {
            let f = Field::for_q(q).unwrap();
            for a in 1..f.order() {
                assert_eq!(f.pow(Fe(a), f.order() as u64 - 1), Fe::ONE);
            }
            for a in 0..f.order() {
                for b in 0..f.order() {
                    let lhs = f.frobenius(f.add(Fe(a), Fe(b)));
                    let rhs = f.add(f.frobenius(Fe(a)), f.frobenius(Fe(b)));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn field_axioms_against_digit_addition() {
        for q in [3, 5, 9] {
            let f = Field::for_q(q).unwrap();
            for a in 0..f.order() {
                for b in 0..f.order() {
                    assert_eq!(f.add(Fe(a), Fe(b)).0, add_digits(a, b, f.characteristic()));
                    assert_eq!(f.sub(f.add(Fe(a), Fe(b)), Fe(b)), Fe(a));
                }
            }
        }
    }

    #[test]
    fn big_exponents() {
        let f = Field::for_q(5).unwrap();
        let e = BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap();
        let r = (123456789012345678901234567890u128 % 4) as u64;
        assert_eq!(f.pow_big(Fe(2), &e).unwrap(), f.pow(Fe(2), r));
        assert_eq!(f.pow_big(Fe(2), &BigInt::from(-1)).unwrap(), f.inv(Fe(2)).unwrap());
        assert!(f.pow_big(Fe::ZERO, &BigInt::from(-3)).is_err());
    }
}
