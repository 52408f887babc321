//! Special-polynomial power sums in `A/(P^N)` for a monic prime P, and the
//! congruences between exponents `j ≡ j' mod (q^d - 1)p^M` that stand in for
//! P-adic interpolation.
//!
//! For `a` prime to P, `a^{q^d-1} ≡ 1 mod P`, hence `a^{(q^d-1)p^M} ≡ 1 mod
//! P^{p^M}`; coprime sums at such exponents agree modulo at least
//! `P^{min(N, p^M)}`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rings::{is_irreducible, MonicRange, ThetaPoly};
use crate::scalars::Field;

/// The residue ring `A/(P^N)` with a parameter t.
#[derive(Clone, Debug)]
pub struct VadicContext {
    pub field: Field,
    pub prime: ThetaPoly,
    pub n: u32,
    modulus: ThetaPoly,
    pub t_rep: ThetaPoly,
    pub alpha: Option<ThetaPoly>,
    pub cap: u64,
}

impl VadicContext {
    pub fn new(field: &Field, prime: ThetaPoly, n: u32, t_rep: ThetaPoly, cap: u64) -> Result<VadicContext> {
        if !prime.is_monic() || !is_irreducible(&prime, field)? {
            return Err(Error::Hypothesis(format!("{} is not a monic prime", prime.render(field, "θ"))));
        }
        if n == 0 {
            return Err(Error::InvalidSpec("N must be positive".into()));
        }
        let modulus = prime.pow(n as u64, field);
        let t_rep = t_rep.rem(&modulus, field)?;
        Ok(VadicContext { field: field.clone(), prime, n, modulus, t_rep, alpha: None, cap })
    }

    /// Attaches α after checking `v_P(α^{-d}·P(t)) > 1`, i.e.
    /// `v_P(P(t)) - d·v_P(α) > 1` with valuations read modulo `P^N`.
    pub fn with_alpha(mut self, alpha: ThetaPoly) -> Result<VadicContext> {
        let d = self.degree() as i64;
        let pt = self.eval_at_t(&self.prime);
        let v_pt = self.valuation(&pt) as i64;
        let v_alpha = self.valuation(&alpha.rem(&self.modulus, &self.field)?) as i64;
        if v_pt - d * v_alpha <= 1 {
            return Err(Error::Hypothesis(format!(
                "need v_P(α^-d·P(t)) > 1, got {} - {d}·{}",
                v_pt, v_alpha
            )));
        }
        self.alpha = Some(alpha);
        Ok(self)
    }

    pub fn degree(&self) -> usize {
        self.prime.degree().expect("prime has a degree")
    }

    pub fn modulus(&self) -> &ThetaPoly {
        &self.modulus
    }

    fn reduce(&self, a: &ThetaPoly) -> ThetaPoly {
        a.rem(&self.modulus, &self.field).expect("modulus is monic")
    }

    fn mul(&self, a: &ThetaPoly, b: &ThetaPoly) -> ThetaPoly {
        self.reduce(&a.mul(b, &self.field))
    }

    pub fn pow(&self, a: &ThetaPoly, mut e: u64) -> ThetaPoly {
        let mut acc = ThetaPoly::one();
        let mut base = self.reduce(a);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `a(t)` in `A/(P^N)`.
    pub fn eval_at_t(&self, a: &ThetaPoly) -> ThetaPoly {
        let mut acc = ThetaPoly::zero();
        for &c in a.coeffs().iter().rev() {
            acc = self.mul(&acc, &self.t_rep).add(&ThetaPoly::constant(c), &self.field);
        }
        acc
    }

    /// `v_P` of a residue, capped at N.
    pub fn valuation(&self, a: &ThetaPoly) -> u32 {
        let mut x = self.reduce(a);
        let mut v = 0;
        while v < self.n && !x.is_zero() {
            let (quot, rem) = x.div_rem(&self.prime, &self.field).expect("monic");
            if !rem.is_zero() {
                return v;
            }
            x = quot;
            v += 1;
        }
        self.n
    }

    fn term(&self, a: &ThetaPoly, beta: u64, j: u64) -> ThetaPoly {
        let chi = self.pow(&self.eval_at_t(a), beta);
        self.mul(&chi, &self.pow(a, j))
    }
}

/// `Σ_{a∈A_+(e)} χ_t(a)^β a^j mod P^N`, skipping multiples of P when
/// `coprime` is set.
pub fn vadic_power_sum(ctx: &VadicContext, e: usize, beta: u64, j: u64, coprime: bool) -> Result<ThetaPoly> {
    let f = &ctx.field;
    let range = MonicRange::new(f, e, ctx.cap)?;
    let parts = rayon::current_num_threads() * 4;
    let partials: Vec<ThetaPoly> = range
        .blocks(parts)
        .into_par_iter()
        .map(|block| {
            let mut acc = ThetaPoly::zero();
            range.for_each_in(block, |c| {
                let a = ThetaPoly::new(c.to_vec());
                if coprime && a.rem(&ctx.prime, f).expect("monic").is_zero() {
                    return;
                }
                acc = acc.add(&ctx.term(&a, beta, j), f);
            });
            acc
        })
        .collect();
    Ok(partials.iter().fold(ThetaPoly::zero(), |acc, p| acc.add(p, f)))
}

/// The omitted terms `Σ_{a∈A_+(e), P|a} χ_t(a)^β a^j mod P^N`.
pub fn vadic_multiples_sum(ctx: &VadicContext, e: usize, beta: u64, j: u64) -> Result<ThetaPoly> {
    let f = &ctx.field;
    let d = ctx.degree();
    if e < d {
        return Ok(ThetaPoly::zero());
    }
    let mut acc = ThetaPoly::zero();
    for b in MonicRange::new(f, e - d, ctx.cap)?.iter() {
        acc = acc.add(&ctx.term(&ctx.prime.mul(&b, f), beta, j), f);
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceRow {
    pub m: u32,
    pub j_prime: u64,
    /// Largest N' ≤ N with the two sums congruent mod P^{N'}.
    pub exponent: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuityReport {
    pub prime: String,
    pub n: u32,
    pub e: usize,
    pub beta: u64,
    pub j: u64,
    pub rows: Vec<CongruenceRow>,
    pub nondecreasing: bool,
}

/// Congruence exponents between coprime sums at `j` and at
/// `j' = j + (q^d - 1)·p^M·k` for each M.
pub fn vadic_continuity_check(
    ctx: &VadicContext,
    e: usize,
    beta: u64,
    j: u64,
    m_list: &[u32],
    k: u64,
) -> Result<ContinuityReport> {
    let f = &ctx.field;
    let q = f.base_order() as u64;
    let p = f.characteristic() as u64;
    let period = q.pow(ctx.degree() as u32) - 1;
    let base = vadic_power_sum(ctx, e, beta, j, true)?;
    let mut rows = Vec::new();
    for &m in m_list {
        let step = period
            .checked_mul(p.checked_pow(m).ok_or_else(|| Error::DegreeOverflow(format!("p^{m}")))?)
            .and_then(|s| s.checked_mul(k))
            .ok_or_else(|| Error::DegreeOverflow(format!("exponent step at M={m}")))?;
        let j_prime = j.checked_add(step).ok_or_else(|| Error::DegreeOverflow("j'".into()))?;
        let other = vadic_power_sum(ctx, e, beta, j_prime, true)?;
        let exponent = ctx.valuation(&base.sub(&other, f));
        rows.push(CongruenceRow { m, j_prime, exponent });
    }
    let nondecreasing = rows.windows(2).all(|w| w[0].exponent <= w[1].exponent);
    Ok(ContinuityReport {
        prime: ctx.prime.render(f, "θ"),
        n: ctx.n,
        e,
        beta,
        j,
        rows,
        nondecreasing,
    })
}
