//! Power sums by degree and the L-series `L(χ_t^β, s)` on `S_∞ = C_∞^* × Z_p`.
//!
//! For monic `a` of degree `e` and `s = (x, y)`, `a^{-s} = x^{-e}⟨a⟩^{-y}`, so
//! the series is `Σ_e x^{-e}·S_e` with the degree-e power sum
//! `S_e = Σ_{a∈A_+(e)} χ_t(a)^β ⟨a⟩^{-y}`.
//!
//! Truncation is certified by the floor `v(S_e) ≥ (q-1)e(e+1)/2 - eβδ_t`,
//! which comes from the valuation floor on the α-shifted coefficients with
//! `α = θ^{δ_t}`.

pub mod newton;

use std::sync::Arc;

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::charsum::{LinearSumInstance, SeriesTarget};
use crate::error::{Error, Result};
use crate::rings::{bracket, bracket_of_coeffs, parse_laurent, prime_enumerate, LaurentSeries, MonicRange, INF_PREC};
use crate::scalars::{Fe, Field, PadicInt};

pub use newton::{newton_polygon, NewtonPolygon, Segment};

/// The parameter t: a scalar of E or an element of E((1/θ)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TValue {
    Scalar(Fe),
    Series(LaurentSeries),
}

impl TValue {
    /// Parses `g+1`, `θ`, `θ^2 + θ^{-1}`, ...; constants become scalars.
    pub fn parse(src: &str, f: &Field) -> Result<TValue> {
        let s = parse_laurent(src, f)?;
        Ok(TValue::from_series(s))
    }

    pub fn from_series(s: LaurentSeries) -> TValue {
        if s.is_zero() {
            return TValue::Scalar(Fe::ZERO);
        }
        if s.is_exact() && s.valuation() == Some(0) && s.coeffs().len() == 1 {
            return TValue::Scalar(s.coeffs()[0]);
        }
        TValue::Series(s)
    }

    /// v_∞(t), `None` for t = 0.
    pub fn valuation(&self) -> Option<i64> {
        match self {
            TValue::Scalar(c) => (!c.is_zero()).then_some(0),
            TValue::Series(s) => s.valuation(),
        }
    }

    /// `δ_t = max(1 - v(t), 1)`.
    pub fn delta(&self) -> i64 {
        self.valuation().map_or(1, |v| (1 - v).max(1))
    }

    /// `λ_t = q^k` with `k = max(0, -v(t))`; returns k.
    pub fn size_exponent(&self) -> i64 {
        self.valuation().map_or(0, |v| (-v).max(0))
    }

    pub fn is_exact(&self) -> bool {
        match self {
            TValue::Scalar(_) => true,
            TValue::Series(s) => s.is_exact(),
        }
    }

    pub fn as_series(&self) -> LaurentSeries {
        match self {
            TValue::Scalar(c) => LaurentSeries::constant(*c),
            TValue::Series(s) => s.clone(),
        }
    }

    pub fn render(&self, f: &Field) -> String {
        match self {
            TValue::Scalar(c) => f.render(*c),
            TValue::Series(s) => s.render(f),
        }
    }

    /// `χ_t(a)^β` for a monic given by its coefficients, known to `O(θ^{-n})`.
    fn chi_power(&self, coeffs: &[Fe], beta: u64, n: i64, f: &Field) -> Result<Chi> {
        match self {
            TValue::Scalar(t) => {
                let mut acc = Fe::ZERO;
                for &c in coeffs.iter().rev() {
                    acc = f.add(f.mul(acc, *t), c);
                }
                Ok(Chi::Scalar(f.pow(acc, beta)))
            }
            TValue::Series(t) => {
                let v = t.horner(coeffs, f);
                Ok(Chi::Series(v.pow_int(beta as i64, n, f)?))
            }
        }
    }
}

enum Chi {
    Scalar(Fe),
    Series(LaurentSeries),
}

impl Chi {
    fn is_zero(&self) -> bool {
        match self {
            Chi::Scalar(c) => c.is_zero(),
            Chi::Series(s) => s.is_zero(),
        }
    }

    fn val_bound(&self) -> i64 {
        match self {
            Chi::Scalar(_) => 0,
            Chi::Series(s) => s.val_bound(),
        }
    }

    fn times(&self, s: &LaurentSeries, n: i64, f: &Field) -> LaurentSeries {
        match self {
            Chi::Scalar(c) => s.scale(*c, f),
            Chi::Series(c) => c.mul_trunc(s, n, f),
        }
    }
}

/// A point `s = (x, y)` of `S_∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SPoint {
    pub x: LaurentSeries,
    pub y: PadicInt,
}

impl SPoint {
    pub fn new(x: LaurentSeries, y: PadicInt) -> Result<SPoint> {
        if x.vanishes() {
            return Err(Error::InvalidSpec("x must be nonzero".into()));
        }
        Ok(SPoint { x, y })
    }

    /// `s_j = (θ^j, j)`, so that `a^{s_j} = a^j`.
    pub fn from_integer(j: i64, p: u32) -> SPoint {
        SPoint { x: LaurentSeries::theta_pow(j), y: PadicInt::exact(p, j) }
    }

    fn x_valuation(&self) -> i64 {
        self.x.valuation().expect("x is nonzero")
    }
}

/// An evaluation request for `L(χ_t^β, s)` to absolute precision `n`.
#[derive(Clone, Debug)]
pub struct LSeriesJob {
    pub beta: u64,
    pub t: TValue,
    pub s: SPoint,
    pub n: i64,
    pub alpha: Option<LaurentSeries>,
}

impl LSeriesJob {
    pub fn new(beta: u64, t: TValue, s: SPoint, n: i64) -> LSeriesJob {
        LSeriesJob { beta, t, s, n, alpha: None }
    }

    pub fn delta_t(&self) -> i64 {
        self.t.delta()
    }

    /// Exponent k with `λ_t = q^k`.
    pub fn lambda_t_exponent(&self) -> i64 {
        self.t.size_exponent()
    }

    /// The shift α, defaulting to `θ^{δ_t}`.
    pub fn alpha(&self) -> Result<LaurentSeries> {
        match &self.alpha {
            None => Ok(LaurentSeries::theta_pow(self.delta_t())),
            Some(a) => {
                check_alpha(a, &self.t)?;
                Ok(a.clone())
            }
        }
    }
}

fn check_alpha(alpha: &LaurentSeries, t: &TValue) -> Result<()> {
    let delta_t = t.delta();
    let got = alpha.valuation().map(|v| -v).ok_or(Error::DivisionByZero)?;
    if got < delta_t {
        return Err(Error::AlphaTooSmall { delta_t, got });
    }
    Ok(())
}

/// Whether `|x| > λ_t^β`, with the margin `-v(x) - β·max(0, -v(t))` (in
/// powers of q). The point converges iff the margin is positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Convergence {
    pub converges: bool,
    pub margin: i64,
}

pub fn convergence_check(job: &LSeriesJob) -> Convergence {
    let margin = -job.s.x_valuation() - job.beta as i64 * job.lambda_t_exponent();
    Convergence { converges: margin > 0, margin }
}

/// Lower bound for `v(x^{-e}·S_e)`.
pub fn tail_bound(q: u32, x_val: i64, beta: u64, delta_t: i64, e: u64) -> i64 {
    let e = e as i64;
    -e * x_val + (q as i64 - 1) * e * (e + 1) / 2 - e * beta as i64 * delta_t
}

/// The largest degree whose term may still be visible at precision `n`:
/// every term of higher degree has `v ≥ n` by [`tail_bound`].
pub fn tail_cutoff(q: u32, x_val: i64, beta: u64, delta_t: i64, n: i64) -> u64 {
    // the bound is a convex quadratic in e, so past its vertex it only grows
    let mut last_below = 0u64;
    let mut e = 0u64;
    loop {
        let b = tail_bound(q, x_val, beta, delta_t, e);
        let growing = tail_bound(q, x_val, beta, delta_t, e + 1) > b;
        if b < n {
            last_below = e;
        } else if growing {
            return last_below;
        }
        e += 1;
    }
}

/// Lower bound `(q-1)j(j+1)/2` on `v(c_j)`.
pub fn continuation_floor(q: u32, j: usize) -> i64 {
    (q as i64 - 1) * (j * (j + 1) / 2) as i64
}

/// `v_∞` of a computed value: exact, bounded below by its precision, or
/// exactly zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Valuation {
    Finite(i64),
    AtLeast(i64),
    Infinite,
}

impl Valuation {
    pub fn of(s: &LaurentSeries) -> Valuation {
        match s.valuation() {
            Some(v) => Valuation::Finite(v),
            None if s.is_zero() => Valuation::Infinite,
            None => Valuation::AtLeast(s.abs_prec()),
        }
    }

    /// Whether the value is known to have valuation at least `bound`.
    pub fn at_least(&self, bound: i64) -> bool {
        match *self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }
}

/// Storage for power sums keyed by a semantic string, e.g. a disk cache.
/// `get` returns a value known to at least `prec`, or nothing.
pub trait PowerSumCache: Send + Sync {
    fn get(&self, key: &str, prec: i64) -> Option<LaurentSeries>;
    fn put(&self, key: &str, value: &LaurentSeries);
}

/// Evaluated `L` value together with its certificate.
#[derive(Clone, Debug)]
pub struct LValue {
    pub value: LaurentSeries,
    pub e_star: u64,
    pub margin: i64,
}

/// Field, enumeration cap and optional cache shared by every evaluation.
#[derive(Clone)]
pub struct Engine {
    pub field: Field,
    pub cap: u64,
    cache: Option<Arc<dyn PowerSumCache>>,
}

impl std::fmt::Debug for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Engine")
            .field("field", &self.field.spec().descriptor())
            .field("cap", &self.cap)
            .field("cache", &self.cache.is_some())
            .finish()
    }
}

impl Engine {
    pub fn new(field: Field, cap: u64) -> Engine {
        Engine { field, cap, cache: None }
    }

    pub fn with_cache(mut self, cache: Arc<dyn PowerSumCache>) -> Engine {
        self.cache = Some(cache);
        self
    }

    pub fn q(&self) -> u32 {
        self.field.base_order()
    }

    pub fn p(&self) -> u32 {
        self.field.characteristic()
    }

    fn power_sum_key(&self, e: usize, beta: u64, y: &PadicInt, t: &TValue) -> String {
        let t_desc = match t {
            TValue::Series(s) if !s.is_exact() => format!("{}@{}", t.render(&self.field), s.abs_prec()),
            _ => t.render(&self.field),
        };
        format!(
            "power_sum|{}|e={e}|beta={beta}|y={}|t={t_desc}",
            self.field.spec().descriptor(),
            y.descriptor()
        )
    }

    /// `S_e = Σ_{a∈A_+(e)} χ_t(a)^β ⟨a⟩^{-y}` known to `O(θ^{-n})`; exact
    /// when y is an exact integer ≤ 0 and t is exact.
    pub fn power_sum(&self, e: usize, beta: u64, y: &PadicInt, t: &TValue, n: i64) -> Result<LaurentSeries> {
        let range = MonicRange::new(&self.field, e, self.cap)?;
        let key = self.power_sum_key(e, beta, y, t);
        if let Some(c) = &self.cache {
            if let Some(v) = c.get(&key, n) {
                return Ok(v.truncate(n));
            }
        }
        let neg_y = y.neg();
        let exact = neg_y.is_nonnegative_integer() && t.is_exact();
        let f = &self.field;
        let parts = rayon::current_num_threads() * 4;
        let blocks = range.blocks(parts);
        let partials: Vec<Result<LaurentSeries>> = blocks
            .into_par_iter()
            .map(|block| {
                let mut acc = LaurentSeries::zero();
                let mut err = None;
                range.for_each_in(block, |coeffs| {
                    if err.is_some() {
                        return;
                    }
                    match power_sum_term(coeffs, beta, &neg_y, t, n, exact, f) {
                        Ok(Some(term)) => acc = acc.add(&term, f),
                        Ok(None) => {}
                        Err(e) => err = Some(e),
                    }
                });
                match err {
                    Some(e) => Err(e),
                    None => Ok(acc),
                }
            })
            .collect();
        let mut total = if exact { LaurentSeries::zero() } else { LaurentSeries::zero_to(n) };
        for part in partials {
            total = total.add(&part?, f);
        }
        if !exact {
            total = total.truncate(n);
        }
        if let Some(c) = &self.cache {
            c.put(&key, &total);
        }
        Ok(total)
    }

    /// `Σ_{e ≤ emax} x^{-e}·S_e` to `O(θ^{-n})`, without convergence checks.
    pub fn partial_sum(&self, job: &LSeriesJob, emax: u64) -> Result<LaurentSeries> {
        let mut acc = LaurentSeries::zero_to(job.n);
        for e in 0..=emax {
            acc = acc.add(&self.degree_term(job, e)?, &self.field);
        }
        Ok(acc.truncate(job.n))
    }

    /// `x^{-e}·S_e` to `O(θ^{-n})`.
    pub fn degree_term(&self, job: &LSeriesJob, e: u64) -> Result<LaurentSeries> {
        let f = &self.field;
        let n = job.n;
        let x_val = job.s.x_valuation();
        let floor = tail_bound(self.q(), 0, job.beta, job.delta_t(), e);
        let xe = job.s.x.pow_int(-(e as i64), n.saturating_sub(floor.min(0)), f)?;
        let ps = self.power_sum(e as usize, job.beta, &job.s.y, &job.t, n + e as i64 * x_val)?;
        Ok(ps.mul_trunc(&xe, n, f))
    }

    /// `L(χ_t^β, s)` to `O(θ^{-n})`, truncated after the certified degree.
    pub fn lseries_eval(&self, job: &LSeriesJob) -> Result<LValue> {
        let conv = convergence_check(job);
        if !conv.converges {
            return Err(Error::Divergent { margin: conv.margin });
        }
        let e_star = tail_cutoff(self.q(), job.s.x_valuation(), job.beta, job.delta_t(), job.n);
        let value = self.partial_sum(job, e_star)?;
        if value.abs_prec() < job.n {
            return Err(Error::SeriesPrecision { needed: job.n, available: value.abs_prec() });
        }
        Ok(LValue { value, e_star, margin: conv.margin })
    }

    /// `Π_{f prime, deg f ≤ dmax} (1 - χ_t(f)^β f^{-s})^{-1}` to `O(θ^{-n})`.
    pub fn euler_product_eval(&self, job: &LSeriesJob, dmax: usize) -> Result<LaurentSeries> {
        let conv = convergence_check(job);
        if !conv.converges {
            return Err(Error::Divergent { margin: conv.margin });
        }
        let f = &self.field;
        let n = job.n;
        let neg_y = job.s.y.neg();
        let primes = if dmax == 0 { Vec::new() } else { prime_enumerate(f, dmax, self.cap)? };
        let x_val = job.s.x_valuation();
        let mut x_pows: Vec<LaurentSeries> = Vec::new();
        let mut acc = LaurentSeries::one().truncate(n);
        for pr in &primes {
            let d = pr.degree().expect("prime") as i64;
            while x_pows.len() as i64 <= d {
                let k = x_pows.len() as i64;
                x_pows.push(job.s.x.pow_int(-k, n + k * job.beta as i64 * job.lambda_t_exponent(), f)?);
            }
            let chi = job.t.chi_power(pr.coeffs(), job.beta, n + d * x_val, f)?;
            if chi.is_zero() {
                continue;
            }
            let inner = n + d * x_val - chi.val_bound();
            let pw = bracket(pr)?.one_unit_pow(&neg_y, inner, f)?;
            let u = chi.times(&pw, n + d * x_val, f).mul_trunc(&x_pows[d as usize], n, f);
            let factor = LaurentSeries::one().sub(&u, f).inv(n, f)?;
            acc = acc.mul_trunc(&factor, n, f);
        }
        Ok(acc.truncate(n))
    }

    /// `c_j = Σ_{a∈A_+(j)} (χ_t(a)/α^j)^β ⟨a⟩^{-y}` for `j ≤ jmax`, each to
    /// `O(θ^{-n})`. α defaults to `θ^{δ_t}`.
    pub fn continuation_coeffs(
        &self,
        beta: u64,
        y: &PadicInt,
        t: &TValue,
        alpha: Option<&LaurentSeries>,
        jmax: usize,
        n: i64,
    ) -> Result<Vec<LaurentSeries>> {
        (0..=jmax).map(|j| self.continuation_coeff(beta, y, t, alpha, j, n)).collect()
    }

    /// The single coefficient `c_j` to `O(θ^{-n})`.
    pub fn continuation_coeff(
        &self,
        beta: u64,
        y: &PadicInt,
        t: &TValue,
        alpha: Option<&LaurentSeries>,
        j: usize,
        n: i64,
    ) -> Result<LaurentSeries> {
        let f = &self.field;
        let alpha = match alpha {
            Some(a) => {
                check_alpha(a, t)?;
                a.clone()
            }
            None => LaurentSeries::theta_pow(t.delta()),
        };
        let a_val = alpha.valuation().expect("checked nonzero");
        let shift = j as i64 * beta as i64;
        // v(α^{-jβ}) = -jβ·v(α) ≥ 0
        let scale_val = -shift * a_val;
        let ps = self.power_sum(j, beta, y, t, n - scale_val)?;
        let scale = alpha.pow_int(-shift, n - ps.val_bound().min(n), f)?;
        let c = if ps.is_exact() && scale.is_exact() { ps.mul(&scale, f) } else { ps.mul_trunc(&scale, n, f) };
        Ok(if c.is_exact() { c } else { c.truncate(n) })
    }
}

/// One summand `χ_t(a)^β ⟨a⟩^{-y}`; `None` when χ vanishes.
fn power_sum_term(
    coeffs: &[Fe],
    beta: u64,
    neg_y: &PadicInt,
    t: &TValue,
    n: i64,
    exact: bool,
    f: &Field,
) -> Result<Option<LaurentSeries>> {
    let target = if exact { INF_PREC } else { n };
    let chi = t.chi_power(coeffs, beta, target, f)?;
    if chi.is_zero() {
        return Ok(None);
    }
    let inner = if exact { INF_PREC } else { n - chi.val_bound() };
    let pw = bracket_of_coeffs(coeffs).one_unit_pow(neg_y, inner, f)?;
    Ok(Some(chi.times(&pw, target, f)))
}

/// `L_2(Σ_{n≤j} c_n θ^{-n}) = Σ c_n t^{j-n} / α^j`, known to `O(θ^{-prec})`
/// unless everything is exact and α is a monomial.
pub fn l2_map(w: &LaurentSeries, t: &TValue, alpha: &LaurentSeries, j: usize, prec: i64, f: &Field) -> Result<LaurentSeries> {
    if !w.is_exact() {
        return Err(Error::InvalidSpec("L2 needs an exact polynomial in 1/θ".into()));
    }
    if w.is_zero() {
        return Ok(LaurentSeries::zero());
    }
    let last = w.start() + w.coeffs().len() as i64 - 1;
    if w.start() < 0 || last > j as i64 {
        return Err(Error::DegreeOverflow(format!("L2 input spans θ^-{}..θ^-{last}, allowed 0..{j}", w.start())));
    }
    let ts = t.as_series();
    let exact = t.is_exact() && alpha.is_exact() && alpha.coeffs().len() == 1;
    let target = if exact { INF_PREC } else { prec };
    let mut acc = LaurentSeries::zero();
    let mut t_pow = LaurentSeries::one();
    // n runs from j down to 0, so t's exponent j - n runs upward
    for n in (0..=j as i64).rev() {
        let c = w.coeff(n).unwrap_or(Fe::ZERO);
        if !c.is_zero() {
            acc = acc.add(&t_pow.scale(c, f), f);
        }
        if n > 0 {
            t_pow = if exact { t_pow.mul(&ts, f) } else { t_pow.mul_trunc(&ts, target - acc.val_bound().min(0), f) };
        }
    }
    if exact {
        let inv = alpha.pow_int(-(j as i64), INF_PREC, f)?;
        return Ok(acc.mul(&inv, f));
    }
    let inv = alpha.pow_int(-(j as i64), target - acc.val_bound().min(target), f)?;
    Ok(acc.mul_trunc(&inv, target, f))
}

/// The unshifted linear sum instance behind the continuation coefficient
/// floor: `W(j) = span{θ^{-1}, ..., θ^{-j}}` with maps `L_1 = id` and
/// [`l2_map`], exponents `(i_1, i_2)`.
pub fn continuation_instance(
    j: usize,
    t: &TValue,
    alpha: &LaurentSeries,
    exponents: (u64, u64),
    f: &Field,
) -> Result<(SeriesTarget, LinearSumInstance<SeriesTarget>)> {
    check_alpha(alpha, t)?;
    if !t.is_exact() || !alpha.is_exact() || alpha.coeffs().len() != 1 {
        return Err(Error::InvalidSpec("continuation instance needs exact t and a monomial α".into()));
    }
    let basis: Vec<LaurentSeries> = (1..=j as i64).map(|k| LaurentSeries::monomial(Fe::ONE, k)).collect();
    let l2 = basis.iter().map(|b| l2_map(b, t, alpha, j, INF_PREC, f)).collect::<Result<Vec<_>>>()?;
    let inst = LinearSumInstance {
        q: f.base_order(),
        dim: j,
        images: vec![basis, l2],
        shift: vec![LaurentSeries::zero(), LaurentSeries::zero()],
        exponents: vec![exponents.0, exponents.1],
    };
    Ok((SeriesTarget { field: f.clone() }, inst))
}

/// Reports a coefficient's valuation, warning when it vanishes only to
/// precision.
pub fn coefficient_valuation(j: usize, c: &LaurentSeries) -> Valuation {
    let v = Valuation::of(c);
    if let Valuation::AtLeast(p) = v {
        warn!("coefficient {j} vanishes to precision {p}");
    }
    v
}

#[cfg(test)]
mod tests;
