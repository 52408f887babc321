//! The Carlitz period and Anderson-Thakur function in a root-free form, ζ_A
//! values, the identity `L(χ_t, 1) = -π̃Ω(t)` and rational reconstruction.
//!
//! With θ₁ a fixed root of `θ₁^{q-1} = -θ`,
//!
//! ```text
//! π̃    = θ₁ θ Π_{i≥1} (1 - θ^{1-q^i})^{-1}
//! Ω(t) = θ₁^{-q} Π_{i≥1} (1 - t θ^{-q^i})
//! ```
//!
//! so `π̃Ω(t) = θ₁^{1-q} θ Π (1 - tθ^{-q^i})/(1 - θ^{1-q^i})`, and since
//! `θ₁^{1-q} = (-θ)^{-1}` this is
//!
//! ```text
//! π̃Ω(t) = -Π_{i≥1} (1 - tθ^{-q^i}) / (1 - θ^{1-q^i}).
//! ```
//!
//! At `t = θ` each numerator equals its denominator, so `π̃Ω(θ) = -1`
//! exactly. Likewise `π̃^{q-1} = θ₁^{q-1}θ^{q-1} Π(...)^{-(q-1)}
//! = -θ^q Π_{i≥1}(1 - θ^{1-q^i})^{-(q-1)}`. Neither needs θ₁.
//!
//! Factor i differs from 1 by terms of valuation `q^i - 1` (denominator) and
//! `q^i + v(t)` (numerator); factors past the first index where both reach
//! the precision are dropped.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lseries::{Engine, LSeriesJob, SPoint, TValue};
use crate::rings::{LaurentSeries, ThetaPoly, INF_PREC};
use crate::scalars::{Fe, Field};

fn is_theta(t: &TValue) -> bool {
    matches!(t, TValue::Series(s) if *s == LaurentSeries::theta_pow(1))
}

/// Number of product factors needed for precision `n`, given `v(t)`
/// (`None` for t = 0).
pub fn factor_count(q: u32, v_t: Option<i64>, n: i64) -> u32 {
    let mut i = 1u32;
    loop {
        let qi = (q as i64).saturating_pow(i);
        let den_ok = qi > n;
        let num_ok = v_t.is_none_or(|v| qi.saturating_add(v) >= n);
        if den_ok && num_ok {
            return i - 1;
        }
        i += 1;
    }
}

/// `π̃Ω(t)` to `O(θ^{-n})`; exactly `-1` at `t = θ`.
///
/// Factors with `v(tθ^{-q^i}) ≤ 0` are not 1-units. There are finitely
/// many of them, so they are multiplied out first and the rest of the
/// product is carried to `n` minus their valuation.
pub fn pi_omega(t: &TValue, n: i64, f: &Field) -> Result<LaurentSeries> {
    let q = f.base_order();
    if is_theta(t) {
        return Ok(LaurentSeries::constant(f.neg(Fe::ONE)));
    }
    let v_t = t.valuation();
    let ts = t.as_series();
    let numerator = |i: u32| LaurentSeries::one().sub(&ts.shift(-(q as i64).pow(i)), f);
    let mut head = LaurentSeries::one();
    let mut first = 1u32;
    if let Some(v) = v_t {
        while (q as i64).pow(first) + v <= 0 {
            head = head.mul(&numerator(first), f);
            first += 1;
        }
    }
    let Some(v_head) = head.valuation() else {
        // t = θ^{q^i} exactly
        return Ok(head);
    };
    let work = n.max(n - v_head);
    let count = factor_count(q, v_t, work);
    let mut acc = LaurentSeries::one().truncate(work);
    for i in 1..=count {
        let qi = (q as i64).pow(i);
        if i >= first {
            acc = acc.mul_trunc(&numerator(i), work, f);
        }
        let den = LaurentSeries::one().sub(&LaurentSeries::theta_pow(1 - qi), f);
        acc = acc.mul_trunc(&den.inv(work, f)?, work, f);
    }
    Ok(acc.mul(&head, f).neg(f).truncate(n))
}

/// `π̃^{q-1} = -θ^q Π(1 - θ^{1-q^i})^{-(q-1)}` to `O(θ^{-n})`.
pub fn pi_pow_qm1(n: i64, f: &Field) -> Result<LaurentSeries> {
    let q = f.base_order() as i64;
    // the unit part is needed to relative precision n + q
    let inner = n + q;
    let count = factor_count(q as u32, None, inner);
    let mut unit = LaurentSeries::one().truncate(inner);
    for i in 1..=count {
        let den = LaurentSeries::one().sub(&LaurentSeries::theta_pow(1 - q.pow(i)), f);
        unit = unit.mul_trunc(&den.pow_int(-(q - 1), inner, f)?, inner, f);
    }
    Ok(unit.shift(q).neg(f).truncate(n))
}

/// `ζ_A(j) = Σ_{a monic} a^{-j}` to `O(θ^{-n})`.
pub fn zeta_value(eng: &Engine, j: u64, n: i64) -> Result<LaurentSeries> {
    if j == 0 {
        return Err(Error::Hypothesis("ζ_A(j) needs j ≥ 1".into()));
    }
    let job = LSeriesJob::new(0, TValue::Scalar(Fe::ONE), SPoint::from_integer(j as i64, eng.p()), n);
    let z = eng.lseries_eval(&job)?.value;
    if z.valuation() != Some(0) || z.leading() != Some(Fe::ONE) {
        return Err(Error::Internal(format!("ζ_A({j}) = {} is not a 1-unit", z.render(&eng.field))));
    }
    Ok(z)
}

/// `u/v` with v monic, matching a series to its precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reconstruction {
    pub num: ThetaPoly,
    pub den: ThetaPoly,
    /// Precision to which the re-expansion of `u/v` matches the input.
    pub verified_to: i64,
}

/// Expands `u/v` to `O(θ^{-n})`.
pub fn reexpand(u: &ThetaPoly, v: &ThetaPoly, n: i64, f: &Field) -> Result<LaurentSeries> {
    u.to_series().div(&v.to_series(), n, f)
}

/// Finds `u/v` with `deg u ≤ d_num`, v monic of degree `≤ d_den`, agreeing
/// with `s` to its full precision, trying the smallest v degree first.
/// Returns `None` when no such quotient exists or the precision is below
/// `d_num + d_den + 2`.
pub fn rational_reconstruct(s: &LaurentSeries, d_num: usize, d_den: usize, f: &Field) -> Result<Option<Reconstruction>> {
    let prec = s.abs_prec();
    if prec >= INF_PREC {
        return Err(Error::InvalidSpec("reconstruction expects a truncated series".into()));
    }
    if prec < (d_num + d_den + 2) as i64 {
        return Ok(None);
    }
    let coeff = |m: i64| s.coeff(m).unwrap_or(Fe::ZERO);
    for dv in 0..=d_den as i64 {
        // unknowns v_0..v_{dv-1}; (s·v)_k = Σ_i v_i s_{k+i} with v_dv = 1
        let mut rows: Vec<Vec<Fe>> = Vec::new();
        let mut rhs: Vec<Fe> = Vec::new();
        let lo = s.start().min(0) - dv;
        for k in lo..prec - dv {
            let fractional = k >= 1;
            let too_high = k < -(d_num as i64);
            if !fractional && !too_high {
                continue;
            }
            rows.push((0..dv).map(|i| coeff(k + i)).collect());
            rhs.push(f.neg(coeff(k + dv)));
        }
        let Some(sol) = solve(&rows, &rhs, dv as usize, f) else { continue };
        let mut vc = sol;
        vc.push(Fe::ONE);
        let v = ThetaPoly::new(vc);
        let prod = s.mul(&v.to_series(), f);
        let u = ThetaPoly::new((0..=d_num as i64).map(|d| prod.coeff(-d).unwrap_or(Fe::ZERO)).collect());
        let back = reexpand(&u, &v, 2 * prec, f)?;
        let verified_to = back.agreement(s, f);
        if verified_to >= prec {
            return Ok(Some(Reconstruction { num: u, den: v, verified_to }));
        }
    }
    Ok(None)
}

/// Some solution of `rows · x = rhs` over the field, free variables zero.
fn solve(rows: &[Vec<Fe>], rhs: &[Fe], n: usize, f: &Field) -> Option<Vec<Fe>> {
    let mut m: Vec<Vec<Fe>> = rows.iter().zip(rhs).map(|(r, &b)| {
        let mut row = r.clone();
        row.push(b);
        row
    }).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = f.inv(m[r][c]).ok()?;
        for x in m[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c];
                for k in c..=n {
                    let sub = f.mul(factor, m[r][k]);
                    m[i][k] = f.sub(m[i][k], sub);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![Fe::ZERO; n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][n];
    }
    Some(x)
}

/// `L(χ_t, 1)` against `-π̃Ω(t)`.
#[derive(Clone, Debug, Serialize)]
pub struct PellarinReport {
    pub t: String,
    pub prec: i64,
    pub lhs: String,
    pub rhs: String,
    pub agree_to: i64,
    pub pass: bool,
}

pub fn pellarin_identity_check(eng: &Engine, t: &TValue, n: i64) -> Result<PellarinReport> {
    let f = &eng.field;
    let job = LSeriesJob::new(1, t.clone(), SPoint::from_integer(1, eng.p()), n);
    let lhs = eng.lseries_eval(&job)?.value;
    let rhs = pi_omega(t, n, f)?.neg(f);
    let agree_to = lhs.agreement(&rhs, f).min(n);
    Ok(PellarinReport {
        t: t.render(f),
        prec: n,
        lhs: lhs.render(f),
        rhs: rhs.render(f),
        agree_to,
        pass: agree_to >= n,
    })
}

/// `-π̃Ω(t)` along `t = θ - θ^{1-M}`: returns `v(-π̃Ω(t) - 1)` capped at
/// `n`, which should grow with M.
pub fn theta_limit_gap(m: i64, n: i64, f: &Field) -> Result<i64> {
    let t = LaurentSeries::theta_pow(1).sub(&LaurentSeries::theta_pow(1 - m), f);
    let v = pi_omega(&TValue::Series(t), n, f)?.neg(f);
    Ok(v.agreement(&LaurentSeries::one(), f).min(n))
}

/// `L(χ_t, j)·(π̃^jΩ(t))^{-1}` for `(q-1) | (j-1)`, to `O(θ^{-n})`. Reported
/// for exploration; nothing is asserted about it beyond `j = 1`.
pub fn bj_ratio(eng: &Engine, t: &TValue, j: u64, n: i64) -> Result<LaurentSeries> {
    let f = &eng.field;
    let q = eng.q() as u64;
    if j == 0 || !(j - 1).is_multiple_of(q - 1) {
        return Err(Error::Hypothesis(format!("b_j needs j ≡ 1 mod {}", q - 1)));
    }
    let k = ((j - 1) / (q - 1)) as i64;
    // v(π̃^{j-1}) = -qk; keep n beyond the largest shift involved
    let work = n + q as i64 * k + 2;
    let job = LSeriesJob::new(1, t.clone(), SPoint::from_integer(j as i64, eng.p()), work);
    let l = eng.lseries_eval(&job)?.value;
    let pw = pi_pow_qm1(work, f)?.pow_int(k, work, f)?;
    let po = pi_omega(t, work, f)?;
    let denom = pw.mul_trunc(&po, work, f);
    Ok(l.div(&denom, n, f)?.truncate(n))
}

/// `ζ_A(j)/π̃^j` for `(q-1) | j`, to `O(θ^{-n})`.
pub fn carlitz_ratio(eng: &Engine, j: u64, n: i64) -> Result<LaurentSeries> {
    let f = &eng.field;
    let q = eng.q() as u64;
    if j == 0 || !j.is_multiple_of(q - 1) {
        return Err(Error::Hypothesis(format!("Carlitz ratio needs (q-1) | j, got j = {j}")));
    }
    let k = (j / (q - 1)) as i64;
    let work = n + q as i64 * k + 2;
    let z = zeta_value(eng, j, work)?;
    let pj = pi_pow_qm1(work, f)?.pow_int(k, work, f)?;
    Ok(z.div(&pj, n, f)?.truncate(n))
}

/// Agreement precision of `π̃Ω(t)^{q-1}` against `π̃^{q-1}·(-θ)^{-q}·Π(1 - tθ^{-q^i})^{q-1}`.
pub fn omega_power_identity(t: &TValue, n: i64, f: &Field) -> Result<i64> {
    let q = f.base_order() as i64;
    let lhs = pi_omega(t, n, f)?.pow_int(q - 1, n, f)?;
    let ts = t.as_series();
    let inner = n + q;
    let count = factor_count(q as u32, t.valuation(), inner);
    let mut prod = LaurentSeries::one().truncate(inner);
    for i in 1..=count {
        let num = LaurentSeries::one().sub(&ts.shift(-q.pow(i)), f);
        prod = prod.mul_trunc(&num.pow_int(q - 1, inner, f)?, inner, f);
    }
    let minus_theta = LaurentSeries::theta_pow(1).neg(f);
    let scale = minus_theta.pow_int(-q, INF_PREC, f)?;
    let rhs = pi_pow_qm1(inner, f)?.mul_trunc(&scale, inner, f).mul_trunc(&prod, n, f);
    Ok(lhs.agreement(&rhs, f).min(n))
}
