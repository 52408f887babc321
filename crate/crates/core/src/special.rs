//! Special polynomials `z(χ_t^β, x, -j) = Σ_e x^{-e} Σ_{a∈A_+(e)} a(t)^β a(θ)^j`
//! and the trivial zeroes at `x = 1`.
//!
//! The coefficient of `x^{-e}` vanishes once `e > (β+j)/(q-1)`; two degrees
//! past that bound are always computed and checked.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lseries::{Engine, LSeriesJob, SPoint, TValue};
use crate::rings::{LaurentSeries, MonicRange, ThetaPoly, ThetaTPoly, INF_PREC};
use crate::scalars::{Field, PadicInt};

/// Extra degrees checked beyond the vanishing bound.
pub const EXTRA_DEGREES: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialPolynomial {
    pub q: u32,
    pub beta: u64,
    pub j: u64,
    /// `floor((β+j)/(q-1))`.
    pub bound: usize,
    /// `coeffs[e]` is the coefficient of `x^{-e}`, a polynomial in θ and t.
    pub coeffs: Vec<ThetaTPoly>,
}

pub fn degree_bound(q: u32, beta: u64, j: u64) -> usize {
    ((beta + j) / (q as u64 - 1)) as usize
}

/// `Σ_{a∈A_+(e)} a(t)^β a(θ)^j`.
pub fn special_coefficient(f: &Field, beta: u64, j: u64, e: usize, cap: u64) -> Result<ThetaTPoly> {
    let range = MonicRange::new(f, e, cap)?;
    let parts = rayon::current_num_threads() * 4;
    let partials: Vec<ThetaTPoly> = range
        .blocks(parts)
        .into_par_iter()
        .map(|block| {
            let mut acc = ThetaTPoly::zero();
            range.for_each_in(block, |c| {
                let a = ThetaPoly::new(c.to_vec());
                acc.add_outer(&a.pow(j, f), &a.pow(beta, f), f);
            });
            acc
        })
        .collect();
    Ok(partials.iter().fold(ThetaTPoly::zero(), |acc, p| acc.add(p, f)))
}

/// The special polynomial at `-j`, verified to vanish in the
/// [`EXTRA_DEGREES`] degrees past its bound.
pub fn special_poly(f: &Field, beta: u64, j: u64, cap: u64) -> Result<SpecialPolynomial> {
    let q = f.base_order();
    let bound = degree_bound(q, beta, j);
    MonicRange::new(f, bound + EXTRA_DEGREES, cap)?;
    let mut coeffs = Vec::with_capacity(bound + 1);
    for e in 0..=bound + EXTRA_DEGREES {
        let c = special_coefficient(f, beta, j, e, cap)?;
        if e > bound {
            if !c.is_zero() {
                return Err(Error::Internal(format!(
                    "coefficient of x^-{e} is {} past the bound {bound}",
                    c.render(f)
                )));
            }
        } else {
            coeffs.push(c);
        }
    }
    Ok(SpecialPolynomial { q, beta, j, bound, coeffs })
}

impl SpecialPolynomial {
    /// `Σ_e coeffs[e]` as a polynomial in θ and t, i.e. the value at `x = 1`.
    pub fn at_x_one(&self, f: &Field) -> ThetaTPoly {
        self.coeffs.iter().fold(ThetaTPoly::zero(), |acc, c| acc.add(c, f))
    }

    /// Swaps θ and t in every coefficient.
    pub fn transpose(&self) -> Vec<ThetaTPoly> {
        self.coeffs.iter().map(|c| c.transpose()).collect()
    }

    /// Substitutes `t = t0` and `x = x0`, known to `O(θ^{-n})`; exact when
    /// t0 is exact and x0 an exact monomial.
    pub fn eval(&self, x0: &LaurentSeries, t0: &TValue, n: i64, f: &Field) -> Result<LaurentSeries> {
        if x0.vanishes() {
            return Err(Error::InvalidSpec("x must be nonzero".into()));
        }
        let exact = t0.is_exact() && x0.is_exact() && x0.coeffs().len() == 1;
        let target = if exact { INF_PREC } else { n };
        let ts = t0.as_series();
        let mut acc = if exact { LaurentSeries::zero() } else { LaurentSeries::zero_to(n) };
        for (e, c) in self.coeffs.iter().enumerate() {
            let ce = c.eval_t_series(&ts, f);
            if ce.is_zero() {
                continue;
            }
            let xe_target = if exact { INF_PREC } else { n - ce.val_bound().min(n) };
            let xe = x0.pow_int(-(e as i64), xe_target, f)?;
            acc = acc.add(&ce.mul_trunc(&xe, target, f), f);
        }
        Ok(acc)
    }
}

/// The same value along the power-sum route: `Σ_e (x0θ^{-j})^{-e} S_e` with
/// `S_e` the degree-e power sums at `y = -j`, summed over
/// `e ≤ bound + EXTRA_DEGREES`.
pub fn bridge_value(eng: &Engine, beta: u64, j: u64, x0: &LaurentSeries, t0: &TValue, n: i64) -> Result<LaurentSeries> {
    let f = &eng.field;
    let x = x0.mul(&LaurentSeries::theta_pow(-(j as i64)), f);
    let s = SPoint::new(x, PadicInt::exact(eng.p(), -(j as i64)))?;
    let job = LSeriesJob::new(beta, t0.clone(), s, n);
    let emax = degree_bound(eng.q(), beta, j) + EXTRA_DEGREES;
    eng.partial_sum(&job, emax as u64)
}

/// Certificate that `z(χ_t^β, 1, -λ)` is the zero polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct TrivialZero {
    pub q: u32,
    pub beta: u64,
    pub lambda: u64,
    pub bound: usize,
    pub value: String,
}

/// Whether `(β, λ)` meets `λ > β` and `λ ≡ -β (mod q-1)`.
pub fn trivial_zero_admissible(q: u32, beta: u64, lambda: u64) -> bool {
    let m = q as u64 - 1;
    lambda > beta && (lambda + beta).is_multiple_of(m)
}

pub fn trivial_zero_check(f: &Field, beta: u64, lambda: u64, cap: u64) -> Result<TrivialZero> {
    let q = f.base_order();
    if !trivial_zero_admissible(q, beta, lambda) {
        return Err(Error::Hypothesis(format!(
            "trivial zero needs λ > β and λ ≡ -β mod {}; got β={beta}, λ={lambda}",
            q - 1
        )));
    }
    let z = special_poly(f, beta, lambda, cap)?;
    let value = z.at_x_one(f);
    if !value.is_zero() {
        return Err(Error::Internal(format!("z(1, -{lambda}) = {} is not zero", value.render(f))));
    }
    Ok(TrivialZero { q, beta, lambda, bound: z.bound, value: value.render(f) })
}

/// Outcome of swapping θ and t in a special polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetryProbe {
    pub q: u32,
    pub beta: u64,
    pub j: u64,
    /// Coefficientwise `z_{β,j}(θ,t) = z_{β,j}(t,θ)`.
    pub self_symmetric: bool,
    /// Coefficientwise `z_{β,j}(θ,t) = z_{j,β}(t,θ)`.
    pub swapped_symmetric: bool,
}

pub fn symmetry_probe(f: &Field, beta: u64, j: u64, cap: u64) -> Result<SymmetryProbe> {
    let z = special_poly(f, beta, j, cap)?;
    let zt = z.transpose();
    let self_symmetric = z.coeffs == zt;
    let swapped_symmetric = if beta == j { self_symmetric } else { special_poly(f, j, beta, cap)?.coeffs == zt };
    Ok(SymmetryProbe { q: f.base_order(), beta, j, self_symmetric, swapped_symmetric })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::monic_enumerate;
    use crate::scalars::Fe;

    fn m(rows: &[&[u32]]) -> ThetaTPoly {
        ThetaTPoly::from_matrix(rows.iter().map(|r| r.iter().map(|&x| Fe(x)).collect()).collect())
    }

    #[test]
    fn examples() {
        let f2 = Field::for_q(2).unwrap();
        let z = special_poly(&f2, 1, 0, 1000).unwrap();
        assert_eq!(z.coeffs, vec![ThetaTPoly::one(), ThetaTPoly::one()]);
        let z = special_poly(&f2, 1, 1, 1000).unwrap();
        // 1 + (t+θ+1)x^-1 + (t+θ)x^-2
        assert_eq!(z.bound, 2);
        assert_eq!(z.coeffs, vec![ThetaTPoly::one(), m(&[&[1, 1], &[1]]), m(&[&[0, 1], &[1]])]);
        let f3 = Field::for_q(3).unwrap();
        let z = special_poly(&f3, 1, 0, 1000).unwrap();
        assert_eq!(z.coeffs, vec![ThetaTPoly::one()]);
    }

    #[test]
    fn coefficients_match_enumeration() {
        // independent accumulation of the full bivariate product a(θ)^j·a(t)^β
        let f = Field::for_q(3).unwrap();
        for (beta, j) in [(1, 2), (2, 3), (0, 4)] {
            let z = special_poly(&f, beta, j, 1000).unwrap();
            for (e, c) in z.coeffs.iter().enumerate() {
                let mut acc = ThetaTPoly::zero();
                for a in monic_enumerate(&f, e, 1000).unwrap() {
                    let at = ThetaTPoly::from_matrix(vec![a.coeffs().to_vec()]);
                    let ath = at.transpose();
                    let mut prod = ThetaTPoly::one();
                    for _ in 0..beta {
                        prod = prod.mul(&at, &f);
                    }
                    for _ in 0..j {
                        prod = prod.mul(&ath, &f);
                    }
                    acc = acc.add(&prod, &f);
                }
                assert_eq!(*c, acc, "beta={beta} j={j} e={e}");
            }
        }
    }

    #[test]
    fn eval_examples() {
        let f2 = Field::for_q(2).unwrap();
        let z = special_poly(&f2, 1, 1, 1000).unwrap();
        let v = z.eval(&LaurentSeries::one(), &TValue::Scalar(Fe::ZERO), 0, &f2).unwrap();
        assert!(v.is_zero());
        // x^-1 → 0 leaves the constant term
        let big = LaurentSeries::theta_pow(1000);
        let v = z.eval(&big, &TValue::Scalar(Fe::ONE), 10, &f2).unwrap();
        assert_eq!(v.truncate(10), LaurentSeries::one().truncate(10));
    }

    #[test]
    fn bridge_matches_power_sums() {
        let f3 = Field::for_q(3).unwrap();
        let eng = Engine::new(f3.clone(), 1 << 16);
        let z = special_poly(&f3, 1, 2, 1000).unwrap();
        let x0 = LaurentSeries::theta_pow(1);
        let t0 = TValue::Scalar(Fe::ONE);
        let lhs = z.eval(&x0, &t0, 0, &f3).unwrap();
        let rhs = bridge_value(&eng, 1, 2, &x0, &t0, 40).unwrap();
        assert!(lhs.is_exact());
        assert!(lhs.agreement(&rhs, &f3) >= 40);
    }

    #[test]
    fn trivial_zeroes() {
        let f3 = Field::for_q(3).unwrap();
        assert_eq!(trivial_zero_check(&f3, 1, 3, 1000).unwrap().value, "0");
        let f2 = Field::for_q(2).unwrap();
        assert!(trivial_zero_check(&f2, 1, 2, 1000).is_ok());
        assert!(matches!(trivial_zero_check(&f3, 1, 2, 1000), Err(Error::Hypothesis(_))));
        assert!(matches!(trivial_zero_check(&f2, 2, 2, 1000), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn swapped_symmetry() {
        for q in [2, 3] {
            let f = Field::for_q(q).unwrap();
            for (beta, j) in [(1, 1), (1, 2), (2, 3), (0, 3)] {
                let p = symmetry_probe(&f, beta, j, 1 << 12).unwrap();
                assert!(p.swapped_symmetric, "q={q} beta={beta} j={j}");
            }
        }
        let f2 = Field::for_q(2).unwrap();
        assert!(!symmetry_probe(&f2, 1, 2, 1000).unwrap().self_symmetric);
    }
}
