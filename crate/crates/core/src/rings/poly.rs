//! Dense univariate polynomials in θ over the field tower.

use crate::error::{Error, Result};
use crate::scalars::{Fe, Field};

use super::laurent::LaurentSeries;

/// A polynomial in θ, lowest degree first. The coefficient vector never ends
/// in a zero; the zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ThetaPoly {
    coeffs: Vec<Fe>,
}

impl ThetaPoly {
    pub fn new(mut coeffs: Vec<Fe>) -> ThetaPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ThetaPoly { coeffs }
    }

    pub fn zero() -> ThetaPoly {
        ThetaPoly { coeffs: Vec::new() }
    }

    pub fn one() -> ThetaPoly {
        ThetaPoly { coeffs: vec![Fe::ONE] }
    }

    pub fn constant(c: Fe) -> ThetaPoly {
        ThetaPoly::new(vec![c])
    }

    /// `c·θ^d`.
    pub fn monomial(c: Fe, d: usize) -> ThetaPoly {
        let mut coeffs = vec![Fe::ZERO; d + 1];
        coeffs[d] = c;
        ThetaPoly::new(coeffs)
    }

    pub fn theta() -> ThetaPoly {
        ThetaPoly::monomial(Fe::ONE, 1)
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` standing in for deg 0 = -∞.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Fe::ONE
    }

    pub fn add(&self, other: &ThetaPoly, f: &Field) -> ThetaPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        ThetaPoly::new((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &ThetaPoly, f: &Field) -> ThetaPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        ThetaPoly::new((0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg(&self, f: &Field) -> ThetaPoly {
        ThetaPoly::new(self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: Fe, f: &Field) -> ThetaPoly {
        ThetaPoly::new(self.coeffs.iter().map(|&x| f.mul(c, x)).collect())
    }

    pub fn mul(&self, other: &ThetaPoly, f: &Field) -> ThetaPoly {
        if self.is_zero() || other.is_zero() {
            return ThetaPoly::zero();
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        ThetaPoly::new(out)
    }

    pub fn pow(&self, mut e: u64, f: &Field) -> ThetaPoly {
        let mut base = self.clone();
        let mut acc = ThetaPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, divisor: &ThetaPoly, f: &Field) -> Result<(ThetaPoly, ThetaPoly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((ThetaPoly::zero(), self.clone()));
        }
        let mut quot = vec![Fe::ZERO; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k];
            if c.is_zero() {
                continue;
            }
            let factor = f.mul(c, lead_inv);
            quot[k - dd] = factor;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + i] = f.sub(rem[k - dd + i], f.mul(factor, d));
            }
        }
        Ok((ThetaPoly::new(quot), ThetaPoly::new(rem)))
    }

    pub fn rem(&self, divisor: &ThetaPoly, f: &Field) -> Result<ThetaPoly> {
        Ok(self.div_rem(divisor, f)?.1)
    }

    /// χ_t(self) = self(t) for a scalar t, by Horner's scheme.
    pub fn eval(&self, t: Fe, f: &Field) -> Fe {
        self.coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, t), c))
    }

    /// self(t) for a Laurent series t, by Horner's scheme.
    pub fn eval_series(&self, t: &LaurentSeries, f: &Field) -> LaurentSeries {
        let mut acc = LaurentSeries::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(t, f).add(&LaurentSeries::constant(c), f);
        }
        acc
    }

    /// The same polynomial viewed as an exact element of E((1/θ)).
    pub fn to_series(&self) -> LaurentSeries {
        match self.degree() {
            None => LaurentSeries::zero(),
            Some(d) => {
                let coeffs: Vec<Fe> = self.coeffs.iter().rev().copied().collect();
                LaurentSeries::exact(-(d as i64), coeffs)
            }
        }
    }

    /// Renders as `c_d*θ^d + ... + c_0` with coefficients via the field.
    pub fn render(&self, f: &Field, var: &str) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            terms.push(render_term(f, c, var, i as i64));
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// `c*var^e` with the usual elisions.
pub(crate) fn render_term(f: &Field, c: Fe, var: &str, e: i64) -> String {
    let cs = f.render(c);
    let mono = match e {
        0 => return cs,
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    };
    if c == Fe::ONE {
        mono
    } else if cs.contains('+') {
        format!("({cs})*{mono}")
    } else {
        format!("{cs}*{mono}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[u32]) -> ThetaPoly {
        ThetaPoly::new(c.iter().map(|&x| Fe(x)).collect())
    }

    #[test]
    fn canonical_form() {
        assert_eq!(p(&[1, 0, 0]), p(&[1]));
        assert_eq!(p(&[0, 0]).degree(), None);
        assert!(p(&[]).is_zero());
    }

    #[test]
    fn evaluation_examples() {
        let f2 = Field::for_q(2).unwrap();
        assert_eq!(ThetaPoly::one().eval(Fe(1), &f2), Fe::ONE);
        assert_eq!(p(&[0, 1, 1]).eval(Fe(1), &f2), Fe::ZERO);
    }

    #[test]
    fn f3_product() {
        let f3 = Field::for_q(3).unwrap();
        assert_eq!(p(&[1, 1]).mul(&p(&[2, 1]), &f3), p(&[2, 0, 1]));
    }

    #[test]
    fn division_with_remainder() {
        let f3 = Field::for_q(3).unwrap();
        let a = p(&[1, 2, 0, 1]);
        let b = p(&[2, 1]);
        let (qt, r) = a.div_rem(&b, &f3).unwrap();
        assert_eq!(qt.mul(&b, &f3).add(&r, &f3), a);
        assert!(r.degree().unwrap_or(0) < 1);
        assert!(a.div_rem(&ThetaPoly::zero(), &f3).is_err());
    }

    #[test]
    fn series_evaluation_matches_scalar() {
        let f = Field::for_q(5).unwrap();
        let a = p(&[3, 0, 4, 1]);
        for t in 0..5 {
            let s = a.eval_series(&LaurentSeries::constant(Fe(t)), &f);
            assert_eq!(s, LaurentSeries::constant(a.eval(Fe(t), &f)));
        }
    }
}
