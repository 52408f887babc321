//! Polynomials in θ and t over E.

use crate::scalars::{Fe, Field};

use super::laurent::LaurentSeries;
use super::poly::ThetaPoly;

/// `Σ c_{i,k} θ^i t^k`, stored as one t-polynomial per θ-degree. No trailing
/// zero rows and every row canonical, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ThetaTPoly {
    rows: Vec<ThetaPoly>,
}

impl ThetaTPoly {
    pub fn zero() -> ThetaTPoly {
        ThetaTPoly { rows: Vec::new() }
    }

    pub fn one() -> ThetaTPoly {
        ThetaTPoly { rows: vec![ThetaPoly::one()] }
    }

    /// From a dense matrix indexed `[θ-degree][t-degree]`.
    pub fn from_matrix(m: Vec<Vec<Fe>>) -> ThetaTPoly {
        let mut rows: Vec<ThetaPoly> = m.into_iter().map(ThetaPoly::new).collect();
        while rows.last().is_some_and(|r| r.is_zero()) {
            rows.pop();
        }
        ThetaTPoly { rows }
    }

    /// Dense matrix `[θ-degree][t-degree]`, rectangular.
    pub fn to_matrix(&self) -> Vec<Vec<Fe>> {
        let width = self.t_degree().map_or(0, |d| d + 1);
        self.rows
            .iter()
            .map(|r| (0..width).map(|k| r.coeff(k)).collect())
            .collect()
    }

    /// `a(θ)·b(t)`.
    pub fn outer(a: &ThetaPoly, b: &ThetaPoly, f: &Field) -> ThetaTPoly {
        let mut out = ThetaTPoly::zero();
        out.add_outer(a, b, f);
        out
    }

    /// In place `self += a(θ)·b(t)`.
    pub fn add_outer(&mut self, a: &ThetaPoly, b: &ThetaPoly, f: &Field) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        if self.rows.len() < a.coeffs().len() {
            self.rows.resize(a.coeffs().len(), ThetaPoly::zero());
        }
        for (i, &c) in a.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut row = self.rows[i].coeffs().to_vec();
            if row.len() < b.coeffs().len() {
                row.resize(b.coeffs().len(), Fe::ZERO);
            }
            for (k, &d) in b.coeffs().iter().enumerate() {
                row[k] = f.add(row[k], f.mul(c, d));
            }
            self.rows[i] = ThetaPoly::new(row);
        }
        self.trim();
    }

    fn trim(&mut self) {
        while self.rows.last().is_some_and(|r| r.is_zero()) {
            self.rows.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn theta_degree(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn t_degree(&self) -> Option<usize> {
        self.rows.iter().filter_map(|r| r.degree()).max()
    }

    pub fn coeff(&self, i: usize, k: usize) -> Fe {
        self.rows.get(i).map_or(Fe::ZERO, |r| r.coeff(k))
    }

    pub fn add(&self, other: &ThetaTPoly, f: &Field) -> ThetaTPoly {
        let n = self.rows.len().max(other.rows.len());
        let zero = ThetaPoly::zero();
        let rows = (0..n)
            .map(|i| self.rows.get(i).unwrap_or(&zero).add(other.rows.get(i).unwrap_or(&zero), f))
            .collect();
        let mut out = ThetaTPoly { rows };
        out.trim();
        out
    }

    pub fn mul(&self, other: &ThetaTPoly, f: &Field) -> ThetaTPoly {
        if self.is_zero() || other.is_zero() {
            return ThetaTPoly::zero();
        }
        let mut rows = vec![ThetaPoly::zero(); self.rows.len() + other.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in other.rows.iter().enumerate() {
                rows[i + j] = rows[i + j].add(&a.mul(b, f), f);
            }
        }
        let mut out = ThetaTPoly { rows };
        out.trim();
        out
    }

    /// Swaps the roles of θ and t.
    pub fn transpose(&self) -> ThetaTPoly {
        let width = self.t_degree().map_or(0, |d| d + 1);
        let m = (0..width).map(|k| (0..self.rows.len()).map(|i| self.coeff(i, k)).collect()).collect();
        ThetaTPoly::from_matrix(m)
    }

    /// Substitutes a scalar for t, leaving a polynomial in θ.
    pub fn eval_t(&self, t: Fe, f: &Field) -> ThetaPoly {
        ThetaPoly::new(self.rows.iter().map(|r| r.eval(t, f)).collect())
    }

    /// Substitutes a Laurent series for t; θ stays the series variable.
    pub fn eval_t_series(&self, t: &LaurentSeries, f: &Field) -> LaurentSeries {
        let mut acc = LaurentSeries::zero();
        for (i, r) in self.rows.iter().enumerate() {
            let v = r.eval_series(t, f).mul(&LaurentSeries::theta_pow(i as i64), f);
            acc = acc.add(&v, f);
        }
        acc
    }

    /// Sum of `c θ^i t^k` terms rendered with `θ` and `t`.
    pub fn render(&self, f: &Field) -> String {
        let mut terms = Vec::new();
        for (i, r) in self.rows.iter().enumerate().rev() {
            for (k, &c) in r.coeffs().iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                let mut mono = Vec::new();
                if i > 0 {
                    mono.push(if i == 1 { "θ".to_string() } else { format!("θ^{i}") });
                }
                if k > 0 {
                    mono.push(if k == 1 { "t".to_string() } else { format!("t^{k}") });
                }
                let cs = f.render(c);
                let term = if mono.is_empty() {
                    cs
                } else if c == Fe::ONE {
                    mono.join("*")
                } else if cs.contains('+') {
                    format!("({cs})*{}", mono.join("*"))
                } else {
                    format!("{cs}*{}", mono.join("*"))
                };
                terms.push(term);
            }
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}
