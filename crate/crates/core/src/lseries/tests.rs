use super::*;
use crate::charsum::{valuation_floor, Floor};
use crate::rings::{monic_enumerate, ThetaPoly};

fn engine(q: u32) -> Engine {
    Engine::new(Field::for_q(q).unwrap(), 1 << 20)
}

fn th(k: i64) -> LaurentSeries {
    LaurentSeries::theta_pow(k)
}

#[test]
fn power_sum_examples() {
    for q in [2, 3, 4] {
        let eng = engine(q);
        let y = PadicInt::exact(eng.p(), 5);
        let s = eng.power_sum(0, 3, &y, &TValue::Scalar(Fe::ONE), 20).unwrap();
        assert_eq!(s.truncate(20), LaurentSeries::one().truncate(20));
    }
    let eng = engine(2);
    let s = eng.power_sum(1, 1, &PadicInt::exact(2, 0), &TValue::Scalar(Fe::ONE), 10).unwrap();
    assert_eq!(s, LaurentSeries::one());
    let eng = engine(3);
    for t in 0..3 {
        let s = eng.power_sum(1, 1, &PadicInt::exact(3, 0), &TValue::Scalar(Fe(t)), 10).unwrap();
        assert!(s.is_zero());
    }
}

#[test]
fn power_sum_exactness_rule() {
    let eng = engine(3);
    let t = TValue::Scalar(Fe(2));
    assert!(eng.power_sum(2, 1, &PadicInt::exact(3, -2), &t, 5).unwrap().is_exact());
    assert!(!eng.power_sum(2, 1, &PadicInt::exact(3, 2), &t, 5).unwrap().is_exact());
}

#[test]
fn convergence_examples() {
    let job = |beta, t: TValue, x: i64| LSeriesJob::new(beta, t, SPoint::new(th(x), PadicInt::exact(2, 1)).unwrap(), 10);
    assert!(convergence_check(&job(5, TValue::Scalar(Fe::ONE), 1)).converges);
    let c = convergence_check(&job(1, TValue::Series(th(1)), 1));
    assert_eq!(c, Convergence { converges: false, margin: 0 });
    assert!(convergence_check(&job(1, TValue::Series(th(1)), 2)).converges);
    let eng = engine(2);
    assert!(matches!(eng.lseries_eval(&job(1, TValue::Series(th(1)), 1)), Err(Error::Divergent { margin: 0 })));
}

/// `Σ_{deg a ≤ emax} χ_t(a)^β a^{-j}` by inverting `a^j` directly.
fn direct_sum(f: &Field, beta: u64, t: &TValue, j: i64, emax: usize, n: i64) -> LaurentSeries {
    let mut acc = LaurentSeries::zero_to(n);
    for e in 0..=emax {
        for a in monic_enumerate(f, e, 1 << 20).unwrap() {
            let chi = t.as_series().horner(a.coeffs(), f).pow_int(beta as i64, INF_PREC, f).unwrap();
            let inv = a.pow(j as u64, f).to_series().inv(n + n.abs() + 10, f).unwrap();
            acc = acc.add(&chi.mul_trunc(&inv, n, f), f);
        }
    }
    acc
}

#[test]
fn specialization_matches_direct_inversion() {
    for (q, beta, t, j, n) in [
        (2, 0, TValue::Scalar(Fe::ONE), 1, 24),
        (2, 1, TValue::Scalar(Fe::ZERO), 1, 24),
        (3, 1, TValue::Scalar(Fe(2)), 2, 30),
        (3, 2, TValue::Scalar(Fe(1)), 3, 30),
        (4, 1, TValue::Scalar(Fe(2)), 1, 16),
        (2, 1, TValue::Series(th(1)), 2, 24),
        (3, 1, TValue::Series(th(1).add(&LaurentSeries::one(), &Field::for_q(3).unwrap())), 3, 24),
    ] {
        let eng = engine(q);
        let job = LSeriesJob::new(beta, t.clone(), SPoint::from_integer(j, eng.p()), n);
        let l = eng.lseries_eval(&job).unwrap();
        let direct = direct_sum(&eng.field, beta, &t, j, l.e_star as usize + 2, n);
        assert!(l.value.agreement(&direct, &eng.field) >= n, "q={q} beta={beta} j={j}");
    }
}

#[test]
fn tail_bound_holds_on_computed_terms() {
    // brute force past the cutoff: every term obeys the bound and the extra
    // terms change nothing below n
    let grid: Vec<(u32, u64, TValue, i64, PadicInt)> = vec![
        (2, 0, TValue::Scalar(Fe::ONE), 1, PadicInt::exact(2, 1)),
        (2, 1, TValue::Scalar(Fe::ONE), 1, PadicInt::exact(2, 3)),
        (2, 2, TValue::Series(th(1)), 3, PadicInt::exact(2, -1)),
        (3, 1, TValue::Scalar(Fe(2)), 1, PadicInt::exact(3, 2)),
        (3, 1, TValue::Series(th(1)), 2, PadicInt::exact(3, 1)),
        (3, 0, TValue::Scalar(Fe::ZERO), 1, PadicInt::truncate_int(3, -7, 6)),
        (4, 1, TValue::Scalar(Fe(3)), 1, PadicInt::exact(2, 5)),
    ];
    for (q, beta, t, xk, y) in grid {
        let eng = engine(q);
        let n = 18;
        let job = LSeriesJob::new(beta, t.clone(), SPoint::new(th(xk), y.clone()).unwrap(), n);
        let l = eng.lseries_eval(&job).unwrap();
        for e in 0..=l.e_star + 3 {
            let wide = LSeriesJob { n: 40, ..job.clone() };
            let term = eng.degree_term(&wide, e).unwrap();
            let bound = tail_bound(q, -xk, beta, t.delta(), e);
            assert!(Valuation::of(&term).at_least(bound.min(40)), "q={q} e={e} {:?} < {bound}", Valuation::of(&term));
        }
        let longer = eng.partial_sum(&job, l.e_star + 3).unwrap();
        assert!(l.value.agreement(&longer, &eng.field) >= n);
    }
}

#[test]
fn tail_cutoff_is_last_visible_degree() {
    for (q, xv, beta, dt, n) in [(2, -1, 0, 1, 20), (3, -2, 2, 2, 50), (2, -5, 1, 1, 3), (5, -1, 0, 1, 1)] {
        let e = tail_cutoff(q, xv, beta, dt, n);
        assert!(tail_bound(q, xv, beta, dt, e) < n || e == 0);
        for k in e + 1..e + 50 {
            assert!(tail_bound(q, xv, beta, dt, k) >= n);
        }
    }
}

#[test]
fn zeta_partial_sums() {
    // β = 0, s = s_j is Σ a^{-j}
    let eng = engine(2);
    let f = &eng.field;
    let n = 12;
    let job = LSeriesJob::new(0, TValue::Scalar(Fe::ONE), SPoint::from_integer(1, 2), n);
    let l = eng.lseries_eval(&job).unwrap();
    let mut direct = LaurentSeries::zero_to(n);
    for e in 0..=6 {
        for a in monic_enumerate(f, e, 100).unwrap() {
            direct = direct.add(&a.to_series().inv(n, f).unwrap(), f);
        }
    }
    assert!(l.value.agreement(&direct, f) >= n);
    // 1 + 1/θ + 1/(θ+1) = 1 + θ^-2 + θ^-3 + ...
    assert_eq!(l.value.coeff(0), Some(Fe::ONE));
    assert_eq!(l.value.coeff(1), Some(Fe::ZERO));
}

#[test]
fn t_zero_sees_only_units_at_zero() {
    let eng = engine(2);
    let f = &eng.field;
    let n = 14;
    let job = LSeriesJob::new(1, TValue::Scalar(Fe::ZERO), SPoint::from_integer(1, 2), n);
    let l = eng.lseries_eval(&job).unwrap();
    let mut direct = LaurentSeries::zero_to(n);
    for e in 0..=8 {
        for a in monic_enumerate(f, e, 1000).unwrap() {
            if a.coeff(0) != Fe::ZERO {
                direct = direct.add(&a.to_series().inv(n, f).unwrap(), f);
            }
        }
    }
    assert!(l.value.agreement(&direct, f) >= n);
}

#[test]
fn euler_examples() {
    let eng = engine(2);
    let f = &eng.field;
    let n = 20;
    let job = LSeriesJob::new(0, TValue::Scalar(Fe::ONE), SPoint::new(th(2), PadicInt::exact(2, 0)).unwrap(), n);
    assert_eq!(eng.euler_product_eval(&job, 0).unwrap(), LaurentSeries::one().truncate(n));
    let got = eng.euler_product_eval(&job, 1).unwrap();
    let base = LaurentSeries::one().sub(&th(-2), f);
    let want = base.pow_int(-2, n, f).unwrap();
    assert!(got.agreement(&want, f) >= n);
}

#[test]
fn dirichlet_and_euler_agree() {
    let grid: Vec<(u32, u64, TValue, i64, PadicInt, usize)> = vec![
        (2, 0, TValue::Scalar(Fe::ONE), 1, PadicInt::exact(2, 1), 5),
        (2, 1, TValue::Scalar(Fe::ONE), 2, PadicInt::exact(2, 0), 4),
        (3, 1, TValue::Scalar(Fe(2)), 1, PadicInt::exact(3, 2), 3),
        (3, 1, TValue::Series(th(1)), 2, PadicInt::exact(3, -1), 3),
        (2, 2, TValue::Scalar(Fe::ZERO), 1, PadicInt::truncate_int(2, 11, 8), 5),
    ];
    for (q, beta, t, xk, y, dmax) in grid {
        let eng = engine(q);
        let n = 24;
        let job = LSeriesJob::new(beta, t, SPoint::new(th(xk), y).unwrap(), n);
        let margin = convergence_check(&job).margin;
        let l = eng.lseries_eval(&job).unwrap();
        let e = eng.euler_product_eval(&job, dmax).unwrap();
        let expect = n.min((dmax as i64 + 1) * margin);
        assert!(l.value.agreement(&e, &eng.field) >= expect, "q={q} beta={beta} dmax={dmax}");
    }
}

#[test]
fn continuation_floor() {
    for q in [2, 3] {
        let eng = engine(q);
        for y in [1i64, -1, 2] {
            for tv in 0..q {
                let t = TValue::Scalar(Fe(tv));
                let cs = eng.continuation_coeffs(1, &PadicInt::exact(eng.p(), y), &t, Some(&th(1)), 5, 40).unwrap();
                assert_eq!(cs[0].truncate(40), LaurentSeries::one().truncate(40));
                for (j, c) in cs.iter().enumerate() {
                    let floor = (q as i64 - 1) * (j * (j + 1) / 2) as i64;
                    assert!(Valuation::of(c).at_least(floor), "q={q} y={y} j={j}: {:?}", Valuation::of(c));
                }
            }
        }
    }
}

#[test]
fn continuation_rejects_small_alpha() {
    let eng = engine(2);
    let t = TValue::Series(th(2));
    let r = eng.continuation_coeffs(1, &PadicInt::exact(2, 1), &t, Some(&th(2)), 2, 10);
    assert!(matches!(r, Err(Error::AlphaTooSmall { delta_t: 3, got: 2 })));
    assert!(eng.continuation_coeffs(1, &PadicInt::exact(2, 1), &t, Some(&th(3)), 2, 10).is_ok());
}

#[test]
fn l2_examples_and_linearity() {
    let f = Field::for_q(3).unwrap();
    let t = TValue::Series(th(1).add(&LaurentSeries::constant(Fe(2)), &f));
    let alpha = th(2);
    let j = 3;
    let tj = t.as_series().pow_int(j as i64, INF_PREC, &f).unwrap();
    let aj = alpha.pow_int(-(j as i64), INF_PREC, &f).unwrap();
    assert_eq!(l2_map(&LaurentSeries::one(), &t, &alpha, j, 0, &f).unwrap(), tj.mul(&aj, &f));
    assert_eq!(l2_map(&LaurentSeries::monomial(Fe::ONE, j as i64), &t, &alpha, j, 0, &f).unwrap(), aj);
    assert!(matches!(
        l2_map(&LaurentSeries::monomial(Fe::ONE, 4), &t, &alpha, j, 0, &f),
        Err(Error::DegreeOverflow(_))
    ));
    let a = LaurentSeries::exact(0, vec![Fe(1), Fe(2), Fe(0), Fe(1)]);
    let b = LaurentSeries::exact(1, vec![Fe(2), Fe(2)]);
    let l = |w: &LaurentSeries| l2_map(w, &t, &alpha, j, 0, &f).unwrap();
    assert_eq!(l(&a.add(&b, &f)), l(&a).add(&l(&b), &f));
    assert_eq!(l(&a.scale(Fe(2), &f)), l(&a).scale(Fe(2), &f));
}

#[test]
fn continuation_instance_floor_is_triangular() {
    for q in [2, 3] {
        let f = Field::for_q(q).unwrap();
        for (t, alpha) in [(TValue::Scalar(Fe::ONE), th(1)), (TValue::Series(th(1)), th(2))] {
            for j in 1..=4usize {
                if (q as u64).pow(j as u32) > 100 {
                    continue;
                }
                let (target, inst) = continuation_instance(j, &t, &alpha, (1, 2), &f).unwrap();
                let floor = valuation_floor(&inst, &target, 1000).unwrap();
                let qs = (j * (j + 1) / 2) as u64;
                assert_eq!(floor, Floor::Finite { q_sum: qs, bound: (q as i64 - 1) * qs as i64 });
            }
        }
    }
}

#[test]
fn y_continuity() {
    // y and y + p^M agree on the first M digits; the power sums agree better
    // as M grows
    let eng = engine(2);
    let f = &eng.field;
    let t = TValue::Scalar(Fe::ONE);
    let mut last = 0;
    for m in 1..=5u32 {
        let y1 = PadicInt::exact(2, 3);
        let y2 = PadicInt::exact(2, 3 + (1i64 << m));
        let a = eng.power_sum(3, 1, &y1, &t, 64).unwrap();
        let b = eng.power_sum(3, 1, &y2, &t, 64).unwrap();
        let agree = a.agreement(&b, f);
        assert!(agree >= (1i64 << m), "M={m}: {agree}");
        assert!(agree >= last);
        last = agree;
    }
}

#[test]
fn truncated_y_needs_enough_digits() {
    let eng = engine(2);
    let y = PadicInt::truncate_int(2, 5, 2);
    let r = eng.power_sum(2, 0, &y, &TValue::Scalar(Fe::ONE), 30);
    assert!(matches!(r, Err(Error::PrecisionExhausted { .. })));
}

#[test]
fn t_continuity() {
    let eng = engine(3);
    let f = &eng.field;
    let base = th(1);
    let y = PadicInt::exact(3, 1);
    let mut prev = 0;
    for m in [2i64, 4, 6] {
        let t1 = TValue::Series(base.clone());
        let t2 = TValue::Series(base.add(&LaurentSeries::monomial(Fe::ONE, m), f));
        let n = 30;
        let mk = |t| LSeriesJob::new(1, t, SPoint::new(th(2), y.clone()).unwrap(), n);
        let a = eng.lseries_eval(&mk(t1)).unwrap().value;
        let b = eng.lseries_eval(&mk(t2)).unwrap().value;
        let agree = a.agreement(&b, f);
        assert!(agree >= prev);
        prev = agree;
    }
    assert!(prev > 2);
}

#[test]
fn newton_on_actual_coefficients() {
    let eng = engine(2);
    let cs = eng.continuation_coeffs(0, &PadicInt::exact(2, 3), &TValue::Scalar(Fe::ONE), None, 5, 60).unwrap();
    let vals: Vec<(usize, Valuation)> = cs.iter().enumerate().map(|(j, c)| (j, coefficient_valuation(j, c))).collect();
    let p = newton_polygon(&vals).unwrap();
    for w in p.segments.windows(2) {
        assert!(w[0].slope_num * w[1].slope_den < w[1].slope_num * w[0].slope_den);
    }
}

#[test]
fn cache_hook_is_used() {
    use std::collections::HashMap;
    use std::sync::Mutex;
    #[derive(Default)]
    struct Mem(Mutex<HashMap<String, LaurentSeries>>, Mutex<usize>);
    impl PowerSumCache for Mem {
        fn get(&self, key: &str, prec: i64) -> Option<LaurentSeries> {
            let v = self.0.lock().unwrap().get(key).cloned()?;
            (v.abs_prec() >= prec).then(|| {
                *self.1.lock().unwrap() += 1;
                v
            })
        }
        fn put(&self, key: &str, value: &LaurentSeries) {
            self.0.lock().unwrap().insert(key.to_string(), value.clone());
        }
    }
    let mem = Arc::new(Mem::default());
    let eng = engine(3).with_cache(mem.clone());
    let y = PadicInt::exact(3, 2);
    let t = TValue::Scalar(Fe(1));
    let a = eng.power_sum(3, 1, &y, &t, 20).unwrap();
    let b = eng.power_sum(3, 1, &y, &t, 15).unwrap();
    assert_eq!(*mem.1.lock().unwrap(), 1);
    assert_eq!(a.truncate(15), b);
    eng.power_sum(3, 1, &y, &t, 25).unwrap();
    assert_eq!(*mem.1.lock().unwrap(), 1);
}

#[test]
fn bracket_matches_raw_coefficients() {
    let a = ThetaPoly::new(vec![Fe(1), Fe(0), Fe(1)]);
    assert_eq!(bracket(&a).unwrap(), bracket_of_coeffs(a.coeffs()));
}
