//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use ffzeta::carlitz::{
    carlitz_ratio, pellarin_identity_check, pi_omega, rational_reconstruct, reexpand, theta_limit_gap,
};
use ffzeta::charsum::run_selftest;
use ffzeta::lseries::{
    continuation_floor, convergence_check, Engine, LSeriesJob, SPoint, TValue, Valuation,
};
use ffzeta::rings::{prime_enumerate, LaurentSeries, ThetaPoly, ThetaTPoly};
use ffzeta::scalars::{Fe, Field, PadicInt};
use ffzeta::special::{special_poly, trivial_zero_admissible, trivial_zero_check};
use ffzeta::vadic::{vadic_continuity_check, VadicContext};
use ffzeta_cli::commands::{bridge_points, pellarin_grid};

// Pinned parameters and tolerances.
const CAP: u64 = 1_000_000;
const OMEGA_PRECS: [i64; 3] = [10, 30, 60];
const PELLARIN_PREC: i64 = 30;
const PELLARIN_BUDGET: Duration = Duration::from_secs(60);
const LIMIT_PREC: i64 = 30;
const DIRICHLET_PREC: i64 = 30;
const BRIDGE_PREC: i64 = 30;
const BRIDGE_POINTS: usize = 10;
const CHARSUM_SEED: u64 = 0x0ff2e7a;
const CARLITZ_PREC: i64 = 30;
const VADIC_DEPTH: u32 = 6;
const Y_DIGITS: usize = 4;

type Outcome = Result<String, String>;

fn field(q: u32) -> Field {
    Field::for_q(q).expect("shipped field")
}

fn engine(q: u32) -> Engine {
    Engine::new(field(q), CAP)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_omega_at_theta() -> Outcome {
    for q in [2, 3, 4, 5] {
        let f = field(q);
        let minus_one = LaurentSeries::one().neg(&f);
        for n in OMEGA_PRECS {
            let v = pi_omega(&TValue::Series(LaurentSeries::theta_pow(1)), n, &f).map_err(|e| e.to_string())?;
            ensure(v.is_exact() && v == minus_one, || format!("q={q} N={n}: got {}", v.render(&f)))?;
        }
    }
    Ok("exactly -1 for q in 2..5, N in {10,30,60}".into())
}

fn c2_pellarin() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for q in [2, 3, 4, 5] {
        let eng = engine(q);
        for t in pellarin_grid(&eng.field) {
            let r = pellarin_identity_check(&eng, &t, PELLARIN_PREC).map_err(|e| e.to_string())?;
            ensure(r.pass, || format!("q={q} t={}: agree to {} < {PELLARIN_PREC}", r.t, r.agree_to))?;
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= PELLARIN_BUDGET, || format!("took {elapsed:?}, budget {PELLARIN_BUDGET:?}"))?;
    Ok(format!("{count} points at N={PELLARIN_PREC} in {:.1}s", elapsed.as_secs_f64()))
}

fn c3_theta_limit() -> Outcome {
    let mut last = Vec::new();
    for q in [2, 3, 4, 5] {
        let f = field(q);
        let gaps: Vec<i64> = (1..=6)
            .map(|m| theta_limit_gap(m, LIMIT_PREC, &f))
            .collect::<ffzeta::Result<_>>()
            .map_err(|e| e.to_string())?;
        ensure(gaps.windows(2).all(|w| w[0] <= w[1]), || format!("q={q}: gaps {gaps:?} not monotone"))?;
        ensure(gaps[5] > gaps[0], || format!("q={q}: gaps {gaps:?} do not grow"))?;
        let at = pi_omega(&TValue::Series(LaurentSeries::theta_pow(1)), LIMIT_PREC, &f)
            .map_err(|e| e.to_string())?
            .neg(&f);
        ensure(at.is_exact() && at == LaurentSeries::one(), || format!("q={q}: value at θ is {}", at.render(&f)))?;
        last = gaps;
    }
    Ok(format!("agreement grows with M (q=5: {last:?}); exact 1 at t=θ"))
}

fn bipoly(rows: &[&[u32]]) -> ThetaTPoly {
    ThetaTPoly::from_matrix(rows.iter().map(|r| r.iter().map(|&x| Fe(x)).collect()).collect())
}

fn c4_degree_bound() -> Outcome {
    let mut checked = 0;
    for q in [2, 3, 4] {
        let f = field(q);
        for beta in 0..=4 {
            for j in 0..=6 {
                // special_poly rejects any nonzero coefficient up to bound + 2
                let z = special_poly(&f, beta, j, CAP).map_err(|e| format!("q={q} β={beta} j={j}: {e}"))?;
                ensure(z.coeffs.len() <= z.bound + 1, || format!("q={q} β={beta} j={j}: too many coefficients"))?;
                checked += 1;
            }
        }
    }
    let f2 = field(2);
    let z = special_poly(&f2, 1, 0, CAP).map_err(|e| e.to_string())?;
    ensure(z.coeffs == vec![ThetaTPoly::one(), ThetaTPoly::one()], || "q=2 β=1 j=0 regression".into())?;
    let z = special_poly(&f2, 1, 1, CAP).map_err(|e| e.to_string())?;
    let want = vec![ThetaTPoly::one(), bipoly(&[&[1, 1], &[1]]), bipoly(&[&[0, 1], &[1]])];
    ensure(z.coeffs == want, || "q=2 β=1 j=1 regression".into())?;
    let z = special_poly(&field(3), 1, 0, CAP).map_err(|e| e.to_string())?;
    ensure(z.coeffs == vec![ThetaTPoly::one()], || "q=3 β=1 j=0 regression".into())?;
    Ok(format!("{checked} polynomials vanish through bound+2; regression values match"))
}

fn c5_trivial_zeros() -> Outcome {
    let mut count = 0;
    for q in [2, 3, 4] {
        let f = field(q);
        for beta in 0..=3 {
            for lambda in 1..=8 {
                if trivial_zero_admissible(q, beta, lambda) {
                    trivial_zero_check(&f, beta, lambda, CAP).map_err(|e| format!("q={q} β={beta} λ={lambda}: {e}"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} admissible (β, λ) give z(1, -λ) = 0"))
}

fn c6_valuation_floor() -> Outcome {
    let mut count = 0;
    for q in [2u32, 3] {
        let eng = engine(q);
        let f = &eng.field;
        let p = eng.p();
        let ys = [
            PadicInt::exact(p, 1),
            PadicInt::exact(p, -1),
            PadicInt::exact(p, 2),
            PadicInt::exact(p, q as i64),
            PadicInt::truncate_int(p, -3, Y_DIGITS),
        ];
        let ts = [
            TValue::Scalar(Fe::ZERO),
            TValue::Scalar(Fe::ONE),
            TValue::Series(LaurentSeries::theta_pow(-1)),
            TValue::Series(LaurentSeries::theta_pow(1)),
            TValue::Series(LaurentSeries::theta_pow(2)),
        ];
        for y in &ys {
            for t in &ts {
                for j in 0..=6usize {
                    let floor = continuation_floor(q, j);
                    // one digit of precision beyond the floor decides it
                    let n = floor + 1;
                    let c = eng
                        .continuation_coeff(1, y, t, None, j, n)
                        .map_err(|e| format!("q={q} y={} t={} j={j}: {e}", y.descriptor(), t.render(f)))?;
                    let v = Valuation::of(&c);
                    ensure(v.at_least(floor), || {
                        format!("q={q} y={} t={} j={j}: {v:?} below {floor}", y.descriptor(), t.render(f))
                    })?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} coefficients meet v(c_j) >= (q-1)j(j+1)/2"))
}

fn c7_dirichlet_euler() -> Outcome {
    let mut count = 0;
    for q in [2u32, 3] {
        let eng = engine(q);
        let f = &eng.field;
        let p = eng.p();
        let inv = LaurentSeries::theta_pow(-1);
        let grid = [
            (TValue::Scalar(Fe::ZERO), 1, 1),
            (TValue::Scalar(Fe::ONE), 2, 1),
            (TValue::Series(inv.clone()), 1, 1),
            (TValue::Series(LaurentSeries::one().add(&inv, f)), 2, 2),
            (TValue::Series(LaurentSeries::theta_pow(1)), 3, 1),
            (TValue::Scalar(Fe::ONE), 3, -1),
        ];
        for (t, xk, y) in grid {
            let s = SPoint::new(LaurentSeries::theta_pow(xk), PadicInt::exact(p, y)).map_err(|e| e.to_string())?;
            let job = LSeriesJob::new(1, t.clone(), s, DIRICHLET_PREC);
            let margin = convergence_check(&job).margin;
            ensure(margin > 0, || format!("grid point t={} x=θ^{xk} diverges", t.render(f)))?;
            let dir = eng.lseries_eval(&job).map_err(|e| e.to_string())?.value;
            for d in 1..=5usize {
                let eul = eng.euler_product_eval(&job, d).map_err(|e| e.to_string())?;
                let want = DIRICHLET_PREC.min((d as i64 + 1) * margin);
                let got = dir.agreement(&eul, f);
                ensure(got >= want, || {
                    format!("q={q} t={} x=θ^{xk} y={y} D={d}: agree to {got}, need {want}", t.render(f))
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} comparisons agree to min(N, (D+1)·margin)"))
}

fn c8_bridge() -> Outcome {
    for q in [2u32, 3] {
        let eng = engine(q);
        let f = &eng.field;
        for (beta, j, t, x0) in bridge_points(f, BRIDGE_POINTS) {
            let z = special_poly(f, beta, j, CAP).map_err(|e| e.to_string())?;
            let exact = z.eval(&x0, &t, BRIDGE_PREC, f).map_err(|e| e.to_string())?;
            let x = x0.mul(&LaurentSeries::theta_pow(-(j as i64)), f);
            let s = SPoint::new(x, PadicInt::exact(eng.p(), -(j as i64))).map_err(|e| e.to_string())?;
            let job = LSeriesJob::new(beta, t.clone(), s, BRIDGE_PREC);
            let l = eng.lseries_eval(&job).map_err(|e| e.to_string())?.value;
            let got = exact.agreement(&l, f);
            ensure(got >= BRIDGE_PREC, || {
                format!("q={q} β={beta} j={j} t={} x0={}: agree to {got}", t.render(f), x0.render(f))
            })?;
        }
    }
    Ok(format!("{BRIDGE_POINTS} matched points per q agree to N={BRIDGE_PREC}"))
}

fn c9_charsum() -> Outcome {
    let rep = run_selftest(CHARSUM_SEED, 500, 200, CAP).map_err(|e| e.to_string())?;
    ensure(rep.pass, || format!("failures: {:?}", rep.failures))?;
    ensure(rep.sharpness_nonzero >= 1, || "no sharpness witness".into())?;
    Ok(format!(
        "seed {:#x}: {} vanishing, {} valued ({} nonzero sums), {}/{} witnesses nonzero",
        rep.seed,
        rep.vanishing_instances,
        rep.valued_instances,
        rep.valued_nonzero_sums,
        rep.sharpness_nonzero,
        rep.sharpness_witnesses
    ))
}

fn c10_carlitz() -> Outcome {
    let mut found = Vec::new();
    for q in [2u32, 3, 4, 5] {
        let eng = engine(q);
        let f = &eng.field;
        let j = q as u64 - 1;
        let d = q as usize + 1;
        let s = carlitz_ratio(&eng, j, CARLITZ_PREC).map_err(|e| e.to_string())?;
        let r = rational_reconstruct(&s, d, d, f)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("q={q}: no quotient within degree {d}"))?;
        let long = carlitz_ratio(&eng, j, 2 * CARLITZ_PREC).map_err(|e| e.to_string())?;
        let back = reexpand(&r.num, &r.den, 2 * CARLITZ_PREC, f).map_err(|e| e.to_string())?;
        let got = back.agreement(&long, f);
        ensure(got >= 2 * CARLITZ_PREC, || format!("q={q}: re-expansion agrees to {got}"))?;
        // independent closed form: -1/(θ^q - θ)
        let mut den = vec![Fe::ZERO; q as usize + 1];
        den[1] = f.neg(Fe::ONE);
        den[q as usize] = Fe::ONE;
        let want_den = ThetaPoly::new(den);
        let want_num = ThetaPoly::new(vec![f.neg(Fe::ONE)]);
        ensure(r.den == want_den && r.num == want_num, || {
            format!("q={q}: got {}/({})", r.num.render(f, "θ"), r.den.render(f, "θ"))
        })?;
        found.push(format!("q={q}: {}/({})", r.num.render(f, "θ"), r.den.render(f, "θ")));
    }
    Ok(found.join("; "))
}

fn c11_vadic() -> Outcome {
    let m_list = [0u32, 1, 2, 3];
    let mut reports = 0;
    let mut violations = Vec::new();
    for q in [2u32, 3] {
        let f = field(q);
        let p = f.characteristic() as u64;
        let primes = prime_enumerate(&f, 2, CAP).map_err(|e| e.to_string())?;
        for prime in primes {
            for t_rep in [ThetaPoly::theta(), ThetaPoly::one()] {
                let ctx = VadicContext::new(&f, prime.clone(), VADIC_DEPTH, t_rep.clone(), CAP)
                    .map_err(|e| e.to_string())?;
                for e in 0..=4usize {
                    for beta in 0..=2u64 {
                        for j in 1..=3u64 {
                            let rep = vadic_continuity_check(&ctx, e, beta, j, &m_list, 1).map_err(|e| e.to_string())?;
                            // each term is congruent mod P^{p^M}, so this much always holds
                            for r in &rep.rows {
                                let floor = (VADIC_DEPTH as u64).min(p.pow(r.m)) as u32;
                                ensure(r.exponent >= floor, || {
                                    format!("q={q} P={} e={e} β={beta} j={j}: {:?} below p^M", rep.prime, r)
                                })?;
                            }
                            if !rep.nondecreasing {
                                let g: Vec<u32> = rep.rows.iter().map(|r| r.exponent).collect();
                                violations.push(format!(
                                    "q={q} P={} t={} e={e} β={beta} j={j} g={g:?}",
                                    rep.prime,
                                    t_rep.render(&f, "θ")
                                ));
                            }
                            let same = vadic_continuity_check(&ctx, e, beta, j, &[0, 1], 0).map_err(|e| e.to_string())?;
                            ensure(same.rows.iter().all(|r| r.exponent == VADIC_DEPTH), || {
                                format!("q={q} P={} e={e}: k=0 gives {:?}", same.prime, same.rows)
                            })?;
                            reports += 1;
                        }
                    }
                }
            }
        }
    }
    ensure(violations.is_empty(), || {
        format!(
            "g(M) not monotone in {} of {reports} reports, e.g. {}; k=0 agreement and g(M) >= min(N, p^M) hold throughout",
            violations.len(),
            violations[0]
        )
    })?;
    Ok(format!("{reports} reports nondecreasing in M; k=0 agrees mod P^{VADIC_DEPTH}"))
}

fn cli(args: &[&str], cache: Option<&Path>) -> Result<Vec<u8>, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ffzeta"));
    cmd.args(args).env_remove("FFZETA_CACHE").env_remove("FFZETA_THREADS");
    if let Some(dir) = cache {
        cmd.arg("--cache").arg(dir);
    }
    let out = cmd.output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn c12_determinism() -> Outcome {
    let runs: [&[&str]; 3] = [
        &["coeffs", "--q", "3", "--t", "θ", "--y", "2", "--jmax", "4", "--format", "json", "--seed", "11"],
        &["lseries", "--q", "2", "--t", "θ^-1", "--x", "θ^2", "--y", "3", "--format", "json", "--seed", "11"],
        &["verify", "charsum", "--seed", "11", "--vanishing", "60", "--valued", "30", "--format", "json"],
    ];
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for args in runs {
        let plain = cli(args, None)?;
        let again = cli(args, None)?;
        ensure(plain == again, || format!("{args:?}: repeated runs differ"))?;
        let cold = cli(args, Some(dir.path()))?;
        let warm = cli(args, Some(dir.path()))?;
        ensure(cold == plain && warm == plain, || format!("{args:?}: cached output differs"))?;
        let threaded = cli(&[args, &["--threads", "1"]].concat(), Some(dir.path()))?;
        ensure(threaded == plain, || format!("{args:?}: single-threaded output differs"))?;
    }
    let entries = std::fs::read_dir(dir.path()).map_err(|e| e.to_string())?.count();
    ensure(entries > 0, || "cold run left no cache entries".into())?;
    Ok(format!("3 commands byte-identical across repeats, cold/warm cache ({entries} entries) and thread counts"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("pi-omega exact at t=θ", c1_omega_at_theta),
        ("L(χ_t,1) = -π̃Ω(t) at N=30", c2_pellarin),
        ("limit t → θ", c3_theta_limit),
        ("special polynomial degree bound", c4_degree_bound),
        ("trivial zeros", c5_trivial_zeros),
        ("continuation valuation floor", c6_valuation_floor),
        ("Dirichlet series = Euler product", c7_dirichlet_euler),
        ("special polynomials = L-series", c8_bridge),
        ("character-sum suites", c9_charsum),
        ("Carlitz rationality", c10_carlitz),
        ("P-adic continuity", c11_vadic),
        ("determinism and cache", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = check();
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
