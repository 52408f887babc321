//! Subcommand definitions and handlers.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ffzeta::carlitz::{
    bj_ratio, carlitz_ratio, pellarin_identity_check, pi_omega, rational_reconstruct, reexpand, theta_limit_gap,
};
use ffzeta::charsum::run_selftest;
use ffzeta::lseries::{
    continuation_floor, convergence_check, newton_polygon, Engine, LSeriesJob, SPoint, TValue, Valuation,
};
use ffzeta::rings::{parse_laurent, parse_poly, prime_enumerate, LaurentSeries, ThetaPoly};
use ffzeta::scalars::{Fe, Field, PadicInt};
use ffzeta::special::{special_poly, trivial_zero_admissible, trivial_zero_check};
use ffzeta::vadic::{vadic_continuity_check, ContinuityReport, VadicContext};
use ffzeta::Error;
use serde_json::{json, Value};

use crate::config::Format;
use crate::output::{prec_json, series_json, Outcome, Table};

#[derive(Parser, Debug)]
#[command(name = "ffzeta", version, about = "Exact arithmetic for twisted L-series over F_q[θ]")]
pub struct Cli {
    /// Config file of `key = value` lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Order of the base field F_q
    #[arg(long, global = true)]
    pub q: Option<u32>,
    /// Degree of the coefficient field E over F_q.
    #[arg(long, global = true)]
    pub ext: Option<u32>,
    /// Absolute precision N: results are reported modulo θ^-N.
    #[arg(long, global = true)]
    pub prec: Option<i64>,
    /// Enumeration cap.
    #[arg(long, global = true)]
    pub cap: Option<u64>,
    /// Worker threads for parallel sums
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Power-sum cache directory.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Disable the power-sum cache even if one is configured
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Output format: text, json or csv
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Seed for randomized suites
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficients of the special polynomial z(x, -j) in θ and t.
    SpecialPoly {
        #[arg(long, default_value_t = 1)]
        beta: u64,
        #[arg(long)]
        j: u64,
    },
    /// Checks z(1, -λ) = 0 over the admissible λ up to a bound.
    TrivialZeros {
        #[arg(long, default_value_t = 1)]
        beta: u64,
        #[arg(long, default_value_t = 8)]
        lambda_max: u64,
        /// Also report λ outside the admissible set (observed, not asserted).
        #[arg(long)]
        all: bool,
    },
    /// Evaluates L(χ_t^β, s) at a convergent point.
    Lseries {
        #[command(flatten)]
        point: PointArgs,
        /// x component of s; defaults to θ^y.
        #[arg(long)]
        x: Option<String>,
    },
    /// Continuation coefficients c_j of the L-series in x^-1.
    Coeffs {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = 6)]
        jmax: usize,
    },
    /// Newton polygon of the continuation coefficients.
    Newton {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = 6)]
        jmax: usize,
    },
    /// The product π̃Ω(t).
    Omega {
        #[arg(long, default_value = "0")]
        t: String,
    },
    /// L(χ_t, j)/(π̃^j Ω(t)) for j ≡ 1 mod q-1 (exploratory).
    BjRatio {
        #[arg(long, default_value = "0")]
        t: String,
        #[arg(long)]
        j: u64,
    },
    /// Congruences of P-adic power sums across nearby exponents.
    Vadic(VadicArgs),
    /// Randomized character-sum suites.
    CharsumSelftest(CharsumArgs),
    /// Verification suites; exit status 1 on failure.
    Verify {
        #[command(subcommand)]
        which: Verify,
    },
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// L(χ_t, 1) = -π̃Ω(t) on a grid of t, and the limit t → θ.
    Pellarin,
    /// Rationality of ζ(j)/π̃^j by reconstruction and re-expansion.
    Carlitz {
        #[arg(long)]
        j: Option<u64>,
        /// Degree bound for numerator and denominator.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Character-sum vanishing and value checks on seeded random inputs
    Charsum(CharsumArgs),
    /// Special polynomials against convergent L-series evaluations.
    Bridge {
        #[arg(long, default_value_t = 10)]
        points: usize,
    },
    /// The P-adic congruence bound and its agreement at k = 0
    Vadic(VadicArgs),
}

#[derive(Args, Debug, Clone)]
pub struct PointArgs {
    #[arg(long, default_value_t = 1)]
    pub beta: u64,
    #[arg(long, default_value = "1")]
    pub t: String,
    /// p-adic component of s, as an integer.
    #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
    pub y: i64,
    /// Keep only this many p-adic digits of y.
    #[arg(long)]
    pub y_digits: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct CharsumArgs {
    #[arg(long, default_value_t = 500)]
    pub vanishing: usize,
    #[arg(long, default_value_t = 200)]
    pub valued: usize,
}

#[derive(Args, Debug, Clone)]
pub struct VadicArgs {
    /// Monic prime P of A; without it a default list is used.
    #[arg(long)]
    pub prime: Option<String>,
    /// Work modulo P^depth.
    #[arg(long, visible_alias = "N", default_value_t = 6)]
    pub depth: u32,
    #[arg(long, default_value_t = 2)]
    pub e: usize,
    #[arg(long, default_value_t = 1)]
    pub beta: u64,
    #[arg(long, default_value_t = 1)]
    pub j: u64,
    /// Comma-separated list of M.
    #[arg(long, visible_alias = "M-list", default_value = "0,1,2,3")]
    pub m_list: String,
    #[arg(long, default_value_t = 1)]
    pub k: u64,
    /// t as a polynomial in θ.
    #[arg(long, default_value = "θ")]
    pub t: String,
}

/// A failure carrying its process exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

impl CliError {
    pub fn usage(message: impl Into<String>) -> CliError {
        CliError { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let code = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::Internal(_) => EXIT_FAIL,
            _ => EXIT_USAGE,
        };
        CliError { code, message: e.to_string() }
    }
}

type Res<T> = std::result::Result<T, CliError>;

pub struct Ctx {
    pub engine: Engine,
    pub prec: i64,
    pub seed: u64,
    pub seed_given: bool,
}

impl Ctx {
    fn f(&self) -> &Field {
        &self.engine.field
    }

    fn cap(&self) -> u64 {
        self.engine.cap
    }
}

pub fn dispatch(cmd: &Command, ctx: &Ctx) -> Res<Outcome> {
    match cmd {
        Command::SpecialPoly { beta, j } => cmd_special_poly(ctx, *beta, *j),
        Command::TrivialZeros { beta, lambda_max, all } => cmd_trivial_zeros(ctx, *beta, *lambda_max, *all),
        Command::Lseries { point, x } => cmd_lseries(ctx, point, x.as_deref()),
        Command::Coeffs { point, alpha, jmax } => cmd_coeffs(ctx, point, alpha.as_deref(), *jmax),
        Command::Newton { point, alpha, jmax } => cmd_newton(ctx, point, alpha.as_deref(), *jmax),
        Command::Omega { t } => cmd_omega(ctx, t),
        Command::BjRatio { t, j } => cmd_bj_ratio(ctx, t, *j),
        Command::Vadic(a) => cmd_vadic(ctx, a, "vadic"),
        Command::CharsumSelftest(a) => cmd_charsum(ctx, a),
        Command::Verify { which } => match which {
            Verify::Pellarin => cmd_verify_pellarin(ctx),
            Verify::Carlitz { j, bound } => cmd_verify_carlitz(ctx, *j, *bound),
            Verify::Charsum(a) => cmd_charsum(ctx, a),
            Verify::Bridge { points } => cmd_verify_bridge(ctx, *points),
            Verify::Vadic(a) => cmd_vadic(ctx, a, "verify-vadic"),
        },
    }
}

fn y_value(p: u32, a: &PointArgs) -> PadicInt {
    match a.y_digits {
        Some(m) => PadicInt::truncate_int(p, a.y, m),
        None => PadicInt::exact(p, a.y),
    }
}

fn valuation_json(v: &Valuation) -> Value {
    serde_json::to_value(v).expect("valuation serializes")
}

fn valuation_text(v: &Valuation) -> String {
    match v {
        Valuation::Finite(v) => v.to_string(),
        Valuation::AtLeast(v) => format!(">={v}"),
        Valuation::Infinite => "inf".into(),
    }
}

fn cmd_special_poly(ctx: &Ctx, beta: u64, j: u64) -> Res<Outcome> {
    let f = ctx.f();
    let z = special_poly(f, beta, j, ctx.cap())?;
    let mut table = Table::new(&["beta", "j", "e", "coefficient"]);
    let mut coeffs = Vec::new();
    for (e, c) in z.coeffs.iter().enumerate() {
        let r = c.render(f);
        table.push(vec![beta.to_string(), j.to_string(), e.to_string(), r.clone()]);
        coeffs.push(json!({"e": e, "poly": r}));
    }
    let result = json!({
        "beta": beta,
        "j": j,
        "bound": z.bound,
        "checked_through": z.bound + ffzeta::special::EXTRA_DEGREES,
        "coeffs": coeffs,
    });
    Ok(Outcome::new("special-poly", result, true).with_table(table))
}

fn cmd_trivial_zeros(ctx: &Ctx, beta: u64, lambda_max: u64, all: bool) -> Res<Outcome> {
    let f = ctx.f();
    let q = f.base_order();
    let mut rows = Vec::new();
    let mut table = Table::new(&["beta", "lambda", "admissible", "zero"]);
    let mut pass = true;
    for lambda in 1..=lambda_max {
        let admissible = trivial_zero_admissible(q, beta, lambda);
        let zero = if admissible {
            match trivial_zero_check(f, beta, lambda, ctx.cap()) {
                Ok(_) => true,
                Err(Error::Internal(msg)) => {
                    log::error!("{msg}");
                    pass = false;
                    false
                }
                Err(e) => return Err(e.into()),
            }
        } else if all {
            special_poly(f, beta, lambda, ctx.cap())?.at_x_one(f).is_zero()
        } else {
            continue;
        };
        table.push(vec![beta.to_string(), lambda.to_string(), admissible.to_string(), zero.to_string()]);
        rows.push(json!({"beta": beta, "lambda": lambda, "admissible": admissible, "zero": zero}));
    }
    Ok(Outcome::new("trivial-zeros", json!({"rows": rows}), pass).with_table(table))
}

fn cmd_lseries(ctx: &Ctx, a: &PointArgs, x: Option<&str>) -> Res<Outcome> {
    let f = ctx.f();
    let t = TValue::parse(&a.t, f)?;
    let x = match x {
        Some(s) => parse_laurent(s, f)?,
        None => LaurentSeries::theta_pow(a.y),
    };
    let y = y_value(ctx.engine.p(), a);
    let job = LSeriesJob::new(a.beta, t, SPoint::new(x.clone(), y.clone())?, ctx.prec);
    let conv = convergence_check(&job);
    if !conv.converges {
        return Err(Error::Divergent { margin: conv.margin }.into());
    }
    let v = ctx.engine.lseries_eval(&job)?;
    let result = json!({
        "beta": a.beta,
        "t": job.t.render(f),
        "x": x.render(f),
        "y": y.descriptor(),
        "margin": v.margin,
        "degrees_summed": v.e_star,
        "value": series_json(&v.value, f),
    });
    Ok(Outcome::new("lseries", result, true))
}

struct CoeffRun {
    t: TValue,
    y: PadicInt,
    alpha: LaurentSeries,
    coeffs: Vec<LaurentSeries>,
}

fn run_coeffs(ctx: &Ctx, a: &PointArgs, alpha: Option<&str>, jmax: usize) -> Res<CoeffRun> {
    let f = ctx.f();
    let t = TValue::parse(&a.t, f)?;
    let alpha = match alpha {
        Some(s) => parse_laurent(s, f)?,
        None => LaurentSeries::theta_pow(t.delta()),
    };
    let y = y_value(ctx.engine.p(), a);
    let coeffs = ctx.engine.continuation_coeffs(a.beta, &y, &t, Some(&alpha), jmax, ctx.prec)?;
    Ok(CoeffRun { t, y, alpha, coeffs })
}

fn cmd_coeffs(ctx: &Ctx, a: &PointArgs, alpha: Option<&str>, jmax: usize) -> Res<Outcome> {
    let f = ctx.f();
    let q = f.base_order();
    let run = run_coeffs(ctx, a, alpha, jmax)?;
    let mut rows = Vec::new();
    let mut table = Table::new(&["j", "val", "prec", "floor", "coefficient"]);
    let mut pass = true;
    for (j, c) in run.coeffs.iter().enumerate() {
        let v = ffzeta::lseries::coefficient_valuation(j, c);
        let floor = continuation_floor(q, j);
        let ok = v.at_least(floor.min(c.abs_prec()));
        pass &= ok;
        table.push(vec![
            j.to_string(),
            valuation_text(&v),
            c.abs_prec().min(i64::MAX / 8).to_string(),
            floor.to_string(),
            c.render(f),
        ]);
        rows.push(json!({
            "j": j,
            "val": valuation_json(&v),
            "prec": prec_json(c),
            "floor": floor,
            "floor_ok": ok,
            "coeffs": series_json(c, f),
        }));
    }
    let result = json!({
        "q": q,
        "beta": a.beta,
        "t": run.t.render(f),
        "y": run.y.descriptor(),
        "alpha": run.alpha.render(f),
        "rows": rows,
    });
    Ok(Outcome::new("coeffs", result, pass).with_table(table))
}

fn cmd_newton(ctx: &Ctx, a: &PointArgs, alpha: Option<&str>, jmax: usize) -> Res<Outcome> {
    let f = ctx.f();
    let run = run_coeffs(ctx, a, alpha, jmax)?;
    let vals: Vec<(usize, Valuation)> = run
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| (j, ffzeta::lseries::coefficient_valuation(j, c)))
        .collect();
    let poly = newton_polygon(&vals)?;
    let mut table = Table::new(&["slope_num", "slope_den", "length"]);
    for s in &poly.segments {
        table.push(vec![s.slope_num.to_string(), s.slope_den.to_string(), s.length.to_string()]);
    }
    let result = json!({
        "beta": a.beta,
        "t": run.t.render(f),
        "y": run.y.descriptor(),
        "alpha": run.alpha.render(f),
        "points": vals.iter().map(|(j, v)| json!({"j": j, "val": valuation_json(v)})).collect::<Vec<_>>(),
        "segments": poly.segments,
        "skipped": poly.skipped,
    });
    Ok(Outcome::new("newton", result, true).with_table(table))
}

fn cmd_omega(ctx: &Ctx, t: &str) -> Res<Outcome> {
    let f = ctx.f();
    let t = TValue::parse(t, f)?;
    let v = pi_omega(&t, ctx.prec, f)?;
    let result = json!({"t": t.render(f), "value": series_json(&v, f)});
    Ok(Outcome::new("omega", result, true))
}

fn cmd_bj_ratio(ctx: &Ctx, t: &str, j: u64) -> Res<Outcome> {
    let f = ctx.f();
    let t = TValue::parse(t, f)?;
    let v = bj_ratio(&ctx.engine, &t, j, ctx.prec)?;
    let result = json!({"t": t.render(f), "j": j, "value": series_json(&v, f)});
    Ok(Outcome::new("bj-ratio", result, true))
}

fn cmd_charsum(ctx: &Ctx, a: &CharsumArgs) -> Res<Outcome> {
    if !ctx.seed_given {
        return Err(CliError::usage("the character-sum suites need an explicit --seed"));
    }
    let rep = run_selftest(ctx.seed, a.vanishing, a.valued, ctx.cap())?;
    let pass = rep.pass;
    let result = serde_json::to_value(&rep).expect("report serializes");
    Ok(Outcome::new("charsum-selftest", result, pass))
}

/// The Pellarin grid: 0, the elements of F_q, θ^-1 and 1+θ^-1.
pub fn pellarin_grid(f: &Field) -> Vec<TValue> {
    let mut ts: Vec<TValue> = vec![TValue::Scalar(Fe::ZERO)];
    for i in 1..f.base_order() {
        ts.push(TValue::Scalar(Fe(i)));
    }
    let inv = LaurentSeries::theta_pow(-1);
    ts.push(TValue::Series(inv.clone()));
    ts.push(TValue::Series(LaurentSeries::one().add(&inv, f)));
    ts
}

fn cmd_verify_pellarin(ctx: &Ctx) -> Res<Outcome> {
    let f = ctx.f();
    let q = f.base_order() as i64;
    let n = ctx.prec;
    let mut rows = Vec::new();
    let mut table = Table::new(&["t", "prec", "agree_to", "pass"]);
    let mut pass = true;
    for t in pellarin_grid(f) {
        let r = pellarin_identity_check(&ctx.engine, &t, n)?;
        pass &= r.pass;
        table.push(vec![r.t.clone(), n.to_string(), r.agree_to.to_string(), r.pass.to_string()]);
        rows.push(serde_json::to_value(&r).expect("report serializes"));
    }
    let at_theta = pi_omega(&TValue::Series(LaurentSeries::theta_pow(1)), n, f)?.neg(f);
    let exact_one = at_theta.is_exact() && at_theta == LaurentSeries::one();
    pass &= exact_one;
    let mut limit = Vec::new();
    let mut prev = i64::MIN;
    for m in 1..=6 {
        let gap = theta_limit_gap(m, n, f)?;
        // the gap must grow with M until the precision is reached
        let ok = gap >= prev && gap >= (m - 1 + q).min(n);
        pass &= ok;
        prev = gap;
        limit.push(json!({"m": m, "agree_to": gap, "ok": ok}));
    }
    let result = json!({
        "prec": n,
        "grid": rows,
        "at_theta": series_json(&at_theta, f),
        "at_theta_exact_one": exact_one,
        "theta_limit": limit,
    });
    Ok(Outcome::new("verify-pellarin", result, pass).with_table(table))
}

fn cmd_verify_carlitz(ctx: &Ctx, j: Option<u64>, bound: Option<usize>) -> Res<Outcome> {
    let f = ctx.f();
    let q = f.base_order() as u64;
    let j = j.unwrap_or(q - 1);
    if j == 0 || !j.is_multiple_of(q - 1) {
        return Err(CliError::usage(format!("j must be a positive multiple of {}", q - 1)));
    }
    let k = (j / (q - 1)) as usize;
    let d = bound.unwrap_or(k * q as usize + 1);
    let n = ctx.prec;
    let s = carlitz_ratio(&ctx.engine, j, n)?;
    let rec = rational_reconstruct(&s, d, d, f)?;
    let (result, pass) = match rec {
        Some(r) => {
            let long = carlitz_ratio(&ctx.engine, j, 2 * n)?;
            let back = reexpand(&r.num, &r.den, 2 * n, f)?;
            let agree = back.agreement(&long, f).min(2 * n);
            let pass = agree >= 2 * n;
            (
                json!({
                    "j": j,
                    "bound": d,
                    "prec": n,
                    "num": r.num.render(f, "θ"),
                    "den": r.den.render(f, "θ"),
                    "reexpansion_prec": 2 * n,
                    "reexpansion_agree_to": agree,
                }),
                pass,
            )
        }
        None => (json!({"j": j, "bound": d, "prec": n, "num": null, "den": null}), false),
    };
    Ok(Outcome::new("verify-carlitz", result, pass))
}

/// Deterministic matched points `(β, j, t, x0)` for the bridge check, with
/// x0 chosen so that `x0θ^{-j}` lies in the half-plane of convergence.
pub fn bridge_points(f: &Field, count: usize) -> Vec<(u64, u64, TValue, LaurentSeries)> {
    let inv = LaurentSeries::theta_pow(-1);
    let ts = [
        TValue::Scalar(Fe::ZERO),
        TValue::Scalar(Fe::ONE),
        TValue::Series(inv.clone()),
        TValue::Series(LaurentSeries::one().add(&inv, f)),
        TValue::Series(LaurentSeries::theta_pow(1)),
    ];
    (0..count)
        .map(|i| {
            let beta = (i % 3) as u64;
            let j = ((i / 3) % 4) as u64;
            let t = ts[i % ts.len()].clone();
            let k = t.size_exponent() as u64;
            let x0 = LaurentSeries::theta_pow((j + beta * k + 1 + (i % 2) as u64) as i64);
            (beta, j, t, x0)
        })
        .collect()
}

fn cmd_verify_bridge(ctx: &Ctx, count: usize) -> Res<Outcome> {
    let f = ctx.f();
    let n = ctx.prec;
    let mut rows = Vec::new();
    let mut table = Table::new(&["beta", "j", "t", "x0", "agree_to"]);
    let mut pass = true;
    for (beta, j, t, x0) in bridge_points(f, count) {
        let z = special_poly(f, beta, j, ctx.cap())?;
        let exact = z.eval(&x0, &t, n, f)?;
        let x = x0.mul(&LaurentSeries::theta_pow(-(j as i64)), f);
        let job = LSeriesJob::new(beta, t.clone(), SPoint::new(x, PadicInt::exact(f.characteristic(), -(j as i64)))?, n);
        let l = ctx.engine.lseries_eval(&job)?.value;
        let agree = exact.agreement(&l, f).min(n);
        pass &= agree >= n;
        table.push(vec![beta.to_string(), j.to_string(), t.render(f), x0.render(f), agree.to_string()]);
        rows.push(json!({
            "beta": beta,
            "j": j,
            "t": t.render(f),
            "x0": x0.render(f),
            "special": exact.render(f),
            "agree_to": agree,
        }));
    }
    Ok(Outcome::new("verify-bridge", json!({"prec": n, "points": rows}), pass).with_table(table))
}

fn vadic_primes(f: &Field, a: &VadicArgs, cap: u64) -> Res<Vec<ThetaPoly>> {
    match &a.prime {
        Some(s) => Ok(vec![parse_poly(s, f)?]),
        None => {
            let all = prime_enumerate(f, 2, cap)?;
            let deg = |d: usize| all.iter().filter(move |p| p.degree() == Some(d)).cloned();
            Ok(deg(1).take(2).chain(deg(2).take(1)).collect())
        }
    }
}

fn cmd_vadic(ctx: &Ctx, a: &VadicArgs, kind: &'static str) -> Res<Outcome> {
    let f = ctx.f();
    let m_list: Vec<u32> = a
        .m_list
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| CliError::usage(format!("bad M list \"{}\"", a.m_list))))
        .collect::<Res<_>>()?;
    let t_rep = parse_poly(&a.t, f)?;
    let mut reports: Vec<ContinuityReport> = Vec::new();
    let mut full_at_zero = true;
    for prime in vadic_primes(f, a, ctx.cap())? {
        let vc = VadicContext::new(f, prime, a.depth, t_rep.clone(), ctx.cap())?;
        let rep = vadic_continuity_check(&vc, a.e, a.beta, a.j, &m_list, a.k)?;
        // k = 0 compares a sum with itself
        let zero = vadic_continuity_check(&vc, a.e, a.beta, a.j, &[0], 0)?;
        full_at_zero &= zero.rows.iter().all(|r| r.exponent == a.depth);
        reports.push(rep);
    }
    let mut table = Table::new(&["prime", "depth", "e", "beta", "j", "m", "j_prime", "exponent"]);
    for r in &reports {
        for row in &r.rows {
            table.push(vec![
                r.prime.clone(),
                r.n.to_string(),
                r.e.to_string(),
                r.beta.to_string(),
                r.j.to_string(),
                row.m.to_string(),
                row.j_prime.to_string(),
                row.exponent.to_string(),
            ]);
        }
    }
    let p = f.characteristic() as u64;
    let bound_ok = reports.iter().flat_map(|r| &r.rows).all(|row| {
        row.exponent as u64 >= (a.depth as u64).min(p.saturating_pow(row.m))
    });
    let nondecreasing = reports.iter().all(|r| r.nondecreasing);
    let pass = full_at_zero && bound_ok && nondecreasing;
    let result = json!({
        "t": t_rep.render(f, "θ"),
        "k": a.k,
        "full_agreement_at_k0": full_at_zero,
        "p_power_bound": bound_ok,
        "nondecreasing": nondecreasing,
        "reports": reports,
    });
    Ok(Outcome::new(kind, result, pass).with_table(table))
}
