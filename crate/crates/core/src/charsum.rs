//! Finite F_q-linear character sums and their two classical estimates, run as
//! decision procedures.
//!
//! An instance is a d-dimensional F_q-space W with t linear maps `L_h` into a
//! target ring, exponents `i_h` and a shift x. Because the maps are linear, an
//! instance only records `L_h(b_k)` for a basis `b_k` of W and `L_h(x)`;
//! every `L_h(x + w)` is reconstructed from those.
//!
//! * Vanishing: if `Σ i_h < (q-1)d` then `Σ_{w∈W} Π_h L_h(x+w)^{i_h} = 0`.
//! * Valuation floor (x = 0): if every `v(L_h(w)) > 0`, then
//!   `v(Σ_{w∈W} Π_h L_h(w)^{i_h}) ≥ (q-1)Q` with `Q = Σ_{j≥1} dim W_j` and
//!   `W_j = {w : v(L_h(w)) ≥ j for all h}`.

use rand::Rng;
use rand::SeedableRng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rings::LaurentSeries;
use crate::scalars::{Fe, Field, FieldSpec};

/// Additive F_q-space operations.
pub trait FqSpace {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: Fe, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

/// A commutative F_q-algebra with an optional additive valuation.
pub trait TargetRing: FqSpace {
    fn one(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` stands for `+∞` (the zero element).
    fn valuation(&self, a: &Self::Elem) -> Option<i64>;
    fn render(&self, a: &Self::Elem) -> String;

    fn pow(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }
}

/// A finite field E ⊇ F_q with the trivial valuation.
#[derive(Clone, Debug)]
pub struct FieldTarget {
    pub field: Field,
}

impl FqSpace for FieldTarget {
    type Elem = Fe;
    fn zero(&self) -> Fe {
        Fe::ZERO
    }
    fn add(&self, a: &Fe, b: &Fe) -> Fe {
        self.field.add(*a, *b)
    }
    fn scale(&self, c: Fe, a: &Fe) -> Fe {
        self.field.mul(c, *a)
    }
    fn is_zero(&self, a: &Fe) -> bool {
        a.is_zero()
    }
}

impl TargetRing for FieldTarget {
    fn one(&self) -> Fe {
        Fe::ONE
    }
    fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        self.field.mul(*a, *b)
    }
    fn valuation(&self, a: &Fe) -> Option<i64> {
        if a.is_zero() {
            None
        } else {
            Some(0)
        }
    }
    fn render(&self, a: &Fe) -> String {
        self.field.render(*a)
    }
    fn pow(&self, a: &Fe, e: u64) -> Fe {
        self.field.pow(*a, e)
    }
}

/// E((1/θ)) with v_∞. Elements should be exact for the checks to be exact.
#[derive(Clone, Debug)]
pub struct SeriesTarget {
    pub field: Field,
}

impl FqSpace for SeriesTarget {
    type Elem = LaurentSeries;
    fn zero(&self) -> LaurentSeries {
        LaurentSeries::zero()
    }
    fn add(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a.add(b, &self.field)
    }
    fn scale(&self, c: Fe, a: &LaurentSeries) -> LaurentSeries {
        a.scale(c, &self.field)
    }
    fn is_zero(&self, a: &LaurentSeries) -> bool {
        a.vanishes()
    }
}

impl TargetRing for SeriesTarget {
    fn one(&self) -> LaurentSeries {
        LaurentSeries::one()
    }
    fn mul(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a.mul(b, &self.field)
    }
    fn valuation(&self, a: &LaurentSeries) -> Option<i64> {
        a.valuation()
    }
    fn render(&self, a: &LaurentSeries) -> String {
        a.render(&self.field)
    }
    fn pow(&self, a: &LaurentSeries, e: u64) -> LaurentSeries {
        a.pow_int(e as i64, crate::rings::INF_PREC, &self.field).expect("nonnegative power")
    }
}

/// Coordinate space F_q^r, used as a source space for explicit matrices.
#[derive(Clone, Debug)]
pub struct CoordSpace {
    pub field: Field,
    pub dim: usize,
}

impl FqSpace for CoordSpace {
    type Elem = Vec<Fe>;
    fn zero(&self) -> Vec<Fe> {
        vec![Fe::ZERO; self.dim]
    }
    fn add(&self, a: &Vec<Fe>, b: &Vec<Fe>) -> Vec<Fe> {
        a.iter().zip(b).map(|(&x, &y)| self.field.add(x, y)).collect()
    }
    fn scale(&self, c: Fe, a: &Vec<Fe>) -> Vec<Fe> {
        a.iter().map(|&x| self.field.mul(c, x)).collect()
    }
    fn is_zero(&self, a: &Vec<Fe>) -> bool {
        a.iter().all(|x| x.is_zero())
    }
}

/// A linear sum instance: basis images `images[h][k] = L_h(b_k)`, shift
/// images `shift[h] = L_h(x)` and exponents `i_h`.
#[derive(Clone, Debug)]
pub struct LinearSumInstance<T: TargetRing> {
    pub q: u32,
    pub dim: usize,
    pub images: Vec<Vec<T::Elem>>,
    pub shift: Vec<T::Elem>,
    pub exponents: Vec<u64>,
}

/// Outcome of [`vanishing_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    VanishesByLemma,
    ComputedZero,
    ComputedNonzero,
}

/// `(q-1)·Q`, infinite when some nonzero w is killed by every map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Floor {
    Finite { q_sum: u64, bound: i64 },
    Infinite,
}

impl<T: TargetRing> LinearSumInstance<T> {
    /// Builds an instance from explicit maps on a source space, checking
    /// that the basis is independent and spot-checking linearity on random
    /// pairs.
    pub fn from_maps<S: FqSpace>(
        source: &S,
        target: &T,
        q: u32,
        basis: &[S::Elem],
        maps: &[&dyn Fn(&S::Elem) -> T::Elem],
        shift: &S::Elem,
        exponents: Vec<u64>,
        cap: u64,
    ) -> Result<LinearSumInstance<T>>
    where
        T::Elem: PartialEq,
    {
        if maps.len() != exponents.len() {
            return Err(Error::InvalidSpec("one exponent per map required".into()));
        }
        let d = basis.len();
        let count = (q as u128).pow(d as u32);
        if count > cap as u128 {
            return Err(Error::CapExceeded { requested: count, cap });
        }
        // independence: no nontrivial combination vanishes
        for idx in 1..count as u64 {
            let coeffs = digits(idx, q, d);
            let w = combine(source, basis, &coeffs);
            if source.is_zero(&w) {
                return Err(Error::InvalidSpec("basis is F_q-linearly dependent".into()));
            }
        }
        let images: Vec<Vec<T::Elem>> = maps.iter().map(|m| basis.iter().map(m).collect()).collect();
        let shift_images: Vec<T::Elem> = maps.iter().map(|m| m(shift)).collect();
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
        for (h, m) in maps.iter().enumerate() {
            for _ in 0..8 {
                let a = combine(source, basis, &random_coeffs(&mut rng, q, d));
                let b = combine(source, basis, &random_coeffs(&mut rng, q, d));
                let c = Fe(rng.gen_range(0..q));
                let lhs = m(&source.add(&a, &b));
                let rhs = target.add(&m(&a), &m(&b));
                if lhs != rhs || m(&source.scale(c, &a)) != target.scale(c, &m(&a)) {
                    return Err(Error::Hypothesis(format!("map {h} is not F_q-linear")));
                }
            }
        }
        Ok(LinearSumInstance { q, dim: d, images, shift: shift_images, exponents })
    }

    pub fn size(&self) -> u128 {
        (self.q as u128).pow(self.dim as u32)
    }

    fn guard(&self, cap: u64) -> Result<()> {
        if self.size() > cap as u128 {
            return Err(Error::CapExceeded { requested: self.size(), cap });
        }
        Ok(())
    }

    /// `L_h(x + w)` where `w = Σ coeffs[k] b_k`.
    fn map_at(&self, target: &T, h: usize, coeffs: &[Fe], with_shift: bool) -> T::Elem {
        let mut acc = if with_shift { self.shift[h].clone() } else { target.zero() };
        for (k, &c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = target.add(&acc, &target.scale(c, &self.images[h][k]));
            }
        }
        acc
    }

    pub fn exponent_sum(&self) -> u64 {
        self.exponents.iter().sum()
    }

    /// Whether `Σ i_h < (q-1)d`.
    pub fn meets_vanishing_hypothesis(&self) -> bool {
        self.exponent_sum() < (self.q as u64 - 1) * self.dim as u64
    }
}

fn digits(mut idx: u64, q: u32, d: usize) -> Vec<Fe> {
    (0..d)
        .map(|_| {
            let c = Fe((idx % q as u64) as u32);
            idx /= q as u64;
            c
        })
        .collect()
}

fn combine<S: FqSpace>(space: &S, basis: &[S::Elem], coeffs: &[Fe]) -> S::Elem {
    basis
        .iter()
        .zip(coeffs)
        .fold(space.zero(), |acc, (b, &c)| space.add(&acc, &space.scale(c, b)))
}

fn random_coeffs(rng: &mut impl Rng, q: u32, d: usize) -> Vec<Fe> {
    (0..d).map(|_| Fe(rng.gen_range(0..q))).collect()
}

fn sum_over_w<T: TargetRing>(inst: &LinearSumInstance<T>, target: &T, with_shift: bool) -> T::Elem {
    let mut total = target.zero();
    for idx in 0..inst.size() as u64 {
        let coeffs = digits(idx, inst.q, inst.dim);
        let mut term = target.one();
        for (h, &e) in inst.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let v = inst.map_at(target, h, &coeffs, with_shift);
            term = target.mul(&term, &target.pow(&v, e));
        }
        total = target.add(&total, &term);
    }
    total
}

/// The literal sum `Σ_{w∈W} Π_h L_h(x+w)^{i_h}`.
pub fn monomial_sum<T: TargetRing>(inst: &LinearSumInstance<T>, target: &T, cap: u64) -> Result<T::Elem> {
    inst.guard(cap)?;
    Ok(sum_over_w(inst, target, true))
}

/// Runs the vanishing lemma on an instance. A nonzero sum under the lemma's
/// hypothesis means the arithmetic is broken, and is reported as such.
pub fn vanishing_check<T: TargetRing>(inst: &LinearSumInstance<T>, target: &T, cap: u64) -> Result<Verdict> {
    let sum = monomial_sum(inst, target, cap)?;
    let zero = target.is_zero(&sum);
    if inst.meets_vanishing_hypothesis() {
        if !zero {
            return Err(Error::Internal(format!(
                "sum of degree {} < {} is {}",
                inst.exponent_sum(),
                (inst.q - 1) as usize * inst.dim,
                target.render(&sum)
            )));
        }
        Ok(Verdict::VanishesByLemma)
    } else if zero {
        Ok(Verdict::ComputedZero)
    } else {
        Ok(Verdict::ComputedNonzero)
    }
}

/// `(q-1)·Σ_j dim W_j` for an unshifted instance whose maps take only
/// positive valuations on W.
pub fn valuation_floor<T: TargetRing>(inst: &LinearSumInstance<T>, target: &T, cap: u64) -> Result<Floor> {
    inst.guard(cap)?;
    if inst.shift.iter().any(|s| !target.is_zero(s)) {
        return Err(Error::Hypothesis("valuation floor requires shift x = 0".into()));
    }
    // min_h v(L_h(w)) for every w; None = +∞
    let mut min_vals: Vec<Option<i64>> = Vec::with_capacity(inst.size() as usize);
    for idx in 0..inst.size() as u64 {
        let coeffs = digits(idx, inst.q, inst.dim);
        let mut mv: Option<i64> = None;
        for h in 0..inst.images.len() {
            let v = target.valuation(&inst.map_at(target, h, &coeffs, false));
            if let Some(v) = v {
                if v <= 0 {
                    return Err(Error::NonPositiveValuation { map: h, index: idx as usize });
                }
                mv = Some(mv.map_or(v, |m: i64| m.min(v)));
            }
        }
        min_vals.push(mv);
    }
    if min_vals.iter().skip(1).any(|v| v.is_none()) {
        return Ok(Floor::Infinite);
    }
    let top = min_vals.iter().filter_map(|v| *v).max().unwrap_or(0);
    let mut q_sum = 0u64;
    for j in 1..=top {
        let size = min_vals.iter().filter(|v| v.is_none_or(|m| m >= j)).count() as u64;
        let dim = log_exact(size, inst.q as u64)
            .ok_or_else(|| Error::Internal(format!("|W_{j}| = {size} is not a power of q")))?;
        q_sum += dim;
    }
    Ok(Floor::Finite { q_sum, bound: (inst.q as i64 - 1) * q_sum as i64 })
}

fn log_exact(mut n: u64, base: u64) -> Option<u64> {
    let mut k = 0;
    while n > 1 {
        if !n.is_multiple_of(base) {
            return None;
        }
        n /= base;
        k += 1;
    }
    (n == 1).then_some(k)
}

/// Result of comparing the floor with the actual valuation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FloorCheck {
    pub floor: Floor,
    /// `None` when the sum is zero.
    pub sum_valuation: Option<i64>,
}

/// Computes the floor and the sum, failing if the sum undercuts the floor.
pub fn check_valuation_floor<T: TargetRing>(inst: &LinearSumInstance<T>, target: &T, cap: u64) -> Result<FloorCheck> {
    let floor = valuation_floor(inst, target, cap)?;
    let sum = sum_over_w(inst, target, false);
    let sum_valuation = target.valuation(&sum);
    let ok = match (floor, sum_valuation) {
        (_, None) => true,
        (Floor::Infinite, Some(_)) => false,
        (Floor::Finite { bound, .. }, Some(v)) => v >= bound,
    };
    if !ok {
        return Err(Error::Internal(format!(
            "valuation {:?} below floor {:?}",
            sum_valuation, floor
        )));
    }
    Ok(FloorCheck { floor, sum_valuation })
}

// ---------------------------------------------------------------------------
// Randomized suites

/// Either kind of target, so the suites can mix them.
#[derive(Clone, Debug)]
pub enum AnyInstance {
    Field(FieldTarget, LinearSumInstance<FieldTarget>),
    Series(SeriesTarget, LinearSumInstance<SeriesTarget>),
}

impl AnyInstance {
    pub fn q(&self) -> u32 {
        match self {
            AnyInstance::Field(_, i) => i.q,
            AnyInstance::Series(_, i) => i.q,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyInstance::Field(_, i) => i.dim,
            AnyInstance::Series(_, i) => i.dim,
        }
    }

    pub fn exponents(&self) -> &[u64] {
        match self {
            AnyInstance::Field(_, i) => &i.exponents,
            AnyInstance::Series(_, i) => &i.exponents,
        }
    }

    pub fn vanishing_check(&self, cap: u64) -> Result<Verdict> {
        match self {
            AnyInstance::Field(t, i) => vanishing_check(i, t, cap),
            AnyInstance::Series(t, i) => vanishing_check(i, t, cap),
        }
    }
}

const SUITE_QS: [u32; 3] = [2, 3, 4];

fn random_series(rng: &mut impl Rng, q: u32, min_exp: i64, max_exp: i64) -> LaurentSeries {
    let len = rng.gen_range(1..=(max_exp - min_exp + 1)) as usize;
    let coeffs: Vec<Fe> = (0..len).map(|_| Fe(rng.gen_range(0..q))).collect();
    LaurentSeries::exact(min_exp, coeffs)
}

/// A random instance meeting the vanishing hypothesis: `q ∈ {2,3,4}`,
/// `d ≤ 4`, at most three maps, given by random matrices into `F_{q^r}` or by
/// random θ^{-k}-scaled polynomials into E((1/θ)).
pub fn random_vanishing_instance(rng: &mut impl Rng) -> Result<AnyInstance> {
    let q = SUITE_QS[rng.gen_range(0..SUITE_QS.len())];
    let d = rng.gen_range(1..=4usize);
    let t = rng.gen_range(1..=3usize);
    let budget = (q as u64 - 1) * d as u64; // Σ i_h < budget
    let total = rng.gen_range(0..budget);
    let mut exponents = vec![0u64; t];
    for _ in 0..total {
        exponents[rng.gen_range(0..t)] += 1;
    }
    if rng.gen_bool(0.5) {
        let r = rng.gen_range(1..=3u32);
        let field = Field::new(&FieldSpec::with_extension(q, r)?)?;
        let order = field.order();
        let images = (0..t).map(|_| (0..d).map(|_| Fe(rng.gen_range(0..order))).collect()).collect();
        let shift = (0..t).map(|_| Fe(rng.gen_range(0..order))).collect();
        let target = FieldTarget { field };
        Ok(AnyInstance::Field(target, LinearSumInstance { q, dim: d, images, shift, exponents }))
    } else {
        let field = Field::for_q(q)?;
        let images = (0..t)
            .map(|_| {
                let k = rng.gen_range(-2..=3i64);
                (0..d).map(|_| random_series(rng, q, k, k + 3)).collect()
            })
            .collect();
        let shift = (0..t).map(|_| random_series(rng, q, -1, 3)).collect();
        let target = SeriesTarget { field };
        Ok(AnyInstance::Series(target, LinearSumInstance { q, dim: d, images, shift, exponents }))
    }
}

/// A random unshifted instance into E((1/θ)) whose basis images all have
/// positive valuation, with arbitrary exponents.
pub fn random_valued_instance(rng: &mut impl Rng) -> Result<(SeriesTarget, LinearSumInstance<SeriesTarget>)> {
    let q = SUITE_QS[rng.gen_range(0..SUITE_QS.len())];
    let d_max: usize = if q == 4 { 3 } else { 4 };
    let d = rng.gen_range(1..=d_max);
    let t = rng.gen_range(1..=3usize);
    let exponents = (0..t).map(|_| rng.gen_range(0..=4u64)).collect();
    let field = Field::for_q(q)?;
    let images = (0..t)
        .map(|_| {
            (0..d)
                .map(|_| {
                    let k = rng.gen_range(1..=4i64);
                    random_series(rng, q, k, k + 3)
                })
                .collect()
        })
        .collect();
    let shift = vec![LaurentSeries::zero(); t];
    Ok((SeriesTarget { field }, LinearSumInstance { q, dim: d, images, shift, exponents }))
}

/// Stored instances at `Σ i_h = (q-1)d` whose sums are nonzero, showing the
/// vanishing hypothesis cannot be relaxed.
pub fn sharpness_witnesses() -> Result<Vec<(FieldTarget, LinearSumInstance<FieldTarget>)>> {
    let mut out = Vec::new();
    for (q, e) in [(2u32, 1u64), (3, 2), (4, 3)] {
        let field = Field::for_q(q)?;
        let inst = LinearSumInstance {
            q,
            dim: 1,
            images: vec![vec![Fe::ONE]],
            shift: vec![Fe::ZERO],
            exponents: vec![e],
        };
        out.push((FieldTarget { field }, inst));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub vanishing_instances: usize,
    pub vanishing_failures: usize,
    pub valued_instances: usize,
    pub valued_failures: usize,
    pub valued_nonzero_sums: usize,
    pub sharpness_witnesses: usize,
    pub sharpness_nonzero: usize,
    pub failures: Vec<String>,
    pub pass: bool,
}

/// Runs both randomized suites and the sharpness witnesses from one seed.
pub fn run_selftest(seed: u64, vanishing: usize, valued: usize, cap: u64) -> Result<SuiteReport> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut vanishing_failures = 0;
    for n in 0..vanishing {
        let inst = random_vanishing_instance(&mut rng)?;
        match inst.vanishing_check(cap) {
            Ok(Verdict::VanishesByLemma) => {}
            other => {
                vanishing_failures += 1;
                failures.push(format!("vanishing #{n} (q={}, d={}): {other:?}", inst.q(), inst.dim()));
            }
        }
    }
    let mut valued_failures = 0;
    let mut valued_nonzero_sums = 0;
    for n in 0..valued {
        let (target, inst) = random_valued_instance(&mut rng)?;
        match check_valuation_floor(&inst, &target, cap) {
            Ok(check) => {
                if check.sum_valuation.is_some() {
                    valued_nonzero_sums += 1;
                }
            }
            Err(e) => {
                valued_failures += 1;
                failures.push(format!("valued #{n} (q={}, d={}): {e}", inst.q, inst.dim));
            }
        }
    }
    let witnesses = sharpness_witnesses()?;
    let mut sharpness_nonzero = 0;
    for (target, inst) in &witnesses {
        if vanishing_check(inst, target, cap)? == Verdict::ComputedNonzero {
            sharpness_nonzero += 1;
        }
    }
    let pass = vanishing_failures == 0 && valued_failures == 0 && sharpness_nonzero == witnesses.len();
    Ok(SuiteReport {
        seed,
        vanishing_instances: vanishing,
        vanishing_failures,
        valued_instances: valued,
        valued_failures,
        valued_nonzero_sums,
        sharpness_witnesses: witnesses.len(),
        sharpness_nonzero,
        failures,
        pass,
    })
}
