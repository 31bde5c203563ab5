//! Exact checks of the counting inequality that bounds bad simple pairs,
//! its monotonicity in `y`, and the `C(t,x)` identities used in its proof.
//!
//! `F(x,y)` is computed twice: once by a loop driven by the summation
//! bounds, once by filtering the full `(a,b)` rectangle.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::LemmaError;

/// `C(p,q)` if `p ≥ q ≥ 0`, else 0.
pub fn binom_plus(p: i64, q: i64) -> BigUint {
    if q < 0 || p < q {
        return BigUint::zero();
    }
    let q = q.min(p - q);
    let mut acc = BigUint::one();
    for i in 0..q {
        acc *= BigUint::from((p - i) as u64);
        acc /= BigUint::from((i + 1) as u64);
    }
    acc
}

/// `(m, ℓ, τ, x, y)` with `m ≥ 1`; `ℓ, τ` even; `0 ≤ ℓ ≤ 4m`;
/// `0 ≤ τ ≤ 2m − 2`; `ℓ + τ ≥ 2m + 2`; `x + y ≤ ℓ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ParamTuple {
    pub m: usize,
    #[serde(rename = "l")]
    pub ell: usize,
    pub tau: usize,
    pub x: usize,
    pub y: usize,
}

fn check_base(m: usize, ell: usize, tau: usize) -> Result<(), LemmaError> {
    let bad = |why: String| Err(LemmaError::InvalidParams(why));
    if m == 0 {
        return bad("m must be at least 1".into());
    }
    if !ell.is_multiple_of(2) || !tau.is_multiple_of(2) {
        return bad(format!("ℓ = {ell} and τ = {tau} must both be even"));
    }
    if ell > 4 * m {
        return bad(format!("ℓ = {ell} exceeds 4m = {}", 4 * m));
    }
    if tau + 2 > 2 * m {
        return bad(format!("τ = {tau} exceeds 2m − 2 = {}", 2 * m as i64 - 2));
    }
    if ell + tau < 2 * m + 2 {
        return bad(format!("ℓ + τ = {} is below 2m + 2 = {}", ell + tau, 2 * m + 2));
    }
    Ok(())
}

impl ParamTuple {
    pub fn new(m: usize, ell: usize, tau: usize, x: usize, y: usize) -> Result<Self, LemmaError> {
        check_base(m, ell, tau)?;
        if x + y > ell {
            return Err(LemmaError::InvalidParams(format!("x + y = {} exceeds ℓ = {ell}", x + y)));
        }
        Ok(ParamTuple { m, ell, tau, x, y })
    }

    /// `2m − τ`, the size of the pairs being counted.
    pub fn size(&self) -> usize {
        2 * self.m - self.tau
    }

    /// `k` with `2k = 2m − τ`.
    pub fn k(&self) -> usize {
        self.size() / 2
    }

    pub fn z(&self) -> usize {
        self.ell - self.x - self.y
    }

    /// `max{2x + y + 2m + 1 − ℓ − τ, 2m + 1 − τ}`
    pub fn threshold(&self) -> i64 {
        let (x, y, m, ell, tau) = (self.x as i64, self.y as i64, self.m as i64, self.ell as i64, self.tau as i64);
        (2 * x + y + 2 * m + 1 - ell - tau).max(2 * m + 1 - tau)
    }

    fn term(&self, a: i64, b: i64) -> BigUint {
        binom_plus(self.x as i64, a) * binom_plus(self.y as i64, b) * binom_plus(self.z() as i64, self.size() as i64 - a - b)
    }
}

/// `F(x,y)` by iterating `a` from the smallest value the threshold allows
/// and `b` over `[threshold − 2a, min(y, size − a)]`.
pub fn f_value(p: &ParamTuple) -> BigUint {
    let size = p.size() as i64;
    let thr = p.threshold();
    let mut total = BigUint::zero();
    // b <= size − a forces 2a + b <= a + size
    let a_min = (thr - size).max(0);
    for a in a_min..=(p.x as i64).min(size) {
        let b_lo = (thr - 2 * a).max(0);
        let b_hi = (p.y as i64).min(size - a);
        for b in b_lo..=b_hi {
            total += p.term(a, b);
        }
    }
    total
}

/// `F(x,y)` by scanning every `(a,b)` in `[0,ℓ]²` and applying each
/// summation constraint as a filter.
pub fn f_by_rectangle(p: &ParamTuple) -> BigUint {
    let (x, y, size, thr) = (p.x as i64, p.y as i64, p.size() as i64, p.threshold());
    let mut total = BigUint::zero();
    for a in 0..=p.ell as i64 {
        for b in 0..=p.ell as i64 {
            if a <= x && b <= y && a + b <= size && 2 * a + b >= thr {
                total += p.term(a, b);
            }
        }
    }
    total
}

fn as_json_number<S: Serializer, T: ToString>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    let text = v.to_string();
    match text.parse::<serde_json::Number>() {
        Ok(n) if n.is_i64() || n.is_u64() => n.serialize(s),
        _ => s.serialize_str(&text),
    }
}

/// `F ≤ ½·C(ℓ, 2m−τ) − 1`, compared as `2F ≤ C − 2`. `bound` is the
/// largest integer value `F` may take, `⌊(C − 2)/2⌋`, and
/// `margin = bound − F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma9Check {
    pub params: ParamTuple,
    #[serde(rename = "F", serialize_with = "as_json_number")]
    pub f: BigUint,
    #[serde(serialize_with = "as_json_number")]
    pub bound: BigInt,
    pub ok: bool,
    #[serde(serialize_with = "as_json_number")]
    pub margin: BigInt,
}

pub fn check_lemma9(p: &ParamTuple) -> Lemma9Check {
    let f = f_value(p);
    let c = BigInt::from(binom_plus(p.ell as i64, p.size() as i64));
    let two = BigInt::from(2);
    let doubled = &two * BigInt::from(f.clone());
    let ok = doubled <= &c - &two;
    // valid tuples have ℓ ≥ 2m − τ + 2 ≥ 4, so C ≥ 6 and truncation is floor
    let bound = (&c - &two) / &two;
    let margin = &bound - BigInt::from(f.clone());
    Lemma9Check { params: *p, f, bound, ok, margin }
}

/// `y` values at which `F(x₀, ·)` moves the wrong way.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MonotonicityCheck {
    pub m: usize,
    #[serde(rename = "l")]
    pub ell: usize,
    pub tau: usize,
    pub x0: usize,
    pub probed: usize,
    pub violations: Vec<usize>,
    pub ok: bool,
}

/// For every `y` with `x₀ + y + 1 ≤ ℓ`: `F(x₀,y+1) ≤ F(x₀,y)` when
/// `y ≥ ℓ − 2x₀`, and `F(x₀,y) ≤ F(x₀,y+1)` otherwise.
pub fn check_monotonicity(m: usize, ell: usize, tau: usize, x0: usize) -> Result<MonotonicityCheck, LemmaError> {
    check_base(m, ell, tau)?;
    if x0 > ell {
        return Err(LemmaError::InvalidParams(format!("x₀ = {x0} exceeds ℓ = {ell}")));
    }
    let values: Vec<BigUint> =
        (0..=ell - x0).map(|y| f_value(&ParamTuple { m, ell, tau, x: x0, y })).collect();
    let mut violations = Vec::new();
    for y in 0..ell - x0 {
        let (here, next) = (&values[y], &values[y + 1]);
        let fine = if y as i64 >= ell as i64 - 2 * x0 as i64 { next <= here } else { here <= next };
        if !fine {
            violations.push(y);
        }
    }
    Ok(MonotonicityCheck { m, ell, tau, x0, probed: ell - x0, ok: violations.is_empty(), violations })
}

/// `C(t,x) = Σ_{2a ≤ t} C₊(x,a)·C₊(ℓ−2x, t−2a)·C₊(x, 2k+a−t)` with
/// `2k = 2m − τ`; requires `2x ≤ ℓ`.
pub fn ctx(ell: usize, k: usize, x: usize, t: usize) -> BigUint {
    let (ell, k, x, t) = (ell as i64, k as i64, x as i64, t as i64);
    (0..=t / 2)
        .map(|a| binom_plus(x, a) * binom_plus(ell - 2 * x, t - 2 * a) * binom_plus(x, 2 * k + a - t))
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CtxCheck {
    pub m: usize,
    #[serde(rename = "l")]
    pub ell: usize,
    pub tau: usize,
    pub x: usize,
    /// `Σ_{t=0}^{4k} C(t,x) = C(ℓ,2k)`
    pub sum_ok: bool,
    /// `C(t,x) = C(4k−t,x)` for `0 ≤ t ≤ 2k`
    pub symmetry_ok: bool,
    /// `C(2k,x) ≥ 2` (vacuous for `x = 0`)
    pub centre_ok: bool,
    pub ok: bool,
}

pub fn check_ctx_identities(m: usize, ell: usize, tau: usize, x: usize) -> Result<CtxCheck, LemmaError> {
    check_base(m, ell, tau)?;
    if 2 * x >= ell {
        return Err(LemmaError::InvalidParams(format!("identities need x < ℓ/2, got x = {x}, ℓ = {ell}")));
    }
    let k = (2 * m - tau) / 2;
    let values: Vec<BigUint> = (0..=4 * k).map(|t| ctx(ell, k, x, t)).collect();
    let sum_ok = values.iter().sum::<BigUint>() == binom_plus(ell as i64, 2 * k as i64);
    let symmetry_ok = (0..=2 * k).all(|t| values[t] == values[4 * k - t]);
    let centre_ok = x == 0 || values[2 * k] >= BigUint::from(2u32);
    Ok(CtxCheck { m, ell, tau, x, sum_ok, symmetry_ok, centre_ok, ok: sum_ok && symmetry_ok && centre_ok })
}

/// Valid `(m, ℓ, τ)` triples for `m ≤ max_m`, in lexicographic order.
pub fn base_grid(max_m: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        for ell in (0..=4 * m).step_by(2) {
            for tau in (0..=(2 * m).saturating_sub(2)).step_by(2) {
                if check_base(m, ell, tau).is_ok() {
                    out.push((m, ell, tau));
                }
            }
        }
    }
    out
}

/// Every valid tuple with `m ≤ max_m`, in lexicographic order.
pub fn lemma9_grid(max_m: usize) -> Vec<ParamTuple> {
    base_grid(max_m)
        .into_iter()
        .flat_map(|(m, ell, tau)| {
            (0..=ell).flat_map(move |x| (0..=ell - x).map(move |y| ParamTuple { m, ell, tau, x, y }))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Lemma9Summary {
    pub tuples: usize,
    pub violations: usize,
    #[serde(serialize_with = "as_json_number")]
    pub min_margin: BigInt,
    pub argmin: ParamTuple,
}

/// Checks the whole grid in parallel; results keep grid order.
pub fn sweep_lemma9(max_m: usize) -> (Vec<Lemma9Check>, Lemma9Summary) {
    let checks: Vec<Lemma9Check> = lemma9_grid(max_m).par_iter().map(check_lemma9).collect();
    let summary = summarize_lemma9(&checks);
    (checks, summary)
}

/// First tuple (grid order) attaining the minimum margin.
pub fn summarize_lemma9(checks: &[Lemma9Check]) -> Lemma9Summary {
    let worst = checks
        .iter()
        .reduce(|best, c| if c.margin < best.margin { c } else { best })
        .expect("non-empty grid");
    Lemma9Summary {
        tuples: checks.len(),
        violations: checks.iter().filter(|c| !c.ok).count(),
        min_margin: worst.margin.clone(),
        argmin: worst.params,
    }
}

pub fn sweep_monotonicity(max_m: usize) -> Vec<MonotonicityCheck> {
    let jobs: Vec<(usize, usize, usize, usize)> = base_grid(max_m)
        .into_iter()
        .flat_map(|(m, ell, tau)| (0..=ell).map(move |x0| (m, ell, tau, x0)))
        .collect();
    jobs.par_iter()
        .map(|&(m, ell, tau, x0)| check_monotonicity(m, ell, tau, x0).expect("grid parameters are valid"))
        .collect()
}

pub fn sweep_ctx(max_m: usize) -> Vec<CtxCheck> {
    let jobs: Vec<(usize, usize, usize, usize)> = base_grid(max_m)
        .into_iter()
        .flat_map(|(m, ell, tau)| (0..ell.div_ceil(2)).map(move |x| (m, ell, tau, x)))
        .collect();
    jobs.par_iter()
        .map(|&(m, ell, tau, x)| check_ctx_identities(m, ell, tau, x).expect("grid parameters are valid"))
        .collect()
}
