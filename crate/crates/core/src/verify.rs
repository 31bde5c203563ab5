//! Seeded verification sweeps, one per checked statement. Trial `t` draws
//! from ChaCha stream `t` of the run seed, so trials are independent of
//! scheduling and reports are identical across thread counts.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::colour::{binomial, ColourSet};
use crate::error::ColourerError;
use crate::graph::{realize, FamilySpec, Graph};
use crate::lemma::{f_by_rectangle, sweep_ctx, sweep_lemma9, sweep_monotonicity};
use crate::lists::{adversarial_sweep, validate, ListAssignment};
use crate::oracle::{brute_force_colour, enumerate_bad_sets};
use crate::path::{colour_path, damage, decide_colourable, lower_bound, profile, s_l, PathInstance};
use crate::theta::colour_family;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Lemma4,
    Lemma7,
    Lemma8,
    Lemma11,
    Lemma9,
    Monotonicity,
    Ctx,
    Theorem2,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::Lemma4,
        Check::Lemma7,
        Check::Lemma8,
        Check::Lemma11,
        Check::Lemma9,
        Check::Monotonicity,
        Check::Ctx,
        Check::Theorem2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Lemma4 => "lemma4",
            Check::Lemma7 => "lemma7",
            Check::Lemma8 => "lemma8",
            Check::Lemma11 => "lemma11",
            Check::Lemma9 => "lemma9",
            Check::Monotonicity => "monotonicity",
            Check::Ctx => "ctx",
            Check::Theorem2 => "theorem2",
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            Check::Lemma4 | Check::Lemma7 | Check::Lemma8 => 10_000,
            Check::Lemma11 | Check::Theorem2 => 1_000,
            Check::Lemma9 | Check::Monotonicity | Check::Ctx => 0,
        }
    }

    pub fn default_max_m(self) -> usize {
        match self {
            Check::Lemma9 => 5,
            Check::Monotonicity | Check::Ctx => 4,
            _ => 2,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown check {s:?}"))
    }
}

/// Reproducers kept per report; the count of violations is always exact.
pub const MAX_REPRODUCERS: usize = 20;

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub check: Check,
    pub seed: u64,
    pub trials: usize,
    pub max_m: usize,
    pub instances: usize,
    pub comparisons: usize,
    pub violations: usize,
    pub reproducers: Vec<Value>,
    pub stats: Value,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

/// Per-trial result, merged in trial order.
#[derive(Default)]
struct Tally {
    instances: usize,
    comparisons: usize,
    violations: usize,
    reproducers: Vec<Value>,
}

impl Tally {
    fn violation(&mut self, reproducer: Value) {
        self.violations += 1;
        if self.reproducers.len() < MAX_REPRODUCERS {
            self.reproducers.push(reproducer);
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.instances += other.instances;
        self.comparisons += other.comparisons;
        self.violations += other.violations;
        let room = MAX_REPRODUCERS.saturating_sub(self.reproducers.len());
        self.reproducers.extend(other.reproducers.into_iter().take(room));
        self
    }

    fn report(self, check: Check, seed: u64, trials: usize, max_m: usize, stats: Value) -> VerifyReport {
        VerifyReport {
            check,
            seed,
            trials,
            max_m,
            instances: self.instances,
            comparisons: self.comparisons,
            violations: self.violations,
            reproducers: self.reproducers,
            stats,
        }
    }
}

fn merge_all(parts: Vec<Tally>) -> Tally {
    parts.into_iter().fold(Tally::default(), Tally::merge)
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn random_set<R: Rng>(rng: &mut R, universe: usize, size: usize) -> ColourSet {
    ColourSet::from_ids(sample(rng, universe, size).into_iter().map(|c| c as u32))
}

fn path_json(p: &PathInstance) -> Value {
    json!({"m": p.m, "lists": p.lists})
}

/// All `15³ = 3375` assignments of 4-subsets of `{1..6}` to a 3-vertex path.
pub fn exhaustive_small_paths() -> Vec<PathInstance> {
    let subsets: Vec<ColourSet> = ColourSet::from_ids(1..=6).subsets(4).collect();
    let mut out = Vec::with_capacity(subsets.len().pow(3));
    for &a in &subsets {
        for &b in &subsets {
            for &c in &subsets {
                out.push(PathInstance::new(1, vec![a, b, c]));
            }
        }
    }
    out
}

/// Random path for the colourability criterion: `n ∈ {5, 7}` and
/// `m ∈ 1..=max_m` by trial index, interior widths `4m`, endpoint widths
/// uniform in `[2m, 4m]`, colours from a universe of `4m..=8m` colours.
/// Returns the instance and its universe size.
pub fn criterion_path(seed: u64, trial: usize, max_m: usize) -> (PathInstance, usize, ChaCha8Rng) {
    let mut rng = trial_rng(seed, trial as u64);
    let n = [5, 7][trial % 2];
    let m = 1 + (trial / 2) % max_m;
    let universe = 4 * m + rng.gen_range(0..=4 * m);
    let lists = (0..n)
        .map(|i| {
            let width = if i == 0 || i == n - 1 { rng.gen_range(2 * m..=4 * m) } else { 4 * m };
            random_set(&mut rng, universe, width)
        })
        .collect();
    (PathInstance::new(m, lists), universe, rng)
}

/// Random odd path with every list of width `4m`, `n ∈ {1,3,5,7,9}`.
fn full_width_path<R: Rng>(rng: &mut R, m: usize) -> (PathInstance, usize) {
    let n = 2 * rng.gen_range(0..5) + 1;
    let universe = 4 * m + rng.gen_range(0..=4 * m);
    let lists = (0..n).map(|_| random_set(rng, universe, 4 * m)).collect();
    (PathInstance::new(m, lists), universe)
}

fn lemma4_compare(p: &PathInstance, tally: &mut Tally, colourable: &mut usize, context: Value) {
    tally.instances += 1;
    tally.comparisons += 1;
    let decided = decide_colourable(p).expect("generated paths satisfy the width preconditions");
    let lists = ListAssignment::reduced(p.lists.clone());
    let brute = brute_force_colour(&Graph::path(p.len()), &lists, p.fold()).expect("paths stay within the brute-force cap");
    if decided != brute.is_some() {
        tally.violation(json!({"context": context, "path": path_json(p), "criterion": decided, "bruteForce": brute.is_some()}));
        return;
    }
    if decided {
        *colourable += 1;
        let ok = colour_path(p).ok().is_some_and(|phi| validate(&Graph::path(p.len()), &lists, &phi).unwrap_or(false));
        if !ok {
            tally.violation(json!({"context": context, "path": path_json(p), "colourPath": "invalid or missing"}));
        }
    }
}

/// Criterion `S_L ≥ 2nm` against brute force, exhaustively on 3-vertex
/// paths and on `trials` random paths.
pub fn verify_lemma4(seed: u64, trials: usize, max_m: usize) -> VerifyReport {
    let exhaustive = exhaustive_small_paths();
    let ex: Vec<(Tally, usize)> = exhaustive
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let (mut t, mut c) = (Tally::default(), 0);
            lemma4_compare(p, &mut t, &mut c, json!({"exhaustive": i}));
            (t, c)
        })
        .collect();
    let rnd: Vec<(Tally, usize)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let (p, _, _) = criterion_path(seed, trial, max_m);
            let (mut t, mut c) = (Tally::default(), 0);
            lemma4_compare(&p, &mut t, &mut c, json!({"seed": seed, "trial": trial}));
            (t, c)
        })
        .collect();
    let ex_colourable: usize = ex.iter().map(|x| x.1).sum();
    let rnd_colourable: usize = rnd.iter().map(|x| x.1).sum();
    let tally = merge_all(ex.into_iter().chain(rnd).map(|x| x.0).collect());
    let stats = json!({
        "exhaustive": exhaustive.len(),
        "exhaustiveColourable": ex_colourable,
        "random": trials,
        "randomColourable": rnd_colourable,
        "randomUncolourable": trials - rnd_colourable,
    });
    tally.report(Check::Lemma4, seed, trials, max_m, stats)
}

fn lemma7_compare(p: &PathInstance, s: ColourSet, t: ColourSet, tally: &mut Tally, context: &Value) {
    tally.comparisons += 1;
    let closed = profile(p).damage_closed_form(s, t).expect("odd path");
    let direct = damage(p, s, t);
    if closed != direct {
        tally.violation(json!({"context": context, "path": path_json(p), "S": s, "T": t, "closedForm": closed, "difference": direct}));
    }
}

/// Closed-form damage against `S_L` before and after deletion: every pair
/// of 2-subsets of `{1..6}` on the exhaustive set, and ten random pairs of
/// `2m`-subsets of the universe on each random path.
pub fn verify_lemma7(seed: u64, trials: usize, max_m: usize) -> VerifyReport {
    let pairs: Vec<ColourSet> = ColourSet::from_ids(1..=6).subsets(2).collect();
    let exhaustive = exhaustive_small_paths();
    let ex: Vec<Tally> = exhaustive
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let mut t = Tally { instances: 1, ..Default::default() };
            let context = json!({"exhaustive": i});
            for &s in &pairs {
                for &u in &pairs {
                    lemma7_compare(p, s, u, &mut t, &context);
                }
            }
            t
        })
        .collect();
    let rnd: Vec<Tally> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let (p, universe, mut rng) = criterion_path(seed, trial, max_m);
            let mut t = Tally { instances: 1, ..Default::default() };
            let context = json!({"seed": seed, "trial": trial});
            for _ in 0..10 {
                let s = random_set(&mut rng, universe, 2 * p.m);
                let u = random_set(&mut rng, universe, 2 * p.m);
                lemma7_compare(&p, s, u, &mut t, &context);
            }
            t
        })
        .collect();
    let tally = merge_all(ex.into_iter().chain(rnd).collect());
    let stats = json!({"exhaustive": exhaustive.len(), "pairsPerExhaustiveInstance": pairs.len() * pairs.len(), "random": trials, "pairsPerRandomInstance": 10});
    tally.report(Check::Lemma7, seed, trials, max_m, stats)
}

/// Lower bound on `S_L` for odd full-width paths.
pub fn verify_lemma8(seed: u64, trials: usize, max_m: usize) -> VerifyReport {
    let check = |p: &PathInstance, context: Value| {
        let mut t = Tally { instances: 1, comparisons: 1, ..Default::default() };
        let bound = lower_bound(p).expect("full-width odd path");
        let actual = s_l(&p.lists);
        if actual < bound {
            t.violation(json!({"context": context, "path": path_json(p), "sL": actual, "bound": bound}));
        }
        (t, actual == bound)
    };
    let exhaustive = exhaustive_small_paths();
    let ex: Vec<(Tally, bool)> =
        exhaustive.par_iter().enumerate().map(|(i, p)| check(p, json!({"exhaustive": i}))).collect();
    let rnd: Vec<(Tally, bool)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial as u64);
            let m = 1 + trial % max_m;
            let (p, _) = full_width_path(&mut rng, m);
            check(&p, json!({"seed": seed, "trial": trial}))
        })
        .collect();
    let tight = ex.iter().chain(&rnd).filter(|x| x.1).count();
    let tally = merge_all(ex.into_iter().chain(rnd).map(|x| x.0).collect());
    let stats = json!({"exhaustive": exhaustive.len(), "random": trials, "tight": tight});
    tally.report(Check::Lemma8, seed, trials, max_m, stats)
}

/// Fewer than `½·C(4m,2m)` bad `2m`-subsets of `W`, for `trials` random
/// odd paths per `m`. `W` is the first list, the last list, or a random
/// `4m`-set, in rotation. Bad sets are recounted with the difference-form
/// damage as a second route.
pub fn verify_lemma11(seed: u64, trials: usize, max_m: usize) -> VerifyReport {
    let jobs: Vec<(usize, usize)> = (1..=max_m).flat_map(|m| (0..trials).map(move |t| (m, t))).collect();
    let parts: Vec<(Tally, usize, usize)> = jobs
        .par_iter()
        .map(|&(m, trial)| {
            let mut rng = trial_rng(seed, ((m as u64) << 32) | trial as u64);
            let (p, universe) = full_width_path(&mut rng, m);
            let w = match trial % 3 {
                0 => p.lists[0],
                1 => p.lists[p.len() - 1],
                _ => random_set(&mut rng, universe, 4 * m),
            };
            let mut t = Tally { instances: 1, comparisons: 1, ..Default::default() };
            let report = enumerate_bad_sets(&p, w).expect("odd full-width path");
            let slack = s_l(&p.lists) as i64 - p.demand() as i64;
            let recount = w.subsets(2 * m).filter(|&s| damage(&p, s, s) as i64 > slack).count();
            if !report.within_bound || recount != report.count {
                t.violation(json!({"seed": seed, "m": m, "trial": trial, "path": path_json(&p), "W": w,
                    "count": report.count, "recount": recount, "bound": report.bound}));
            }
            (t, m, report.count)
        })
        .collect();
    let max_count: Vec<Value> = (1..=max_m)
        .map(|m| {
            let worst = parts.iter().filter(|x| x.1 == m).map(|x| x.2).max().unwrap_or(0);
            json!({"m": m, "bound": binomial(4 * m, 2 * m) / 2, "maxBadCount": worst})
        })
        .collect();
    let tally = merge_all(parts.into_iter().map(|x| x.0).collect());
    tally.report(Check::Lemma11, seed, trials, max_m, json!({"perM": max_count}))
}

/// The counting inequality on the full grid `m ≤ max_m`, with both `F`
/// routes compared on every tuple.
pub fn verify_lemma9(seed: u64, max_m: usize) -> VerifyReport {
    let (checks, summary) = sweep_lemma9(max_m);
    let mut tally = Tally { instances: checks.len(), comparisons: 2 * checks.len(), ..Default::default() };
    let mismatches: Vec<bool> = checks.par_iter().map(|c| f_by_rectangle(&c.params) != c.f).collect();
    for (c, mismatch) in checks.iter().zip(mismatches) {
        if !c.ok || mismatch {
            tally.violation(json!({"check": c, "routesDisagree": mismatch}));
        }
    }
    let stats = json!({"summary": summary});
    tally.report(Check::Lemma9, seed, 0, max_m, stats)
}

pub fn verify_monotonicity(seed: u64, max_m: usize) -> VerifyReport {
    let checks = sweep_monotonicity(max_m);
    let mut tally = Tally { instances: checks.len(), ..Default::default() };
    for c in &checks {
        tally.comparisons += c.probed;
        if !c.ok {
            tally.violation(json!(c));
        }
    }
    tally.report(Check::Monotonicity, seed, 0, max_m, json!({"x0Values": checks.len()}))
}

pub fn verify_ctx(seed: u64, max_m: usize) -> VerifyReport {
    let checks = sweep_ctx(max_m);
    let mut tally = Tally { instances: checks.len(), comparisons: 3 * checks.len(), ..Default::default() };
    for c in &checks {
        if !c.ok {
            tally.violation(json!(c));
        }
    }
    tally.report(Check::Ctx, seed, 0, max_m, json!({"xValues": checks.len()}))
}

/// The five end-to-end families.
pub fn theorem2_families() -> Vec<FamilySpec> {
    vec![
        FamilySpec::TwoCyclesShared { p: 4, q: 4 },
        FamilySpec::TwoCyclesJoined { p: 4, q: 6, path_len: 2 },
        FamilySpec::theta(&[2, 4, 4]),
        FamilySpec::theta(&[2, 4, 6]),
        FamilySpec::theta(&[1, 3, 3]),
    ]
}

/// `colour_family` on `trials` adversarial-sweep assignments per family and
/// `m ∈ 1..=max_m`; every output is re-validated.
pub fn verify_theorem2(seed: u64, trials: usize, max_m: usize) -> VerifyReport {
    let mut jobs = Vec::new();
    for spec in theorem2_families() {
        let g = realize(&spec).expect("fixed families are valid");
        for m in 1..=max_m {
            for (trial, lists) in adversarial_sweep(&g, 4 * m, seed).take(trials).enumerate() {
                jobs.push((spec.clone(), g.clone(), m, trial, lists));
            }
        }
    }
    let outcomes: Vec<(Tally, &'static str)> = jobs
        .par_iter()
        .map(|(spec, g, m, trial, lists)| {
            let mut t = Tally { instances: 1, comparisons: 1, ..Default::default() };
            let reproducer = || json!({"seed": seed, "trial": trial, "m": m, "graph": spec, "lists": lists.lists()});
            let kind = match colour_family(spec, lists, *m) {
                Ok(phi) if validate(g, lists, &phi).unwrap_or(false) => "ok",
                Ok(_) => {
                    t.violation(json!({"reproducer": reproducer(), "error": "invalid colouring"}));
                    "invalid"
                }
                Err(ColourerError::NotFound { reason, dump }) => {
                    t.violation(json!({"reproducer": reproducer(), "error": reason, "dump": dump}));
                    "notFound"
                }
                Err(e) => {
                    t.violation(json!({"reproducer": reproducer(), "error": e.to_string()}));
                    "error"
                }
            };
            (t, kind)
        })
        .collect();
    let mut per_family = Vec::new();
    let mut idx = 0;
    for spec in theorem2_families() {
        for m in 1..=max_m {
            let count = jobs[idx..].iter().take_while(|j| j.0 == spec && j.2 == m).count();
            let slice = &outcomes[idx..idx + count];
            let of = |k: &str| slice.iter().filter(|x| x.1 == k).count();
            per_family.push(json!({"family": spec, "m": m, "trials": count, "valid": of("ok"),
                "notFound": of("notFound"), "invalid": of("invalid"), "errors": of("error")}));
            idx += count;
        }
    }
    let not_found = outcomes.iter().filter(|x| x.1 == "notFound").count();
    let tally = merge_all(outcomes.into_iter().map(|x| x.0).collect());
    tally.report(Check::Theorem2, seed, trials, max_m, json!({"notFound": not_found, "perFamily": per_family}))
}

/// Runs `check` with explicit or default trial count and `m` cap.
pub fn run_check(check: Check, seed: u64, trials: Option<usize>, max_m: Option<usize>) -> VerifyReport {
    let trials = trials.unwrap_or(check.default_trials());
    let max_m = max_m.unwrap_or(check.default_max_m()).max(1);
    match check {
        Check::Lemma4 => verify_lemma4(seed, trials, max_m),
        Check::Lemma7 => verify_lemma7(seed, trials, max_m),
        Check::Lemma8 => verify_lemma8(seed, trials, max_m),
        Check::Lemma11 => verify_lemma11(seed, trials, max_m),
        Check::Lemma9 => verify_lemma9(seed, max_m),
        Check::Monotonicity => verify_monotonicity(seed, max_m),
        Check::Ctx => verify_ctx(seed, max_m),
        Check::Theorem2 => verify_theorem2(seed, trials, max_m),
    }
}
