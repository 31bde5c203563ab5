//! Brute-force ground truth: `(L,b)`-colouring search on small graphs,
//! exhaustive choosability over canonical list assignments, bad-set
//! enumeration for paths, and a budgeted search for uncolourable assignments.
//!
//! Nothing here calls the path criterion; the colouring search only knows
//! about lists and edges.

use std::collections::HashSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::colour::{binomial, ColourSet};
use crate::error::{ModelError, OracleError, PathError};
use crate::graph::Graph;
use crate::lists::{random_assignment, FoldColouring, ListAssignment};
use crate::path::{profile, PathInstance};

/// Limits for the exhaustive colouring search.
#[derive(Clone, Copy, Debug)]
pub struct BruteForce {
    pub vertex_cap: usize,
    /// Largest `C(|L(v)|, b)` accepted at a single vertex.
    pub candidate_cap: u128,
}

impl Default for BruteForce {
    fn default() -> Self {
        BruteForce { vertex_cap: 12, candidate_cap: 1 << 16 }
    }
}

/// [`BruteForce::colour`] with the default caps.
pub fn brute_force_colour(g: &Graph, lists: &ListAssignment, b: usize) -> Result<Option<FoldColouring>, OracleError> {
    BruteForce::default().colour(g, lists, b)
}

impl BruteForce {
    /// First `(L,b)`-colouring in DFS order (vertices by id, candidate
    /// `b`-subsets of each list in colex order), or `None` if none exists.
    pub fn colour(&self, g: &Graph, lists: &ListAssignment, b: usize) -> Result<Option<FoldColouring>, OracleError> {
        let n = g.vertex_count();
        if n > self.vertex_cap {
            return Err(OracleError::CapExceeded(format!("{n} vertices > cap {}", self.vertex_cap)));
        }
        if lists.len() != n {
            return Err(ModelError::DomainMismatch(format!(
                "list assignment covers {} vertices, graph has {n}",
                lists.len()
            ))
            .into());
        }
        let mut candidates = Vec::with_capacity(n);
        for v in 0..n {
            let count = binomial(lists.width(v), b);
            if count > self.candidate_cap {
                return Err(OracleError::CapExceeded(format!(
                    "C({}, {b}) = {count} candidates at vertex {v}",
                    lists.width(v)
                )));
            }
            if count == 0 {
                return Ok(None);
            }
            candidates.push(lists[v].subsets(b).collect::<Vec<_>>());
        }
        let earlier: Vec<Vec<usize>> =
            (0..n).map(|v| g.neighbours(v).iter().copied().filter(|&w| w < v).collect()).collect();
        // frontier[i]: coloured vertices (< i) that still have an uncoloured neighbour (>= i)
        let frontier: Vec<Vec<usize>> = (0..=n)
            .map(|i| (0..i).filter(|&j| g.neighbours(j).iter().any(|&w| w >= i)).collect())
            .collect();
        let mut dfs = Dfs {
            candidates: &candidates,
            earlier: &earlier,
            frontier: &frontier,
            chosen: Vec::with_capacity(n),
            failed: HashSet::new(),
        };
        Ok(dfs.run(0).then(|| FoldColouring::new(dfs.chosen, b)))
    }
}

struct Dfs<'a> {
    candidates: &'a [Vec<ColourSet>],
    earlier: &'a [Vec<usize>],
    frontier: &'a [Vec<usize>],
    chosen: Vec<ColourSet>,
    failed: HashSet<(usize, Vec<ColourSet>)>,
}

impl Dfs<'_> {
    fn run(&mut self, i: usize) -> bool {
        if i == self.candidates.len() {
            return true;
        }
        // Everything below depends only on the colours of the frontier.
        let key = (i, self.frontier[i].iter().map(|&j| self.chosen[j]).collect::<Vec<_>>());
        if self.failed.contains(&key) {
            return false;
        }
        for &cand in &self.candidates[i] {
            if self.earlier[i].iter().all(|&j| self.chosen[j].is_disjoint(cand)) {
                self.chosen.push(cand);
                if self.run(i + 1) {
                    return true;
                }
                self.chosen.pop();
            }
        }
        self.failed.insert(key);
        false
    }
}

/// Visits every `a`-list assignment on `n` vertices up to renaming of
/// colours. Each visited assignment is in canonical form: colours first
/// appear in increasing order when reading vertices by id and each list in
/// ascending order, so the universe is `{0 .. a·n − 1}` at most.
pub fn for_each_canonical_assignment<F>(n: usize, a: usize, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[ColourSet]) -> ControlFlow<()>,
{
    fn rec<F: FnMut(&[ColourSet]) -> ControlFlow<()>>(
        n: usize,
        a: usize,
        used: u32,
        lists: &mut Vec<ColourSet>,
        visit: &mut F,
    ) -> ControlFlow<()> {
        if lists.len() == n {
            return visit(lists);
        }
        for old in 0..=a.min(used as usize) {
            let fresh_count = (a - old) as u32;
            let fresh = ColourSet::range(used + fresh_count).difference(ColourSet::range(used));
            for reused in ColourSet::range(used).subsets(old) {
                lists.push(reused.union(fresh));
                let flow = rec(n, a, used + fresh_count, lists, visit);
                lists.pop();
                flow?;
            }
        }
        ControlFlow::Continue(())
    }
    assert!(a * n <= ColourSet::CAPACITY as usize, "canonical universe exceeds colour capacity");
    rec(n, a, 0, &mut Vec::with_capacity(n), &mut visit)
}

/// Largest graph for which [`exhaustive_choosable`] accepts `a > 2`.
pub const EXHAUSTIVE_VERTEX_CAP: usize = 5;

/// `(a,b)`-choosability decided by checking every canonical `a`-list
/// assignment with the brute-force colouring search.
pub fn exhaustive_choosable(g: &Graph, a: usize, b: usize) -> Result<bool, OracleError> {
    let n = g.vertex_count();
    if a > 2 && n > EXHAUSTIVE_VERTEX_CAP {
        return Err(OracleError::CapExceeded(format!(
            "exhaustive choosability needs a <= 2 or at most {EXHAUSTIVE_VERTEX_CAP} vertices (a = {a}, n = {n})"
        )));
    }
    if a * n > ColourSet::CAPACITY as usize {
        return Err(OracleError::CapExceeded(format!("canonical universe a·n = {} too large", a * n)));
    }
    let bf = BruteForce::default();
    let mut error = None;
    let flow = for_each_canonical_assignment(n, a, |lists| {
        match bf.colour(g, &ListAssignment::reduced(lists.to_vec()), b) {
            Ok(Some(_)) => ControlFlow::Continue(()),
            Ok(None) => ControlFlow::Break(()),
            Err(e) => {
                error = Some(e);
                ControlFlow::Break(())
            }
        }
    });
    if let Some(e) = error {
        return Err(e);
    }
    Ok(flow.is_continue())
}

/// Bad `2m`-subsets `S ⊆ W` of a path: those with `dam(S,S) > S_L(P) − 2nm`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BadSetReport {
    #[serde(rename = "W")]
    pub w: ColourSet,
    pub bad_subsets: Vec<ColourSet>,
    pub count: usize,
    /// `C(4m,2m) / 2`; the count is expected to stay strictly below it.
    pub bound: u128,
    pub within_bound: bool,
}

impl BadSetReport {
    pub fn is_bad(&self, s: ColourSet) -> bool {
        self.bad_subsets.binary_search(&s).is_ok()
    }
}

/// Enumerates all `C(4m,2m)` subsets of `W` (colex order) and scores each with
/// the closed-form damage.
pub fn enumerate_bad_sets(p: &PathInstance, w: ColourSet) -> Result<BadSetReport, OracleError> {
    if !p.is_odd() {
        return Err(PathError::EvenPath(p.len()).into());
    }
    if w.len() != 4 * p.m {
        return Err(PathError::WidthViolation(format!("|W| = {} != 4m = {}", w.len(), 4 * p.m)).into());
    }
    let prof = profile(p);
    let slack = prof.s_l as i64 - p.demand() as i64;
    let mut bad_subsets = Vec::new();
    for s in w.subsets(2 * p.m) {
        if prof.damage_closed_form(s, s)? as i64 > slack {
            bad_subsets.push(s);
        }
    }
    // colex order is not numeric order of the masks in general
    bad_subsets.sort_unstable();
    let bound = binomial(4 * p.m, 2 * p.m) / 2;
    let count = bad_subsets.len();
    Ok(BadSetReport { w, bad_subsets, count, bound, within_bound: (count as u128) < bound })
}

const WITNESS_SEED: u64 = 0x5eed_0fc0_100c;

/// Searches for an `a`-list assignment with no `(L,b)`-colouring: canonical
/// enumeration for half the budget, then seeded random restarts. `None` is
/// inconclusive unless the canonical enumeration ran to completion, which
/// [`exhaustive_choosable`] reports properly.
pub fn find_uncolourable_assignment(g: &Graph, a: usize, b: usize, budget: usize) -> Option<ListAssignment> {
    let bf = BruteForce::default();
    let n = g.vertex_count();
    let uncolourable = |lists: &ListAssignment| matches!(bf.colour(g, lists, b), Ok(None));
    let verified = |lists: ListAssignment| uncolourable(&lists).then_some(lists);

    let mut spent = 0usize;
    let mut found = None;
    let mut exhausted = true;
    if a * n <= ColourSet::CAPACITY as usize {
        let canonical_budget = budget.div_ceil(2);
        let flow = for_each_canonical_assignment(n, a, |lists| {
            if spent >= canonical_budget {
                exhausted = false;
                return ControlFlow::Break(());
            }
            spent += 1;
            let candidate = ListAssignment::reduced(lists.to_vec());
            if uncolourable(&candidate) {
                found = Some(candidate);
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        if let Some(w) = found {
            return verified(ListAssignment::uniform(w.into_lists(), a).ok()?);
        }
        if flow.is_continue() && exhausted {
            return None;
        }
    }
    let max_universe = (a * n).clamp(a, ColourSet::CAPACITY as usize);
    for attempt in spent..budget {
        let universe = a + attempt % (max_universe - a + 1);
        let seed = WITNESS_SEED ^ (attempt as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        let candidate = random_assignment(g, a, universe, seed).ok()?;
        if uncolourable(&candidate) {
            return verified(candidate);
        }
    }
    None
}
