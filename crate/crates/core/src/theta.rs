//! Constructive `(4m,2m)`-colouring of the two-cycle families and the
//! thetas `Θ_{2,2r,2s}`, `Θ_{1,2r−1,2s−1}`.
//!
//! Every family is split into hub vertices and internal paths. Hubs are
//! pre-coloured so that the remaining list assignment on each internal path
//! still satisfies the path criterion, and the paths are then coloured by
//! the path engine.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::colour::{select, Colour, ColourSet, IndexCombinations};
use crate::error::{ColourerError, ModelError, PathError};
use crate::graph::{realize, FamilySpec, Graph};
use crate::io::{GraphSource, InstanceFile};
use crate::lists::{validate, FoldColouring, ListAssignment};
use crate::oracle::{enumerate_bad_sets, BadSetReport};
use crate::path::{colour_path, damage, profile, s_l, subtract, PathInstance};

/// Why `spec` lies outside the families this module colours, if it does.
pub fn theorem2_scope(spec: &FamilySpec) -> Result<(), ColourerError> {
    spec.validate()?;
    let unsupported = |why: &str| Err(ColourerError::UnsupportedFamily(spec.clone(), why.to_string()));
    match spec {
        FamilySpec::TwoCyclesShared { .. } | FamilySpec::TwoCyclesJoined { .. } => Ok(()),
        FamilySpec::OddCycle(_) | FamilySpec::EvenCycle(_) => unsupported("single cycles are not hub decomposable"),
        FamilySpec::Theta(ls) => {
            let mut sorted = ls.clone();
            sorted.sort_unstable();
            match sorted.as_slice() {
                [2, 2, 2, t] if t % 2 == 0 => unsupported("Θ_{2,2,2,2t} is not (4,2)-choosable for t >= 2"),
                [r, s, t] if *r >= 3 && r % 2 == s % 2 && s % 2 == t % 2 => {
                    unsupported("same-parity thetas with all lengths >= 3 are not (4,2)-choosable")
                }
                [r, s, t] if *r <= 2 && *s > 2 && r % 2 == s % 2 && s % 2 == t % 2 => Ok(()),
                _ => unsupported("theta outside Θ_{r,s,t} with r <= 2 < s,t and equal parities"),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum DecompositionKind {
    SharedVertex,
    Joined,
    Theta,
}

/// Hubs plus internal paths, as vertex ids of [`realize`]`(spec)`.
///
/// * shared vertex: one hub, two paths whose endpoints both touch it;
/// * joined: hubs `u`, `v`; path `P` at `u`, path `R` at `v`, and the
///   interior of the connecting path `Q` ordered from `u` to `v`;
/// * theta: hubs `u`, `v`; `P⁰` is the single middle vertex of the length-2
///   path, then `P¹`, `P²`, each ordered from `u` to `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Decomposition {
    pub spec: FamilySpec,
    pub kind: DecompositionKind,
    pub hubs: Vec<usize>,
    pub internal_paths: Vec<Vec<usize>>,
    pub connector: Option<Vec<usize>>,
    #[serde(skip)]
    pub graph: Graph,
}

impl Decomposition {
    pub fn path_instance(&self, lists: &ListAssignment, i: usize, m: usize) -> PathInstance {
        PathInstance::from_assignment(lists, &self.internal_paths[i], m)
    }
}

/// Interior vertex ids of each builder path in realization order.
fn segments(first_free: usize, lengths: &[usize]) -> Vec<Vec<usize>> {
    let mut next = first_free;
    lengths
        .iter()
        .map(|&len| {
            let seg: Vec<usize> = (next..next + len - 1).collect();
            next += len - 1;
            seg
        })
        .collect()
}

pub fn decompose(spec: &FamilySpec) -> Result<Decomposition, ColourerError> {
    theorem2_scope(spec)?;
    let graph = realize(spec)?;
    let (kind, hubs, internal_paths, connector) = match spec {
        FamilySpec::TwoCyclesShared { p, q } => {
            (DecompositionKind::SharedVertex, vec![0], segments(1, &[*p, *q]), None)
        }
        FamilySpec::TwoCyclesJoined { p, q, path_len } => {
            let mut segs = segments(2, &[*p, *path_len, *q]);
            let r = segs.pop().expect("three segments");
            let q_interior = segs.pop().expect("three segments");
            segs.push(r);
            (DecompositionKind::Joined, vec![0, 1], segs, Some(q_interior))
        }
        FamilySpec::Theta(ls) => {
            if ls.contains(&1) {
                return Err(ColourerError::UnsupportedFamily(
                    spec.clone(),
                    "odd thetas are coloured through the merge reduction".into(),
                ));
            }
            let mut segs = segments(2, ls);
            let middle = ls.iter().position(|&k| k == 2).expect("scope check guarantees a length-2 path");
            let p0 = segs.remove(middle);
            segs.insert(0, p0);
            (DecompositionKind::Theta, vec![0, 1], segs, None)
        }
        FamilySpec::OddCycle(_) | FamilySpec::EvenCycle(_) => unreachable!("rejected by the scope check"),
    };
    Ok(Decomposition { spec: spec.clone(), kind, hubs, internal_paths, connector, graph })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoupleClass {
    Heavy,
    Light,
    Safe,
}

impl CoupleClass {
    pub fn from_damage(d: usize) -> Self {
        debug_assert!(d <= 2, "a couple damages at most two colours");
        match d {
            0 => CoupleClass::Safe,
            1 => CoupleClass::Light,
            _ => CoupleClass::Heavy,
        }
    }

    pub fn damage(self) -> usize {
        match self {
            CoupleClass::Heavy => 2,
            CoupleClass::Light => 1,
            CoupleClass::Safe => 0,
        }
    }
}

/// Couples `(c_j, c'_j)`: common hub colours first (`c_j = c'_j`,
/// ascending), then the remaining colours of both hubs paired in ascending
/// order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoupleTable {
    pub couples: Vec<(Colour, Colour)>,
}

impl CoupleTable {
    pub fn new(lu: ColourSet, lv: ColourSet) -> Result<Self, ColourerError> {
        if lu.len() != lv.len() {
            return Err(ColourerError::WidthViolation(format!("|L(u)| = {} != |L(v)| = {}", lu.len(), lv.len())));
        }
        let common = lu.intersection(lv);
        let mut couples: Vec<(Colour, Colour)> = common.iter().map(|c| (c, c)).collect();
        couples.extend(lu.difference(common).iter().zip(lv.difference(common).iter()));
        Ok(CoupleTable { couples })
    }

    pub fn len(&self) -> usize {
        self.couples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.couples.is_empty()
    }

    pub fn pair(&self, index_mask: u128) -> SimplePair {
        let firsts: Vec<Colour> = self.couples.iter().map(|c| c.0).collect();
        let seconds: Vec<Colour> = self.couples.iter().map(|c| c.1).collect();
        SimplePair {
            index_set: (0..self.len()).filter(|&j| index_mask >> j & 1 == 1).collect(),
            s: select(&firsts, index_mask),
            t: select(&seconds, index_mask),
        }
    }
}

/// A pair `(S,T)` whose colours come from the same couple indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SimplePair {
    pub index_set: Vec<usize>,
    #[serde(rename = "S")]
    pub s: ColourSet,
    #[serde(rename = "T")]
    pub t: ColourSet,
}

impl SimplePair {
    pub fn size(&self) -> usize {
        self.index_set.len()
    }
}

/// Couple classes on one internal path, and the path's slack
/// `S_L(P) − 2m|V(P)|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PathCouples {
    pub classes: Vec<CoupleClass>,
    pub heavy: usize,
    pub light: usize,
    pub safe: usize,
    #[serde(rename = "sL")]
    pub s_l: usize,
    pub slack: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCounts {
    pub heavy: usize,
    pub light: usize,
    pub safe: usize,
}

impl PairCounts {
    /// `2a + b`
    pub fn damage(&self) -> usize {
        2 * self.heavy + self.light
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoupleProfile {
    pub paths: Vec<PathCouples>,
}

impl CoupleProfile {
    /// Heavy, light and safe couple counts of `pair` on each internal path.
    pub fn pair_counts(&self, pair: &SimplePair) -> Vec<PairCounts> {
        self.paths
            .iter()
            .map(|p| {
                let mut counts = PairCounts { heavy: 0, light: 0, safe: 0 };
                for &j in &pair.index_set {
                    match p.classes[j] {
                        CoupleClass::Heavy => counts.heavy += 1,
                        CoupleClass::Light => counts.light += 1,
                        CoupleClass::Safe => counts.safe += 1,
                    }
                }
                counts
            })
            .collect()
    }

    fn additive_damage(&self, i: usize, index_mask: u128) -> usize {
        self.paths[i]
            .classes
            .iter()
            .enumerate()
            .filter(|(j, _)| index_mask >> j & 1 == 1)
            .map(|(_, c)| c.damage())
            .sum()
    }
}

fn expect_kind(dec: &Decomposition, kind: DecompositionKind) -> Result<(), ColourerError> {
    if dec.kind != kind {
        return Err(ColourerError::Precondition(format!("expected a {kind:?} decomposition, got {:?}", dec.kind)));
    }
    Ok(())
}

fn check_lists(g: &Graph, lists: &ListAssignment, m: usize) -> Result<(), ColourerError> {
    if m == 0 {
        return Err(ColourerError::Precondition("m must be positive".into()));
    }
    if lists.len() != g.vertex_count() {
        return Err(ModelError::DomainMismatch(format!(
            "{} lists for {} vertices",
            lists.len(),
            g.vertex_count()
        ))
        .into());
    }
    if let Some(v) = (0..lists.len()).find(|&v| lists.width(v) != 4 * m) {
        return Err(ColourerError::WidthViolation(format!(
            "vertex {v} has {} colours, expected 4m = {}",
            lists.width(v),
            4 * m
        )));
    }
    Ok(())
}

/// Couple table for the hubs of a theta decomposition and the class of
/// every couple on every internal path.
pub fn classify_couples(
    dec: &Decomposition,
    lists: &ListAssignment,
    m: usize,
) -> Result<(CoupleTable, CoupleProfile), ColourerError> {
    expect_kind(dec, DecompositionKind::Theta)?;
    let (u, v) = (dec.hubs[0], dec.hubs[1]);
    for h in [u, v] {
        if lists.width(h) != 4 * m {
            return Err(ColourerError::WidthViolation(format!(
                "hub {h} has {} colours, expected 4m = {}",
                lists.width(h),
                4 * m
            )));
        }
    }
    let table = CoupleTable::new(lists[u], lists[v])?;
    let mut paths = Vec::with_capacity(dec.internal_paths.len());
    for i in 0..dec.internal_paths.len() {
        let p = dec.path_instance(lists, i, m);
        let prof = profile(&p);
        let classes = table
            .couples
            .iter()
            .map(|&(c, c2)| {
                prof.damage_closed_form(ColourSet::singleton(c), ColourSet::singleton(c2)).map(CoupleClass::from_damage)
            })
            .collect::<Result<Vec<_>, PathError>>()?;
        let count = |k: CoupleClass| classes.iter().filter(|&&c| c == k).count();
        paths.push(PathCouples {
            heavy: count(CoupleClass::Heavy),
            light: count(CoupleClass::Light),
            safe: count(CoupleClass::Safe),
            s_l: prof.s_l,
            slack: prof.s_l as i64 - p.demand() as i64,
            classes,
        });
    }
    Ok((table, CoupleProfile { paths }))
}

/// Which of the five hypotheses of the hub pre-colouring theorem hold for
/// hub width `ell` and deficit `tau`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HubConditions {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
    pub c5: bool,
}

impl HubConditions {
    pub fn all(&self) -> bool {
        self.c1 && self.c2 && self.c3 && self.c4 && self.c5
    }

    pub fn failed(&self) -> Vec<&'static str> {
        [("C1", self.c1), ("C2", self.c2), ("C3", self.c3), ("C4", self.c4), ("C5", self.c5)]
            .into_iter()
            .filter(|(_, ok)| !ok)
            .map(|(name, _)| name)
            .collect()
    }
}

/// Evaluates C1–C5 for a theta decomposition:
///
/// * C1: `τ ≤ 2m`, `ℓ + τ ≥ 2m`, both even;
/// * C2: `|L(u)| = |L(v)| = ℓ`;
/// * C3: path endpoints have at least `4m − τ` colours;
/// * C4: every other internal vertex has exactly `4m`;
/// * C5: `S_L(Pⁱ) ≥ 2m|V(Pⁱ)| + 2m − τ` and
///   `dam(L(u), L(v)) ≤ S_L(Pⁱ) − 2m|V(Pⁱ)| + ℓ − 2m + τ` on every path.
pub fn hub_conditions(
    dec: &Decomposition,
    lists: &ListAssignment,
    m: usize,
    ell: usize,
    tau: usize,
) -> Result<HubConditions, ColourerError> {
    expect_kind(dec, DecompositionKind::Theta)?;
    let (u, v) = (dec.hubs[0], dec.hubs[1]);
    let (m_, ell_, tau_) = (m as i64, ell as i64, tau as i64);
    let c1 = ell.is_multiple_of(2) && tau.is_multiple_of(2) && tau <= 2 * m && ell + tau >= 2 * m;
    let c2 = lists.width(u) == ell && lists.width(v) == ell;
    let mut c3 = true;
    let mut c4 = true;
    let mut c5 = true;
    for (i, verts) in dec.internal_paths.iter().enumerate() {
        let (first, last) = (verts[0], verts[verts.len() - 1]);
        c3 &= lists.width(first) + tau >= 4 * m && lists.width(last) + tau >= 4 * m;
        c4 &= verts.iter().filter(|&&w| w != first && w != last).all(|&w| lists.width(w) == 4 * m);
        let p = dec.path_instance(lists, i, m);
        let slack = s_l(&p.lists) as i64 - p.demand() as i64;
        c5 &= slack >= 2 * m_ - tau_ && damage(&p, lists[u], lists[v]) as i64 <= slack + ell_ - 2 * m_ + tau_;
    }
    Ok(HubConditions { c1, c2, c3, c4, c5 })
}

/// First simple pair of size `2m` (colex order over couple indices) whose
/// damage on every internal path is at most the path's slack.
pub fn find_simple_pair(dec: &Decomposition, lists: &ListAssignment, m: usize) -> Result<SimplePair, ColourerError> {
    let conditions = hub_conditions(dec, lists, m, 4 * m, 0)?;
    if !conditions.all() {
        return Err(ColourerError::Precondition(format!(
            "hub conditions fail at ℓ = 4m, τ = 0: {}",
            conditions.failed().join(", ")
        )));
    }
    let (table, couples) = classify_couples(dec, lists, m)?;
    let paths = dec.internal_paths.len();
    let mut scanned = 0usize;
    for mask in IndexCombinations::new(table.len(), 2 * m) {
        scanned += 1;
        if (0..paths).all(|i| couples.additive_damage(i, mask) as i64 <= couples.paths[i].slack) {
            let pair = table.pair(mask);
            // second route: damage from S_L before and after deletion
            for i in 0..paths {
                let p = dec.path_instance(lists, i, m);
                let direct = damage(&p, pair.s, pair.t);
                if direct != couples.additive_damage(i, mask) {
                    let trace = json!({"stage": "simplePair", "pair": pair, "path": i, "directDamage": direct,
                        "additiveDamage": couples.additive_damage(i, mask), "couples": couples});
                    return Err(not_found(&dec.spec, lists, m, "couple damages are not additive", trace));
                }
            }
            return Ok(pair);
        }
    }
    let trace = json!({"stage": "simplePair", "scanned": scanned, "table": table, "couples": couples});
    Err(not_found(&dec.spec, lists, m, "no simple pair of size 2m within every path's slack", trace))
}

fn colour_subtracted(
    dec: &Decomposition,
    lists: &ListAssignment,
    m: usize,
    i: usize,
    s: ColourSet,
    t: ColourSet,
    chosen: &mut [ColourSet],
) -> Result<(), ColourerError> {
    let p = subtract(&dec.path_instance(lists, i, m), s, t);
    match colour_path(&p) {
        Ok(phi) => {
            for (&w, set) in dec.internal_paths[i].iter().zip(phi.chosen) {
                chosen[w] = set;
            }
            Ok(())
        }
        Err(e @ (PathError::NotColourable { .. } | PathError::Infeasible)) => {
            let trace = json!({"stage": "pathColouring", "path": i, "S": s, "T": t, "error": e.to_string()});
            Err(not_found(&dec.spec, lists, m, "hub pre-colouring does not extend along an internal path", trace))
        }
        Err(e) => Err(e.into()),
    }
}

/// Theta pipeline: simple pair on the hubs, then every internal path.
pub fn colour_theta(dec: &Decomposition, lists: &ListAssignment, m: usize) -> Result<FoldColouring, ColourerError> {
    expect_kind(dec, DecompositionKind::Theta)?;
    check_lists(&dec.graph, lists, m)?;
    let pair = find_simple_pair(dec, lists, m)?;
    let mut chosen = vec![ColourSet::empty(); dec.graph.vertex_count()];
    chosen[dec.hubs[0]] = pair.s;
    chosen[dec.hubs[1]] = pair.t;
    for i in 0..dec.internal_paths.len() {
        colour_subtracted(dec, lists, m, i, pair.s, pair.t, &mut chosen)?;
    }
    Ok(FoldColouring::new(chosen, 2 * m))
}

/// Backtracking extension of a hub colouring along a chain of vertices,
/// with the final set restricted by `accept`. Failures are cached by
/// position and predecessor colour set, which is all the rest depends on.
struct ChainExtension<'a> {
    lists: Vec<ColourSet>,
    fold: usize,
    accept: &'a dyn Fn(ColourSet) -> bool,
    failed: HashSet<(usize, ColourSet)>,
    chosen: Vec<ColourSet>,
}

impl ChainExtension<'_> {
    fn extend(&mut self, j: usize, prev: ColourSet) -> bool {
        if self.failed.contains(&(j, prev)) {
            return false;
        }
        let last = j + 1 == self.lists.len();
        for cand in self.lists[j].difference(prev).subsets(self.fold) {
            if last && !(self.accept)(cand) {
                continue;
            }
            self.chosen.push(cand);
            if last || self.extend(j + 1, cand) {
                return true;
            }
            self.chosen.pop();
        }
        self.failed.insert((j, prev));
        false
    }
}

/// Two-cycle pipeline: a hub set not bad for the cycle path(s) at its hub,
/// extended along the connector in the joined case.
pub fn colour_two_cycle_family(
    dec: &Decomposition,
    lists: &ListAssignment,
    m: usize,
) -> Result<FoldColouring, ColourerError> {
    if dec.kind == DecompositionKind::Theta {
        return Err(ColourerError::Precondition("theta decompositions use the simple-pair pipeline".into()));
    }
    check_lists(&dec.graph, lists, m)?;
    let n = dec.graph.vertex_count();
    let mut chosen = vec![ColourSet::empty(); n];
    let u = dec.hubs[0];
    let reports = |path: usize, hub: usize| -> Result<BadSetReport, ColourerError> {
        Ok(enumerate_bad_sets(&dec.path_instance(lists, path, m), lists[hub])?)
    };
    match dec.kind {
        DecompositionKind::SharedVertex => {
            let (r1, r2) = (reports(0, u)?, reports(1, u)?);
            let Some(s) = lists[u].subsets(2 * m).find(|&s| !r1.is_bad(s) && !r2.is_bad(s)) else {
                let trace = json!({"stage": "hubSet", "badSets": [r1, r2]});
                return Err(not_found(&dec.spec, lists, m, "every hub set is bad for some path", trace));
            };
            chosen[u] = s;
            colour_subtracted(dec, lists, m, 0, s, s, &mut chosen)?;
            colour_subtracted(dec, lists, m, 1, s, s, &mut chosen)?;
        }
        DecompositionKind::Joined => {
            let v = dec.hubs[1];
            let (rp, rr) = (reports(0, u)?, reports(1, v)?);
            let q = dec.connector.clone().unwrap_or_default();
            let accept = |t: ColourSet| !rr.is_bad(t);
            let mut ext = ChainExtension {
                lists: q.iter().chain([&v]).map(|&w| lists[w]).collect(),
                fold: 2 * m,
                accept: &accept,
                failed: HashSet::new(),
                chosen: Vec::with_capacity(q.len() + 1),
            };
            let mut tried = 0usize;
            let mut found = None;
            for s in lists[u].subsets(2 * m).filter(|&s| !rp.is_bad(s)) {
                tried += 1;
                if ext.extend(0, s) {
                    found = Some(s);
                    break;
                }
            }
            let Some(s) = found else {
                let trace = json!({"stage": "connector", "candidatesTried": tried, "badSets": [rp, rr]});
                return Err(not_found(&dec.spec, lists, m, "no good hub set at u extends to a good set at v", trace));
            };
            let t = *ext.chosen.last().expect("chain ends at v");
            chosen[u] = s;
            for (&w, &set) in q.iter().chain([&v]).zip(&ext.chosen) {
                chosen[w] = set;
            }
            colour_subtracted(dec, lists, m, 0, s, s, &mut chosen)?;
            colour_subtracted(dec, lists, m, 1, t, t, &mut chosen)?;
        }
        DecompositionKind::Theta => unreachable!(),
    }
    Ok(FoldColouring::new(chosen, 2 * m))
}

/// `Θ_{1,2r−1,2s−1}` obtained from `Θ_{2,2r,2s}` by deleting hub `u` and
/// merging its three neighbours. `lift[x]` is the vertex of the odd theta
/// whose list vertex `x` of the even theta copies (the deleted hub and its
/// neighbours all copy the merged vertex); `pull_back[y]` is the vertex of
/// the even theta whose colour vertex `y` of the odd theta takes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MergeReduction {
    pub reduced: FamilySpec,
    pub merged: usize,
    pub lift: Vec<usize>,
    pub pull_back: Vec<usize>,
}

pub fn merge_reduce(spec: &FamilySpec) -> Result<MergeReduction, ColourerError> {
    let unsupported = |why: &str| ColourerError::UnsupportedFamily(spec.clone(), why.to_string());
    let FamilySpec::Theta(ls) = spec else {
        return Err(unsupported("merge reduction applies to thetas only"));
    };
    let ok = ls.len() == 3
        && ls.iter().filter(|&&k| k == 1).count() == 1
        && ls.iter().all(|&k| k == 1 || (k >= 3 && k % 2 == 1));
    if !ok {
        return Err(unsupported("expected Θ_{1,2r−1,2s−1} with r, s >= 2"));
    }
    let grown: Vec<usize> = ls.iter().map(|k| k + 1).collect();
    let odd_segs = segments(2, ls);
    let even_segs = segments(2, &grown);
    let mut lift = vec![0; 2 + grown.iter().map(|k| k - 1).sum::<usize>()];
    let mut pull_back = vec![0; 2 + ls.iter().map(|k| k - 1).sum::<usize>()];
    lift[1] = 1;
    pull_back[1] = 1;
    for (odd, even) in odd_segs.iter().zip(&even_segs) {
        lift[even[0]] = 0;
        for (k, &y) in odd.iter().enumerate() {
            lift[even[k + 1]] = y;
            pull_back[y] = even[k + 1];
        }
    }
    let w = ls.iter().position(|&k| k == 1).expect("checked above");
    pull_back[0] = even_segs[w][0];
    Ok(MergeReduction { reduced: FamilySpec::Theta(grown), merged: 0, lift, pull_back })
}

/// `(L, 2m)`-colouring of a family member with a `4m`-list assignment.
pub fn colour_family(spec: &FamilySpec, lists: &ListAssignment, m: usize) -> Result<FoldColouring, ColourerError> {
    theorem2_scope(spec)?;
    let g = realize(spec)?;
    check_lists(&g, lists, m)?;
    let phi = match spec {
        FamilySpec::Theta(ls) if ls.contains(&1) => {
            let red = merge_reduce(spec)?;
            let lifted = ListAssignment::uniform(red.lift.iter().map(|&y| lists[y]).collect(), 4 * m)?;
            let big = colour_theta(&decompose(&red.reduced)?, &lifted, m)?;
            FoldColouring::new(red.pull_back.iter().map(|&x| big.chosen[x]).collect(), 2 * m)
        }
        FamilySpec::Theta(_) => colour_theta(&decompose(spec)?, lists, m)?,
        _ => colour_two_cycle_family(&decompose(spec)?, lists, m)?,
    };
    if !validate(&g, lists, &phi)? {
        let trace = json!({"stage": "validate", "colouring": phi.chosen});
        return Err(not_found(spec, lists, m, "assembled colouring failed validation", trace));
    }
    Ok(phi)
}

/// Directory for counterexample dumps: `$LISTCHROM_COUNTEREXAMPLE_DIR`, or
/// `./counterexamples`.
pub fn counterexample_dir() -> PathBuf {
    std::env::var_os("LISTCHROM_COUNTEREXAMPLE_DIR").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("counterexamples"))
}

fn not_found(
    spec: &FamilySpec,
    lists: &ListAssignment,
    m: usize,
    reason: &str,
    trace: serde_json::Value,
) -> ColourerError {
    let dump = dump_counterexample(&counterexample_dir(), spec, lists, m, reason, trace);
    ColourerError::NotFound { reason: reason.to_string(), dump }
}

/// Writes the instance JSON extended with `m`, `reason` and `trace`.
/// Returns `None` if the file could not be written.
pub fn dump_counterexample(
    dir: &Path,
    spec: &FamilySpec,
    lists: &ListAssignment,
    m: usize,
    reason: &str,
    trace: serde_json::Value,
) -> Option<PathBuf> {
    let instance = InstanceFile::from_lists(GraphSource::Family(spec.clone()), lists);
    let mut doc = serde_json::to_value(&instance).ok()?;
    let obj = doc.as_object_mut()?;
    obj.insert("m".into(), json!(m));
    obj.insert("reason".into(), json!(reason));
    obj.insert("trace".into(), trace);
    let text = serde_json::to_string_pretty(&doc).ok()?;
    let mut h = DefaultHasher::new();
    text.hash(&mut h);
    let name: String =
        spec.to_string().chars().map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' }).collect();
    std::fs::create_dir_all(dir).ok()?;
    let path = dir.join(format!("{name}-m{m}-{:016x}.json", h.finish()));
    std::fs::write(&path, text).ok()?;
    Some(path)
}
