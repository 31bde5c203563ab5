//! Per-path quantities: the alternating difference sets `X_i`, the statistic
//! `S_L(P)`, the `(L,2m)`-colourability criterion, endpoint damage, and the
//! odd-path profile (`Λ`, `X̂₁`, `X̂ₙ`) with its closed-form damage and lower
//! bound.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::colour::{Colour, ColourSet};
use crate::error::PathError;
use crate::lists::{FoldColouring, ListAssignment};

/// An ordered path `v₁ .. vₙ` with a list per vertex and fold parameter `m`
/// (colourings are `2m`-fold).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathInstance {
    pub m: usize,
    pub lists: Vec<ColourSet>,
}

impl PathInstance {
    pub fn new(m: usize, lists: Vec<ColourSet>) -> Self {
        PathInstance { m, lists }
    }

    /// The path through `vertices` (in order) of a graph-wide assignment.
    pub fn from_assignment(lists: &ListAssignment, vertices: &[usize], m: usize) -> Self {
        PathInstance { m, lists: vertices.iter().map(|&v| lists[v]).collect() }
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn is_odd(&self) -> bool {
        self.lists.len() % 2 == 1
    }

    /// Colours per vertex in a colouring: `2m`.
    pub fn fold(&self) -> usize {
        2 * self.m
    }

    /// `2nm`, the threshold of the colourability criterion.
    pub fn demand(&self) -> usize {
        2 * self.len() * self.m
    }

    fn first(&self) -> ColourSet {
        self.lists[0]
    }

    fn last(&self) -> ColourSet {
        self.lists[self.len() - 1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddProfile {
    /// Colours present in every list.
    pub lambda: ColourSet,
    /// Colours of `L(v₁) − Λ` whose first absence is at an even index.
    #[serde(rename = "hatX1")]
    pub hat_first: ColourSet,
    /// Colours of `L(vₙ) − Λ` whose last absence is at an even index.
    #[serde(rename = "hatXn")]
    pub hat_last: ColourSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathProfile {
    pub x: Vec<ColourSet>,
    #[serde(rename = "sL")]
    pub s_l: usize,
    /// Present only for odd `n`.
    #[serde(flatten, default, skip_serializing_if = "Option::is_none")]
    pub odd: Option<OddProfile>,
}

impl PathProfile {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn odd(&self) -> Result<&OddProfile, PathError> {
        self.odd.as_ref().ok_or(PathError::EvenPath(self.len()))
    }

    /// `|X̂₁ ∩ S| + |X̂ₙ ∩ T| + |Λ ∩ (S ∪ T)|`; equals [`damage`] on odd paths.
    pub fn damage_closed_form(&self, s: ColourSet, t: ColourSet) -> Result<usize, PathError> {
        let o = self.odd()?;
        Ok(o.hat_first.intersection(s).len()
            + o.hat_last.intersection(t).len()
            + o.lambda.intersection(s.union(t)).len())
    }
}

fn alternating_sets(lists: &[ColourSet]) -> Vec<ColourSet> {
    let mut x = Vec::with_capacity(lists.len());
    let mut prev = ColourSet::empty();
    for &l in lists {
        prev = l.difference(prev);
        x.push(prev);
    }
    x
}

/// `S_L(P) = Σ |X_i|`.
pub fn s_l(lists: &[ColourSet]) -> usize {
    alternating_sets(lists).iter().map(|x| x.len()).sum()
}

pub fn profile(p: &PathInstance) -> PathProfile {
    let x = alternating_sets(&p.lists);
    let s_l = x.iter().map(|s| s.len()).sum();
    let odd = (p.is_odd()).then(|| {
        let lambda = p.lists.iter().fold(p.first(), |acc, l| acc.intersection(*l));
        let absent = |c: Colour, i: usize| !p.lists[i].contains(c);
        // indices below are 0-based, so "even 1-based index" means odd here
        let hat_first = p
            .first()
            .difference(lambda)
            .iter()
            .filter(|&c| (0..p.len()).find(|&i| absent(c, i)).is_some_and(|i| i % 2 == 1))
            .collect();
        let hat_last = p
            .last()
            .difference(lambda)
            .iter()
            .filter(|&c| (0..p.len()).rev().find(|&i| absent(c, i)).is_some_and(|i| i % 2 == 1))
            .collect();
        OddProfile { lambda, hat_first, hat_last }
    });
    PathProfile { x, s_l, odd }
}

fn check_endpoint_widths(p: &PathInstance) -> Result<(), PathError> {
    if p.m == 0 {
        return Err(PathError::WidthViolation("m must be positive".into()));
    }
    if p.is_empty() {
        return Err(PathError::WidthViolation("path has no vertices".into()));
    }
    let (min_end, n) = (p.fold(), p.len());
    for (i, &l) in p.lists.iter().enumerate() {
        let endpoint = i == 0 || i == n - 1;
        if endpoint && l.len() < min_end {
            return Err(PathError::WidthViolation(format!(
                "endpoint list at position {i} has {} < {min_end} colours",
                l.len()
            )));
        }
        if !endpoint && l.len() != 4 * p.m {
            return Err(PathError::WidthViolation(format!(
                "interior list at position {i} has {} != {} colours",
                l.len(),
                4 * p.m
            )));
        }
    }
    Ok(())
}

/// `(L,2m)`-colourability of a path with endpoint widths at least `2m` and
/// interior widths exactly `4m`: colourable iff `S_L(P) >= 2nm`.
pub fn decide_colourable(p: &PathInstance) -> Result<bool, PathError> {
    check_endpoint_widths(p)?;
    Ok(s_l(&p.lists) >= p.demand())
}

/// Deterministic `(L,2m)`-colouring. Left to right, each vertex takes `2m`
/// colours of `L(vᵢ) − φ(vᵢ₋₁)`, preferring colours missing from
/// `L(vᵢ₊₁)` and then smaller ids; dead ends backtrack.
pub fn colour_path(p: &PathInstance) -> Result<FoldColouring, PathError> {
    if !decide_colourable(p)? {
        return Err(PathError::NotColourable { s_l: s_l(&p.lists), needed: p.demand() });
    }
    let mut search = PathSearch { p, failed: HashSet::new(), chosen: Vec::with_capacity(p.len()) };
    if search.extend(0, ColourSet::empty()) {
        Ok(FoldColouring::new(search.chosen, p.fold()))
    } else {
        Err(PathError::Infeasible)
    }
}

struct PathSearch<'a> {
    p: &'a PathInstance,
    failed: HashSet<(usize, ColourSet)>,
    chosen: Vec<ColourSet>,
}

impl PathSearch<'_> {
    fn extend(&mut self, i: usize, prev: ColourSet) -> bool {
        if i == self.p.len() {
            return true;
        }
        if self.failed.contains(&(i, prev)) {
            return false;
        }
        let avail = self.p.lists[i].difference(prev);
        let next = self.p.lists.get(i + 1).copied().unwrap_or_default();
        let mut ordered: Vec<Colour> = avail.difference(next).iter().collect();
        ordered.extend(avail.intersection(next).iter());
        for pick in LexCombinations::new(ordered.len(), self.p.fold()) {
            let set: ColourSet = pick.iter().map(|&j| ordered[j]).collect();
            self.chosen.push(set);
            if self.extend(i + 1, set) {
                return true;
            }
            self.chosen.pop();
        }
        self.failed.insert((i, prev));
        false
    }
}

/// `k`-subsets of `0..n` as sorted index vectors, in lexicographic order.
struct LexCombinations {
    n: usize,
    cur: Option<Vec<usize>>,
}

impl LexCombinations {
    fn new(n: usize, k: usize) -> Self {
        LexCombinations { n, cur: (k <= n).then(|| (0..k).collect()) }
    }
}

impl Iterator for LexCombinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let k = out.len();
        let cur = self.cur.as_mut().unwrap();
        // rightmost position that can still advance
        match (0..k).rev().find(|&i| cur[i] < self.n - k + i) {
            Some(i) => {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
            }
            None => self.cur = None,
        }
        Some(out)
    }
}

/// `L ⊖ (S,T)`: delete `S` from the first list and `T` from the last; a
/// single-vertex path loses `S ∪ T`.
pub fn subtract(p: &PathInstance, s: ColourSet, t: ColourSet) -> PathInstance {
    let mut lists = p.lists.clone();
    if let Some(first) = lists.first_mut() {
        *first = first.difference(s);
    }
    if let Some(last) = lists.last_mut() {
        *last = last.difference(t);
    }
    PathInstance { m: p.m, lists }
}

/// `S_L(P) − S_{L⊖(S,T)}(P)`, from two evaluations of `S_L`.
pub fn damage(p: &PathInstance, s: ColourSet, t: ColourSet) -> usize {
    let before = s_l(&p.lists);
    let after = s_l(&subtract(p, s, t).lists);
    // deleting endpoint colours never raises S_L
    before.checked_sub(after).expect("S_L increased after deleting endpoint colours")
}

/// `max{2(n−1)m + |X̂₁| + |X̂ₙ| + |Λ|, 2(n+1)m}` for odd paths with every
/// list of width `4m`; `S_L(P)` is at least this value.
pub fn lower_bound(p: &PathInstance) -> Result<usize, PathError> {
    if !p.is_odd() {
        return Err(PathError::EvenPath(p.len()));
    }
    if let Some((i, l)) = p.lists.iter().enumerate().find(|(_, l)| l.len() != 4 * p.m) {
        return Err(PathError::WidthViolation(format!(
            "list at position {i} has {} != {} colours",
            l.len(),
            4 * p.m
        )));
    }
    let prof = profile(p);
    let o = prof.odd()?;
    let (n, m) = (p.len(), p.m);
    Ok((2 * (n - 1) * m + o.hat_first.len() + o.hat_last.len() + o.lambda.len()).max(2 * (n + 1) * m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(ids: &[u32]) -> ColourSet {
        ColourSet::from_ids(ids.iter().copied())
    }

    fn identical() -> PathInstance {
        PathInstance::new(1, vec![set(&[1, 2, 3, 4]); 3])
    }

    fn staggered() -> PathInstance {
        PathInstance::new(1, vec![set(&[1, 2, 3, 4]), set(&[3, 4, 5, 6]), set(&[5, 6, 7, 8])])
    }

    /// Independent route to `S_L`: each maximal run of `r` consecutive lists
    /// containing a colour contributes `ceil(r/2)`.
    fn s_l_by_runs(lists: &[ColourSet]) -> usize {
        let palette = lists.iter().fold(ColourSet::empty(), |a, l| a.union(*l));
        let mut total = 0;
        for c in palette {
            let mut run = 0usize;
            for l in lists.iter().chain(std::iter::once(&ColourSet::empty())) {
                if l.contains(c) {
                    run += 1;
                } else {
                    total += run.div_ceil(2);
                    run = 0;
                }
            }
        }
        total
    }

    #[test]
    fn profile_of_identical_lists() {
        let prof = profile(&identical());
        assert_eq!(prof.x, vec![set(&[1, 2, 3, 4]), set(&[]), set(&[1, 2, 3, 4])]);
        assert_eq!(prof.s_l, 8);
        let o = prof.odd().unwrap();
        assert_eq!(o.lambda, set(&[1, 2, 3, 4]));
        assert!(o.hat_first.is_empty() && o.hat_last.is_empty());
    }

    #[test]
    fn profile_of_staggered_lists() {
        let prof = profile(&staggered());
        assert_eq!(prof.s_l, 8);
        let o = prof.odd().unwrap();
        assert_eq!(o.lambda, set(&[]));
        assert_eq!(o.hat_first, set(&[1, 2]));
        assert_eq!(o.hat_last, set(&[7, 8]));
    }

    #[test]
    fn single_vertex_profile() {
        let w = set(&[2, 5, 9]);
        let prof = profile(&PathInstance::new(1, vec![w]));
        assert_eq!(prof.x, vec![w]);
        assert_eq!(prof.s_l, 3);
        let o = prof.odd().unwrap();
        assert_eq!(o.lambda, w);
        assert!(o.hat_first.is_empty() && o.hat_last.is_empty());
    }

    #[test]
    fn even_paths_have_no_odd_profile() {
        let p = PathInstance::new(1, vec![set(&[1, 2]); 2]);
        let prof = profile(&p);
        assert!(prof.odd.is_none());
        assert_eq!(prof.damage_closed_form(set(&[]), set(&[])), Err(PathError::EvenPath(2)));
        assert_eq!(lower_bound(&p), Err(PathError::EvenPath(2)));
    }

    #[test]
    fn profile_json_shape() {
        let json = serde_json::to_value(profile(&staggered())).unwrap();
        assert_eq!(json["sL"], 8);
        assert_eq!(json["hatX1"], serde_json::json!([1, 2]));
        assert_eq!(json["hatXn"], serde_json::json!([7, 8]));
        assert_eq!(json["lambda"], serde_json::json!([]));
        let even = serde_json::to_value(profile(&PathInstance::new(1, vec![set(&[1, 2]); 2]))).unwrap();
        assert!(even.get("lambda").is_none());
    }

    #[test]
    fn decide_examples() {
        assert!(decide_colourable(&identical()).unwrap());
        let tight = PathInstance::new(1, vec![set(&[1, 2]); 2]);
        assert_eq!(s_l(&tight.lists), 2);
        assert!(!decide_colourable(&tight).unwrap());
        let disjoint = PathInstance::new(1, vec![set(&[0, 1, 2, 3]), set(&[4, 5, 6, 7]), set(&[8, 9, 10, 11])]);
        assert!(decide_colourable(&disjoint).unwrap());
    }

    #[test]
    fn decide_width_violations() {
        let narrow_end = PathInstance::new(1, vec![set(&[1]), set(&[1, 2, 3, 4]), set(&[1, 2])]);
        assert!(matches!(decide_colourable(&narrow_end), Err(PathError::WidthViolation(_))));
        let wide_interior = PathInstance::new(1, vec![set(&[1, 2]), set(&[1, 2, 3, 4, 5]), set(&[1, 2])]);
        assert!(matches!(decide_colourable(&wide_interior), Err(PathError::WidthViolation(_))));
    }

    #[test]
    fn colour_path_examples() {
        let phi = colour_path(&identical()).unwrap();
        assert_eq!(phi.chosen, vec![set(&[1, 2]), set(&[3, 4]), set(&[1, 2])]);
        let disjoint = PathInstance::new(1, vec![set(&[5, 0, 3, 9]), set(&[10, 11, 12, 13]), set(&[20, 21, 22, 23])]);
        let phi = colour_path(&disjoint).unwrap();
        assert_eq!(phi.chosen, vec![set(&[0, 3]), set(&[10, 11]), set(&[20, 21])]);
        let single = colour_path(&PathInstance::new(1, vec![set(&[1, 2, 3, 4])])).unwrap();
        assert_eq!(single.chosen, vec![set(&[1, 2])]);
    }

    #[test]
    fn colour_path_refuses_uncolourable() {
        let tight = PathInstance::new(1, vec![set(&[1, 2]); 2]);
        assert!(matches!(colour_path(&tight), Err(PathError::NotColourable { s_l: 2, needed: 4 })));
    }

    #[test]
    fn subtract_examples() {
        let p = identical();
        assert_eq!(subtract(&p, set(&[]), set(&[])), p);
        let q = subtract(&p, set(&[1, 2]), set(&[1, 2]));
        assert_eq!(q.lists, vec![set(&[3, 4]), set(&[1, 2, 3, 4]), set(&[3, 4])]);
        let single = subtract(&PathInstance::new(1, vec![set(&[1, 2, 3, 4])]), set(&[1]), set(&[2]));
        assert_eq!(single.lists, vec![set(&[3, 4])]);
    }

    #[test]
    fn damage_examples() {
        assert_eq!(damage(&identical(), set(&[1, 2]), set(&[1, 2])), 2);
        assert_eq!(damage(&staggered(), set(&[1, 2]), set(&[7, 8])), 4);
        assert_eq!(damage(&staggered(), set(&[]), set(&[])), 0);
        let prof = profile(&identical());
        assert_eq!(prof.damage_closed_form(set(&[1, 2]), set(&[1, 2])).unwrap(), 2);
        let prof = profile(&staggered());
        assert_eq!(prof.damage_closed_form(set(&[1, 2]), set(&[7, 8])).unwrap(), 4);
        assert_eq!(prof.damage_closed_form(set(&[]), set(&[])).unwrap(), 0);
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound(&staggered()).unwrap(), 8);
        assert_eq!(lower_bound(&identical()).unwrap(), 8);
        assert_eq!(lower_bound(&PathInstance::new(1, vec![set(&[1, 2, 3, 4])])).unwrap(), 4);
        assert!(matches!(
            lower_bound(&PathInstance::new(1, vec![set(&[1, 2, 3])])),
            Err(PathError::WidthViolation(_))
        ));
    }

    #[test]
    fn lex_combinations_order() {
        let got: Vec<_> = LexCombinations::new(4, 2).collect();
        assert_eq!(got, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(LexCombinations::new(3, 0).count(), 1);
        assert_eq!(LexCombinations::new(2, 3).count(), 0);
    }

    fn lists_strategy(max_n: usize, universe: u32) -> impl Strategy<Value = Vec<ColourSet>> {
        proptest::collection::vec(proptest::collection::btree_set(0..universe, 0..=universe as usize), 1..=max_n)
            .prop_map(|v| v.into_iter().map(ColourSet::from_ids).collect())
    }

    proptest! {
        #[test]
        fn s_l_matches_run_count(lists in lists_strategy(8, 10)) {
            prop_assert_eq!(s_l(&lists), s_l_by_runs(&lists));
        }

        #[test]
        fn profile_invariants(lists in lists_strategy(9, 8)) {
            let p = PathInstance::new(1, lists.clone());
            let prof = profile(&p);
            prop_assert_eq!(prof.x[0], lists[0]);
            for (i, &l) in lists.iter().enumerate() {
                prop_assert!(prof.x[i].is_subset(l));
                if i > 0 {
                    prop_assert!(prof.x[i].is_disjoint(prof.x[i - 1]));
                    prop_assert_eq!(prof.x[i], l.difference(prof.x[i - 1]));
                }
            }
            if let Some(o) = &prof.odd {
                prop_assert!(lists.iter().all(|l| o.lambda.is_subset(*l)));
                prop_assert!(o.hat_first.is_subset(lists[0].difference(o.lambda)));
                prop_assert!(o.hat_last.is_subset(lists[lists.len() - 1].difference(o.lambda)));
            }
        }

        #[test]
        fn damage_is_monotone(lists in lists_strategy(7, 8), s in 0u128..256, t in 0u128..256, s2 in 0u128..256, t2 in 0u128..256) {
            let p = PathInstance::new(1, lists);
            let (s, t) = (ColourSet::from_bits(s), ColourSet::from_bits(t));
            let (bs, bt) = (s.union(ColourSet::from_bits(s2)), t.union(ColourSet::from_bits(t2)));
            prop_assert!(damage(&p, s, t) <= damage(&p, bs, bt));
        }

        #[test]
        fn closed_form_matches_difference_form(lists in lists_strategy(9, 8), s in 0u128..256, t in 0u128..256) {
            let p = PathInstance::new(1, lists);
            prop_assume!(p.is_odd());
            let (s, t) = (ColourSet::from_bits(s), ColourSet::from_bits(t));
            prop_assert_eq!(profile(&p).damage_closed_form(s, t).unwrap(), damage(&p, s, t));
        }
    }
}
