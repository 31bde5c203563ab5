//! List assignments, fold colourings, validity, and seeded instance generators.

use std::ops::Index;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::colour::{Colour, ColourSet};
use crate::error::ModelError;
use crate::graph::Graph;

/// Per-vertex colour lists. `declared_width` is `Some(a)` for an
/// `a`-list assignment and `None` for a reduced instance, where each vertex
/// carries its own width (the size of its list).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ListAssignment {
    lists: Vec<ColourSet>,
    declared_width: Option<usize>,
}

impl ListAssignment {
    pub fn uniform(lists: Vec<ColourSet>, a: usize) -> Result<Self, ModelError> {
        if let Some((v, l)) = lists.iter().enumerate().find(|(_, l)| l.len() != a) {
            return Err(ModelError::WidthViolation(format!(
                "vertex {v} has {} colours, expected {a}",
                l.len()
            )));
        }
        Ok(ListAssignment { lists, declared_width: Some(a) })
    }

    pub fn reduced(lists: Vec<ColourSet>) -> Self {
        ListAssignment { lists, declared_width: None }
    }

    /// Same list at every vertex.
    pub fn constant(n: usize, list: ColourSet) -> Self {
        ListAssignment { lists: vec![list; n], declared_width: Some(list.len()) }
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn lists(&self) -> &[ColourSet] {
        &self.lists
    }

    pub fn declared_width(&self) -> Option<usize> {
        self.declared_width
    }

    pub fn width(&self, v: usize) -> usize {
        self.lists[v].len()
    }

    /// Union of all lists.
    pub fn palette(&self) -> ColourSet {
        self.lists.iter().fold(ColourSet::empty(), |acc, l| acc.union(*l))
    }

    pub fn into_lists(self) -> Vec<ColourSet> {
        self.lists
    }
}

impl Index<usize> for ListAssignment {
    type Output = ColourSet;
    fn index(&self, v: usize) -> &ColourSet {
        &self.lists[v]
    }
}

/// A `fold`-fold colouring: a colour set per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FoldColouring {
    pub chosen: Vec<ColourSet>,
    pub fold: usize,
}

impl FoldColouring {
    pub fn new(chosen: Vec<ColourSet>, fold: usize) -> Self {
        FoldColouring { chosen, fold }
    }
}

impl Index<usize> for FoldColouring {
    type Output = ColourSet;
    fn index(&self, v: usize) -> &ColourSet {
        &self.chosen[v]
    }
}

/// True iff `phi` is a `phi.fold`-fold colouring of `g` with
/// `phi(v) ⊆ L(v)` at every vertex.
pub fn validate(g: &Graph, lists: &ListAssignment, phi: &FoldColouring) -> Result<bool, ModelError> {
    let n = g.vertex_count();
    if lists.len() != n || phi.chosen.len() != n {
        return Err(ModelError::DomainMismatch(format!(
            "graph has {n} vertices, lists cover {}, colouring covers {}",
            lists.len(),
            phi.chosen.len()
        )));
    }
    let sizes_ok = phi.chosen.iter().all(|s| s.len() == phi.fold);
    let within_lists = (0..n).all(|v| phi[v].is_subset(lists[v]));
    let proper = g.edges().iter().all(|&(a, b)| phi[a].is_disjoint(phi[b]));
    Ok(sizes_ok && within_lists && proper)
}

fn check_params(a: usize, universe: usize) -> Result<(), ModelError> {
    if a == 0 {
        return Err(ModelError::InvalidParams("list width must be positive".into()));
    }
    if universe < a {
        return Err(ModelError::InvalidParams(format!("universe size {universe} < width {a}")));
    }
    if universe > ColourSet::CAPACITY as usize {
        return Err(ModelError::InvalidParams(format!(
            "universe size {universe} exceeds {}",
            ColourSet::CAPACITY
        )));
    }
    Ok(())
}

fn random_subset<R: Rng>(rng: &mut R, universe: usize, a: usize) -> ColourSet {
    sample(rng, universe, a).into_iter().map(|i| Colour(i as u32)).collect()
}

/// Independent uniform `a`-subsets of `{0..universe-1}`, deterministic in `seed`.
pub fn random_assignment(g: &Graph, a: usize, universe: usize, seed: u64) -> Result<ListAssignment, ModelError> {
    check_params(a, universe)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lists = (0..g.vertex_count()).map(|_| random_subset(&mut rng, universe, a)).collect();
    ListAssignment::uniform(lists, a)
}

/// Largest universe the adversarial sweep draws from.
pub const SWEEP_UNIVERSE_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SweepMode {
    Uniform,
    HubOverlap,
    Perturbed,
}

/// Endless deterministic stream of `a`-list assignments. The first item has
/// identical lists; later items cycle through universe sizes from `a` up to
/// `min(a·|V|, 64)` and mix uniform draws with assignments whose hub lists
/// (vertices of degree at least 3) are shared by many other vertices.
#[derive(Clone, Debug)]
pub struct AdversarialSweep {
    n: usize,
    hubs: Vec<usize>,
    a: usize,
    cap: usize,
    index: usize,
    rng: ChaCha8Rng,
}

pub fn adversarial_sweep(g: &Graph, a: usize, seed: u64) -> AdversarialSweep {
    let n = g.vertex_count();
    let cap = (a * n).min(SWEEP_UNIVERSE_CAP).max(a);
    assert!(cap <= ColourSet::CAPACITY as usize, "list width {a} too large");
    AdversarialSweep {
        n,
        hubs: (0..n).filter(|&v| g.degree(v) >= 3).collect(),
        a,
        cap,
        index: 0,
        rng: ChaCha8Rng::seed_from_u64(seed),
    }
}

impl AdversarialSweep {
    fn universe_for(&self, k: usize) -> usize {
        // Half the items sit in the overlap-heavy band [a, 2a], the rest sweep
        // the whole range.
        let span = self.cap - self.a + 1;
        let band = (self.a + 1).min(span);
        if k % 2 == 1 {
            self.a + (k / 2) % band
        } else {
            self.a + (k / 2) % span
        }
    }

    fn draw(&mut self, universe: usize, mode: SweepMode) -> Vec<ColourSet> {
        let (n, a) = (self.n, self.a);
        let rng = &mut self.rng;
        match mode {
            SweepMode::Uniform => (0..n).map(|_| random_subset(rng, universe, a)).collect(),
            SweepMode::HubOverlap => {
                let base = random_subset(rng, universe, a);
                let rest = ColourSet::range(universe as u32).difference(base);
                (0..n)
                    .map(|v| {
                        if self.hubs.contains(&v) {
                            return base;
                        }
                        let keep = rng.gen_range(0..=a).max(a.saturating_sub(rest.len()));
                        mix(rng, base, keep, rest, a - keep)
                    })
                    .collect()
            }
            SweepMode::Perturbed => {
                let base = random_subset(rng, universe, a);
                let rest = ColourSet::range(universe as u32).difference(base);
                let max_swap = a.min(2).min(rest.len());
                (0..n)
                    .map(|_| {
                        let swap = rng.gen_range(0..=max_swap);
                        mix(rng, base, a - swap, rest, swap)
                    })
                    .collect()
            }
        }
    }
}

/// `from_a` random colours of `a` together with `from_b` random colours of `b`.
fn mix<R: Rng>(rng: &mut R, a: ColourSet, from_a: usize, b: ColourSet, from_b: usize) -> ColourSet {
    let pick = |rng: &mut R, s: ColourSet, k: usize| -> ColourSet {
        let items: Vec<Colour> = s.iter().collect();
        sample(rng, items.len(), k).into_iter().map(|i| items[i]).collect()
    };
    pick(rng, a, from_a).union(pick(rng, b, from_b))
}

impl Iterator for AdversarialSweep {
    type Item = ListAssignment;

    fn next(&mut self) -> Option<ListAssignment> {
        let k = self.index;
        self.index += 1;
        if k == 0 {
            return Some(ListAssignment::constant(self.n, ColourSet::range(self.a as u32)));
        }
        let universe = self.universe_for(k);
        let mode = match self.rng.gen_range(0..3) {
            0 => SweepMode::Uniform,
            1 => SweepMode::HubOverlap,
            _ => SweepMode::Perturbed,
        };
        let lists = self.draw(universe, mode);
        Some(ListAssignment::uniform(lists, self.a).expect("sweep keeps widths exact"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{realize, FamilySpec};
    use proptest::prelude::*;

    fn set(ids: &[u32]) -> ColourSet {
        ColourSet::from_ids(ids.iter().copied())
    }

    #[test]
    fn even_cycle_alternating_colouring_is_valid() {
        let g = Graph::cycle(4);
        let lists = ListAssignment::constant(4, set(&[1, 2]));
        let phi = FoldColouring::new(vec![set(&[1]), set(&[2]), set(&[1]), set(&[2])], 1);
        assert!(validate(&g, &lists, &phi).unwrap());
    }

    #[test]
    fn triangle_has_no_valid_two_colouring() {
        let g = Graph::cycle(3);
        let lists = ListAssignment::constant(3, set(&[1, 2]));
        let singles = [set(&[1]), set(&[2])];
        for i in 0..8usize {
            let chosen = (0..3).map(|v| singles[i >> v & 1]).collect();
            assert!(!validate(&g, &lists, &FoldColouring::new(chosen, 1)).unwrap());
        }
    }

    #[test]
    fn two_fold_path() {
        let g = Graph::path(3);
        let lists = ListAssignment::constant(3, set(&[1, 2, 3, 4]));
        let phi = FoldColouring::new(vec![set(&[1, 2]), set(&[3, 4]), set(&[1, 2])], 2);
        assert!(validate(&g, &lists, &phi).unwrap());
        let short = FoldColouring::new(vec![set(&[1]), set(&[3, 4]), set(&[1, 2])], 2);
        assert!(!validate(&g, &lists, &short).unwrap());
    }

    #[test]
    fn domain_mismatch() {
        let g = Graph::path(3);
        let lists = ListAssignment::constant(2, set(&[1, 2]));
        let phi = FoldColouring::new(vec![set(&[1]), set(&[2])], 1);
        assert!(matches!(validate(&g, &lists, &phi), Err(ModelError::DomainMismatch(_))));
    }

    #[test]
    fn random_assignment_contract() {
        let g = Graph::cycle(5);
        let forced = random_assignment(&g, 4, 4, 99).unwrap();
        assert!(forced.lists().iter().all(|l| *l == set(&[0, 1, 2, 3])));
        assert_eq!(random_assignment(&g, 4, 9, 7).unwrap(), random_assignment(&g, 4, 9, 7).unwrap());
        assert_ne!(random_assignment(&g, 4, 40, 7).unwrap(), random_assignment(&g, 4, 40, 8).unwrap());
        assert!(matches!(random_assignment(&g, 4, 3, 1), Err(ModelError::InvalidParams(_))));
    }

    #[test]
    fn sweep_starts_with_identical_lists_and_is_deterministic() {
        let g = realize(&FamilySpec::theta(&[2, 4, 6])).unwrap();
        let first = adversarial_sweep(&g, 8, 3).next().unwrap();
        assert!(first.lists().iter().all(|l| *l == first[0]));
        let a: Vec<_> = adversarial_sweep(&g, 8, 3).take(200).collect();
        let b: Vec<_> = adversarial_sweep(&g, 8, 3).take(200).collect();
        assert_eq!(a, b);
        for l in &a {
            assert_eq!(l.declared_width(), Some(8));
            assert!(l.lists().iter().all(|s| s.len() == 8));
            assert!(l.palette().max().is_none_or(|c| (c.0 as usize) < SWEEP_UNIVERSE_CAP));
        }
        // every universe size from a to the cap shows up
        let max_seen = a.iter().map(|l| l.palette().max().unwrap().0).max().unwrap();
        assert!(max_seen as usize >= SWEEP_UNIVERSE_CAP - 8);
    }

    proptest! {
        #[test]
        fn validate_is_monotone_under_list_growth(seed in any::<u64>(), extra in proptest::collection::vec(0u32..20, 5)) {
            let g = Graph::path(5);
            let lists = random_assignment(&g, 4, 8, seed).unwrap();
            // greedy 1-fold colouring from the lists, when one exists
            let mut chosen = Vec::new();
            for v in 0..5 {
                let banned = if v == 0 { ColourSet::empty() } else { chosen[v - 1] };
                chosen.push(lists[v].difference(banned).smallest(1).unwrap());
            }
            let phi = FoldColouring::new(chosen, 1);
            prop_assert!(validate(&g, &lists, &phi).unwrap());
            let grown: Vec<_> = (0..5).map(|v| lists[v].union(ColourSet::from_ids([extra[v]]))).collect();
            prop_assert!(validate(&g, &ListAssignment::reduced(grown), &phi).unwrap());
        }
    }
}
