use listchrom::colour::IndexCombinations;
use listchrom::path::{damage, profile};
use listchrom::theta::{classify_couples, find_simple_pair, CoupleClass};
use listchrom::{decompose, Colour, ColourSet, FamilySpec, ListAssignment, PathInstance};
use proptest::prelude::*;
use proptest::sample::subsequence;

/// Λ, X̂₁, X̂ₙ straight from their definitions (vertices numbered from 1).
fn endpoint_sets(lists: &[ColourSet]) -> (ColourSet, ColourSet, ColourSet) {
    let lambda = lists.iter().fold(lists[0], |acc, &l| acc.intersection(l));
    let absent_at = |c: Colour| (1..=lists.len()).filter(move |&i| !lists[i - 1].contains(c));
    let hat_first = ColourSet::from_ids(
        lists[0].difference(lambda).iter().filter(|&c| absent_at(c).next().is_some_and(|i| i % 2 == 0)).map(|c| c.0),
    );
    let hat_last = ColourSet::from_ids(
        lists[lists.len() - 1]
            .difference(lambda)
            .iter()
            .filter(|&c| absent_at(c).next_back().is_some_and(|i| i % 2 == 0))
            .map(|c| c.0),
    );
    (lambda, hat_first, hat_last)
}

fn trichotomy(c: Colour, c2: Colour, lists: &[ColourSet]) -> usize {
    let (lambda, hat_first, hat_last) = endpoint_sets(lists);
    let in_a = hat_first.contains(c) || lambda.contains(c);
    let in_b = hat_last.contains(c2) || lambda.contains(c2);
    let shared_common = c == c2 && lambda.contains(c);
    match (in_a, in_b) {
        (true, true) if !shared_common => 2,
        (true, true) => 1,
        (true, false) | (false, true) => 1,
        (false, false) => 0,
    }
}

fn list_of(width: usize, universe: u32) -> impl Strategy<Value = ColourSet> {
    subsequence((0..universe).collect::<Vec<_>>(), width).prop_map(ColourSet::from_ids)
}

/// Θ-shaped instances with `4m`-lists drawn from a small universe so that
/// heavy, light and safe couples all occur.
fn theta_instance() -> impl Strategy<Value = (FamilySpec, usize, ListAssignment)> {
    let specs = prop_oneof![
        Just(FamilySpec::theta(&[2, 4, 4])),
        Just(FamilySpec::theta(&[2, 4, 8])),
        Just(FamilySpec::theta(&[2, 4, 6])),
        Just(FamilySpec::theta(&[2, 6, 6])),
    ];
    (specs, 1usize..=2, 0u32..=4).prop_flat_map(|(spec, m, extra)| {
        let n = spec.vertex_count();
        let universe = 4 * m as u32 + extra;
        proptest::collection::vec(list_of(4 * m, universe), n)
            .prop_map(move |lists| (spec.clone(), m, ListAssignment::uniform(lists, 4 * m).unwrap()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn couple_classes_follow_endpoint_membership((spec, m, lists) in theta_instance()) {
        let dec = decompose(&spec).unwrap();
        let (table, couples) = classify_couples(&dec, &lists, m).unwrap();
        for (i, path) in couples.paths.iter().enumerate() {
            let p = dec.path_instance(&lists, i, m);
            for (j, &(c, c2)) in table.couples.iter().enumerate() {
                let expected = trichotomy(c, c2, &p.lists);
                prop_assert_eq!(path.classes[j].damage(), expected, "path {} couple {}", i, j);
                let direct = damage(&p, ColourSet::singleton(c), ColourSet::singleton(c2));
                prop_assert_eq!(direct, expected);
            }
            let count = |k| path.classes.iter().filter(|&&c| c == k).count();
            prop_assert_eq!(path.heavy, count(CoupleClass::Heavy));
            prop_assert_eq!(path.light, count(CoupleClass::Light));
            prop_assert_eq!(path.safe, count(CoupleClass::Safe));
        }
    }

    #[test]
    fn simple_pair_damage_is_additive((spec, m, lists) in theta_instance(), pick in any::<proptest::sample::Index>()) {
        let dec = decompose(&spec).unwrap();
        let (table, couples) = classify_couples(&dec, &lists, m).unwrap();
        let masks: Vec<u128> = IndexCombinations::new(table.len(), 2 * m).collect();
        let pair = table.pair(masks[pick.index(masks.len())]);
        prop_assert_eq!(pair.s.len(), 2 * m);
        let counts = couples.pair_counts(&pair);
        for (i, c) in counts.iter().enumerate() {
            let p = dec.path_instance(&lists, i, m);
            let direct = damage(&p, pair.s, pair.t);
            let summed: usize = pair
                .index_set
                .iter()
                .map(|&j| {
                    let (a, b) = table.couples[j];
                    damage(&p, ColourSet::singleton(a), ColourSet::singleton(b))
                })
                .sum();
            prop_assert_eq!(direct, summed);
            prop_assert_eq!(c.damage(), direct);
            prop_assert_eq!(c.heavy + c.light + c.safe, 2 * m);
        }
    }

    #[test]
    fn simple_pair_fits_every_slack((spec, m, lists) in theta_instance()) {
        let dec = decompose(&spec).unwrap();
        let pair = find_simple_pair(&dec, &lists, m).unwrap();
        prop_assert_eq!(pair.size(), 2 * m);
        prop_assert!(pair.s.is_subset(lists[dec.hubs[0]]));
        prop_assert!(pair.t.is_subset(lists[dec.hubs[1]]));
        for i in 0..dec.internal_paths.len() {
            let p: PathInstance = dec.path_instance(&lists, i, m);
            let slack = profile(&p).s_l as i64 - p.demand() as i64;
            prop_assert!(damage(&p, pair.s, pair.t) as i64 <= slack);
        }
    }
}
