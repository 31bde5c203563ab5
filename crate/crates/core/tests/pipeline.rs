use listchrom::lists::random_assignment;
use listchrom::path::{colour_path, decide_colourable};
use listchrom::theta::merge_reduce;
use listchrom::{colour_family, realize, validate, ColourSet, FamilySpec, Graph, ListAssignment, PathInstance};
use proptest::prelude::*;

fn families() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        Just(FamilySpec::TwoCyclesShared { p: 4, q: 4 }),
        Just(FamilySpec::TwoCyclesShared { p: 4, q: 6 }),
        Just(FamilySpec::TwoCyclesJoined { p: 4, q: 6, path_len: 2 }),
        Just(FamilySpec::TwoCyclesJoined { p: 4, q: 4, path_len: 1 }),
        Just(FamilySpec::theta(&[2, 4, 4])),
        Just(FamilySpec::theta(&[2, 4, 6])),
        Just(FamilySpec::theta(&[1, 3, 3])),
        Just(FamilySpec::theta(&[1, 3, 5])),
        Just(FamilySpec::theta(&[1, 5, 5])),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn family_colourings_are_valid(spec in families(), m in 1usize..=2, spread in 0usize..=8, seed in any::<u64>()) {
        let g = realize(&spec).unwrap();
        let lists = random_assignment(&g, 4 * m, 4 * m + spread, seed).unwrap();
        let phi = colour_family(&spec, &lists, m).unwrap();
        prop_assert_eq!(phi.fold, 2 * m);
        prop_assert!(validate(&g, &lists, &phi).unwrap());
    }

    #[test]
    fn merge_lift_then_pull_back_is_valid(b in 1usize..=3, c in 1usize..=3, m in 1usize..=2, seed in any::<u64>()) {
        let spec = FamilySpec::theta(&[1, 2 * b + 1, 2 * c + 1]);
        let red = merge_reduce(&spec).unwrap();
        let g = realize(&spec).unwrap();
        let lists = random_assignment(&g, 4 * m, 6 * m, seed).unwrap();
        let lifted = ListAssignment::uniform(red.lift.iter().map(|&v| lists[v]).collect(), 4 * m).unwrap();
        let phi = colour_family(&red.reduced, &lifted, m).unwrap();
        let chosen: Vec<ColourSet> = red.pull_back.iter().map(|&w| phi.chosen[w]).collect();
        let pulled = listchrom::FoldColouring::new(chosen, 2 * m);
        prop_assert!(validate(&g, &lists, &pulled).unwrap());
    }

    #[test]
    fn path_colourings_validate(m in 1usize..=2, n in 1usize..=9, spread in 0u32..=6, seed in any::<u64>()) {
        let g = Graph::path(n);
        let lists = random_assignment(&g, 4 * m, 4 * m + spread as usize, seed).unwrap();
        let p = PathInstance::new(m, lists.lists().to_vec());
        // 4m-lists on a path always leave room for 2m colours
        prop_assert!(decide_colourable(&p).unwrap());
        let phi = colour_path(&p).unwrap();
        prop_assert!(validate(&g, &lists, &phi).unwrap());
    }
}
