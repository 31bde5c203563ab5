use listchrom::graph::Kind;
use listchrom::oracle::exhaustive_choosable;
use listchrom::{classify, core, realize, FamilySpec};
use proptest::prelude::*;

/// Every valid family member on at most `max_vertices` vertices.
fn small_specs(max_vertices: usize) -> Vec<FamilySpec> {
    let mut specs = Vec::new();
    for n in 3..=max_vertices {
        specs.push(FamilySpec::OddCycle(n));
        specs.push(FamilySpec::EvenCycle(n));
    }
    for p in [4, 6] {
        for q in [4, 6] {
            specs.push(FamilySpec::TwoCyclesShared { p, q });
            specs.push(FamilySpec::TwoCyclesJoined { p, q, path_len: 1 });
        }
    }
    let max_len = max_vertices;
    for a in 1..=max_len {
        for b in a..=max_len {
            for c in b..=max_len {
                specs.push(FamilySpec::theta(&[a, b, c]));
                for d in c..=max_len {
                    specs.push(FamilySpec::theta(&[a, b, c, d]));
                }
            }
        }
    }
    specs.retain(|s| s.validate().is_ok() && s.vertex_count() <= max_vertices);
    specs
}

#[test]
fn symbolic_classification_matches_exhaustive_two_choosability() {
    let specs = small_specs(6);
    // C3..C6, Θ(1,2,2) .. Θ(2,2,2,2)
    assert!(specs.len() >= 10, "{specs:?}");
    for spec in &specs {
        let g = realize(spec).unwrap();
        let symbolic = classify(spec).kind() == Kind::TwoChoosable;
        let exhaustive = exhaustive_choosable(&g, 2, 1).unwrap();
        assert_eq!(symbolic, exhaustive, "{spec}");
    }
}

#[test]
fn realized_family_members_are_their_own_core() {
    for spec in small_specs(8) {
        let g = realize(&spec).unwrap();
        assert_eq!(core(&g).vertex_count(), g.vertex_count(), "{spec}");
    }
}

proptest! {
    #[test]
    fn even_thetas_with_long_paths_are_case_four(r in 1usize..=3, s in 2usize..=4, t in 2usize..=4) {
        let spec = FamilySpec::theta(&[2 * r, 2 * s, 2 * t]);
        let json = serde_json::to_value(classify(&spec)).unwrap();
        prop_assert_eq!(&json["kind"], "threeChoiceCritical");
        prop_assert_eq!(&json["case"], 4);
        prop_assert_eq!(&json["known42Choosable"], r == 1);
    }

    #[test]
    fn core_is_idempotent(n in 3usize..9, extra in proptest::collection::vec((0usize..16, 0usize..16), 0..10)) {
        // a cycle with pendant trees hung off it
        let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let mut next = n;
        for (anchor, _) in extra {
            edges.push((anchor % next, next));
            next += 1;
        }
        let g = listchrom::Graph::from_edges(next, &edges).unwrap();
        let once = core(&g);
        prop_assert_eq!(once.vertex_count(), n);
        let twice = core(&once);
        prop_assert_eq!(once.adjacency(), twice.adjacency());
    }
}
