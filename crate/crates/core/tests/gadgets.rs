use std::collections::BTreeSet;

use ep_core::gadgets::*;
use ep_core::graph::{named, MultiGraph};
use ep_core::random::Rng;
use proptest::prelude::*;

fn patterns() -> Vec<MultiGraph> {
    vec![
        named::complete(3),
        named::complete(4),
        named::cycle(5),
        named::complete_bipartite(2, 3),
        named::star(3),
        named::petersen(),
    ]
}

fn random_x(g: &Gadget, size: usize, rng: &mut Rng) -> BTreeSet<usize> {
    let vs: Vec<usize> = g.graph.vertices().collect();
    let mut x = BTreeSet::new();
    while x.len() < size {
        x.insert(vs[rng.below(vs.len())]);
    }
    x
}

fn check(g: &Gadget, x: &BTreeSet<usize>) -> Result<(), TestCaseError> {
    let model = route_avoiding(g, x).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let h = g.pattern.as_ref().unwrap();
    prop_assert_eq!(model.verify(&g.graph, h), Ok(()));
    prop_assert!(model.vertices().is_disjoint(x));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn thickened_patterns_survive_small_deletions(seed in any::<u64>(), which in 0usize..6, k in 1usize..4) {
        let h = &patterns()[which];
        let g = thicken(h, k).unwrap();
        prop_assert_eq!(g.audit(), Ok(()));
        let mut rng = Rng::new(seed);
        let size = rng.below(k);
        check(&g, &random_x(&g, size, &mut rng))?;
    }

    #[test]
    fn subcubic_and_minor_variants(seed in any::<u64>(), k in 2usize..4) {
        let mut rng = Rng::new(seed);
        let cubic = thicken_subcubic(&named::complete_bipartite(3, 3), k).unwrap();
        prop_assert_eq!(cubic.audit(), Ok(()));
        prop_assert!(cubic.graph.max_degree() <= 3);
        check(&cubic, &random_x(&cubic, k - 1, &mut rng))?;
        let star = named::star(5);
        let minor = thicken_minor(&star, k).unwrap();
        prop_assert_eq!(minor.audit(), Ok(()));
        prop_assert!(minor.graph.max_degree() <= 3);
        check(&minor, &random_x(&minor, k - 1, &mut rng))?;
    }
}

#[test]
fn deleting_k_vertices_can_break_the_model() {
    // the k apices of one copy carry every route out of it
    let g = thicken(&named::complete(3), 2).unwrap();
    let apices: BTreeSet<usize> = g.copies[&0].apices.iter().copied().collect();
    assert!(route_avoiding(&g, &apices).is_err());
}

#[test]
fn grid_gadget_shape() {
    for (d, k) in [(1, 1), (2, 3), (4, 2)] {
        let g = gamma(d, k).unwrap();
        assert_eq!(g.graph.vertex_count(), d * k * (d + k - 1) + k);
        assert_eq!(g.audit(), Ok(()));
    }
    assert!(gamma(0, 2).is_err());
    assert!(thicken_subcubic(&named::complete(5), 2).is_err());
}
