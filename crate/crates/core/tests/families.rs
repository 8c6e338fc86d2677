use proptest::prelude::*;
use srg_walk::gf::prime_power;
use srg_walk::graph::{build_family, verify_srg};
use srg_walk::{Execution, GraphFamily};

fn paley_orders(limit: u64) -> Vec<u64> {
    (5..=limit)
        .filter(|&q| q % 4 == 1 && prime_power(q).is_some())
        .collect()
}

#[test]
fn every_small_paley_graph_is_strongly_regular() {
    let orders = paley_orders(200);
    assert!(orders.contains(&81) && orders.contains(&125) && orders.contains(&169));
    for q in orders {
        let f = GraphFamily::Paley { q };
        let g = build_family(&f).unwrap();
        let found = verify_srg(&g, Execution::default()).unwrap();
        assert_eq!(Some(found), f.params().unwrap(), "q={q}");
    }
}

#[test]
fn sequential_and_parallel_builds_agree() {
    for f in [
        GraphFamily::Paley { q: 61 },
        GraphFamily::LatinSquare { t: 9, d: 3 },
        GraphFamily::Triangular { m: 12 },
    ] {
        let g = build_family(&f).unwrap();
        let a = verify_srg(&g, Execution::Sequential).unwrap();
        let b = verify_srg(&g, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        let edges: Vec<_> = g.edges().collect();
        let again: Vec<_> = build_family(&f).unwrap().edges().collect();
        assert_eq!(edges, again);
    }
}

#[test]
fn complement_of_a_paley_graph_has_the_same_parameters() {
    // Paley graphs are self-complementary
    let g = build_family(&GraphFamily::Paley { q: 49 }).unwrap();
    let a = verify_srg(&g, Execution::default()).unwrap();
    let b = verify_srg(&g.complement(), Execution::default()).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn latin_and_triangular_generators_match_their_parameters(t in 3u64..12, d in 2u64..4, m in 5u64..14) {
        for f in [GraphFamily::LatinSquare { t, d }, GraphFamily::Triangular { m }] {
            let g = build_family(&f).unwrap();
            prop_assert_eq!(g.regular_degree(), Some(f.degree() as usize));
            let found = verify_srg(&g, Execution::default()).unwrap();
            prop_assert_eq!(Some(found), f.params().unwrap());
        }
    }
}
