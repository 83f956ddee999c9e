//! Property suites: randomized invariants over orders, shattering and
//! serialization, 10^4 cases per suite.

use proptest::prelude::*;

use ordervc::construct::{thm1_shattered_set, verify_thm1_star, StarMode};
use ordervc::enumerate::{all_total_orders, Family};
use ordervc::json;
use ordervc::shatter::{is_shattered, trace, verify_certificate};
use ordervc::{DirectedGraph, OrderRelation, TotalOrder};

/// Permutations of `1..=n`, cached per n.
fn permutations(n: usize) -> &'static [Vec<u32>] {
    use std::sync::OnceLock;
    static TABLE: OnceLock<Vec<Vec<Vec<u32>>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (0..=8usize)
            .map(|k| {
                if k == 0 {
                    vec![]
                } else {
                    all_total_orders(k)
                        .expect("k under cap")
                        .iter()
                        .map(|t| t.seq().to_vec())
                        .collect()
                }
            })
            .collect()
    });
    &table[n]
}

/// A random DAG on `n` vertices: pick a random permutation and keep a random
/// subset of its forward pairs, so the result is acyclic by construction.
fn dag_strategy_fixed(n: usize) -> impl Strategy<Value = DirectedGraph> {
    let pair_count = n * (n - 1) / 2;
    (
        proptest::collection::vec(any::<bool>(), pair_count),
        0..permutations(n).len(),
    )
        .prop_map(move |(keep, perm_idx)| {
            let perm = &permutations(n)[perm_idx];
            let mut edges = Vec::new();
            let mut idx = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if keep[idx] {
                        edges.push((perm[i], perm[j]));
                    }
                    idx += 1;
                }
            }
            DirectedGraph::from_edge_list(n, &edges).expect("valid pairs")
        })
}

fn dag_strategy(max_n: usize) -> impl Strategy<Value = DirectedGraph> {
    (1..=max_n).prop_flat_map(dag_strategy_fixed)
}

fn poset_strategy_fixed(n: usize) -> impl Strategy<Value = OrderRelation> {
    dag_strategy_fixed(n).prop_map(|g| g.transitive_closure().expect("acyclic by construction"))
}

fn poset_strategy(max_n: usize) -> impl Strategy<Value = OrderRelation> {
    (1..=max_n).prop_flat_map(poset_strategy_fixed)
}

/// Pair of posets sharing the same n.
fn poset_pair_strategy(max_n: usize) -> impl Strategy<Value = (OrderRelation, OrderRelation)> {
    (1..=max_n).prop_flat_map(|n| (poset_strategy_fixed(n), poset_strategy_fixed(n)))
}

/// Reference linear extension: scan labels in ascending order each round,
/// removing the first vertex whose remaining in-degree is zero.
fn naive_smallest_first_kahn(g: &DirectedGraph) -> Vec<u32> {
    let n = g.n();
    let edges = g.edges();
    let mut remaining: Vec<bool> = vec![true; n + 1];
    let mut seq = Vec::with_capacity(n);
    for _ in 0..n {
        let mut picked = 0u32;
        for v in 1..=n as u32 {
            if !remaining[v as usize] {
                continue;
            }
            let has_pred = edges.iter().any(|&(a, b)| b == v && remaining[a as usize]);
            if !has_pred {
                picked = v;
                break;
            }
        }
        assert!(picked != 0, "input must be acyclic");
        remaining[picked as usize] = false;
        seq.push(picked);
    }
    seq
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn compatibility_is_symmetric_and_reflexive((a, b) in poset_pair_strategy(6)) {
        prop_assert_eq!(a.compatible(&b).unwrap(), b.compatible(&a).unwrap());
        prop_assert!(a.compatible(&a).unwrap());
        let empty = OrderRelation::empty(a.n()).unwrap();
        prop_assert!(empty.compatible(&a).unwrap());
    }

    #[test]
    fn closure_is_idempotent(p in poset_strategy(6)) {
        let again = DirectedGraph::from_edge_list(p.n(), &p.edges())
            .unwrap()
            .transitive_closure()
            .unwrap();
        prop_assert_eq!(again, p);
    }

    #[test]
    fn topological_sort_is_a_linear_extension(g in dag_strategy(8)) {
        let t = g.topological_sort().unwrap();
        for (u, v) in g.edges() {
            prop_assert!(t.position(u).unwrap() < t.position(v).unwrap());
        }
        let reference = naive_smallest_first_kahn(&g);
        prop_assert_eq!(t.seq(), reference.as_slice());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    /// Deleting any element from a shattered ground list leaves it shattered.
    #[test]
    fn shattering_is_hereditary(
        picks in proptest::sample::subsequence((0..24usize).collect::<Vec<_>>(), 1..=4),
        delete in 0..4usize,
    ) {
        let totals = all_total_orders(4).unwrap();
        let witnesses = witness_family_n4();
        let ground: Vec<OrderRelation> =
            picks.iter().map(|&i| totals[i].to_relation()).collect();
        if let Some(cert) = is_shattered(&ground, witnesses).unwrap() {
            prop_assert!(verify_certificate(&cert).is_ok());
            let mut reduced = ground.clone();
            reduced.remove(delete % reduced.len());
            let sub = is_shattered(&reduced, witnesses).unwrap();
            prop_assert!(sub.is_some());
        }
    }

    /// Certificates survive a JSON round trip bit-for-bit and still verify.
    #[test]
    fn certificate_json_round_trip(
        picks in proptest::sample::subsequence((0..24usize).collect::<Vec<_>>(), 1..=3),
    ) {
        let totals = all_total_orders(4).unwrap();
        let witnesses = witness_family_n4();
        let ground: Vec<OrderRelation> =
            picks.iter().map(|&i| totals[i].to_relation()).collect();
        if let Some(cert) = is_shattered(&ground, witnesses).unwrap() {
            let doc = json::certificate_to_json(&cert);
            let text = serde_json::to_string(&doc).unwrap();
            let back = json::parse_certificate(&text).unwrap();
            prop_assert_eq!(&back, &cert);
            prop_assert!(verify_certificate(&back).is_ok());
        }
    }
}

fn witness_family_n4() -> &'static Family {
    use std::sync::OnceLock;
    static FAMILY: OnceLock<Family> = OnceLock::new();
    FAMILY.get_or_init(|| Family::all_partial(4).expect("n=4 under cap"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Trace of a total order over a total ground list hits exactly itself.
    #[test]
    fn total_order_traces_are_singletons(n in 2..=5usize, pick in any::<u64>()) {
        let totals = all_total_orders(n).unwrap();
        let ground: Vec<OrderRelation> =
            totals.iter().take(8).map(TotalOrder::to_relation).collect();
        let w = &ground[(pick % ground.len() as u64) as usize];
        let mask = trace(w, &ground).unwrap();
        prop_assert_eq!(mask.count_ones(), 1);
    }

    /// The flip property is tie-breaking independent: randomized topological
    /// orders for the bipartite construction still verify exhaustively.
    #[test]
    fn thm1_star_holds_under_random_tie_breaking(seed in any::<u64>()) {
        let (_, orders) = ordervc::construct::thm1_shattered_set_seeded(4, seed).unwrap();
        let report = verify_thm1_star(4, &orders, StarMode::Exhaustive).unwrap();
        prop_assert!(report.passed());
    }
}

#[test]
fn thm1_star_sampled_mode_is_seed_deterministic() {
    let (fam, _) = thm1_shattered_set(8).unwrap();
    let mode = StarMode::Sampled {
        count: 500,
        seed: 11,
    };
    let a = ordervc::construct::verify_property_star(&fam, mode).unwrap();
    let b = ordervc::construct::verify_property_star(&fam, mode).unwrap();
    assert_eq!(a.subsets_tested, b.subsets_tested);
    assert!(a.passed() && b.passed());
}
