mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robnet::graph::{AdjacencyMatrix, Graph};
use robnet::sim::{
    attack_sequence, connectivity_curve, controllability_curve, driver_count_ect,
    driver_count_mit, rank, AttackKind, AttackStrategy, DirectedMatching, Theorem,
};

use common::{connectivity_oracle, lcc_dfs, mit_oracle, random_graph, svd_rank};

#[test]
fn connectivity_matches_dfs_under_every_attack() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..60 {
        let n = rng.random_range(1..=40);
        let p = rng.random_range(0.0..0.3);
        let g = random_graph(&mut rng, n, p, trial % 2 == 0);
        for kind in [AttackKind::MaxDegree, AttackKind::InitialDegree, AttackKind::Random] {
            let seq = attack_sequence(&g, AttackStrategy::new(kind, trial));
            let curve = connectivity_curve(&g, &seq).unwrap();
            assert_eq!(curve.values(), connectivity_oracle(&g, &seq).as_slice());
        }
    }
}

#[test]
fn mit_matches_kuhn_at_every_step() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for trial in 0..80 {
        let n = rng.random_range(1..=20);
        let p = rng.random_range(0.0..0.4);
        let g = random_graph(&mut rng, n, p, true);
        let seq = attack_sequence(&g, AttackStrategy::new(AttackKind::MaxDegree, trial));
        let curve = controllability_curve(&g, &seq, Theorem::Mit).unwrap();
        let mut h = g.clone();
        for (i, &v) in seq.iter().enumerate() {
            let nd = mit_oracle(&h);
            assert_eq!(driver_count_mit(&h).unwrap(), nd);
            assert_eq!(curve.values()[i], nd as f64 / (n - i) as f64);
            h.remove_node(v).unwrap();
        }
    }
}

#[test]
fn warm_started_matching_stays_maximum() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..40 {
        let n = rng.random_range(2..=30);
        let mut g = random_graph(&mut rng, n, 0.15, true);
        let mut m = DirectedMatching::maximum(&g);
        while g.n_alive() > 1 {
            let live: Vec<usize> = g.live_nodes().collect();
            let v = live[rng.random_range(0..live.len())];
            g.remove_node(v).unwrap();
            m.node_removed(&g, v);
            assert_eq!(m.size(), common::kuhn_matching(&g));
            for (u, w) in m.pairs() {
                assert!(g.has_edge(u, w));
            }
        }
    }
}

#[test]
fn gf_rank_matches_svd() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..60 {
        let n = rng.random_range(1..=40);
        let p = rng.random_range(0.0..0.5);
        let mut data = vec![0u8; n * n];
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(p) {
                    data[i * n + j] = 1;
                    data[j * n + i] = 1;
                }
            }
        }
        let a = AdjacencyMatrix::from_rows(data.clone(), n).unwrap();
        assert_eq!(rank::rank(&a), svd_rank(&data, n));
    }
    // asymmetric matrices too
    for _ in 0..40 {
        let n = rng.random_range(1..=25);
        let data: Vec<u8> = (0..n * n).map(|_| u8::from(rng.random_bool(0.3))).collect();
        assert_eq!(rank::rank_01(&data, n, n), svd_rank(&data, n));
    }
}

#[test]
fn known_driver_counts() {
    let k3 = Graph::from_edges(3, false, [(0, 1), (1, 2), (0, 2)]).unwrap();
    assert_eq!(driver_count_ect(&k3).unwrap(), 1);
    let star = Graph::from_edges(4, false, [(0, 1), (0, 2), (0, 3)]).unwrap();
    assert_eq!(driver_count_ect(&star).unwrap(), 2);
    for n in [1, 5, 17] {
        assert_eq!(driver_count_ect(&Graph::new(n, false).unwrap()).unwrap(), n);
    }
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (1usize..25, any::<bool>(), any::<u64>(), 0.0f64..0.4).prop_map(|(n, d, seed, p)| {
        random_graph(&mut ChaCha8Rng::seed_from_u64(seed), n, p, d)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn curves_are_densities(g in arb_graph(), seed in any::<u64>()) {
        let seq = attack_sequence(&g, AttackStrategy::new(AttackKind::MaxDegree, seed));
        let c = connectivity_curve(&g, &seq).unwrap();
        prop_assert_eq!(c.len(), g.n_alive());
        prop_assert!(c.values().iter().all(|&v| v > 0.0 && v <= 1.0));
        prop_assert_eq!(*c.values().last().unwrap(), 1.0);
        prop_assert_eq!(c.values()[0], lcc_dfs(&g) as f64 / g.n_alive() as f64);
        let s = c.scalar().0;
        prop_assert!(s > 0.0 && s <= 1.0);
    }

    #[test]
    fn attack_is_a_permutation(g in arb_graph(), seed in any::<u64>()) {
        for kind in [AttackKind::MaxDegree, AttackKind::InitialDegree, AttackKind::Random] {
            let mut seq = attack_sequence(&g, AttackStrategy::new(kind, seed));
            prop_assert_eq!(&seq, &attack_sequence(&g, AttackStrategy::new(kind, seed)));
            seq.sort_unstable();
            prop_assert_eq!(seq, (0..g.n_alive()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn first_removal_has_max_degree(g in arb_graph(), seed in any::<u64>()) {
        let seq = attack_sequence(&g, AttackStrategy::new(AttackKind::MaxDegree, seed));
        let best = g.live_nodes().map(|v| g.total_degree(v).unwrap()).max().unwrap();
        prop_assert_eq!(g.total_degree(seq[0]).unwrap(), best);
    }

    #[test]
    fn ect_and_mit_bounds(g in arb_graph()) {
        let ect = driver_count_ect(&g).unwrap();
        prop_assert!(ect >= 1 && ect <= g.n_alive());
        if g.is_directed() {
            let mit = driver_count_mit(&g).unwrap();
            prop_assert!(mit >= 1 && mit <= g.n_alive());
        }
    }

    #[test]
    fn rank_is_transpose_invariant(seed in any::<u64>(), n in 1usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<u8> = (0..n * n).map(|_| u8::from(rng.random_bool(0.3))).collect();
        let a = AdjacencyMatrix::from_rows(data, n).unwrap();
        prop_assert_eq!(rank::rank(&a), rank::rank(&a.transpose()));
    }
}
