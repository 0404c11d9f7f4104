use gdw_core::config::Tolerances;
use gdw_core::graph::Graph;
use gdw_core::invariants::{alpha, alpha_star, capacity_levels, lovasz_theta, WeightVector};
use proptest::prelude::*;

fn graph_and_weights(max_n: usize) -> impl Strategy<Value = (Graph, Vec<f64>)> {
    (1..=max_n).prop_flat_map(|n| {
        (
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2),
            proptest::collection::vec(0.0f64..2.0, n),
        )
            .prop_map(move |(bits, w)| {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                (Graph::from_edges(n, edges).unwrap(), w)
            })
    })
}

fn w(v: &[f64]) -> WeightVector {
    WeightVector::new(v.to_vec()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn sandwich((g, p) in graph_and_weights(7)) {
        let tol = Tolerances::default();
        let a = alpha(&g, &w(&p)).unwrap();
        let t = lovasz_theta(&g, &w(&p), &tol).unwrap();
        let s = alpha_star(&g, &w(&p), &tol).unwrap();
        prop_assert!(t - a >= -1e-6, "alpha {a} > theta {t}");
        prop_assert!(s - t >= -1e-6, "theta {t} > alpha* {s}");
    }

    #[test]
    fn positive_affine((g, p) in graph_and_weights(6)) {
        let tol = Tolerances::default();
        let a = alpha(&g, &w(&p)).unwrap();
        let s = alpha_star(&g, &w(&p), &tol).unwrap();
        let t = lovasz_theta(&g, &w(&p), &tol).unwrap();
        for lambda in [0.5, 2.0, 10.0] {
            let q: Vec<f64> = p.iter().map(|x| lambda * x).collect();
            prop_assert!((alpha(&g, &w(&q)).unwrap() - lambda * a).abs() <= 1e-12 * (1.0 + lambda * a));
            prop_assert!((alpha_star(&g, &w(&q), &tol).unwrap() - lambda * s).abs() <= 1e-9 * (1.0 + lambda * s));
            prop_assert!((lovasz_theta(&g, &w(&q), &tol).unwrap() - lambda * t).abs() <= 1e-7 * (1.0 + lambda * t));
        }
    }

    #[test]
    fn monotone((g, p) in graph_and_weights(6), extra in proptest::collection::vec(0.0f64..1.0, 6)) {
        let tol = Tolerances::default();
        let q: Vec<f64> = p.iter().zip(&extra).map(|(a, b)| a + b).collect();
        prop_assert!(alpha(&g, &w(&p)).unwrap() <= alpha(&g, &w(&q)).unwrap() + 1e-12);
        prop_assert!(alpha_star(&g, &w(&p), &tol).unwrap() <= alpha_star(&g, &w(&q), &tol).unwrap() + 1e-9);
        prop_assert!(lovasz_theta(&g, &w(&p), &tol).unwrap() <= lovasz_theta(&g, &w(&q), &tol).unwrap() + 1e-7);
    }

    #[test]
    fn capacity_levels_nondecreasing((g, p) in graph_and_weights(5)) {
        let levels = capacity_levels(&g, &w(&p), 2, 4096).unwrap();
        prop_assert!(levels[1] >= levels[0] - 1e-12, "{levels:?}");
    }
}

/// Brute-force maximum weight independent set.
fn brute_alpha(g: &Graph, p: &[f64]) -> f64 {
    let n = g.n();
    (0u32..1 << n)
        .filter(|mask| {
            (0..n).all(|u| (u + 1..n).all(|v| mask >> u & 1 == 0 || mask >> v & 1 == 0 || !g.is_adjacent(u, v)))
        })
        .map(|mask| (0..n).filter(|v| mask >> v & 1 == 1).map(|v| p[v]).sum())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    /// Bipartite graphs have perfect complements, where the packing LP is
    /// integral.
    #[test]
    fn bipartite_alpha_equals_fractional(
        left in 1usize..=3,
        right in 1usize..=3,
        bits in proptest::collection::vec(any::<bool>(), 9),
        p in proptest::collection::vec(0.0f64..2.0, 6),
    ) {
        let n = left + right;
        let mut edges = Vec::new();
        for u in 0..left {
            for v in 0..right {
                if bits[u * 3 + v] {
                    edges.push((u, left + v));
                }
            }
        }
        let g = Graph::from_edges(n, edges).unwrap();
        let p = &p[..n];
        let brute = brute_alpha(&g, p);
        prop_assert!((alpha(&g, &w(p)).unwrap() - brute).abs() < 1e-12);
        let s = alpha_star(&g, &w(p), &Tolerances::default()).unwrap();
        prop_assert!((s - brute).abs() < 1e-9, "alpha* {s} vs alpha {brute}");
    }
}
