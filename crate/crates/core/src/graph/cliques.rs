use super::{Graph, VertexSet};

/// All maximal cliques, each exactly once, sorted by their vertex lists.
///
/// Bron–Kerbosch with Tomita pivoting: the pivot maximizes
/// `|P ∩ N(u)|` over `u ∈ P ∪ X`.
pub fn maximal_cliques(g: &Graph) -> Vec<VertexSet> {
    let n = g.n();
    let mut out = Vec::new();
    let mut r = VertexSet::new(n);
    expand(g, &mut r, VertexSet::full(n), VertexSet::new(n), &mut out);
    out.sort_by_cached_key(VertexSet::to_vec);
    out
}

fn expand(g: &Graph, r: &mut VertexSet, mut p: VertexSet, mut x: VertexSet, out: &mut Vec<VertexSet>) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let pivot = p
        .union(&x)
        .iter()
        .max_by_key(|&u| (p.intersection_len(g.neighbors(u)), std::cmp::Reverse(u)))
        .expect("P is non-empty");
    let candidates = p.difference(g.neighbors(pivot));
    for v in &candidates {
        let nv = g.neighbors(v);
        r.insert(v);
        expand(g, r, p.intersection(nv), x.intersection(nv), out);
        r.remove(v);
        p.remove(v);
        x.insert(v);
    }
}

/// Maximal independent sets, i.e. maximal cliques of the complement.
pub fn maximal_independent_sets(g: &Graph) -> Vec<VertexSet> {
    maximal_cliques(&g.complement())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sets(v: &[VertexSet]) -> Vec<Vec<usize>> {
        v.iter().map(VertexSet::to_vec).collect()
    }

    /// Brute force over all 2^n subsets.
    fn brute_maximal_cliques(g: &Graph) -> Vec<Vec<usize>> {
        let n = g.n();
        let cliques: Vec<u32> = (1u32..1 << n)
            .filter(|&m| {
                (0..n).all(|u| {
                    (0..n).all(|v| u == v || m >> u & 1 == 0 || m >> v & 1 == 0 || g.is_adjacent(u, v))
                })
            })
            .collect();
        let mut out: Vec<Vec<usize>> = cliques
            .iter()
            .filter(|&&m| !cliques.iter().any(|&o| o != m && o & m == m))
            .map(|&m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
            .collect();
        out.sort();
        out
    }

    #[test]
    fn complete_graph_has_one_clique() {
        assert_eq!(sets(&maximal_cliques(&Graph::complete(3).unwrap())), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn c5_cliques_are_its_edges() {
        assert_eq!(
            sets(&maximal_cliques(&Graph::cycle(5).unwrap())),
            vec![vec![0, 1], vec![0, 4], vec![1, 2], vec![2, 3], vec![3, 4]]
        );
    }

    #[test]
    fn empty_graph_cliques_are_singletons() {
        assert_eq!(
            sets(&maximal_cliques(&Graph::empty(3).unwrap())),
            vec![vec![0], vec![1], vec![2]]
        );
    }

    #[test]
    fn independent_set_examples() {
        assert_eq!(
            sets(&maximal_independent_sets(&Graph::empty(3).unwrap())),
            vec![vec![0, 1, 2]]
        );
        assert_eq!(
            sets(&maximal_independent_sets(&Graph::complete(3).unwrap())),
            vec![vec![0], vec![1], vec![2]]
        );
        assert_eq!(
            sets(&maximal_independent_sets(&Graph::cycle(5).unwrap())),
            vec![vec![0, 2], vec![0, 3], vec![1, 3], vec![1, 4], vec![2, 4]]
        );
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
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
                Graph::from_edges(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn matches_brute_force(g in arb_graph(7)) {
            prop_assert_eq!(sets(&maximal_cliques(&g)), brute_maximal_cliques(&g));
        }

        #[test]
        fn independent_sets_are_cliques_of_complement(g in arb_graph(7)) {
            for s in maximal_independent_sets(&g) {
                prop_assert!(g.is_independent(&s));
            }
            prop_assert_eq!(
                sets(&maximal_independent_sets(&g)),
                brute_maximal_cliques(&g.complement())
            );
        }

        #[test]
        fn complement_involution(g in arb_graph(9)) {
            prop_assert_eq!(g.complement().complement(), g);
        }

        #[test]
        fn strong_product_degrees(g1 in arb_graph(4), g2 in arb_graph(4)) {
            let p = g1.strong_product(&g2);
            prop_assert_eq!(p.n(), g1.n() * g2.n());
            for u in 0..g1.n() {
                for v in 0..g2.n() {
                    prop_assert_eq!(
                        p.degree(u * g2.n() + v),
                        (g1.degree(u) + 1) * (g2.degree(v) + 1) - 1
                    );
                }
            }
        }
    }
}
