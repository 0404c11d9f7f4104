use gdw_core::btransform::{
    beval, involution_check, make_handle, transformed_handle, Classification, FunctionHandle, HandleKind,
};
use gdw_core::config::{OptimizerConfig, Tolerances};
use gdw_core::graph::Graph;
use gdw_core::invariants::{alpha, alpha_star, lovasz_theta, WeightVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn cfg() -> OptimizerConfig {
    OptimizerConfig::default()
}

fn handle(kind: HandleKind) -> FunctionHandle {
    make_handle(kind, &tol()).unwrap()
}

fn points(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..n).map(|_| rng.gen_range(0.0..2.0)).collect()).collect()
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn pairs() -> Vec<(FunctionHandle, FunctionHandle)> {
    let g = Graph::cycle(5).unwrap();
    vec![
        (handle(HandleKind::NormP { n: 3, r: f64::INFINITY }), handle(HandleKind::NormP { n: 3, r: 2.0 })),
        (handle(HandleKind::NormP { n: 3, r: 2.0 }), handle(HandleKind::NormP { n: 3, r: 1.0 })),
        (handle(HandleKind::GraphAlpha(g.clone())), handle(HandleKind::GraphTheta(g.clone()))),
        (handle(HandleKind::GraphTheta(g.clone())), handle(HandleKind::GraphAlphaStar(g))),
    ]
}

#[test]
fn transform_reverses_order() {
    let tol = cfg().tol;
    for (f, g) in pairs() {
        let n = f.dim();
        for p in points(n, 64, 1) {
            assert!(f.eval(&p).unwrap() <= g.eval(&p).unwrap() + 1e-9, "{} ≰ {}", f.name(), g.name());
        }
        for p in points(n, 16, 2) {
            let bf = beval(&f, &p, &cfg()).unwrap().value;
            let bg = beval(&g, &p, &cfg()).unwrap().value;
            assert!(bf >= bg - tol * bg, "{} vs {} at {p:?}: {bf} < {bg}", f.name(), g.name());
        }
    }
}

#[test]
fn transform_stays_in_class() {
    let g = Graph::path(4).unwrap();
    for f in [
        handle(HandleKind::NormP { n: 3, r: 2.0 }),
        handle(HandleKind::NormP { n: 3, r: 1.0 }),
        handle(HandleKind::Linear { a: vec![1.0, 2.0, 0.5] }),
        handle(HandleKind::MaxLinear { a: vec![1.0, 3.0] }),
        handle(HandleKind::GraphAlpha(g.clone())),
        handle(HandleKind::GraphAlphaStar(g)),
    ] {
        let b = transformed_handle(&f, &cfg());
        b.audit(&tol()).unwrap_or_else(|e| panic!("B({}) failed audit: {e}", f.name()));
        let (c1, c2) = f.bounds().unwrap();
        assert_eq!(b.bounds(), Some((1.0 / c2, 1.0 / c1)));
        assert!(b.is_convex() && b.is_monotone());
    }
}

#[test]
fn transform_is_lipschitz() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tol = cfg().tol;
    for f in [
        handle(HandleKind::NormP { n: 3, r: 1.0 }),
        handle(HandleKind::Linear { a: vec![1.0, 2.0, 0.5] }),
        handle(HandleKind::GraphAlpha(Graph::path(3).unwrap())),
    ] {
        let (c1, _) = f.bounds().unwrap();
        for p in points(3, 12, 4) {
            let q: Vec<f64> = p.iter().map(|x| (x + rng.gen_range(-0.3..0.3)).max(0.0)).collect();
            let bp = beval(&f, &p, &cfg()).unwrap().value;
            let bq = beval(&f, &q, &cfg()).unwrap().value;
            let d: Vec<f64> = p.iter().zip(&q).map(|(a, b)| a - b).collect();
            assert!((bp - bq).abs() <= norm(&d) / c1 + 2.0 * tol * (1.0 + bp.max(bq)), "{}", f.name());
        }
    }
}

#[test]
fn duality_identities_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..12 {
        let n = rng.gen_range(1..=6);
        let g = random_graph(&mut rng, n);
        let gc = g.complement();
        let p: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
        let w = WeightVector::new(p.clone()).unwrap();
        let checks = [
            (alpha(&g, &w).unwrap(), HandleKind::GraphAlphaStar(gc.clone())),
            (alpha_star(&g, &w, &tol()).unwrap(), HandleKind::GraphAlpha(gc.clone())),
            (lovasz_theta(&g, &w, &tol()).unwrap(), HandleKind::GraphTheta(gc.clone())),
        ];
        for (lhs, kind) in checks {
            let rhs = beval(&handle(kind), &p, &cfg()).unwrap().value;
            assert!((lhs - rhs).abs() <= 1e-2 * lhs, "{lhs} vs {rhs} on {:?}", g.edges().collect::<Vec<_>>());
        }
    }
}

#[test]
fn invariant_class_is_convex() {
    let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
    let hs = [
        handle(HandleKind::GraphAlpha(g.clone())),
        handle(HandleKind::GraphTheta(g.clone())),
        handle(HandleKind::GraphAlphaStar(g)),
    ];
    let samples = points(4, 2, 8);
    for i in 0..3 {
        for j in i + 1..3 {
            for t in [0.25, 0.5, 0.75] {
                let mix = FunctionHandle::combination(&[(t, hs[i].clone()), (1.0 - t, hs[j].clone())]).unwrap();
                let r = involution_check(&mix, &samples, &cfg()).unwrap();
                assert_eq!(r.classification, Classification::FixedPointConsistent, "{}: {r:?}", mix.name());
            }
        }
    }
}
