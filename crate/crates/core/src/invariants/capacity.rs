use serde::Serialize;

use super::{alpha, lovasz_theta, BoundInterval, WeightVector};
use crate::btransform::{beval, make_handle, HandleKind};
use crate::config::{OptimizerConfig, Tolerances};
use crate::error::{Error, Result};
use crate::graph::{power_size, Graph};

/// `α_{G^⊠k}(p^{⊗k})^{1/k}`, a lower bound on the weighted Shannon capacity
/// at every level by supermultiplicativity.
pub fn capacity_lower_bound(g: &Graph, p: &WeightVector, k: usize, budget: usize) -> Result<f64> {
    p.check_len(g.n())?;
    check_budget(g.n(), k, budget)?;
    let power = g.strong_power(k, budget)?;
    let a = alpha(&power, &p.tensor_power(k))?;
    Ok(a.powf(1.0 / k as f64))
}

/// Lower bounds for levels `1..=kmax`, in order.
pub fn capacity_levels(g: &Graph, p: &WeightVector, kmax: usize, budget: usize) -> Result<Vec<f64>> {
    if kmax == 0 {
        return Err(Error::InvalidInput("kmax must be >= 1".into()));
    }
    check_budget(g.n(), kmax, budget)?;
    (1..=kmax)
        .map(|k| capacity_lower_bound(g, p, k, budget))
        .collect()
}

fn check_budget(n: usize, k: usize, budget: usize) -> Result<()> {
    let required = power_size(n, k);
    if required > budget as u128 {
        return Err(Error::Budget { required, budget });
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct CapacityBounds {
    pub levels: Vec<f64>,
    pub interval: BoundInterval,
}

/// Best finite-level lower bound against the Lovász upper bound.
pub fn capacity_bounds(g: &Graph, p: &WeightVector, kmax: usize, tol: &Tolerances) -> Result<CapacityBounds> {
    let levels = capacity_levels(g, p, kmax, tol.vertex_budget)?;
    let lower = levels.iter().copied().fold(0.0, f64::max);
    let upper = lovasz_theta(g, p, tol)?;
    Ok(CapacityBounds {
        levels,
        interval: BoundInterval::new(lower, upper),
    })
}

/// Bounds on the dual capacity `𝔅Θ_Ḡ(p)`. `𝔅` reverses order, so the
/// Lovász function of the complement (above `Θ_Ḡ`) gives the lower end and
/// the best finite-level capacity function of the complement (below
/// `Θ_Ḡ`) the upper end. Both ends are numerical transforms; the upper
/// function is not convex for `kmax > 1`, so that end is a best-found value.
pub fn dual_capacity_bounds(
    g: &Graph,
    p: &WeightVector,
    kmax: usize,
    tol: &Tolerances,
    cfg: &OptimizerConfig,
) -> Result<BoundInterval> {
    p.check_len(g.n())?;
    check_budget(g.n(), kmax, tol.vertex_budget)?;
    let gc = g.complement();
    let theta = make_handle(HandleKind::GraphTheta(gc.clone()), tol)?;
    let lower_fn = make_handle(HandleKind::CapacityLower { graph: gc, kmax }, tol)?;
    let lower = beval(&theta, p.as_slice(), cfg)?.value;
    let upper = beval(&lower_fn, p.as_slice(), cfg)?.value;
    Ok(BoundInterval::new(lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn c5_levels() {
        let c5 = Graph::cycle(5).unwrap();
        let one = WeightVector::ones(5);
        assert_eq!(capacity_lower_bound(&c5, &one, 1, 4096).unwrap(), 2.0);
        let l2 = capacity_lower_bound(&c5, &one, 2, 4096).unwrap();
        assert!((l2 - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn complete_graph_levels_stay_one() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(capacity_lower_bound(&k3, &WeightVector::ones(3), 2, 4096).unwrap(), 1.0);
    }

    #[test]
    fn c5_interval_collapses() {
        let b = capacity_bounds(&Graph::cycle(5).unwrap(), &WeightVector::ones(5), 2, &tol()).unwrap();
        assert!((b.interval.lower - 5f64.sqrt()).abs() < 1e-4);
        assert!((b.interval.upper - 5f64.sqrt()).abs() < 1e-4);
        assert!(b.interval.is_consistent(1e-6));
        assert_eq!(b.levels.len(), 2);
    }

    #[test]
    fn small_intervals() {
        let k2 = capacity_bounds(&Graph::complete(2).unwrap(), &WeightVector::ones(2), 2, &tol()).unwrap();
        assert!((k2.interval.lower - 1.0).abs() < 1e-9 && (k2.interval.upper - 1.0).abs() < 1e-6);
        let e2 = capacity_bounds(&Graph::empty(2).unwrap(), &WeightVector::ones(2), 1, &tol()).unwrap();
        assert!((e2.interval.lower - 2.0).abs() < 1e-9 && (e2.interval.upper - 2.0).abs() < 1e-6);
    }

    #[test]
    fn budget_is_enforced() {
        let c5 = Graph::cycle(5).unwrap();
        let err = capacity_levels(&c5, &WeightVector::ones(5), 9, 4096).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }

    #[test]
    fn levels_nondecreasing_on_small_graphs() {
        for g in [Graph::cycle(5).unwrap(), Graph::path(4).unwrap(), Graph::cycle(4).unwrap()] {
            let n = g.n();
            let p = WeightVector::new((0..n).map(|i| 0.5 + i as f64 * 0.25).collect()).unwrap();
            let levels = capacity_levels(&g, &p, 2, 4096).unwrap();
            assert!(levels[1] >= levels[0] - 1e-12, "{levels:?}");
        }
    }
}
