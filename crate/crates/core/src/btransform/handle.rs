use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::opt::dirichlet_uniform;

pub type Evaluator = Arc<dyn Fn(&[f64]) -> Result<f64> + Send + Sync>;

/// Points used by [`FunctionHandle::audit`].
pub const AUDIT_POINTS: usize = 32;
const AUDIT_SCALES: [f64; 3] = [0.5, 2.0, 10.0];
const AUDIT_SEED: u64 = 0x5eed_a0d1;

/// A function `ℝⁿ₊ → ℝ₊` that is meant to be positive-homogeneous and
/// strictly positive off the origin, with declared shape flags.
///
/// Cloning is cheap; evaluators are shared and must be pure.
#[derive(Clone)]
pub struct FunctionHandle {
    name: String,
    n: usize,
    eval: Evaluator,
    convex: bool,
    monotone: bool,
    bounds: Option<(f64, f64)>,
}

impl fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionHandle")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("convex", &self.convex)
            .field("monotone", &self.monotone)
            .field("bounds", &self.bounds)
            .finish()
    }
}

impl FunctionHandle {
    /// Wraps an evaluator without auditing it; see [`FunctionHandle::audit`].
    pub fn new<F>(name: impl Into<String>, n: usize, convex: bool, monotone: bool, eval: F) -> Self
    where
        F: Fn(&[f64]) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            n,
            eval: Arc::new(eval),
            convex,
            monotone,
            bounds: None,
        }
    }

    /// Like [`FunctionHandle::new`], but evaluates `s·f(p/s)` with `s = Σp`,
    /// so the handle is homogeneous up to rounding whatever `eval` does off
    /// the simplex.
    pub fn homogeneous<F>(name: impl Into<String>, n: usize, convex: bool, monotone: bool, eval: F) -> Self
    where
        F: Fn(&[f64]) -> Result<f64> + Send + Sync + 'static,
    {
        Self::new(name, n, convex, monotone, move |p: &[f64]| {
            let s: f64 = p.iter().sum();
            if s == 0.0 {
                return Ok(0.0);
            }
            let q: Vec<f64> = p.iter().map(|x| x / s).collect();
            Ok(s * eval(&q)?)
        })
    }

    /// Declares `c1‖p‖₂ ≤ f(p) ≤ c2‖p‖₂`.
    pub fn with_bounds(mut self, c1: f64, c2: f64) -> Self {
        self.bounds = Some((c1, c2));
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        self.bounds
    }

    pub fn eval(&self, p: &[f64]) -> Result<f64> {
        check_point(p, self.n)?;
        let v = (self.eval)(p)?;
        if !v.is_finite() {
            return Err(Error::Solver(format!("{} returned non-finite value {v}", self.name)));
        }
        Ok(v)
    }

    /// `c·f`, for `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidInput(format!("scale factor must be positive, got {c}")));
        }
        let inner = self.clone();
        let mut h = Self::new(format!("{c}*{}", self.name), self.n, self.convex, self.monotone, move |p: &[f64]| {
            Ok(c * inner.eval(p)?)
        });
        h.bounds = self.bounds.map(|(a, b)| (c * a, c * b));
        Ok(h)
    }

    /// `Σ cᵢ fᵢ` with `cᵢ ≥ 0`, not all zero, over handles of one dimension.
    pub fn combination(terms: &[(f64, FunctionHandle)]) -> Result<Self> {
        let n = terms
            .first()
            .ok_or_else(|| Error::InvalidInput("empty combination".into()))?
            .1
            .n;
        if terms.iter().any(|(_, h)| h.n != n) {
            return Err(Error::Dimension("combined handles differ in dimension".into()));
        }
        if terms.iter().any(|(c, _)| !(*c >= 0.0 && c.is_finite())) || terms.iter().all(|(c, _)| *c == 0.0) {
            return Err(Error::InvalidInput("combination weights must be nonnegative, not all zero".into()));
        }
        let name = terms
            .iter()
            .map(|(c, h)| format!("{c}*{}", h.name))
            .collect::<Vec<_>>()
            .join(" + ");
        let convex = terms.iter().all(|(c, h)| *c == 0.0 || h.convex);
        let monotone = terms.iter().all(|(c, h)| *c == 0.0 || h.monotone);
        let bounds = terms.iter().try_fold((0.0, 0.0), |(a, b), (c, h)| {
            h.bounds.map(|(l, u)| (a + c * l, b + c * u))
        });
        let owned: Vec<(f64, FunctionHandle)> = terms.to_vec();
        let mut h = Self::new(name, n, convex, monotone, move |p: &[f64]| {
            owned.iter().try_fold(0.0, |acc, (c, h)| Ok(acc + c * h.eval(p)?))
        });
        h.bounds = bounds.filter(|(a, _)| *a > 0.0);
        Ok(h)
    }

    /// Checks positive homogeneity, strict positivity, and the declared
    /// norm bounds on a fixed pseudo-random sample of [`AUDIT_POINTS`]
    /// points. The error names the violated axiom.
    pub fn audit(&self, tol: &Tolerances) -> Result<()> {
        let zero = self.eval(&vec![0.0; self.n])?;
        if zero.abs() > 1e-12 {
            return Err(Error::Audit {
                axiom: "positive affine",
                detail: format!("f(0) = {zero}"),
            });
        }
        for p in audit_points(self.n) {
            let v = self.eval(&p)?;
            if !(v > 0.0) {
                return Err(Error::Audit {
                    axiom: "nondegenerate",
                    detail: format!("f({p:?}) = {v}"),
                });
            }
            for lambda in AUDIT_SCALES {
                let scaled: Vec<f64> = p.iter().map(|x| lambda * x).collect();
                let w = self.eval(&scaled)?;
                if (w - lambda * v).abs() > tol.homogeneity * lambda * v {
                    return Err(Error::Audit {
                        axiom: "positive affine",
                        detail: format!("f({lambda}·p) = {w} but {lambda}·f(p) = {} at p = {p:?}", lambda * v),
                    });
                }
            }
            if let Some((c1, c2)) = self.bounds {
                let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
                let slack = 1e-9 * v.max(norm);
                if v < c1 * norm - slack || v > c2 * norm + slack {
                    return Err(Error::Audit {
                        axiom: "bounded",
                        detail: format!("f(p) = {v} outside [{}, {}] at p = {p:?}", c1 * norm, c2 * norm),
                    });
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn check_point(p: &[f64], n: usize) -> Result<()> {
    if p.len() != n {
        return Err(Error::Dimension(format!("point has length {}, expected {n}", p.len())));
    }
    if let Some(x) = p.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::InvalidInput(format!("point entries must be finite and nonnegative, got {x}")));
    }
    Ok(())
}

/// Nonzero points of `ℝⁿ₊` with varied scale; about a fifth of the
/// coordinates are zeroed so faces of the orthant are exercised.
pub(crate) fn audit_points(n: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(AUDIT_SEED ^ n as u64);
    (0..AUDIT_POINTS)
        .map(|_| {
            let mut q = dirichlet_uniform(n, &mut rng);
            for x in q.iter_mut() {
                if rng.gen_bool(0.2) {
                    *x = 0.0;
                }
            }
            if q.iter().all(|x| *x == 0.0) {
                q[rng.gen_range(0..n)] = 1.0;
            }
            let scale = 10f64.powf(rng.gen_range(-1.0..1.0));
            q.iter().map(|x| x * scale).collect()
        })
        .collect()
}
