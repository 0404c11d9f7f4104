use serde::Serialize;

use super::handle::FunctionHandle;
use super::transform::{bcube, beval, bsquare};
use crate::config::OptimizerConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    FixedPointConsistent,
    NotInvariant,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvolutionReport {
    /// `(f − 𝔅²f) / f` at each sample.
    pub gaps: Vec<f64>,
    /// `f − 𝔅²f` at each sample.
    pub absolute_gaps: Vec<f64>,
    pub max_gap: f64,
    pub min_gap: f64,
    pub classification: Classification,
}

fn nonempty(samples: &[Vec<f64>]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("at least one sample point is required".into()));
    }
    Ok(())
}

/// Compares `f` with `𝔅²f`. Since `𝔅²f ≤ f` always, the gaps should be
/// nonnegative up to `tol`; `f` is classified fixed-point-consistent iff
/// every gap is at most `tol`.
pub fn involution_check(f: &FunctionHandle, samples: &[Vec<f64>], cfg: &OptimizerConfig) -> Result<InvolutionReport> {
    nonempty(samples)?;
    let mut gaps = Vec::with_capacity(samples.len());
    let mut absolute_gaps = Vec::with_capacity(samples.len());
    for p in samples {
        let fp = f.eval(p)?;
        let b2 = bsquare(f, p, cfg)?.value;
        gaps.push(if fp > 0.0 { (fp - b2) / fp } else { 0.0 });
        absolute_gaps.push(fp - b2);
    }
    let max_gap = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(InvolutionReport {
        classification: if max_gap <= cfg.tol {
            Classification::FixedPointConsistent
        } else {
            Classification::NotInvariant
        },
        gaps,
        absolute_gaps,
        max_gap,
        min_gap,
    })
}

/// Largest relative deviation `|𝔅³f − 𝔅f| / 𝔅f` over the samples.
/// Limited to `n ≤ 3`: the triple nesting grows quickly with dimension.
pub fn b_cubed_identity_check(f: &FunctionHandle, samples: &[Vec<f64>], cfg: &OptimizerConfig) -> Result<f64> {
    nonempty(samples)?;
    if f.dim() > 3 {
        return Err(Error::InvalidInput(format!(
            "triple transform is limited to dimension 3, handle has {}",
            f.dim()
        )));
    }
    let mut worst: f64 = 0.0;
    for p in samples {
        let b1 = beval(f, p, cfg)?.value;
        let b3 = bcube(f, p, cfg)?.value;
        if b1 > 0.0 {
            worst = worst.max((b3 - b1).abs() / b1);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointReport {
    /// `|𝔅f − f| ≤ tol·f` at every sample.
    pub is_fixed_point: bool,
    /// `|f − ‖·‖₂| ≤ tol·‖·‖₂` at every sample.
    pub is_euclidean_norm: bool,
    pub max_transform_deviation: f64,
    pub max_norm_deviation: f64,
}

impl FixedPointReport {
    pub fn passed(&self) -> bool {
        self.is_fixed_point && self.is_euclidean_norm
    }

    /// The Euclidean norm is the only fixed point of `𝔅`, so the two
    /// conditions must agree.
    pub fn consistent(&self) -> bool {
        self.is_fixed_point == self.is_euclidean_norm
    }
}

pub fn norm_fixed_point_check(f: &FunctionHandle, samples: &[Vec<f64>], cfg: &OptimizerConfig) -> Result<FixedPointReport> {
    nonempty(samples)?;
    let mut dt: f64 = 0.0;
    let mut dn: f64 = 0.0;
    for p in samples {
        let fp = f.eval(p)?;
        let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let b = beval(f, p, cfg)?.value;
        dt = dt.max((b - fp).abs() / fp);
        dn = dn.max((fp - norm).abs() / norm);
    }
    Ok(FixedPointReport {
        is_fixed_point: dt <= cfg.tol,
        is_euclidean_norm: dn <= cfg.tol,
        max_transform_deviation: dt,
        max_norm_deviation: dn,
    })
}
