use serde::Serialize;

use crate::error::{Error, Result};

/// Non-negative, finite vertex weights. Not required to be normalized.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if let Some((i, x)) = w.iter().enumerate().find(|(_, x)| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidInput(format!(
                "weight {i} is {x}; weights must be finite and non-negative"
            )));
        }
        Ok(Self(w))
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![1.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|x| x * lambda).collect())
    }

    /// `p^{⊗k}` in the row-major order of [`crate::graph::Graph::strong_power`].
    pub fn tensor_power(&self, k: usize) -> Self {
        let mut out = vec![1.0];
        for _ in 0..k {
            out = out
                .iter()
                .flat_map(|a| self.0.iter().map(move |b| a * b))
                .collect();
        }
        Self(out)
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::Dimension(format!(
                "weight vector has {} entries, graph has {n} vertices",
                self.len()
            )));
        }
        Ok(())
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

/// Closed interval enclosing a quantity that is only bounded, never
/// computed exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundInterval {
    pub lower: f64,
    pub upper: f64,
}

impl BoundInterval {
    pub fn new(lower: f64, upper: f64) -> Self {
        Self { lower, upper }
    }

    /// `lower ≤ upper` up to a relative slack.
    pub fn is_consistent(&self, tol: f64) -> bool {
        self.lower <= self.upper + tol * (1.0 + self.upper.abs())
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lower - tol && x <= self.upper + tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_and_nan() {
        assert!(WeightVector::new(vec![1.0, -0.5]).is_err());
        assert!(WeightVector::new(vec![f64::NAN]).is_err());
        assert!(WeightVector::new(vec![0.0, 2.0]).is_ok());
    }

    #[test]
    fn tensor_power_is_row_major() {
        let p = WeightVector::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(p.tensor_power(1), p);
        assert_eq!(
            p.tensor_power(2).as_slice(),
            &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 3.0, 6.0, 9.0]
        );
        assert_eq!(p.tensor_power(3).len(), 27);
    }
}
