use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Finitely supported sequence `c(n)`, `n` in `Z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceData {
    pub support: Vec<i64>,
    pub values: Vec<Complex64>,
}

impl SequenceData {
    pub fn new(support: Vec<i64>, values: Vec<Complex64>) -> Self {
        assert_eq!(support.len(), values.len(), "support and values differ in length");
        Self { support, values }
    }

    /// `c(n)` for `n = first, first + 1, ...`.
    pub fn contiguous(first: i64, values: Vec<Complex64>) -> Self {
        let support = (first..first + values.len() as i64).collect();
        Self { support, values }
    }

    pub fn real(support: Vec<i64>, values: &[f64]) -> Self {
        Self::new(support, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn get(&self, n: i64) -> Complex64 {
        self.support
            .iter()
            .position(|&k| k == n)
            .map_or(Complex64::new(0.0, 0.0), |i| self.values[i])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.support.iter().copied().zip(self.values.iter().copied())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            support: self.support.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// `max |c(n) - conj c(-n)|` over the support.
    pub fn hermitian_defect(&self) -> f64 {
        self.iter().map(|(n, v)| (v - self.get(-n).conj()).norm()).fold(0.0, f64::max)
    }
}
