use std::io::{Read, Write};
use std::sync::Arc;

use rayon::prelude::*;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Grid, SpaceSpec};
use crate::error::{Error, Result};

/// A complex function sampled at the nodes of a [`SpaceSpec`] grid.
#[derive(Debug, Clone)]
pub struct GridFunction {
    space: SpaceSpec,
    grid: Arc<Grid>,
    values: Vec<Complex64>,
    meta: String,
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    node: f64,
    weight: f64,
    re: f64,
    im: f64,
}

impl GridFunction {
    /// Evaluates a real function at every node.
    pub fn sample<F>(space: SpaceSpec, meta: &str, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Sync,
    {
        Self::sample_complex(space, meta, |x| Complex64::new(f(x), 0.0))
    }

    pub fn sample_complex<F>(space: SpaceSpec, meta: &str, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Sync,
    {
        let grid = space.grid()?;
        let values: Vec<Complex64> = grid.nodes.par_iter().map(|&x| f(x)).collect();
        Self::on_grid(space, grid, values, meta)
    }

    /// Wraps values already computed on `grid`; rejects non-finite entries.
    pub fn on_grid(space: SpaceSpec, grid: Arc<Grid>, values: Vec<Complex64>, meta: &str) -> Result<Self> {
        if values.len() != grid.nodes.len() {
            return Err(Error::SpaceMismatch(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.nodes.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFiniteSample {
                index: i,
                x: grid.nodes[i],
                value: if values[i].re.is_finite() { values[i].im } else { values[i].re },
            });
        }
        Ok(Self {
            space,
            grid,
            values,
            meta: meta.to_string(),
        })
    }

    pub fn zeros(space: SpaceSpec) -> Result<Self> {
        let grid = space.grid()?;
        let n = grid.nodes.len();
        Self::on_grid(space, grid, vec![Complex64::new(0.0, 0.0); n], "0")
    }

    /// Same grid, new values.
    pub fn with_values(&self, values: Vec<Complex64>, meta: &str) -> Result<Self> {
        Self::on_grid(self.space, self.grid.clone(), values, meta)
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn nodes(&self) -> &[f64] {
        &self.grid.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.grid.weights
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn meta(&self) -> &str {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn abs(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `integral f d mu`.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().zip(&self.grid.weights).map(|(v, w)| v * w).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * c).collect(),
            meta: format!("({c})*{}", self.meta),
            ..self.clone()
        }
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch(format!("{:?} vs {:?}", self.space, other.space)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        let v = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        self.with_values(v, &format!("{}+{}", self.meta, other.meta))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        let v = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        self.with_values(v, &format!("{}-{}", self.meta, other.meta))
    }

    /// `T(|f|, u) = mes{x : |f(x)| > u}`.
    pub fn tail(&self, u: f64) -> f64 {
        self.values
            .iter()
            .zip(&self.grid.weights)
            .filter(|(v, _)| v.norm() > u)
            .map(|(_, w)| w)
            .sum()
    }

    /// Indicator of a set of measure close to `delta`, grown cell by cell
    /// outward from `pi` on the torus and from `0` on the line. The realized
    /// measure differs from `delta` by at most half a cell; read it back with
    /// [`GridFunction::integral`].
    pub fn indicator(space: SpaceSpec, delta: f64) -> Result<Self> {
        let total = space.total_measure();
        if !(delta > 0.0) {
            return Err(Error::InvalidParameter(format!("indicator measure must be positive, got {delta}")));
        }
        if delta > total * (1.0 + 1e-12) {
            return Err(Error::MeasureTooLarge {
                requested: delta,
                available: total,
            });
        }
        let grid = space.grid()?;
        let anchor = if space.is_torus() { std::f64::consts::PI } else { 0.0 };
        let mut order: Vec<usize> = (0..grid.nodes.len()).collect();
        order.sort_by(|&i, &j| {
            let in_i = grid.regular.contains(&i) || grid.regular.is_empty();
            let in_j = grid.regular.contains(&j) || grid.regular.is_empty();
            in_j.cmp(&in_i).then(
                (grid.nodes[i] - anchor)
                    .abs()
                    .total_cmp(&(grid.nodes[j] - anchor).abs()),
            )
        });
        let mut chosen = vec![false; grid.nodes.len()];
        let mut acc = 0.0;
        for &i in &order {
            let w = grid.weights[i];
            if acc > 0.0 && (acc + w - delta).abs() >= (acc - delta).abs() {
                break;
            }
            chosen[i] = true;
            acc += w;
        }
        let values = chosen
            .into_iter()
            .map(|c| Complex64::new(if c { 1.0 } else { 0.0 }, 0.0))
            .collect();
        Self::on_grid(space, grid, values, &format!("indicator({delta})"))
    }

    /// CSV with columns `node, weight, re, im`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for ((&node, &weight), v) in self.grid.nodes.iter().zip(&self.grid.weights).zip(&self.values) {
            w.serialize(CsvRow {
                node,
                weight,
                re: v.re,
                im: v.im,
            })?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads values written by [`GridFunction::write_csv`]; nodes and weights
    /// must match the grid of `space`.
    pub fn read_csv<R: Read>(space: SpaceSpec, input: R, meta: &str) -> Result<Self> {
        let grid = space.grid()?;
        let mut values = Vec::with_capacity(grid.nodes.len());
        for (i, row) in csv::Reader::from_reader(input).deserialize::<CsvRow>().enumerate() {
            let row = row?;
            let matches = grid.nodes.get(i).is_some_and(|&x| (x - row.node).abs() <= 1e-12 * x.abs().max(1e-300))
                && (grid.weights[i] - row.weight).abs() <= 1e-12 * grid.weights[i];
            if !matches {
                return Err(Error::SpaceMismatch(format!("row {i} does not match the grid of {space:?}")));
            }
            values.push(Complex64::new(row.re, row.im));
        }
        Self::on_grid(space, grid, values, meta)
    }
}
