//! Measure spaces with quadrature grids, and functions sampled on them.

mod function;
mod sequence;

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use function::GridFunction;
pub use sequence::SequenceData;

pub const DEFAULT_LINE_X_MAX: f64 = 1e4;
/// Smallest cell edge near the singular endpoints of a graded torus.
pub const DEFAULT_TORUS_FLOOR: f64 = 1e-240;
pub const DEFAULT_TORUS_RATIO: f64 = 1.1;
pub const DEFAULT_LINE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    /// `[0, 2 pi)` with measure `dx / (2 pi)`
    Torus,
    /// `[-X, X]` with Lebesgue measure
    Line,
    /// `[-X, X]`, norms weighted by `|x|^{p-2}`
    LineNu,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Grading {
    /// Equal cells. On the line the nodes are `-X + j dx`, which suits the DFT.
    Uniform,
    /// Torus only: cells grow geometrically away from `0` and `2 pi`,
    /// starting with a cell of width `floor`.
    EndpointGeometric { ratio: f64, floor: f64 },
    /// Line only: log-uniform cells on `[floor, X]`, mirrored, plus `[-floor, floor]`.
    LogRadial { floor: f64 },
}

/// Description of a measure space and its quadrature grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub kind: SpaceKind,
    /// Half-width of the truncated line; ignored on the torus.
    #[serde(default = "default_x_max")]
    pub x_max: f64,
    pub resolution: usize,
    #[serde(default = "default_grading")]
    pub grading: Grading,
}

fn default_x_max() -> f64 {
    DEFAULT_LINE_X_MAX
}

fn default_grading() -> Grading {
    Grading::Uniform
}

/// Nodes, weights and cell edges of a quadrature grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `edges[i]..edges[i + 1]` is the cell of node `i`.
    pub edges: Vec<f64>,
    /// Index range of cells lying in the equally spaced part of the grid.
    pub regular: std::ops::Range<usize>,
}

impl SpaceSpec {
    pub fn torus(resolution: usize) -> Self {
        Self {
            kind: SpaceKind::Torus,
            x_max: PI,
            resolution,
            grading: Grading::Uniform,
        }
    }

    /// Torus grid resolving logarithmic singularities at `0` and `2 pi`.
    pub fn torus_graded(resolution: usize) -> Self {
        Self {
            grading: Grading::EndpointGeometric {
                ratio: DEFAULT_TORUS_RATIO,
                floor: DEFAULT_TORUS_FLOOR,
            },
            ..Self::torus(resolution)
        }
    }

    /// Log-radially graded line.
    pub fn line(x_max: f64, resolution: usize) -> Self {
        Self {
            kind: SpaceKind::Line,
            x_max,
            resolution,
            grading: Grading::LogRadial { floor: DEFAULT_LINE_FLOOR },
        }
    }

    /// Equally spaced line grid for transforms.
    pub fn line_uniform(x_max: f64, resolution: usize) -> Self {
        Self {
            kind: SpaceKind::Line,
            x_max,
            resolution,
            grading: Grading::Uniform,
        }
    }

    pub fn line_nu(x_max: f64, resolution: usize) -> Self {
        Self {
            kind: SpaceKind::LineNu,
            ..Self::line(x_max, resolution)
        }
    }

    pub fn with_grading(self, grading: Grading) -> Self {
        Self { grading, ..self }
    }

    pub fn is_torus(&self) -> bool {
        self.kind == SpaceKind::Torus
    }

    pub fn is_uniform(&self) -> bool {
        self.grading == Grading::Uniform
    }

    /// `1` on the torus, `2 X` on the line.
    pub fn total_measure(&self) -> f64 {
        if self.is_torus() {
            1.0
        } else {
            2.0 * self.x_max
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.resolution;
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidParameter(format!("resolution must be a power of two >= 16, got {n}")));
        }
        if !self.is_torus() && !(self.x_max > 0.0 && self.x_max.is_finite()) {
            return Err(Error::InvalidParameter(format!("line half-width must be positive, got {}", self.x_max)));
        }
        match (self.kind, self.grading) {
            (_, Grading::Uniform) => Ok(()),
            (SpaceKind::Torus, Grading::EndpointGeometric { ratio, floor }) => {
                if !(ratio > 1.0) || !(floor > 0.0 && floor < 1e-3) {
                    return Err(Error::InvalidParameter(format!("bad torus grading ratio {ratio}, floor {floor}")));
                }
                Ok(())
            }
            (SpaceKind::Line | SpaceKind::LineNu, Grading::LogRadial { floor }) => {
                if !(floor > 0.0 && floor < self.x_max) {
                    return Err(Error::InvalidParameter(format!("bad line grading floor {floor}")));
                }
                Ok(())
            }
            (kind, grading) => Err(Error::InvalidParameter(format!("grading {grading:?} not available on {kind:?}"))),
        }
    }

    /// Builds the quadrature grid.
    pub fn grid(&self) -> Result<Arc<Grid>> {
        self.validate()?;
        let n = self.resolution;
        let grid = match (self.kind, self.grading) {
            (SpaceKind::Torus, Grading::Uniform) => {
                let h = 2.0 * PI / n as f64;
                Grid {
                    nodes: (0..n).map(|i| (i as f64 + 0.5) * h).collect(),
                    weights: vec![1.0 / n as f64; n],
                    edges: (0..=n).map(|i| i as f64 * h).collect(),
                    regular: 0..n,
                }
            }
            (SpaceKind::Torus, Grading::EndpointGeometric { ratio, floor }) => torus_graded(n, ratio, floor)?,
            (_, Grading::Uniform) => {
                let x = self.x_max;
                let dx = 2.0 * x / n as f64;
                Grid {
                    nodes: (0..n).map(|j| -x + j as f64 * dx).collect(),
                    weights: vec![dx; n],
                    edges: (0..=n).map(|j| -x + (j as f64 - 0.5) * dx).collect(),
                    regular: 0..n,
                }
            }
            (_, Grading::LogRadial { floor }) => line_log_radial(n, self.x_max, floor),
            _ => unreachable!("validated above"),
        };
        Ok(Arc::new(grid))
    }
}

/// Geometric cell widths `floor * ratio^j` until a cell reaches width `h`.
fn geometric_widths(floor: f64, ratio: f64, h: f64) -> Vec<f64> {
    let mut w = vec![floor];
    let mut e = floor;
    while e * (ratio - 1.0) < h {
        w.push(e * (ratio - 1.0));
        e *= ratio;
    }
    w
}

fn torus_graded(n: usize, ratio: f64, floor: f64) -> Result<Grid> {
    let two_pi = 2.0 * PI;
    // near 2 pi the cells stop at 1e-12 so that 2 pi - x stays representable
    let floor_right = floor.max(1e-12);
    let mut h = two_pi / n as f64;
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for _ in 0..100 {
        left = geometric_widths(floor, ratio, h);
        right = geometric_widths(floor_right, ratio, h);
        if left.len() + right.len() + n / 4 > n {
            return Err(Error::InvalidParameter(format!(
                "resolution {n} too small for endpoint grading with ratio {ratio} and floor {floor:e}"
            )));
        }
        let middle = n - left.len() - right.len();
        let graded: f64 = left.iter().chain(&right).sum();
        let h_new = (two_pi - graded) / middle as f64;
        let done = (h_new - h).abs() <= 1e-15 * h;
        h = h_new;
        if done {
            break;
        }
    }
    let middle = n - left.len() - right.len();
    let b_left: f64 = left.iter().sum();
    let b_right: f64 = right.iter().sum();
    h = (two_pi - b_left - b_right) / middle as f64;

    let mut edges = Vec::with_capacity(n + 1);
    let mut nodes = Vec::with_capacity(n);
    let mut widths = Vec::with_capacity(n);
    let mut e = 0.0;
    edges.push(0.0);
    for &w in &left {
        nodes.push(e + 0.5 * w);
        e += w;
        edges.push(e);
        widths.push(w);
    }
    for i in 0..middle {
        nodes.push(b_left + (i as f64 + 0.5) * h);
        edges.push(if i + 1 == middle { two_pi - b_right } else { b_left + (i + 1) as f64 * h });
        widths.push(h);
    }
    // distances from 2 pi, outermost first
    let mut d = b_right;
    for &w in right.iter().rev() {
        nodes.push(two_pi - (d - 0.5 * w));
        d -= w;
        edges.push(two_pi - d);
        widths.push(w);
    }
    let regular = left.len()..left.len() + middle;
    Ok(Grid {
        nodes,
        weights: widths.into_iter().map(|w| w / two_pi).collect(),
        edges,
        regular,
    })
}

fn line_log_radial(n: usize, x: f64, floor: f64) -> Grid {
    // per side: [0, floor] and n/2 - 1 log-uniform cells on [floor, X]
    let half = n / 2;
    let ln_ratio = (x / floor).ln() / (half - 1) as f64;
    let mut pos = vec![0.0];
    pos.extend((0..half).map(|k| if k == half - 1 { x } else { floor * (k as f64 * ln_ratio).exp() }));
    let mut edges: Vec<f64> = pos.iter().rev().map(|&e| -e).collect();
    edges.extend(pos.iter().skip(1));
    let (nodes, weights) = edges.windows(2).map(|w| (0.5 * (w[0] + w[1]), w[1] - w[0])).unzip();
    Grid {
        nodes,
        weights,
        edges,
        regular: 0..0,
    }
}
