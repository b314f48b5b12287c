use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use std::f64::consts::{PI, TAU};

use super::torus::require_torus;
use crate::error::{Error, Result};
use crate::space::{GridFunction, SequenceData};

/// Conjugate-series multiplier: `c(n) -> i sgn(n) c(n)` in the `exp(-i n x)`
/// synthesis used here, so that `cos(n x) -> sin(n x)`.
pub fn hilbert_coeffs(c: &SequenceData) -> SequenceData {
    let values = c
        .iter()
        .map(|(n, v)| v * Complex64::new(0.0, n.signum() as f64))
        .collect();
    SequenceData::new(c.support.clone(), values)
}

/// Periodic Hilbert transform (conjugate function).
///
/// Uniform grids apply the multiplier to every resolved frequency (the
/// Nyquist bin is dropped); graded grids fall back to [`hilbert_pv`].
pub fn hilbert(f: &GridFunction) -> Result<GridFunction> {
    require_torus(f)?;
    if !f.space().is_uniform() {
        return hilbert_pv(f);
    }
    let n = f.len();
    let mut buf = f.values().to_vec();
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(n).process(&mut buf);
    // up to a phase, buf[k] holds N c(k) below N/2 and N c(k - N) above
    for (k, b) in buf.iter_mut().enumerate() {
        let freq = if k == 0 || 2 * k == n {
            0.0
        } else if k < n / 2 {
            1.0
        } else {
            -1.0
        };
        *b *= Complex64::new(0.0, freq / n as f64);
    }
    planner.plan_fft_forward(n).process(&mut buf);
    f.with_values(buf, &format!("H[{}]", f.meta()))
}

/// `H f(x_i)` by the principal-value quadrature
/// `sum_{j != i} w_j (f_j - f_i) cot((x_i - x_j) / 2)`, weights normalized.
///
/// Subtracting `f_i` removes the singular part of the kernel (its principal
/// value over the period is zero). The diagonal cell contributes its limit
/// `-2 f'(x_i) w_i`, with `f'` from a three-point difference. Cells across
/// the periodic seam that lie within a few widths of the image of `x_i`
/// get the exact cell integral of the kernel instead of the midpoint value;
/// on endpoint-graded grids the image of a target near `0` sits inside the
/// last cell before `2 pi`. Costs `O(N)` per target.
pub fn hilbert_pv_at(f: &GridFunction, targets: &[usize]) -> Result<Vec<Complex64>> {
    require_torus(f)?;
    if let Some(&bad) = targets.iter().find(|&&i| i >= f.len()) {
        return Err(Error::InvalidParameter(format!("target index {bad} out of range")));
    }
    let x = f.nodes();
    let w = f.weights();
    let v = f.values();
    let edges = &f.grid().edges;
    let period = std::f64::consts::TAU;
    Ok(targets
        .par_iter()
        .map(|&i| {
            let n = x.len();
            let (l, r) = ((i + n - 1) % n, (i + 1) % n);
            let hl = (x[i] - x[l]).rem_euclid(period);
            let hr = (x[r] - x[i]).rem_euclid(period);
            let slope = ((v[r] - v[i]) * (hl / hr) + (v[i] - v[l]) * (hr / hl)) / (hl + hr);
            let mut acc = -2.0 * w[i] * slope;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let width = edges[j + 1] - edges[j];
                let near_image = (x[i] - x[j]).abs() > PI && seam_gap(x[i], x[j]) < 4.0 * width;
                let k = if near_image {
                    (ln_abs_sin_half(x[i], edges[j]) - ln_abs_sin_half(x[i], edges[j + 1])) / PI
                } else {
                    w[j] / (0.5 * (x[i] - x[j])).tan()
                };
                acc += (v[j] - v[i]) * k;
            }
            acc
        })
        .collect())
}

/// Distance between `t` and the image of `x` across the seam at `0 = 2 pi`.
fn seam_gap(x: f64, t: f64) -> f64 {
    if x < t {
        x + (TAU - t)
    } else {
        t + (TAU - x)
    }
}

/// `log |sin((x - e) / 2)|`, with the difference taken across the seam
/// when that is shorter so that tiny gaps keep their digits.
fn ln_abs_sin_half(x: f64, e: f64) -> f64 {
    let d = if (x - e).abs() <= PI { x - e } else { seam_gap(x, e) };
    (0.5 * d).sin().abs().ln()
}

/// [`hilbert_pv_at`] at every node (`O(N^2)`).
pub fn hilbert_pv(f: &GridFunction) -> Result<GridFunction> {
    let all: Vec<usize> = (0..f.len()).collect();
    let values = hilbert_pv_at(f, &all)?;
    f.with_values(values, &format!("H[{}]", f.meta()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{Grading, SpaceSpec};

    #[test]
    fn cos_to_sin() {
        for k in [1.0, 3.0, 17.0] {
            let f = GridFunction::sample(SpaceSpec::torus(256), "cos", move |x| (k * x).cos()).unwrap();
            let h = hilbert(&f).unwrap();
            for (x, v) in h.nodes().iter().zip(h.values()) {
                assert!((v - Complex64::new((k * x).sin(), 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn squares_to_minus_identity_off_mean() {
        let f = GridFunction::sample(SpaceSpec::torus(256), "f", |x| 2.0 + x.sin() - 0.4 * (5.0 * x).cos()).unwrap();
        let hh = hilbert(&hilbert(&f).unwrap()).unwrap();
        for (a, b) in hh.values().iter().zip(f.values()) {
            assert!((a + (b - 2.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn multiplier_matches_coefficient_route() {
        let f = GridFunction::sample(SpaceSpec::torus(64), "f", |x| (x.cos()).exp()).unwrap();
        let c = super::super::torus::coeffs(&f, 20).unwrap();
        let via_c = super::super::torus::synthesize(&hilbert_coeffs(&c), *f.space(), "Hc").unwrap();
        let direct = hilbert(&f).unwrap();
        assert!(via_c.sub(&direct).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn principal_value_agrees_with_multiplier() {
        let g = |x: f64| x.cos().exp() * x.sin().cos();
        let uniform = GridFunction::sample(SpaceSpec::torus(2048), "f", g).unwrap();
        let h = hilbert(&uniform).unwrap();
        let pv = hilbert_pv(&uniform).unwrap();
        assert!(pv.sub(&h).unwrap().max_abs() < 1e-3);
        let graded = GridFunction::sample(
            SpaceSpec::torus(2048).with_grading(Grading::EndpointGeometric { ratio: 1.2, floor: 1e-8 }),
            "f",
            g,
        )
        .unwrap();
        let targets: Vec<usize> = (0..graded.len()).step_by(97).collect();
        let vals = hilbert_pv_at(&graded, &targets).unwrap();
        for (&i, v) in targets.iter().zip(&vals) {
            // Re exp(exp(ix)) has conjugate Im exp(exp(ix))
            let x = graded.nodes()[i];
            let want = x.cos().exp() * x.sin().sin();
            assert!((v.re - want).abs() < 1e-3, "x = {x}: {} vs {want}", v.re);
        }
    }

    #[test]
    fn log_singularity_deep_targets() {
        // high-precision quadrature of the conjugate of log(2 pi / x) near 0
        // gives -L^2 / (2 pi) + 1.415272 with L = log(2 pi / x)
        let f = GridFunction::sample(SpaceSpec::torus_graded(16384), "g", |x| (TAU / x).ln()).unwrap();
        let x = f.nodes();
        let targets: Vec<usize> = [30.0, 62.0, 100.0, 150.0, 300.0]
            .iter()
            .map(|&l: &f64| x.partition_point(|&t| t < TAU * (-l).exp()))
            .collect();
        let vals = hilbert_pv_at(&f, &targets).unwrap();
        for (&i, v) in targets.iter().zip(&vals) {
            let l = (TAU / x[i]).ln();
            let want = -l * l / TAU + 1.415272;
            assert!((v.re - want).abs() < 1e-3 * want.abs(), "L = {l}: {} vs {want}", v.re);
        }
    }
}
