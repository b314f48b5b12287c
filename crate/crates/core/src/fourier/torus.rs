use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::space::{GridFunction, SequenceData, SpaceSpec};

const CHUNK: usize = 512;

pub(crate) fn require_torus(f: &GridFunction) -> Result<()> {
    if !f.space().is_torus() {
        return Err(Error::SpaceMismatch(format!("torus operation applied to {:?}", f.space().kind)));
    }
    Ok(())
}

fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-8 {
        1.0 - t * t / 6.0
    } else {
        t.sin() / t
    }
}

/// `c(n) = integral exp(i n x) f(x) dx / (2 pi)` for `|n| <= m`.
///
/// Uniform grids use the FFT (exact for trigonometric polynomials of degree
/// below `N / 2`); graded grids integrate `exp(i n x)` exactly over each cell
/// with `f` held at its node value.
pub fn coeffs(f: &GridFunction, m: usize) -> Result<SequenceData> {
    require_torus(f)?;
    let n = f.len();
    if m > n / 2 {
        return Err(Error::OrderTooLarge { order: m, resolution: n });
    }
    let (pos, neg) = if f.space().is_uniform() {
        uniform_coeffs(f.values(), m)
    } else {
        graded_coeffs(f, m)
    };
    let mut support = Vec::with_capacity(2 * m + 1);
    let mut values = Vec::with_capacity(2 * m + 1);
    for k in (1..=m).rev() {
        support.push(-(k as i64));
        values.push(neg[k]);
    }
    for (k, v) in pos.into_iter().enumerate() {
        support.push(k as i64);
        values.push(v);
    }
    Ok(SequenceData::new(support, values))
}

/// `(c(0..=m), c(-0..=-m))` on a uniform midpoint grid.
fn uniform_coeffs(values: &[Complex64], m: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = values.len();
    let h = 2.0 * PI / n as f64;
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    let pos = (0..=m)
        .map(|k| buf[k % n] * Complex64::from_polar(scale, k as f64 * h / 2.0))
        .collect();
    let neg = (0..=m)
        .map(|k| buf[(n - k) % n] * Complex64::from_polar(scale, -(k as f64) * h / 2.0))
        .collect();
    (pos, neg)
}

fn graded_coeffs(f: &GridFunction, m: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let grid = f.grid();
    let idx: Vec<usize> = (0..f.len()).collect();
    let partial: Vec<(Vec<Complex64>, Vec<Complex64>)> = idx
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut pos = vec![Complex64::new(0.0, 0.0); m + 1];
            let mut neg = vec![Complex64::new(0.0, 0.0); m + 1];
            for &j in chunk {
                let fj = f.values()[j] * f.weights()[j];
                if fj == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let x = grid.nodes[j];
                let half = 0.5 * (grid.edges[j + 1] - grid.edges[j]);
                let step = Complex64::from_polar(1.0, x);
                let mut z = Complex64::new(1.0, 0.0);
                for k in 0..=m {
                    let s = sinc(k as f64 * half);
                    pos[k] += fj * z * s;
                    neg[k] += fj * z.conj() * s;
                    z *= step;
                    if k % 64 == 63 {
                        z = Complex64::from_polar(1.0, (k + 1) as f64 * x);
                    }
                }
            }
            (pos, neg)
        })
        .collect();
    let mut pos = vec![Complex64::new(0.0, 0.0); m + 1];
    let mut neg = vec![Complex64::new(0.0, 0.0); m + 1];
    for (p, q) in partial {
        for k in 0..=m {
            pos[k] += p[k];
            neg[k] += q[k];
        }
    }
    (pos, neg)
}

/// `sum_n c(n) exp(-i n x)` at the nodes of a torus grid.
pub fn synthesize(c: &SequenceData, space: SpaceSpec, meta: &str) -> Result<GridFunction> {
    if !space.is_torus() {
        return Err(Error::SpaceMismatch("synthesis needs a torus space".into()));
    }
    let grid = space.grid()?;
    let n = grid.nodes.len();
    let values = if space.is_uniform() {
        let h = 2.0 * PI / n as f64;
        let mut d = vec![Complex64::new(0.0, 0.0); n];
        for (k, v) in c.iter() {
            let slot = k.rem_euclid(n as i64) as usize;
            d[slot] += v * Complex64::from_polar(1.0, -(k as f64) * h / 2.0);
        }
        FftPlanner::new().plan_fft_forward(n).process(&mut d);
        d
    } else {
        grid.nodes
            .par_iter()
            .map(|&x| c.iter().map(|(k, v)| v * Complex64::from_polar(1.0, -(k as f64) * x)).sum())
            .collect()
    };
    GridFunction::on_grid(space, grid, values, meta)
}

/// Keeps `|n| <= m`.
pub fn truncate(c: &SequenceData, m: usize) -> SequenceData {
    let (support, values) = c.iter().filter(|(k, _)| k.unsigned_abs() as usize <= m).unzip();
    SequenceData { support, values }
}

/// `s_M[f] = sum_{|n| <= M} c(n) exp(-i n x)` on the grid of `f`.
pub fn s_m(f: &GridFunction, m: usize) -> Result<GridFunction> {
    let c = coeffs(f, m)?;
    synthesize(&c, *f.space(), &format!("s_{m}[{}]", f.meta()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::lp;

    #[test]
    fn exponential_is_orthonormal() {
        let space = SpaceSpec::torus(256);
        let f = GridFunction::sample_complex(space, "e^-ikx", |x| Complex64::from_polar(1.0, -5.0 * x)).unwrap();
        let c = coeffs(&f, 20).unwrap();
        for (k, v) in c.iter() {
            let want = if k == 5 { 1.0 } else { 0.0 };
            assert!((v - want).norm() < 1e-12, "n = {k}: {v}");
        }
        assert!(coeffs(&f, 129).is_err());
    }

    #[test]
    fn real_function_is_hermitian() {
        let f = GridFunction::sample(SpaceSpec::torus(512), "f", |x| (x.cos()).exp() + (x / 2.0).sin()).unwrap();
        assert!(coeffs(&f, 100).unwrap().hermitian_defect() < 1e-12);
        let g = GridFunction::sample(SpaceSpec::torus(64).with_grading(crate::space::Grading::EndpointGeometric { ratio: 2.0, floor: 1e-6 }), "f", |x| x.sin() + 0.3 * x.cos()).unwrap();
        assert!(coeffs(&g, 10).unwrap().hermitian_defect() < 1e-12);
    }

    #[test]
    fn reproduces_trig_polynomials() {
        let f = GridFunction::sample(SpaceSpec::torus(128), "sin3", |x| (3.0 * x).sin()).unwrap();
        let s = s_m(&f, 4).unwrap();
        assert!(s.sub(&f).unwrap().max_abs() < 1e-12);
        assert!(s_m(&f, 2).unwrap().max_abs() < 1e-12);
        let ss = s_m(&s_m(&f, 3).unwrap(), 3).unwrap();
        assert!(ss.sub(&s).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn parseval_exact_at_degree() {
        let f = GridFunction::sample(SpaceSpec::torus(128), "p", |x| 1.0 + 2.0 * x.cos() - 0.5 * (7.0 * x).sin()).unwrap();
        let c = coeffs(&f, 7).unwrap();
        let sum: f64 = c.values.iter().map(|v| v.norm_sqr()).sum();
        assert!((sum - lp(&f, 2.0).unwrap().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn graded_matches_uniform_for_smooth_functions() {
        let f = |x: f64| (x.cos()).exp();
        let u = GridFunction::sample(SpaceSpec::torus(4096), "f", f).unwrap();
        let g = GridFunction::sample(SpaceSpec::torus_graded(16384), "f", f).unwrap();
        let (cu, cg) = (coeffs(&u, 16).unwrap(), coeffs(&g, 16).unwrap());
        for (a, b) in cu.values.iter().zip(&cg.values) {
            assert!((a - b).norm() < 1e-6, "{a} vs {b}");
        }
        let s = s_m(&g, 16).unwrap();
        assert!(s.sub(&g).unwrap().max_abs() < 1e-5);
    }
}
