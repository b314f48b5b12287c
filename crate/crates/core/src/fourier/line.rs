use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::space::{GridFunction, SpaceKind, SpaceSpec};

/// Boundary magnitude (relative to `max |f|`) above which truncation is reported.
pub const DECAY_TOLERANCE: f64 = 1e-6;

fn require_uniform_line(f: &GridFunction) -> Result<()> {
    if f.space().kind == SpaceKind::Torus || !f.space().is_uniform() {
        return Err(Error::SpaceMismatch("line transform needs an equally spaced line grid".into()));
    }
    Ok(())
}

/// The dual grid: `t_k = (k - N/2) pi / X`.
pub fn dual_space(space: &SpaceSpec) -> SpaceSpec {
    let n = space.resolution as f64;
    SpaceSpec {
        x_max: 0.5 * n * PI / space.x_max,
        ..*space
    }
}

/// `F[f](t) = integral exp(i t x) f(x) dx` by the rectangle rule on `[-X, X)`,
/// returned on [`dual_space`].
pub fn fourier_transform(f: &GridFunction) -> Result<GridFunction> {
    require_uniform_line(f)?;
    let n = f.len();
    let space = *f.space();
    let dx = 2.0 * space.x_max / n as f64;
    let mut buf: Vec<Complex64> = f
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| if j % 2 == 0 { *v } else { -v })
        .collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let dual = dual_space(&space);
    let grid = dual.grid()?;
    let values = grid
        .nodes
        .iter()
        .zip(buf)
        .map(|(&t, b)| b * Complex64::from_polar(dx, -t * space.x_max))
        .collect();
    GridFunction::on_grid(dual, grid, values, &format!("F[{}]", f.meta()))
}

/// Inverse of [`fourier_transform`] restricted to `|t| <= m`:
/// `(2 pi)^{-1} integral_{|t| <= m} exp(-i t x) F(t) dt`.
pub fn inverse_transform(spectrum: &GridFunction, x_space: SpaceSpec, m: f64) -> Result<GridFunction> {
    require_uniform_line(spectrum)?;
    let n = spectrum.len();
    if x_space.resolution != n || dual_space(&x_space) != *spectrum.space() {
        return Err(Error::SpaceMismatch("spectrum does not live on the dual of the target grid".into()));
    }
    let dt = 2.0 * spectrum.space().x_max / n as f64;
    let x_max = x_space.x_max;
    let mut buf: Vec<Complex64> = spectrum
        .nodes()
        .iter()
        .zip(spectrum.values())
        .map(|(&t, v)| if t.abs() <= m { v * Complex64::from_polar(1.0, t * x_max) } else { Complex64::new(0.0, 0.0) })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = dt / (2.0 * PI);
    let values = buf
        .into_iter()
        .enumerate()
        .map(|(j, b)| if j % 2 == 0 { b * scale } else { -b * scale })
        .collect();
    let grid = x_space.grid()?;
    GridFunction::on_grid(x_space, grid, values, &format!("F^-1[{}]", spectrum.meta()))
}

/// Result of [`s_band`], with a note when `f` has not decayed at `+-X`.
#[derive(Debug, Clone)]
pub struct BandLimited {
    pub function: GridFunction,
    /// `max(|f(-X)|, |f(X - dx)|) / max |f|`
    pub boundary_ratio: f64,
    pub warning: Option<String>,
}

/// `S_M[f]`: transform, cut to `|t| <= M`, transform back.
pub fn s_band(f: &GridFunction, m: f64) -> Result<BandLimited> {
    let spectrum = fourier_transform(f)?;
    let function = inverse_transform(&spectrum, *f.space(), m)?;
    let max = f.max_abs();
    let v = f.values();
    let boundary = v[0].norm().max(v[v.len() - 1].norm());
    let boundary_ratio = if max > 0.0 { boundary / max } else { 0.0 };
    let warning = (boundary_ratio >= DECAY_TOLERANCE)
        .then(|| format!("insufficient decay at the truncation boundary: |f|/max|f| = {boundary_ratio:.3e}"));
    Ok(BandLimited {
        function,
        boundary_ratio,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::lp;

    fn gauss() -> GridFunction {
        GridFunction::sample(SpaceSpec::line_uniform(40.0, 4096), "gauss", |x| (-0.5 * x * x).exp()).unwrap()
    }

    #[test]
    fn gaussian_is_self_dual() {
        let f = gauss();
        let ft = fourier_transform(&f).unwrap();
        for (t, v) in ft.nodes().iter().zip(ft.values()) {
            let want = (2.0 * PI).sqrt() * (-0.5 * t * t).exp();
            assert!((v - want).norm() < 1e-10, "t = {t}: {v}");
        }
    }

    #[test]
    fn band_limit_converges() {
        let f = gauss();
        let s = s_band(&f, 8.0).unwrap();
        assert!(s.warning.is_none());
        assert!(lp(&s.function.sub(&f).unwrap(), 2.0).unwrap() < 1e-6);
        let wide = GridFunction::sample(SpaceSpec::line_uniform(5.0, 256), "flat", |_| 1.0).unwrap();
        assert!(s_band(&wide, 1.0).unwrap().warning.is_some());
    }

    #[test]
    fn band_limited_input_is_fixed() {
        // sinc^2 has spectrum supported in |t| <= 2
        let f = GridFunction::sample(SpaceSpec::line_uniform(2000.0, 1 << 16), "sinc2", |x| {
            if x == 0.0 {
                1.0
            } else {
                (x.sin() / x).powi(2)
            }
        })
        .unwrap();
        let s = s_band(&f, 2.5).unwrap();
        let err = lp(&s.function.sub(&f).unwrap(), 2.0).unwrap() / lp(&f, 2.0).unwrap();
        assert!(err < 1e-3, "{err}");
    }
}
