use std::sync::Arc;

use super::ConvexFn;
use crate::error::{Error, Result};
use crate::numeric::{maximize_concave_half_line, HalfLineMax};

const ARG_TOL: f64 = 1e-13;

/// One evaluation of `W*(p) = sup_{z >= lo} (p z - W(z))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugatePoint {
    pub value: f64,
    pub argmax: f64,
    pub unbounded: bool,
}

/// Lazily evaluated conjugate of a convex function restricted to `[lo, inf)`.
///
/// By the envelope theorem the slope of the conjugate at `p` is the
/// maximizer `z*(p)`, which [`ConvexFn::slope`] returns directly.
#[derive(Clone)]
pub struct Conjugate {
    base: Arc<dyn ConvexFn>,
    lo: f64,
}

impl Conjugate {
    pub fn new(base: Arc<dyn ConvexFn>, lo: f64) -> Self {
        Self { base, lo }
    }

    pub fn domain_lo(&self) -> f64 {
        self.lo
    }

    pub fn at(&self, p: f64) -> ConjugatePoint {
        let base = &self.base;
        match maximize_concave_half_line(|z| p * z - base.value(z), self.lo, ARG_TOL) {
            HalfLineMax::Finite { argmax, value } => ConjugatePoint {
                value,
                argmax,
                unbounded: false,
            },
            HalfLineMax::Unbounded => ConjugatePoint {
                value: f64::INFINITY,
                argmax: f64::INFINITY,
                unbounded: true,
            },
        }
    }
}

impl ConvexFn for Conjugate {
    fn value(&self, p: f64) -> f64 {
        self.at(p).value
    }

    fn slope(&self, p: f64) -> f64 {
        self.at(p).argmax
    }
}

/// Conjugate tabulated on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreTable {
    pub p: Vec<f64>,
    pub value: Vec<f64>,
    pub argmax: Vec<f64>,
    pub unbounded: Vec<bool>,
}

impl LegendreTable {
    pub fn any_unbounded(&self) -> bool {
        self.unbounded.iter().any(|&u| u)
    }
}

/// Tabulates `W*(p) = sup_{z >= domain_lo} (p z - W(z))` on `p_grid`.
///
/// Each grid point is solved independently by bracketed golden-section
/// search; an unbounded supremum is flagged per point instead of failing.
pub fn legendre(w: Arc<dyn ConvexFn>, domain_lo: f64, p_grid: &[f64]) -> Result<LegendreTable> {
    if p_grid.is_empty() || p_grid.windows(2).any(|s| s[1] <= s[0]) {
        return Err(Error::InvalidParameter(
            "p grid must be non-empty and strictly increasing".into(),
        ));
    }
    if !domain_lo.is_finite() {
        return Err(Error::InvalidParameter("domain_lo must be finite".into()));
    }
    let conj = Conjugate::new(w, domain_lo);
    let points: Vec<ConjugatePoint> = p_grid.iter().map(|&p| conj.at(p)).collect();
    Ok(LegendreTable {
        p: p_grid.to_vec(),
        value: points.iter().map(|c| c.value).collect(),
        argmax: points.iter().map(|c| c.argmax).collect(),
        unbounded: points.iter().map(|c| c.unbounded).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::FnConvex;
    use crate::numeric::logspace;

    #[test]
    fn quadratic_self_dual() {
        let t = legendre(Arc::new(FnConvex(|z: f64| z * z / 2.0)), 2.0, &[4.0]).unwrap();
        assert!((t.value[0] - 8.0).abs() < 1e-10);
        assert!((t.argmax[0] - 4.0).abs() < 1e-5);
    }

    #[test]
    fn exponential_conjugate_closed_form() {
        let p = 3f64.exp();
        let t = legendre(Arc::new(FnConvex(f64::exp)), 2.0, &[p]).unwrap();
        // stationarity p = e^z gives W*(p) = p (log p - 1) = 2 e^3
        let expected = p * (p.ln() - 1.0);
        assert!((t.value[0] - expected).abs() < 1e-9 * expected);
        assert!((expected - 40.171).abs() < 1e-3);
    }

    #[test]
    fn boundary_maximizer_when_slope_exceeds_p() {
        // W'(2) = e^2 > p = 3, so the sup sits at z = 2
        let t = legendre(Arc::new(FnConvex(f64::exp)), 2.0, &[3.0]).unwrap();
        assert!((t.argmax[0] - 2.0).abs() < 1e-9);
        assert!((t.value[0] - (6.0 - 2f64.exp())).abs() < 1e-9);
    }

    #[test]
    fn linear_growth_is_unbounded() {
        let t = legendre(Arc::new(FnConvex(|z: f64| z)), 2.0, &[0.5, 2.0]).unwrap();
        assert_eq!(t.unbounded, vec![false, true]);
        assert!(t.value[1].is_infinite());
        assert!(t.any_unbounded());
    }

    #[test]
    fn conjugate_is_convex_on_grid() {
        let grid = logspace(1.0, 500.0, 80);
        let t = legendre(Arc::new(FnConvex(|z: f64| (1.5 * z).exp())), 2.0, &grid).unwrap();
        let slopes: Vec<f64> = (0..grid.len() - 1)
            .map(|i| (t.value[i + 1] - t.value[i]) / (grid[i + 1] - grid[i]))
            .collect();
        assert!(slopes.windows(2).all(|s| s[1] >= s[0] - 1e-9 * s[0].abs().max(1.0)));
    }

    #[test]
    fn rejects_bad_grid() {
        assert!(legendre(Arc::new(FnConvex(f64::exp)), 2.0, &[3.0, 2.0]).is_err());
        assert!(legendre(Arc::new(FnConvex(f64::exp)), 2.0, &[]).is_err());
    }
}
