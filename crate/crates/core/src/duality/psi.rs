use std::sync::Arc;

use super::{Conjugate, YoungFunction};
use crate::error::{Error, Result};
use crate::numeric::logspace;

/// Upper end of the grid on which class membership is checked.
const CHECK_P_MAX: f64 = 256.0;

#[derive(Debug, Clone, PartialEq)]
pub enum PsiKind {
    /// `p^{1/m}`
    Power { m: f64 },
    /// `p^{1/m} (log p)^r`, the moment scale of `N_{m,r}`
    PowerLog { m: f64, r: f64 },
    /// `exp(W*(p) / p)` with the conjugate taken over `z >= lo`
    FromYoung { young: YoungFunction, lo: f64 },
    /// Tabulated values; `p log psi(p)` is interpolated linearly, which keeps it convex.
    Tabulated { p: Vec<f64>, value: Vec<f64> },
    /// `p^d psi(p)`
    Shift { base: Box<PsiFunction>, d: u32 },
    /// `psi(p) (log p)^r`
    LogFactor { base: Box<PsiFunction>, r: f64 },
}

/// A member of the class Psi: positive, strictly increasing, unbounded, with
/// `p log psi(p)` convex, on `[alpha, p_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiFunction {
    alpha: f64,
    p_max: f64,
    kind: PsiKind,
    warnings: Vec<String>,
}

impl PsiFunction {
    pub fn new(alpha: f64, kind: PsiKind) -> Result<Self> {
        Self::with_domain(alpha, f64::INFINITY, kind)
    }

    pub fn power(m: f64) -> Result<Self> {
        Self::new(1.0, PsiKind::Power { m })
    }

    pub fn with_domain(alpha: f64, p_max: f64, kind: PsiKind) -> Result<Self> {
        if !(alpha >= 1.0) || !(p_max > alpha) {
            return Err(Error::InvalidParameter(format!(
                "psi domain [{alpha}, {p_max}] must satisfy 1 <= alpha < p_max"
            )));
        }
        match &kind {
            PsiKind::Power { m } | PsiKind::PowerLog { m, .. } if !(*m > 0.0) => {
                return Err(Error::InvalidParameter(format!("psi exponent needs m > 0, got {m}")))
            }
            PsiKind::PowerLog { r, .. } if *r != 0.0 && alpha <= 1.0 => {
                return Err(Error::InvalidParameter("log factor needs alpha > 1".into()))
            }
            PsiKind::LogFactor { .. } if alpha <= 1.0 => {
                return Err(Error::InvalidParameter("log factor needs alpha > 1".into()))
            }
            PsiKind::Tabulated { p, value } => {
                if p.len() < 3 || p.len() != value.len() || p.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::InvalidParameter(
                        "tabulated psi needs >= 3 increasing nodes with matching values".into(),
                    ));
                }
                if value.iter().any(|v| !(*v > 0.0)) {
                    return Err(Error::NotInPsi("tabulated values must be positive".into()));
                }
            }
            _ => {}
        }
        let p_max = match &kind {
            PsiKind::Tabulated { p, .. } => p_max.min(p[p.len() - 1]),
            _ => p_max,
        };
        if !(p_max > alpha) {
            return Err(Error::InvalidParameter("tabulated psi must extend beyond alpha".into()));
        }
        let psi = Self {
            alpha,
            p_max,
            kind,
            warnings: Vec::new(),
        };
        psi.validate()?;
        Ok(psi)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn kind(&self) -> &PsiKind {
        &self.kind
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Same function on a different lower endpoint.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::with_domain(alpha, self.p_max, self.kind.clone())
    }

    /// `log psi(p)`.
    pub fn ln_eval(&self, p: f64) -> f64 {
        match &self.kind {
            PsiKind::Power { m } => p.ln() / m,
            PsiKind::PowerLog { m, r } => p.ln() / m + r * p.ln().ln(),
            PsiKind::FromYoung { young, lo } => {
                let conj = Conjugate::new(Arc::new(young.clone()), *lo);
                conj.at(p).value / p
            }
            PsiKind::Tabulated { p: ps, value } => {
                let n = ps.len();
                let i = match ps.partition_point(|&x| x <= p) {
                    0 => 0,
                    k if k >= n => n - 2,
                    k => k - 1,
                };
                let v0 = ps[i] * value[i].ln();
                let v1 = ps[i + 1] * value[i + 1].ln();
                let v = v0 + (v1 - v0) * (p - ps[i]) / (ps[i + 1] - ps[i]);
                v / p
            }
            PsiKind::Shift { base, d } => *d as f64 * p.ln() + base.ln_eval(p),
            PsiKind::LogFactor { base, r } => base.ln_eval(p) + r * p.ln().ln(),
        }
    }

    pub fn eval(&self, p: f64) -> f64 {
        self.ln_eval(p).exp()
    }

    /// `p log psi(p)`, the function whose conjugate defines `N([psi])`.
    pub fn moment_exponent(&self, p: f64) -> f64 {
        p * self.ln_eval(p)
    }

    fn check_grid(&self) -> Vec<f64> {
        logspace(self.alpha, self.p_max.min(CHECK_P_MAX.max(4.0 * self.alpha)), 64)
    }

    fn validate(&self) -> Result<()> {
        let grid = self.check_grid();
        let lv: Vec<f64> = grid.iter().map(|&p| self.ln_eval(p)).collect();
        if lv.iter().any(|v| !v.is_finite()) {
            return Err(Error::NotInPsi("psi must be positive and finite on its domain".into()));
        }
        if lv.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::NotInPsi("psi must be strictly increasing".into()));
        }
        let v: Vec<f64> = grid.iter().zip(&lv).map(|(p, l)| p * l).collect();
        let slopes: Vec<f64> = (0..grid.len() - 1)
            .map(|i| (v[i + 1] - v[i]) / (grid[i + 1] - grid[i]))
            .collect();
        if slopes.windows(2).any(|s| s[1] < s[0] - 1e-8 * s[0].abs().max(1.0)) {
            return Err(Error::NotInPsi("p log psi(p) must be convex".into()));
        }
        Ok(())
    }
}

/// `psi(p) = exp(W*(p) / p)`.
///
/// Where the conjugate is unbounded (a kernel whose slope stays bounded) the
/// domain is cut back to the last grid point with a finite value and a
/// warning is recorded.
pub fn psi_from_young(young: &YoungFunction) -> Result<PsiFunction> {
    psi_from_young_on(young, 2.0)
}

/// [`psi_from_young`] with the conjugate taken over `z >= lo`.
pub fn psi_from_young_on(young: &YoungFunction, lo: f64) -> Result<PsiFunction> {
    if !lo.is_finite() {
        return Err(Error::InvalidParameter(format!("conjugate domain start must be finite, got {lo}")));
    }
    let conj = Conjugate::new(Arc::new(young.clone()), lo);
    let grid = logspace(1.0, CHECK_P_MAX, 64);
    let mut p_max = f64::INFINITY;
    let mut warnings = Vec::new();
    if let Some(i) = grid.iter().position(|&p| conj.at(p).unbounded) {
        if i < 2 {
            return Err(Error::NotInPsi("conjugate unbounded near p = 1".into()));
        }
        p_max = grid[i - 1];
        warnings.push(format!("conjugate unbounded at p = {:.4}; domain truncated to [1, {p_max:.4}]", grid[i]));
    }
    let mut psi = PsiFunction::with_domain(1.0, p_max, PsiKind::FromYoung { young: young.clone(), lo })?;
    psi.warnings = warnings;
    Ok(psi)
}

/// `psi_d(p) = p^d psi(p)`.
pub fn psi_shift_d(psi: &PsiFunction, d: u32) -> Result<PsiFunction> {
    if d == 0 {
        return Ok(psi.clone());
    }
    PsiFunction::with_domain(
        psi.alpha,
        psi.p_max,
        PsiKind::Shift {
            base: Box::new(psi.clone()),
            d,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::YoungKind;

    #[test]
    fn constant_is_rejected() {
        let p = vec![1.0, 2.0, 4.0, 8.0];
        let value = vec![3.0; 4];
        assert!(matches!(
            PsiFunction::new(1.0, PsiKind::Tabulated { p, value }),
            Err(Error::NotInPsi(_))
        ));
    }

    #[test]
    fn shift_arithmetic() {
        let psi = PsiFunction::power(2.0).unwrap();
        let s = psi_shift_d(&psi, 1).unwrap();
        assert!((s.eval(4.0) - 8.0).abs() < 1e-12);
        assert_eq!(psi_shift_d(&psi, 0).unwrap(), psi);
    }

    #[test]
    fn from_exp_kernel_is_p_over_e() {
        let psi = psi_from_young(&YoungFunction::exp(1.0).unwrap()).unwrap();
        for p in [3f64.exp(), 50.0, 200.0] {
            let rel = (psi.eval(p) - p / std::f64::consts::E).abs() / (p / std::f64::consts::E);
            assert!(rel < 1e-9, "p = {p}: rel {rel}");
        }
    }

    #[test]
    fn from_exp_m_kernel_scales_like_power() {
        // W*(p) = (p/m)(log(p/m) - 1) for p >= m e^{2m}, so psi / p^{1/m} -> (m e)^{-1/m}
        let m = 2.0;
        let psi = psi_from_young(&YoungFunction::exp(m).unwrap()).unwrap();
        let limit = (m * std::f64::consts::E).powf(-1.0 / m);
        for p in [200.0, 1000.0, 5000.0] {
            let ratio = psi.eval(p) / p.powf(1.0 / m);
            assert!((ratio - limit).abs() < 1e-8, "p = {p}: {ratio} vs {limit}");
        }
    }

    #[test]
    fn bounded_slope_kernel_truncates_domain() {
        let z: Vec<f64> = (0..10).map(|i| 2.0 + i as f64).collect();
        let value: Vec<f64> = z.iter().map(|x| x * x).collect();
        let w = YoungFunction::new(YoungKind::Tabulated { z, value }).unwrap();
        let psi = psi_from_young(&w).unwrap();
        assert!(psi.p_max().is_finite());
        assert_eq!(psi.warnings().len(), 1);
    }

    #[test]
    fn tabulated_interpolates_exactly_at_nodes() {
        let p = vec![2.0, 4.0, 8.0, 16.0];
        let value: Vec<f64> = p.iter().map(|x: &f64| x.sqrt()).collect();
        let psi = PsiFunction::new(2.0, PsiKind::Tabulated { p: p.clone(), value: value.clone() }).unwrap();
        for (x, v) in p.iter().zip(&value) {
            assert!((psi.eval(*x) - v).abs() < 1e-12);
        }
    }
}
