use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_nu, ln_lp, ln_lp_nu, p_grid, NormReport};
use crate::duality::{classify_ratio_trend, Classification, PsiFunction};
use crate::error::{Error, Result};
use crate::numeric::logspace;
use crate::space::GridFunction;

/// Default upper end of p-grids.
pub const P_MAX: f64 = 256.0;
pub const P_POINTS: usize = 200;
const ABAB_DEPTH: f64 = 1e-6;

/// Maximizes `exp(ln_term(p))` over `grid`, in order.
fn sup_on_grid<F: Fn(f64) -> f64 + Sync>(grid: &[f64], ln_term: F) -> NormReport {
    let ln_vals: Vec<f64> = grid.par_iter().map(|&p| ln_term(p)).collect();
    let (i, &best) = ln_vals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("grid is nonempty");
    if best == f64::NEG_INFINITY {
        return NormReport {
            argmax_p: Some(grid[0]),
            ..NormReport::finite(0.0)
        };
    }
    let mut r = NormReport {
        argmax_p: Some(grid[i]),
        ..NormReport::finite(best.exp())
    };
    if i == grid.len() - 1 && grid.len() > 1 {
        r.possibly_infinite = true;
        r.diagnostics.push(format!("sup attained at the grid end p = {}", grid[i]));
    }
    r
}

fn check_psi_domain(alpha: f64, psi: &PsiFunction) -> Result<()> {
    if alpha < psi.alpha() || alpha >= psi.p_max() {
        return Err(Error::InvalidParameter(format!(
            "alpha = {alpha} outside the psi domain [{}, {})",
            psi.alpha(),
            psi.p_max()
        )));
    }
    Ok(())
}

fn default_grid(alpha: f64, psi: &PsiFunction) -> Vec<f64> {
    p_grid(alpha, P_MAX.max(2.0 * alpha).min(psi.p_max()), P_POINTS)
}

/// `||f||G(alpha; psi) = sup_{p >= alpha} |f|_p / psi(p)` on the default grid `[alpha, 256]`.
pub fn g_psi(f: &GridFunction, alpha: f64, psi: &PsiFunction) -> Result<NormReport> {
    check_psi_domain(alpha, psi)?;
    Ok(g_psi_on(f, psi, &default_grid(alpha, psi)))
}

/// Same sup over a caller-chosen increasing p-grid.
pub fn g_psi_on(f: &GridFunction, psi: &PsiFunction, grid: &[f64]) -> NormReport {
    sup_on_grid(grid, |p| ln_lp(f, p) - psi.ln_eval(p))
}

/// `sup_{p >= alpha} |f|_p(nu) / psi(p)`, `alpha >= 2`.
pub fn g_psi_nu(f: &GridFunction, alpha: f64, psi: &PsiFunction) -> Result<NormReport> {
    check_nu(f, alpha)?;
    check_psi_domain(alpha, psi)?;
    Ok(sup_on_grid(&default_grid(alpha, psi), |p| ln_lp_nu(f, p) - psi.ln_eval(p)))
}

/// Parameters of `G(a, b, alpha, beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbabParams {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl AbabParams {
    pub fn new(a: f64, b: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(a >= 1.0 && b > a && b.is_finite()) || !(alpha >= 0.0) || !(beta >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "G(a,b,alpha,beta) needs 1 <= a < b < inf and alpha, beta >= 0; got ({a}, {b}, {alpha}, {beta})"
            )));
        }
        Ok(Self { a, b, alpha, beta })
    }

    /// `h = min((a + b) / 2, 2a)`.
    pub fn h(&self) -> f64 {
        (0.5 * (self.a + self.b)).min(2.0 * self.a)
    }

    /// `log zeta(p)`: `(p - a)^alpha` below `h`, `(b - p)^beta` from `h` on.
    pub fn ln_zeta(&self, p: f64) -> f64 {
        let (d, e) = if p < self.h() { (p - self.a, self.alpha) } else { (self.b - p, self.beta) };
        if e == 0.0 {
            0.0
        } else {
            e * d.ln()
        }
    }

    /// Grid in `(a, b)` graded geometrically toward both ends; the closest
    /// points sit at relative distance `depth` from `a` and `b`. Linear
    /// interior points and a point just below `h` (where `zeta` may jump)
    /// are merged in.
    pub fn grid(&self, depth: f64, n: usize) -> Vec<f64> {
        let h = self.h();
        let s = logspace(depth, 1.0, (n / 2).max(2));
        let mut g: Vec<f64> = s.iter().map(|t| self.a + (h - self.a) * t).collect();
        g.extend(s.iter().rev().skip(1).map(|t| self.b - (self.b - h) * t));
        let k = (n / 2).max(2);
        g.extend((1..k).map(|i| self.a + (self.b - self.a) * i as f64 / k as f64));
        g.push(h - (h - self.a) * 1e-9);
        g.sort_by(f64::total_cmp);
        g.dedup();
        g
    }
}

/// `sup_{a < p < b} |f|_p zeta(p)` on the default graded grid.
pub fn g_abab(f: &GridFunction, params: &AbabParams) -> NormReport {
    g_abab_on(f, params, &params.grid(ABAB_DEPTH, P_POINTS))
}

pub fn g_abab_on(f: &GridFunction, params: &AbabParams, grid: &[f64]) -> NormReport {
    let mut r = sup_on_grid(grid, |p| ln_lp(f, p) + params.ln_zeta(p));
    let i = r.argmax_p.and_then(|p| grid.iter().position(|&q| q == p));
    if i == Some(0) && grid.len() > 1 && r.value > 0.0 {
        r.possibly_infinite = true;
        r.diagnostics.push(format!("sup attained at the grid start p = {}", grid[0]));
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum L0Membership {
    InL0,
    NotInL0,
    Inconclusive,
}

/// Classifies `lim |f|_p / psi(p) = 0` from the tail of a 200-point grid on
/// `[psi.alpha, p_max]`, with the same rule as [`crate::duality::dominance`].
pub fn l0_test(f: &GridFunction, psi: &PsiFunction, p_max: f64) -> L0Membership {
    let hi = p_max.min(psi.p_max());
    if !(hi > psi.alpha()) {
        return L0Membership::Inconclusive;
    }
    let ratios: Vec<f64> = p_grid(psi.alpha(), hi, P_POINTS)
        .par_iter()
        .map(|&p| (ln_lp(f, p) - psi.ln_eval(p)).exp())
        .collect();
    if ratios.iter().all(|&r| r == 0.0) {
        return L0Membership::InL0;
    }
    match classify_ratio_trend(&ratios) {
        Classification::Dominated => L0Membership::InL0,
        Classification::NotDominated => L0Membership::NotInL0,
        Classification::Inconclusive => L0Membership::Inconclusive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceSpec;
    use statrs::function::gamma::ln_gamma;

    fn g_m(m: f64) -> GridFunction {
        GridFunction::sample(SpaceSpec::torus_graded(16384), "g_m", move |x| {
            (x / (2.0 * std::f64::consts::PI)).ln().abs().powf(1.0 / m)
        })
        .unwrap()
    }

    #[test]
    fn constant_peaks_at_alpha() {
        let f = GridFunction::sample(SpaceSpec::torus(64), "c", |_| 3.0).unwrap();
        let psi = PsiFunction::power(2.0).unwrap();
        let r = g_psi(&f, 2.0, &psi).unwrap();
        assert!((r.value - 3.0 * 2f64.powf(-0.5)).abs() < 1e-12);
        assert_eq!(r.argmax_p, Some(2.0));
        assert!(!r.possibly_infinite);
        assert!(g_psi(&f, 0.5, &psi).is_err());
    }

    #[test]
    fn stirling_ratio() {
        for m in [1.0, 2.0] {
            let f = g_m(m);
            let psi = PsiFunction::power(m).unwrap();
            let r = g_psi(&f, 1.0, &psi).unwrap();
            assert!(r.value.is_finite());
            // exact sup of Gamma(p/m + 1)^{1/p} / p^{1/m} on the same grid
            let grid = default_grid(1.0, &psi);
            let exact = grid
                .iter()
                .map(|&p| (ln_gamma(p / m + 1.0) / p - p.ln() / m).exp())
                .fold(0.0, f64::max);
            assert!((r.value / exact - 1.0).abs() < 0.02, "m = {m}: {} vs {exact}", r.value);
            let tail = (ln_gamma(256.0 / m + 1.0) / 256.0 - 256f64.ln() / m).exp();
            let limit = (m * std::f64::consts::E).powf(-1.0 / m);
            assert!((tail / limit - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn l0_classes() {
        let trig = GridFunction::sample(SpaceSpec::torus(256), "cos", |x| x.cos() + 0.5 * (3.0 * x).sin()).unwrap();
        assert_eq!(l0_test(&trig, &PsiFunction::power(1.0).unwrap(), 256.0), L0Membership::InL0);
        let g2 = g_m(2.0);
        assert_eq!(l0_test(&g2, &PsiFunction::power(2.0).unwrap(), 256.0), L0Membership::NotInL0);
        assert_eq!(l0_test(&g2, &PsiFunction::power(1.0).unwrap(), 256.0), L0Membership::InL0);
    }

    #[test]
    fn weighted_sup() {
        let space = SpaceSpec::line_nu(10.0, 4096);
        let f = GridFunction::sample(space, "I[1,2]/x", |x| if (1.0..=2.0).contains(&x) { 1.0 / x } else { 0.0 }).unwrap();
        let psi = PsiFunction::power(1.0).unwrap();
        let r = g_psi_nu(&f, 2.0, &psi).unwrap();
        assert_eq!(r.argmax_p, Some(2.0));
        assert!((r.value - 0.5f64.sqrt() / 2.0).abs() < 5e-3);
        assert!(g_psi_nu(&f, 1.5, &psi).is_err());
        let zero = GridFunction::zeros(space).unwrap();
        assert_eq!(g_psi_nu(&zero, 2.0, &psi).unwrap().value, 0.0);
    }

    #[test]
    fn abab_grid_shape() {
        let prm = AbabParams::new(2.0, 4.0, 1.0, 1.0).unwrap();
        assert_eq!(prm.h(), 3.0);
        let g = prm.grid(1e-6, 200);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert!(g[0] > 2.0 && g[0] - 2.0 < 1e-5);
        assert!(*g.last().unwrap() < 4.0 && 4.0 - g.last().unwrap() < 1e-5);
        assert!(g.contains(&3.0));
        assert!(AbabParams::new(3.0, 2.0, 1.0, 1.0).is_err());
        assert_eq!(prm.ln_zeta(3.5), 0.5f64.ln());
    }
}
