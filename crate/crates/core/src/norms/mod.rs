//! Lebesgue, weighted, Orlicz and moment-growth norms of grid functions and
//! finite sequences.

mod grand;
mod orlicz;
mod sequence;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{log_sum_exp, logspace};
use crate::space::{GridFunction, SpaceKind};

pub use grand::{g_abab, g_abab_on, g_psi, g_psi_nu, g_psi_on, l0_test, AbabParams, L0Membership, P_MAX, P_POINTS};
pub use orlicz::{orlicz, ORLICZ_INFINITE};
pub use sequence::{seq_g, seq_lp, seq_lp_nu, SeqVariant};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax_p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmin_v: Option<f64>,
    /// The norm is judged infinite; `value` is then `+inf`.
    pub infinite: bool,
    /// A sup-type norm peaked at the edge of its finite grid.
    pub possibly_infinite: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

impl NormReport {
    pub fn finite(value: f64) -> Self {
        Self {
            value,
            argmax_p: None,
            argmin_v: None,
            infinite: false,
            possibly_infinite: false,
            diagnostics: Vec::new(),
        }
    }

    pub fn infinite(note: String) -> Self {
        Self {
            infinite: true,
            diagnostics: vec![note],
            ..Self::finite(f64::INFINITY)
        }
    }
}

/// Log-spaced p-grid on `[lo, hi]`.
pub fn p_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    logspace(lo, hi, n)
}

/// `log |f|_p`; `-inf` for the zero function.
pub fn ln_lp(f: &GridFunction, p: f64) -> f64 {
    let terms = f
        .values()
        .iter()
        .zip(f.weights())
        .filter(|(v, _)| v.norm() > 0.0)
        .map(|(v, w)| w.ln() + p * v.norm().ln());
    log_sum_exp(terms) / p
}

/// `|f|_p = (sum w_i |f_i|^p)^{1/p}`, accumulated in log space.
pub fn lp(f: &GridFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!("L_p needs p >= 1, got {p}")));
    }
    Ok(ln_lp(f, p).exp())
}

/// `log |f|_p(nu)`, weight `|x|^{p-2}`.
pub fn ln_lp_nu(f: &GridFunction, p: f64) -> f64 {
    let terms = f
        .values()
        .iter()
        .zip(f.weights())
        .zip(f.nodes())
        .filter(|((v, _), x)| v.norm() > 0.0 && (p == 2.0 || **x != 0.0))
        .map(|((v, w), x)| {
            let weight = if p == 2.0 { 0.0 } else { (p - 2.0) * x.abs().ln() };
            w.ln() + weight + p * v.norm().ln()
        });
    log_sum_exp(terms) / p
}

/// `|f|_p(nu) = (integral |x|^{p-2} |f|^p dx)^{1/p}` on a `line-nu` space.
pub fn lp_nu(f: &GridFunction, p: f64) -> Result<f64> {
    check_nu(f, p)?;
    Ok(ln_lp_nu(f, p).exp())
}

fn check_nu(f: &GridFunction, p: f64) -> Result<()> {
    if !(p >= 2.0) {
        return Err(Error::InvalidParameter(format!("L_p(nu) needs p >= 2, got {p}")));
    }
    if f.space().kind != SpaceKind::LineNu {
        return Err(Error::SpaceMismatch(format!("L_p(nu) needs a line-nu space, got {:?}", f.space().kind)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceSpec;
    use statrs::function::gamma::ln_gamma;

    #[test]
    fn constant_has_flat_norms() {
        let f = GridFunction::sample(SpaceSpec::torus(64), "c", |_| 2.5).unwrap();
        for p in [1.0, 2.0, 7.5, 100.0] {
            assert!((lp(&f, p).unwrap() - 2.5).abs() < 1e-12);
        }
        assert!(lp(&f, 0.5).is_err());
        assert_eq!(lp(&GridFunction::zeros(SpaceSpec::torus(64)).unwrap(), 3.0).unwrap(), 0.0);
    }

    #[test]
    fn log_singularity_moments() {
        let f = GridFunction::sample(SpaceSpec::torus_graded(16384), "g_1", |x| (x / (2.0 * std::f64::consts::PI)).ln().abs()).unwrap();
        for p in [2.0, 8.0, 32.0, 64.0, 256.0] {
            let want = (ln_gamma(p + 1.0) / p).exp();
            let got = lp(&f, p).unwrap();
            assert!((got / want - 1.0).abs() < 0.02, "p = {p}: {got} vs {want}");
        }
    }

    #[test]
    fn weighted_norm() {
        let space = SpaceSpec::line_nu(10.0, 4096);
        let f = GridFunction::sample(space, "I[1,2]/x", |x| if (1.0..=2.0).contains(&x) { 1.0 / x } else { 0.0 }).unwrap();
        for p in [2.0, 3.0, 10.0] {
            let got = lp_nu(&f, p).unwrap();
            // the cells straddling 1 and 2 are sampled at their midpoints
            assert!((got - 0.5f64.powf(1.0 / p)).abs() < 5e-3, "p = {p}: {got}");
        }
        assert!((lp_nu(&f, 2.0).unwrap() - lp(&f, 2.0).unwrap()).abs() < 1e-14);
        assert!(lp_nu(&f, 1.5).is_err());
        let torus = GridFunction::sample(SpaceSpec::torus(64), "1", |_| 1.0).unwrap();
        assert!(lp_nu(&torus, 2.0).is_err());
    }
}
