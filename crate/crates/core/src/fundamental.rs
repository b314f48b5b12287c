//! Fundamental functions `phi(delta) = ||I_A||`, `mes(A) = delta`, in closed
//! form and measured on indicator functions.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::AbabParams;
use crate::space::{GridFunction, SpaceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaTag {
    GAlphaM,
    GAbab,
    Empirical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundamentalCurve {
    pub delta_grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Branch label per point (closed forms) or the realized measure (empirical).
    pub branch: Vec<String>,
    pub formula_tag: FormulaTag,
}

impl FundamentalCurve {
    /// `phi` nondecreasing and `phi(delta) / delta` nonincreasing, up to relative `tol`.
    pub fn is_quasi_concave(&self, tol: f64) -> bool {
        let pairs: Vec<(f64, f64)> = self.delta_grid.iter().copied().zip(self.values.iter().copied()).collect();
        pairs.windows(2).all(|w| {
            let ((d0, v0), (d1, v1)) = (w[0], w[1]);
            v1 >= v0 * (1.0 - tol) && v1 / d1 <= (v0 / d0) * (1.0 + tol)
        })
    }

    /// CSV with columns `delta, value, branch`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["delta", "value", "branch"])?;
        for ((d, v), b) in self.delta_grid.iter().zip(&self.values).zip(&self.branch) {
            w.write_record([d.to_string(), v.to_string(), b.clone()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Log-spaced grid with `per_decade` points per factor of ten.
pub fn delta_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let n = ((hi / lo).log10() * per_decade as f64).ceil().max(1.0) as usize + 1;
    crate::numeric::logspace(lo, hi, n)
}

/// Fundamental function of `G(alpha; p^{1/m})`, i.e. `sup_{p >= alpha} delta^{1/p} p^{-1/m}`.
///
/// The interior maximizer is `p = m |log delta|`, so
/// `(e m |log delta|)^{-1/m}` holds for `delta <= exp(-alpha/m)` and
/// `alpha^{-1/m} delta^{1/alpha}` above.
pub fn phi_g_alpha_m(delta: f64, alpha: f64, m: f64) -> Result<f64> {
    if !(delta > 0.0) || !(alpha >= 1.0) || !(m > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "phi(G(alpha, m)) needs delta > 0, alpha >= 1, m > 0; got ({delta}, {alpha}, {m})"
        )));
    }
    let ln_d = delta.ln();
    if ln_d <= -alpha / m {
        Ok((std::f64::consts::E * m * ln_d.abs()).powf(-1.0 / m))
    } else {
        Ok(alpha.powf(-1.0 / m) * delta.powf(1.0 / alpha))
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!("delta must be positive and finite, got {delta}")));
    }
    Ok(())
}

/// `delta_1 = exp(alpha h^2 / (h - a))`.
pub fn delta_1(prm: &AbabParams) -> f64 {
    let h = prm.h();
    (prm.alpha * h * h / (h - prm.a)).exp()
}

/// `delta_2 = exp(-h^2 beta / (b - h))`.
pub fn delta_2(prm: &AbabParams) -> f64 {
    let h = prm.h();
    (-h * h * prm.beta / (prm.b - h)).exp()
}

/// Stationary point of `delta^{1/p} (p - a)^alpha`, the smaller root of
/// `alpha p^2 - log(delta) p + a log(delta) = 0`.
pub fn p_1(delta: f64, prm: &AbabParams) -> Result<f64> {
    check_delta(delta)?;
    let l = delta.ln();
    if prm.alpha == 0.0 {
        return Ok(prm.a);
    }
    let disc = l * l / (4.0 * prm.alpha * prm.alpha) - prm.a * l / prm.alpha;
    if disc < 0.0 {
        return Err(Error::BranchDomain { branch: "p1", delta });
    }
    Ok(l / (2.0 * prm.alpha) - disc.sqrt())
}

/// Stationary point of `delta^{1/p} (b - p)^beta`, the positive root of
/// `beta p^2 + |log delta| p - b |log delta| = 0`.
pub fn p_2(delta: f64, prm: &AbabParams) -> Result<f64> {
    check_delta(delta)?;
    if prm.beta == 0.0 {
        return Ok(prm.b);
    }
    let l = delta.ln().abs();
    let disc = l * l / (4.0 * prm.beta * prm.beta) + prm.b * l / prm.beta;
    if disc < 0.0 || delta >= 1.0 {
        return Err(Error::BranchDomain { branch: "p2", delta });
    }
    Ok(-l / (2.0 * prm.beta) + disc.sqrt())
}

/// `phi_1`: the sup over `(a, h)`.
pub fn phi_1(delta: f64, prm: &AbabParams) -> Result<(f64, &'static str)> {
    check_delta(delta)?;
    let h = prm.h();
    if delta >= delta_1(prm) {
        let p = p_1(delta, prm)?;
        let z = if prm.alpha == 0.0 { 1.0 } else { (p - prm.a).powf(prm.alpha) };
        Ok((delta.powf(1.0 / p) * z, "phi1:p1"))
    } else {
        Ok((delta.powf(1.0 / h) * (h - prm.a).powf(prm.alpha), "phi1:h"))
    }
}

/// `phi_2`: the sup over `[h, b)`.
pub fn phi_2(delta: f64, prm: &AbabParams) -> Result<(f64, &'static str)> {
    check_delta(delta)?;
    let h = prm.h();
    if delta < delta_2(prm) {
        let p = p_2(delta, prm)?;
        let z = if prm.beta == 0.0 { 1.0 } else { (prm.b - p).powf(prm.beta) };
        Ok((delta.powf(1.0 / p) * z, "phi2:p2"))
    } else {
        Ok((delta.powf(1.0 / h) * (prm.b - h).powf(prm.beta), "phi2:h"))
    }
}

/// `phi(delta; G(a, b, alpha, beta)) = max(phi_1, phi_2)`.
pub fn phi_g_abab(delta: f64, prm: &AbabParams) -> Result<f64> {
    Ok(phi_g_abab_branch(delta, prm)?.0)
}

fn phi_g_abab_branch(delta: f64, prm: &AbabParams) -> Result<(f64, &'static str)> {
    let (v1, b1) = phi_1(delta, prm)?;
    let (v2, b2) = phi_2(delta, prm)?;
    Ok(if v1 >= v2 { (v1, b1) } else { (v2, b2) })
}

/// Leading behaviour of `phi(delta; G(a, b, alpha, beta))` as `delta -> 0`:
/// `max(delta^{1/h} (h - a)^alpha, delta^{1/b} (beta b^2 / (e |log delta|))^beta)`.
pub fn phi_g_abab_small_delta(delta: f64, prm: &AbabParams) -> f64 {
    let h = prm.h();
    let l = delta.ln().abs();
    let left = delta.powf(1.0 / h) * (h - prm.a).powf(prm.alpha);
    let right = delta.powf(1.0 / prm.b) * (prm.beta * prm.b * prm.b / (std::f64::consts::E * l)).powf(prm.beta);
    left.max(right)
}

/// Closed-form curve of `G(alpha, m)`.
pub fn curve_g_alpha_m(deltas: &[f64], alpha: f64, m: f64) -> Result<FundamentalCurve> {
    let values = deltas.iter().map(|&d| phi_g_alpha_m(d, alpha, m)).collect::<Result<Vec<_>>>()?;
    let branch = deltas
        .iter()
        .map(|&d| if d.ln() <= -alpha / m { "interior" } else { "alpha" }.to_string())
        .collect();
    Ok(FundamentalCurve {
        delta_grid: deltas.to_vec(),
        values,
        branch,
        formula_tag: FormulaTag::GAlphaM,
    })
}

/// Closed-form curve of `G(a, b, alpha, beta)`.
pub fn curve_g_abab(deltas: &[f64], prm: &AbabParams) -> Result<FundamentalCurve> {
    let pts = deltas.iter().map(|&d| phi_g_abab_branch(d, prm)).collect::<Result<Vec<_>>>()?;
    Ok(FundamentalCurve {
        delta_grid: deltas.to_vec(),
        values: pts.iter().map(|p| p.0).collect(),
        branch: pts.iter().map(|p| p.1.to_string()).collect(),
        formula_tag: FormulaTag::GAbab,
    })
}

/// `delta -> norm(indicator(delta))` for any norm; the realized measure of
/// each indicator replaces the requested one on the returned grid.
pub fn phi_empirical<N>(norm: N, space: SpaceSpec, deltas: &[f64]) -> Result<FundamentalCurve>
where
    N: Fn(&GridFunction) -> Result<f64> + Sync,
{
    let pts = deltas
        .par_iter()
        .map(|&d| {
            let ind = GridFunction::indicator(space, d)?;
            let realized = ind.integral().re;
            Ok((realized, norm(&ind)?, d))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FundamentalCurve {
        delta_grid: pts.iter().map(|p| p.0).collect(),
        values: pts.iter().map(|p| p.1).collect(),
        branch: pts.iter().map(|p| format!("requested={}", p.2)).collect(),
        formula_tag: FormulaTag::Empirical,
    })
}
