use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::line::{fourier_transform, inverse_transform};
use super::{haar_partial, synthesize, truncate};
use crate::duality::{psi_shift_d, PsiFunction};
use crate::error::{Error, Result};
use crate::norms::ln_lp;
use crate::numeric::linear_fit;
use crate::space::GridFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operator {
    /// `s_M` on the torus
    PartialSum,
    /// `S_M` on the line
    BandLimit,
    /// Haar partial sums `P_M`
    Haar,
}

/// Shape of a distance trace `M -> ||op_M f - f||`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFlags {
    /// Last-quartile minimum at least half the first-quartile median.
    pub floor: bool,
    /// Nonincreasing over `M >= M_max / 10` and ending lower than it started
    /// (or already negligible).
    pub decays_last_decade: bool,
}

const NEGLIGIBLE: f64 = 1e-12;

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

pub fn classify_trace(m_grid: &[f64], trace: &[f64]) -> TraceFlags {
    let n = trace.len();
    if n < 2 || m_grid.len() != n {
        return TraceFlags {
            floor: false,
            decays_last_decade: false,
        };
    }
    let q = (n / 4).max(1);
    let head = median(&trace[..q]);
    let tail_min = trace[n - q..].iter().copied().fold(f64::INFINITY, f64::min);
    let floor = head > NEGLIGIBLE && tail_min >= 0.5 * head;

    let m_last = m_grid[n - 1];
    let window: Vec<f64> = m_grid
        .iter()
        .zip(trace)
        .filter(|(m, _)| **m >= m_last / 10.0)
        .map(|(_, t)| *t)
        .collect();
    let nonincreasing = window
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + 1e-9) || w[1] < NEGLIGIBLE);
    let decays_last_decade = window.len() >= 2
        && nonincreasing
        && (window[window.len() - 1] < window[0] || window[0] < NEGLIGIBLE);
    TraceFlags {
        floor,
        decays_last_decade,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub operator: Operator,
    pub p_grid: Vec<f64>,
    pub m_grid: Vec<f64>,
    /// `|f|_p` per p
    pub f_lp: Vec<f64>,
    /// `|op_M f|_p`, rows M, columns p
    pub op_lp: Vec<Vec<f64>>,
    /// `max_{M,p} |op_M f|_p / (p |f|_p)`
    pub riesz_constant: f64,
    /// `max_{M,p} |op_M f|_p / |f|_p`
    pub norm_ratio_max: f64,
    /// `sup_p |op_M f|_p / (p^d psi(p))` per M
    pub g_proxy_by_m: Vec<f64>,
    pub g_proxy: f64,
    /// log-log slope of the proxy against M over the upper half of the M-grid is below 0.05
    pub bounded_in_m: bool,
    /// `sup_p |op_M f - f|_p / (p^d psi(p))` per M
    pub trace_psi: Vec<f64>,
    pub flags_psi: TraceFlags,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_theta: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flags_theta: Option<TraceFlags>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Builds `op_M f` for every M.
fn apply_all(f: &GridFunction, op: Operator, m_grid: &[f64]) -> Result<(Vec<GridFunction>, Vec<String>)> {
    let mut warnings = Vec::new();
    let out = match op {
        Operator::PartialSum => {
            let m_max = m_grid.iter().copied().fold(0.0, f64::max) as usize;
            let c = super::coeffs(f, m_max)?;
            m_grid
                .par_iter()
                .map(|&m| synthesize(&truncate(&c, m as usize), *f.space(), &format!("s_{m}")))
                .collect::<Result<Vec<_>>>()?
        }
        Operator::BandLimit => {
            let spectrum = fourier_transform(f)?;
            let v = f.values();
            let ratio = v[0].norm().max(v[v.len() - 1].norm()) / f.max_abs().max(f64::MIN_POSITIVE);
            if ratio >= super::line::DECAY_TOLERANCE {
                warnings.push(format!("insufficient decay at the truncation boundary: {ratio:.3e}"));
            }
            m_grid
                .par_iter()
                .map(|&m| inverse_transform(&spectrum, *f.space(), m))
                .collect::<Result<Vec<_>>>()?
        }
        Operator::Haar => m_grid
            .par_iter()
            .map(|&m| haar_partial(f, m as usize))
            .collect::<Result<Vec<_>>>()?,
    };
    Ok((out, warnings))
}

fn sup_ratio(g: &GridFunction, psi: &PsiFunction, p_grid: &[f64]) -> f64 {
    p_grid
        .iter()
        .map(|&p| (ln_lp(g, p) - psi.ln_eval(p)).exp())
        .fold(0.0, f64::max)
}

/// `|op_M f|_p` over a `(M, p)` sweep with the derived statistics.
///
/// `theta`, when given, adds a second distance trace in `G(theta)`
/// (typically a scale dominating `psi`).
pub fn growth_report(
    f: &GridFunction,
    op: Operator,
    p_grid: &[f64],
    m_grid: &[f64],
    psi: &PsiFunction,
    d: u32,
    theta: Option<&PsiFunction>,
) -> Result<GrowthReport> {
    if p_grid.is_empty() || m_grid.is_empty() {
        return Err(Error::InvalidParameter("growth report needs nonempty p and M grids".into()));
    }
    if p_grid.iter().any(|&p| p < psi.alpha() || p < 1.0) {
        return Err(Error::InvalidParameter("p-grid must lie in the psi domain and p >= 1".into()));
    }
    let psi_d = psi_shift_d(psi, d)?;
    let theta_d = theta.map(|t| psi_shift_d(t, d)).transpose()?;
    let (ops, warnings) = apply_all(f, op, m_grid)?;
    let f_ln: Vec<f64> = p_grid.iter().map(|&p| ln_lp(f, p)).collect();

    struct Row {
        ln_lp: Vec<f64>,
        proxy: f64,
        dist_psi: f64,
        dist_theta: Option<f64>,
    }
    let rows: Vec<Row> = ops
        .par_iter()
        .map(|g| {
            let ln: Vec<f64> = p_grid.iter().map(|&p| ln_lp(g, p)).collect();
            let proxy = p_grid
                .iter()
                .zip(&ln)
                .map(|(&p, l)| (l - psi_d.ln_eval(p)).exp())
                .fold(0.0, f64::max);
            let diff = g.sub(f).expect("same grid");
            Row {
                ln_lp: ln,
                proxy,
                dist_psi: sup_ratio(&diff, &psi_d, p_grid),
                dist_theta: theta_d.as_ref().map(|t| sup_ratio(&diff, t, p_grid)),
            }
        })
        .collect();

    let mut riesz = 0.0f64;
    let mut ratio = 0.0f64;
    for r in &rows {
        for ((&p, l), fl) in p_grid.iter().zip(&r.ln_lp).zip(&f_ln) {
            if fl.is_finite() {
                let q = (l - fl).exp();
                ratio = ratio.max(q);
                riesz = riesz.max(q / p);
            }
        }
    }
    let g_proxy_by_m: Vec<f64> = rows.iter().map(|r| r.proxy).collect();
    let half = m_grid.len() / 2;
    let bounded_in_m = if m_grid.len() - half >= 2 {
        let xs: Vec<f64> = m_grid[half..].iter().map(|m| m.ln()).collect();
        let ys: Vec<f64> = g_proxy_by_m[half..].iter().map(|v| v.max(f64::MIN_POSITIVE).ln()).collect();
        linear_fit(&xs, &ys).0 < 0.05
    } else {
        true
    };
    let trace_psi: Vec<f64> = rows.iter().map(|r| r.dist_psi).collect();
    let trace_theta: Option<Vec<f64>> = theta_d.as_ref().map(|_| rows.iter().map(|r| r.dist_theta.unwrap_or(f64::NAN)).collect());
    Ok(GrowthReport {
        operator: op,
        p_grid: p_grid.to_vec(),
        m_grid: m_grid.to_vec(),
        f_lp: f_ln.iter().map(|l| l.exp()).collect(),
        op_lp: rows.iter().map(|r| r.ln_lp.iter().map(|l| l.exp()).collect()).collect(),
        riesz_constant: riesz,
        norm_ratio_max: ratio,
        g_proxy: g_proxy_by_m.iter().copied().fold(0.0, f64::max),
        g_proxy_by_m,
        bounded_in_m,
        flags_psi: classify_trace(m_grid, &trace_psi),
        trace_psi,
        flags_theta: trace_theta.as_ref().map(|t| classify_trace(m_grid, t)),
        trace_theta,
        warnings,
    })
}
