use std::sync::{Arc, OnceLock};

use super::{ConvexFn, PsiFunction, YoungFunction};
use crate::error::{Error, Result};
use crate::numeric::{golden_max, maximize_concave_half_line, HalfLineMax};

/// `log u` at which the exponential branch of an EOF takes over (`u = e^2`).
const GLUE_Y: f64 = 2.0;
/// Range of `log u` covered by the cached Hermite table of `N([psi])`.
const TABLE_Y_HI: f64 = 48.0;
const TABLE_STEP: f64 = 0.02;

/// `N(u) = c u^kappa` on `[0, e^2]`, matched in value and slope at `e^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerCompletion {
    pub ln_c: f64,
    pub kappa: f64,
}

impl PowerCompletion {
    fn ln_eval(&self, u: f64) -> f64 {
        self.ln_c + self.kappa * u.ln()
    }
}

/// Constants of the piecewise `N^(alpha)`: `C1 u^alpha` on `[0, C2]`,
/// `C3 + C4 u` on `(C2, C5]`, `N(u)` above `C5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaConstants {
    pub alpha: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    /// `true` when the power and linear pieces meet with matching slopes.
    pub slope_matched: bool,
}

#[derive(Debug)]
pub struct HermiteTable {
    y0: f64,
    step: f64,
    value: Vec<f64>,
    slope: Vec<f64>,
}

impl HermiteTable {
    fn eval(&self, y: f64) -> Option<f64> {
        let t = (y - self.y0) / self.step;
        if !(t >= 0.0) {
            return None;
        }
        let i = t.floor() as usize;
        if i + 1 >= self.value.len() {
            return None;
        }
        let s = t - i as f64;
        let h = self.step;
        let (v0, v1, d0, d1) = (self.value[i], self.value[i + 1], self.slope[i], self.slope[i + 1]);
        let s2 = s * s;
        let s3 = s2 * s;
        Some(
            (2.0 * s3 - 3.0 * s2 + 1.0) * v0
                + (s3 - 2.0 * s2 + s) * h * d0
                + (-2.0 * s3 + 3.0 * s2) * v1
                + (s3 - s2) * h * d1,
        )
    }
}

#[derive(Debug, Clone)]
pub enum NKind {
    /// `|u|^k`, `k >= 1`
    Power { k: f64 },
    /// `exp(|u|^m log^{-mr}(C(r) + |u|)) - 1`
    Mr { m: f64, r: f64 },
    /// `exp(W(log |u|))` above `e^2`, power completion below
    FromYoung { young: YoungFunction, completion: PowerCompletion },
    /// `exp([p log psi(p)]*(log |u|))` above `e^2`, power completion below
    FromPsi {
        psi: PsiFunction,
        completion: PowerCompletion,
        table: Arc<OnceLock<HermiteTable>>,
    },
    /// `N^(alpha)` glued from a base EOF
    Alpha { base: Box<NFunction>, constants: AlphaConstants },
}

/// An even N-function evaluated through `log N` so that exponential growth
/// never overflows inside quadrature.
#[derive(Debug, Clone)]
pub struct NFunction {
    kind: NKind,
    flags: Vec<String>,
}

impl NFunction {
    pub fn power(k: f64) -> Result<Self> {
        if !(k >= 1.0) {
            return Err(Error::InvalidParameter(format!("power N-function needs k >= 1, got {k}")));
        }
        Ok(Self {
            kind: NKind::Power { k },
            flags: Vec::new(),
        })
    }

    /// `exp(W(log u))` with the power completion on `[0, e^2]`.
    pub fn from_young(young: &YoungFunction) -> Self {
        let w2 = young.value(GLUE_Y);
        let mut flags = Vec::new();
        let mut kappa = young.slope(GLUE_Y);
        if kappa < 1.0 {
            flags.push(format!("completion exponent {kappa:.4} < 1 clamped to 1; glue is not C1"));
            kappa = 1.0;
        }
        Self {
            kind: NKind::FromYoung {
                young: young.clone(),
                completion: PowerCompletion {
                    ln_c: w2 - GLUE_Y * kappa,
                    kappa,
                },
            },
            flags,
        }
    }

    pub fn kind(&self) -> &NKind {
        &self.kind
    }

    pub fn flags(&self) -> &[String] {
        &self.flags
    }

    pub fn young(&self) -> Option<&YoungFunction> {
        match &self.kind {
            NKind::FromYoung { young, .. } => Some(young),
            _ => None,
        }
    }

    pub fn alpha_constants(&self) -> Option<&AlphaConstants> {
        match &self.kind {
            NKind::Alpha { constants, .. } => Some(constants),
            _ => None,
        }
    }

    /// `log N(u)`; `-inf` at `u = 0`.
    pub fn log_eval(&self, u: f64) -> f64 {
        self.log_eval_impl(u, false)
    }

    /// Like [`NFunction::log_eval`] but reads `N([psi])` from a cached cubic
    /// Hermite table (exact values and slopes at the nodes).
    pub fn log_eval_fast(&self, u: f64) -> f64 {
        self.log_eval_impl(u, true)
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.log_eval(u).exp()
    }

    fn log_eval_impl(&self, u: f64, fast: bool) -> f64 {
        let u = u.abs();
        if u == 0.0 {
            return f64::NEG_INFINITY;
        }
        match &self.kind {
            NKind::Power { k } => k * u.ln(),
            NKind::Mr { m, r } => {
                let c = if *r <= 0.0 { std::f64::consts::E } else { r.exp() };
                let ln_s = m * u.ln() - m * r * (c + u).ln().ln();
                let s = ln_s.exp();
                if s < 1e-8 {
                    ln_s
                } else if s > 40.0 {
                    s + (-(-s).exp()).ln_1p()
                } else {
                    s.exp_m1().ln()
                }
            }
            NKind::FromYoung { young, completion } => {
                let y = u.ln();
                if y >= GLUE_Y {
                    young.value(y)
                } else {
                    completion.ln_eval(u)
                }
            }
            NKind::FromPsi {
                psi,
                completion,
                table,
            } => {
                let y = u.ln();
                if y < GLUE_Y {
                    return completion.ln_eval(u);
                }
                if fast {
                    let t = table.get_or_init(|| build_table(psi));
                    if let Some(v) = t.eval(y) {
                        return v;
                    }
                }
                moment_conjugate(psi, y).0
            }
            NKind::Alpha { base, constants: c } => {
                if u <= c.c2 {
                    c.c1.ln() + c.alpha * u.ln()
                } else if u <= c.c5 {
                    (c.c3 + c.c4 * u).ln()
                } else {
                    base.log_eval_impl(u, fast)
                }
            }
        }
    }
}

/// `sup_{p in domain} (p y - p log psi(p))` and its maximizer.
fn moment_conjugate(psi: &PsiFunction, y: f64) -> (f64, f64) {
    let obj = |p: f64| p * y - psi.moment_exponent(p);
    if psi.p_max().is_finite() {
        let (p, v) = golden_max(obj, psi.alpha(), psi.p_max(), 1e-13);
        (v, p)
    } else {
        match maximize_concave_half_line(obj, psi.alpha(), 1e-13) {
            HalfLineMax::Finite { argmax, value } => (value, argmax),
            HalfLineMax::Unbounded => (f64::INFINITY, f64::INFINITY),
        }
    }
}

fn build_table(psi: &PsiFunction) -> HermiteTable {
    let n = ((TABLE_Y_HI - GLUE_Y) / TABLE_STEP).round() as usize + 1;
    let (value, slope) = (0..n)
        .map(|i| moment_conjugate(psi, GLUE_Y + i as f64 * TABLE_STEP))
        .unzip();
    HermiteTable {
        y0: GLUE_Y,
        step: TABLE_STEP,
        value,
        slope,
    }
}

/// `N([psi], u) = exp([p log psi(p)]*(log u))` for `u >= e^2`.
///
/// Below `e^2` the function is completed by `c u^kappa` with `kappa` equal
/// to the log-derivative at `e^2`, which by the envelope theorem is the
/// maximizing `p` and hence at least `alpha >= 1`.
pub fn n_from_psi(psi: &PsiFunction) -> NFunction {
    let (v2, p2) = moment_conjugate(psi, GLUE_Y);
    NFunction {
        kind: NKind::FromPsi {
            psi: psi.clone(),
            completion: PowerCompletion {
                ln_c: v2 - GLUE_Y * p2,
                kappa: p2,
            },
            table: Arc::new(OnceLock::new()),
        },
        flags: Vec::new(),
    }
}

/// `N_{m,r}`.
pub fn n_mr(m: f64, r: f64) -> Result<NFunction> {
    if !(m > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("N_(m,r) needs m > 0 and finite r, got m = {m}, r = {r}")));
    }
    Ok(NFunction {
        kind: NKind::Mr { m, r },
        flags: Vec::new(),
    })
}

/// `N^(alpha)`: a power piece near zero, a linear piece, then `N` itself
/// above `C5 = e^2`.
///
/// `C4` is the right slope of `N` at `C5` and `C3 = N(C5) - C4 C5` is the
/// tangent intercept (negative for convex `N` with `N(0) = 0`). The power
/// piece meets the tangent line with matching slope at
/// `C2 = alpha (-C3) / ((alpha - 1) C4)` when that point lies below `C5`;
/// otherwise the pieces are glued by value only at the midpoint between the
/// tangent root and `C5`, which keeps every piece positive and the slopes
/// nondecreasing.
pub fn n_alpha(n: &NFunction, alpha: f64) -> Result<NFunction> {
    if !(alpha >= 1.0) {
        return Err(Error::InvalidParameter(format!("N^(alpha) needs alpha >= 1, got {alpha}")));
    }
    let c5 = GLUE_Y.exp();
    let n5 = n.eval(c5);
    let h = 1e-6 * c5;
    let c4 = (n.eval(c5 + h) - n5) / h;
    let c3 = n5 - c4 * c5;
    let mut flags = Vec::new();
    if !(c4 > 0.0) || !n5.is_finite() {
        return Err(Error::InvalidParameter("N must be finite and increasing at e^2".into()));
    }
    let (c2, slope_matched) = if c3 < 0.0 {
        let root = -c3 / c4;
        let matched = if alpha > 1.0 { alpha * root / (alpha - 1.0) } else { f64::INFINITY };
        if matched < c5 {
            (matched, true)
        } else {
            flags.push("value-and-slope gluing infeasible; continuity-only glue".to_string());
            (0.5 * (root + c5), false)
        }
    } else {
        flags.push("tangent intercept nonnegative; continuity-only glue at C5/2, convexity not guaranteed".to_string());
        (0.5 * c5, false)
    };
    let c1 = if slope_matched {
        c4 / (alpha * c2.powf(alpha - 1.0))
    } else {
        (c3 + c4 * c2) / c2.powf(alpha)
    };
    let mut out = NFunction {
        kind: NKind::Alpha {
            base: Box::new(n.clone()),
            constants: AlphaConstants {
                alpha,
                c1,
                c2,
                c3,
                c4,
                c5,
                slope_matched,
            },
        },
        flags: n.flags.clone(),
    };
    out.flags.extend(flags);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::{psi_from_young, PsiFunction, YoungKind};

    #[test]
    fn n_m_direct_substitution() {
        let n1 = n_mr(1.0, 0.0).unwrap();
        assert!((n1.eval(1.0) - (std::f64::consts::E - 1.0)).abs() < 1e-12);
        assert_eq!(n1.eval(0.0), 0.0);
        let n2 = n_mr(2.0, 0.5).unwrap();
        assert_eq!(n2.eval(0.0), 0.0);
        // large-argument branch agrees with the closed form
        let u: f64 = 5.0;
        let s = u.powi(2) * (0.5f64.exp() + u).ln().powf(-1.0);
        assert!((n2.log_eval(u) - s.exp_m1().ln()).abs() < 1e-9);
        let big: f64 = 60.0;
        let s = big.powi(2) / (0.5f64.exp() + big).ln();
        assert!((n2.log_eval(big) - s).abs() < 1e-9 * s);
    }

    #[test]
    fn from_young_matches_kernel_above_glue() {
        let w = YoungFunction::exp(1.0).unwrap();
        let n = NFunction::from_young(&w);
        for u in [8.0f64, 20.0, 100.0] {
            let want = w.value(u.ln()).exp();
            assert!((n.eval(u) - want).abs() <= 1e-10 * want);
        }
    }

    #[test]
    fn n_from_psi_power_growth_rate() {
        // N([p^{1/m}])(u) = exp(u^m / (m e)): log log N has slope m in log u
        for m in [1.0, 2.0] {
            let n = n_from_psi(&PsiFunction::power(m).unwrap());
            let (y1, y2) = (6.0, 8.0);
            let slope = (n.log_eval(f64::exp(y2)).ln() - n.log_eval(f64::exp(y1)).ln()) / (y2 - y1);
            assert!((slope - m).abs() < 0.05 * m, "m = {m}: slope {slope}");
            let exact = f64::exp(m * 8.0) / (m * std::f64::consts::E);
            assert!((n.log_eval(f64::exp(8.0)) - exact).abs() < 1e-6 * exact);
        }
    }

    #[test]
    fn n_from_psi_is_monotone() {
        let n = n_from_psi(&PsiFunction::power(1.5).unwrap());
        let mut last = f64::NEG_INFINITY;
        for i in 0..200 {
            let u = 0.05 + i as f64 * 0.3;
            let v = n.log_eval(u);
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn fast_table_agrees_with_exact() {
        let n = n_from_psi(&PsiFunction::power(1.0).unwrap());
        for y in [2.01, 3.3, 7.77, 15.5] {
            let u = f64::exp(y);
            let (a, b) = (n.log_eval(u), n.log_eval_fast(u));
            assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0), "y = {y}: {a} vs {b}");
        }
    }

    #[test]
    fn round_trip_through_psi_reproduces_kernel() {
        for kind in [YoungKind::Exp { m: 1.0 }, YoungKind::Power { k: 3.0 }, YoungKind::LogLog] {
            let w = YoungFunction::new(kind).unwrap();
            let n = n_from_psi(&psi_from_young(&w).unwrap());
            for y in [2.5, 4.0, 6.0] {
                let want = w.value(y);
                let got = n.log_eval(f64::exp(y));
                // log N absolute error = relative error of N
                assert!((got - want).abs() < 1e-6, "y = {y}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn n_alpha_pieces() {
        let n1 = n_mr(1.0, 0.0).unwrap();
        let na = n_alpha(&n1, 2.0).unwrap();
        let c = *na.alpha_constants().unwrap();
        assert!(0.0 < c.c2 && c.c2 < c.c5);
        for u in [c.c5 * 1.01, 20.0, 50.0] {
            assert_eq!(na.log_eval(u), n1.log_eval(u));
        }
        let tiny = 1e-4 * c.c2;
        assert!((na.eval(tiny) / (tiny * tiny) - c.c1).abs() < 1e-9 * c.c1);
        // continuity at both breakpoints
        for b in [c.c2, c.c5] {
            let (l, r) = (na.eval(b * (1.0 - 1e-9)), na.eval(b * (1.0 + 1e-9)));
            assert!((l - r).abs() < 1e-6 * r);
        }
        // one-sided slopes nondecreasing across breakpoints
        for b in [c.c2, c.c5] {
            let h = 1e-6 * b;
            let left = (na.eval(b) - na.eval(b - h)) / h;
            let right = (na.eval(b + h) - na.eval(b)) / h;
            assert!(right >= left * (1.0 - 1e-4), "b = {b}: {left} > {right}");
        }
    }

    #[test]
    fn n_alpha_slope_matched_when_feasible() {
        // N(u) = u^2 has log-derivative 2 < alpha = 3, so C1 gluing is feasible
        let na = n_alpha(&NFunction::power(2.0).unwrap(), 3.0).unwrap();
        let c = na.alpha_constants().unwrap();
        assert!(c.slope_matched);
        assert!((3.0 * c.c1 * c.c2.powi(2) - c.c4).abs() < 1e-9 * c.c4);
        assert!(n_alpha(&NFunction::power(2.0).unwrap(), 0.5).is_err());
    }
}
