use super::ConvexFn;
use crate::error::{Error, Result};
use crate::numeric::logspace;

/// Parametric families of Young kernels `W` on `[2, inf)`.
#[derive(Debug, Clone, PartialEq)]
pub enum YoungKind {
    /// `z^2 / 2`
    Quadratic,
    /// `z^k / k`, `k > 1`
    Power { k: f64 },
    /// `exp(m z)`, the kernel of `N(u) = exp(u^m)`
    Exp { m: f64 },
    /// `log L^{-1}(e^x)` for `L(y) = log y * log log y`: the root `t` of `t log t = e^x`
    LogLog,
    /// Piecewise-linear interpolation of convex data, linearly extended.
    Tabulated { z: Vec<f64>, value: Vec<f64> },
}

/// A convex, strictly increasing `W` with `W'(x) -> inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct YoungFunction {
    kind: YoungKind,
}

const CHECK_LO: f64 = 2.0;
const CHECK_HI: f64 = 20.0;

impl YoungFunction {
    pub fn new(kind: YoungKind) -> Result<Self> {
        match &kind {
            YoungKind::Power { k } if !(*k > 1.0) => {
                return Err(Error::InvalidParameter(format!("power Young kernel needs k > 1, got {k}")))
            }
            YoungKind::Exp { m } if !(*m > 0.0) => {
                return Err(Error::InvalidParameter(format!("exponential Young kernel needs m > 0, got {m}")))
            }
            YoungKind::Tabulated { z, value }
                if z.len() < 3 || z.len() != value.len() || z.windows(2).any(|w| w[1] <= w[0]) =>
            {
                return Err(Error::InvalidParameter(
                    "tabulated Young kernel needs >= 3 increasing nodes with matching values".into(),
                ));
            }
            _ => {}
        }
        let w = Self { kind };
        w.validate()?;
        Ok(w)
    }

    pub fn quadratic() -> Self {
        Self { kind: YoungKind::Quadratic }
    }

    pub fn exp(m: f64) -> Result<Self> {
        Self::new(YoungKind::Exp { m })
    }

    pub fn kind(&self) -> &YoungKind {
        &self.kind
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = match &self.kind {
            YoungKind::Tabulated { z, .. } => (z[0].max(CHECK_LO), z[z.len() - 1].max(CHECK_LO + 1.0)),
            _ => (CHECK_LO, CHECK_HI),
        };
        let grid = logspace(lo, hi, 48);
        let vals: Vec<f64> = grid.iter().map(|&z| self.value(z)).collect();
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("Young kernel not finite on [2, 20]".into()));
        }
        if vals.windows(2).any(|v| v[1] <= v[0]) {
            return Err(Error::InvalidParameter("Young kernel must be strictly increasing".into()));
        }
        let slopes: Vec<f64> = (0..grid.len() - 1)
            .map(|i| (vals[i + 1] - vals[i]) / (grid[i + 1] - grid[i]))
            .collect();
        if slopes.windows(2).any(|s| s[1] < s[0] - 1e-9 * s[0].abs().max(1.0)) {
            return Err(Error::InvalidParameter("Young kernel must be convex".into()));
        }
        if !(self.slope(hi) > self.slope(lo)) {
            return Err(Error::InvalidParameter("Young kernel slope must grow without bound".into()));
        }
        Ok(())
    }
}

fn loglog_root(x: f64) -> f64 {
    // t log t = e^x, t > 1
    let target = x.exp();
    let mut t = (target / target.ln().max(1.0)).max(1.5);
    for _ in 0..100 {
        let f = t * t.ln() - target;
        let step = f / (t.ln() + 1.0);
        let next = (t - step).max(1.0 + 1e-12);
        if (next - t).abs() <= 1e-15 * t {
            return next;
        }
        t = next;
    }
    t
}

fn tab_eval(z: &[f64], v: &[f64], x: f64) -> f64 {
    let n = z.len();
    let i = match z.partition_point(|&zi| zi <= x) {
        0 => 0,
        k if k >= n => n - 2,
        k => k - 1,
    };
    let s = (v[i + 1] - v[i]) / (z[i + 1] - z[i]);
    v[i] + s * (x - z[i])
}

impl ConvexFn for YoungFunction {
    fn value(&self, z: f64) -> f64 {
        match &self.kind {
            YoungKind::Quadratic => 0.5 * z * z,
            YoungKind::Power { k } => z.abs().powf(*k) / k,
            YoungKind::Exp { m } => (m * z).exp(),
            YoungKind::LogLog => loglog_root(z),
            YoungKind::Tabulated { z: zs, value } => tab_eval(zs, value, z),
        }
    }

    fn slope(&self, z: f64) -> f64 {
        match &self.kind {
            YoungKind::Quadratic => z,
            YoungKind::Power { k } => z.abs().powf(k - 1.0),
            YoungKind::Exp { m } => m * (m * z).exp(),
            YoungKind::LogLog => z.exp() / (loglog_root(z).ln() + 1.0),
            YoungKind::Tabulated { .. } => crate::numeric::derivative(|t| self.value(t), z),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loglog_root_solves_equation() {
        for x in [2.0, 5.0, 12.0] {
            let t = loglog_root(x);
            assert!(((t * t.ln()) - f64::exp(x)).abs() < 1e-10 * f64::exp(x));
        }
    }

    #[test]
    fn rejects_bad_kernels() {
        assert!(YoungFunction::new(YoungKind::Power { k: 1.0 }).is_err());
        assert!(YoungFunction::new(YoungKind::Exp { m: 0.0 }).is_err());
        // concave data
        let z = vec![2.0, 3.0, 4.0, 5.0];
        let value = vec![0.0, 2.0, 3.0, 3.5];
        assert!(YoungFunction::new(YoungKind::Tabulated { z, value }).is_err());
    }

    #[test]
    fn analytic_slopes_match_finite_differences() {
        for kind in [
            YoungKind::Quadratic,
            YoungKind::Power { k: 3.0 },
            YoungKind::Exp { m: 0.5 },
            YoungKind::LogLog,
        ] {
            let w = YoungFunction::new(kind).unwrap();
            for z in [2.5, 4.0, 7.0] {
                let fd = crate::numeric::derivative(|t| w.value(t), z);
                assert!((w.slope(z) - fd).abs() < 1e-6 * fd.abs().max(1.0));
            }
        }
    }
}
