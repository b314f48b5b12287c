use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{n_alpha, n_from_psi, n_mr, psi_from_young, psi_shift_d, NFunction, PsiFunction, PsiKind, YoungFunction, YoungKind};
use crate::error::{Error, Result};

/// JSON description of a `psi`, Young kernel or N-function:
/// `{"kind": "...", "params": {...}}` or `{"kind": "tabulated", "p": [...], "value": [...]}`.
///
/// Nested functions (a shift's base, the kernel behind a `psi`) sit inside
/// `params` as further specs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub params: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Vec<f64>>,
}

impl FunctionSpec {
    pub fn new(kind: &str, params: &[(&str, f64)]) -> Self {
        Self {
            kind: kind.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), Value::from(*v))).collect(),
            p: None,
            value: None,
        }
    }

    pub fn tabulated(p: Vec<f64>, value: Vec<f64>) -> Self {
        Self {
            kind: "tabulated".into(),
            params: Map::new(),
            p: Some(p),
            value: Some(value),
        }
    }

    pub fn parse(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    fn num(&self, key: &str) -> Result<f64> {
        self.params
            .get(key)
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::Config(format!("'{}' spec needs numeric param '{key}'", self.kind)))
    }

    fn num_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.params.get(key) {
            None => Ok(default),
            Some(_) => self.num(key),
        }
    }

    fn nested(&self, key: &str) -> Result<FunctionSpec> {
        let v = self
            .params
            .get(key)
            .ok_or_else(|| Error::Config(format!("'{}' spec needs nested spec '{key}'", self.kind)))?;
        Ok(serde_json::from_value(v.clone())?)
    }

    fn table(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        match (&self.p, &self.value) {
            (Some(p), Some(v)) if p.len() == v.len() && p.len() >= 2 => Ok((p.clone(), v.clone())),
            _ => Err(Error::Config("tabulated spec needs 'p' and 'value' of equal length >= 2".into())),
        }
    }

    /// Kinds: `quadratic`, `power {k}`, `exp {m}`, `loglog`, `tabulated` (nodes in `p`).
    pub fn to_young(&self) -> Result<YoungFunction> {
        let kind = match self.kind.as_str() {
            "quadratic" => YoungKind::Quadratic,
            "power" => YoungKind::Power { k: self.num("k")? },
            "exp" => YoungKind::Exp { m: self.num("m")? },
            "loglog" => YoungKind::LogLog,
            "tabulated" => {
                let (z, value) = self.table()?;
                YoungKind::Tabulated { z, value }
            }
            other => return Err(Error::UnknownEntry(format!("young kind '{other}'"))),
        };
        YoungFunction::new(kind)
    }

    /// Kinds: `power {m, alpha?}`, `power-log {m, r, alpha?}`,
    /// `from-young {young}`, `shift {d, base}`, `log-factor {r, base, alpha?}`,
    /// `tabulated` (optional `alpha` param).
    pub fn to_psi(&self) -> Result<PsiFunction> {
        match self.kind.as_str() {
            "power" => PsiFunction::new(self.num_or("alpha", 1.0)?, PsiKind::Power { m: self.num("m")? }),
            "power-log" => PsiFunction::new(
                self.num_or("alpha", std::f64::consts::E)?,
                PsiKind::PowerLog {
                    m: self.num("m")?,
                    r: self.num("r")?,
                },
            ),
            "from-young" => psi_from_young(&self.nested("young")?.to_young()?),
            "shift" => {
                let d = self.num("d")?;
                if d < 0.0 || d.fract() != 0.0 {
                    return Err(Error::Config(format!("shift needs a nonnegative integer d, got {d}")));
                }
                psi_shift_d(&self.nested("base")?.to_psi()?, d as u32)
            }
            "log-factor" => {
                let base = self.nested("base")?.to_psi()?;
                let alpha = self.num_or("alpha", base.alpha().max(std::f64::consts::E))?;
                PsiFunction::with_domain(
                    alpha,
                    base.p_max(),
                    PsiKind::LogFactor {
                        base: Box::new(base),
                        r: self.num("r")?,
                    },
                )
            }
            "tabulated" => {
                let (p, value) = self.table()?;
                let alpha = self.num_or("alpha", p[0])?;
                PsiFunction::new(alpha, PsiKind::Tabulated { p, value })
            }
            other => Err(Error::UnknownEntry(format!("psi kind '{other}'"))),
        }
    }

    /// Kinds: `power {k}`, `mr {m, r}`, `young {young}`, `psi {psi}`, `alpha {alpha, base}`.
    pub fn to_nfunction(&self) -> Result<NFunction> {
        match self.kind.as_str() {
            "power" => NFunction::power(self.num("k")?),
            "mr" => n_mr(self.num("m")?, self.num_or("r", 0.0)?),
            "young" => Ok(NFunction::from_young(&self.nested("young")?.to_young()?)),
            "psi" => Ok(n_from_psi(&self.nested("psi")?.to_psi()?)),
            "alpha" => n_alpha(&self.nested("base")?.to_nfunction()?, self.num("alpha")?),
            other => Err(Error::UnknownEntry(format!("N-function kind '{other}'"))),
        }
    }
}
