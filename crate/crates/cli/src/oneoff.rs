use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context};
use grandlab::catalog::Entry;
use grandlab::duality::{n_alpha, n_mr, PsiKind};
use grandlab::norms::{g_abab, g_psi, lp, lp_nu, orlicz, AbabParams, NormReport};
use grandlab::{PsiFunction, SpaceKind, SpaceSpec};

fn space(kind: &str, resolution: Option<usize>, x_max: f64) -> anyhow::Result<SpaceSpec> {
    Ok(match kind {
        "torus" => SpaceSpec::torus(resolution.unwrap_or(4096)),
        "torus-graded" => SpaceSpec::torus_graded(resolution.unwrap_or(16384)),
        "line" => SpaceSpec::line(x_max, resolution.unwrap_or(16384)),
        "line-uniform" => SpaceSpec::line_uniform(x_max, resolution.unwrap_or(16384)),
        "line-nu" => SpaceSpec::line_nu(x_max, resolution.unwrap_or(16384)),
        other => bail!("unknown space `{other}`"),
    })
}

/// `name:k=v,k=v` into a name and numeric parameters.
fn split(spec: &str) -> anyhow::Result<(&str, BTreeMap<String, f64>)> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut params = BTreeMap::new();
    for kv in rest.split(',').filter(|s| !s.is_empty()) {
        // `N_1` shorthand
        if let Some(m) = kv.strip_prefix("N_") {
            params.insert("m".to_string(), m.parse().with_context(|| format!("bad N index `{kv}`"))?);
            continue;
        }
        let (k, v) = kv.split_once('=').ok_or_else(|| anyhow!("expected key=value, got `{kv}`"))?;
        params.insert(k.to_string(), v.parse().with_context(|| format!("`{v}` is not a number"))?);
    }
    Ok((name, params))
}

fn get(params: &BTreeMap<String, f64>, key: &str, default: Option<f64>) -> anyhow::Result<f64> {
    params
        .get(key)
        .copied()
        .or(default)
        .ok_or_else(|| anyhow!("missing norm parameter `{key}`"))
}

/// Evaluates `norm` of the catalog `function` and returns a JSON report.
pub fn norm(space_kind: &str, resolution: Option<usize>, x_max: f64, function: &str, norm: &str) -> anyhow::Result<String> {
    let s = space(space_kind, resolution, x_max)?;
    let f = Entry::parse(function)?.sample(s)?;
    let (name, p) = split(norm)?;
    let report = match name {
        "lp" => NormReport::finite(lp(&f, get(&p, "p", None)?)?),
        "lp-nu" => NormReport::finite(lp_nu(&f, get(&p, "p", None)?)?),
        "orlicz" => {
            let n = n_mr(get(&p, "m", Some(1.0))?, get(&p, "r", Some(0.0))?)?;
            if s.kind == SpaceKind::Torus {
                orlicz(&f, &n)
            } else {
                orlicz(&f, &n_alpha(&n, get(&p, "alpha", Some(2.0))?)?)
            }
        }
        "g" => {
            let alpha = get(&p, "alpha", Some(2.0))?;
            let psi = PsiFunction::new(1.0, PsiKind::Power { m: get(&p, "m", Some(1.0))? })?;
            g_psi(&f, alpha, &psi)?
        }
        "g-abab" => {
            let prm = AbabParams::new(get(&p, "a", None)?, get(&p, "b", None)?, get(&p, "alpha", None)?, get(&p, "beta", None)?)?;
            g_abab(&f, &prm)
        }
        other => bail!("unknown norm `{other}` (lp, lp-nu, orlicz, g, g-abab)"),
    };
    let out = serde_json::json!({
        "function": function,
        "space": s,
        "norm": norm,
        "report": report,
    });
    Ok(serde_json::to_string_pretty(&out)?)
}
