use std::f64::consts::E;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{echo, num, rel, topic, ExperimentConfig, ExperimentReport, Table};
use crate::catalog::Entry;
use crate::duality::{
    dominance, psi_from_young, Classification, Conjugate, ConvexFn, PsiFunction, PsiKind, YoungFunction, YoungKind,
};
use crate::error::Result;
use crate::norms::{l0_test, L0Membership};
use crate::numeric::logspace;
use crate::space::SpaceSpec;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DualityParams {
    pub z_points: usize,
    pub z_max: f64,
    pub tolerance: f64,
    pub psi_tolerance: f64,
}

impl Default for DualityParams {
    fn default() -> Self {
        Self {
            z_points: 24,
            z_max: 12.0,
            tolerance: 1e-6,
            psi_tolerance: 0.01,
        }
    }
}

fn kernels() -> Vec<(&'static str, YoungFunction)> {
    let k = |kind| YoungFunction::new(kind).expect("valid kernel");
    vec![
        ("quadratic", YoungFunction::quadratic()),
        ("power-1.5", k(YoungKind::Power { k: 1.5 })),
        ("power-3", k(YoungKind::Power { k: 3.0 })),
        ("exp-1", k(YoungKind::Exp { m: 1.0 })),
        ("exp-2", k(YoungKind::Exp { m: 2.0 })),
    ]
}

/// `W**(z)` with both conjugates taken numerically.
fn biconjugate(w: &YoungFunction, z: f64) -> f64 {
    let inner = Conjugate::new(Arc::new(w.clone()), 2.0);
    // below W'(2) the inner maximizer sits at the boundary and p z - W*(p) increases in p
    Conjugate::new(Arc::new(inner), w.slope(2.0)).at(z).value
}

pub fn run_duality(cfg: &ExperimentConfig, seed: u64) -> Result<ExperimentReport> {
    let prm: DualityParams = cfg.typed()?;
    let mut rep = ExperimentReport::new(&cfg.id, topic(&cfg.id), echo(&prm), seed);
    let zs = logspace(2.5, prm.z_max, prm.z_points);
    let mut table = Table::new("biconjugate", &["kernel", "z", "w", "w_star_star", "rel_err"]);
    let mut worst = 0.0f64;
    for (name, w) in kernels() {
        for &z in &zs {
            let (a, b) = (w.value(z), biconjugate(&w, z));
            let e = rel(b, a);
            worst = worst.max(e);
            table.push(vec![json!(name), num(z), num(a), num(b), num(e)]);
        }
    }
    rep.tables.push(table);
    rep.check(
        "fenchel-moreau",
        Some(1),
        worst <= prm.tolerance,
        format!("max relative |W** - W| / W = {worst:.3e} over 5 kernels (tolerance {:.0e})", prm.tolerance),
    );

    let psi = psi_from_young(&YoungFunction::exp(1.0)?)?;
    let mut table = Table::new("psi-exp-kernel", &["p", "psi", "p_over_e", "rel_err"]);
    let mut worst_psi = 0.0f64;
    for p in logspace(E.powi(3), 1e4, 40) {
        let (v, want) = (psi.eval(p), p / E);
        worst_psi = worst_psi.max(rel(v, want));
        table.push(vec![num(p), num(v), num(want), num(rel(v, want))]);
    }
    rep.tables.push(table);
    rep.check(
        "psi-exp-kernel",
        Some(1),
        worst_psi <= prm.psi_tolerance,
        format!("max |psi(p) / (p/e) - 1| = {worst_psi:.3e} for p in [e^3, 1e4]"),
    );
    Ok(rep)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DominanceParams {
    pub p_max: f64,
    pub resolution: usize,
}

impl Default for DominanceParams {
    fn default() -> Self {
        Self {
            p_max: 1e6,
            resolution: 16384,
        }
    }
}

pub fn run_dominance(cfg: &ExperimentConfig, seed: u64) -> Result<ExperimentReport> {
    let prm: DominanceParams = cfg.typed()?;
    let mut rep = ExperimentReport::new(&cfg.id, topic(&cfg.id), echo(&prm), seed);
    let power = |m: f64| PsiFunction::new(2.0, PsiKind::Power { m });
    let log_factor = |base: PsiFunction, r: f64| {
        PsiFunction::new(2.0, PsiKind::LogFactor { base: Box::new(base), r })
    };
    let from_exp = psi_from_young(&YoungFunction::exp(1.0)?)?.with_alpha(2.0)?;
    let cases: Vec<(&str, PsiFunction, PsiFunction, Classification)> = vec![
        ("p vs p log p", power(1.0)?, log_factor(power(1.0)?, 1.0)?, Classification::Dominated),
        ("p^1/2 vs p", power(2.0)?, power(1.0)?, Classification::Dominated),
        ("p^1/2 vs p^1/2 log^1/2 p", power(2.0)?, log_factor(power(2.0)?, 0.5)?, Classification::Dominated),
        ("p vs p", power(1.0)?, power(1.0)?, Classification::NotDominated),
        ("p log p vs p", log_factor(power(1.0)?, 1.0)?, power(1.0)?, Classification::NotDominated),
        ("p/e (exp kernel) vs p", from_exp, power(1.0)?, Classification::NotDominated),
    ];
    let mut table = Table::new("dominance", &["pair", "expected", "measured"]);
    let mut all = true;
    for (name, psi, theta, want) in &cases {
        let got = dominance(psi, theta, prm.p_max);
        all &= got == *want;
        table.push(vec![json!(name), json!(want), json!(got)]);
    }
    rep.tables.push(table);
    rep.check("dominance-classifier", None, all, "all pairs classified as expected");

    // f in G(psi) lands in the L0 part of G(theta) exactly when psi << theta
    let g1 = Entry::GM { m: 1.0 }.sample(SpaceSpec::torus_graded(prm.resolution))?;
    let psi = power(1.0)?;
    let theta = log_factor(power(1.0)?, 1.0)?;
    let in_psi = l0_test(&g1, &psi, 256.0);
    let in_theta = l0_test(&g1, &theta, 256.0);
    let mut table = Table::new("embedding", &["function", "scale", "l0"]);
    table.push(vec![json!("g_m:m=1"), json!("p"), json!(in_psi)]);
    table.push(vec![json!("g_m:m=1"), json!("p log p"), json!(in_theta)]);
    rep.tables.push(table);
    rep.check(
        "embedding",
        None,
        in_psi == L0Membership::NotInL0 && in_theta == L0Membership::InL0,
        format!("g_1 in G(p): {in_psi:?}; in G(p log p): {in_theta:?}"),
    );
    Ok(rep)
}
