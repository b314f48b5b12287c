use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{echo, num, topic, ExperimentConfig, ExperimentReport, Table};
use crate::catalog::{random_trig, CoefficientLaw, Entry, Source};
use crate::error::Result;
use crate::fourier::fourier_transform;
use crate::norms::{ln_lp, lp, lp_nu, seq_lp, seq_lp_nu};
use crate::numeric::linear_fit;
use crate::space::{GridFunction, SpaceSpec};

const TESTS: usize = 100;

fn law_for(seed: u64) -> CoefficientLaw {
    match seed % 3 {
        0 => CoefficientLaw::Gaussian,
        1 => CoefficientLaw::Rademacher,
        _ => CoefficientLaw::Uniform,
    }
}

/// Gaussian-windowed random cosine sum on an equally spaced line grid.
fn windowed(seed: u64, space: SpaceSpec) -> Result<GridFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(1..=8);
    let width = rng.gen_range(0.5..2.0);
    let terms: Vec<(f64, f64, f64)> = (0..count)
        .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(0.0..4.0), rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    GridFunction::sample(space, &format!("windowed:seed={seed}"), move |x| {
        let w = (-0.5 * (x / width).powi(2)).exp();
        w * terms.iter().map(|(a, k, ph)| a * (k * x + ph).cos()).sum::<f64>()
    })
}

/// Max of `ratios` over the first and second half of the tests.
fn halves(ratios: &[f64]) -> (f64, f64) {
    let h = ratios.len() / 2;
    let max = |s: &[f64]| s.iter().copied().fold(0.0, f64::max);
    (max(&ratios[..h]), max(&ratios[h..]))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HausdorffYoungParams {
    pub tests: usize,
    pub p: Vec<f64>,
    pub torus_resolution: usize,
    pub line_x_max: f64,
    pub line_resolution: usize,
    pub slack: f64,
}

impl Default for HausdorffYoungParams {
    fn default() -> Self {
        Self {
            tests: TESTS,
            p: vec![2.0, 3.0, 4.0, 6.0, 8.0, 16.0, 64.0],
            torus_resolution: 1024,
            line_x_max: 32.0,
            line_resolution: 4096,
            slack: 1e-9,
        }
    }
}

pub fn run_hausdorff_young(cfg: &ExperimentConfig, seed: u64) -> Result<ExperimentReport> {
    let prm: HausdorffYoungParams = cfg.typed()?;
    let mut rep = ExperimentReport::new(&cfg.id, topic(&cfg.id), echo(&prm), seed);
    let torus = SpaceSpec::torus(prm.torus_resolution);
    let line = SpaceSpec::line_uniform(prm.line_x_max, prm.line_resolution);
    let root_2pi = std::f64::consts::TAU.sqrt();
    // per test: (max discrete ratio, max continuous ratio)
    let rows: Vec<(u64, f64, f64)> = (0..prm.tests as u64)
        .into_par_iter()
        .map(|k| -> Result<(u64, f64, f64)> {
            let s = seed.wrapping_mul(1_000_003).wrapping_add(k);
            let degree = 1 + (s % 64) as usize;
            let (f, c) = random_trig(s, degree, law_for(s), torus)?;
            let g = windowed(s, line)?;
            let fg = fourier_transform(&g)?;
            let (mut d, mut cont) = (0.0f64, 0.0f64);
            for &p in &prm.p {
                let q = p / (p - 1.0);
                d = d.max(lp(&f, p)? / (std::f64::consts::TAU * seq_lp(&c, q)?));
                cont = cont.max(lp(&fg, p)? / (root_2pi * lp(&g, q)?));
            }
            Ok((s, d, cont))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new("ratios", &["seed", "discrete", "continuous"]);
    for (s, d, c) in &rows {
        table.push(vec![json!(s), num(*d), num(*c)]);
    }
    rep.tables.push(table);
    let bad_d = rows.iter().filter(|r| r.1 > 1.0 + prm.slack).count();
    let bad_c = rows.iter().filter(|r| r.2 > 1.0 + prm.slack).count();
    let max_d = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let max_c = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    rep.constant("discrete-max-ratio", max_d, Source::Fitted);
    rep.constant("continuous-max-ratio", max_c, Source::Fitted);
    rep.check(
        "discrete",
        Some(7),
        bad_d == 0,
        format!("{bad_d} violations of |f|_p <= 2 pi |c|_q in {} tests (max ratio {max_d:.4})", rows.len()),
    );
    rep.check(
        "continuous",
        Some(7),
        bad_c == 0,
        format!("{bad_c} violations of |F f|_p <= sqrt(2 pi) |f|_q in {} tests (max ratio {max_c:.4})", rows.len()),
    );
    Ok(rep)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PaleyParams {
    pub tests: usize,
    pub p: Vec<f64>,
    pub resolution: usize,
    pub stability: f64,
}

impl Default for PaleyParams {
    fn default() -> Self {
        Self {
            tests: TESTS,
            p: vec![2.0, 3.0, 4.0, 8.0, 16.0, 32.0, 64.0],
            resolution: 1024,
            stability: 0.2,
        }
    }
}

pub fn run_paley(cfg: &ExperimentConfig, seed: u64) -> Result<ExperimentReport> {
    let prm: PaleyParams = cfg.typed()?;
    let mut rep = ExperimentReport::new(&cfg.id, topic(&cfg.id), echo(&prm), seed);
    let space = SpaceSpec::torus(prm.resolution);
    // sup_k |exp(ikx)| = 1
    let basis_sup = 1.0;
    let ratios: Vec<(u64, f64, f64)> = (0..prm.tests as u64)
        .into_par_iter()
        .map(|k| -> Result<(u64, f64, f64)> {
            let s = seed.wrapping_mul(2_000_003).wrapping_add(k);
            let degree = 1 + (s % 128) as usize;
            let (f, c) = random_trig(s, degree, law_for(s), space)?;
            let mut best = (0.0, prm.p[0]);
            for &p in &prm.p {
                let r = lp(&f, p)? / (p * (1.0 + basis_sup) * seq_lp_nu(&c, p)?);
                if r > best.0 {
                    best = (r, p);
                }
            }
            Ok((s, best.0, best.1))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new("ratios", &["seed", "ratio", "argmax_p"]);
    for (s, r, p) in &ratios {
        table.push(vec![json!(s), num(*r), num(*p)]);
    }
    rep.tables.push(table);
    let values: Vec<f64> = ratios.iter().map(|r| r.1).collect();
    let (a, b) = halves(&values);
    let k3 = a.max(b);
    rep.constant("K3", k3, Source::Fitted);
    rep.constant("K3[first-half]", a, Source::Fitted);
    rep.constant("K3[second-half]", b, Source::Fitted);
    rep.check(
        "paley-constant",
        Some(8),
        k3.is_finite() && k3 > 0.0 && (a / b - 1.0).abs() <= prm.stability,
        format!("fitted K3 = {k3:.6}; halves {a:.6} / {b:.6}"),
    );
    Ok(rep)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransformBoundParams {
    pub tests: usize,
    pub p: Vec<f64>,
    pub line_x_max: f64,
    pub line_resolution: usize,
    pub stability: f64,
}

impl Default for TransformBoundParams {
    fn default() -> Self {
        Self {
            tests: TESTS,
            p: vec![2.0, 3.0, 4.0, 8.0, 16.0, 32.0, 64.0],
            line_x_max: 32.0,
            line_resolution: 4096,
            stability: 0.2,
        }
    }
}

pub fn run_transform_bound(cfg: &ExperimentConfig, seed: u64) -> Result<ExperimentReport> {
    let prm: TransformBoundParams = cfg.typed()?;
    let mut rep = ExperimentReport::new(&cfg.id, topic(&cfg.id), echo(&prm), seed);
    let space = SpaceSpec::line_nu(prm.line_x_max, prm.line_resolution).with_grading(crate::space::Grading::Uniform);
    let ratios: Vec<(u64, f64, f64)> = (0..prm.tests as u64)
        .into_par_iter()
        .map(|k| -> Result<(u64, f64, f64)> {
            let s = seed.wrapping_mul(3_000_017).wrapping_add(k);
            let f = windowed(s, space)?;
            let ff = fourier_transform(&f)?;
            let mut best = (0.0, prm.p[0]);
            for &p in &prm.p {
                let r = lp(&ff, p)? / (p * lp_nu(&f, p)?);
                if r > best.0 {
                    best = (r, p);
                }
            }
            Ok((s, best.0, best.1))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new("ratios", &["seed", "ratio", "argmax_p"]);
    for (s, r, p) in &ratios {
        table.push(vec![json!(s), num(*r), num(*p)]);
    }
    rep.tables.push(table);
    let values: Vec<f64> = ratios.iter().map(|r| r.1).collect();
    let (a, b) = halves(&values);
    let k5 = a.max(b);
    rep.constant("K5", k5, Source::Fitted);
    rep.constant("K5[first-half]", a, Source::Fitted);
    rep.constant("K5[second-half]", b, Source::Fitted);
    rep.check(
        "transform-constant",
        Some(8),
        k5.is_finite() && k5 > 0.0 && (a / b - 1.0).abs() <= prm.stability,
        format!("fitted K5 = {k5:.6}; halves {a:.6} / {b:.6}"),
    );
    Ok(rep)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransformGrowthParams {
    pub b: Vec<f64>,
    pub line_x_max: f64,
    pub line_resolution: usize,
    pub p_lo: f64,
    pub p_hi: f64,
    pub p_points: usize,
    pub margin: f64,
}

impl Default for TransformGrowthParams {
    fn default() -> Self {
        Self {
            b: vec![2.0, 4.0],
            line_x_max: 2048.0,
            line_resolution: 1 << 18,
            p_lo: 2.0,
            p_hi: 64.0,
            p_points: 24,
            margin: 0.25,
        }
    }
}

pub fn run_transform_growth(cfg: &ExperimentConfig, seed: u64) -> Result<ExperimentReport> {
    let prm: TransformGrowthParams = cfg.typed()?;
    let mut rep = ExperimentReport::new(&cfg.id, topic(&cfg.id), echo(&prm), seed);
    let space = SpaceSpec::line_uniform(prm.line_x_max, prm.line_resolution);
    let ps = crate::norms::p_grid(prm.p_lo, prm.p_hi, prm.p_points);
    // |f|_p^p = 1/(p - 1) + b/(b - p) blows up like (p - 1)^{-1} at p = 1, i.e. alpha = 1
    let alpha = 1.0;
    let mut table = Table::new("transform-moments", &["b", "p", "lp", "lp_over_p_alpha"]);
    for &b in &prm.b {
        let entry = Entry::Fab { a: 1.0, b };
        entry.validate()?;
        let f = entry.sample(space)?;
        let ff = fourier_transform(&f)?;
        let ln: Vec<f64> = ps.iter().map(|&p| ln_lp(&ff, p)).collect();
        for (p, l) in ps.iter().zip(&ln) {
            table.push(vec![num(b), num(*p), num(l.exp()), num((l - alpha * p.ln()).exp())]);
        }
        let h = ps.len() / 2;
        let x: Vec<f64> = ps[h..].iter().map(|p| p.ln()).collect();
        let slope = linear_fit(&x, &ln[h..]).0;
        rep.constant(&format!("moment-slope[b={b}]"), slope, Source::Fitted);
        rep.check(
            &format!("bounded-in-scale[b={b}]"),
            None,
            slope <= alpha + prm.margin,
            format!("log |F f|_p grows like p^{slope:.3} (alpha = {alpha})"),
        );
        let v = f.values();
        let edge = v[v.len() - 1].norm() / f.max_abs();
        rep.warnings.push(format!("b = {b}: truncated at X = {} with boundary ratio {edge:.2e}", prm.line_x_max));
    }
    rep.tables.push(table);
    Ok(rep)
}
