use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{echo, num, topic, ExperimentConfig, ExperimentReport, Table};
use crate::catalog::{Entry, SlowlyVarying, Source, Z_FIRST};
use crate::duality::{PsiFunction, PsiKind};
use crate::error::Result;
use crate::fourier::{classify_trace, growth_report, hilbert_pv, hilbert_pv_at, synthesize, GrowthReport, Operator};
use crate::norms::{ln_lp, p_grid};
use crate::numeric::linear_fit;
use crate::space::{GridFunction, SequenceData, SpaceSpec};
use num_complex::Complex64;

fn powers_of_two(lo: u32, hi: u32) -> Vec<f64> {
    (lo..=hi).map(|k| 2f64.powi(k as i32)).collect()
}

/// Torus catalog entries on the grid their operators run on: graded for
/// the singular ones, uniform otherwise.
fn torus_catalog(graded: usize, uniform: usize) -> Vec<(Entry, SpaceSpec)> {
    vec![
        (Entry::GM { m: 1.0 }, SpaceSpec::torus_graded(graded)),
        (Entry::GM { m: 2.0 }, SpaceSpec::torus_graded(graded)),
        (
            Entry::ZL {
                l: SlowlyVarying::Log,
                n_max: None,
            },
            SpaceSpec::torus_graded(graded),
        ),
        (Entry::SmoothA, SpaceSpec::torus(uniform)),
        (Entry::SmoothB, SpaceSpec::torus(uniform)),
    ]
}

fn push_growth_tables(rep: &mut ExperimentReport, name: &str, r: &GrowthReport) {
    let ratio: Vec<Vec<f64>> = r
        .op_lp
        .iter()
        .map(|row| row.iter().zip(&r.f_lp).map(|(a, b)| a / b).collect())
        .collect();
    rep.tables.push(Table::matrix(&format!("{name}.ratio"), "M", &r.m_grid, "p=", &r.p_grid, &ratio));
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RieszParams {
    pub m_max_log2: u32,
    pub p_lo: f64,
    pub p_hi: f64,
    pub p_points: usize,
    pub graded_resolution: usize,
    pub uniform_resolution: usize,
    pub bound: f64,
    pub line_bound: f64,
    pub line_x_max: f64,
    pub line_resolution: usize,
    pub line_samples: usize,
}

impl Default for RieszParams {
    fn default() -> Self {
        Self {
            m_max_log2: 12,
            p_lo: 2.0,
            p_hi: 64.0,
            p_points: 16,
            graded_resolution: 16384,
            uniform_resolution: 16384,
            bound: 2.0 * std::f64::consts::PI,
            line_bound: 1.1,
            line_x_max: 16.0,
            line_resolution: 4096,
            line_samples: 4,
        }
    }
}

/// Gaussian-windowed random cosine sum on the line.
fn windowed_trig(seed: u64, space: SpaceSpec) -> Result<GridFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(f64, f64, f64)> = (0..8)
        .map(|k| (rng.gen_range(-1.0..1.0), (k + 1) as f64 * 0.75, rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    GridFunction::sample(space, &format!("windowed-trig:seed={seed}"), move |x| {
        (-x * x / 8.0).exp() * terms.iter().map(|(a, w, ph)| a * (w * x + ph).cos()).sum::<f64>()
    })
}

pub fn run_riesz(cfg: &ExperimentConfig, seed: u64) -> Result<ExperimentReport> {
    let prm: RieszParams = cfg.typed()?;
    let mut rep = ExperimentReport::new(&cfg.id, topic(&cfg.id), echo(&prm), seed);
    let ps = p_grid(prm.p_lo, prm.p_hi, prm.p_points);
    let ms = powers_of_two(1, prm.m_max_log2);
    let psi = PsiFunction::power(1.0)?;
    let mut summary = Table::new("summary", &["function", "operator", "max_ratio_over_p"]);
    let mut worst = 0.0f64;
    for (entry, space) in torus_catalog(prm.graded_resolution, prm.uniform_resolution) {
        let f = entry.sample(space)?;
        let r = growth_report(&f, Operator::PartialSum, &ps, &ms, &psi, 0, None)?;
        worst = worst.max(r.riesz_constant);
        summary.push(vec![json!(entry.label()), json!("s_M"), num(r.riesz_constant)]);
        push_growth_tables(&mut rep, &entry.label(), &r);
    }
    rep.constant("K1", worst, Source::Fitted);
    rep.check(
        "riesz-torus",
        Some(5),
        worst <= prm.bound,
        format!("max over catalog, M <= 2^{}, p in [{}, {}] of |s_M f|_p / (p |f|_p) = {worst:.4}", prm.m_max_log2, prm.p_lo, prm.p_hi),
    );

    let line = SpaceSpec::line_uniform(prm.line_x_max, prm.line_resolution);
    let band: Vec<f64> = (-1..=6).map(|k| 2f64.powi(k)).collect();
    let mut worst_line = 0.0f64;
    let mut inputs = vec![Entry::Gaussian.sample(line)?];
    for k in 0..prm.line_samples {
        inputs.push(windowed_trig(seed.wrapping_add(k as u64), line)?);
    }
    for f in &inputs {
        let r = growth_report(f, Operator::BandLimit, &ps, &band, &psi, 0, None)?;
        worst_line = worst_line.max(r.riesz_constant);
        summary.push(vec![json!(f.meta()), json!("S_M"), num(r.riesz_constant)]);
        rep.warnings.extend(r.warnings.iter().map(|w| format!("{}: {w}", f.meta())));
    }
    rep.tables.push(summary);
    rep.constant("K2", worst_line, Source::Fitted);
    rep.check(
        "riesz-line",
        Some(5),
        worst_line <= prm.line_bound,
        format!("max of |S_M f|_p / (p |f|_p) over {} line inputs = {worst_line:.4}", inputs.len()),
    );
    Ok(rep)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SharpnessParams {
    pub m: Vec<f64>,
    pub resolution: usize,
    pub fit_lo: f64,
    pub fit_hi: f64,
    pub targets: usize,
    pub tolerance: f64,
    pub p_lo: f64,
    pub p_hi: f64,
    pub p_points: usize,
    pub delta: f64,
    pub slope_margin: f64,
    pub partial_sum_log2: u32,
}

impl Default for SharpnessParams {
    fn default() -> Self {
        Self {
            m: vec![1.0, 2.0],
            resolution: 16384,
            fit_lo: 30.0,
            fit_hi: 500.0,
            targets: 48,
            tolerance: 0.10,
            p_lo: 2.0,
            p_hi: 128.0,
            p_points: 40,
            delta: 0.25,
            slope_margin: 0.05,
            partial_sum_log2: 9,
        }
    }
}

/// Nodes whose `|log(x / 2 pi)|` is closest to a log-spaced sequence in `[lo, hi]`.
fn log_targets(g: &GridFunction, lo: f64, hi: f64, count: usize) -> Vec<usize> {
    let levels: Vec<f64> = crate::numeric::logspace(lo, hi, count);
    let depth: Vec<f64> = g.nodes().iter().map(|x| (x / std::f64::consts::TAU).ln().abs()).collect();
    let half = g.nodes().partition_point(|&x| x < std::f64::consts::PI);
    let mut out: Vec<usize> = levels
        .iter()
        .map(|&l| {
            (0..half)
                .min_by(|&a, &b| (depth[a] - l).abs().total_cmp(&(depth[b] - l).abs()))
                .expect("nonempty grid")
        })
        .collect();
    out.dedup();
    out
}

pub fn run_sharpness(cfg: &ExperimentConfig, seed: u64) -> Result<ExperimentReport> {
    let prm: SharpnessParams = cfg.typed()?;
    let mut rep = ExperimentReport::new(&cfg.id, topic(&cfg.id), echo(&prm), seed);
    let space = SpaceSpec::torus_graded(prm.resolution);
    let ps = p_grid(prm.p_lo, prm.p_hi, prm.p_points);
    let mut pointwise = Table::new("hilbert-pointwise", &["m", "x", "log_depth", "abs_hg"]);
    let mut moments = Table::new("hilbert-moments", &["m", "p", "lp"]);
    let mut flags = Table::new("membership", &["m", "scale_exponent_q", "moment_slope", "threshold", "infinite"]);
    for &m in &prm.m {
        let g = Entry::GM { m }.sample(space)?;
        let targets = log_targets(&g, prm.fit_lo, prm.fit_hi, prm.targets);
        let hg = hilbert_pv_at(&g, &targets)?;
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for (&i, v) in targets.iter().zip(&hg) {
            let x = g.nodes()[i];
            let depth = (x / std::f64::consts::TAU).ln().abs();
            xs.push(depth.ln());
            ys.push(v.norm().ln());
            pointwise.push(vec![num(m), num(x), num(depth), num(v.norm())]);
        }
        let growth = linear_fit(&xs, &ys).0;
        let tail_exp = 1.0 / growth;
        let want = m / (m + 1.0);
        rep.constant(&format!("hilbert-growth-exponent[m={m}]"), growth, Source::Fitted);
        rep.constant(&format!("hilbert-tail-exponent[m={m}]"), tail_exp, Source::Fitted);
        rep.check(
            &format!("tail-exponent[m={m}]"),
            Some(6),
            (tail_exp - want).abs() <= prm.tolerance * want,
            format!("fitted tail exponent {tail_exp:.4} vs m/(m+1) = {want:.4}"),
        );

        // moment growth of H g_m: slope of log |Hg|_p in log p over the top quarter
        let h = hilbert_pv(&g)?;
        let ln_norms: Vec<f64> = ps.iter().map(|&p| ln_lp(&h, p)).collect();
        for (p, l) in ps.iter().zip(&ln_norms) {
            moments.push(vec![num(m), num(*p), num(l.exp())]);
        }
        let q0 = ps.len() - ps.len() / 4;
        let lp_: Vec<f64> = ps[q0..].iter().map(|p| p.ln()).collect();
        let slope = linear_fit(&lp_, &ln_norms[q0..]).0;
        rep.constant(&format!("hilbert-moment-slope[m={m}]"), slope, Source::Fitted);
        // L(N_q) corresponds to moments growing like p^{1/q}
        let infinite_in = |q: f64| slope > (1.0 + prm.slope_margin) / q;
        let scales = [
            ("matched", want),
            ("literal", (m - prm.delta) / (m + 1.0)),
            ("corrected", (m + prm.delta) / (m + 1.0)),
        ];
        for (label, q) in scales {
            let inf = infinite_in(q);
            flags.push(vec![num(m), num(q), num(slope), num((1.0 + prm.slope_margin) / q), json!(inf)]);
            match label {
                "matched" => rep.check(
                    &format!("finite-in-matched[m={m}]"),
                    Some(6),
                    !inf,
                    format!("moment slope {slope:.4} <= {:.4}: H g_m finite in L(N_q), q = {q:.4}", (1.0 + prm.slope_margin) / q),
                ),
                "literal" => rep.check(
                    &format!("infinite-in-(m-delta)[m={m}]"),
                    Some(6),
                    inf,
                    format!("moment slope {slope:.4} vs {:.4}: q = (m - delta)/(m + 1) = {q:.4}", (1.0 + prm.slope_margin) / q),
                ),
                _ => rep.check(
                    &format!("infinite-in-(m+delta)[m={m}]"),
                    None,
                    inf,
                    format!("moment slope {slope:.4} vs {:.4}: q = (m + delta)/(m + 1) = {q:.4}", (1.0 + prm.slope_margin) / q),
                ),
            }
        }

        // partial sums in the matched scale psi(p) = p^{(m+1)/m}
        let ms = powers_of_two(1, prm.partial_sum_log2);
        let psi = PsiFunction::new(1.0, PsiKind::Power { m: want })?;
        let sp = p_grid(2.0, 64.0, 12);
        let r = growth_report(&g, Operator::PartialSum, &sp, &ms, &psi, 0, None)?;
        rep.tables.push(Table::matrix(
            &format!("partial-sum-proxy[m={m}]"),
            "M",
            &ms,
            "",
            &[0.0],
            &r.g_proxy_by_m.iter().map(|v| vec![*v]).collect::<Vec<_>>(),
        ));
        rep.check(
            &format!("partial-sums-bounded[m={m}]"),
            None,
            r.bounded_in_m,
            format!("sup_p |s_M g|_p / p^((m+1)/m) over M: {:.4}", r.g_proxy),
        );
    }
    rep.tables.extend([pointwise, moments, flags]);
    Ok(rep)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DivergenceParams {
    pub m_max_log2: u32,
    pub graded_resolution: usize,
    pub uniform_resolution: usize,
    pub p_points: usize,
    pub p_max: f64,
}

impl Default for DivergenceParams {
    fn default() -> Self {
        Self {
            m_max_log2: 12,
            graded_resolution: 16384,
            uniform_resolution: 16384,
            p_points: 48,
            p_max: 256.0,
        }
    }
}

/// Exact coefficients of `z_L` for `|n| <= m` in the `exp(-i n x)` synthesis.
fn z_coeffs(l: SlowlyVarying, m: usize) -> SequenceData {
    let mut support = Vec::new();
    let mut values = Vec::new();
    for n in Z_FIRST as usize..=m {
        let a = l.eval(n as f64) / n as f64;
        // a sin(nx) = (i a / 2) e^{-inx} - (i a / 2) e^{inx}
        support.push(n as i64);
        values.push(Complex64::new(0.0, 0.5 * a));
        support.push(-(n as i64));
        values.push(Complex64::new(0.0, -0.5 * a));
    }
    SequenceData::new(support, values)
}

fn sup_distance(d: &GridFunction, psi: &PsiFunction, ps: &[f64]) -> f64 {
    ps.iter().map(|&p| (ln_lp(d, p) - psi.ln_eval(p)).exp()).fold(0.0, f64::max)
}

pub fn run_divergence(cfg: &ExperimentConfig, seed: u64) -> Result<ExperimentReport> {
    let prm: DivergenceParams = cfg.typed()?;
    let mut rep = ExperimentReport::new(&cfg.id, topic(&cfg.id), echo(&prm), seed);
    let ms = powers_of_two(1, prm.m_max_log2);
    let ps = p_grid(2.0, prm.p_max, prm.p_points);
    let psi = PsiFunction::new(2.0, PsiKind::Power { m: 1.0 })?;
    let theta = PsiFunction::new(
        2.0,
        PsiKind::LogFactor {
            base: Box::new(PsiFunction::power(1.0)?),
            r: 1.0,
        },
    )?;
    let mut traces = Table::new("traces", &["function", "scale", "M", "distance"]);
    let mut flag_table = Table::new("flags", &["function", "scale", "floor", "decays_last_decade", "expected"]);
    let mut all = true;

    let zl = Entry::ZL {
        l: SlowlyVarying::Log,
        n_max: None,
    };
    let z = zl.sample(SpaceSpec::torus_graded(prm.graded_resolution))?;
    let z_traces: Vec<(f64, f64)> = ms
        .par_iter()
        .map(|&m| -> Result<(f64, f64)> {
            let s = synthesize(&z_coeffs(SlowlyVarying::Log, m as usize), *z.space(), "s_M z")?;
            let d = s.sub(&z)?;
            Ok((sup_distance(&d, &psi, &ps), sup_distance(&d, &theta, &ps)))
        })
        .collect::<Result<Vec<_>>>()?;
    let smooth: Vec<(Entry, GrowthReport)> = [Entry::SmoothA, Entry::SmoothB]
        .into_iter()
        .map(|e| {
            let f = e.sample(SpaceSpec::torus(prm.uniform_resolution))?;
            Ok((e, growth_report(&f, Operator::PartialSum, &ps, &ms, &psi, 0, Some(&theta))?))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut cases: Vec<(String, &str, Vec<f64>)> = vec![
        (zl.label(), "psi=p", z_traces.iter().map(|t| t.0).collect()),
        (zl.label(), "theta=p log p", z_traces.iter().map(|t| t.1).collect()),
    ];
    for (e, r) in &smooth {
        cases.push((e.label(), "psi=p", r.trace_psi.clone()));
        cases.push((e.label(), "theta=p log p", r.trace_theta.clone().unwrap_or_default()));
    }
    for (i, (name, scale, trace)) in cases.iter().enumerate() {
        let fl = classify_trace(&ms, trace);
        let (ok, expected) = match i {
            0 => (fl.floor, "floor"),
            1 => (fl.decays_last_decade, "decays"),
            _ => (fl.decays_last_decade && !fl.floor, "decays, no floor"),
        };
        all &= ok;
        for (m, d) in ms.iter().zip(trace) {
            traces.push(vec![json!(name), json!(scale), num(*m), num(*d)]);
        }
        flag_table.push(vec![json!(name), json!(scale), json!(fl.floor), json!(fl.decays_last_decade), json!(expected)]);
        rep.check(&format!("{name} in {scale}"), Some(9), ok, format!("floor = {}, decays = {}; expected {expected}", fl.floor, fl.decays_last_decade));
    }
    rep.tables.extend([traces, flag_table]);
    if !all {
        rep.warnings.push("at least one convergence flag differs from its expectation".into());
    }
    Ok(rep)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HaarParams {
    pub m_max_log2: u32,
    pub p_lo: f64,
    pub p_hi: f64,
    pub p_points: usize,
    pub graded_resolution: usize,
    pub uniform_resolution: usize,
    pub bound: f64,
}

impl Default for HaarParams {
    fn default() -> Self {
        Self {
            m_max_log2: 12,
            p_lo: 2.0,
            p_hi: 64.0,
            p_points: 16,
            graded_resolution: 16384,
            uniform_resolution: 16384,
            bound: 13.0,
        }
    }
}

pub fn run_haar(cfg: &ExperimentConfig, seed: u64) -> Result<ExperimentReport> {
    let prm: HaarParams = cfg.typed()?;
    let mut rep = ExperimentReport::new(&cfg.id, topic(&cfg.id), echo(&prm), seed);
    let ps = p_grid(prm.p_lo, prm.p_hi, prm.p_points);
    // dyadic levels and the odd counts between them
    let mut ms: Vec<f64> = Vec::new();
    for k in 0..=prm.m_max_log2 {
        let base = 2f64.powi(k as i32);
        ms.push(base);
        if k >= 1 && k < prm.m_max_log2 {
            ms.push(base + (base / 2.0).floor());
        }
    }
    let psi = PsiFunction::power(1.0)?;
    let mut summary = Table::new("summary", &["function", "max_ratio"]);
    let mut worst = 0.0f64;
    for (entry, space) in torus_catalog(prm.graded_resolution, prm.uniform_resolution) {
        let f = entry.sample(space)?;
        let r = growth_report(&f, Operator::Haar, &ps, &ms, &psi, 0, None)?;
        worst = worst.max(r.norm_ratio_max);
        summary.push(vec![json!(entry.label()), num(r.norm_ratio_max)]);
        push_growth_tables(&mut rep, &entry.label(), &r);
    }
    rep.tables.push(summary);
    rep.constant("K6", worst, Source::Fitted);
    rep.check(
        "haar-bound",
        Some(10),
        worst <= prm.bound,
        format!("max over catalog of |P_M f|_p / |f|_p = {worst:.4}"),
    );
    Ok(rep)
}
