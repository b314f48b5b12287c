
use super::{p_grid, NormReport, P_MAX, P_POINTS};
use crate::duality::PsiFunction;
use crate::error::{Error, Result};
use crate::numeric::{log_sum_exp, logspace};
use crate::space::SequenceData;

const ALPHA_GRID_POINTS: usize = 60;
const ALPHA_GRID_DEPTH: f64 = 1e-6;

fn ln_seq_lp(c: &SequenceData, p: f64) -> f64 {
    log_sum_exp(c.values.iter().filter(|v| v.norm() > 0.0).map(|v| p * v.norm().ln())) / p
}

fn ln_seq_lp_nu(c: &SequenceData, p: f64) -> f64 {
    log_sum_exp(c.iter().filter(|(_, v)| v.norm() > 0.0).map(|(n, v)| {
        let n = n.unsigned_abs() as f64;
        let weight = if n == 0.0 {
            if p == 2.0 {
                2f64.ln()
            } else {
                0.0
            }
        } else {
            ((p - 2.0) * n.ln()).exp().ln_1p()
        };
        weight + p * v.norm().ln()
    })) / p
}

/// `|c|_p = (sum |c(n)|^p)^{1/p}`.
pub fn seq_lp(c: &SequenceData, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!("l_p needs p >= 1, got {p}")));
    }
    Ok(ln_seq_lp(c, p).exp())
}

/// `|c|_p(nu) = (sum |c(n)|^p (|n|^{p-2} + 1))^{1/p}`.
pub fn seq_lp_nu(c: &SequenceData, p: f64) -> Result<f64> {
    if !(p >= 2.0) {
        return Err(Error::InvalidParameter(format!("l_p(nu) needs p >= 2, got {p}")));
    }
    Ok(ln_seq_lp_nu(c, p).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeqVariant {
    /// `sup_{p >= 2} |c|_p(nu) / psi(p)`
    Psi { psi: PsiFunction },
    /// `sup_{a < p < b} |c|_p (p - a)^alpha`
    Alpha { a: f64, alpha: f64, b: f64 },
}

impl SeqVariant {
    /// `g(a, alpha)` with the sup taken over `(a, a + 1)`.
    pub fn alpha(a: f64, alpha: f64) -> Self {
        Self::Alpha { a, alpha, b: a + 1.0 }
    }
}

/// Discrete moment-growth norms.
pub fn seq_g(c: &SequenceData, variant: &SeqVariant) -> Result<NormReport> {
    let (grid, ln_term): (Vec<f64>, Box<dyn Fn(f64) -> f64>) = match variant {
        SeqVariant::Psi { psi } => {
            if psi.alpha() > 2.0 {
                return Err(Error::InvalidParameter("g(psi, nu) needs psi defined from p = 2".into()));
            }
            (
                p_grid(2.0, P_MAX.min(psi.p_max()), P_POINTS),
                Box::new(move |p| ln_seq_lp_nu(c, p) - psi.ln_eval(p)),
            )
        }
        SeqVariant::Alpha { a, alpha, b } => {
            if !(*a >= 1.0 && b > a) || !(*alpha >= 0.0) {
                return Err(Error::InvalidParameter(format!("g(a, alpha) needs 1 <= a < b, alpha >= 0; got a = {a}, b = {b}, alpha = {alpha}")));
            }
            let (a, alpha, b) = (*a, *alpha, *b);
            (
                logspace(ALPHA_GRID_DEPTH, 1.0, ALPHA_GRID_POINTS)
                    .into_iter()
                    .map(|s| a + (b - a) * s)
                    .collect(),
                Box::new(move |p| ln_seq_lp(c, p) + if alpha == 0.0 { 0.0 } else { alpha * (p - a).ln() }),
            )
        }
    };
    let ln_vals: Vec<f64> = grid.iter().map(|&p| ln_term(p)).collect();
    let (i, &best) = ln_vals
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1).then(y.0.cmp(&x.0)))
        .expect("grid is nonempty");
    if best == f64::NEG_INFINITY {
        return Ok(NormReport {
            argmax_p: Some(grid[0]),
            ..NormReport::finite(0.0)
        });
    }
    let mut r = NormReport {
        argmax_p: Some(grid[i]),
        ..NormReport::finite(best.exp())
    };
    if i + 1 == grid.len() || (i == 0 && matches!(variant, SeqVariant::Alpha { .. })) {
        r.possibly_infinite = true;
        r.diagnostics.push(format!("sup attained at the grid edge p = {}", grid[i]));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};

    #[test]
    fn unit_sequence() {
        let c = SequenceData::real(vec![1], &[1.0]);
        for p in [1.0, 2.0, 5.0] {
            assert!((seq_lp(&c, p).unwrap() - 1.0).abs() < 1e-15);
        }
        for p in [2.0, 3.0, 9.0] {
            assert!((seq_lp_nu(&c, p).unwrap() - 2f64.powf(1.0 / p)).abs() < 1e-14);
        }
        let r = seq_g(&c, &SeqVariant::Psi { psi: PsiFunction::power(1.0).unwrap() }).unwrap();
        assert_eq!(r.argmax_p, Some(2.0));
        assert!((r.value - 2f64.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn weighted_l2_is_twice_l2_off_zero() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let support: Vec<i64> = (1..=10).map(|k| if k % 2 == 0 { k } else { -k }).collect();
        let values: Vec<Complex64> = (0..10).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let c = SequenceData::new(support, values.clone());
        let want: f64 = values.iter().map(|v| 2.0 * v.norm_sqr()).sum();
        assert!((seq_lp_nu(&c, 2.0).unwrap().powi(2) - want).abs() < 1e-12 * want);
        let l: Vec<f64> = [1.0, 1.5, 2.0, 4.0, 10.0].iter().map(|&p| seq_lp(&c, p).unwrap()).collect();
        assert!(l.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn harmonic_sequence_alpha_norm() {
        let n = 100_000;
        let c = SequenceData::contiguous(1, (1..=n).map(|k| Complex64::new(1.0 / k as f64, 0.0)).collect());
        let r = seq_g(&c, &SeqVariant::alpha(1.0, 1.0)).unwrap();
        assert!(r.value.is_finite() && r.value > 0.0);
        // the truncated zeta sum bounds the full one from below
        let p = r.argmax_p.unwrap();
        let zeta = (1..=n).map(|k| (k as f64).powf(-p)).sum::<f64>();
        assert!((r.value - zeta.powf(1.0 / p) * (p - 1.0)).abs() < 1e-9);
        let doubled = seq_g(&c.scale(2.0), &SeqVariant::alpha(1.0, 1.0)).unwrap();
        assert!((doubled.value - 2.0 * r.value).abs() < 1e-12);
    }
}
