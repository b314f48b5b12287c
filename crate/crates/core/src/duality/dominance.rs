use serde::{Deserialize, Serialize};

use super::PsiFunction;
use crate::numeric::logspace;

/// Number of trailing grid points inspected by the trend classifier.
pub const TREND_WINDOW: usize = 20;
const GRID_POINTS: usize = 200;
const SMALL_RATIO: f64 = 1e-3;
const MIN_DROP: f64 = 0.01;
const FLAT_RATIO: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Dominated,
    NotDominated,
    Inconclusive,
}

/// Classifies whether a positive sequence tends to zero from its tail.
///
/// Dominated: the last value is below `1e-3` and below the first value of the
/// window, or the window is nonincreasing with a total relative drop of at
/// least 1%. Not dominated: the window ends at no less than 99% of where it
/// starts. Anything else is inconclusive.
pub fn classify_ratio_trend(ratios: &[f64]) -> Classification {
    let tail: Vec<f64> = ratios.iter().rev().take(TREND_WINDOW).rev().copied().collect();
    if tail.len() < 2 || tail.iter().any(|r| !r.is_finite() || *r < 0.0) {
        return Classification::Inconclusive;
    }
    let (first, last) = (tail[0], tail[tail.len() - 1]);
    let nonincreasing = tail.windows(2).all(|w| w[1] <= w[0]);
    if last < SMALL_RATIO && last < first {
        return Classification::Dominated;
    }
    if nonincreasing && last <= (1.0 - MIN_DROP) * first {
        return Classification::Dominated;
    }
    if last >= FLAT_RATIO * first {
        return Classification::NotDominated;
    }
    Classification::Inconclusive
}

/// Classifies `lim psi(p) / theta(p) = 0` on a 200-point log grid over the
/// common domain `[max alpha, min(p_max, domain ends)]`.
pub fn dominance(psi: &PsiFunction, theta: &PsiFunction, p_max: f64) -> Classification {
    let lo = psi.alpha().max(theta.alpha());
    let hi = p_max.min(psi.p_max()).min(theta.p_max());
    if !(hi > lo) {
        return Classification::Inconclusive;
    }
    let ratios: Vec<f64> = logspace(lo, hi, GRID_POINTS)
        .into_iter()
        .map(|p| (psi.ln_eval(p) - theta.ln_eval(p)).exp())
        .collect();
    classify_ratio_trend(&ratios)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::PsiKind;

    #[test]
    fn power_scales() {
        let half = PsiFunction::power(2.0).unwrap();
        let one = PsiFunction::power(1.0).unwrap();
        assert_eq!(dominance(&half, &one, 256.0), Classification::Dominated);
        assert_eq!(dominance(&one, &half, 256.0), Classification::NotDominated);
        assert_eq!(dominance(&one, &one, 256.0), Classification::NotDominated);
    }

    #[test]
    fn slow_log_ratio_is_flagged() {
        let one = PsiFunction::new(std::f64::consts::E.powi(2), PsiKind::Power { m: 1.0 }).unwrap();
        let slow = PsiFunction::new(
            std::f64::consts::E.powi(2),
            PsiKind::LogFactor {
                base: Box::new(one.clone()),
                r: -1.0,
            },
        )
        .unwrap();
        assert_eq!(dominance(&slow, &one, 1e6), Classification::Dominated);
    }

    #[test]
    fn trend_rules() {
        assert_eq!(classify_ratio_trend(&[1.0, 2.0]), Classification::NotDominated);
        assert_eq!(classify_ratio_trend(&[1.0, 0.5, 0.6]), Classification::Inconclusive);
        assert_eq!(classify_ratio_trend(&[1e-2, 5e-4, 6e-4]), Classification::Dominated);
        assert_eq!(classify_ratio_trend(&[1.0]), Classification::Inconclusive);
    }
}
