//! Small numerical kernels shared across modules: grids, log-sum-exp and
//! golden-section search.

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo && n >= 1);
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// `log(sum(exp(terms)))`, ignoring `-inf` entries. Returns `-inf` for an
/// empty or all-`-inf` input.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let terms: Vec<f64> = terms.into_iter().collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let s: f64 = terms.iter().map(|t| (t - max).exp()).sum();
    max + s.ln()
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes a unimodal `f` on `[lo, hi]`, returning `(argmax, max)`.
/// Terminates when the bracket is shorter than `tol * (1 + |x|)`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..400 {
        if (hi - lo) <= tol * (1.0 + x1.abs().max(x2.abs())) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    // endpoints may beat the interior probes when the maximum sits on the boundary
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for x in [lo, hi] {
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Result of maximizing a concave objective on `[lo, inf)`.
#[derive(Debug, Clone, Copy)]
pub enum HalfLineMax {
    Finite { argmax: f64, value: f64 },
    Unbounded,
}

/// Maximizes a concave `f` on `[lo, inf)` by geometric bracket expansion
/// followed by golden-section refinement.
pub fn maximize_concave_half_line<F: Fn(f64) -> f64>(f: F, lo: f64, tol: f64) -> HalfLineMax {
    const LIMIT: f64 = 1e12;
    let f_lo = f(lo);
    let mut step = lo.abs().max(1.0) * 1e-3;
    let mut a = lo;
    let mut b = lo + step;
    let mut fb = f(b);
    if !(fb > f_lo) {
        // decreasing at the boundary: the maximum is at `lo` or within the first step
        let (x, v) = golden_max(&f, lo, b, tol);
        return HalfLineMax::Finite { argmax: x, value: v };
    }
    let mut fa = f_lo;
    loop {
        step *= 2.0;
        let c = b + step;
        if c - lo > LIMIT {
            return HalfLineMax::Unbounded;
        }
        let fc = f(c);
        if !fc.is_finite() || fc <= fb {
            let (x, v) = golden_max(&f, a, c, tol);
            let _ = fa;
            return HalfLineMax::Finite { argmax: x, value: v };
        }
        a = b;
        fa = fb;
        b = c;
        fb = fc;
    }
}

/// Central finite-difference derivative with a relative step.
pub fn derivative<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    let h = 1e-5 * x.abs().max(1.0);
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
