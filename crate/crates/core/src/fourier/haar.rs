use std::f64::consts::PI;

use num_complex::Complex64;

use super::torus::require_torus;
use crate::error::{Error, Result};
use crate::space::GridFunction;

/// Projection onto the first `m` functions of the dyadic Haar system on
/// `[0, 1]`, with the torus mapped by `y = x / (2 pi)`.
///
/// For `m = 2^k + r`, `0 <= r < 2^k`, this is the average over the dyadic
/// intervals of length `2^-k`, the first `r` of them split once more.
pub fn haar_partial(f: &GridFunction, m: usize) -> Result<GridFunction> {
    require_torus(f)?;
    if m == 0 {
        return Err(Error::InvalidParameter("Haar partial sum needs m >= 1".into()));
    }
    if m > f.len() {
        return Err(Error::OrderTooLarge { order: m, resolution: f.len() });
    }
    let k = usize::BITS - 1 - m.leading_zeros();
    let r = m - (1usize << k);
    let coarse = (1usize << k) as f64;
    let cell = |x: f64| -> usize {
        let y = (x / (2.0 * PI)).clamp(0.0, 1.0 - f64::EPSILON);
        let i = (y * coarse) as usize;
        if i < r {
            2 * i + ((y * 2.0 * coarse) as usize & 1)
        } else {
            r + i
        }
    };
    let cells = (1usize << k) + r;
    let mut sum = vec![Complex64::new(0.0, 0.0); cells];
    let mut measure = vec![0.0; cells];
    let labels: Vec<usize> = f.nodes().iter().map(|&x| cell(x)).collect();
    for ((&c, v), &w) in labels.iter().zip(f.values()).zip(f.weights()) {
        sum[c] += v * w;
        measure[c] += w;
    }
    let values = labels
        .iter()
        .map(|&c| if measure[c] > 0.0 { sum[c] / measure[c] } else { Complex64::new(0.0, 0.0) })
        .collect();
    f.with_values(values, &format!("P_{m}[{}]", f.meta()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceSpec;

    #[test]
    fn constants_and_first_wavelet() {
        let c = GridFunction::sample(SpaceSpec::torus(64), "c", |_| 1.5).unwrap();
        for m in [1, 2, 5, 64] {
            assert!(haar_partial(&c, m).unwrap().sub(&c).unwrap().max_abs() < 1e-14);
        }
        let h = GridFunction::sample(SpaceSpec::torus(64), "haar", |x| if x < PI { 1.0 } else { -1.0 }).unwrap();
        assert!(haar_partial(&h, 1).unwrap().max_abs() < 1e-14);
        for m in [2, 3, 7] {
            assert!(haar_partial(&h, m).unwrap().sub(&h).unwrap().max_abs() < 1e-14);
        }
        assert!(haar_partial(&h, 65).is_err());
    }

    #[test]
    fn idempotent() {
        let f = GridFunction::sample(SpaceSpec::torus(256), "f", |x| (3.0 * x).sin() + x).unwrap();
        for m in [1, 3, 6, 13, 100] {
            let p = haar_partial(&f, m).unwrap();
            assert!(haar_partial(&p, m).unwrap().sub(&p).unwrap().max_abs() < 1e-10);
        }
    }

    #[test]
    fn refinement_order() {
        // m = 3 splits only the first half
        let f = GridFunction::sample(SpaceSpec::torus(16), "x", |x| x).unwrap();
        let p = haar_partial(&f, 3).unwrap();
        let v: Vec<f64> = p.values().iter().map(|z| z.re).collect();
        assert!(v[0] < v[4] && v[4] < v[8]);
        assert_eq!(v[8], v[15]);
    }
}
