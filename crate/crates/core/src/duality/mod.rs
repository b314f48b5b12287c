//! Young functions, their Legendre-Fenchel conjugates, the growth functions
//! `psi` built from them, and the exponential N-functions of the associated
//! Orlicz spaces.
//!
//! The central link is `psi(p) = exp(W*(p) / p)` in one direction and
//! `N(u) = exp([p log psi(p)]*(log u))` in the other; both directions go
//! through [`legendre`].

mod dominance;
mod legendre;
mod nfunction;
mod psi;
mod spec;
mod young;

pub use dominance::{classify_ratio_trend, dominance, Classification, TREND_WINDOW};
pub use legendre::{legendre, Conjugate, ConjugatePoint, LegendreTable};
pub use nfunction::{n_alpha, n_from_psi, n_mr, AlphaConstants, NFunction, NKind, PowerCompletion};
pub use psi::{psi_from_young, psi_from_young_on, psi_shift_d, PsiFunction, PsiKind};
pub use spec::FunctionSpec;
pub use young::{YoungFunction, YoungKind};

use crate::numeric::derivative;

/// A convex function of one real variable, evaluable pointwise.
pub trait ConvexFn: Send + Sync {
    fn value(&self, x: f64) -> f64;

    fn slope(&self, x: f64) -> f64 {
        derivative(|t| self.value(t), x)
    }
}

/// Wraps a closure as a [`ConvexFn`]; convexity is the caller's promise.
pub struct FnConvex<F>(pub F);

impl<F: Fn(f64) -> f64 + Send + Sync> ConvexFn for FnConvex<F> {
    fn value(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}
