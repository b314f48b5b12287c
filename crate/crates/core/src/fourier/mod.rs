//! Discrete Fourier-side operators: coefficients and partial sums on the
//! torus, the Hilbert transform, band-limiting on the line and Haar partial
//! sums, plus the `(M, p)` growth sweep used by the experiments.

mod growth;
mod haar;
mod hilbert;
mod line;
mod torus;

pub use growth::{classify_trace, growth_report, GrowthReport, Operator, TraceFlags};
pub use haar::haar_partial;
pub use hilbert::{hilbert, hilbert_coeffs, hilbert_pv, hilbert_pv_at};
pub use line::{dual_space, fourier_transform, inverse_transform, s_band, BandLimited, DECAY_TOLERANCE};
pub use torus::{coeffs, s_m, synthesize, truncate};
