//! Fixtures shared by the benchmarks.

use grandlab::catalog::Entry;
use grandlab::{GridFunction, SpaceSpec};

/// `g_1` on the graded torus.
pub fn log_singular(resolution: usize) -> GridFunction {
    Entry::GM { m: 1.0 }.sample(SpaceSpec::torus_graded(resolution)).expect("catalog sample")
}

/// `sin x + cos 3x / 2` on the uniform torus.
pub fn smooth(resolution: usize) -> GridFunction {
    Entry::SmoothB.sample(SpaceSpec::torus(resolution)).expect("catalog sample")
}
