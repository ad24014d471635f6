//! Fixtures shared by the benchmarks.

use gaussctl::{build_chain, ChainSpec, ControlModel, ControlSchedule, Segment};

pub fn chain(n: usize) -> ControlModel {
    build_chain(&ChainSpec::canonical(n).expect("canonical chain")).expect("chain model")
}

/// Deterministic schedule with unit-range amplitudes.
pub fn schedule(segments: usize, controls: usize) -> ControlSchedule {
    ControlSchedule::new(
        (0..segments)
            .map(|k| {
                let k = k as f64;
                Segment {
                    duration: 0.05 + 0.45 * (0.37 * k).sin().abs(),
                    controls: (0..controls).map(|c| (0.7 * k + 1.3 * c as f64).cos()).collect(),
                }
            })
            .collect(),
    )
}
