//! Fixtures shared by the benchmarks in `benches/`.

use torusnoise::{ChannelSpec, Dimension, KrausChannel, MapSpec, UnitaryOperator};

pub fn dim(n: usize) -> Dimension {
    Dimension::new(n).expect("benchmark sizes are valid")
}

/// Channel at the sizes used for the spectrum panels (ε = 0.4, adc width 0.4).
pub fn channel(spec: &str, n: usize) -> KrausChannel {
    spec.parse::<ChannelSpec>()
        .and_then(|c| c.build(dim(n), 0.4))
        .expect("benchmark channels are valid")
}

pub fn map(spec: &str, n: usize) -> UnitaryOperator {
    spec.parse::<MapSpec>()
        .and_then(|m| m.build(dim(n)))
        .expect("benchmark maps are valid")
}
