//! Generalized quantum noise channels on an `N`-level system, quantized
//! torus maps and the spectra and dynamics of their compositions.
//!
//! ```
//! use torusnoise::{depolarizing, spectrum, to_matrix, Dimension, NoiseStrength};
//!
//! let dim = Dimension::new(4).unwrap();
//! let dc = depolarizing(dim, NoiseStrength::new(0.4).unwrap());
//! let report = spectrum(&to_matrix(&dc), 1e-8).unwrap();
//! assert_eq!(report.clusters.len(), 2);
//! assert_eq!(report.clusters[1].multiplicity, 15);
//! ```

pub mod channels;
pub mod circuit;
pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod maps;
pub mod phase_space;
pub mod random;
pub mod superop;

pub use channels::{
    adc_one_qubit, amplitude_damping, amplitude_damping_from, depolarizing, gaussian_transition,
    phase_damping, phase_damping_line, ChannelLabel, ChannelSpec, CptpReport,
    DephasingCoefficients, KrausChannel, NoiseStrength, TransitionMatrix,
};
pub use circuit::{
    adc_circuit, adc_transition_probability, adc_xor_channel, dc_circuit, induced_channel,
    induced_kraus, pdc_circuit, pdc_circuit_per_qubit, verify_circuit, CircuitKind,
    CircuitReport, EnvState, Gate, QubitCircuit, RotationSchedule,
};
pub use dynamics::{
    dc_entropy_closed_form, entropy_series, evolve, evolve_with, grover_success_series,
    vec_entropy, wigner_series, EvolutionConfig, InitialState, Propagator, Trajectory,
};
pub use error::{Error, Result};
pub use hilbert::{
    cat_state, coherent_state, dft_matrix, linear_entropy, momentum_state, position_state,
    DensityMatrix, Dimension, PhasePoint, StateVector,
};
pub use linalg::{CMat, C64};
pub use maps::{
    baker_propagator, cat_propagator, classical_cat_step, grover_geometry, grover_operator,
    CatKind, CatParams, GroverGeometry, GroverInstance, MapSpec, UnitaryOperator,
};
pub use phase_space::{
    chord_commutation_phase, line_points, translation_operator, wigner_function, ChordIndex,
    LineSpec, WignerGrid, WignerNormalization,
};
pub use superop::{
    cluster_eigenvalues, compose, composed_matrix, spectrum, to_matrix, Cluster,
    SpectrumReport, SuperoperatorMatrix,
};
