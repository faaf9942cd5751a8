//! Exact simulation of two-pair entanglement teleportation through Pauli
//! noise: joint-state evolution, Bell measurement, per-outcome channel
//! extraction, Pauli-pair reversal and entanglement bookkeeping.

pub mod channels;
pub mod error;
pub mod exec;
pub mod qmath;
pub mod reversal;
pub mod states;
pub mod teleport;
pub mod tolerances;

pub use channels::{choi, choi_distance, compose, ChoiMatrix, Completeness, KrausChannel};
pub use error::{QError, Result};
pub use exec::Execution;
pub use qmath::{ComplexMatrix, DensityMatrix, PureState, C64};
pub use reversal::{averaged_fmax, optimal_reversal, teleported_entanglement, ChannelModel, FidelityReport, PauliPair};
pub use states::{BellIndex, Correlation, MeasurementOutcome, ResourceSpec, WernerParam};
pub use teleport::{extract_kraus, simulate_double, simulate_single};
pub use tolerances::Tolerances;
