//! States, measurements, distances, discrimination and classicality.

mod classical;
mod discrimination;
mod distance;
mod family;
mod measurement;
mod state;

pub use classical::{
    classicality_certificate, common_eigenbasis, max_commutator_pair, restrict_to_joint_support,
    Classicality, CommutatorWitness,
};
pub use discrimination::{helstrom_measurement, post_measurement_state};
pub use distance::{d_max, trace_distance, trace_norm};
pub use family::ParametrisedState;
pub use measurement::{outcome_distribution, KrausMeasurement, Povm};
pub use state::{validate_state, DensityMatrix};
