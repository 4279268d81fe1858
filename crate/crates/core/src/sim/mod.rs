//! Path samplers: exact constructions and Euler–Maruyama.

pub mod batch;
pub mod em;
pub mod exact;
pub mod path;

pub use batch::{map_paths, par_samples, GeneratedBatch, PathBatch, ScaledH};
pub use em::{
    euler_maruyama, euler_maruyama_driven, euler_maruyama_with, Decomposition, InitialSegment, PathSdeSpec, PathView,
    ScalarField, StepInfo,
};
pub use exact::*;
pub use path::{AssumptionTag, SimPath};
