//! Quadratic-model realization of the heat-semigroup construction: linear
//! Hamiltonian flow, Riccati evolution of the phase, stable manifolds, the
//! limit phase and the two-point kernel phase.

pub mod amplitude;
pub mod kernel;
pub mod model;
pub mod phase;
pub mod stable;

pub use amplitude::amplitude_decay_rates;
pub use kernel::{kernel_phase, KernelPhase};
pub use model::{build_model, Hamiltonian, QuadraticModel};
pub use phase::{
    compose, convergence_rate, evolve_phase, evolve_phase_sampled, phase_from_flow, trajectory, QuadraticPhase,
    TrajectoryRow, DEFAULT_STEP,
};
pub use stable::{graph_defect, phase_limit, stable_subspaces, StablePair};
