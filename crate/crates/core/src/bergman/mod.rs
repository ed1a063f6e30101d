//! Bergman and harmonic projection kernels of model bundles: closed forms,
//! Gram-matrix kernels, expansion fits, off-diagonal decay and projector
//! identities.

pub mod analysis;
pub mod exact;
pub mod gram;
pub mod quadrature;
pub mod space;

pub use analysis::{expansion_fit, offdiag_decay, projector_checks, DecayReport, DecaySample, FitReport, KernelSample, ProjectorReport};
pub use exact::{fock_harmonic_kernel, fock_kernel_exact, p1_kernel_exact, HarmonicValue, P1_VOLUME};
pub use gram::{gram_bergman, gram_bergman_many, GramEvaluation, GramKernel, GramMatrix, ModelId, QuadSpec, SectionBasis};
pub use quadrature::gauss_legendre;
pub use space::Space1D;
