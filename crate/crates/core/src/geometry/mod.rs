//! Local geometry of a Hermitian line bundle with a non-degenerate curvature
//! form, in the model where the bundle is trivial and `|s|² = e^{−2φ}`.

pub mod characteristic;
pub mod levi;
pub mod nijenhuis;
pub mod spectrum;
pub mod symbol;
pub mod weight;

pub use characteristic::{commutation_check, p0_eval, q_values, sigma_point, RealCotangent, SymbolPoint};
pub use levi::{jprime_structure, levi_matrix, signature, JPrimeStructure, LeviMatrix, Signature, DEFAULT_SIGNATURE_TOL};
pub use nijenhuis::{nijenhuis_obstruction, ObstructionMethod};
pub use spectrum::{fundamental_matrix_data, subprincipal_min, subprincipal_spectrum, FundamentalMatrixData};
pub use symbol::{p0_symbol, poisson_bracket, q_symbol, Symbol, Var};
pub use weight::{Term, WeightFunction};
