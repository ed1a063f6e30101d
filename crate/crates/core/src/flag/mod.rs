//! Type-A flag manifolds: weights, the Weyl group, Weyl and Bott dimensions.

pub mod bwb;
pub mod roots;

pub use bwb::{
    bott_dim, curvature_index_of_weight, kx_minus_weight, monomial_count_su3_flag, serre_duality_check,
    signed_invariance_defect, signed_weyl_polynomial, weyl_dim, BottResult, KxMinus, SerreReport, SerreRow,
};
pub use roots::{reflection_matrix, RootSystem, Weight, WeylElement};
