//! Chern-root calculus: Todd classes, the conjugate-bundle identity and
//! Riemann–Roch integrals over small cohomology rings.

pub mod formal;
pub mod ring;
pub mod rr;

pub use formal::{bernoulli, exp_class, q, todd_coefficients, todd_line, todd_sum, verify_conjugate_identity, FormalClass, Q};
pub use ring::{parse_polynomial, CohRing};
pub use rr::{
    flag_su3_line, flag_su3_tangent_roots, projective_tangent_roots, rr_integral, twist_check, KPolynomial, TwistCheck,
};
