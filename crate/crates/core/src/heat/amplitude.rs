//! Decay of the leading amplitude along `Σ` under the first transport
//! equation `∂_t a + (p₁ + ½ tr̃ F) a = 0`.

use super::model::QuadraticModel;
use crate::error::Result;
use crate::geometry::spectrum::subprincipal_spectrum;

/// Rates `r` with `a(t) ∼ e^{−rt}` on `(0,q)`-forms, ascending. The minimum
/// is 0 exactly when `q = n₋`.
pub fn amplitude_decay_rates(model: &QuadraticModel, q: usize) -> Result<Vec<f64>> {
    subprincipal_spectrum(&model.mu, q)
}
