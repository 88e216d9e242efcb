//! Compactness diagnostics: shifted difference fields, the interaction
//! identity, the `Γ` lower bound and translation moduli.

mod fields;
mod fit;
mod gamma;
mod identity;
mod modulus;

pub use fields::{DifferenceFields, InteractionContext, InteractionState, Quantity, Shift};
pub use fit::{boundedness_statistic, fit_exponent, ExponentFit, MIN_FIT_SAMPLES};
pub use gamma::{
    check_gamma, gamma_lower_bound, sample_gamma_bound, FrozenSplit, GammaCheck, GammaMargin,
    GAMMA_TOLERANCE,
};
pub use identity::{interaction_identity, IdentityReport};
pub use modulus::{
    default_spatial_offsets, default_temporal_offsets, discrete_spatial_sum, geometric_offsets,
    reconstruction_distance,
    spatial_modulus, temporal_modulus, Axis, ModulusCurve, ModulusSample,
};
