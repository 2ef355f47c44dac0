pub mod explicit;
pub mod operators;

pub use explicit::{
    evaluate_disc, evolve_coefficients, propagator, reconstruct_torus, EvolvedCoefficients,
    TorusPropagator,
};
pub use operators::{
    b_matrix, derivative_matrix, lax_matrix, shift, shift_adjoint, toeplitz_from_symbol,
    toeplitz_matrix, LaxPairTorus,
};
