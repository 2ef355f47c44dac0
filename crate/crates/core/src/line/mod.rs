pub mod explicit;
pub mod field;
pub mod operators;
pub mod resolvent;

pub use explicit::{
    cauchy_riemann_residual, evaluate_uhp, evaluate_uhp_with, reconstruct_line, reconstruct_line_with, uhp_grid_scan,
    LineEvaluation, LineEvaluator, LineSolveOptions, ReconstructOptions, ScanRect, ScanRow, DEFAULT_EPS,
};
pub use field::{LineField, LineGrid, LineProfile};
pub use operators::{
    b_line, g_matrix, iplus, iplus_extrapolated, lax_line, weighted_hermitian_defect, weighted_inner, GOperator,
    IplusStencil, LineB, LineLax, LineToeplitz,
};
pub use resolvent::{FactorizedResolvent, LineResolventSystem, ResolventSolution};
