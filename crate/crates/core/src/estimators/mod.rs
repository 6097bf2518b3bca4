//! Desk-scale ranking fitters and a support vector regression dual solver.

mod erm;
mod svr;

pub use erm::{
    erm_fit, regularized_norm_bound, task_objective, FitConfig, FitMethod, LinearFit, NormBound,
    RankingTask,
};
pub(crate) use erm::{generic_directions, geometric_ladder, tie_tolerance, LADDER_FLOOR};
pub use svr::{
    gram_matrix, svr_dual_solve, svr_dual_solve_gram, svr_swap_check, Kernel, SvrConfig,
    SvrSolution, SwapCheck, MAX_SVR_N,
};
