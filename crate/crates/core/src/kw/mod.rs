//! Karchmer–Wigderson matrices, exact protocol search and rank bounds.

pub mod analysis;
pub mod matrix;
pub mod protocol;
pub mod rank;

pub use analysis::{
    composition_reduction, derivative_matrix, derivative_submatrix_check, phi, psi, restricted_matrix, unate_criterion,
    CompositionReport, SubmatrixReport, UnateVerdict,
};
pub use matrix::{classic_kw_matrix, kwu_matrix, kwu_matrix_from_primes, monotone_matrix, AnswerLabel, KwMatrix};
pub use protocol::{monorect, monorect_exact, ProtocolResult, ProtocolTree, SearchConfig, Side, DEFAULT_LABEL_LIMIT};
pub use rank::{named_matrix, rank_exact, ExactMatrix, NamedMatrix};
