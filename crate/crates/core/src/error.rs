use thiserror::Error;

use crate::grading::Tridegree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid residue order {q}: {reason}")]
    InvalidResidueOrder { q: u64, reason: &'static str },

    #[error("empty window")]
    EmptyWindow,

    #[error(
        "cobar block at tridegree {tridegree} needs {needed} bytes, over the budget of {budget} bytes"
    )]
    BudgetExceeded {
        tridegree: Tridegree,
        needed: u64,
        budget: u64,
    },

    #[error("the rho-Bockstein spectral sequence only runs for q = 3 mod 4 (q = {q} is split)")]
    SplitCase { q: u32 },

    #[error("page bound r_max = {given} is too small for this window (need at least {required})")]
    PageBound { required: u32, given: u32 },

    #[error("algebraic K-groups are only identified in degrees m >= 0 (got m = {0})")]
    NegativeKDegree(i64),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
