use thiserror::Error;

use crate::exactalg::{Int, Symbol};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("symbol `{0}` has no value at the evaluation point")]
    MissingSymbol(Symbol),

    #[error("{vector:?} is not a {a}-parking function")]
    NotParking { vector: Vec<u32>, a: u32 },

    #[error("work budget exceeded: {required} needed, budget is {budget}")]
    BudgetExceeded { required: Int, budget: u64 },

    #[error("scaled moments are undefined: variance is zero")]
    ZeroVariance,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
