use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The requested value would be wider than the configured bit budget.
    #[error("{what} needs {} bits but the budget allows {max_bits}", show_bits(*.needed))]
    BudgetExceeded {
        what: String,
        /// Saturates at `u64::MAX` for absurd requests.
        needed: u64,
        max_bits: u64,
    },
    #[error("residues belong to different moduli (F_{left} and F_{right})")]
    ModulusMismatch { left: u32, right: u32 },
    /// Input outside the domain of the operation (q = 0, p < 2, n below a floor...).
    #[error("{0}")]
    Domain(String),
    /// The procedure is not meaningful for this Fermat index.
    #[error("not applicable to F_{n}: {reason}")]
    NotApplicable { n: u32, reason: String },
    #[error("invalid bit budget: {0}")]
    InvalidBudget(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::InvalidBudget(_))
    }
}

fn show_bits(needed: u64) -> String {
    if needed == u64::MAX {
        "more than 2^63".to_string()
    } else {
        needed.to_string()
    }
}
