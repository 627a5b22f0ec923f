use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// The CLI maps these onto exit codes via [`Error::exit_code`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a supported prime power (need q = p^t <= 16)")]
    NotPrimePower(u32),
    #[error("division by zero in F_{0}")]
    DivisionByZero(u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("matrix is rank deficient: {0}")]
    RankDeficient(String),
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
    #[error("enumeration of {needed} items exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("size overflow: {0}")]
    SizeOverflow(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("output projection is not injective on the solution space ({rank} < {dim})")]
    NotInjective { rank: usize, dim: usize },
    #[error("assignment does not satisfy the instance ({satisfied}/{total} constraints)")]
    NotSatisfying { satisfied: usize, total: usize },
    #[error("intended codeword failed membership: {0}")]
    MembershipFailure(String),
    #[error("q = 2 is handled by the binary reduction; use target md2")]
    UseBinaryReduction,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code: 1 usage/parse, 2 budget, 3 internal invariant failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } | Error::TooLarge(_) | Error::SizeOverflow(_) => 2,
            Error::NotInjective { .. } | Error::MembershipFailure(_) => 3,
            _ => 1,
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// `q^k` as u128, saturating.
pub(crate) fn checked_pow(q: u32, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.saturating_mul(q as u128);
    }
    acc
}

/// Fails with `BudgetExceeded` when `q^k > budget`.
pub(crate) fn ensure_budget(q: u32, k: usize, budget: u128) -> Result<u128> {
    let needed = checked_pow(q, k);
    if needed > budget {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(needed)
    }
}
