use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the library.
///
/// Message text is stable: the CLI prints these verbatim and the test suite
/// matches on variants, not strings.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("truncation order mismatch: {left} vs {right}")]
    TruncMismatch { left: usize, right: usize },

    #[error("not a unit on the overlap: u^0 part must be a single nonzero monomial, got {got}")]
    NotAUnit { got: String },

    #[error("{op}: u^0 part must be {expected}, got {got}")]
    BadConstantTerm {
        op: &'static str,
        expected: &'static str,
        got: String,
    },

    #[error("u-degree {u_deg} exceeds truncation order {trunc}")]
    DegreeOutOfRange { u_deg: usize, trunc: usize },

    #[error("{0}")]
    DimensionMismatch(String),

    #[error("base parameter mismatch: k={left} vs k={right}")]
    KMismatch { left: i64, right: i64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("u^0 determinant is not a nonzero monomial: {det}")]
    NonMonomialDeterminant { det: String },

    #[error("entry ({row},{col}) is not {chart}-holomorphic: term u^{u_deg} z^{z_exp} violates the chart bound")]
    NotHolomorphic {
        chart: char,
        row: usize,
        col: usize,
        u_deg: usize,
        z_exp: i64,
    },

    #[error("{side} * {side}_inv differs from the identity at entry ({row},{col}), u^{u_deg} z^{z_exp}: got {got}, expected {expected}")]
    InverseMismatch {
        side: &'static str,
        row: usize,
        col: usize,
        u_deg: usize,
        z_exp: i64,
        got: String,
        expected: String,
    },

    #[error("u^0 part is not diagonal: entry ({row},{col}) has u^0 term {got}")]
    BaseNotDiagonal { row: usize, col: usize, got: String },

    #[error("diagonal exponents not sorted descending: j[{pos}]={lo} precedes j[{next}]={hi}")]
    UnsortedExponents {
        pos: usize,
        next: usize,
        lo: i64,
        hi: i64,
    },

    #[error("matrix is not upper-triangular: entry ({row},{col}) is nonzero")]
    NotUpperTriangular { row: usize, col: usize },

    #[error("truncation order {have} too small: the canonical window reaches u-degree {needed}")]
    TruncationTooSmall { needed: usize, have: usize },

    #[error("internal: residual not cleared at entry ({row},{col}), u^{u_deg} after {sweeps} sweeps")]
    ResidualNotCleared {
        row: usize,
        col: usize,
        u_deg: usize,
        sweeps: usize,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("io error on {path}: {msg}")]
    Io { path: String, msg: String },
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
