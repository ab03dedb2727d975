use thiserror::Error;

use crate::timegrid::Date;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the analytics engine.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("dates out of order: {0} is after {1}")]
    DateOrder(Date, Date),
    #[error("invalid date: {0}")]
    InvalidDate(String),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("date {date} is before the curve reference date {reference}")]
    BeforeReference { date: Date, reference: Date },
    #[error("degenerate interval: zero year fraction between {0} and {1}")]
    DegenerateInterval(Date, Date),
    #[error("degenerate basis: discounting forward rate vanishes on [{0}, {1}]")]
    DegenerateBasis(Date, Date),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("zero denominator in recursion at {0}")]
    ZeroDenominator(Date),
    #[error("duplicate pillar date {0}")]
    DuplicatePillar(Date),
    #[error("quote crossing on {0}: implied discount factor is not positive")]
    QuoteCrossing(Date),
    #[error("cannot solve pillar {date}: {reason}")]
    UnsolvablePillar { date: Date, reason: String },
    #[error("invalid quote: {0}")]
    InvalidQuote(String),
    #[error("missing curve: {0}")]
    MissingCurve(String),
    #[error("invalid volatility spec: {0}")]
    InvalidVolSpec(String),
    #[error("time {0} is after {1}")]
    TimeOrder(f64, f64),
    #[error("infeasible segment {segment}: implied volatility {value} is negative")]
    InfeasibleSegment { segment: usize, value: f64 },
    #[error("zero volatility on segment {0}")]
    ZeroVolatility(usize),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("empty schedule")]
    EmptySchedule,
    #[error("zero annuity")]
    ZeroAnnuity,
    #[error("invalid credit spec: {0}")]
    InvalidCredit(String),
    #[error("singular hedge instrument {0}: own delta is zero")]
    SingularHedge(String),
    #[error("unmapped delta on curve {curve}: {mass}")]
    UnmappedDelta { curve: String, mass: f64 },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Serialization(String),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DateOrder(..) => "date_order",
            Error::InvalidDate(_) => "invalid_date",
            Error::InvalidSchedule(_) => "invalid_schedule",
            Error::InvalidCurve(_) => "invalid_curve",
            Error::BeforeReference { .. } => "before_reference",
            Error::DegenerateInterval(..) => "degenerate_interval",
            Error::DegenerateBasis(..) => "degenerate_basis",
            Error::GridMismatch(_) => "grid_mismatch",
            Error::ZeroDenominator(_) => "zero_denominator",
            Error::DuplicatePillar(_) => "duplicate_pillar",
            Error::QuoteCrossing(_) => "quote_crossing",
            Error::UnsolvablePillar { .. } => "unsolvable_pillar",
            Error::InvalidQuote(_) => "invalid_quote",
            Error::MissingCurve(_) => "missing_curve",
            Error::InvalidVolSpec(_) => "invalid_vol_spec",
            Error::TimeOrder(..) => "time_order",
            Error::InfeasibleSegment { .. } => "infeasible_segment",
            Error::ZeroVolatility(_) => "zero_volatility",
            Error::Domain(_) => "domain",
            Error::EmptySchedule => "empty_schedule",
            Error::ZeroAnnuity => "zero_annuity",
            Error::InvalidCredit(_) => "invalid_credit",
            Error::SingularHedge(_) => "singular_hedge",
            Error::UnmappedDelta { .. } => "unmapped_delta",
            Error::Parse { .. } => "parse",
            Error::Serialization(_) => "serialization",
        }
    }

    /// Whether the error comes from malformed or inconsistent input rather
    /// than a numerical failure.
    pub fn is_input(&self) -> bool {
        matches!(
            self,
            Error::DateOrder(..)
                | Error::InvalidDate(_)
                | Error::InvalidSchedule(_)
                | Error::InvalidCurve(_)
                | Error::BeforeReference { .. }
                | Error::GridMismatch(_)
                | Error::DuplicatePillar(_)
                | Error::InvalidQuote(_)
                | Error::MissingCurve(_)
                | Error::InvalidVolSpec(_)
                | Error::TimeOrder(..)
                | Error::EmptySchedule
                | Error::InvalidCredit(_)
                | Error::UnmappedDelta { .. }
                | Error::Parse { .. }
                | Error::Serialization(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
