use crate::types::RegionClass;
use thiserror::Error;

/// Errors shared by every module of the solver.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("non-positive water depth h = {0}")]
    NonPositiveDepth(f64),

    #[error("degenerate jump: depths coincide, shock speed is ill-defined")]
    DegenerateJump,

    #[error("state is not on the requested Hugoniot curve (velocity residual {0:.3e})")]
    OffCurve(f64),

    #[error("depth h = {h} lies on the wrong side of the anchor for this branch")]
    RangeViolation { h: f64 },

    #[error("anchor in region {0:?} does not admit a zero-speed shock")]
    WrongRegion(RegionClass),

    #[error("wave curves do not intersect at positive depth")]
    NoIntersection,

    #[error("root finder did not converge within {0} iterations")]
    ConvergenceFailure(u32),

    #[error("stationary root problem is degenerate for u0 = 0; use the zero-velocity branch")]
    DegenerateVelocity,

    #[error("no stationary wave reaches bottom level a = {a}")]
    NoStationaryWave { a: f64 },

    #[error("the 1-wave curve does not reach the sonic line C+ at positive depth")]
    NoSonicPoint,

    #[error("solution has not been validated")]
    UnvalidatedSolution,

    #[error("vacuum-forming Riemann data: flat-bottom wave curves do not intersect")]
    VacuumData,

    #[error("invalid numeric context: {0}")]
    InvalidContext(String),

    #[error("invalid profile request: {0}")]
    InvalidProfile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
