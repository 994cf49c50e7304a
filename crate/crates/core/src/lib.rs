//! Exact Riemann solver for the one-dimensional shallow water equations
//! with piecewise-constant bottom topography.
//!
//! The bottom step at x = 0 turns the system into a non-strictly hyperbolic
//! 3x3 system with a linearly degenerate stationary family. This crate
//! provides the wave-curve machinery, the stationary (zero-speed) jump
//! relations, a solver that enumerates every catalogued solution structure,
//! and a sampler for self-similar profiles. Batch entry points are
//! data-parallel behind the `parallel` feature (enabled by default).

pub mod error;
pub mod parallel;
pub mod roots;
pub mod sampler;
pub mod solver;
pub mod stationary;
pub mod types;
pub mod wave_curves;

pub use error::{Error, Result};
pub use sampler::{sample, sample_profile, InterfaceSide, ProfileRequest, ProfileRow};
pub use solver::{
    solve, solve_many, solve_many_seq, validate, Diagnostics, GeneratorOutcome, ReasonCode,
    RiemannProblem, SolveReport, Solution, SolverOptions, StructureTag, ValidationReport, Wave,
    WaveKind,
};
pub use stationary::{critical_data, stationary_roots, sw_map, StationaryRoots, SwImage};
pub use types::{classify, eigenstructure, GravityContext, RegionClass, State};
pub use wave_curves::{CurveSpec, Direction, Family};
