//! States, region classification and the eigenstructure of the
//! shallow water system with a passive bottom-elevation unknown.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Gravity constant plus the numeric tolerances shared by every solver stage.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GravityContext {
    /// Gravitational acceleration, length/time^2.
    pub g: f64,
    /// Absolute residual tolerance.
    pub tol_abs: f64,
    /// Relative tolerance (bracket widths, dedup scales).
    pub tol_rel: f64,
    /// Iteration cap for scalar root finding.
    pub max_iter: u32,
}

impl Default for GravityContext {
    fn default() -> Self {
        Self {
            g: 9.81,
            tol_abs: 1e-10,
            tol_rel: 1e-12,
            max_iter: 200,
        }
    }
}

impl GravityContext {
    pub fn with_gravity(g: f64) -> Self {
        Self {
            g,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g > 0.0) {
            return Err(Error::InvalidContext(format!("g = {} must be > 0", self.g)));
        }
        if !(self.tol_abs > 0.0) {
            return Err(Error::InvalidContext(format!(
                "tol_abs = {} must be > 0",
                self.tol_abs
            )));
        }
        if !(self.tol_rel > 0.0) {
            return Err(Error::InvalidContext(format!(
                "tol_rel = {} must be > 0",
                self.tol_rel
            )));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidContext("max_iter must be >= 1".into()));
        }
        Ok(())
    }

    /// Gravity wave speed sqrt(g h).
    pub fn celerity(&self, h: f64) -> f64 {
        (self.g * h).sqrt()
    }
}

/// A point (h, u, a): water depth, fluid velocity, bottom elevation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub h: f64,
    pub u: f64,
    pub a: f64,
}

impl State {
    pub fn new(h: f64, u: f64, a: f64) -> Self {
        Self { h, u, a }
    }

    /// Mass flux h*u, conserved across stationary jumps.
    pub fn discharge(&self) -> f64 {
        self.h * self.u
    }

    /// Image under the x -> -x, u -> -u symmetry.
    pub fn reflected(&self) -> Self {
        Self {
            h: self.h,
            u: -self.u,
            a: self.a,
        }
    }

    /// Dry states are rejected at every API boundary.
    pub fn check_wet(&self) -> Result<()> {
        if self.h > 0.0 && self.h.is_finite() {
            Ok(())
        } else {
            Err(Error::NonPositiveDepth(self.h))
        }
    }
}

/// Membership in the strict-hyperbolicity regions of the (h, u) plane,
/// the critical loci u = ±sqrt(g h), or the u = 0 axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionClass {
    A1,
    A2Plus,
    A2Minus,
    A3,
    CPlus,
    CMinus,
    UZeroAxis,
}

impl RegionClass {
    /// Region of the reflected state (h, -u).
    pub fn reflected(self) -> Self {
        match self {
            RegionClass::A1 => RegionClass::A3,
            RegionClass::A3 => RegionClass::A1,
            RegionClass::A2Plus => RegionClass::A2Minus,
            RegionClass::A2Minus => RegionClass::A2Plus,
            RegionClass::CPlus => RegionClass::CMinus,
            RegionClass::CMinus => RegionClass::CPlus,
            RegionClass::UZeroAxis => RegionClass::UZeroAxis,
        }
    }

    pub fn is_supercritical(self) -> bool {
        matches!(self, RegionClass::A1 | RegionClass::A3)
    }

    pub fn is_subcritical(self) -> bool {
        matches!(
            self,
            RegionClass::A2Plus | RegionClass::A2Minus | RegionClass::UZeroAxis
        )
    }

    pub fn is_critical(self) -> bool {
        matches!(self, RegionClass::CPlus | RegionClass::CMinus)
    }
}

/// Deterministic region classification with a tolerance band around the
/// critical loci, so that curve intersections landing near-critical
/// classify reproducibly.
pub fn classify(state: &State, ctx: &GravityContext) -> Result<RegionClass> {
    state.check_wet()?;
    let c = ctx.celerity(state.h);
    let band = ctx.tol_abs * c.max(1.0);
    if (state.u - c).abs() <= band {
        return Ok(RegionClass::CPlus);
    }
    if (state.u + c).abs() <= band {
        return Ok(RegionClass::CMinus);
    }
    if state.u.abs() <= ctx.tol_abs {
        return Ok(RegionClass::UZeroAxis);
    }
    if state.u > c {
        Ok(RegionClass::A1)
    } else if state.u < -c {
        Ok(RegionClass::A3)
    } else if state.u > 0.0 {
        Ok(RegionClass::A2Plus)
    } else {
        Ok(RegionClass::A2Minus)
    }
}

/// Eigenvalues and right eigenvectors of the quasilinear system at a state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigenstructure {
    /// (u - c, u + c, 0)
    pub lambdas: [f64; 3],
    pub r1: [f64; 3],
    pub r2: [f64; 3],
    pub r3: [f64; 3],
}

pub fn eigenstructure(state: &State, ctx: &GravityContext) -> Result<Eigenstructure> {
    state.check_wet()?;
    let (h, u, g) = (state.h, state.u, ctx.g);
    let c = ctx.celerity(h);
    Ok(Eigenstructure {
        lambdas: [u - c, u + c, 0.0],
        r1: [h, -c, 0.0],
        r2: [h, c, 0.0],
        r3: [g * h, -g * u, u * u - g * h],
    })
}
