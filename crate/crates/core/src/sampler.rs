//! Evaluation of a validated solution at any self-similarity coordinate
//! xi = x/t, and spatial profile extraction.

use crate::error::{Error, Result};
use crate::parallel;
use crate::roots::linear_grid;
use crate::solver::{Solution, Wave, WaveKind};
use crate::types::{GravityContext, State};
use crate::wave_curves::Family;
use serde::{Deserialize, Serialize};

/// Which one-sided limit to report at the stacked zero-speed interface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InterfaceSide {
    Left,
    Right,
}

/// A spatial profile request: n evenly spaced points over [x_min, x_max]
/// at time t, mapped through xi = x/t.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRequest {
    pub x_min: f64,
    pub x_max: f64,
    pub t: f64,
    pub n: usize,
    pub side_at_zero: InterfaceSide,
}

impl ProfileRequest {
    pub fn validate(&self) -> Result<()> {
        if !(self.x_min < self.x_max) {
            return Err(Error::InvalidProfile(format!(
                "x_min = {} must be < x_max = {}",
                self.x_min, self.x_max
            )));
        }
        if !(self.t > 0.0) {
            return Err(Error::InvalidProfile(format!("t = {} must be > 0", self.t)));
        }
        if self.n < 2 {
            return Err(Error::InvalidProfile(format!("n = {} must be >= 2", self.n)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub x: f64,
    pub h: f64,
    pub u: f64,
    pub a: f64,
}

/// State inside a centered fan at coordinate xi, anchored at the fan's
/// left state (Riemann-invariant reconstruction).
fn fan_state(wave: &Wave, xi: f64, ctx: &GravityContext) -> State {
    let anchor = wave.left;
    let ca = ctx.celerity(anchor.h);
    let (c, u) = match wave.family {
        Family::One => {
            let c = (anchor.u + 2.0 * ca - xi) / 3.0;
            (c, xi + c)
        }
        Family::Two => {
            let c = (xi - anchor.u + 2.0 * ca) / 3.0;
            (c, xi - c)
        }
        Family::Three => unreachable!("stationary waves have no fan interior"),
    };
    State::new(c * c / ctx.g, u, anchor.a)
}

/// Evaluate the solution at xi = x/t. Shocks report the right limit at
/// their own speed; everything stacked at xi = 0 collapses to one interface
/// whose one-sided limit is chosen by `side`.
pub fn sample(
    solution: &Solution,
    xi: f64,
    side: InterfaceSide,
    ctx: &GravityContext,
) -> Result<State> {
    if !solution.validated {
        return Err(Error::UnvalidatedSolution);
    }
    let mut current = solution.left;
    for wave in &solution.waves {
        match wave.kind {
            WaveKind::Shock => {
                let s = wave.speed_lo;
                if xi < s || (xi == s && s == 0.0 && side == InterfaceSide::Left) {
                    return Ok(current);
                }
                current = wave.right;
            }
            WaveKind::Stationary => {
                if xi < 0.0 || (xi == 0.0 && side == InterfaceSide::Left) {
                    return Ok(current);
                }
                current = wave.right;
            }
            WaveKind::Rarefaction => {
                if xi < wave.speed_lo {
                    return Ok(current);
                }
                if xi <= wave.speed_hi {
                    if xi == 0.0 && wave.speed_lo == 0.0 && side == InterfaceSide::Left {
                        return Ok(current);
                    }
                    return Ok(fan_state(wave, xi, ctx));
                }
                current = wave.right;
            }
        }
    }
    Ok(current)
}

/// The ordered list of states visible at the xi = 0 interface: the left
/// limit, every interior state between stacked zero-speed waves, and the
/// right limit. A single state when no wave sits at xi = 0.
pub fn interface_states(solution: &Solution, ctx: &GravityContext) -> Result<Vec<State>> {
    let left = sample(solution, 0.0, InterfaceSide::Left, ctx)?;
    let mut states = vec![left];
    for wave in &solution.waves {
        let zero = wave.speed_lo.abs() <= 1e-12 && wave.speed_hi.abs() <= 1e-12;
        if zero {
            states.push(wave.right);
        }
    }
    Ok(states)
}

/// Sample a spatial profile; rows are computed in parallel (feature-gated)
/// with deterministic order.
pub fn sample_profile(
    solution: &Solution,
    req: &ProfileRequest,
    ctx: &GravityContext,
) -> Result<Vec<ProfileRow>> {
    req.validate()?;
    if !solution.validated {
        return Err(Error::UnvalidatedSolution);
    }
    let xs = linear_grid(req.x_min, req.x_max, req.n);
    let rows = parallel::map_slice(&xs, |&x| {
        let st = sample(solution, x / req.t, req.side_at_zero, ctx)
            .expect("solution validated above");
        ProfileRow {
            x,
            h: st.h,
            u: st.u,
            a: st.a,
        }
    });
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve, RiemannProblem, SolverOptions};

    fn ctx() -> GravityContext {
        GravityContext::default()
    }

    fn dam_break() -> Solution {
        let p = RiemannProblem::new(State::new(2.0, 0.0, 0.0), State::new(1.0, 0.0, 0.0));
        solve(&p, &ctx(), &SolverOptions::default())
            .unwrap()
            .solutions
            .remove(0)
    }

    #[test]
    fn rejects_unvalidated() {
        let mut sol = dam_break();
        sol.validated = false;
        assert_eq!(
            sample(&sol, 0.0, InterfaceSide::Right, &ctx()),
            Err(Error::UnvalidatedSolution)
        );
    }

    #[test]
    fn dam_break_midpoint_and_edges() {
        let c = ctx();
        let sol = dam_break();
        let m = sample(&sol, 0.0, InterfaceSide::Right, &c).unwrap();
        assert!((m.h - 1.453840892374573).abs() < 1e-9);
        assert!((m.u - 1.3058337531817277).abs() < 1e-9);

        // fan boundary continuity: xi = lambda1(U_L) gives exactly U_L
        let lam_l = -c.celerity(2.0);
        let s = sample(&sol, lam_l, InterfaceSide::Right, &c).unwrap();
        assert!((s.h - 2.0).abs() < 1e-12 && s.u.abs() < 1e-12);

        // beyond the shock: the right datum
        let r = sample(&sol, 5.0, InterfaceSide::Right, &c).unwrap();
        assert_eq!(r, State::new(1.0, 0.0, 0.0));

        // ahead of the fan: the left datum
        let l = sample(&sol, -10.0, InterfaceSide::Right, &c).unwrap();
        assert_eq!(l, State::new(2.0, 0.0, 0.0));
    }

    #[test]
    fn fan_interior_is_on_the_characteristic() {
        let c = ctx();
        let sol = dam_break();
        let xi = -3.0; // inside the 1-fan
        let s = sample(&sol, xi, InterfaceSide::Right, &c).unwrap();
        assert!((s.u - c.celerity(s.h) - xi).abs() < 1e-12);
    }

    #[test]
    fn profile_self_similar_scaling() {
        let c = ctx();
        let sol = dam_break();
        let mk = |scale: f64| ProfileRequest {
            x_min: -10.0 * scale,
            x_max: 10.0 * scale,
            t: scale,
            n: 257,
            side_at_zero: InterfaceSide::Right,
        };
        let p1 = sample_profile(&sol, &mk(1.0), &c).unwrap();
        let p2 = sample_profile(&sol, &mk(2.0), &c).unwrap();
        for (a, b) in p1.iter().zip(&p2) {
            assert_eq!(a.h, b.h);
            assert_eq!(a.u, b.u);
            assert_eq!(a.a, b.a);
        }
    }

    #[test]
    fn interface_limits_over_a_step() {
        let c = ctx();
        let p = RiemannProblem::new(State::new(1.0, 0.0, 0.0), State::new(0.8, 0.0, 0.2));
        let report = solve(&p, &c, &SolverOptions::default()).unwrap();
        let sol = report
            .solutions
            .iter()
            .find(|s| s.waves.len() == 1)
            .expect("lake at rest solution");
        let l = sample(sol, 0.0, InterfaceSide::Left, &c).unwrap();
        let r = sample(sol, 0.0, InterfaceSide::Right, &c).unwrap();
        assert_eq!(l.a, 0.0);
        assert_eq!(r.a, 0.2);
        let states = interface_states(sol, &c).unwrap();
        assert_eq!(states.len(), 2);
    }

    #[test]
    fn profile_request_validation() {
        let bad = ProfileRequest {
            x_min: 1.0,
            x_max: -1.0,
            t: 1.0,
            n: 10,
            side_at_zero: InterfaceSide::Right,
        };
        assert!(bad.validate().is_err());
        let bad_t = ProfileRequest { x_min: -1.0, x_max: 1.0, t: 0.0, n: 10, side_at_zero: InterfaceSide::Right };
        assert!(bad_t.validate().is_err());
        let bad_n = ProfileRequest { x_min: -1.0, x_max: 1.0, t: 1.0, n: 1, side_at_zero: InterfaceSide::Right };
        assert!(bad_n.validate().is_err());
    }
}
