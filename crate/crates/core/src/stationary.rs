//! Stationary (zero-speed, linearly degenerate) waves across a bottom step:
//! the jump relations conserve the discharge h*u and the hydraulic head
//! u^2/2 + g(h + a), which reduces to a scalar equation phi(h) = 0 in the
//! downstream depth.

use crate::error::{Error, Result};
use crate::roots::solve_bracketed;
use crate::types::{classify, GravityContext, RegionClass, State};

/// Residual of the stationary jump relation at downstream depth `h`,
/// for upstream state `anchor` and downstream bottom level `a`.
pub fn phi(h: f64, anchor: &State, a: f64, ctx: &GravityContext) -> Result<f64> {
    anchor.check_wet()?;
    if !(h > 0.0) {
        return Err(Error::NonPositiveDepth(h));
    }
    let (h0, u0, a0) = (anchor.h, anchor.u, anchor.a);
    Ok((a - a0) + u0 * u0 / (2.0 * ctx.g) * (h0 * h0 / (h * h) - 1.0) + h - h0)
}

/// d(phi)/dh, used for Newton polishing of bracketed roots.
pub fn phi_prime(h: f64, anchor: &State, ctx: &GravityContext) -> Result<f64> {
    anchor.check_wet()?;
    if !(h > 0.0) {
        return Err(Error::NonPositiveDepth(h));
    }
    let (h0, u0) = (anchor.h, anchor.u);
    Ok(1.0 - u0 * u0 * h0 * h0 / (ctx.g * h * h * h))
}

/// The minimizer of phi and the largest bottom level any stationary wave
/// from `anchor` can reach (hydraulic choking threshold).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalData {
    /// Depth at which phi attains its minimum; the flow is critical there.
    pub h_min: f64,
    /// Roots of phi exist iff the downstream level a <= a_threshold.
    pub a_threshold: f64,
}

pub fn critical_data(anchor: &State, ctx: &GravityContext) -> Result<CriticalData> {
    anchor.check_wet()?;
    let (h0, u0, a0) = (anchor.h, anchor.u, anchor.a);
    let h_min = (u0 * u0 * h0 * h0 / ctx.g).cbrt();
    let t = (u0 * u0 / (ctx.g * h0)).cbrt();
    let a_threshold = a0 + 0.5 * h0 * (t - 1.0) * (t - 1.0) * (t + 2.0);
    Ok(CriticalData { h_min, a_threshold })
}

/// Root configuration of phi(h) = 0 for a moving anchor (u0 != 0).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StationaryRoots {
    /// Distinct supercritical (h < h_min) and subcritical (h > h_min) roots.
    Two { supercritical: f64, subcritical: f64 },
    /// Coalesced double root at h_min (a at the choking threshold).
    Double(f64),
    /// No stationary wave reaches level a.
    None,
}

fn newton_polish(mut h: f64, anchor: &State, a: f64, ctx: &GravityContext) -> f64 {
    for _ in 0..4 {
        let f = match phi(h, anchor, a, ctx) {
            Ok(v) => v,
            Err(_) => return h,
        };
        let fp = phi_prime(h, anchor, ctx).unwrap_or(0.0);
        if fp == 0.0 {
            return h;
        }
        let next = h - f / fp;
        if !(next > 0.0) || !next.is_finite() {
            return h;
        }
        let done = (next - h).abs() <= ctx.tol_rel * h.max(1.0);
        h = next;
        if done {
            break;
        }
    }
    h
}

/// Solve phi(h) = 0 for a moving anchor. Rejects anchors on the u = 0 axis
/// (the problem degenerates; use the zero-velocity branch of [`sw_map`]).
pub fn stationary_roots(anchor: &State, a: f64, ctx: &GravityContext) -> Result<StationaryRoots> {
    anchor.check_wet()?;
    if anchor.u.abs() <= ctx.tol_abs {
        return Err(Error::DegenerateVelocity);
    }
    let crit = critical_data(anchor, ctx)?;
    let gap = crit.a_threshold - a;
    let scale = anchor.h.max(a.abs()).max(1.0);
    if gap < -ctx.tol_abs * scale {
        return Ok(StationaryRoots::None);
    }
    if gap.abs() <= ctx.tol_abs * scale {
        return Ok(StationaryRoots::Double(crit.h_min));
    }

    let eval = |h: f64| phi(h, anchor, a, ctx).unwrap_or(f64::NAN);
    // phi -> +inf at both h -> 0+ and h -> inf, and is negative at h_min
    let mut lo = crit.h_min;
    while eval(lo) <= 0.0 {
        lo *= 0.5;
        if lo < 1e-280 {
            return Err(Error::ConvergenceFailure(ctx.max_iter));
        }
    }
    let supercritical = newton_polish(
        solve_bracketed(eval, lo, crit.h_min, ctx)?,
        anchor,
        a,
        ctx,
    );

    let mut hi = crit.h_min.max(anchor.h) * 2.0;
    while eval(hi) <= 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::ConvergenceFailure(ctx.max_iter));
        }
    }
    let subcritical = newton_polish(
        solve_bracketed(eval, crit.h_min, hi, ctx)?,
        anchor,
        a,
        ctx,
    );
    Ok(StationaryRoots::Two {
        supercritical,
        subcritical,
    })
}

/// Image of a state under the stationary-wave map to bottom level `a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SwImage {
    Single(State),
    /// Anchors on the critical loci admit both downstream regimes.
    Double { supercritical: State, subcritical: State },
}

impl SwImage {
    /// The unique image, or an error for double-valued critical anchors.
    pub fn single(self) -> Result<State> {
        match self {
            SwImage::Single(s) => Ok(s),
            SwImage::Double { .. } => Err(Error::DegenerateJump),
        }
    }

    pub fn states(self) -> Vec<State> {
        match self {
            SwImage::Single(s) => vec![s],
            SwImage::Double {
                supercritical,
                subcritical,
            } => vec![supercritical, subcritical],
        }
    }
}

fn downstream(anchor: &State, h: f64, a: f64) -> State {
    State::new(h, anchor.discharge() / h, a)
}

/// Carry `anchor` across a stationary wave to bottom level `a`. The branch
/// is fixed by the monotonicity criterion: the flow regime (sub- or
/// supercritical) is preserved across the jump, so supercritical anchors
/// select the supercritical root and subcritical anchors the subcritical
/// one. Anchors exactly on C+- are double-valued.
pub fn sw_map(anchor: &State, a: f64, ctx: &GravityContext) -> Result<SwImage> {
    anchor.check_wet()?;
    if a == anchor.a {
        return Ok(SwImage::Single(*anchor));
    }
    let region = classify(anchor, ctx)?;
    if region == RegionClass::UZeroAxis {
        let h = anchor.h + anchor.a - a;
        if !(h > 0.0) {
            return Err(Error::NoStationaryWave { a });
        }
        return Ok(SwImage::Single(State::new(h, 0.0, a)));
    }
    match stationary_roots(anchor, a, ctx)? {
        StationaryRoots::None => Err(Error::NoStationaryWave { a }),
        StationaryRoots::Double(h) => Ok(SwImage::Single(downstream(anchor, h, a))),
        StationaryRoots::Two {
            supercritical,
            subcritical,
        } => match region {
            RegionClass::A1 | RegionClass::A3 => {
                Ok(SwImage::Single(downstream(anchor, supercritical, a)))
            }
            RegionClass::A2Plus | RegionClass::A2Minus => {
                Ok(SwImage::Single(downstream(anchor, subcritical, a)))
            }
            RegionClass::CPlus | RegionClass::CMinus => Ok(SwImage::Double {
                supercritical: downstream(anchor, supercritical, a),
                subcritical: downstream(anchor, subcritical, a),
            }),
            RegionClass::UZeroAxis => unreachable!("handled above"),
        },
    }
}

/// Bottom level reached by the stationary curve through `anchor` when the
/// downstream depth is `h` (the inverse view of [`sw_map`]).
pub fn stationary_curve_a(anchor: &State, h: f64, ctx: &GravityContext) -> Result<f64> {
    anchor.check_wet()?;
    if !(h > 0.0) {
        return Err(Error::NonPositiveDepth(h));
    }
    let u = anchor.discharge() / h;
    Ok(anchor.a + (anchor.u * anchor.u - u * u) / (2.0 * ctx.g) + anchor.h - h)
}

/// da/dh along the stationary curve: u^2/(g h) - 1. Negative in the
/// subcritical regime (depth drops as the bottom rises), positive in the
/// supercritical regime.
pub fn stationary_curve_slope(anchor: &State, h: f64, ctx: &GravityContext) -> Result<f64> {
    anchor.check_wet()?;
    if !(h > 0.0) {
        return Err(Error::NonPositiveDepth(h));
    }
    let u = anchor.discharge() / h;
    Ok(u * u / (ctx.g * h) - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx() -> GravityContext {
        GravityContext::default()
    }

    const H_MIN: f64 = 0.4671363512679737; // anchor (1, 1, 0), g = 9.81
    const A_THRESHOLD: f64 = 0.3502638726902923;

    #[test]
    fn critical_data_example() {
        let c = ctx();
        let d = critical_data(&State::new(1.0, 1.0, 0.0), &c).unwrap();
        assert!((d.h_min - H_MIN).abs() < 1e-15);
        assert!((d.a_threshold - A_THRESHOLD).abs() < 1e-15);
        // phi at the minimizer equals a - a_threshold exactly
        let p = phi(d.h_min, &State::new(1.0, 1.0, 0.0), 0.2, &c).unwrap();
        assert!((p - (0.2 - A_THRESHOLD)).abs() < 1e-14);
    }

    #[test]
    fn roots_examples() {
        let c = ctx();
        let anchor = State::new(1.0, 1.0, 0.0);
        match stationary_roots(&anchor, 0.0, &c).unwrap() {
            StationaryRoots::Two {
                supercritical,
                subcritical,
            } => {
                assert!((supercritical - 0.2526798072173565).abs() < 1e-12);
                assert!((subcritical - 1.0).abs() < 1e-12);
            }
            other => panic!("expected two roots, got {other:?}"),
        }
        match stationary_roots(&anchor, 0.2, &c).unwrap() {
            StationaryRoots::Two {
                supercritical,
                subcritical,
            } => {
                assert!((supercritical - 0.3057488073721073).abs() < 1e-12);
                assert!((subcritical - 0.763543947511655).abs() < 1e-12);
            }
            other => panic!("expected two roots, got {other:?}"),
        }
        assert_eq!(
            stationary_roots(&anchor, 0.5, &c).unwrap(),
            StationaryRoots::None
        );
        assert!(matches!(
            stationary_roots(&anchor, A_THRESHOLD, &c).unwrap(),
            StationaryRoots::Double(_)
        ));
        assert_eq!(
            stationary_roots(&State::new(1.0, 0.0, 0.0), 0.2, &c),
            Err(Error::DegenerateVelocity)
        );
    }

    #[test]
    fn sw_map_examples() {
        let c = ctx();
        // subcritical anchor picks the subcritical root
        let img = sw_map(&State::new(1.0, 1.0, 0.0), 0.2, &c)
            .unwrap()
            .single()
            .unwrap();
        assert!((img.h - 0.763543947511655).abs() < 1e-12);
        assert!((img.u - 1.0 / 0.763543947511655).abs() < 1e-12);
        assert_eq!(img.a, 0.2);

        // identity at equal bottom level
        let s = State::new(1.3, -0.7, 0.1);
        assert_eq!(sw_map(&s, 0.1, &c).unwrap().single().unwrap(), s);

        // zero-velocity branch: lake at rest
        let lake = sw_map(&State::new(1.0, 0.0, 0.0), 0.3, &c)
            .unwrap()
            .single()
            .unwrap();
        assert_eq!(lake, State::new(0.7, 0.0, 0.3));
        assert_eq!(
            sw_map(&State::new(1.0, 0.0, 0.0), 1.5, &c),
            Err(Error::NoStationaryWave { a: 1.5 })
        );

        // choking: no image past the threshold
        assert_eq!(
            sw_map(&State::new(1.0, 1.0, 0.0), 0.5, &c),
            Err(Error::NoStationaryWave { a: 0.5 })
        );
    }

    #[test]
    fn sw_map_supercritical_branch() {
        let c = ctx();
        // supercritical anchor picks the supercritical root
        let anchor = State::new(0.5, 5.0, 0.0);
        let img = sw_map(&anchor, 0.1, &c).unwrap().single().unwrap();
        let crit = critical_data(&anchor, &c).unwrap();
        assert!(img.h < crit.h_min);
        // conservation laws hold across the jump
        assert!((img.discharge() - anchor.discharge()).abs() < 1e-10);
        let head = |s: &State| 0.5 * s.u * s.u + c.g * (s.h + s.a);
        assert!((head(&img) - head(&anchor)).abs() < 1e-8);
    }

    #[test]
    fn sw_map_critical_anchor_is_double_valued() {
        let c = ctx();
        let h0 = 1.0;
        let anchor = State::new(h0, c.celerity(h0), 0.3);
        match sw_map(&anchor, 0.0, &c).unwrap() {
            SwImage::Double {
                supercritical,
                subcritical,
            } => {
                assert!(supercritical.h < subcritical.h);
                assert!(classify(&supercritical, &c).unwrap().is_supercritical());
                assert!(classify(&subcritical, &c).unwrap().is_subcritical());
            }
            other => panic!("expected double image, got {other:?}"),
        }
    }

    #[test]
    fn curve_slope_signs() {
        let c = ctx();
        let anchor = State::new(1.0, 1.0, 0.0);
        // subcritical: a rises as h falls
        assert!(stationary_curve_slope(&anchor, 1.0, &c).unwrap() < 0.0);
        // supercritical side of the same curve
        assert!(stationary_curve_slope(&anchor, 0.2, &c).unwrap() > 0.0);
        // slope vanishes at the critical depth
        let d = critical_data(&anchor, &c).unwrap();
        assert!(stationary_curve_slope(&anchor, d.h_min, &c).unwrap().abs() < 1e-12);
    }

    proptest! {
        // sw_map conserves discharge and head and inverts itself
        #[test]
        fn sw_map_round_trip(h0 in 0.1f64..10.0, u0 in 0.05f64..8.0, da in -0.5f64..0.5) {
            let c = ctx();
            let anchor = State::new(h0, u0, 0.0);
            prop_assume!(classify(&anchor, &c).unwrap() != RegionClass::CPlus);
            if let Ok(img) = sw_map(&anchor, da, &c) {
                let img = img.single().unwrap();
                prop_assert!((img.discharge() - anchor.discharge()).abs() <= 1e-9 * (1.0 + anchor.discharge().abs()));
                let head = |s: &State| 0.5 * s.u * s.u + c.g * (s.h + s.a);
                prop_assert!((head(&img) - head(&anchor)).abs() <= 1e-7 * (1.0 + head(&anchor).abs()));
                // regime preservation (monotonicity criterion)
                let r0 = classify(&anchor, &c).unwrap();
                let r1 = classify(&img, &c).unwrap();
                if !r1.is_critical() {
                    prop_assert_eq!(r0.is_supercritical(), r1.is_supercritical());
                }
                // map back
                if !r1.is_critical() {
                    let back = sw_map(&img, 0.0, &c).unwrap().single().unwrap();
                    prop_assert!((back.h - h0).abs() <= 1e-7 * h0.max(1.0));
                    prop_assert!((back.u - u0).abs() <= 1e-7 * u0.abs().max(1.0));
                }
            }
        }

        // stationary_curve_a inverts the root problem
        #[test]
        fn curve_matches_roots(h0 in 0.1f64..10.0, u0 in 0.05f64..8.0, hr in 0.05f64..12.0) {
            let c = ctx();
            let anchor = State::new(h0, u0, 0.0);
            let a = stationary_curve_a(&anchor, hr, &c).unwrap();
            let p = phi(hr, &anchor, a, &c).unwrap();
            prop_assert!(p.abs() <= 1e-9 * (1.0 + a.abs() + hr));
        }

        // reflection symmetry: the map commutes with u -> -u
        #[test]
        fn sw_map_reflection(h0 in 0.1f64..10.0, u0 in 0.05f64..8.0, da in -0.5f64..0.5) {
            let c = ctx();
            let anchor = State::new(h0, u0, 0.0);
            prop_assume!(!classify(&anchor, &c).unwrap().is_critical());
            let fwd = sw_map(&anchor, da, &c);
            let refl = sw_map(&anchor.reflected(), da, &c);
            match (fwd, refl) {
                (Ok(x), Ok(y)) => {
                    let (x, y) = (x.single().unwrap(), y.single().unwrap());
                    prop_assert!((x.h - y.h).abs() <= 1e-10 * (1.0 + x.h));
                    prop_assert!((x.u + y.u).abs() <= 1e-10 * (1.0 + x.u.abs()));
                }
                (Err(_), Err(_)) => {}
                other => prop_assert!(false, "asymmetric outcome: {:?}", other),
            }
        }
    }
}
