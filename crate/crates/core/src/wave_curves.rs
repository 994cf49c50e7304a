//! Forward and backward shock/rarefaction wave curves in the (h, u) plane,
//! shock speeds, Lax admissibility, zero-speed shock points, and the
//! intersection of a forward 1-curve with a backward 2-curve.

use crate::error::{Error, Result};
use crate::roots::solve_bracketed;
use crate::types::{classify, GravityContext, RegionClass, State};
use serde::{Deserialize, Serialize};

/// Characteristic family of an elementary wave. `Three` is the linearly
/// degenerate stationary family; `One`/`Two` are genuinely nonlinear.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3")]
    Three,
}

impl Family {
    /// Sign carried by the family-dependent terms: -1 for family 1, +1 for 2.
    fn sign(self) -> Result<f64> {
        match self {
            Family::One => Ok(-1.0),
            Family::Two => Ok(1.0),
            Family::Three => Err(Error::WrongRegion(RegionClass::UZeroAxis)),
        }
    }

    pub fn reflected(self) -> Self {
        match self {
            Family::One => Family::Two,
            Family::Two => Family::One,
            Family::Three => Family::Three,
        }
    }
}

/// Orientation of a wave curve: `Forward` anchors the left state,
/// `Backward` anchors the right state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

/// A parameterized wave curve h -> u(h) of family 1 or 2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveSpec {
    pub family: Family,
    pub direction: Direction,
    pub anchor: State,
}

impl CurveSpec {
    pub fn forward(family: Family, anchor: State) -> Self {
        Self {
            family,
            direction: Direction::Forward,
            anchor,
        }
    }

    pub fn backward(family: Family, anchor: State) -> Self {
        Self {
            family,
            direction: Direction::Backward,
            anchor,
        }
    }
}

/// Velocity on the Hugoniot locus of `family` through `anchor` at depth `h`.
pub fn hugoniot_u(family: Family, h: f64, anchor: &State, ctx: &GravityContext) -> Result<f64> {
    anchor.check_wet()?;
    if !(h > 0.0) {
        return Err(Error::NonPositiveDepth(h));
    }
    let s = family.sign()?;
    let (h0, u0) = (anchor.h, anchor.u);
    Ok(u0 + s * (ctx.g / 2.0).sqrt() * (h - h0) * (1.0 / h + 1.0 / h0).sqrt())
}

fn hugoniot_residual(family: Family, anchor: &State, other: &State, ctx: &GravityContext) -> Result<f64> {
    let u = hugoniot_u(family, other.h, anchor, ctx)?;
    Ok(other.u - u)
}

/// Speed of the discontinuity joining `anchor` and `other` on the family's
/// Hugoniot locus. The closed form is cross-checked against the divided
/// difference of the mass flux.
pub fn shock_speed(family: Family, anchor: &State, other: &State, ctx: &GravityContext) -> Result<f64> {
    anchor.check_wet()?;
    other.check_wet()?;
    let s = family.sign()?;
    let (h0, u0) = (anchor.h, anchor.u);
    let h = other.h;
    if (h - h0).abs() <= ctx.tol_abs * h0.max(h).max(1.0) {
        return Err(Error::DegenerateJump);
    }
    let res = hugoniot_residual(family, anchor, other, ctx)?;
    let u_scale = other.u.abs().max(anchor.u.abs()).max(1.0);
    if res.abs() > ctx.tol_abs.sqrt() * u_scale {
        return Err(Error::OffCurve(res));
    }
    let speed = u0 + s * (ctx.g / 2.0 * (h + h * h / h0)).sqrt();
    debug_assert!({
        let dd = (other.discharge() - anchor.discharge()) / (h - h0);
        (speed - dd).abs() <= 1e-6 * (1.0 + speed.abs())
    });
    Ok(speed)
}

/// Outcome of a Lax admissibility check; `margin` is the smallest of the two
/// inequality gaps (negative when violated).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaxVerdict {
    pub admissible: bool,
    pub margin: f64,
    pub speed: f64,
}

/// Lax shock inequalities for the discontinuity from `left` to `right`:
/// lambda_i(right) < speed < lambda_i(left), up to tolerance.
pub fn check_lax(family: Family, left: &State, right: &State, ctx: &GravityContext) -> Result<LaxVerdict> {
    let speed = shock_speed(family, left, right, ctx)?;
    let lam = |st: &State| match family {
        Family::One => st.u - ctx.celerity(st.h),
        Family::Two => st.u + ctx.celerity(st.h),
        Family::Three => 0.0,
    };
    let margin = (speed - lam(right)).min(lam(left) - speed);
    let tol = ctx.tol_abs * (1.0 + speed.abs());
    Ok(LaxVerdict {
        admissible: margin > -tol,
        margin,
        speed,
    })
}

fn rarefaction_u_raw(family: Family, h: f64, anchor: &State, ctx: &GravityContext) -> Result<f64> {
    anchor.check_wet()?;
    if !(h > 0.0) {
        return Err(Error::NonPositiveDepth(h));
    }
    let s = family.sign()?;
    Ok(anchor.u + s * 2.0 * ctx.g.sqrt() * (h.sqrt() - anchor.h.sqrt()))
}

/// Velocity on the forward rarefaction curve of `family` through `anchor`.
/// Family 1 admits h <= h0, family 2 admits h >= h0.
pub fn rarefaction_u(family: Family, h: f64, anchor: &State, ctx: &GravityContext) -> Result<f64> {
    let s = family.sign()?;
    let out_of_range = if s < 0.0 { h > anchor.h } else { h < anchor.h };
    if out_of_range {
        return Err(Error::RangeViolation { h });
    }
    rarefaction_u_raw(family, h, anchor, ctx)
}

/// Velocity on the composite wave curve (shock branch on one side of the
/// anchor depth, rarefaction branch on the other; C^1 at the anchor).
pub fn wave_curve_u(spec: &CurveSpec, h: f64, ctx: &GravityContext) -> Result<f64> {
    spec.anchor.check_wet()?;
    if !(h > 0.0) {
        return Err(Error::NonPositiveDepth(h));
    }
    let shock_side_is_above = match (spec.family, spec.direction) {
        (Family::One, Direction::Forward) => true,
        (Family::One, Direction::Backward) => false,
        (Family::Two, Direction::Forward) => false,
        (Family::Two, Direction::Backward) => true,
        (Family::Three, _) => return Err(Error::WrongRegion(RegionClass::UZeroAxis)),
    };
    if (h > spec.anchor.h) == shock_side_is_above && h != spec.anchor.h {
        hugoniot_u(spec.family, h, &spec.anchor, ctx)
    } else {
        rarefaction_u_raw(spec.family, h, &spec.anchor, ctx)
    }
}

/// Depth at which the shock speed along the family's Lax shock branch
/// vanishes. Family 1 requires an anchor in A1 (forward curve); family 2
/// requires an anchor in A3 (backward curve). Closed-form root of
/// u0^2 = (g/2)(h + h^2/h0).
pub fn zero_speed_point(family: Family, anchor: &State, ctx: &GravityContext) -> Result<f64> {
    let region = classify(anchor, ctx)?;
    match family {
        Family::One if region == RegionClass::A1 => {}
        Family::Two if region == RegionClass::A3 => {}
        Family::One | Family::Two => return Err(Error::WrongRegion(region)),
        Family::Three => return Err(Error::WrongRegion(region)),
    }
    let (h0, u0) = (anchor.h, anchor.u);
    Ok(0.5 * (-h0 + (h0 * h0 + 8.0 * h0 * u0 * u0 / ctx.g).sqrt()))
}

/// The partner state of the zero-speed shock through `anchor`: for family 1
/// the right state of a standing 1-shock with left state `anchor`, for
/// family 2 the left state of a standing 2-shock with right state `anchor`.
pub fn zero_speed_partner(family: Family, anchor: &State, ctx: &GravityContext) -> Result<State> {
    let h = zero_speed_point(family, anchor, ctx)?;
    // zero speed conserves the mass flux across the jump
    Ok(State::new(h, anchor.discharge() / h, anchor.a))
}

/// Intersection of the forward 1-curve through `left_anchor` with the
/// backward 2-curve through `right_anchor`. The difference of the two
/// parameterizations is strictly decreasing in h, so the root is unique
/// when it exists.
pub fn intersect_w1_w2b(
    left_anchor: &State,
    right_anchor: &State,
    ctx: &GravityContext,
) -> Result<State> {
    left_anchor.check_wet()?;
    right_anchor.check_wet()?;
    let w1 = CurveSpec::forward(Family::One, *left_anchor);
    let w2b = CurveSpec::backward(Family::Two, *right_anchor);
    let diff = |h: f64| {
        wave_curve_u(&w1, h, ctx).unwrap_or(f64::NAN) - wave_curve_u(&w2b, h, ctx).unwrap_or(f64::NAN)
    };
    // limit of the difference as h -> 0 along the rarefaction branches
    let d0 = (left_anchor.u + 2.0 * ctx.celerity(left_anchor.h))
        - (right_anchor.u - 2.0 * ctx.celerity(right_anchor.h));
    if d0 <= 0.0 {
        return Err(Error::NoIntersection);
    }
    let h_max = 1e6 * left_anchor.h.max(right_anchor.h);

    let mut lo = left_anchor.h.min(right_anchor.h);
    let mut d_lo = diff(lo);
    while d_lo <= 0.0 {
        if d_lo == 0.0 {
            return Ok(State::new(
                lo,
                wave_curve_u(&w1, lo, ctx)?,
                left_anchor.a,
            ));
        }
        lo *= 0.5;
        if lo < 1e-280 {
            return Err(Error::NoIntersection);
        }
        d_lo = diff(lo);
    }
    let mut hi = left_anchor.h.max(right_anchor.h);
    let mut d_hi = diff(hi);
    while d_hi > 0.0 {
        hi *= 2.0;
        if hi > h_max {
            return Err(Error::NoIntersection);
        }
        d_hi = diff(hi);
    }
    let h = solve_bracketed(diff, lo, hi, ctx)?;
    Ok(State::new(h, wave_curve_u(&w1, h, ctx)?, left_anchor.a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx() -> GravityContext {
        GravityContext::default()
    }

    const HUG1_H2: f64 = -2.712471198003769; // family 1, anchor (1,0), h = 2, g = 9.81
    const SPEED1_H2: f64 = -5.424942396007538;

    #[test]
    fn hugoniot_examples() {
        let c = ctx();
        let anchor = State::new(1.0, 0.0, 0.0);
        assert_eq!(hugoniot_u(Family::One, 1.0, &anchor, &c).unwrap(), 0.0);
        assert!((hugoniot_u(Family::One, 2.0, &anchor, &c).unwrap() - HUG1_H2).abs() < 1e-12);
        assert!((hugoniot_u(Family::Two, 2.0, &anchor, &c).unwrap() + HUG1_H2).abs() < 1e-12);
    }

    #[test]
    fn shock_speed_examples() {
        let c = ctx();
        let anchor = State::new(1.0, 0.0, 0.0);
        let right = State::new(2.0, HUG1_H2, 0.0);
        let s = shock_speed(Family::One, &anchor, &right, &c).unwrap();
        assert!((s - SPEED1_H2).abs() < 1e-12);
        let s2 = shock_speed(Family::Two, &anchor, &right.reflected(), &c).unwrap();
        assert!((s2 + SPEED1_H2).abs() < 1e-12);
        // divided-difference consistency
        let dd = (right.discharge() - anchor.discharge()) / (right.h - anchor.h);
        assert!((s - dd).abs() < 1e-12);
    }

    #[test]
    fn shock_speed_degenerate_and_off_curve() {
        let c = ctx();
        let anchor = State::new(1.0, 0.0, 0.0);
        assert_eq!(
            shock_speed(Family::One, &anchor, &State::new(1.0, 0.0, 0.0), &c),
            Err(Error::DegenerateJump)
        );
        assert!(matches!(
            shock_speed(Family::One, &anchor, &State::new(2.0, 1.0, 0.0), &c),
            Err(Error::OffCurve(_))
        ));
    }

    #[test]
    fn lax_examples() {
        let c = ctx();
        let anchor = State::new(1.0, 0.0, 0.0);
        let right = State::new(2.0, HUG1_H2, 0.0);
        let v = check_lax(Family::One, &anchor, &right, &c).unwrap();
        assert!(v.admissible && v.margin > 0.0);

        let h = 0.5;
        let bad = State::new(h, hugoniot_u(Family::One, h, &anchor, &c).unwrap(), 0.0);
        assert!(!check_lax(Family::One, &anchor, &bad, &c).unwrap().admissible);
        let good2 = State::new(h, hugoniot_u(Family::Two, h, &anchor, &c).unwrap(), 0.0);
        assert!(check_lax(Family::Two, &anchor, &good2, &c).unwrap().admissible);
    }

    #[test]
    fn rarefaction_examples() {
        let c = ctx();
        let anchor = State::new(1.0, 0.0, 0.0);
        assert_eq!(rarefaction_u(Family::One, 1.0, &anchor, &c).unwrap(), 0.0);
        assert!(
            (rarefaction_u(Family::One, 0.5, &anchor, &c).unwrap() - 1.8347369872763097).abs()
                < 1e-12
        );
        assert!(
            (rarefaction_u(Family::Two, 4.0, &anchor, &c).unwrap() - 6.26418390534633).abs()
                < 1e-12
        );
        assert_eq!(
            rarefaction_u(Family::One, 2.0, &anchor, &c),
            Err(Error::RangeViolation { h: 2.0 })
        );
    }

    #[test]
    fn wave_curve_branch_selection() {
        let c = ctx();
        let w1 = CurveSpec::forward(Family::One, State::new(1.0, 0.0, 0.0));
        assert!((wave_curve_u(&w1, 2.0, &c).unwrap() - HUG1_H2).abs() < 1e-12);
        assert!((wave_curve_u(&w1, 0.5, &c).unwrap() - 1.8347369872763097).abs() < 1e-12);
        assert_eq!(wave_curve_u(&w1, 1.0, &c).unwrap(), 0.0);

        let w2b = CurveSpec::backward(Family::Two, State::new(1.0, 0.0, 0.0));
        assert!((wave_curve_u(&w2b, 1.4539, &c).unwrap() - 1.3059930044142884).abs() < 1e-12);
    }

    #[test]
    fn zero_speed_examples() {
        let c = ctx();
        let a1 = State::new(1.0, 4.0, 0.0);
        let h = zero_speed_point(Family::One, &a1, &c).unwrap();
        assert!((h - 1.3740271006322666).abs() < 1e-12);
        let partner = zero_speed_partner(Family::One, &a1, &c).unwrap();
        let s = shock_speed(Family::One, &a1, &partner, &c).unwrap();
        assert!(s.abs() < 1e-12);

        let a3 = a1.reflected();
        let hbar = zero_speed_point(Family::Two, &a3, &c).unwrap();
        assert!((hbar - h).abs() < 1e-12);

        assert!(matches!(
            zero_speed_point(Family::One, &State::new(1.0, 2.0, 0.0), &c),
            Err(Error::WrongRegion(RegionClass::A2Plus))
        ));
    }

    #[test]
    fn intersect_dam_break() {
        let c = ctx();
        let m = intersect_w1_w2b(&State::new(2.0, 0.0, 0.0), &State::new(1.0, 0.0, 0.0), &c)
            .unwrap();
        assert!((m.h - 1.453840892374573).abs() < 1e-9);
        assert!((m.u - 1.3058337531817277).abs() < 1e-9);
    }

    #[test]
    fn intersect_identical_anchors_and_vacuum() {
        let c = ctx();
        let s = State::new(1.0, 0.0, 0.0);
        let m = intersect_w1_w2b(&s, &s, &c).unwrap();
        assert!((m.h - 1.0).abs() < 1e-10 && m.u.abs() < 1e-10);

        assert_eq!(
            intersect_w1_w2b(
                &State::new(1.0, -10.0, 0.0),
                &State::new(1.0, 10.0, 0.0),
                &c
            ),
            Err(Error::NoIntersection)
        );
    }

    fn num_slope(spec: &CurveSpec, h: f64, step: f64, c: &GravityContext) -> f64 {
        let f = |x: f64| wave_curve_u(spec, x, c).unwrap();
        (f(h + step) - f(h - step)) / (2.0 * step)
    }

    #[test]
    fn w1_forward_decreasing_convex() {
        let c = ctx();
        let spec = CurveSpec::forward(Family::One, State::new(1.7, 0.4, 0.0));
        for i in 1..40 {
            let h = 0.1 * i as f64;
            let s = 1e-5 * h;
            let f = |x: f64| wave_curve_u(&spec, x, &c).unwrap();
            let d1 = num_slope(&spec, h, s, &c);
            let d2 = (f(h + s) - 2.0 * f(h) + f(h - s)) / (s * s);
            assert!(d1 < 0.0, "du/dh at h={h}");
            assert!(d2 > 0.0, "d2u/dh2 at h={h}");
        }
    }

    proptest! {
        // C^1 matching of shock and rarefaction branches at the anchor depth
        #[test]
        fn branches_match_value_and_slope(h0 in 0.05f64..20.0, u0 in -10.0f64..10.0) {
            let c = ctx();
            let anchor = State::new(h0, u0, 0.0);
            for family in [Family::One, Family::Two] {
                let s = 1e-5 * h0;
                // second-order one-sided slopes on each side of the anchor
                let hug = |x: f64| hugoniot_u(family, x, &anchor, &c).unwrap();
                let rar = |x: f64| rarefaction_u_raw(family, x, &anchor, &c).unwrap();
                let d_h = (-3.0 * hug(h0) + 4.0 * hug(h0 + s) - hug(h0 + 2.0 * s)) / (2.0 * s);
                let d_r = (3.0 * rar(h0) - 4.0 * rar(h0 - s) + rar(h0 - 2.0 * s)) / (2.0 * s);
                prop_assert!((hug(h0) - rar(h0)).abs() <= 1e-12 * (1.0 + u0.abs()));
                let scale = (c.g / h0).sqrt();
                prop_assert!((d_h - d_r).abs() <= 1e-7 * scale.max(1.0));
            }
        }

        // closed-form speed agrees with the divided difference of the flux
        #[test]
        fn speed_forms_agree(h0 in 0.05f64..20.0, u0 in -10.0f64..10.0, ratio in 0.05f64..20.0) {
            let c = ctx();
            let anchor = State::new(h0, u0, 0.0);
            let h = h0 * ratio;
            prop_assume!((h - h0).abs() > 1e-6 * h0);
            for family in [Family::One, Family::Two] {
                let other = State::new(h, hugoniot_u(family, h, &anchor, &c).unwrap(), 0.0);
                let s = shock_speed(family, &anchor, &other, &c).unwrap();
                let dd = (other.discharge() - anchor.discharge()) / (h - h0);
                prop_assert!((s - dd).abs() <= 1e-9 * (1.0 + s.abs()));
                // Lax verdict is the depth-threshold rule
                let v = check_lax(family, &anchor, &other, &c).unwrap();
                let expect = match family { Family::One => h > h0, _ => h < h0 };
                prop_assert_eq!(v.admissible, expect);
            }
        }

        // family-1 objects at (h, u) mirror family-2 objects at (h, -u)
        #[test]
        fn reflection_symmetry(h0 in 0.05f64..20.0, u0 in -10.0f64..10.0, ratio in 0.05f64..20.0) {
            let c = ctx();
            let anchor = State::new(h0, u0, 0.0);
            let h = h0 * ratio;
            let u1 = hugoniot_u(Family::One, h, &anchor, &c).unwrap();
            let u2 = hugoniot_u(Family::Two, h, &anchor.reflected(), &c).unwrap();
            prop_assert!((u1 + u2).abs() <= 1e-10 * (1.0 + u1.abs()));
        }

        // backward 2-curve is strictly increasing and concave
        #[test]
        fn w2b_increasing_concave(h0 in 0.05f64..20.0, u0 in -10.0f64..10.0, hr in 0.02f64..25.0) {
            let c = ctx();
            let spec = CurveSpec::backward(Family::Two, State::new(h0, u0, 0.0));
            prop_assume!((hr - h0).abs() > 1e-3 * h0);
            let s = 1e-5 * hr;
            let f = |x: f64| wave_curve_u(&spec, x, &c).unwrap();
            let d1 = (f(hr + s) - f(hr - s)) / (2.0 * s);
            let d2 = (f(hr + s) - 2.0 * f(hr) + f(hr - s)) / (s * s);
            prop_assert!(d1 > 0.0);
            prop_assert!(d2 < 1e-6 * (c.g / hr).sqrt());
        }
    }
}
