//! Bracketed scalar root finding: Illinois-damped false position with a
//! bisection safeguard. All wave-curve and stationary-jump equations in this
//! crate are strictly monotone on the bracketed interval, so a sign change
//! guarantees a unique root.

use crate::error::{Error, Result};
use crate::types::GravityContext;

/// Solve f = 0 on [lo, hi] given f(lo) and f(hi) of opposite sign
/// (or zero at an endpoint). Converges when the bracket width drops below
/// `tol_rel * max(1, |x|)` or the residual vanishes.
pub fn solve_bracketed<F>(f: F, lo: f64, hi: f64, ctx: &GravityContext) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::NoIntersection);
    }
    let mut side = 0i32;
    for _ in 0..ctx.max_iter {
        let width = (b - a).abs();
        if width <= ctx.tol_rel * a.abs().max(b.abs()).max(1.0) {
            break;
        }
        // false-position step, midpoint fallback if it stalls at an endpoint
        let mut x = b - fb * (b - a) / (fb - fa);
        if !x.is_finite() || x <= a.min(b) || x >= a.max(b) {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if fx == 0.0 || !fx.is_finite() {
            return if fx == 0.0 { Ok(x) } else { Err(Error::ConvergenceFailure(ctx.max_iter)) };
        }
        if fx.signum() == fb.signum() {
            b = x;
            fb = fx;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = x;
            fa = fx;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    let width = (b - a).abs();
    if width <= 1e3 * ctx.tol_rel * a.abs().max(b.abs()).max(1.0) {
        Ok(if fa.abs() <= fb.abs() { a } else { b })
    } else {
        Err(Error::ConvergenceFailure(ctx.max_iter))
    }
}

/// Bisect the edge of the domain of `f` inside [defined, undefined] (in
/// either order) and return the defined point closest to the boundary with
/// its value.
fn refine_domain_edge<F>(
    f: &F,
    mut def: f64,
    mut undef: f64,
    mut fdef: f64,
    ctx: &GravityContext,
) -> (f64, f64)
where
    F: Fn(f64) -> Option<f64>,
{
    for _ in 0..128 {
        if (undef - def).abs() <= ctx.tol_rel * def.abs().max(undef.abs()).max(1.0) {
            break;
        }
        let mid = 0.5 * (def + undef);
        match f(mid) {
            Some(v) if v.is_finite() => {
                def = mid;
                fdef = v;
            }
            _ => undef = mid,
        }
    }
    (def, fdef)
}

/// Scan a sorted grid for sign changes of a partially defined function and
/// refine each bracketed root. Points where `f` is undefined split the grid
/// into independent segments; segment edges are themselves refined by
/// bisection, so a sign change confined to a thin layer next to the domain
/// boundary is still bracketed. Returns roots in increasing order.
pub fn scan_roots<F>(f: F, grid: &[f64], ctx: &GravityContext) -> Vec<f64>
where
    F: Fn(f64) -> Option<f64>,
{
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    let mut last_undef: Option<f64> = None;
    let push_bracket = |a: f64, fa: f64, b: f64, fb: f64, roots: &mut Vec<f64>| {
        if fa == 0.0 {
            roots.push(a);
        } else if fb == 0.0 {
            roots.push(b);
        } else if fa.signum() != fb.signum() {
            if let Ok(r) = solve_bracketed(|y| f(y).unwrap_or(f64::NAN), a, b, ctx) {
                roots.push(r);
            }
        }
    };
    for &x in grid {
        match f(x) {
            Some(fx) if fx.is_finite() => {
                if let Some((px, pfx)) = prev {
                    push_bracket(px, pfx, x, fx, &mut roots);
                } else {
                    if fx == 0.0 {
                        roots.push(x);
                    }
                    // entering a defined segment: resolve its left edge so a
                    // sign change squeezed against the boundary is not lost
                    if let Some(xu) = last_undef {
                        let (xe, fe) = refine_domain_edge(&f, x, xu, fx, ctx);
                        if xe != x {
                            push_bracket(xe, fe, x, fx, &mut roots);
                        }
                    }
                }
                prev = Some((x, fx));
            }
            _ => {
                // leaving a defined segment: resolve its right edge
                if let Some((px, pfx)) = prev {
                    let (xe, fe) = refine_domain_edge(&f, px, x, pfx, ctx);
                    if xe != px {
                        push_bracket(px, pfx, xe, fe, &mut roots);
                    }
                }
                last_undef = Some(x);
                prev = None;
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup();
    roots
}

/// Uniform grid over [lo, hi] with `n` points (inclusive endpoints).
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Merge of a uniform and a geometric grid over [lo, hi]; resolves both the
/// small-depth end and the large-depth tail of a scan interval.
pub fn mixed_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    debug_assert!(lo > 0.0 && hi > lo);
    let n = n.max(4);
    let mut pts = linear_grid(lo, hi, n / 2);
    let ratio = (hi / lo).ln();
    let m = n - n / 2;
    for i in 0..m {
        pts.push(lo * (ratio * i as f64 / (m - 1) as f64).exp());
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}
