//! Candidate construction and validation for the Riemann problem over a
//! bottom step. Seven generators (C1..C7) each realize one catalogued
//! solution structure; candidates are assembled liberally and then filtered
//! by a strict validator (jump relations, Lax inequalities, monotonicity
//! criterion, global speed ordering).

use crate::error::{Error, Result};
use crate::parallel;
use crate::roots::{linear_grid, mixed_grid, scan_roots};
use crate::stationary::{critical_data, stationary_roots, StationaryRoots, sw_map};
use crate::types::{classify, GravityContext, RegionClass, State};
use crate::wave_curves::{
    intersect_w1_w2b, rarefaction_u, shock_speed, wave_curve_u, zero_speed_partner, CurveSpec,
    Family,
};
use serde::{Deserialize, Serialize};
use std::cell::Cell;

/// Elementary wave kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveKind {
    Shock,
    Rarefaction,
    Stationary,
}

/// One elementary wave: a jump or fan between two constant states.
/// `speed_lo` = `speed_hi` for shocks, the fan span for rarefactions,
/// and [0, 0] for stationary waves.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Wave {
    pub kind: WaveKind,
    pub family: Family,
    pub left: State,
    pub right: State,
    pub speed_lo: f64,
    pub speed_hi: f64,
}

impl Wave {
    /// Image under the x -> -x, u -> -u symmetry.
    pub fn reflected(&self) -> Wave {
        Wave {
            kind: self.kind,
            family: self.family.reflected(),
            left: self.right.reflected(),
            right: self.left.reflected(),
            speed_lo: -self.speed_hi,
            speed_hi: -self.speed_lo,
        }
    }
}

/// Which catalogued construction produced a solution.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum StructureTag {
    Constant,
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
}

/// Residual summary attached to every validated solution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Largest relative jump-relation residual over all discontinuities.
    pub max_rh_residual: f64,
    /// Smallest Lax margin over all shocks; None when there is no shock.
    pub min_lax_margin: Option<f64>,
    /// Sum of |delta a| over stationary waves.
    pub total_delta_a: f64,
}

impl Default for Diagnostics {
    fn default() -> Self {
        Self {
            max_rh_residual: 0.0,
            min_lax_margin: None,
            total_delta_a: 0.0,
        }
    }
}

/// A complete self-similar solution: left/right data plus an ordered wave
/// sequence (left to right, nondecreasing speeds).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub waves: Vec<Wave>,
    pub tag: StructureTag,
    pub left: State,
    pub right: State,
    pub diagnostics: Diagnostics,
    pub validated: bool,
}

impl Solution {
    pub fn reflected(&self) -> Solution {
        Solution {
            waves: self.waves.iter().rev().map(Wave::reflected).collect(),
            tag: self.tag,
            left: self.right.reflected(),
            right: self.left.reflected(),
            diagnostics: self.diagnostics,
            validated: self.validated,
        }
    }
}

/// Riemann data: two constant states separated at x = 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiemannProblem {
    pub left: State,
    pub right: State,
}

impl RiemannProblem {
    pub fn new(left: State, right: State) -> Self {
        Self { left, right }
    }

    pub fn reflected(&self) -> Self {
        Self {
            left: self.right.reflected(),
            right: self.left.reflected(),
        }
    }
}

/// Why a generator produced no validated candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReasonCode {
    /// Region precondition of the construction not met by the data.
    Precondition,
    NoStationaryWave,
    NoIntersection,
    NoSonicPoint,
    /// Matching function has no sign change on the scan interval.
    EmptyBracket,
    /// Candidates were assembled but all failed validation.
    SpeedOrderViolation,
    /// A wave could not be assembled from the matched states.
    ConstructionFailed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorOutcome {
    pub tag: StructureTag,
    pub reason: ReasonCode,
}

/// Everything `solve` learned: validated solutions plus a reason code for
/// each generator that contributed none.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub solutions: Vec<Solution>,
    pub empty_generators: Vec<GeneratorOutcome>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Number of scan points used to bracket matching-equation roots.
    pub scan_grid: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { scan_grid: 512 }
    }
}

// ---------------------------------------------------------------------------
// wave assembly helpers

fn lam(family: Family, st: &State, ctx: &GravityContext) -> f64 {
    match family {
        Family::One => st.u - ctx.celerity(st.h),
        Family::Two => st.u + ctx.celerity(st.h),
        Family::Three => 0.0,
    }
}

fn states_coincide(a: &State, b: &State, ctx: &GravityContext) -> bool {
    (a.h - b.h).abs() <= ctx.tol_abs * a.h.max(b.h).max(1.0)
        && (a.u - b.u).abs() <= ctx.tol_abs * a.u.abs().max(b.u.abs()).max(1.0)
}

/// Build the 1- or 2-family wave joining `left` to `right` (both already on
/// the appropriate curve). Returns None for a degenerate (identity) wave.
fn one_family_wave(
    family: Family,
    left: State,
    right: State,
    ctx: &GravityContext,
) -> Result<Option<Wave>> {
    if states_coincide(&left, &right, ctx) {
        return Ok(None);
    }
    let is_shock = match family {
        Family::One => right.h > left.h,
        Family::Two => right.h < left.h,
        Family::Three => return Err(Error::WrongRegion(RegionClass::UZeroAxis)),
    };
    if is_shock {
        let s = shock_speed(family, &left, &right, ctx)?;
        Ok(Some(Wave {
            kind: WaveKind::Shock,
            family,
            left,
            right,
            speed_lo: s,
            speed_hi: s,
        }))
    } else {
        Ok(Some(Wave {
            kind: WaveKind::Rarefaction,
            family,
            left,
            right,
            speed_lo: lam(family, &left, ctx),
            speed_hi: lam(family, &right, ctx),
        }))
    }
}

fn stationary_wave(left: State, right: State, ctx: &GravityContext) -> Option<Wave> {
    if left.a == right.a && states_coincide(&left, &right, ctx) {
        return None;
    }
    Some(Wave {
        kind: WaveKind::Stationary,
        family: Family::Three,
        left,
        right,
        speed_lo: 0.0,
        speed_hi: 0.0,
    })
}

// ---------------------------------------------------------------------------
// validation

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: String,
    pub magnitude: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub diagnostics: Diagnostics,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn state_dist(a: &State, b: &State) -> f64 {
    let d = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs()).max(1.0);
    d(a.h, b.h).max(d(a.u, b.u)).max(d(a.a, b.a))
}

const CHAIN_TOL: f64 = 1e-8;
const SHOCK_RH_TOL: f64 = 1e-9;
const STATIONARY_TOL: f64 = 1e-10;
const ORDER_TOL: f64 = 1e-9;

/// Check a candidate against the full set of admissibility requirements:
/// endpoint chaining, per-wave jump relations, Lax inequalities, the
/// monotonicity criterion, speed ordering and the bottom-variation identity.
pub fn validate(
    solution: &Solution,
    problem: &RiemannProblem,
    ctx: &GravityContext,
) -> ValidationReport {
    let mut violations: Vec<Violation> = Vec::new();
    let mut diag = Diagnostics::default();
    let mut flag = |constraint: &str, magnitude: f64| {
        violations.push(Violation {
            constraint: constraint.to_string(),
            magnitude,
        })
    };

    // endpoint chaining
    let d_l = state_dist(&solution.left, &problem.left);
    if d_l > CHAIN_TOL {
        flag("left endpoint mismatch", d_l);
    }
    let d_r = state_dist(&solution.right, &problem.right);
    if d_r > CHAIN_TOL {
        flag("right endpoint mismatch", d_r);
    }
    if solution.waves.is_empty() {
        let d = state_dist(&solution.left, &solution.right);
        if d > CHAIN_TOL {
            flag("constant solution with unequal data", d);
        }
    } else {
        let d = state_dist(&solution.waves[0].left, &solution.left);
        if d > CHAIN_TOL {
            flag("first wave not anchored at left data", d);
        }
        let d = state_dist(&solution.waves.last().unwrap().right, &solution.right);
        if d > CHAIN_TOL {
            flag("last wave not anchored at right data", d);
        }
        for k in 1..solution.waves.len() {
            let d = state_dist(&solution.waves[k - 1].right, &solution.waves[k].left);
            if d > CHAIN_TOL {
                flag("wave chaining gap", d);
            }
        }
    }

    let q = |st: &State| st.h * st.u;
    let mom = |st: &State| st.h * st.u * st.u + 0.5 * ctx.g * st.h * st.h;

    for wave in &solution.waves {
        let (l, r) = (&wave.left, &wave.right);
        if l.check_wet().is_err() || r.check_wet().is_err() {
            flag("dry state in wave", l.h.min(r.h));
            continue;
        }
        match wave.kind {
            WaveKind::Shock => {
                let s = wave.speed_lo;
                if (wave.speed_hi - s).abs() > 1e-12 * (1.0 + s.abs()) {
                    flag("shock with nonzero speed span", wave.speed_hi - s);
                }
                if (l.a - r.a).abs() > 1e-12 * (1.0 + l.a.abs()) {
                    flag("bottom jump across a moving shock", r.a - l.a);
                }
                let r1 = s * (r.h - l.h) - (q(r) - q(l));
                let r2 = s * (q(r) - q(l)) - (mom(r) - mom(l));
                let s1 = (s.abs() * (l.h + r.h))
                    .max(q(l).abs() + q(r).abs())
                    .max(1.0);
                let s2 = (mom(l).abs() + mom(r).abs()).max(1.0);
                let rh = (r1 / s1).abs().max((r2 / s2).abs());
                diag.max_rh_residual = diag.max_rh_residual.max(rh);
                if rh > SHOCK_RH_TOL {
                    flag("shock jump relations", rh);
                }
                let margin = (s - lam(wave.family, r, ctx)).min(lam(wave.family, l, ctx) - s);
                diag.min_lax_margin =
                    Some(diag.min_lax_margin.map_or(margin, |m| m.min(margin)));
                if margin < -ORDER_TOL * (1.0 + s.abs()) {
                    flag("Lax inequalities", margin);
                }
            }
            WaveKind::Rarefaction => {
                match rarefaction_u(wave.family, r.h, l, ctx) {
                    Ok(u) => {
                        let resid = (r.u - u).abs() / r.u.abs().max(u.abs()).max(1.0);
                        diag.max_rh_residual = diag.max_rh_residual.max(resid);
                        if resid > SHOCK_RH_TOL {
                            flag("rarefaction curve residual", resid);
                        }
                    }
                    Err(_) => flag("rarefaction branch direction", r.h - l.h),
                }
                let lo = lam(wave.family, l, ctx);
                let hi = lam(wave.family, r, ctx);
                let scale = 1.0 + lo.abs().max(hi.abs());
                if (wave.speed_lo - lo).abs() > ORDER_TOL * scale
                    || (wave.speed_hi - hi).abs() > ORDER_TOL * scale
                {
                    flag("rarefaction speed span", (wave.speed_lo - lo).abs());
                }
                if lo > hi + ORDER_TOL * scale {
                    flag("collapsing fan", lo - hi);
                }
            }
            WaveKind::Stationary => {
                if wave.speed_lo != 0.0 || wave.speed_hi != 0.0 {
                    flag("stationary wave with nonzero speed", wave.speed_lo);
                }
                let dq = (q(l) - q(r)).abs() / q(l).abs().max(q(r).abs()).max(1.0);
                diag.max_rh_residual = diag.max_rh_residual.max(dq);
                if dq > STATIONARY_TOL {
                    flag("stationary discharge jump", dq);
                }
                let head = |st: &State| 0.5 * st.u * st.u + ctx.g * (st.h + st.a);
                let dh = (head(l) - head(r)).abs() / head(l).abs().max(head(r).abs()).max(1.0);
                diag.max_rh_residual = diag.max_rh_residual.max(dh);
                if dh > STATIONARY_TOL {
                    flag("stationary head jump", dh);
                }
                if let (Ok(rl), Ok(rr)) = (classify(l, ctx), classify(r, ctx)) {
                    if !rl.is_critical()
                        && !rr.is_critical()
                        && rl.is_supercritical() != rr.is_supercritical()
                    {
                        flag("monotonicity criterion: regime flip", 1.0);
                    }
                }
                diag.total_delta_a += (r.a - l.a).abs();
            }
        }
    }

    for k in 1..solution.waves.len() {
        let prev = solution.waves[k - 1].speed_hi;
        let cur = solution.waves[k].speed_lo;
        if prev > cur + ORDER_TOL * (1.0 + prev.abs().max(cur.abs())) {
            flag("speed ordering", prev - cur);
        }
    }

    let da = (problem.right.a - problem.left.a).abs();
    if (diag.total_delta_a - da).abs() > 1e-12 * (1.0 + da) {
        flag("monotonicity criterion: total bottom variation", diag.total_delta_a - da);
    }

    ValidationReport {
        violations,
        diagnostics: diag,
    }
}

// ---------------------------------------------------------------------------
// generators (all run in the normalized frame a_L <= a_R, a_L < a_R strictly)

struct GenOut {
    /// Candidate wave sequences with their structure tag.
    cands: Vec<(StructureTag, Vec<Wave>)>,
    /// Reason reported when no candidate survives validation.
    reason: ReasonCode,
}

impl GenOut {
    fn empty(reason: ReasonCode) -> Self {
        Self {
            cands: Vec::new(),
            reason,
        }
    }
}

fn down_image(anchor: &State, h: f64, a: f64) -> State {
    State::new(h, anchor.discharge() / h, a)
}

#[derive(Clone, Copy, PartialEq)]
enum Pick {
    Subcritical,
    Supercritical,
}

/// Stationary image of `anchor` at level `a` on the requested root branch;
/// None when the branch does not exist there.
fn image_on_branch(anchor: &State, a: f64, pick: Pick, ctx: &GravityContext) -> Option<State> {
    if a == anchor.a {
        return (pick == Pick::Subcritical).then_some(*anchor);
    }
    if anchor.u.abs() <= ctx.tol_abs {
        if pick == Pick::Supercritical {
            return None;
        }
        let h = anchor.h + anchor.a - a;
        return (h > 0.0).then(|| State::new(h, 0.0, a));
    }
    match stationary_roots(anchor, a, ctx).ok()? {
        StationaryRoots::Two {
            supercritical,
            subcritical,
        } => {
            let h = match pick {
                Pick::Supercritical => supercritical,
                Pick::Subcritical => subcritical,
            };
            Some(down_image(anchor, h, a))
        }
        StationaryRoots::Double(h) => {
            (pick == Pick::Subcritical).then(|| down_image(anchor, h, a))
        }
        StationaryRoots::None => None,
    }
}

fn scan_cap(p: &RiemannProblem) -> f64 {
    50.0 * (p.left.h + p.right.h + (p.right.a - p.left.a).abs() + 1.0)
}

/// W3 first: stationary jump off a right-supercritical left state, then a
/// flat two-wave continuation at level a_R.
fn generate_c1(p: &RiemannProblem, ctx: &GravityContext) -> GenOut {
    let (ul, ur) = (p.left, p.right);
    match classify(&ul, ctx) {
        Ok(RegionClass::A1) => {}
        _ => return GenOut::empty(ReasonCode::Precondition),
    }
    let img = match sw_map(&ul, ur.a, ctx) {
        Ok(img) => img,
        Err(_) => return GenOut::empty(ReasonCode::NoStationaryWave),
    };
    let mut out = GenOut::empty(ReasonCode::NoIntersection);
    for u1 in img.states() {
        let u2 = match intersect_w1_w2b(&u1, &ur, ctx) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let mut waves = Vec::new();
        if let Some(w) = stationary_wave(ul, u1, ctx) {
            waves.push(w);
        }
        match one_family_wave(Family::One, u1, u2, ctx) {
            Ok(Some(w)) => waves.push(w),
            Ok(None) => {}
            Err(_) => continue,
        }
        match one_family_wave(Family::Two, u2, ur, ctx) {
            Ok(Some(w)) => waves.push(w),
            Ok(None) => {}
            Err(_) => continue,
        }
        out.cands.push((StructureTag::C1, waves));
    }
    out
}

/// W1 first, stationary jump in the middle, W2 last: scans the left-going
/// segment of the forward 1-curve and matches the stationary image against
/// the backward 2-curve. Both stationary root branches are probed; the
/// validator keeps only regime-consistent jumps. Tagged C2 when the image
/// is right-going or at rest, C3 when it is left-going subcritical.
fn generate_c23(p: &RiemannProblem, ctx: &GravityContext, opts: &SolverOptions) -> GenOut {
    let (ul, ur) = (p.left, p.right);
    let region_l = match classify(&ul, ctx) {
        Ok(r) => r,
        Err(_) => return GenOut::empty(ReasonCode::ConstructionFailed),
    };
    let w1 = CurveSpec::forward(Family::One, ul);
    let w2b = CurveSpec::backward(Family::Two, ur);
    // segment of W1(U_L) on which every 1-wave speed is <= 0
    let h_lo = if region_l == RegionClass::A1 {
        match crate::wave_curves::zero_speed_point(Family::One, &ul, ctx) {
            Ok(h) => h,
            Err(_) => return GenOut::empty(ReasonCode::ConstructionFailed),
        }
    } else {
        let s = ul.u + 2.0 * ctx.celerity(ul.h);
        if s > 0.0 {
            s * s / (9.0 * ctx.g)
        } else {
            1e-9
        }
    };
    let h_cap = scan_cap(p);
    if !(h_lo < h_cap) {
        return GenOut::empty(ReasonCode::NoIntersection);
    }
    let grid = mixed_grid(h_lo.max(1e-9), h_cap, opts.scan_grid);

    let any_image = Cell::new(false);
    let mut out = GenOut::empty(ReasonCode::NoIntersection);
    for pick in [Pick::Subcritical, Pick::Supercritical] {
        let m = |h3: f64| -> Option<f64> {
            let u3 = wave_curve_u(&w1, h3, ctx).ok()?;
            let s3 = State::new(h3, u3, ul.a);
            let img = image_on_branch(&s3, ur.a, pick, ctx)?;
            any_image.set(true);
            let want = wave_curve_u(&w2b, img.h, ctx).ok()?;
            Some(img.u - want)
        };
        for h3 in scan_roots(m, &grid, ctx) {
            let u3 = match wave_curve_u(&w1, h3, ctx) {
                Ok(u) => State::new(h3, u, ul.a),
                Err(_) => continue,
            };
            let img = match image_on_branch(&u3, ur.a, pick, ctx) {
                Some(s) => s,
                None => continue,
            };
            let tag = match classify(&img, ctx) {
                Ok(RegionClass::A2Minus) | Ok(RegionClass::CMinus) => StructureTag::C3,
                _ => StructureTag::C2,
            };
            let mut waves = Vec::new();
            match one_family_wave(Family::One, ul, u3, ctx) {
                Ok(Some(w)) => waves.push(w),
                Ok(None) => {}
                Err(_) => continue,
            }
            if let Some(w) = stationary_wave(u3, img, ctx) {
                waves.push(w);
            }
            match one_family_wave(Family::Two, img, ur, ctx) {
                Ok(Some(w)) => waves.push(w),
                Ok(None) => {}
                Err(_) => continue,
            }
            out.cands.push((tag, waves));
        }
    }
    if out.cands.is_empty() && !any_image.get() {
        out.reason = ReasonCode::NoStationaryWave;
    }
    out
}

/// W3 last: stationary jump onto a left-supercritical right state, preceded
/// by a flat two-wave construction at level a_L.
fn generate_c4(p: &RiemannProblem, ctx: &GravityContext) -> GenOut {
    let (ul, ur) = (p.left, p.right);
    match classify(&ur, ctx) {
        Ok(RegionClass::A3) => {}
        _ => return GenOut::empty(ReasonCode::Precondition),
    }
    // preimage of U_R at level a_L: same root problem anchored at U_R,
    // supercritical (A3-side) branch
    let u1 = match image_on_branch(&ur, ul.a, Pick::Supercritical, ctx) {
        Some(s) => s,
        None => return GenOut::empty(ReasonCode::NoStationaryWave),
    };
    let u2 = match intersect_w1_w2b(&ul, &u1, ctx) {
        Ok(s) => s,
        Err(_) => return GenOut::empty(ReasonCode::NoIntersection),
    };
    let mut waves = Vec::new();
    match one_family_wave(Family::One, ul, u2, ctx) {
        Ok(Some(w)) => waves.push(w),
        Ok(None) => {}
        Err(_) => return GenOut::empty(ReasonCode::ConstructionFailed),
    }
    match one_family_wave(Family::Two, u2, u1, ctx) {
        Ok(Some(w)) => waves.push(w),
        Ok(None) => {}
        Err(_) => return GenOut::empty(ReasonCode::ConstructionFailed),
    }
    if let Some(w) = stationary_wave(u1, ur, ctx) {
        waves.push(w);
    }
    GenOut {
        cands: vec![(StructureTag::C4, waves)],
        reason: ReasonCode::NoIntersection,
    }
}

/// Resonant structure with two 1-waves: rarefaction up to the sonic point
/// on C+, stationary jump onto A1, then a flat two-wave continuation.
fn generate_c5(p: &RiemannProblem, ctx: &GravityContext) -> GenOut {
    let (ul, ur) = (p.left, p.right);
    match classify(&ul, ctx) {
        Ok(
            RegionClass::A2Plus
            | RegionClass::A2Minus
            | RegionClass::UZeroAxis
            | RegionClass::A3
            | RegionClass::CMinus,
        ) => {}
        _ => return GenOut::empty(ReasonCode::Precondition),
    }
    let s = ul.u + 2.0 * ctx.celerity(ul.h);
    if s <= 0.0 {
        return GenOut::empty(ReasonCode::NoSonicPoint);
    }
    let h_plus = s * s / (9.0 * ctx.g);
    let u_plus = State::new(h_plus, s / 3.0, ul.a);
    let img = match sw_map(&u_plus, ur.a, ctx) {
        Ok(img) => img,
        Err(_) => return GenOut::empty(ReasonCode::NoStationaryWave),
    };
    let mut out = GenOut::empty(ReasonCode::NoIntersection);
    for u1 in img.states() {
        if classify(&u1, ctx) != Ok(RegionClass::A1) {
            continue;
        }
        let u2 = match intersect_w1_w2b(&u1, &ur, ctx) {
            Ok(st) => st,
            Err(_) => continue,
        };
        let mut waves = Vec::new();
        match one_family_wave(Family::One, ul, u_plus, ctx) {
            Ok(Some(w)) => waves.push(w),
            Ok(None) => {}
            Err(_) => continue,
        }
        if let Some(w) = stationary_wave(u_plus, u1, ctx) {
            waves.push(w);
        }
        match one_family_wave(Family::One, u1, u2, ctx) {
            Ok(Some(w)) => waves.push(w),
            Ok(None) => {}
            Err(_) => continue,
        }
        match one_family_wave(Family::Two, u2, ur, ctx) {
            Ok(Some(w)) => waves.push(w),
            Ok(None) => {}
            Err(_) => continue,
        }
        out.cands.push((StructureTag::C5, waves));
    }
    out
}

/// Resonant structure with two 2-waves: the 2-rarefaction attaches to C- at
/// level a_L, a stationary jump carries it to a_R, matched against the
/// backward 2-curve of U_R; the C- depth is the scan parameter.
fn generate_c6(p: &RiemannProblem, ctx: &GravityContext, opts: &SolverOptions) -> GenOut {
    let (ul, ur) = (p.left, p.right);
    let w2b = CurveSpec::backward(Family::Two, ur);
    let grid = mixed_grid(1e-9, scan_cap(p), opts.scan_grid);
    let any_image = Cell::new(false);
    let m = |h2: f64| -> Option<f64> {
        let u2 = State::new(h2, -ctx.celerity(h2), ul.a);
        let img = image_on_branch(&u2, ur.a, Pick::Subcritical, ctx)?;
        any_image.set(true);
        let want = wave_curve_u(&w2b, img.h, ctx).ok()?;
        Some(img.u - want)
    };
    let mut out = GenOut::empty(ReasonCode::NoIntersection);
    for h2 in scan_roots(m, &grid, ctx) {
        let u2 = State::new(h2, -ctx.celerity(h2), ul.a);
        let img = match image_on_branch(&u2, ur.a, Pick::Subcritical, ctx) {
            Some(s) => s,
            None => continue,
        };
        let u3 = match intersect_w1_w2b(&ul, &u2, ctx) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let mut waves = Vec::new();
        match one_family_wave(Family::One, ul, u3, ctx) {
            Ok(Some(w)) => waves.push(w),
            Ok(None) => {}
            Err(_) => continue,
        }
        match one_family_wave(Family::Two, u3, u2, ctx) {
            Ok(Some(w)) => waves.push(w),
            Ok(None) => {}
            Err(_) => continue,
        }
        if let Some(w) = stationary_wave(u2, img, ctx) {
            waves.push(w);
        }
        match one_family_wave(Family::Two, img, ur, ctx) {
            Ok(Some(w)) => waves.push(w),
            Ok(None) => {}
            Err(_) => continue,
        }
        out.cands.push((StructureTag::C6, waves));
    }
    if out.cands.is_empty() && !any_image.get() {
        out.reason = ReasonCode::NoStationaryWave;
    }
    out
}

/// Zero-speed cluster: stationary jump to an intermediate level a_m, a
/// standing shock, a second stationary jump to the far level, all at xi = 0.
/// Case (i) runs off a right-supercritical U_L; case (ii) is the mirrored
/// construction off a left-supercritical U_R.
fn generate_c7(p: &RiemannProblem, ctx: &GravityContext, opts: &SolverOptions) -> GenOut {
    let (ul, ur) = (p.left, p.right);
    let mut out = GenOut::empty(ReasonCode::Precondition);
    let mut scanned = false;

    if classify(&ul, ctx) == Ok(RegionClass::A1) {
        scanned = true;
        let w2b = CurveSpec::backward(Family::Two, ur);
        let a_hi = match critical_data(&ul, ctx) {
            Ok(d) => ur.a.min(d.a_threshold),
            Err(_) => ur.a,
        };
        let grid = linear_grid(ul.a, a_hi, opts.scan_grid.max(8));
        let m = |a_m: f64| -> Option<f64> {
            let u1 = image_on_branch(&ul, a_m, Pick::Supercritical, ctx)?;
            let t1 = zero_speed_partner(Family::One, &u1, ctx).ok()?;
            let u2 = image_on_branch(&t1, ur.a, Pick::Subcritical, ctx)?;
            let want = wave_curve_u(&w2b, u2.h, ctx).ok()?;
            Some(u2.u - want)
        };
        for a_m in scan_roots(m, &grid, ctx) {
            let (u1, t1, u2) = match (|| {
                let u1 = image_on_branch(&ul, a_m, Pick::Supercritical, ctx)?;
                let t1 = zero_speed_partner(Family::One, &u1, ctx).ok()?;
                let u2 = image_on_branch(&t1, ur.a, Pick::Subcritical, ctx)?;
                Some((u1, t1, u2))
            })() {
                Some(t) => t,
                None => continue,
            };
            let mut waves = Vec::new();
            if let Some(w) = stationary_wave(ul, u1, ctx) {
                waves.push(w);
            }
            match one_family_wave(Family::One, u1, t1, ctx) {
                Ok(Some(w)) => waves.push(w),
                Ok(None) => {}
                Err(_) => continue,
            }
            if let Some(w) = stationary_wave(t1, u2, ctx) {
                waves.push(w);
            }
            match one_family_wave(Family::Two, u2, ur, ctx) {
                Ok(Some(w)) => waves.push(w),
                Ok(None) => {}
                Err(_) => continue,
            }
            out.cands.push((StructureTag::C7, waves));
        }
    }

    if classify(&ur, ctx) == Ok(RegionClass::A3) {
        scanned = true;
        let w1 = CurveSpec::forward(Family::One, ul);
        let grid = linear_grid(ul.a, ur.a, opts.scan_grid.max(8));
        let m = |a_m: f64| -> Option<f64> {
            let w = image_on_branch(&ur, a_m, Pick::Supercritical, ctx)?;
            let v = zero_speed_partner(Family::Two, &w, ctx).ok()?;
            let u3 = image_on_branch(&v, ul.a, Pick::Subcritical, ctx)?;
            let want = wave_curve_u(&w1, u3.h, ctx).ok()?;
            Some(u3.u - want)
        };
        for a_m in scan_roots(m, &grid, ctx) {
            let (w, v, u3) = match (|| {
                let w = image_on_branch(&ur, a_m, Pick::Supercritical, ctx)?;
                let v = zero_speed_partner(Family::Two, &w, ctx).ok()?;
                let u3 = image_on_branch(&v, ul.a, Pick::Subcritical, ctx)?;
                Some((w, v, u3))
            })() {
                Some(t) => t,
                None => continue,
            };
            let mut waves = Vec::new();
            match one_family_wave(Family::One, ul, u3, ctx) {
                Ok(Some(wv)) => waves.push(wv),
                Ok(None) => {}
                Err(_) => continue,
            }
            if let Some(wv) = stationary_wave(u3, v, ctx) {
                waves.push(wv);
            }
            match one_family_wave(Family::Two, v, w, ctx) {
                Ok(Some(wv)) => waves.push(wv),
                Ok(None) => {}
                Err(_) => continue,
            }
            if let Some(wv) = stationary_wave(w, ur, ctx) {
                waves.push(wv);
            }
            out.cands.push((StructureTag::C7, waves));
        }
    }

    if scanned && out.cands.is_empty() {
        out.reason = ReasonCode::EmptyBracket;
    }
    out
}

// ---------------------------------------------------------------------------
// top-level driver

/// Reflect the problem so that a_L <= a_R; returns the flag needed to
/// un-reflect solutions.
pub fn normalize(problem: &RiemannProblem) -> (RiemannProblem, bool) {
    if problem.left.a > problem.right.a {
        (problem.reflected(), true)
    } else {
        (*problem, false)
    }
}

fn same_solution(a: &Solution, b: &Solution, _ctx: &GravityContext) -> bool {
    if a.waves.len() != b.waves.len() {
        return false;
    }
    a.waves.iter().zip(&b.waves).all(|(x, y)| {
        x.kind == y.kind
            && x.family == y.family
            && state_dist(&x.left, &y.left) <= 1e-8
            && state_dist(&x.right, &y.right) <= 1e-8
    })
}

fn finish(
    tag: StructureTag,
    waves: Vec<Wave>,
    problem: &RiemannProblem,
    ctx: &GravityContext,
) -> Option<Solution> {
    let mut sol = Solution {
        waves,
        tag,
        left: problem.left,
        right: problem.right,
        diagnostics: Diagnostics::default(),
        validated: false,
    };
    let report = validate(&sol, problem, ctx);
    if !report.is_valid() {
        return None;
    }
    sol.diagnostics = report.diagnostics;
    sol.validated = true;
    Some(sol)
}

fn solve_flat(problem: &RiemannProblem, ctx: &GravityContext) -> Result<SolveReport> {
    let (ul, ur) = (problem.left, problem.right);
    let m = match intersect_w1_w2b(&ul, &ur, ctx) {
        Ok(m) => m,
        Err(Error::NoIntersection) => return Err(Error::VacuumData),
        Err(e) => return Err(e),
    };
    let mut waves = Vec::new();
    if let Some(w) = one_family_wave(Family::One, ul, m, ctx)? {
        waves.push(w);
    }
    if let Some(w) = one_family_wave(Family::Two, m, ur, ctx)? {
        waves.push(w);
    }
    let tag = if waves.is_empty() {
        StructureTag::Constant
    } else {
        StructureTag::C2
    };
    match finish(tag, waves, problem, ctx) {
        Some(sol) => Ok(SolveReport {
            solutions: vec![sol],
            empty_generators: Vec::new(),
        }),
        None => Ok(SolveReport {
            solutions: Vec::new(),
            empty_generators: vec![GeneratorOutcome {
                tag: StructureTag::C2,
                reason: ReasonCode::SpeedOrderViolation,
            }],
        }),
    }
}

/// Solve the Riemann problem: run every generator, validate, deduplicate,
/// and return all admissible solutions sorted by structure tag. An empty
/// solution list is a legitimate outcome.
pub fn solve(
    problem: &RiemannProblem,
    ctx: &GravityContext,
    opts: &SolverOptions,
) -> Result<SolveReport> {
    ctx.validate()?;
    problem.left.check_wet()?;
    problem.right.check_wet()?;
    for v in [
        problem.left.u,
        problem.left.a,
        problem.right.u,
        problem.right.a,
    ] {
        if !v.is_finite() {
            return Err(Error::InvalidContext(format!("non-finite datum {v}")));
        }
    }

    // flat bottom: the stationary family is skipped entirely
    if problem.left.a == problem.right.a {
        return solve_flat(problem, ctx);
    }

    let (p, reflected) = normalize(problem);
    let gens: Vec<(StructureTag, GenOut)> = vec![
        (StructureTag::C1, generate_c1(&p, ctx)),
        (StructureTag::C2, generate_c23(&p, ctx, opts)),
        (StructureTag::C4, generate_c4(&p, ctx)),
        (StructureTag::C5, generate_c5(&p, ctx)),
        (StructureTag::C6, generate_c6(&p, ctx, opts)),
        (StructureTag::C7, generate_c7(&p, ctx, opts)),
    ];

    let mut solutions: Vec<Solution> = Vec::new();
    let mut empty_generators = Vec::new();
    for (gen_tag, out) in gens {
        let had_cands = !out.cands.is_empty();
        let mut produced = false;
        for (tag, waves) in out.cands {
            if let Some(sol) = finish(tag, waves, &p, ctx) {
                if !solutions.iter().any(|s| same_solution(s, &sol, ctx)) {
                    solutions.push(sol);
                }
                produced = true;
            }
        }
        if !produced {
            empty_generators.push(GeneratorOutcome {
                tag: gen_tag,
                reason: if had_cands {
                    ReasonCode::SpeedOrderViolation
                } else {
                    out.reason
                },
            });
        }
    }

    solutions.sort_by(|a, b| a.tag.cmp(&b.tag));
    if reflected {
        for s in &mut solutions {
            *s = s.reflected();
        }
    }
    Ok(SolveReport {
        solutions,
        empty_generators,
    })
}

/// Solve a batch of problems; parallel over problems when the `parallel`
/// feature is enabled. Output order matches input order.
pub fn solve_many(
    problems: &[RiemannProblem],
    ctx: &GravityContext,
    opts: &SolverOptions,
) -> Vec<Result<SolveReport>> {
    parallel::map_slice(problems, |p| solve(p, ctx, opts))
}

/// Sequential batch solver with identical results, for comparison.
pub fn solve_many_seq(
    problems: &[RiemannProblem],
    ctx: &GravityContext,
    opts: &SolverOptions,
) -> Vec<Result<SolveReport>> {
    parallel::map_slice_seq(problems, |p| solve(p, ctx, opts))
}
