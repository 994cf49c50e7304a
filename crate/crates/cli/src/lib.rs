//! Problem-file ingestion, solution/profile/curve serialization, and the
//! command implementations behind the `swe-riemann` binary.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use swe_riemann_core::{
    sample_profile, solve, stationary, validate, wave_curves, Error as CoreError, GravityContext,
    InterfaceSide, ProfileRequest, RiemannProblem, SolveReport, Solution, SolverOptions, State,
};

/// Failure modes of the command layer, mapped to process exit codes:
/// 0 = at least one solution, 2 = no solution, 3 = input error.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Parse(String),
    Input(String),
    NoSolution(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NoSolution(_) => 2,
            _ => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::NoSolution(m) => write!(f, "no solution: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

fn core_to_cli(e: CoreError) -> CliError {
    match e {
        CoreError::VacuumData => CliError::NoSolution(e.to_string()),
        other => CliError::Input(other.to_string()),
    }
}

// ---------------------------------------------------------------------------
// problem files

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemOptions {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_abs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_rel: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileRequest>,
}

/// On-disk JSON problem description.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    pub left: State,
    pub right: State,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub options: Option<ProblemOptions>,
}

impl ProblemFile {
    /// Schema validation with field names in the message.
    pub fn validate(&self) -> Result<(), CliError> {
        for (name, st) in [("left", &self.left), ("right", &self.right)] {
            if !(st.h > 0.0) || !st.h.is_finite() {
                return Err(CliError::Input(format!(
                    "{name}.h = {} must be a positive finite depth",
                    st.h
                )));
            }
            for (field, v) in [("u", st.u), ("a", st.a)] {
                if !v.is_finite() {
                    return Err(CliError::Input(format!("{name}.{field} = {v} must be finite")));
                }
            }
        }
        if let Some(g) = self.g {
            if !(g > 0.0) {
                return Err(CliError::Input(format!("g = {g} must be > 0")));
            }
        }
        if let Some(o) = &self.options {
            for (field, v) in [("tol_abs", o.tol_abs), ("tol_rel", o.tol_rel)] {
                if let Some(v) = v {
                    if !(v > 0.0) {
                        return Err(CliError::Input(format!(
                            "options.{field} = {v} must be > 0"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Flag-level overrides (file values are the defaults).
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub g: Option<f64>,
    pub tol_abs: Option<f64>,
    pub tol_rel: Option<f64>,
    pub grid: Option<usize>,
}

pub struct LoadedProblem {
    pub problem: RiemannProblem,
    pub ctx: GravityContext,
    pub opts: SolverOptions,
    pub profile: Option<ProfileRequest>,
}

pub fn load_problem(path: &Path, over: &Overrides) -> Result<LoadedProblem, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let file: ProblemFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    file.validate()?;
    let mut ctx = GravityContext::default();
    let o = file.options.unwrap_or_default();
    ctx.g = over.g.or(file.g).unwrap_or(ctx.g);
    ctx.tol_abs = over.tol_abs.or(o.tol_abs).unwrap_or(ctx.tol_abs);
    ctx.tol_rel = over.tol_rel.or(o.tol_rel).unwrap_or(ctx.tol_rel);
    ctx.max_iter = o.max_iter.unwrap_or(ctx.max_iter);
    ctx.validate().map_err(core_to_cli)?;
    let mut opts = SolverOptions::default();
    opts.scan_grid = over.grid.or(o.grid).unwrap_or(opts.scan_grid);
    Ok(LoadedProblem {
        problem: RiemannProblem::new(file.left, file.right),
        ctx,
        opts,
        profile: o.profile,
    })
}

// ---------------------------------------------------------------------------
// solve

/// The document emitted by `solve` and consumed by `validate`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub g: f64,
    pub left: State,
    pub right: State,
    #[serde(flatten)]
    pub report: SolveReport,
}

pub fn cmd_solve(path: &Path, over: &Overrides) -> Result<(String, usize), CliError> {
    let lp = load_problem(path, over)?;
    let report = match solve(&lp.problem, &lp.ctx, &lp.opts) {
        Ok(r) => r,
        Err(CoreError::VacuumData) => SolveReport {
            solutions: Vec::new(),
            empty_generators: Vec::new(),
        },
        Err(e) => return Err(core_to_cli(e)),
    };
    let n = report.solutions.len();
    let doc = SolutionDocument {
        g: lp.ctx.g,
        left: lp.problem.left,
        right: lp.problem.right,
        report,
    };
    let json = serde_json::to_string_pretty(&doc)
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok((json, n))
}

// ---------------------------------------------------------------------------
// sample

fn csv_profile(rows: &[swe_riemann_core::ProfileRow]) -> String {
    let mut out = String::from("x,h,u,a\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.x, r.h, r.u, r.a);
    }
    out
}

fn tag_name(sol: &Solution) -> &'static str {
    use swe_riemann_core::StructureTag::*;
    match sol.tag {
        Constant => "constant",
        C1 => "C1",
        C2 => "C2",
        C3 => "C3",
        C4 => "C4",
        C5 => "C5",
        C6 => "C6",
        C7 => "C7",
    }
}

/// Solve, then write one CSV profile per solution, suffixed by structure
/// tag. Returns the written paths in order.
pub fn cmd_sample(
    path: &Path,
    req: &ProfileRequest,
    out_dir: &Path,
    over: &Overrides,
) -> Result<Vec<PathBuf>, CliError> {
    req.validate().map_err(core_to_cli)?;
    let lp = load_problem(path, over)?;
    let report = solve(&lp.problem, &lp.ctx, &lp.opts).map_err(core_to_cli)?;
    if report.solutions.is_empty() {
        return Err(CliError::NoSolution(format!(
            "{}: solver returned no validated solution",
            path.display()
        )));
    }
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "profile".into());
    let mut written = Vec::new();
    let mut seen: Vec<String> = Vec::new();
    for sol in &report.solutions {
        let rows = sample_profile(sol, req, &lp.ctx).map_err(core_to_cli)?;
        let mut name = format!("{stem}_{}", tag_name(sol));
        let dups = seen.iter().filter(|s| **s == name).count();
        seen.push(name.clone());
        if dups > 0 {
            name = format!("{name}_{}", dups + 1);
        }
        let out_path = out_dir.join(format!("{name}.csv"));
        std::fs::write(&out_path, csv_profile(&rows))
            .map_err(|e| CliError::Io(format!("{}: {e}", out_path.display())))?;
        written.push(out_path);
    }
    Ok(written)
}

// ---------------------------------------------------------------------------
// curves

/// Tabulate the forward/backward wave curves, the stationary curve and the
/// critical loci through the file's left state, as one CSV.
pub fn cmd_curves(path: &Path, points: usize, over: &Overrides) -> Result<String, CliError> {
    let lp = load_problem(path, over)?;
    let anchor = lp.problem.left;
    let ctx = &lp.ctx;
    let n = points.max(2);
    let (h_lo, h_hi) = (anchor.h / 100.0, anchor.h * 100.0);
    let ratio = (h_hi / h_lo).ln();
    let grid: Vec<f64> = (0..n)
        .map(|i| h_lo * (ratio * i as f64 / (n - 1) as f64).exp())
        .collect();

    let mut out = String::from("curve,h,u,a\n");
    use wave_curves::{CurveSpec, Family};
    let specs = [
        ("W1", CurveSpec::forward(Family::One, anchor)),
        ("W2", CurveSpec::forward(Family::Two, anchor)),
        ("W1B", CurveSpec::backward(Family::One, anchor)),
        ("W2B", CurveSpec::backward(Family::Two, anchor)),
    ];
    for (name, spec) in specs {
        for &h in &grid {
            if let Ok(u) = wave_curves::wave_curve_u(&spec, h, ctx) {
                let _ = writeln!(out, "{name},{h},{u},{}", anchor.a);
            }
        }
    }
    for &h in &grid {
        if anchor.u.abs() <= ctx.tol_abs {
            let a = anchor.a + anchor.h - h;
            let _ = writeln!(out, "W3,{h},0,{a}");
        } else if let Ok(a) = stationary::stationary_curve_a(&anchor, h, ctx) {
            let u = anchor.discharge() / h;
            let _ = writeln!(out, "W3,{h},{u},{a}");
        }
    }
    for &h in &grid {
        let c = ctx.celerity(h);
        let _ = writeln!(out, "C+,{h},{c},{}", anchor.a);
    }
    for &h in &grid {
        let c = ctx.celerity(h);
        let _ = writeln!(out, "C-,{h},{},{}", -c, anchor.a);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// validate

#[derive(Clone, Debug, Serialize)]
pub struct ValidateSummary {
    pub solutions: usize,
    pub valid: usize,
    pub reports: Vec<swe_riemann_core::ValidationReport>,
}

pub fn cmd_validate(path: &Path) -> Result<ValidateSummary, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let doc: SolutionDocument = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let ctx = GravityContext {
        g: doc.g,
        ..GravityContext::default()
    };
    ctx.validate().map_err(core_to_cli)?;
    let problem = RiemannProblem::new(doc.left, doc.right);
    let reports: Vec<_> = doc
        .report
        .solutions
        .iter()
        .map(|s| validate(s, &problem, &ctx))
        .collect();
    let valid = reports.iter().filter(|r| r.is_valid()).count();
    Ok(ValidateSummary {
        solutions: reports.len(),
        valid,
        reports,
    })
}

// ---------------------------------------------------------------------------
// batch

#[derive(Clone, Debug, Serialize)]
pub struct BatchRow {
    pub file: String,
    pub status: String,
    pub solutions: Option<usize>,
    pub max_rh_residual: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchSummary {
    pub rows: Vec<BatchRow>,
    /// Index k counts problems with exactly k solutions (last bucket: 3+).
    pub count_by_solutions: [usize; 4],
}

impl BatchSummary {
    pub fn any_solution(&self) -> bool {
        self.rows.iter().any(|r| r.solutions.unwrap_or(0) > 0)
    }

    pub fn render(&self) -> String {
        let mut out = String::from("file,status,solutions,max_rh_residual\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.file,
                r.status,
                r.solutions.map_or(String::new(), |n| n.to_string()),
                r.max_rh_residual.map_or(String::new(), |v| v.to_string()),
            );
        }
        let c = self.count_by_solutions;
        let _ = writeln!(
            out,
            "aggregate: 0-solution={} 1-solution={} 2-solution={} 3+-solution={}",
            c[0], c[1], c[2], c[3]
        );
        out
    }
}

/// Solve every `.json` problem file in a directory. Per-file failures are
/// collected as rows; the summary is ordered by file name.
pub fn cmd_batch(dir: &Path, over: &Overrides) -> Result<BatchSummary, CliError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map_or(false, |x| x == "json"))
        .collect();
    paths.sort();

    let mut rows = Vec::new();
    let mut counts = [0usize; 4];
    for p in &paths {
        let file = p
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        match load_problem(p, over).and_then(|lp| {
            match solve(&lp.problem, &lp.ctx, &lp.opts) {
                Ok(r) => Ok(r),
                Err(CoreError::VacuumData) => Ok(SolveReport {
                    solutions: Vec::new(),
                    empty_generators: Vec::new(),
                }),
                Err(e) => Err(core_to_cli(e)),
            }
        }) {
            Ok(report) => {
                let n = report.solutions.len();
                counts[n.min(3)] += 1;
                let max_rh = report
                    .solutions
                    .iter()
                    .map(|s| s.diagnostics.max_rh_residual)
                    .fold(None::<f64>, |acc, v| Some(acc.map_or(v, |a| a.max(v))));
                rows.push(BatchRow {
                    file,
                    status: "ok".into(),
                    solutions: Some(n),
                    max_rh_residual: max_rh,
                });
            }
            Err(e) => rows.push(BatchRow {
                file,
                status: match e {
                    CliError::Parse(_) => "parse_error".into(),
                    CliError::Input(_) => "input_error".into(),
                    CliError::Io(_) => "io_error".into(),
                    CliError::NoSolution(_) => "no_solution".into(),
                },
                solutions: None,
                max_rh_residual: None,
            }),
        }
    }
    Ok(BatchSummary {
        rows,
        count_by_solutions: counts,
    })
}

/// Parse an interface-side flag value.
pub fn parse_side(s: &str) -> Result<InterfaceSide, String> {
    match s {
        "left" => Ok(InterfaceSide::Left),
        "right" => Ok(InterfaceSide::Right),
        other => Err(format!("expected 'left' or 'right', got '{other}'")),
    }
}
