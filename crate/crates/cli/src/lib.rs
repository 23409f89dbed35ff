//! Driver behind the `abel-air` command: classify, solve and verify one
//! equation and describe the outcome as a [`ReportDoc`].

pub mod input;
pub mod report;

use abel_air::classify::Root;
use abel_air::solve::{pull_back, residual_verify, select_and_verify, solve_canonical, VerifyOptions};
use abel_air::{classify, re, AbelError, CanonicalClass, RationalAir, C64};

pub use report::ReportDoc;
use report::{Cplx, ErrorDoc, Num, PathDoc, PointDoc, RootDoc, SolutionDoc, VerificationDoc};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Classify,
    Solve,
}

/// A user-chosen verification path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathSpec {
    pub x0: f64,
    pub y0: C64,
    /// Defaults to one unit towards the origin.
    pub x1: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub mode: Mode,
    /// Drift threshold of the verdict.
    pub tol: f64,
    pub path: Option<PathSpec>,
    pub seed: Option<u64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { mode: Mode::Solve, tol: 1e-6, path: None, seed: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    InputError,
    VerificationFailed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::InputError => 1,
            Status::VerificationFailed => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: ReportDoc,
    pub status: Status,
}

fn error_doc(e: &AbelError) -> ErrorDoc {
    ErrorDoc { code: e.code().to_string(), message: e.to_string() }
}

/// Report for input that never reached classification.
pub fn input_error(e: &AbelError) -> Outcome {
    Outcome { report: ReportDoc { error: Some(error_doc(e)), ..Default::default() }, status: Status::InputError }
}

fn fail(mut report: ReportDoc, e: &AbelError, status: Status) -> Outcome {
    report.error = Some(error_doc(e));
    Outcome { report, status }
}

/// Errors caused by the equation or the requested path itself.
fn is_input_error(e: &AbelError) -> bool {
    matches!(
        e,
        AbelError::InvalidArgument(_)
            | AbelError::Syntax { .. }
            | AbelError::Shape(_)
            | AbelError::Separable
            | AbelError::SingularStart(_)
    )
}

fn default_end(x0: f64) -> f64 {
    if x0 <= 0.0 {
        x0 + 1.0
    } else {
        x0 - 1.0
    }
}

pub fn run(eq: &RationalAir, opts: &RunOptions) -> Outcome {
    let mut report = ReportDoc { equation: Some(eq.to_expr_string()), ..Default::default() };
    let cls = match classify(eq) {
        Ok(c) => c,
        Err(e) => {
            let status = if is_input_error(&e) { Status::InputError } else { Status::VerificationFailed };
            return fail(report, &e, status);
        }
    };
    report.class = Some(cls.class.tag().to_string());
    report.parameters = cls.class.params().into_iter().map(|(n, v)| (n.to_string(), Cplx::from(v))).collect();
    report.numerator_roots = cls
        .roots
        .roots
        .iter()
        .map(|&(r, k)| RootDoc {
            value: match r {
                Root::Finite(z) => Some(z.into()),
                Root::Infinity => None,
            },
            multiplicity: k,
        })
        .collect();
    report.transform_chain = cls.chain.describe();

    if cls.class == CanonicalClass::DegenerateLinear {
        report.note = Some(
            "the equation reduces to one whose inverse x(y) satisfies a first-order linear equation; \
             it is solvable by quadrature and no special-function solution is built"
                .into(),
        );
        return Outcome { report, status: Status::Ok };
    }
    if opts.mode == Mode::Classify {
        return Outcome { report, status: Status::Ok };
    }

    let canonical = match solve_canonical(&cls.class) {
        Ok(s) => s,
        Err(e) => return fail(report, &e, Status::VerificationFailed),
    };
    report.solution = Some(SolutionDoc { family: canonical.tag.clone(), description: canonical.description.clone() });
    report.warnings.extend(canonical.warnings.iter().cloned());
    let sol = pull_back(&canonical, &cls.chain);

    let (verification, selection) = match opts.path {
        Some(p) => {
            let x1 = p.x1.unwrap_or_else(|| default_end(p.x0));
            (residual_verify(eq, &sol, p.x0, p.y0, x1, 1e-12), "user")
        }
        None => {
            let vo = VerifyOptions { seed: opts.seed, ..Default::default() };
            (select_and_verify(eq, &sol, &vo), "automatic")
        }
    };
    let v = match verification {
        Ok(v) => v,
        Err(e) => {
            let status = if is_input_error(&e) { Status::InputError } else { Status::VerificationFailed };
            return fail(report, &e, status);
        }
    };
    if !v.trajectory.is_complete() {
        let (xe, _) = v.trajectory.last();
        let e = AbelError::NoPath(format!(
            "integration stopped at x = {xe} ({:?}) before reaching {}",
            v.trajectory.status, v.x1
        ));
        return fail(report, &e, Status::VerificationFailed);
    }
    if v.branch_crossing {
        report.warnings.push("the path crosses a branch cut of the level function".into());
    }
    let pass = v.drift < opts.tol;
    report.verification = Some(VerificationDoc {
        initial_point: PointDoc { x: Num(v.x0), y: v.y0.into() },
        path: PathDoc {
            from: Num(v.x0),
            to: Num(v.x1),
            selection,
            accepted_steps: v.trajectory.accepted,
            rejected_steps: v.trajectory.rejected,
        },
        level: v.level0.into(),
        drift: Num(v.drift),
        tolerance: Num(opts.tol),
        pass,
    });
    let status = if pass { Status::Ok } else { Status::VerificationFailed };
    Outcome { report, status }
}

/// `x0,y0` or `x0,re(y0),im(y0)`.
pub fn parse_point(text: &str) -> Result<(f64, C64), String> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [x, y] => Ok((x, re(y))),
        [x, yr, yi] => Ok((x, C64::new(yr, yi))),
        _ => Err(format!("expected x0,y0 or x0,re,im; got '{text}'")),
    }
}
