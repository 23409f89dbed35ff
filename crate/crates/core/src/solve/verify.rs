//! Level-constancy check of an implicit solution along a numerical trajectory.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::integrate::{integrate_ode, Trajectory, TrajectoryStatus};
use super::ImplicitSolution;
use crate::equation::RationalAir;
use crate::error::{AbelError, Result};
use crate::{c64, re, C64};

#[derive(Clone, Debug)]
pub struct Verification {
    pub x0: f64,
    pub y0: C64,
    pub x1: f64,
    pub level0: C64,
    /// `max_i |L_i - L_0| / (1 + |L_0|)`
    pub drift: f64,
    /// Smallest `|den| / (|num| + |den|)` of the level along the path.
    pub min_level_den: f64,
    /// Some principal-branch argument of the level crossed its cut.
    pub branch_crossing: bool,
    /// `max_i |y_i - y_0|`
    pub excursion: f64,
    pub trajectory: Trajectory,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Local error tolerance of the integrator.
    pub integration_tol: f64,
    pub path_length: f64,
    /// Smallest accepted `max |y_i - y_0|`; a path along which `y` hardly
    /// moves cannot tell a wrong level function from a right one.
    pub min_excursion: f64,
    /// Jitter of the candidate grid; `None` uses the plain grid.
    pub seed: Option<u64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { integration_tol: 1e-12, path_length: 1.0, min_excursion: 0.1, seed: None }
    }
}

fn crosses_cut(a: C64, b: C64) -> bool {
    if a.im == 0.0 && a.re < 0.0 || b.im == 0.0 && b.re < 0.0 {
        return true;
    }
    if (a.im > 0.0) == (b.im > 0.0) {
        return false;
    }
    // real-axis crossing point on the straight segment between a and b
    let t = a.im / (a.im - b.im);
    a.re + t * (b.re - a.re) < 0.0
}

fn normalized_den(n: C64, d: C64) -> f64 {
    let s = n.norm() + d.norm();
    if s == 0.0 {
        0.0
    } else {
        d.norm() / s
    }
}

/// Integrate `eq` from `(x0, y0)` to `x1` and measure how far the level of
/// `sol` moves along the way.
pub fn residual_verify(
    eq: &RationalAir,
    sol: &ImplicitSolution,
    x0: f64,
    y0: C64,
    x1: f64,
    tol: f64,
) -> Result<Verification> {
    let trajectory = integrate_ode(eq, x0, y0, x1, tol)?;
    let (n0, d0) = sol.level_parts(re(x0), y0)?;
    let level0 = sol.level(re(x0), y0)?;
    let mut drift = 0.0f64;
    let mut min_level_den = normalized_den(n0, d0);
    let mut branch_crossing = false;
    let mut prev_cuts = sol.cut_args(re(x0), y0);
    let mut excursion = 0.0f64;
    for &(x, y) in &trajectory.points[1..] {
        excursion = excursion.max((y - y0).norm());
        let (n, d) = sol.level_parts(re(x), y)?;
        min_level_den = min_level_den.min(normalized_den(n, d));
        let l = sol.level(re(x), y)?;
        drift = drift.max((l - level0).norm() / (1.0 + level0.norm()));
        let cuts = sol.cut_args(re(x), y);
        if cuts.len() == prev_cuts.len() && prev_cuts.iter().zip(&cuts).any(|(a, b)| crosses_cut(*a, *b)) {
            branch_crossing = true;
        }
        prev_cuts = cuts;
    }
    Ok(Verification { x0, y0, x1, level0, drift, min_level_den, branch_crossing, excursion, trajectory })
}

/// Candidate initial points: a 20×20 grid over `[-1, 1]²` in `(x, Re y)` with
/// `Im y = 0.1`, optionally jittered within a cell, sorted by decreasing
/// denominator magnitude.
pub fn candidate_points(eq: &RationalAir, seed: Option<u64>) -> Vec<(f64, C64)> {
    let n = 20;
    let cell = 2.0 / (n - 1) as f64;
    let mut rng = seed.map(StdRng::seed_from_u64);
    let mut pts = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut x = -1.0 + cell * i as f64;
            let mut yr = -1.0 + cell * j as f64;
            if let Some(r) = rng.as_mut() {
                x = (x + r.gen_range(-0.5..0.5) * cell).clamp(-1.0, 1.0);
                yr = (yr + r.gen_range(-0.5..0.5) * cell).clamp(-1.0, 1.0);
            }
            pts.push((x, c64(yr, 0.1)));
        }
    }
    let mut scored: Vec<(f64, (f64, C64))> =
        pts.into_iter().map(|(x, y)| (eq.denominator(re(x), y).norm(), (x, y))).collect();
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    scored.into_iter().map(|(_, p)| p).collect()
}

/// Pick the first candidate point (largest denominator first) whose path of
/// length `opts.path_length` stays regular for both the equation and the
/// level function, and return its verification.
pub fn select_and_verify(eq: &RationalAir, sol: &ImplicitSolution, opts: &VerifyOptions) -> Result<Verification> {
    let mut last_reason = String::from("no candidate with |denominator| > 0.1");
    for (x0, y0) in candidate_points(eq, opts.seed) {
        if eq.denominator(re(x0), y0).norm() <= 0.1 {
            break;
        }
        match sol.level_parts(re(x0), y0) {
            Ok((n, d)) if normalized_den(n, d) > 1e-6 => {}
            Ok(_) => continue,
            Err(e) => {
                last_reason = e.to_string();
                continue;
            }
        }
        let dirs = if x0 <= 0.0 { [1.0, -1.0] } else { [-1.0, 1.0] };
        for dir in dirs {
            let x1 = x0 + dir * opts.path_length;
            match residual_verify(eq, sol, x0, y0, x1, opts.integration_tol) {
                Ok(v)
                    if v.trajectory.status == TrajectoryStatus::Complete
                        && !v.branch_crossing
                        && v.min_level_den > 1e-6
                        && v.excursion >= opts.min_excursion =>
                {
                    return Ok(v)
                }
                Ok(v) => {
                    last_reason = format!(
                        "path from ({x0}, {y0}): status {:?}, branch crossing {}, excursion {:.3e}",
                        v.trajectory.status, v.branch_crossing, v.excursion
                    )
                }
                Err(e) => last_reason = e.to_string(),
            }
        }
    }
    Err(AbelError::NoPath(last_reason))
}
