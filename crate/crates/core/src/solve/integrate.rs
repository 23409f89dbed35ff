//! Adaptive Dormand–Prince 5(4) integration along a real `x` segment with
//! complex `y`.

use crate::equation::RationalAir;
use crate::error::{AbelError, Result};
use crate::{re, C64};

/// Denominator magnitude below which the right-hand side counts as singular.
pub const SINGULAR_DENOMINATOR: f64 = 1e-8;

const MAX_STEPS: usize = 200_000;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrajectoryStatus {
    Complete,
    /// Stopped where the denominator approached zero.
    Singular,
    StepLimit,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    /// Accepted points `(x, y)`, starting with the initial point.
    pub points: Vec<(f64, C64)>,
    pub status: TrajectoryStatus,
    pub accepted: usize,
    pub rejected: usize,
}

impl Trajectory {
    pub fn is_complete(&self) -> bool {
        self.status == TrajectoryStatus::Complete
    }

    pub fn last(&self) -> (f64, C64) {
        *self.points.last().unwrap()
    }
}

fn rhs(eq: &RationalAir, x: f64, y: C64) -> Option<C64> {
    let d = eq.denominator(re(x), y);
    if d.norm() < SINGULAR_DENOMINATOR || !y.re.is_finite() || !y.im.is_finite() {
        return None;
    }
    Some(eq.numerator(y) / d)
}

/// Integrate from `(x0, y0)` to `x1` along the real axis with local error
/// tolerance `tol` (absolute and relative).
pub fn integrate_ode(eq: &RationalAir, x0: f64, y0: C64, x1: f64, tol: f64) -> Result<Trajectory> {
    if tol.is_nan() || tol <= 0.0 || !x0.is_finite() || !x1.is_finite() {
        return Err(AbelError::InvalidArgument("integration needs finite endpoints and tol > 0".into()));
    }
    let d0 = eq.denominator(re(x0), y0).norm();
    if d0 < SINGULAR_DENOMINATOR {
        return Err(AbelError::SingularStart(d0));
    }
    let span = x1 - x0;
    let dir = span.signum();
    let mut traj = Trajectory { points: vec![(x0, y0)], status: TrajectoryStatus::Complete, accepted: 0, rejected: 0 };
    if span == 0.0 {
        return Ok(traj);
    }
    let hmin = 1e-12 * (1.0 + x0.abs().max(x1.abs()));
    let mut x = x0;
    let mut y = y0;
    let mut h = span.abs() / 64.0;

    while (x1 - x) * dir > 0.0 {
        if traj.accepted + traj.rejected >= MAX_STEPS {
            traj.status = TrajectoryStatus::StepLimit;
            return Ok(traj);
        }
        let last = h >= (x1 - x).abs();
        let step = if last { x1 - x } else { h * dir };

        let mut k = [re(0.0); 7];
        let mut ok = true;
        for i in 0..7 {
            let mut yi = y;
            for j in 0..i {
                yi += step * A[i][j] * k[j];
            }
            match rhs(eq, x + C[i] * step, yi) {
                Some(v) => k[i] = v,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            traj.rejected += 1;
            h = step.abs() / 4.0;
            if h < hmin {
                traj.status = TrajectoryStatus::Singular;
                return Ok(traj);
            }
            continue;
        }
        let mut y5 = y;
        let mut errv = re(0.0);
        for i in 0..7 {
            y5 += step * B5[i] * k[i];
            errv += step * (B5[i] - B4[i]) * k[i];
        }
        let sc = tol * (1.0 + y.norm().max(y5.norm()));
        let err = errv.norm() / sc;
        if err <= 1.0 {
            x = if last { x1 } else { x + step };
            y = y5;
            traj.points.push((x, y));
            traj.accepted += 1;
        } else {
            traj.rejected += 1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = step.abs() * factor;
        if h < hmin {
            traj.status = TrajectoryStatus::Singular;
            return Ok(traj);
        }
    }
    Ok(traj)
}
