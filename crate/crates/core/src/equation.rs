//! The rational inverse-Riccati equation, Möbius maps acting on it, and the
//! record of substitutions applied during reduction.
//!
//! Substitution convention: a map `m` "applied to x" means the old variable is
//! replaced by `m` of the new one, `x = m(X)`. Applying `m2` after `m1`
//! therefore equals applying `m1 ∘ m2` once.

use std::fmt;

use crate::error::{AbelError, Result};
use crate::poly;
use crate::{re, C64, ZERO_TOL};

const ZERO: C64 = C64::new(0.0, 0.0);

fn all_finite(v: &[C64]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `y' = (a3 y³ + a2 y² + a1 y + a0) / ((s0 + s1 x + s2 x²) y + r0 + r1 x + r2 x²)`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RationalAir {
    /// `a0..a3`
    pub num: [C64; 4],
    /// `s0..s2`, coefficients of `y·x^k`
    pub den_y: [C64; 3],
    /// `r0..r2`, coefficients of `x^k`
    pub den_c: [C64; 3],
}

impl RationalAir {
    pub fn new(num: [C64; 4], den_y: [C64; 3], den_c: [C64; 3]) -> Result<Self> {
        let eq = RationalAir { num, den_y, den_c };
        eq.validate()?;
        Ok(eq)
    }

    /// Build from the ten coefficients in the order `a0..a3, s0..s2, r0..r2`.
    pub fn from_coeffs(c: [C64; 10]) -> Result<Self> {
        Self::new([c[0], c[1], c[2], c[3]], [c[4], c[5], c[6]], [c[7], c[8], c[9]])
    }

    /// Real-coefficient convenience constructor.
    pub fn from_real(num: [f64; 4], den_y: [f64; 3], den_c: [f64; 3]) -> Result<Self> {
        Self::new(num.map(re), den_y.map(re), den_c.map(re))
    }

    pub fn validate(&self) -> Result<()> {
        if !all_finite(&self.coeffs()) {
            return Err(AbelError::NonFinite("equation coefficients"));
        }
        if self.num.iter().all(|z| z.norm() == 0.0) {
            return Err(AbelError::InvalidArgument("numerator is identically zero".into()));
        }
        if self.den_y.iter().chain(&self.den_c).all(|z| z.norm() == 0.0) {
            return Err(AbelError::InvalidArgument("denominator is identically zero".into()));
        }
        Ok(())
    }

    pub fn coeffs(&self) -> [C64; 10] {
        let mut out = [ZERO; 10];
        out[..4].copy_from_slice(&self.num);
        out[4..7].copy_from_slice(&self.den_y);
        out[7..].copy_from_slice(&self.den_c);
        out
    }

    /// Largest coefficient magnitude.
    pub fn scale(&self) -> f64 {
        self.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Multiply every coefficient by `k`; the equation itself is unchanged.
    pub fn rescaled(&self, k: C64) -> Self {
        RationalAir { num: self.num.map(|z| z * k), den_y: self.den_y.map(|z| z * k), den_c: self.den_c.map(|z| z * k) }
    }

    /// Divide by the largest-magnitude coefficient (first one on ties).
    pub fn normalized(&self) -> Self {
        let c = self.coeffs();
        let mut best = c[0];
        for &z in &c[1..] {
            if z.norm() > best.norm() {
                best = z;
            }
        }
        self.rescaled(best.inv())
    }

    /// Replace coefficients that are negligible relative to the largest one by exact zeros.
    pub fn snapped(&self) -> Self {
        let tol = ZERO_TOL * self.scale();
        let snap = |z: C64| if z.norm() <= tol { ZERO } else { z };
        RationalAir { num: self.num.map(snap), den_y: self.den_y.map(snap), den_c: self.den_c.map(snap) }
    }

    pub fn numerator(&self, y: C64) -> C64 {
        poly::eval(&self.num, y)
    }

    pub fn den_y_at(&self, x: C64) -> C64 {
        poly::eval(&self.den_y, x)
    }

    pub fn den_c_at(&self, x: C64) -> C64 {
        poly::eval(&self.den_c, x)
    }

    pub fn denominator(&self, x: C64, y: C64) -> C64 {
        self.den_y_at(x) * y + self.den_c_at(x)
    }

    /// Right-hand side `y'(x, y)`; `None` where the denominator vanishes.
    pub fn rhs(&self, x: C64, y: C64) -> Option<C64> {
        let d = self.denominator(x, y);
        if d.norm() == 0.0 {
            None
        } else {
            Some(self.numerator(y) / d)
        }
    }

    /// Relative distance between the two coefficient vectors modulo a common
    /// nonzero factor: `min_λ |u - λ v| / |u|`.
    pub fn projective_distance(&self, other: &RationalAir) -> f64 {
        let u = self.coeffs();
        let v = other.coeffs();
        let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let uu: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        if vv == 0.0 || uu == 0.0 {
            return f64::INFINITY;
        }
        let vu: C64 = v.iter().zip(&u).map(|(a, b)| a.conj() * b).sum();
        let lambda = vu / vv;
        let res: f64 = u.iter().zip(&v).map(|(a, b)| (a - lambda * b).norm_sqr()).sum();
        (res / uu).sqrt()
    }

    /// Maximum relative coefficient difference after normalizing both sides.
    pub fn normalized_distance(&self, other: &RationalAir) -> f64 {
        let a = self.normalized().coeffs();
        let b = other.normalized().coeffs();
        a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    /// Render as `y' = (...)/(...)` with round-trippable literals.
    pub fn to_expr_string(&self) -> String {
        let num = render_poly(&[(self.num[3], "y^3"), (self.num[2], "y^2"), (self.num[1], "y"), (self.num[0], "")]);
        let den = render_poly(&[
            (self.den_y[2], "x^2*y"),
            (self.den_y[1], "x*y"),
            (self.den_y[0], "y"),
            (self.den_c[2], "x^2"),
            (self.den_c[1], "x"),
            (self.den_c[0], ""),
        ]);
        let wrap = |(s, n): (String, usize)| if n > 1 || s.starts_with('-') { format!("({s})") } else { s };
        format!("y' = {}/{}", wrap(num), wrap(den))
    }
}

fn render_real(v: f64) -> String {
    let s = format!("{:?}", v + 0.0);
    match s.strip_suffix(".0") {
        Some(t) => t.to_string(),
        None => s,
    }
}

/// Compact text form of a scalar: `2`, `-0.5*i`, `(1 - 2*i)`.
pub fn render_scalar(z: C64) -> String {
    if z.im == 0.0 {
        render_real(z.re)
    } else if z.re == 0.0 {
        format!("{}*i", render_real(z.im))
    } else {
        let sign = if z.im < 0.0 { "-" } else { "+" };
        format!("({} {sign} {}*i)", render_real(z.re), render_real(z.im.abs()))
    }
}

/// Sign and magnitude of one term; `None` sign for complex coefficients.
fn render_term(c: C64, monomial: &str) -> (bool, String) {
    if c.im == 0.0 || c.re == 0.0 {
        let (neg, mag, unit) = if c.im == 0.0 { (c.re < 0.0, c.re.abs(), "") } else { (c.im < 0.0, c.im.abs(), "i") };
        let body = match (mag == 1.0, unit.is_empty(), monomial.is_empty()) {
            (true, true, true) => "1".to_string(),
            (true, true, false) => monomial.to_string(),
            (true, false, true) => "i".to_string(),
            (true, false, false) => format!("i*{monomial}"),
            (false, true, true) => render_real(mag),
            (false, true, false) => format!("{}*{monomial}", render_real(mag)),
            (false, false, true) => format!("{}*i", render_real(mag)),
            (false, false, false) => format!("{}*i*{monomial}", render_real(mag)),
        };
        return (neg, body);
    }
    let sign = if c.im < 0.0 { "-" } else { "+" };
    let z = format!("({} {sign} {}*i)", render_real(c.re), render_real(c.im.abs()));
    (false, if monomial.is_empty() { z } else { format!("{z}*{monomial}") })
}

fn render_poly(terms: &[(C64, &str)]) -> (String, usize) {
    let mut out = String::new();
    let mut n = 0;
    for &(c, m) in terms.iter().filter(|(c, _)| c.norm() != 0.0) {
        let (neg, body) = render_term(c, m);
        match (n == 0, neg) {
            (true, false) => out.push_str(&body),
            (true, true) => out.push_str(&format!("-{body}")),
            (false, false) => out.push_str(&format!(" + {body}")),
            (false, true) => out.push_str(&format!(" - {body}")),
        }
        n += 1;
    }
    if n == 0 {
        out.push('0');
    }
    (out, n)
}

impl fmt::Display for RationalAir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

/// Linear fractional map `v ↦ (p + q v) / (r + s v)`, `p s - r q ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mobius {
    pub p: C64,
    pub q: C64,
    pub r: C64,
    pub s: C64,
}

impl Mobius {
    pub fn new(p: C64, q: C64, r: C64, s: C64) -> Result<Self> {
        let m = Mobius { p, q, r, s };
        if !all_finite(&[p, q, r, s]) {
            return Err(AbelError::NonFinite("Möbius coefficients"));
        }
        let mag = [p, q, r, s].iter().map(|z| z.norm()).fold(0.0, f64::max);
        let det = m.det().norm();
        if mag == 0.0 || det <= 1e-12 * mag * mag {
            return Err(AbelError::DegenerateMobius { det });
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Mobius { p: ZERO, q: re(1.0), r: re(1.0), s: ZERO }
    }

    /// `v ↦ k v`
    pub fn scale(k: C64) -> Result<Self> {
        Self::new(ZERO, k, re(1.0), ZERO)
    }

    /// `v ↦ v + b`
    pub fn shift(b: C64) -> Result<Self> {
        Self::new(b, re(1.0), re(1.0), ZERO)
    }

    /// `v ↦ k v + b`
    pub fn affine(k: C64, b: C64) -> Result<Self> {
        Self::new(b, k, re(1.0), ZERO)
    }

    /// `p s - r q`
    pub fn det(&self) -> C64 {
        self.p * self.s - self.r * self.q
    }

    pub fn inverse(&self) -> Self {
        Mobius { p: -self.p, q: self.r, r: self.q, s: -self.s }
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &Mobius) -> Self {
        // matrix form [[q, p], [s, r]]
        Mobius {
            q: self.q * inner.q + self.p * inner.s,
            p: self.q * inner.p + self.p * inner.r,
            s: self.s * inner.q + self.r * inner.s,
            r: self.s * inner.p + self.r * inner.r,
        }
    }

    /// Evaluate at a finite point; `None` at the pole.
    pub fn apply(&self, v: C64) -> Option<C64> {
        let d = self.r + self.s * v;
        if d.norm() == 0.0 {
            None
        } else {
            Some((self.p + self.q * v) / d)
        }
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        let mag = [self.p, self.q, self.r, self.s].iter().map(|z| z.norm()).fold(0.0, f64::max);
        if self.q.norm() == 0.0 {
            return false;
        }
        let k = self.r / self.q;
        (self.r - self.q).norm() <= tol * mag
            && self.p.norm() <= tol * mag
            && self.s.norm() <= tol * mag
            && (k - re(1.0)).norm() <= tol
    }

    /// Maximum coefficient difference after scaling so that the
    /// largest-magnitude entry of `self` matches.
    pub fn distance(&self, other: &Mobius) -> f64 {
        let a = [self.p, self.q, self.r, self.s];
        let b = [other.p, other.q, other.r, other.s];
        let (i, _) =
            a.iter().enumerate().fold((0, 0.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
        if b[i].norm() == 0.0 {
            return f64::INFINITY;
        }
        let ka = a[i].inv();
        let kb = b[i].inv();
        a.iter().zip(&b).map(|(x, y)| (x * ka - y * kb).norm()).fold(0.0, f64::max)
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "v -> ({} + {}*v)/({} + {}*v)",
            render_scalar(self.p),
            render_scalar(self.q),
            render_scalar(self.r),
            render_scalar(self.s)
        )
    }
}

/// Substitute `y = m(Y)` and return the (normalized) equation satisfied by `Y(x)`.
pub fn apply_mobius_y(eq: &RationalAir, m: &Mobius) -> Result<RationalAir> {
    let m = Mobius::new(m.p, m.q, m.r, m.s)?;
    let Mobius { p, q, r, s } = m;
    let num = poly::homogeneous_substitute(&eq.num, 3, p, q, r, s);
    let k = q * r - p * s;
    let mut den_y = [ZERO; 3];
    let mut den_c = [ZERO; 3];
    for i in 0..3 {
        den_y[i] = k * (q * eq.den_y[i] + s * eq.den_c[i]);
        den_c[i] = k * (p * eq.den_y[i] + r * eq.den_c[i]);
    }
    let out = RationalAir { num: [num[0], num[1], num[2], num[3]], den_y, den_c };
    out.validate()?;
    Ok(out.normalized())
}

/// Substitute `x = m(X)` and return the (normalized) equation satisfied by `y(X)`.
pub fn apply_mobius_x(eq: &RationalAir, m: &Mobius) -> Result<RationalAir> {
    let m = Mobius::new(m.p, m.q, m.r, m.s)?;
    let Mobius { p, q, r, s } = m;
    let k = q * r - p * s;
    let sy = poly::homogeneous_substitute(&eq.den_y, 2, p, q, r, s);
    let sc = poly::homogeneous_substitute(&eq.den_c, 2, p, q, r, s);
    let out = RationalAir { num: eq.num.map(|a| a * k), den_y: [sy[0], sy[1], sy[2]], den_c: [sc[0], sc[1], sc[2]] };
    out.validate()?;
    Ok(out.normalized())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// One substitution of the reduction; every variant is invertible.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TransformStep {
    MobiusOnX(Mobius),
    MobiusOnY(Mobius),
    /// `x = k X`
    ScaleX(C64),
    /// `y = k Y`
    ScaleY(C64),
    /// `x = X + b`
    ShiftX(C64),
    /// `y = Y + b`
    ShiftY(C64),
}

impl TransformStep {
    pub fn axis(&self) -> Axis {
        match self {
            TransformStep::MobiusOnX(_) | TransformStep::ScaleX(_) | TransformStep::ShiftX(_) => Axis::X,
            _ => Axis::Y,
        }
    }

    /// The substitution as a Möbius map (old variable as a function of the new one).
    pub fn mobius(&self) -> Mobius {
        let one = re(1.0);
        match *self {
            TransformStep::MobiusOnX(m) | TransformStep::MobiusOnY(m) => m,
            TransformStep::ScaleX(k) | TransformStep::ScaleY(k) => Mobius { p: ZERO, q: k, r: one, s: ZERO },
            TransformStep::ShiftX(b) | TransformStep::ShiftY(b) => Mobius { p: b, q: one, r: one, s: ZERO },
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(match *self {
            TransformStep::MobiusOnX(m) => TransformStep::MobiusOnX(m.inverse()),
            TransformStep::MobiusOnY(m) => TransformStep::MobiusOnY(m.inverse()),
            TransformStep::ScaleX(k) | TransformStep::ScaleY(k) if k.norm() == 0.0 => {
                return Err(AbelError::Internal("zero scale factor in transform step".into()))
            }
            TransformStep::ScaleX(k) => TransformStep::ScaleX(k.inv()),
            TransformStep::ScaleY(k) => TransformStep::ScaleY(k.inv()),
            TransformStep::ShiftX(b) => TransformStep::ShiftX(-b),
            TransformStep::ShiftY(b) => TransformStep::ShiftY(-b),
        })
    }

    pub fn apply(&self, eq: &RationalAir) -> Result<RationalAir> {
        match self.axis() {
            Axis::X => apply_mobius_x(eq, &self.mobius()),
            Axis::Y => apply_mobius_y(eq, &self.mobius()),
        }
    }

    /// Map a point given in the old coordinates to the new coordinates.
    pub fn forward_point(&self, x: C64, y: C64) -> Option<(C64, C64)> {
        let inv = self.mobius().inverse();
        match self.axis() {
            Axis::X => inv.apply(x).map(|nx| (nx, y)),
            Axis::Y => inv.apply(y).map(|ny| (x, ny)),
        }
    }

    /// Map a point given in the new coordinates back to the old ones.
    pub fn backward_point(&self, x: C64, y: C64) -> Option<(C64, C64)> {
        let m = self.mobius();
        match self.axis() {
            Axis::X => m.apply(x).map(|ox| (ox, y)),
            Axis::Y => m.apply(y).map(|oy| (x, oy)),
        }
    }

    /// Entry-wise distance used by the invertibility checks.
    pub fn distance(&self, other: &TransformStep) -> f64 {
        use TransformStep::*;
        match (self, other) {
            (MobiusOnX(a), MobiusOnX(b)) | (MobiusOnY(a), MobiusOnY(b)) => a.distance(b),
            (ScaleX(a), ScaleX(b)) | (ScaleY(a), ScaleY(b)) | (ShiftX(a), ShiftX(b)) | (ShiftY(a), ShiftY(b)) => {
                (a - b).norm() / (1.0 + a.norm())
            }
            _ => f64::INFINITY,
        }
    }
}

fn render_mobius(m: &Mobius, v: &str) -> String {
    let (num, nn) = render_poly(&[(m.q, v), (m.p, "")]);
    let (den, nd) = render_poly(&[(m.s, v), (m.r, "")]);
    if nd == 1 && den == "1" {
        return num;
    }
    let num = if nn > 1 { format!("({num})") } else { num };
    let den = if nd > 1 || den.starts_with('-') { format!("({den})") } else { den };
    format!("{num}/{den}")
}

impl fmt::Display for TransformStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (v, m) = match self.axis() {
            Axis::X => ("x", self.mobius()),
            Axis::Y => ("y", self.mobius()),
        };
        write!(f, "{v} -> {}", render_mobius(&m, v))
    }
}

/// Ordered list of substitutions; `steps[0]` is applied first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TransformChain {
    pub steps: Vec<TransformStep>,
}

impl TransformChain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, step: TransformStep) {
        self.steps.push(step);
    }

    pub fn extend(&mut self, other: TransformChain) {
        self.steps.extend(other.steps);
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn apply(&self, eq: &RationalAir) -> Result<RationalAir> {
        self.steps.iter().try_fold(*eq, |acc, st| st.apply(&acc))
    }

    /// Reverse-order inverses; `chain.invert().apply(chain.apply(eq))` is `eq`.
    pub fn invert(&self) -> Result<TransformChain> {
        let steps = self.steps.iter().rev().map(TransformStep::inverse).collect::<Result<Vec<_>>>()?;
        Ok(TransformChain { steps })
    }

    /// Original coordinates → coordinates after the whole chain.
    pub fn forward_point(&self, x: C64, y: C64) -> Option<(C64, C64)> {
        self.steps.iter().try_fold((x, y), |(x, y), st| st.forward_point(x, y))
    }

    /// Coordinates after the chain → original coordinates.
    pub fn backward_point(&self, x: C64, y: C64) -> Option<(C64, C64)> {
        self.steps.iter().rev().try_fold((x, y), |(x, y), st| st.backward_point(x, y))
    }

    pub fn describe(&self) -> Vec<String> {
        self.steps.iter().map(|s| s.to_string()).collect()
    }
}

/// Free-function form of [`TransformChain::invert`].
pub fn chain_invert(chain: &TransformChain) -> Result<TransformChain> {
    chain.invert()
}
