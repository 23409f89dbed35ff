//! Implicit solutions of the canonical classes and their verification.
//!
//! Swapping the roles of `x` and `y` turns `y' = P(y)/(S(x) y + R(x))` into a
//! Riccati equation for `x(y)`. Linearizing it with two independent
//! solutions `w1, w2` of the associated second-order equation gives the
//! level function
//!
//! ```text
//! F(x, y) = (x w1(y) + h(y) w1'(y)) / (x w2(y) + h(y) w2'(y))
//! ```
//!
//! with weight `h = P(y)` for the canonical forms. `F` is constant along every
//! solution curve.

mod integrate;
mod verify;

use std::fmt;
use std::sync::Arc;

pub use integrate::{integrate_ode, Trajectory, TrajectoryStatus};
pub use verify::{residual_verify, select_and_verify, Verification, VerifyOptions};

use crate::classify::CanonicalClass;
use crate::equation::{render_scalar as fs, RationalAir, TransformChain};
use crate::error::{AbelError, Result};
use crate::poly;
use crate::specfun::{self, integer_distance};
use crate::{re, C64};

pub type ScalarFn = Arc<dyn Fn(C64) -> Result<C64> + Send + Sync>;
pub type LevelFn = Arc<dyn Fn(C64, C64) -> Result<(C64, C64)> + Send + Sync>;
pub type CutFn = Arc<dyn Fn(C64, C64) -> Vec<C64> + Send + Sync>;

/// Two solutions of the linearized equation, as functions of `y`, with their
/// `y`-derivatives and the weight multiplying the derivatives in the level.
#[derive(Clone)]
pub struct BasisPair {
    pub w1: ScalarFn,
    pub w1p: ScalarFn,
    pub w2: ScalarFn,
    pub w2p: ScalarFn,
    pub weight: Arc<dyn Fn(C64) -> C64 + Send + Sync>,
    /// Arguments of principal-branch functions used by the basis; the level is
    /// discontinuous where one of them crosses the negative real axis.
    pub cuts: Arc<dyn Fn(C64) -> Vec<C64> + Send + Sync>,
    pub description: String,
}

impl BasisPair {
    /// Basis with weight `h(y) = y` and no branch cuts.
    pub fn new(w1: ScalarFn, w1p: ScalarFn, w2: ScalarFn, w2p: ScalarFn, description: &str) -> Self {
        BasisPair {
            w1,
            w1p,
            w2,
            w2p,
            weight: Arc::new(|y| y),
            cuts: Arc::new(|_| Vec::new()),
            description: description.to_string(),
        }
    }

    pub fn wronskian(&self, y: C64) -> Result<C64> {
        Ok((self.w1)(y)? * (self.w2p)(y)? - (self.w1p)(y)? * (self.w2)(y)?)
    }
}

impl fmt::Debug for BasisPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BasisPair").field("description", &self.description).finish()
    }
}

/// A level function `F(x, y) = num/den` constant along solution curves.
#[derive(Clone)]
pub struct ImplicitSolution {
    pub tag: String,
    pub params: Vec<(String, C64)>,
    pub description: String,
    pub warnings: Vec<String>,
    parts: LevelFn,
    cuts: CutFn,
}

impl fmt::Debug for ImplicitSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImplicitSolution")
            .field("tag", &self.tag)
            .field("params", &self.params)
            .field("description", &self.description)
            .field("warnings", &self.warnings)
            .finish()
    }
}

impl ImplicitSolution {
    pub fn from_parts(tag: &str, description: &str, parts: LevelFn, cuts: CutFn) -> Self {
        ImplicitSolution {
            tag: tag.to_string(),
            params: Vec::new(),
            description: description.to_string(),
            warnings: Vec::new(),
            parts,
            cuts,
        }
    }

    /// A level function that ignores its arguments.
    pub fn constant(value: C64) -> Self {
        Self::from_parts(
            "constant",
            &format!("{value}"),
            Arc::new(move |_, _| Ok((value, re(1.0)))),
            Arc::new(|_, _| Vec::new()),
        )
    }

    /// Numerator and denominator of the level at `(x, y)`.
    pub fn level_parts(&self, x: C64, y: C64) -> Result<(C64, C64)> {
        (self.parts)(x, y)
    }

    pub fn level(&self, x: C64, y: C64) -> Result<C64> {
        let (n, d) = self.level_parts(x, y)?;
        if d.norm() == 0.0 {
            return Err(AbelError::EvaluationPole { x: format!("{x}"), y: format!("{y}") });
        }
        let v = n / d;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(AbelError::NonFinite("level function"));
        }
        Ok(v)
    }

    pub fn cut_args(&self, x: C64, y: C64) -> Vec<C64> {
        (self.cuts)(x, y)
    }

    fn with_params(mut self, cls: &CanonicalClass) -> Self {
        self.params = cls.params().into_iter().map(|(n, v)| (n.to_string(), v)).collect();
        self
    }
}

/// `F = (x w1 + h w1') / (x w2 + h w2')`; fails when the two basis functions
/// are linearly dependent at every sample point.
pub fn build_implicit_from_basis(basis: BasisPair) -> Result<ImplicitSolution> {
    let samples = [C64::new(0.3, 0.1), C64::new(-0.4, 0.2), C64::new(0.2, -0.3), C64::new(0.55, 0.05)];
    let mut evaluated = 0;
    let mut independent = false;
    let mut last_err = None;
    for &y in &samples {
        let vals =
            (|| -> Result<[C64; 4]> { Ok([(basis.w1)(y)?, (basis.w1p)(y)?, (basis.w2)(y)?, (basis.w2p)(y)?]) })();
        match vals {
            Ok([a, ap, b, bp]) => {
                evaluated += 1;
                let w = a * bp - ap * b;
                let mag = (a * bp).norm() + (ap * b).norm();
                if w.norm() > 1e-10 * mag.max(1e-300) && w.norm() > 1e-300 {
                    independent = true;
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    if evaluated == 0 {
        return Err(last_err.unwrap());
    }
    if !independent {
        return Err(AbelError::DegenerateBasis(format!(
            "{}: basis functions are linearly dependent",
            basis.description
        )));
    }
    let b = basis.clone();
    let parts: LevelFn = Arc::new(move |x, y| {
        let h = (b.weight)(y);
        let num = x * (b.w1)(y)? + h * (b.w1p)(y)?;
        let den = x * (b.w2)(y)? + h * (b.w2p)(y)?;
        Ok((num, den))
    });
    let cuts = basis.cuts.clone();
    Ok(ImplicitSolution::from_parts(
        "basis",
        &format!("(x*w1 + h*w1')/(x*w2 + h*w2'), {}", basis.description),
        parts,
        Arc::new(move |_, y| cuts(y)),
    ))
}

fn degenerate(what: &str) -> AbelError {
    AbelError::DegenerateBasis(format!("{what}; logarithmic second solution not supported"))
}

/// `y^ρ (1-y)^σ ₂F₁(A, B; C; y)` and its derivative.
fn riemann_pair(rho: C64, sigma: C64, a: C64, b: C64, c: C64) -> (ScalarFn, ScalarFn) {
    let pref = move |y: C64| y.powc(rho) * (1.0 - y).powc(sigma);
    let w: ScalarFn = Arc::new(move |y| Ok(pref(y) * specfun::hyp2f1(a, b, c, y)?));
    let wp: ScalarFn = Arc::new(move |y| {
        let f = specfun::hyp2f1(a, b, c, y)?;
        let fp = specfun::hyp2f1_prime(a, b, c, y)?;
        Ok(pref(y) * ((rho / y - sigma / (1.0 - y)) * f + fp))
    });
    (w, wp)
}

fn riemann_basis(rhos: [C64; 2], sigma: C64, inf: [C64; 2], description: String) -> Result<BasisPair> {
    let [r1, r2] = rhos;
    let c1 = 1.0 + r1 - r2;
    let c2 = 1.0 + r2 - r1;
    if integer_distance(r1 - r2) < 1e-8 {
        return Err(degenerate("exponent difference at y = 0 is an integer"));
    }
    let (w1, w1p) = riemann_pair(r1, sigma, r1 + sigma + inf[0], r1 + sigma + inf[1], c1);
    let (w2, w2p) = riemann_pair(r2, sigma, r2 + sigma + inf[0], r2 + sigma + inf[1], c2);
    Ok(BasisPair {
        w1,
        w1p,
        w2,
        w2p,
        weight: Arc::new(|y| y * (y - 1.0)),
        cuts: Arc::new(|y| vec![y, 1.0 - y]),
        description,
    })
}

/// Exponent at `y = 1` shared by both basis functions: a root of
/// `σ² + e1 σ + e0`.
fn sigma_root(e0: C64, e1: C64) -> C64 {
    poly::quadratic_roots(e0, e1, re(1.0))[0]
}

fn c1_basis(a: C64, b: C64, c: C64) -> Result<BasisPair> {
    let sigma = sigma_root(b * c, b + c - a);
    riemann_basis(
        [b, c],
        sigma,
        [re(0.0), 1.0 - a],
        format!(
            "y^rho (1-y)^({}) 2F1(rho+sigma, rho+sigma+1-a; 1+rho-rho'; y), rho in {{{}, {}}}",
            fs(sigma),
            fs(b),
            fs(c)
        ),
    )
}

fn c2_basis(a: C64, c: C64) -> Result<BasisPair> {
    let sigma = sigma_root(a, c);
    riemann_basis(
        [re(0.0), c],
        sigma,
        [re(0.0), re(1.0)],
        format!("y^rho (1-y)^({}) 2F1(rho+sigma, rho+sigma+1; 1+rho-rho'; y), rho in {{0, {}}}", fs(sigma), fs(c)),
    )
}

/// `y' = y(y-1) / ((x² - (α+β)x + αβ) y - x² + (γ-1) x)`, whose swapped
/// Riccati form linearizes to the Gauss equation with parameters `α, β, γ`.
pub fn gauss_abel_equation(alpha: C64, beta: C64, gamma: C64) -> Result<RationalAir> {
    RationalAir::new(
        [re(0.0), re(-1.0), re(1.0), re(0.0)],
        [alpha * beta, -(alpha + beta), re(1.0)],
        [re(0.0), gamma - 1.0, re(-1.0)],
    )
}

/// The two Gauss-series solutions about `y = 0`.
pub fn gauss_basis(alpha: C64, beta: C64, gamma: C64) -> Result<BasisPair> {
    if integer_distance(gamma) < 1e-8 {
        return Err(degenerate("integer c in 2F1(a, b; c; y)"));
    }
    let (a2, b2, c2) = (alpha - gamma + 1.0, beta - gamma + 1.0, 2.0 - gamma);
    let e = 1.0 - gamma;
    let w1: ScalarFn = Arc::new(move |y| specfun::hyp2f1(alpha, beta, gamma, y));
    let w1p: ScalarFn = Arc::new(move |y| specfun::hyp2f1_prime(alpha, beta, gamma, y));
    let w2: ScalarFn = Arc::new(move |y| Ok(y.powc(e) * specfun::hyp2f1(a2, b2, c2, y)?));
    let w2p: ScalarFn = Arc::new(move |y| {
        let f = specfun::hyp2f1(a2, b2, c2, y)?;
        let fp = specfun::hyp2f1_prime(a2, b2, c2, y)?;
        Ok(y.powc(e) * (e / y * f + fp))
    });
    let mut basis = BasisPair::new(
        w1,
        w1p,
        w2,
        w2p,
        &format!(
            "2F1({}, {}; {}; y), y^({}) 2F1({}, {}; {}; y)",
            fs(alpha),
            fs(beta),
            fs(gamma),
            fs(1.0 - gamma),
            fs(a2),
            fs(b2),
            fs(c2)
        ),
    );
    basis.cuts = Arc::new(|y| vec![y, 1.0 - y]);
    Ok(basis)
}

/// Level function of [`gauss_abel_equation`].
pub fn gauss_abel_solution(alpha: C64, beta: C64, gamma: C64) -> Result<ImplicitSolution> {
    let mut sol = build_implicit_from_basis(gauss_basis(alpha, beta, gamma)?)?;
    sol.tag = "gauss".into();
    sol.params = vec![("alpha".into(), alpha), ("beta".into(), beta), ("gamma".into(), gamma)];
    Ok(sol)
}

fn c3_solution(alpha: C64, beta: C64, warnings: &mut Vec<String>) -> Result<ImplicitSolution> {
    let bb = 1.0 + alpha - beta;
    if bb.re <= 0.5 && integer_distance(bb) < 1e-8 {
        return Err(degenerate("M(-beta, 1+alpha-beta, y) has a pole"));
    }
    if specfun::is_integer(bb) {
        warnings.push(format!(
            "U(a, {}, y) evaluated as the mean over b = {} ± {:e}",
            fs(bb),
            fs(bb),
            specfun::INTEGER_PERTURBATION
        ));
    }
    let parts: LevelFn = Arc::new(move |x, y| {
        let num = x * specfun::kummer_m(-beta, bb, y)? - beta * specfun::kummer_m(1.0 - beta, bb, y)?;
        let den = x * specfun::kummer_u_perturbed(-beta, bb, y)?.0
            + alpha * beta * specfun::kummer_u_perturbed(1.0 - beta, bb, y)?.0;
        Ok((num, den))
    });
    Ok(ImplicitSolution::from_parts(
        "C3",
        &format!(
            "(x*M({m0}, {b}, y) - {be}*M({m1}, {b}, y))/(x*U({m0}, {b}, y) + {ab}*U({m1}, {b}, y))",
            m0 = fs(-beta),
            m1 = fs(1.0 - beta),
            b = fs(bb),
            be = fs(beta),
            ab = fs(alpha * beta)
        ),
        parts,
        Arc::new(|_, y| vec![y]),
    ))
}

fn c4_solution(c: C64, warnings: &mut Vec<String>) -> Result<ImplicitSolution> {
    if specfun::is_integer(c) {
        warnings.push(format!(
            "Y of integer order {} evaluated as the mean over orders ± {:e}",
            fs(c),
            specfun::INTEGER_PERTURBATION
        ));
    }
    let parts: LevelFn = Arc::new(move |x, y| {
        let r = y.sqrt();
        let t = 2.0 * r;
        let num = x * specfun::bessel_j(c, t)? - r * specfun::bessel_j(c + 1.0, t)?;
        let den = -x * specfun::bessel_y_perturbed(c, t)?.0 + r * specfun::bessel_y_perturbed(c + 1.0, t)?.0;
        Ok((num, den))
    });
    Ok(ImplicitSolution::from_parts(
        "C4",
        &format!(
            "(x*J({c0}, 2*sqrt(y)) - sqrt(y)*J({c1}, 2*sqrt(y)))/(-x*Y({c0}, 2*sqrt(y)) + sqrt(y)*Y({c1}, 2*sqrt(y)))",
            c0 = fs(c),
            c1 = fs(c + 1.0)
        ),
        parts,
        Arc::new(|_, y| vec![y]),
    ))
}

fn c5_solution(b: C64) -> Result<ImplicitSolution> {
    let a1 = (3.0 - b) / 2.0;
    let a2 = (1.0 - b) / 2.0;
    let bb = re(1.5);
    let parts: LevelFn = Arc::new(move |x, y| {
        let z = y * y / 2.0;
        let w = b + x * y;
        let num = 2.0 * (1.0 - b) * specfun::kummer_m(a1, bb, z)? + 2.0 * specfun::kummer_m(a2, bb, z)? * w;
        let den = b * (b - 1.0) * specfun::kummer_u(a1, bb, z)? + 2.0 * specfun::kummer_u(a2, bb, z)? * w;
        Ok((num, den))
    });
    Ok(ImplicitSolution::from_parts(
        "C5",
        &format!(
            "({k1}*M({a1}, 3/2, y^2/2) + 2*M({a2}, 3/2, y^2/2)*({b} + x*y))/({k2}*U({a1}, 3/2, y^2/2) + 2*U({a2}, 3/2, y^2/2)*({b} + x*y))",
            k1 = fs(2.0 * (1.0 - b)),
            k2 = fs(b * (b - 1.0)),
            a1 = fs(a1),
            a2 = fs(a2),
            b = fs(b)
        ),
        parts,
        Arc::new(|_, y| vec![y * y / 2.0]),
    ))
}

fn c6_solution() -> ImplicitSolution {
    let parts: LevelFn = Arc::new(|x, y| {
        let num = x * specfun::airy_bi(-y)? - specfun::airy_bi_prime(-y)?;
        let den = x * specfun::airy_ai(-y)? - specfun::airy_ai_prime(-y)?;
        Ok((num, den))
    });
    ImplicitSolution::from_parts("C6", "(x*Bi(-y) - Bi'(-y))/(x*Ai(-y) - Ai'(-y))", parts, Arc::new(|_, _| Vec::new()))
}

/// Implicit solution of a canonical representative.
pub fn solve_canonical(cls: &CanonicalClass) -> Result<ImplicitSolution> {
    let mut warnings = Vec::new();
    let mut sol = match *cls {
        CanonicalClass::C1 { a, b, c } => {
            let mut s = build_implicit_from_basis(c1_basis(a, b, c)?)?;
            s.tag = "C1".into();
            s
        }
        CanonicalClass::C2 { a, c } => {
            let mut s = build_implicit_from_basis(c2_basis(a, c)?)?;
            s.tag = "C2".into();
            s
        }
        CanonicalClass::C3 { alpha, beta } => c3_solution(alpha, beta, &mut warnings)?,
        CanonicalClass::C4 { c } => c4_solution(c, &mut warnings)?,
        CanonicalClass::C5 { b } => c5_solution(b)?,
        CanonicalClass::C6 => c6_solution(),
        CanonicalClass::DegenerateLinear => return Err(AbelError::UnsupportedClass("DegenerateLinear".into())),
    };
    sol.warnings.extend(warnings);
    Ok(sol.with_params(cls))
}

/// Carry a level function of the reduced equation back to the equation the
/// chain started from: `L'(x, y) = L(chain.forward_point(x, y))`.
pub fn pull_back(sol: &ImplicitSolution, chain: &TransformChain) -> ImplicitSolution {
    if chain.is_empty() {
        return sol.clone();
    }
    let fwd = Arc::new(chain.clone());
    let inner = sol.parts.clone();
    let f1 = fwd.clone();
    let parts: LevelFn = Arc::new(move |x, y| {
        let (nx, ny) =
            f1.forward_point(x, y).ok_or_else(|| AbelError::EvaluationPole { x: format!("{x}"), y: format!("{y}") })?;
        inner(nx, ny)
    });
    let inner_cuts = sol.cuts.clone();
    let cuts: CutFn = Arc::new(move |x, y| match fwd.forward_point(x, y) {
        Some((nx, ny)) => inner_cuts(nx, ny),
        None => Vec::new(),
    });
    ImplicitSolution {
        tag: sol.tag.clone(),
        params: sol.params.clone(),
        description: sol.description.clone(),
        warnings: sol.warnings.clone(),
        parts,
        cuts,
    }
}
