//! Reduction of a rational inverse-Riccati equation to one of six canonical
//! representatives by Möbius changes of `x` and `y`.
//!
//! Three stages, each returning the substitutions it used:
//!
//! 1. [`normalize_numerator`]: a Möbius map in `y` moves the roots of the
//!    numerator cubic so that it becomes `1`, `y` or `y(y-1)` (one, two or
//!    three distinct roots).
//! 2. [`reduce_x`]: Möbius maps in `x` bring the y-coefficient of the
//!    denominator to a constant or to `a·x`, and make the free part monic,
//!    `y' = P(y) / (ã y + (x-b)(x-c))`.
//! 3. [`reduce_to_class`]: per-case shifts and scalings remove the remaining
//!    redundant parameters.
//!
//! Multiplicities are decided on covariants of the binary cubic (Hessian and
//! discriminant) rather than on distances between computed roots: a triple
//! root perturbed by rounding splits by `ε^(1/3)`, while the covariants stay
//! at the `ε` level.

use std::cmp::Ordering;
use std::fmt;

use crate::equation::{apply_mobius_y, Mobius, RationalAir, TransformChain, TransformStep};
use crate::error::{AbelError, Result};
use crate::poly;
use crate::{re, C64, ZERO_TOL};

const ZERO: C64 = C64::new(0.0, 0.0);

/// A root of the numerator cubic on the Riemann sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Root {
    Finite(C64),
    Infinity,
}

impl Root {
    fn from_projective(num: C64, den: C64) -> Root {
        if den.norm() <= ZERO_TOL * num.norm() || den.norm() == 0.0 {
            Root::Infinity
        } else {
            Root::Finite(num / den)
        }
    }

    /// Homogeneous coordinates `[num : den]`.
    pub fn projective(&self) -> (C64, C64) {
        match *self {
            Root::Finite(z) => (z, re(1.0)),
            Root::Infinity => (re(1.0), ZERO),
        }
    }

    pub fn magnitude(&self) -> f64 {
        match self {
            Root::Finite(z) => z.norm(),
            Root::Infinity => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Root::Finite(_))
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Root::Finite(z) => write!(f, "{z}"),
            Root::Infinity => write!(f, "∞"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootPattern {
    ThreeDistinct,
    TwoDistinct,
    OneTriple,
}

/// Distinct roots of the numerator cubic with multiplicities.
///
/// A vanishing leading coefficient puts roots at infinity, so the
/// multiplicities always add up to three.
#[derive(Clone, Debug, PartialEq)]
pub struct RootStructure {
    pub roots: Vec<(Root, usize)>,
    pub pattern: RootPattern,
}

impl RootStructure {
    /// Finite roots, repeated according to multiplicity.
    pub fn finite_roots(&self) -> Vec<C64> {
        self.roots
            .iter()
            .filter_map(|(r, m)| match r {
                Root::Finite(z) => Some(std::iter::repeat_n(*z, *m)),
                Root::Infinity => None,
            })
            .flatten()
            .collect()
    }

    pub fn infinity_multiplicity(&self) -> usize {
        self.roots.iter().filter(|(r, _)| !r.is_finite()).map(|(_, m)| *m).sum()
    }

    /// Monic-in-the-finite-roots reconstruction scaled to match `a_deg`,
    /// coefficients `a0..a3`. Used to check the factorization.
    pub fn reconstruct(&self, leading: C64) -> [C64; 4] {
        let mut p = vec![leading];
        for z in self.finite_roots() {
            p = poly::mul(&p, &[-z, re(1.0)]);
        }
        let mut out = [ZERO; 4];
        for (o, c) in out.iter_mut().zip(p) {
            *o = c;
        }
        out
    }
}

fn order_by_magnitude(a: &C64, b: &C64) -> Ordering {
    a.norm()
        .partial_cmp(&b.norm())
        .unwrap_or(Ordering::Equal)
        .then(a.re.partial_cmp(&b.re).unwrap_or(Ordering::Equal))
        .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
}

fn order_roots(a: &Root, b: &Root) -> Ordering {
    match (a, b) {
        (Root::Finite(x), Root::Finite(y)) => order_by_magnitude(x, y),
        (Root::Finite(_), Root::Infinity) => Ordering::Less,
        (Root::Infinity, Root::Finite(_)) => Ordering::Greater,
        (Root::Infinity, Root::Infinity) => Ordering::Equal,
    }
}

/// Threshold on `|disc H| / |H|²`, the squared separation of the Hessian
/// roots relative to the Hessian's size; independent of where the roots sit
/// on the sphere.
pub const DOUBLE_ROOT_TOL: f64 = 1e-8;

/// Roots of `a3 y³ + a2 y² + a1 y + a0` with multiplicity pattern.
pub fn cubic_roots(a0: C64, a1: C64, a2: C64, a3: C64) -> Result<RootStructure> {
    let raw = [a0, a1, a2, a3];
    if raw.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(AbelError::NonFinite("cubic coefficients"));
    }
    let scale = raw.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(AbelError::InvalidArgument("cubic is identically zero".into()));
    }
    let [d, c3, b3, a] = raw.map(|z| z / scale);
    let (b, c) = (b3 / 3.0, c3 / 3.0);

    // Hessian covariant h2 y² + h1 y w + h0 w² and its discriminant.
    let h2 = a * c - b * b;
    let h1 = a * d - b * c;
    let h0 = b * d - c * c;
    let hnorm = h2.norm().max(h1.norm()).max(h0.norm());
    let disc = h1 * h1 - 4.0 * h2 * h0;

    if hnorm <= ZERO_TOL {
        // f ∝ (t2 y - t1 w)³: pick the best-conditioned ratio for the root.
        let cands = [(-b, a), (-c, b), (-d, c)];
        let (n, dd) = cands
            .iter()
            .copied()
            .max_by(|x, y| x.1.norm().partial_cmp(&y.1.norm()).unwrap_or(Ordering::Equal))
            .unwrap();
        let root = if dd.norm() <= ZERO_TOL { Root::Infinity } else { Root::Finite(n / dd) };
        return Ok(RootStructure { roots: vec![(root, 3)], pattern: RootPattern::OneTriple });
    }

    if disc.norm() <= DOUBLE_ROOT_TOL * hnorm * hnorm {
        // The Hessian of a cubic with a double root is the square of that root's factor.
        let (n1, d1) = (-h1, 2.0 * h2);
        let (n2, d2) = (-2.0 * h0, h1);
        let (dn, dd) = if n1.norm_sqr() + d1.norm_sqr() >= n2.norm_sqr() + d2.norm_sqr() { (n1, d1) } else { (n2, d2) };
        // f = k (dd y - dn w)² (E2 y - E1 w): least squares for (E2, E1).
        let cols = [[dd * dd, -2.0 * dn * dd, dn * dn, ZERO], [ZERO, -dd * dd, 2.0 * dn * dd, -dn * dn]];
        let rhs = [a, b3, c3, d];
        let dot = |u: &[C64; 4], v: &[C64; 4]| -> C64 { u.iter().zip(v).map(|(x, y)| x.conj() * y).sum() };
        let (g11, g12, g22) = (dot(&cols[0], &cols[0]), dot(&cols[0], &cols[1]), dot(&cols[1], &cols[1]));
        let (r1, r2) = (dot(&cols[0], &rhs), dot(&cols[1], &rhs));
        let det = g11 * g22 - g12 * g12.conj();
        let e2 = (g22 * r1 - g12 * r2) / det;
        let e1 = (g11 * r2 - g12.conj() * r1) / det;
        let double = Root::from_projective(dn, dd);
        let simple = Root::from_projective(e1, e2);
        let mut roots = vec![(double, 2), (simple, 1)];
        roots.sort_by(|x, y| order_roots(&x.0, &y.0));
        return Ok(RootStructure { roots, pattern: RootPattern::TwoDistinct });
    }

    let mut roots: Vec<Root> = if a.norm() <= ZERO_TOL {
        let [r1, r2] = poly::quadratic_roots(d, c3, b3);
        vec![Root::Finite(r1), Root::Finite(r2), Root::Infinity]
    } else {
        simple_cubic_roots(&[d, c3, b3, a]).into_iter().map(Root::Finite).collect()
    };
    roots.sort_by(order_roots);
    Ok(RootStructure { roots: roots.into_iter().map(|r| (r, 1)).collect(), pattern: RootPattern::ThreeDistinct })
}

/// Durand–Kerner iteration followed by Newton polishing; assumes simple roots.
fn simple_cubic_roots(c: &[C64; 4]) -> [C64; 3] {
    let monic: Vec<C64> = c.iter().map(|z| z / c[3]).collect();
    let bound = 1.0 + monic[..3].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut z = [seed * bound * 0.5, seed * seed * bound * 0.5, seed.powi(3) * bound * 0.5];
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..3 {
            let mut den = re(1.0);
            for j in 0..3 {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = poly::eval(&monic, z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm() / (1.0 + z[i].norm()));
        }
        if delta < 1e-16 {
            break;
        }
    }
    let dp = poly::derivative(&monic);
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let d = poly::eval(&dp, *zi);
            if d.norm() == 0.0 {
                break;
            }
            *zi -= poly::eval(&monic, *zi) / d;
        }
    }
    z
}

/// The numerator after [`normalize_numerator`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NumeratorForm {
    /// `P(y) = 1`
    One,
    /// `P(y) = y`
    Y,
    /// `P(y) = y(y-1)`
    YYm1,
}

impl NumeratorForm {
    pub fn coeffs(&self) -> [C64; 4] {
        match self {
            NumeratorForm::One => [re(1.0), ZERO, ZERO, ZERO],
            NumeratorForm::Y => [ZERO, re(1.0), ZERO, ZERO],
            NumeratorForm::YYm1 => [ZERO, re(-1.0), re(1.0), ZERO],
        }
    }

    fn lead_index(&self) -> usize {
        match self {
            NumeratorForm::One => 0,
            NumeratorForm::Y => 1,
            NumeratorForm::YYm1 => 2,
        }
    }

    fn from_pattern(p: RootPattern) -> Self {
        match p {
            RootPattern::ThreeDistinct => NumeratorForm::YYm1,
            RootPattern::TwoDistinct => NumeratorForm::Y,
            RootPattern::OneTriple => NumeratorForm::One,
        }
    }
}

/// Rescale so that the numerator is exactly `form`; fails if the numerator
/// does not have that shape.
pub fn fix_numerator(eq: &RationalAir, form: NumeratorForm) -> Result<RationalAir> {
    let lead = eq.num[form.lead_index()];
    if lead.norm() == 0.0 {
        return Err(AbelError::Internal(format!("numerator is not of the form {form:?}")));
    }
    let out = eq.rescaled(lead.inv());
    let target = form.coeffs();
    let dev = out.num.iter().zip(&target).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    if dev > 1e-6 {
        return Err(AbelError::Internal(format!("numerator deviates from {form:?} by {dev:e}")));
    }
    Ok(RationalAir { num: target, ..out })
}

fn quadratic_is_double(q: [C64; 3]) -> bool {
    let mag = q.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let disc = q[1] * q[1] - 4.0 * q[0] * q[2];
    disc.norm() <= ZERO_TOL * mag * mag
}

/// The denominator restricted to `y = root`, as a quadratic in `x`
/// (for the root at infinity, the y-coefficient).
fn restricted_denominator(eq: &RationalAir, root: &Root) -> [C64; 3] {
    match root {
        Root::Finite(z) => [0, 1, 2].map(|k| eq.den_y[k] * z + eq.den_c[k]),
        Root::Infinity => eq.den_y,
    }
}

/// Möbius `m` with `m(0) = r0`, `m(1) = r1`, `m(∞) = r2`.
fn three_point_map(r0: &Root, r1: &Root, r2: &Root) -> Result<Mobius> {
    let (n0, d0) = r0.projective();
    let (n1, d1) = r1.projective();
    let (n2, d2) = r2.projective();
    let lambda = d0 * n1 - n0 * d1;
    let mu = n2 * d1 - d2 * n1;
    Mobius::new(mu * n0, lambda * n2, mu * d0, lambda * d2)
}

/// Möbius `m` with `m(0) = zero` and `m(∞) = inf`.
fn two_point_map(zero: &Root, inf: &Root) -> Result<Mobius> {
    let (n0, d0) = zero.projective();
    let (n2, d2) = inf.projective();
    Mobius::new(n0, n2, d0, d2)
}

/// Result of the first reduction stage.
#[derive(Clone, Debug)]
pub struct NumeratorNormalization {
    pub eq: RationalAir,
    pub chain: TransformChain,
    pub form: NumeratorForm,
    pub roots: RootStructure,
}

/// Möbius change of `y` taking the numerator to `1`, `y` or `y(y-1)`.
///
/// Three distinct roots go to `0, 1, ∞` by increasing magnitude, except that a
/// root at which the denominator restricts to a perfect square in `x` is sent
/// to `∞` first: that property is invariant under Möbius maps and is what
/// separates the two-parameter class from the three-parameter one. For two
/// distinct roots the simple root goes to `0` and the double root to `∞`
/// (`P = y`); a triple root goes to `∞` (`P = 1`).
pub fn normalize_numerator(eq: &RationalAir) -> Result<NumeratorNormalization> {
    eq.validate()?;
    let roots = cubic_roots(eq.num[0], eq.num[1], eq.num[2], eq.num[3])?;
    // (S, R) of rank one means the denominator factors as (αy + β)·T(x)
    let (sv, rv) = (&eq.den_y, &eq.den_c);
    let norm = |v: &[C64; 3]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let minors = [(0, 1), (0, 2), (1, 2)].map(|(i, j)| (sv[i] * rv[j] - sv[j] * rv[i]).norm());
    if minors.iter().all(|m| *m <= ZERO_TOL * norm(sv) * norm(rv)) {
        return Err(AbelError::Separable);
    }
    let form = NumeratorForm::from_pattern(roots.pattern);
    let m = match roots.pattern {
        RootPattern::ThreeDistinct => {
            let mut rs: Vec<Root> = roots.roots.iter().map(|(r, _)| *r).collect();
            if let Some(pos) = rs.iter().rposition(|r| quadratic_is_double(restricted_denominator(eq, r))) {
                let r = rs.remove(pos);
                rs.push(r);
            }
            three_point_map(&rs[0], &rs[1], &rs[2])?
        }
        RootPattern::TwoDistinct => {
            let double = roots.roots.iter().find(|(_, m)| *m == 2).unwrap().0;
            let simple = roots.roots.iter().find(|(_, m)| *m == 1).unwrap().0;
            two_point_map(&simple, &double)?
        }
        RootPattern::OneTriple => match roots.roots[0].0 {
            Root::Infinity => Mobius::identity(),
            triple => two_point_map(&Root::Infinity, &triple)?,
        },
    };
    let mut chain = TransformChain::new();
    let moved = if m.is_identity(1e-14) {
        *eq
    } else {
        chain.push(TransformStep::MobiusOnY(m));
        apply_mobius_y(eq, &m)?
    };
    let out = fix_numerator(&moved.snapped(), form)?;
    Ok(NumeratorNormalization { eq: out, chain, form, roots })
}

/// y-coefficient of the denominator after [`reduce_x`]: `ã = a` or `ã = a·x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ATilde {
    Const(C64),
    Linear(C64),
}

#[derive(Clone, Debug)]
pub enum XReduction {
    /// `y' = P(y) / (ã y + (x-b)(x-c))`, `|b| <= |c|`.
    Reduced { eq: RationalAir, atilde: ATilde, b: C64, c: C64 },
    /// The x² coefficient of the free part vanished; swapping `x` and `y`
    /// gives a first-order linear equation.
    DegenerateLinear { eq: RationalAir },
}

fn pick_kappa(s: &[C64; 3]) -> C64 {
    let smag = s.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let disc = s[1] * s[1] - 4.0 * s[0] * s[2];
    if disc.norm() <= ZERO_TOL * smag * smag {
        return -s[1] / (2.0 * s[2]);
    }
    let [k1, k2] = poly::quadratic_roots(s[0], s[1], s[2]);
    // larger magnitude, then larger real part, then larger imaginary part
    match order_by_magnitude(&k1, &k2) {
        Ordering::Less => k2,
        _ => k1,
    }
}

fn ordered_pair(b: C64, c: C64) -> (C64, C64) {
    if order_by_magnitude(&b, &c) == Ordering::Greater {
        (c, b)
    } else {
        (b, c)
    }
}

/// Roots of the monic `x² + r1 x + r0`, ordered by magnitude.
fn monic_roots(r0: C64, r1: C64) -> (C64, C64) {
    let [b, c] = poly::quadratic_roots(r0, r1, re(1.0));
    ordered_pair(b, c)
}

/// Möbius changes of `x` bringing an equation with normalized numerator to
/// `y' = P(y) / (ã y + (x-b)(x-c))`.
///
/// A root `κ` of the y-coefficient `S(x)` is sent to infinity by
/// `x → 1/x + κ`, which leaves `S` linear; a shift then removes its constant
/// term unless `S` had a double root, in which case it is already constant.
/// The final scaling `x → x / r2` makes the x² coefficient of the free part 1.
pub fn reduce_x(eq: &RationalAir, form: NumeratorForm) -> Result<(XReduction, TransformChain)> {
    let mut chain = TransformChain::new();
    let mut cur = fix_numerator(eq, form)?;
    let tol = ZERO_TOL * cur.scale();
    let smag = |e: &RationalAir| e.den_y.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if smag(&cur) <= tol {
        return Err(AbelError::Separable);
    }

    let s = cur.den_y;
    let mut double_s = false;
    if s[2].norm() > ZERO_TOL * smag(&cur) {
        let smax = smag(&cur);
        double_s = (s[1] * s[1] - 4.0 * s[0] * s[2]).norm() <= ZERO_TOL * smax * smax;
        let kappa = pick_kappa(&s);
        let step = TransformStep::MobiusOnX(Mobius::new(re(1.0), kappa, ZERO, re(1.0))?);
        cur = fix_numerator(&step.apply(&cur)?, form)?;
        cur.den_y[2] = ZERO;
        if double_s {
            cur.den_y[1] = ZERO;
        }
        chain.push(step);
    }

    let s = cur.den_y;
    let smax = smag(&cur);
    let case_b = !double_s && s[1].norm() > ZERO_TOL * smax;
    if case_b && s[0].norm() > ZERO_TOL * smax {
        let step = TransformStep::ShiftX(-s[0] / s[1]);
        cur = fix_numerator(&step.apply(&cur)?, form)?;
        cur.den_y = [ZERO, cur.den_y[1], ZERO];
        chain.push(step);
    } else if case_b {
        cur.den_y = [ZERO, cur.den_y[1], ZERO];
    } else {
        cur.den_y = [cur.den_y[0], ZERO, ZERO];
    }

    let dmag = cur.den_y.iter().chain(&cur.den_c).map(|z| z.norm()).fold(0.0, f64::max);
    let r2 = cur.den_c[2];
    if r2.norm() <= ZERO_TOL * dmag {
        cur.den_c[2] = ZERO;
        return Ok((XReduction::DegenerateLinear { eq: cur }, chain));
    }
    if (r2 - re(1.0)).norm() > 1e-15 {
        let step = TransformStep::ScaleX(r2.inv());
        cur = fix_numerator(&step.apply(&cur)?, form)?;
        chain.push(step);
    }
    let r2 = cur.den_c[2];
    cur = cur.rescaled(r2.inv());
    cur.num = form.coeffs();
    cur.den_c[2] = re(1.0);

    let atilde = if case_b { ATilde::Linear(cur.den_y[1]) } else { ATilde::Const(cur.den_y[0]) };
    let (b, c) = monic_roots(cur.den_c[0], cur.den_c[1]);
    Ok((XReduction::Reduced { eq: cur, atilde, b, c }, chain))
}

/// The six canonical representatives, plus the degenerate linear case.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CanonicalClass {
    /// `y' = y(y-1) / (a x y + (x-b)(x-c))`
    C1 { a: C64, b: C64, c: C64 },
    /// `y' = y(y-1) / (a y + x(x-c))`
    C2 { a: C64, c: C64 },
    /// `y' = y / (x y + (x-α)(x-β))`
    C3 { alpha: C64, beta: C64 },
    /// `y' = y / (y + x(x-c))`
    C4 { c: C64 },
    /// `y' = 1 / (x y + x² + b)`
    C5 { b: C64 },
    /// `y' = 1 / (y + x²)`
    C6,
    /// Free part lost its x² term; linear after swapping `x` and `y`.
    DegenerateLinear,
}

impl CanonicalClass {
    pub fn tag(&self) -> &'static str {
        match self {
            CanonicalClass::C1 { .. } => "C1",
            CanonicalClass::C2 { .. } => "C2",
            CanonicalClass::C3 { .. } => "C3",
            CanonicalClass::C4 { .. } => "C4",
            CanonicalClass::C5 { .. } => "C5",
            CanonicalClass::C6 => "C6",
            CanonicalClass::DegenerateLinear => "DegenerateLinear",
        }
    }

    pub fn params(&self) -> Vec<(&'static str, C64)> {
        match *self {
            CanonicalClass::C1 { a, b, c } => vec![("a", a), ("b", b), ("c", c)],
            CanonicalClass::C2 { a, c } => vec![("a", a), ("c", c)],
            CanonicalClass::C3 { alpha, beta } => vec![("alpha", alpha), ("beta", beta)],
            CanonicalClass::C4 { c } => vec![("c", c)],
            CanonicalClass::C5 { b } => vec![("b", b)],
            CanonicalClass::C6 | CanonicalClass::DegenerateLinear => vec![],
        }
    }

    /// Same class with parameter `index` shifted by `delta`.
    pub fn perturbed(&self, index: usize, delta: C64) -> Option<CanonicalClass> {
        let mut p: Vec<C64> = self.params().into_iter().map(|(_, v)| v).collect();
        *p.get_mut(index)? += delta;
        Some(match self {
            CanonicalClass::C1 { .. } => CanonicalClass::C1 { a: p[0], b: p[1], c: p[2] },
            CanonicalClass::C2 { .. } => CanonicalClass::C2 { a: p[0], c: p[1] },
            CanonicalClass::C3 { .. } => CanonicalClass::C3 { alpha: p[0], beta: p[1] },
            CanonicalClass::C4 { .. } => CanonicalClass::C4 { c: p[0] },
            CanonicalClass::C5 { .. } => CanonicalClass::C5 { b: p[0] },
            _ => return None,
        })
    }

    /// The representative equation.
    pub fn representative(&self) -> Option<RationalAir> {
        let one = re(1.0);
        let yym1 = [ZERO, -one, one, ZERO];
        let y = [ZERO, one, ZERO, ZERO];
        let unit = [one, ZERO, ZERO, ZERO];
        let eq = match *self {
            CanonicalClass::C1 { a, b, c } => {
                RationalAir { num: yym1, den_y: [ZERO, a, ZERO], den_c: [b * c, -(b + c), one] }
            }
            CanonicalClass::C2 { a, c } => RationalAir { num: yym1, den_y: [a, ZERO, ZERO], den_c: [ZERO, -c, one] },
            CanonicalClass::C3 { alpha, beta } => {
                RationalAir { num: y, den_y: [ZERO, one, ZERO], den_c: [alpha * beta, -(alpha + beta), one] }
            }
            CanonicalClass::C4 { c } => RationalAir { num: y, den_y: [one, ZERO, ZERO], den_c: [ZERO, -c, one] },
            CanonicalClass::C5 { b } => RationalAir { num: unit, den_y: [ZERO, one, ZERO], den_c: [b, ZERO, one] },
            CanonicalClass::C6 => RationalAir { num: unit, den_y: [one, ZERO, ZERO], den_c: [ZERO, ZERO, one] },
            CanonicalClass::DegenerateLinear => return None,
        };
        Some(eq)
    }
}

impl fmt::Display for CanonicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())?;
        let p = self.params();
        if !p.is_empty() {
            let s: Vec<String> = p.iter().map(|(n, v)| format!("{n}={v}")).collect();
            write!(f, "{{{}}}", s.join(", "))?;
        }
        Ok(())
    }
}

fn apply_step(
    chain: &mut TransformChain,
    eq: &RationalAir,
    form: NumeratorForm,
    step: TransformStep,
) -> Result<RationalAir> {
    if step.mobius().is_identity(1e-15) {
        return Ok(*eq);
    }
    let out = fix_numerator(&step.apply(eq)?, form)?;
    chain.push(step);
    Ok(out)
}

/// Rescale so that the x² coefficient of the free part is 1.
fn monic(eq: &RationalAir) -> RationalAir {
    let k = eq.den_c[2].inv();
    let mut out = eq.rescaled(k);
    out.num = eq.num;
    out
}

/// Per-case reductions from `y' = P(y)/(ã y + (x-b)(x-c))` to a canonical class.
pub fn reduce_to_class(
    eq: &RationalAir,
    form: NumeratorForm,
    atilde: ATilde,
    b: C64,
    c: C64,
) -> Result<(CanonicalClass, TransformChain)> {
    let mut chain = TransformChain::new();
    let mut cur = fix_numerator(eq, form)?;
    let sum = -cur.den_c[1] / cur.den_c[2];
    let prod = cur.den_c[0] / cur.den_c[2];
    let class = match (form, atilde) {
        (NumeratorForm::YYm1, ATilde::Linear(a)) => CanonicalClass::C1 { a, b, c },
        (NumeratorForm::YYm1, ATilde::Const(_)) => {
            if b.norm() > 0.0 {
                cur = apply_step(&mut chain, &cur, form, TransformStep::ShiftX(b))?;
            }
            let m = monic(&cur);
            CanonicalClass::C2 { a: m.den_y[0], c: -m.den_c[1] }
        }
        (NumeratorForm::Y, ATilde::Linear(a)) => {
            if a != re(1.0) {
                apply_step(&mut chain, &cur, form, TransformStep::ScaleY(a.inv()))?;
            }
            CanonicalClass::C3 { alpha: b, beta: c }
        }
        (NumeratorForm::Y, ATilde::Const(a)) => {
            if a != re(1.0) {
                cur = apply_step(&mut chain, &cur, form, TransformStep::ScaleY(a.inv()))?;
            }
            if b.norm() > 0.0 {
                cur = apply_step(&mut chain, &cur, form, TransformStep::ShiftX(b))?;
            }
            CanonicalClass::C4 { c: -monic(&cur).den_c[1] }
        }
        (NumeratorForm::One, ATilde::Linear(a)) => {
            if sum.norm() > 0.0 {
                cur = apply_step(&mut chain, &cur, form, TransformStep::ShiftY(sum / a))?;
            }
            cur = apply_step(&mut chain, &cur, form, TransformStep::ScaleY(a.inv()))?;
            let root = a.sqrt();
            cur = apply_step(&mut chain, &cur, form, TransformStep::ScaleX(root))?;
            cur = apply_step(&mut chain, &cur, form, TransformStep::ScaleY(root))?;
            let m = monic(&cur);
            CanonicalClass::C5 { b: m.den_c[0] / m.den_y[1] }
        }
        (NumeratorForm::One, ATilde::Const(a)) => {
            let rscale = 1.0f64.max(prod.norm()).max(sum.norm());
            let a_next = if sum.norm() > ZERO_TOL * rscale {
                // x → -(b+c) x, y → -y/(b+c) - bc/a  gives  y' = 1/(ã y + x² + x)
                cur = apply_step(&mut chain, &cur, form, TransformStep::ScaleX(-sum))?;
                if prod.norm() > 0.0 {
                    cur = apply_step(&mut chain, &cur, form, TransformStep::ShiftY(-prod / a))?;
                }
                cur = apply_step(&mut chain, &cur, form, TransformStep::ScaleY(-sum.inv()))?;
                let at = monic(&cur).den_y[0];
                // x → x ∛ã - 1/2, y → 1/(4ã) + y/∛ã
                let t = at.cbrt();
                cur = apply_step(&mut chain, &cur, form, TransformStep::MobiusOnX(Mobius::affine(t, re(-0.5))?))?;
                apply_step(
                    &mut chain,
                    &cur,
                    form,
                    TransformStep::MobiusOnY(Mobius::affine(t.inv(), (4.0 * at).inv())?),
                )?;
                None
            } else {
                // x → √a x, y → y/√a + b²/a  gives  y' = 1/(ã y + x²)
                let root = a.sqrt();
                if (root - re(1.0)).norm() > 0.0 {
                    cur = apply_step(&mut chain, &cur, form, TransformStep::ScaleX(root))?;
                }
                if prod.norm() > 0.0 {
                    cur = apply_step(&mut chain, &cur, form, TransformStep::ShiftY(-prod / a))?;
                }
                if (root - re(1.0)).norm() > 0.0 {
                    cur = apply_step(&mut chain, &cur, form, TransformStep::ScaleY(root.inv()))?;
                }
                Some(monic(&cur).den_y[0])
            };
            if let Some(at) = a_next {
                let t = at.cbrt();
                if (t - re(1.0)).norm() > 0.0 {
                    cur = apply_step(&mut chain, &cur, form, TransformStep::ScaleX(t))?;
                    apply_step(&mut chain, &cur, form, TransformStep::ScaleY(t.inv()))?;
                }
            }
            CanonicalClass::C6
        }
    };
    Ok((class, chain))
}

/// Output of [`classify`].
#[derive(Clone, Debug)]
pub struct Classification {
    pub class: CanonicalClass,
    /// Substitutions taking the input equation to the representative.
    pub chain: TransformChain,
    pub roots: RootStructure,
    pub form: NumeratorForm,
    /// The equation at the end of the chain (the representative, or the
    /// reduced equation for the degenerate linear case).
    pub reduced: RationalAir,
}

/// Full reduction: numerator normalization, x-reduction, per-case reduction.
pub fn classify(eq: &RationalAir) -> Result<Classification> {
    let norm = normalize_numerator(eq)?;
    let mut chain = norm.chain;
    let (xr, xchain) = reduce_x(&norm.eq, norm.form)?;
    chain.extend(xchain);
    match xr {
        XReduction::DegenerateLinear { eq: reduced } => Ok(Classification {
            class: CanonicalClass::DegenerateLinear,
            chain,
            roots: norm.roots,
            form: norm.form,
            reduced,
        }),
        XReduction::Reduced { eq: reduced, atilde, b, c } => {
            let (class, cchain) = reduce_to_class(&reduced, norm.form, atilde, b, c)?;
            chain.extend(cchain);
            let rep = class.representative().ok_or_else(|| AbelError::Internal("missing representative".into()))?;
            Ok(Classification { class, chain, roots: norm.roots, form: norm.form, reduced: rep })
        }
    }
}
