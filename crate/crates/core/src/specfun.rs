//! Gamma, Gauss and confluent hypergeometric functions, Bessel and Airy
//! functions in complex double precision.
//!
//! Everything is built from power series plus a few connection formulas; no
//! asymptotic expansions, so arguments should stay moderate (|z| ≲ 20).
//! Principal branches are used for every non-integer power.

use std::f64::consts::PI;

use crate::error::{AbelError, Result};
use crate::{re, C64};

/// Termination control for the power series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesConfig {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig { rel_tol: 1e-15, max_terms: 100_000 }
    }
}

/// Offset used when a Kummer `U` or Bessel `Y` parameter sits on an integer.
pub const INTEGER_PERTURBATION: f64 = 1e-6;

pub fn is_nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// Distance from `z` to the nearest integer (on the real axis).
pub fn integer_distance(z: C64) -> f64 {
    (z.re - z.re.round()).abs().hypot(z.im)
}

fn pole(function: &'static str, parameter: C64) -> AbelError {
    AbelError::Pole { function, parameter: format!("{parameter}") }
}

/// `sin(πz)` with the integer part of `Re z` removed first, so that the
/// result keeps full relative accuracy next to the zeros.
pub fn sin_pi(z: C64) -> C64 {
    let n = z.re.round();
    let s = ((z - n) * PI).sin();
    if n % 2.0 == 0.0 {
        s
    } else {
        -s
    }
}

/// `cos(πz)`, reduced like [`sin_pi`].
pub fn cos_pi(z: C64) -> C64 {
    let n = z.re.round();
    let c = ((z - n) * PI).cos();
    if n % 2.0 == 0.0 {
        c
    } else {
        -c
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Γ(z)`: Lanczos approximation, reflection for `Re z < 1/2`.
pub fn gamma(z: C64) -> Result<C64> {
    if is_nonpositive_integer(z) {
        return Err(pole("gamma", z));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: C64) -> C64 {
    if z.re < 0.5 {
        let s = sin_pi(z);
        return PI / (s * gamma_unchecked(1.0 - z));
    }
    let z = z - 1.0;
    let mut x = re(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// `1/Γ(z)`, entire; zero at the non-positive integers.
pub fn rgamma(z: C64) -> C64 {
    if is_nonpositive_integer(z) {
        return re(0.0);
    }
    if z.re < 0.5 {
        // 1/Γ(z) = Γ(1-z) sin(πz)/π
        return gamma_unchecked(1.0 - z) * sin_pi(z) / PI;
    }
    gamma_unchecked(z).inv()
}

/// Generalized hypergeometric series `pFq(num; den; z)`, summed until the
/// relative term size falls below `cfg.rel_tol` twice in a row.
pub fn pfq_series(function: &'static str, num: &[C64], den: &[C64], z: C64, cfg: &SeriesConfig) -> Result<C64> {
    if let Some(&b) = den.iter().find(|b| is_nonpositive_integer(**b)) {
        return Err(pole(function, b));
    }
    let mut term = re(1.0);
    let mut sum = re(1.0);
    let mut small = 0;
    for k in 0..cfg.max_terms {
        let kf = k as f64;
        let mut ratio = z / (kf + 1.0);
        for a in num {
            ratio *= a + kf;
        }
        for b in den {
            ratio /= b + kf;
        }
        term *= ratio;
        if term.norm() == 0.0 {
            return Ok(sum);
        }
        sum += term;
        if !sum.re.is_finite() || !sum.im.is_finite() {
            return Err(AbelError::NonFinite(function));
        }
        if term.norm() <= cfg.rel_tol * sum.norm() {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(AbelError::Convergence { function, terms: cfg.max_terms })
}

/// Gauss hypergeometric function `₂F₁(a, b; c; z)`.
///
/// Direct series for `|z| <= 0.8`, Pfaff transformation
/// `(1-z)^(-a) ₂F₁(a, c-b; c; z/(z-1))` when that lands inside `0.95`,
/// otherwise the direct series up to `|z| <= 0.95`.
pub fn hyp2f1(a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    const F: &str = "hyp2f1";
    if is_nonpositive_integer(c) {
        return Err(pole(F, c));
    }
    let cfg = SeriesConfig::default();
    if z.norm() <= 0.8 {
        return pfq_series(F, &[a, b], &[c], z, &cfg);
    }
    let w = z / (z - 1.0);
    if w.norm() <= 0.95 {
        let f = pfq_series(F, &[a, c - b], &[c], w, &cfg)?;
        return Ok((1.0 - z).powc(-a) * f);
    }
    if z.norm() <= 0.95 {
        return pfq_series(F, &[a, b], &[c], z, &cfg);
    }
    Err(AbelError::Domain {
        function: F,
        detail: format!("|z| = {:.3} and |z/(z-1)| = {:.3} both exceed 0.95", z.norm(), w.norm()),
    })
}

/// `d/dz ₂F₁(a, b; c; z) = (ab/c) ₂F₁(a+1, b+1; c+1; z)`
pub fn hyp2f1_prime(a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    Ok(a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, z)?)
}

/// Kummer's function `M(a, b, z) = ₁F₁(a; b; z)`.
///
/// For `Re z < 0` the Kummer transformation `e^z M(b-a, b, -z)` avoids the
/// alternating-sign cancellation.
pub fn kummer_m(a: C64, b: C64, z: C64) -> Result<C64> {
    const F: &str = "kummer_M";
    if is_nonpositive_integer(b) {
        return Err(pole(F, b));
    }
    let cfg = SeriesConfig::default();
    if z.re < 0.0 && !is_nonpositive_integer(a) {
        return Ok(z.exp() * pfq_series(F, &[b - a], &[b], -z, &cfg)?);
    }
    pfq_series(F, &[a], &[b], z, &cfg)
}

/// `d/dz M(a, b, z) = (a/b) M(a+1, b+1, z)`
pub fn kummer_m_prime(a: C64, b: C64, z: C64) -> Result<C64> {
    Ok(a / b * kummer_m(a + 1.0, b + 1.0, z)?)
}

/// Kummer's function of the second kind via the connection formula
/// `U = Γ(1-b)/Γ(a-b+1) M(a,b,z) + Γ(b-1)/Γ(a) z^(1-b) M(a-b+1, 2-b, z)`.
///
/// Integer `b` is rejected; see [`kummer_u_perturbed`].
pub fn kummer_u(a: C64, b: C64, z: C64) -> Result<C64> {
    const F: &str = "kummer_U";
    if b.im == 0.0 && b.re.fract() == 0.0 {
        return Err(AbelError::UnsupportedParameter {
            function: F,
            detail: format!("integer b = {}; perturb b by {INTEGER_PERTURBATION:e}", b.re),
        });
    }
    if z.norm() == 0.0 {
        return Err(AbelError::Domain { function: F, detail: "z = 0".into() });
    }
    let g1 = gamma(1.0 - b)? * rgamma(a - b + 1.0);
    let g2 = gamma(b - 1.0)? * rgamma(a);
    let mut out = re(0.0);
    if g1.norm() != 0.0 {
        out += g1 * kummer_m(a, b, z)?;
    }
    if g2.norm() != 0.0 {
        out += g2 * z.powc(1.0 - b) * kummer_m(a - b + 1.0, 2.0 - b, z)?;
    }
    Ok(out)
}

/// Whether `v` is an exact integer.
pub fn is_integer(v: C64) -> bool {
    v.im == 0.0 && v.re.fract() == 0.0
}

/// [`kummer_u`] with integer `b` replaced by the mean over `b ± ε`,
/// `ε = INTEGER_PERTURBATION`; the error of the mean is `O(ε²)` plus the
/// cancellation in the connection formula, about `1e-10` overall. The flag
/// reports whether the average was needed.
pub fn kummer_u_perturbed(a: C64, b: C64, z: C64) -> Result<(C64, bool)> {
    if !is_integer(b) {
        return Ok((kummer_u(a, b, z)?, false));
    }
    let e = INTEGER_PERTURBATION;
    Ok(((kummer_u(a, b + e, z)? + kummer_u(a, b - e, z)?) / 2.0, true))
}

/// `d/dz U(a, b, z) = -a U(a+1, b+1, z)`
pub fn kummer_u_prime(a: C64, b: C64, z: C64) -> Result<C64> {
    Ok(-a * kummer_u(a + 1.0, b + 1.0, z)?)
}

/// `₀F₁(; b; z)`
pub fn hyp0f1(b: C64, z: C64) -> Result<C64> {
    pfq_series("hyp0f1", &[], &[b], z, &SeriesConfig::default())
}

/// Bessel function of the first kind `J_ν(z) = (z/2)^ν/Γ(ν+1) ₀F₁(; ν+1; -z²/4)`.
pub fn bessel_j(nu: C64, z: C64) -> Result<C64> {
    const F: &str = "bessel_J";
    if is_nonpositive_integer(nu) && nu.re != 0.0 {
        // J_{-n} = (-1)^n J_n
        let n = -nu.re;
        let sign = if n as i64 % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * bessel_j(re(n), z)?);
    }
    if z.norm() == 0.0 {
        return if nu.norm() == 0.0 {
            Ok(re(1.0))
        } else if nu.re > 0.0 {
            Ok(re(0.0))
        } else {
            Err(AbelError::Domain { function: F, detail: "z = 0 with Re ν <= 0".into() })
        };
    }
    let series = hyp0f1(nu + 1.0, -z * z / 4.0)?;
    Ok((z / 2.0).powc(nu) * rgamma(nu + 1.0) * series)
}

/// Bessel function of the second kind `Y_ν = (J_ν cos νπ - J_{-ν}) / sin νπ`.
///
/// Integer `ν` is rejected; see [`bessel_y_perturbed`].
pub fn bessel_y(nu: C64, z: C64) -> Result<C64> {
    const F: &str = "bessel_Y";
    if nu.im == 0.0 && nu.re.fract() == 0.0 {
        return Err(AbelError::UnsupportedParameter {
            function: F,
            detail: format!("integer order {}; perturb by {INTEGER_PERTURBATION:e}", nu.re),
        });
    }
    if z.norm() == 0.0 {
        return Err(AbelError::Domain { function: F, detail: "z = 0".into() });
    }
    Ok((bessel_j(nu, z)? * cos_pi(nu) - bessel_j(-nu, z)?) / sin_pi(nu))
}

/// [`bessel_y`] with integer order replaced by the mean over `ν ± ε`
/// (see [`kummer_u_perturbed`]).
pub fn bessel_y_perturbed(nu: C64, z: C64) -> Result<(C64, bool)> {
    if !is_integer(nu) {
        return Ok((bessel_y(nu, z)?, false));
    }
    let e = INTEGER_PERTURBATION;
    Ok(((bessel_y(nu + e, z)? + bessel_y(nu - e, z)?) / 2.0, true))
}

fn airy_parts(z: C64) -> Result<(C64, C64, C64, C64)> {
    let w = z * z * z / 9.0;
    let f = hyp0f1(re(2.0 / 3.0), w)?;
    let g = z * hyp0f1(re(4.0 / 3.0), w)?;
    let fp = z * z / 2.0 * hyp0f1(re(5.0 / 3.0), w)?;
    let gp = hyp0f1(re(4.0 / 3.0), w)? + z * z * z / 4.0 * hyp0f1(re(7.0 / 3.0), w)?;
    Ok((f, g, fp, gp))
}

fn airy_constants() -> (f64, f64) {
    let g23 = gamma_unchecked(re(2.0 / 3.0)).re;
    let c1 = 3f64.powf(-2.0 / 3.0) / g23;
    let c2 = g23 * 3f64.powf(1.0 / 6.0) / (2.0 * PI);
    (c1, c2)
}

pub fn airy_ai(z: C64) -> Result<C64> {
    let (c1, c2) = airy_constants();
    let (f, g, _, _) = airy_parts(z)?;
    Ok(c1 * f - c2 * g)
}

pub fn airy_bi(z: C64) -> Result<C64> {
    let (c1, c2) = airy_constants();
    let (f, g, _, _) = airy_parts(z)?;
    Ok(3f64.sqrt() * (c1 * f + c2 * g))
}

pub fn airy_ai_prime(z: C64) -> Result<C64> {
    let (c1, c2) = airy_constants();
    let (_, _, fp, gp) = airy_parts(z)?;
    Ok(c1 * fp - c2 * gp)
}

pub fn airy_bi_prime(z: C64) -> Result<C64> {
    let (c1, c2) = airy_constants();
    let (_, _, fp, gp) = airy_parts(z)?;
    Ok(3f64.sqrt() * (c1 * fp + c2 * gp))
}
