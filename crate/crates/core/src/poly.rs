//! Dense univariate polynomial helpers over `C64`, lowest degree first.

use crate::C64;

pub fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// `(c0 + c1 t)^n`
pub fn linear_pow(c0: C64, c1: C64, n: usize) -> Vec<C64> {
    let mut out = vec![C64::new(1.0, 0.0)];
    for _ in 0..n {
        out = mul(&out, &[c0, c1]);
    }
    out
}

/// Homogeneous substitution: `sum_k c[k] (p + q t)^k (r + s t)^(deg - k)`.
///
/// This is `c(m(t)) * (r + s t)^deg` for the Möbius map `m(t) = (p + q t)/(r + s t)`.
pub fn homogeneous_substitute(c: &[C64], deg: usize, p: C64, q: C64, r: C64, s: C64) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); deg + 1];
    for (k, &ck) in c.iter().enumerate().take(deg + 1) {
        if ck == C64::new(0.0, 0.0) {
            continue;
        }
        let term = mul(&linear_pow(p, q, k), &linear_pow(r, s, deg - k));
        for (o, t) in out.iter_mut().zip(term) {
            *o += ck * t;
        }
    }
    out
}

pub fn eval(c: &[C64], t: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &ck| acc * t + ck)
}

pub fn derivative(c: &[C64]) -> Vec<C64> {
    c.iter().enumerate().skip(1).map(|(k, &ck)| ck * k as f64).collect()
}

/// Roots of `c0 + c1 t + c2 t^2` with `c2 != 0`, using the cancellation-free form.
pub fn quadratic_roots(c0: C64, c1: C64, c2: C64) -> [C64; 2] {
    let disc = (c1 * c1 - 4.0 * c2 * c0).sqrt();
    // pick the sign that avoids cancellation in -c1 -/+ disc
    let d = if (c1.conj() * disc).re >= 0.0 { disc } else { -disc };
    let q = -0.5 * (c1 + d);
    if q.norm() == 0.0 {
        return [C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    }
    [q / c2, c0 / q]
}
