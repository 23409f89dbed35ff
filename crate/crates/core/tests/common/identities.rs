//! Special-function identities over randomized parameter draws. Each check
//! reports the worst relative error seen and its tolerance.

use std::f64::consts::PI;

use abel_air::specfun::*;
use abel_air::{c64, re, C64};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub struct Check {
    pub name: &'static str,
    pub worst: f64,
    pub tol: f64,
    pub failures: Vec<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.worst < self.tol
    }
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

fn d1(f: &dyn Fn(C64) -> C64, z: C64, h: f64) -> C64 {
    (-f(z + 2.0 * h) + 8.0 * f(z + h) - 8.0 * f(z - h) + f(z - 2.0 * h)) / (12.0 * h)
}

fn d2(f: &dyn Fn(C64) -> C64, z: C64, h: f64) -> C64 {
    (-f(z + 2.0 * h) + 16.0 * f(z + h) - 30.0 * f(z) + 16.0 * f(z - h) - f(z - 2.0 * h)) / (12.0 * h * h)
}

fn uni(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

fn cbox(rng: &mut StdRng, re_lo: f64, re_hi: f64, im: f64) -> C64 {
    c64(uni(rng, re_lo, re_hi), uni(rng, -im, im))
}

fn off_integer(rng: &mut StdRng, lo: f64, hi: f64, im: f64) -> C64 {
    loop {
        let v = cbox(rng, lo, hi, im);
        if integer_distance(v) > 0.05 {
            return v;
        }
    }
}

/// `U(a, b, z) = Γ(a)⁻¹ ∫₀^∞ e^{-zt} t^{a-1} (1+t)^{b-a-1} dt` by the
/// double-exponential rule `t = exp(π/2 sinh s)`; needs `Re a > 0`, `Re z > 0`.
fn kummer_u_quadrature(a: C64, b: C64, z: C64) -> C64 {
    let h = 1.0 / 128.0;
    let mut s = re(0.0);
    for k in -6 * 128..=6 * 128 {
        let u = k as f64 * h;
        let t = (PI / 2.0 * u.sinh()).exp();
        if t == 0.0 || !t.is_finite() {
            continue;
        }
        let tt = re(t);
        let v = (-z * t).exp() * tt.powc(a) * (1.0 + tt).powc(b - a - 1.0) * (PI / 2.0 * u.cosh());
        if v.re.is_finite() && v.im.is_finite() {
            s += v;
        }
    }
    s * h / gamma(a).unwrap()
}

/// `J_ν(z) = (z/2)^ν / (√π Γ(ν+½)) · 2∫₀^{π/2} cos(z cos θ) sin^{2ν} θ dθ`
/// by tanh-sinh quadrature; needs `Re ν > -½`.
fn bessel_j_poisson(nu: C64, z: C64) -> C64 {
    let h = 1.0 / 128.0;
    let mut s = re(0.0);
    for k in -5 * 128..=5 * 128 {
        let u = k as f64 * h;
        let e = (-PI * u.sinh()).exp();
        let sig = 1.0 / (1.0 + e);
        let theta = PI / 2.0 * sig;
        let w = PI / 2.0 * sig * (e * sig) * PI * u.cosh();
        if theta == 0.0 || !w.is_finite() || w == 0.0 {
            continue;
        }
        let v = (z * theta.cos()).cos() * re(theta.sin()).powc(2.0 * nu) * w;
        if v.re.is_finite() && v.im.is_finite() {
            s += v;
        }
    }
    (z / 2.0).powc(nu) / (PI.sqrt() * gamma(nu + 0.5).unwrap()) * 2.0 * s * h
}

struct Acc {
    check: Check,
}

impl Acc {
    fn new(name: &'static str, tol: f64) -> Self {
        Acc { check: Check { name, worst: 0.0, tol, failures: Vec::new() } }
    }

    fn record(&mut self, what: String, r: abel_air::Result<f64>) {
        match r {
            Ok(e) if e.is_finite() => self.check.worst = self.check.worst.max(e),
            Ok(e) => self.check.failures.push(format!("{what}: error {e}")),
            Err(err) => self.check.failures.push(format!("{what}: {err}")),
        }
    }
}

pub fn run_all(draws: usize, seed: u64) -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(seed);
    let r = &mut rng;
    let mut out = Vec::new();

    let mut acc = Acc::new("gamma recurrence", 1e-12);
    for _ in 0..draws {
        let z = off_integer(r, -4.0, 6.0, 2.0);
        acc.record(format!("z={z}"), (|| Ok(rel(gamma(z + 1.0)?, z * gamma(z)?)))());
    }
    out.push(acc.check);

    let mut acc = Acc::new("gamma reflection", 1e-11);
    for _ in 0..draws {
        let z = off_integer(r, -3.0, 4.0, 1.5);
        acc.record(format!("z={z}"), (|| Ok(rel(gamma(z)? * gamma(1.0 - z)?, PI / (z * PI).sin())))());
    }
    out.push(acc.check);

    let mut acc = Acc::new("2F1(a, b; b; z) = (1-z)^-a", 1e-12);
    for _ in 0..draws {
        let a = cbox(r, -2.0, 2.0, 1.0);
        let b = off_integer(r, -2.0, 3.0, 1.0);
        let z = cbox(r, -0.9, 0.9, 0.4);
        acc.record(format!("a={a} b={b} z={z}"), (|| Ok(rel(hyp2f1(a, b, b, z)?, (1.0 - z).powc(-a))))());
    }
    out.push(acc.check);

    let mut acc = Acc::new("2F1(1, 1; 2; z) = -ln(1-z)/z", 1e-12);
    for _ in 0..draws {
        let z = cbox(r, -0.9, 0.9, 0.4);
        acc.record(format!("z={z}"), (|| Ok(rel(hyp2f1(re(1.0), re(1.0), re(2.0), z)?, -(1.0 - z).ln() / z)))());
    }
    out.push(acc.check);

    let mut acc = Acc::new("Kummer transformation", 1e-12);
    let cfg = SeriesConfig::default();
    for _ in 0..draws {
        let a = cbox(r, -2.0, 2.0, 1.0);
        let b = off_integer(r, -2.0, 3.0, 1.0);
        let z = cbox(r, 0.0, 3.0, 1.0);
        acc.record(
            format!("a={a} b={b} z={z}"),
            (|| {
                let lhs = pfq_series("M", &[a], &[b], z, &cfg)?;
                let rhs = z.exp() * pfq_series("M", &[b - a], &[b], -z, &cfg)?;
                Ok(rel(lhs, rhs)
                    .max(rel(kummer_m(a, b, z)?, lhs))
                    .max(rel(kummer_m(a, b, -z)?, (-z).exp() * pfq_series("M", &[b - a], &[b], z, &cfg)?)))
            })(),
        );
    }
    out.push(acc.check);

    let mut acc = Acc::new("M/U Wronskian", 1e-8);
    for _ in 0..draws {
        let a = off_integer(r, -1.5, 2.0, 0.5);
        let b = off_integer(r, 0.2, 2.5, 0.5);
        let z = cbox(r, 0.5, 2.5, 0.5);
        acc.record(
            format!("a={a} b={b} z={z}"),
            (|| {
                let m = |t: C64| kummer_m(a, b, t).unwrap();
                let u = |t: C64| kummer_u(a, b, t).unwrap();
                let w = m(z) * d1(&u, z, 1e-3) - d1(&m, z, 1e-3) * u(z);
                let want = -gamma(b)? * rgamma(a) * z.powc(-b) * z.exp();
                Ok(rel(w, want))
            })(),
        );
    }
    out.push(acc.check);

    let mut acc = Acc::new("U differential equation", 1e-7);
    for _ in 0..draws {
        let a = cbox(r, -1.5, 2.0, 0.5);
        let b = off_integer(r, 0.2, 2.5, 0.5);
        let z = cbox(r, 0.8, 2.5, 0.5);
        acc.record(
            format!("a={a} b={b} z={z}"),
            (|| {
                kummer_u(a, b, z)?;
                let u = |t: C64| kummer_u(a, b, t).unwrap();
                let res = z * d2(&u, z, 1e-3) + (b - z) * d1(&u, z, 1e-3) - a * u(z);
                Ok(res.norm() / (1.0 + u(z).norm()))
            })(),
        );
    }
    out.push(acc.check);

    let mut acc = Acc::new("U against its integral", 1e-8);
    for _ in 0..draws {
        let a = cbox(r, 1.0, 2.0, 0.3);
        let b = off_integer(r, 0.2, 2.5, 0.3);
        let z = cbox(r, 0.8, 2.0, 0.3);
        acc.record(format!("a={a} b={b} z={z}"), (|| Ok(rel(kummer_u(a, b, z)?, kummer_u_quadrature(a, b, z))))());
    }
    out.push(acc.check);

    let mut acc = Acc::new("Bessel Wronskian 2/(pi z)", 1e-9);
    for _ in 0..draws {
        let nu = off_integer(r, -2.5, 3.0, 0.5);
        let z = cbox(r, 0.5, 3.0, 0.5);
        acc.record(
            format!("nu={nu} z={z}"),
            (|| {
                bessel_y(nu, z)?;
                let j = |t: C64| bessel_j(nu, t).unwrap();
                let y = |t: C64| bessel_y(nu, t).unwrap();
                let w = j(z) * d1(&y, z, 1e-3) - d1(&j, z, 1e-3) * y(z);
                Ok(rel(w, 2.0 / (PI * z)))
            })(),
        );
    }
    out.push(acc.check);

    let mut acc = Acc::new("Bessel recurrence", 1e-12);
    for _ in 0..draws {
        let nu = cbox(r, -2.5, 3.0, 0.5);
        let z = cbox(r, 0.3, 4.0, 1.0);
        acc.record(
            format!("nu={nu} z={z}"),
            (|| {
                let lhs = bessel_j(nu - 1.0, z)? + bessel_j(nu + 1.0, z)?;
                let rhs = 2.0 * nu / z * bessel_j(nu, z)?;
                let scale = 1.0 + bessel_j(nu - 1.0, z)?.norm() + bessel_j(nu + 1.0, z)?.norm();
                Ok((lhs - rhs).norm() / scale)
            })(),
        );
    }
    out.push(acc.check);

    let mut acc = Acc::new("0F1 and J", 1e-12);
    for _ in 0..draws {
        let nu = off_integer(r, -0.9, 3.0, 0.5);
        let z = cbox(r, 0.3, 3.0, 1.0);
        acc.record(
            format!("nu={nu} z={z}"),
            (|| {
                let via = (z / 2.0).powc(nu) * rgamma(nu + 1.0) * hyp0f1(nu + 1.0, -z * z / 4.0)?;
                Ok(rel(bessel_j(nu, z)?, via))
            })(),
        );
    }
    out.push(acc.check);

    let mut acc = Acc::new("J against its integral", 1e-11);
    for _ in 0..draws {
        let nu = cbox(r, -0.3, 3.0, 0.5);
        let z = cbox(r, 0.3, 3.0, 1.0);
        acc.record(format!("nu={nu} z={z}"), (|| Ok(rel(bessel_j(nu, z)?, bessel_j_poisson(nu, z))))());
    }
    out.push(acc.check);

    let mut acc = Acc::new("0F1(; 1/2; -z^2/4) = cos z", 1e-12);
    for _ in 0..draws {
        let z = cbox(r, -3.0, 3.0, 1.0);
        acc.record(format!("z={z}"), (|| Ok(rel(hyp0f1(re(0.5), -z * z / 4.0)?, z.cos())))());
    }
    out.push(acc.check);

    let mut acc = Acc::new("Airy Wronskian 1/pi", 1e-12);
    for _ in 0..draws {
        let z = cbox(r, -3.0, 3.0, 2.0);
        acc.record(
            format!("z={z}"),
            (|| Ok(rel(airy_ai(z)? * airy_bi_prime(z)? - airy_ai_prime(z)? * airy_bi(z)?, re(1.0 / PI))))(),
        );
    }
    out.push(acc.check);

    let mut acc = Acc::new("Ai'' = z Ai", 1e-7);
    for _ in 0..draws {
        let z = cbox(r, -3.0, 3.0, 2.0);
        let f = |t: C64| airy_ai(t).unwrap();
        acc.record(format!("z={z}"), Ok((d2(&f, z, 1e-3) - z * f(z)).norm() / (1.0 + f(z).norm())));
    }
    out.push(acc.check);

    let mut acc = Acc::new("Airy derivatives", 1e-9);
    for _ in 0..draws {
        let z = cbox(r, -3.0, 3.0, 2.0);
        acc.record(
            format!("z={z}"),
            (|| {
                let ai = |t: C64| airy_ai(t).unwrap();
                let bi = |t: C64| airy_bi(t).unwrap();
                Ok(rel(airy_ai_prime(z)?, d1(&ai, z, 1e-3)).max(rel(airy_bi_prime(z)?, d1(&bi, z, 1e-3))))
            })(),
        );
    }
    out.push(acc.check);

    let mut acc = Acc::new("confluence limit", 1e-5);
    for _ in 0..draws {
        let a = cbox(r, -1.0, 2.0, 0.5);
        let c = off_integer(r, 0.2, 2.5, 0.5);
        let z = cbox(r, -1.0, 1.0, 0.5);
        let b = re(1e6);
        acc.record(format!("a={a} c={c} z={z}"), (|| Ok(rel(hyp2f1(a, b, c, z / b)?, kummer_m(a, c, z)?)))());
    }
    out.push(acc.check);

    out
}
