#![allow(dead_code)]

pub mod identities;

use abel_air::equation::{apply_mobius_x, apply_mobius_y};
use abel_air::{c64, CanonicalClass, Mobius, RationalAir, C64};
use rand::rngs::StdRng;
use rand::Rng;

pub fn rand_c(rng: &mut StdRng, half_width: f64) -> C64 {
    c64(rng.gen_range(-half_width..half_width), rng.gen_range(-half_width..half_width))
}

/// Möbius map with coefficients uniform in the complex box `[-2, 2]²`,
/// redrawn until `|det| ≥ 0.1 max|coef|²`.
pub fn rand_mobius(rng: &mut StdRng) -> Mobius {
    loop {
        let (p, q, r, s) = (rand_c(rng, 2.0), rand_c(rng, 2.0), rand_c(rng, 2.0), rand_c(rng, 2.0));
        let mag = [p, q, r, s].iter().map(|z| z.norm()).fold(0.0, f64::max);
        if (p * s - r * q).norm() >= 0.1 * mag * mag {
            return Mobius::new(p, q, r, s).unwrap();
        }
    }
}

/// Apply a random Möbius change of `x` followed by one of `y`.
pub fn disguise(eq: &RationalAir, rng: &mut StdRng) -> (RationalAir, Mobius, Mobius) {
    let mx = rand_mobius(rng);
    let my = rand_mobius(rng);
    let out = apply_mobius_y(&apply_mobius_x(eq, &mx).unwrap(), &my).unwrap();
    (out, mx, my)
}

pub fn rand_eq(rng: &mut StdRng) -> RationalAir {
    loop {
        let mut c = [C64::new(0.0, 0.0); 10];
        for v in c.iter_mut() {
            *v = rand_c(rng, 2.0);
        }
        if let Ok(eq) = RationalAir::from_coeffs(c) {
            return eq;
        }
    }
}

fn far_from_integers(v: C64, gap: f64) -> bool {
    (v.re - v.re.round()).abs().hypot(v.im) >= gap
}

/// A class member with parameters in the complex box `[-w, w]²`, kept at
/// least `gap` away from the integer loci the solver cannot handle.
pub fn rand_class(rng: &mut StdRng, tag: &str, w: f64, gap: f64) -> CanonicalClass {
    loop {
        let cls = match tag {
            "C1" => CanonicalClass::C1 { a: rand_c(rng, w), b: rand_c(rng, w), c: rand_c(rng, w) },
            "C2" => CanonicalClass::C2 { a: rand_c(rng, w), c: rand_c(rng, w) },
            "C3" => CanonicalClass::C3 { alpha: rand_c(rng, w), beta: rand_c(rng, w) },
            "C4" => CanonicalClass::C4 { c: rand_c(rng, w) },
            "C5" => CanonicalClass::C5 { b: rand_c(rng, w) },
            "C6" => CanonicalClass::C6,
            _ => unreachable!(),
        };
        if admissible(&cls, gap) {
            return cls;
        }
    }
}

/// Parameters away from the loci where a basis degenerates or the
/// reduction lands in a different class.
pub fn admissible(cls: &CanonicalClass, gap: f64) -> bool {
    let one = C64::new(1.0, 0.0);
    match *cls {
        CanonicalClass::C1 { a, b, c } => {
            let d = a - b - c;
            a.norm() > gap && far_from_integers(b - c, gap) && (d * d - 4.0 * b * c).norm() > gap
        }
        CanonicalClass::C2 { a, c } => a.norm() > gap && far_from_integers(c, gap) && (c * c - 4.0 * a).norm() > gap,
        CanonicalClass::C3 { alpha, beta } => far_from_integers(one + alpha - beta, gap),
        CanonicalClass::C4 { c } => far_from_integers(c, gap),
        CanonicalClass::C5 { .. } | CanonicalClass::C6 => true,
        CanonicalClass::DegenerateLinear => false,
    }
}

pub const TAGS: [&str; 6] = ["C1", "C2", "C3", "C4", "C5", "C6"];
