use abel_air::classify::{cubic_roots, Root, RootPattern};
use abel_air::equation::{apply_mobius_x, apply_mobius_y};
use abel_air::{c64, Mobius, RationalAir, C64};
use nalgebra::Matrix3;
use proptest::prelude::*;

fn cplx(w: f64) -> impl Strategy<Value = C64> {
    (-w..w, -w..w).prop_map(|(a, b)| c64(a, b))
}

fn mobius() -> impl Strategy<Value = Mobius> {
    [cplx(2.0), cplx(2.0), cplx(2.0), cplx(2.0)].prop_filter_map("near-singular", |[p, q, r, s]| {
        let mag = [p, q, r, s].iter().map(|z| z.norm()).fold(0.0, f64::max);
        if (p * s - r * q).norm() < 0.1 * mag * mag {
            return None;
        }
        Mobius::new(p, q, r, s).ok()
    })
}

fn equation() -> impl Strategy<Value = RationalAir> {
    proptest::array::uniform10(cplx(2.0)).prop_filter_map("invalid", |c| RationalAir::from_coeffs(c).ok())
}

/// Chordal distance on the Riemann sphere.
fn chordal(a: Root, b: Root) -> f64 {
    match (a, b) {
        (Root::Infinity, Root::Infinity) => 0.0,
        (Root::Finite(z), Root::Infinity) | (Root::Infinity, Root::Finite(z)) => 2.0 / (1.0 + z.norm_sqr()).sqrt(),
        (Root::Finite(z), Root::Finite(w)) => {
            2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
        }
    }
}

fn map_root(m: &Mobius, r: Root) -> Root {
    let (n, d) = r.projective();
    let num = m.p * d + m.q * n;
    let den = m.r * d + m.s * n;
    if den.norm() <= 1e-14 * num.norm() {
        Root::Infinity
    } else {
        Root::Finite(num / den)
    }
}

fn expand(roots: &[(Root, usize)]) -> Vec<Root> {
    roots.iter().flat_map(|&(r, k)| std::iter::repeat_n(r, k)).collect()
}

fn multiset_distance(a: &[Root], b: &[Root]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for &ra in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, &rb)| (j, chordal(ra, rb)))
            .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

fn numerator_from_roots(roots: [C64; 3]) -> [C64; 4] {
    let [r1, r2, r3] = roots;
    let one = c64(1.0, 0.0);
    [-(r1 * r2 * r3), r1 * r2 + r1 * r3 + r2 * r3, -(r1 + r2 + r3), one]
}

fn min_separation(v: &[C64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            best = best.min((v[i] - v[j]).norm());
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mobius_keeps_the_rational_shape(eq in equation(), m in mobius()) {
        for out in [apply_mobius_y(&eq, &m).unwrap(), apply_mobius_x(&eq, &m).unwrap()] {
            prop_assert!(out.validate().is_ok());
            prop_assert!(out.coeffs().iter().all(|z| z.re.is_finite() && z.im.is_finite()));
            prop_assert!((out.scale() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn y_map_transforms_the_direction_field(eq in equation(), m in mobius(), x in cplx(1.0), yn in cplx(1.0)) {
        let out = apply_mobius_y(&eq, &m).unwrap();
        let d = m.r + m.s * yn;
        prop_assume!(d.norm() > 0.1);
        let y = m.apply(yn).unwrap();
        let (Some(old), Some(new)) = (eq.rhs(x, y), out.rhs(x, yn)) else { return Ok(()) };
        prop_assume!(eq.denominator(x, y).norm() > 1e-3 * eq.scale() && old.norm() < 1e4);
        // y = m(Y): Y' = y' / m'(Y)
        let mprime = (m.q * m.r - m.p * m.s) / (d * d);
        let expect = old / mprime;
        prop_assert!((new - expect).norm() <= 1e-8 * (1.0 + expect.norm()), "{new} vs {expect}");
    }

    #[test]
    fn x_map_transforms_the_direction_field(eq in equation(), m in mobius(), xn in cplx(1.0), y in cplx(1.0)) {
        let out = apply_mobius_x(&eq, &m).unwrap();
        let d = m.r + m.s * xn;
        prop_assume!(d.norm() > 0.1);
        let x = m.apply(xn).unwrap();
        let (Some(old), Some(new)) = (eq.rhs(x, y), out.rhs(xn, y)) else { return Ok(()) };
        prop_assume!(eq.denominator(x, y).norm() > 1e-3 * eq.scale() && old.norm() < 1e4);
        let mprime = (m.q * m.r - m.p * m.s) / (d * d);
        let expect = old * mprime;
        prop_assert!((new - expect).norm() <= 1e-8 * (1.0 + expect.norm()), "{new} vs {expect}");
    }

    #[test]
    fn composition_matches_successive_maps(eq in equation(), m1 in mobius(), m2 in mobius()) {
        let seq_y = apply_mobius_y(&apply_mobius_y(&eq, &m1).unwrap(), &m2).unwrap();
        let once_y = apply_mobius_y(&eq, &m1.compose(&m2)).unwrap();
        prop_assert!(seq_y.projective_distance(&once_y) < 1e-10);
        let seq_x = apply_mobius_x(&apply_mobius_x(&eq, &m1).unwrap(), &m2).unwrap();
        let once_x = apply_mobius_x(&eq, &m1.compose(&m2)).unwrap();
        prop_assert!(seq_x.projective_distance(&once_x) < 1e-10);
    }

    #[test]
    fn inverse_map_undoes(eq in equation(), m in mobius()) {
        let back = apply_mobius_y(&apply_mobius_y(&eq, &m).unwrap(), &m.inverse()).unwrap();
        prop_assert!(back.projective_distance(&eq) < 1e-10);
        let back = apply_mobius_x(&apply_mobius_x(&eq, &m).unwrap(), &m.inverse()).unwrap();
        prop_assert!(back.projective_distance(&eq) < 1e-10);
        prop_assert!(m.compose(&m.inverse()).is_identity(1e-12));
    }

    #[test]
    fn numerator_roots_move_with_the_map(roots in [cplx(1.5), cplx(1.5), cplx(1.5)], m in mobius()) {
        prop_assume!(min_separation(&roots) > 0.3);
        let eq = RationalAir::new(numerator_from_roots(roots), [c64(1.0, 0.0); 3], [c64(0.5, 0.0); 3]).unwrap();
        let out = apply_mobius_y(&eq, &m).unwrap();
        let before = cubic_roots(eq.num[0], eq.num[1], eq.num[2], eq.num[3]).unwrap();
        let after = cubic_roots(out.num[0], out.num[1], out.num[2], out.num[3]).unwrap();
        prop_assert_eq!(after.pattern, RootPattern::ThreeDistinct);
        // y = m(Y), so the new roots are m⁻¹ of the old ones
        let inv = m.inverse();
        let expected: Vec<Root> = expand(&before.roots).into_iter().map(|r| map_root(&inv, r)).collect();
        prop_assert!(multiset_distance(&expected, &expand(&after.roots)) < 1e-8);
    }

    #[test]
    fn multiplicity_pattern_survives(r1 in cplx(1.5), r2 in cplx(1.5), m in mobius(), kind in 0usize..3) {
        prop_assume!((r1 - r2).norm() > 0.3);
        let (roots, pattern) = match kind {
            0 => ([r1, r2, (r1 + r2) * 0.5 + c64(0.0, 0.7)], RootPattern::ThreeDistinct),
            1 => ([r1, r1, r2], RootPattern::TwoDistinct),
            _ => ([r1, r1, r1], RootPattern::OneTriple),
        };
        let eq = RationalAir::new(numerator_from_roots(roots), [c64(1.0, 0.0); 3], [c64(0.5, 0.0); 3]).unwrap();
        let out = apply_mobius_y(&eq, &m).unwrap();
        let rs = cubic_roots(out.num[0], out.num[1], out.num[2], out.num[3]).unwrap();
        prop_assert_eq!(rs.pattern, pattern);
        let total: usize = rs.roots.iter().map(|r| r.1).sum();
        prop_assert_eq!(total, 3);
    }

    #[test]
    fn cubic_roots_match_companion_eigenvalues(c in [cplx(2.0), cplx(2.0), cplx(2.0)], lead in cplx(2.0)) {
        prop_assume!(lead.norm() > 0.5);
        let [a0, a1, a2] = c;
        let zero = c64(0.0, 0.0);
        let one = c64(1.0, 0.0);
        let comp = Matrix3::new(
            zero, zero, -a0 / lead,
            one, zero, -a1 / lead,
            zero, one, -a2 / lead,
        );
        let eig: Vec<C64> = comp.schur().eigenvalues().unwrap().iter().copied().collect();
        prop_assume!(min_separation(&eig) > 1e-2);
        let rs = cubic_roots(a0, a1, a2, lead).unwrap();
        prop_assert_eq!(rs.pattern, RootPattern::ThreeDistinct);
        let ours: Vec<Root> = expand(&rs.roots);
        let theirs: Vec<Root> = eig.into_iter().map(Root::Finite).collect();
        prop_assert!(multiset_distance(&ours, &theirs) < 1e-8);
    }
}

#[test]
fn degree_drop_is_a_root_at_infinity() {
    // y(y - 1): the cubic term vanishes, so ∞ is a simple root
    let rs = cubic_roots(c64(0.0, 0.0), c64(-1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)).unwrap();
    assert_eq!(rs.pattern, RootPattern::ThreeDistinct);
    assert_eq!(rs.infinity_multiplicity(), 1);
    // constant: triple root at ∞
    let rs = cubic_roots(c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)).unwrap();
    assert_eq!(rs.pattern, RootPattern::OneTriple);
    assert_eq!(rs.infinity_multiplicity(), 3);
}

#[test]
fn degenerate_map_is_rejected() {
    let one = c64(1.0, 0.0);
    assert_eq!(Mobius::new(one, one * 2.0, one, one * 2.0).unwrap_err().code(), "degenerate_mobius");
}
