mod common;

use abel_air::classify::{normalize_numerator, NumeratorForm};
use abel_air::parse::parse_ode;
use abel_air::{c64, classify, CanonicalClass, RationalAir, C64};
use common::{disguise, rand_c, rand_class, TAGS};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn disguised_member(seed: u64, tag: &str) -> (CanonicalClass, RationalAir) {
    let mut rng = StdRng::seed_from_u64(seed);
    let cls = rand_class(&mut rng, tag, 2.0, 0.05);
    let (eq, _, _) = disguise(&cls.representative().unwrap(), &mut rng);
    (cls, eq)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn class_tag_survives_mobius_disguise(seed in any::<u64>(), k in 0usize..6) {
        let (cls, eq) = disguised_member(seed, TAGS[k]);
        let got = classify(&eq).unwrap();
        prop_assert_eq!(got.class.tag(), cls.tag(), "{} came back as {}", cls, got.class);
    }

    #[test]
    fn chain_reaches_the_representative(seed in any::<u64>(), k in 0usize..6) {
        let (_, eq) = disguised_member(seed, TAGS[k]);
        let got = classify(&eq).unwrap();
        let rep = got.class.representative().unwrap();
        let replay = got.chain.apply(&eq).unwrap();
        prop_assert!(replay.projective_distance(&rep) < 1e-8, "distance {:e}", replay.projective_distance(&rep));
        let back = got.chain.invert().unwrap().apply(&rep).unwrap();
        prop_assert!(back.projective_distance(&eq) < 1e-10, "inverse distance {:e}", back.projective_distance(&eq));
    }
}

fn numerator_with_pattern(rng: &mut StdRng, kind: usize) -> [C64; 4] {
    let r1 = rand_c(rng, 1.5);
    let r2 = loop {
        let r = rand_c(rng, 1.5);
        if (r - r1).norm() > 0.3 {
            break r;
        }
    };
    let r3 = loop {
        let r = rand_c(rng, 1.5);
        if (r - r1).norm() > 0.3 && (r - r2).norm() > 0.3 {
            break r;
        }
    };
    let roots = match kind {
        0 => [r1, r2, r3],
        1 => [r1, r1, r2],
        _ => [r1, r1, r1],
    };
    let lead = rand_c(rng, 2.0) + c64(0.5, 0.0);
    let [a, b, c] = roots;
    [-(a * b * c) * lead, (a * b + a * c + b * c) * lead, -(a + b + c) * lead, lead]
}

#[test]
fn root_pattern_selects_the_numerator_form() {
    let mut rng = StdRng::seed_from_u64(42);
    let mut checked = 0;
    for i in 0..300 {
        let kind = i % 3;
        let num = numerator_with_pattern(&mut rng, kind);
        let den_y = [rand_c(&mut rng, 2.0), rand_c(&mut rng, 2.0), rand_c(&mut rng, 2.0)];
        let den_c = [rand_c(&mut rng, 2.0), rand_c(&mut rng, 2.0), rand_c(&mut rng, 2.0)];
        let eq = RationalAir::new(num, den_y, den_c).unwrap();
        let want = [NumeratorForm::YYm1, NumeratorForm::Y, NumeratorForm::One][kind];
        let got = normalize_numerator(&eq).unwrap();
        assert_eq!(got.form, want, "instance {i}");
        let tag = classify(&eq).unwrap().class.tag();
        let allowed: &[&str] = [&["C1", "C2"][..], &["C3", "C4"][..], &["C5", "C6"][..]][kind];
        assert!(allowed.contains(&tag) || tag == "DegenerateLinear", "instance {i}: {tag}");
        checked += 1;
    }
    assert_eq!(checked, 300);
}

#[test]
fn representatives_are_fixed_points() {
    let mut rng = StdRng::seed_from_u64(3);
    for tag in TAGS {
        for _ in 0..10 {
            let cls = rand_class(&mut rng, tag, 2.0, 0.05);
            let got = classify(&cls.representative().unwrap()).unwrap();
            assert_eq!(got.class.tag(), tag);
            assert!(got.chain.is_empty(), "{cls}");
            // b, c (and α, β) are unordered roots of the free part
            let d = got.class.representative().unwrap().projective_distance(&cls.representative().unwrap());
            assert!(d < 1e-12, "{cls} -> {}", got.class);
        }
    }
}

#[test]
fn scaled_x_is_absorbed() {
    // y' = y/(y + (2x)(2x - c)) with x -> 2x is still C4 with the same c
    let c = 0.37;
    let eq = RationalAir::from_real([0.0, 1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, -2.0 * c, 4.0]).unwrap();
    let got = classify(&eq).unwrap();
    assert_eq!(got.class.tag(), "C4");
}

#[test]
fn worked_examples() {
    let cases = [
        ("y' = y/(y + x*(x - 1))", "C4", vec![1.0]),
        ("y' = y/(y + x*(x - 2))", "C4", vec![2.0]),
        ("y' = 1/(x*y + x^2 + 7)", "C5", vec![7.0]),
        ("y' = 1/(y + x^2)", "C6", vec![]),
    ];
    for (text, tag, params) in cases {
        let got = classify(&parse_ode(text).unwrap()).unwrap();
        assert_eq!(got.class.tag(), tag, "{text}");
        for ((_, v), want) in got.class.params().iter().zip(&params) {
            assert!((v - c64(*want, 0.0)).norm() < 1e-12, "{text}: {}", got.class);
        }
    }
}

#[test]
fn linear_free_part_is_degenerate() {
    // free part without an x² term after reduction
    let eq = parse_ode("y' = y*(y - 1)/(y + x)").unwrap();
    let got = classify(&eq).unwrap();
    assert_eq!(got.class, CanonicalClass::DegenerateLinear);
    assert!(got.class.representative().is_none());
}

#[test]
fn separable_input_is_rejected() {
    let eq = parse_ode("y' = (y^3 + 1)/(x^2 + 1)").unwrap();
    assert_eq!(classify(&eq).unwrap_err().code(), "separable");
}

#[test]
fn random_equations_either_classify_or_fail_cleanly() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let eq = common::rand_eq(&mut rng);
        match classify(&eq) {
            Ok(got) => {
                if let Some(rep) = got.class.representative() {
                    assert!(got.chain.apply(&eq).unwrap().projective_distance(&rep) < 1e-8);
                }
            }
            Err(e) => panic!("generic equation failed to classify: {e}"),
        }
    }
}
