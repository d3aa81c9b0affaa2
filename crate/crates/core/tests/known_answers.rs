mod common;

use common::{c, census, conj, full_residual, rel_dist, C};
use num_rational::BigRational;
use peculiar::error::Error;
use peculiar::homotopy::{refine, Precision};
use peculiar::intpoly::{
    certify_irreducible, irreducible_mod_p, known_answers, known_irreducible_candidates, parse_known_answers,
    rational_roots, verify_known_answers, Certificate, IntPoly,
};
use peculiar::systems::{build_full, ClassTag};
use proptest::prelude::*;

fn poly(c: &[i64]) -> IntPoly {
    IntPoly::new(c.to_vec()).unwrap()
}

/// Remainder of `f` by monic `g` over F_p, both constant term first.
fn rem_mod(f: &[i64], g: &[i64], p: i64) -> Vec<i64> {
    let mut r: Vec<i64> = f.iter().map(|&x| x.rem_euclid(p)).collect();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        for (i, &gi) in g.iter().enumerate() {
            r[shift + i] = (r[shift + i] - lead * gi).rem_euclid(p);
        }
        r.pop();
    }
    r
}

/// Irreducibility over F_p by trial division with every monic polynomial of
/// degree up to half of `deg f`.
fn brute_irreducible(f: &[i64], p: i64) -> bool {
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut k = idx;
            for _ in 0..d {
                g.push(k % p);
                k /= p;
            }
            g.push(1);
            if rem_mod(f, &g, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn mod_p_test_matches_trial_division(
        mut f in prop::collection::vec(-20i64..=20, 2..=5),
        p in prop::sample::select(vec![2i64, 3, 5, 7, 11, 13]),
    ) {
        let last = f.len() - 1;
        if f[last].rem_euclid(p) == 0 {
            f[last] += 1;
        }
        prop_assume!(f[last].rem_euclid(p) != 0);
        let ip = poly(&f);
        let lead_inv = (1..p).find(|&x| (x * f[last]).rem_euclid(p) == 1).unwrap();
        let monic: Vec<i64> = f.iter().map(|&x| (x * lead_inv).rem_euclid(p)).collect();
        prop_assert_eq!(irreducible_mod_p(&ip, p as u64).unwrap(), brute_irreducible(&monic, p));
    }

    #[test]
    fn certificates_are_sound(f in prop::collection::vec(-9i64..=9, 2..=6)) {
        prop_assume!(*f.last().unwrap() != 0);
        let ip = poly(&f);
        if !rational_roots(&ip).is_empty() && ip.degree() > 1 {
            prop_assert_eq!(certify_irreducible(&ip, 200), Certificate::Inconclusive);
        }
    }
}

#[test]
fn certifying_primes() {
    let cubic_a = poly(&[-1, 0, 2, 2]);
    let cubic_b = poly(&[1, 1, 2, 1]);
    let candidates = known_irreducible_candidates();
    assert_eq!(candidates.len(), 3);
    assert!(candidates.contains(&cubic_a) && candidates.contains(&cubic_b));
    for f in &candidates {
        let Certificate::Irreducible { prime } = certify_irreducible(f, 200) else {
            panic!("no certificate for {:?}", f.coeffs());
        };
        assert!(prime <= 200);
        let oracle = (2..=prime as i64)
            .filter(|&p| (2..p).all(|d| p % d != 0) && f.leading() % p != 0)
            .find(|&p| brute_irreducible_large(f, p))
            .unwrap();
        assert_eq!(prime as i64, oracle, "{:?}", f.coeffs());
        assert!(rational_roots(f).is_empty());
    }
}

/// Trial division while `p^(deg/2)` stays small; above that a root scan can
/// only refute, and the library test decides.
fn brute_irreducible_large(f: &IntPoly, p: i64) -> bool {
    let lead_inv = (1..p).find(|&x| (x * f.leading()).rem_euclid(p) == 1).unwrap();
    let monic: Vec<i64> = f.coeffs().iter().map(|&x| (x * lead_inv).rem_euclid(p)).collect();
    if (p as f64).powi(f.degree() as i32 / 2) <= 2e6 {
        brute_irreducible(&monic, p)
    } else {
        let has_root = (0..p).any(|x| monic.iter().rev().fold(0, |acc, &a| (acc * x + a).rem_euclid(p)) == 0);
        !has_root && irreducible_mod_p(f, p as u64).unwrap()
    }
}

#[test]
fn small_irreducibility_examples() {
    assert!(!irreducible_mod_p(&poly(&[-1, 0, 1]), 5).unwrap());
    assert_eq!(
        certify_irreducible(&poly(&[1, 0, 0, 0, 1]), 200),
        Certificate::Inconclusive
    );
    assert_eq!(
        certify_irreducible(&poly(&[1, 0, 0, 0, 1]), 2000),
        Certificate::Inconclusive
    );
    assert!(matches!(
        irreducible_mod_p(&poly(&[1, 0, 2]), 2),
        Err(Error::BadPrime { .. })
    ));
    assert!(matches!(
        irreducible_mod_p(&poly(&[1, 1, 1]), 9),
        Err(Error::BadPrime { .. })
    ));
}

#[test]
fn rational_root_examples() {
    let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    assert_eq!(rational_roots(&poly(&[-1, 0, 1])), vec![r(-1, 1), r(1, 1)]);
    assert_eq!(rational_roots(&poly(&[-1, 0, 2, 2])), vec![]);
    assert_eq!(rational_roots(&poly(&[1, 1, 2, 1])), vec![]);
    assert_eq!(rational_roots(&poly(&[-1, 0, 4])), vec![r(-1, 2), r(1, 2)]);
    assert_eq!(rational_roots(&poly(&[0, 0, 3, 1])), vec![r(-3, 1), r(0, 1)]);
}

#[test]
fn known_answers_match_censuses() {
    for n in 2..=4 {
        let audit = verify_known_answers(n, &census(n)).unwrap();
        assert!(audit.passes, "degree {n}: {audit:?}");
    }
    assert!(verify_known_answers(5, &census(4)).is_err());
    assert!(matches!(
        verify_known_answers(3, &census(4)),
        Err(Error::DegreeMismatch { .. })
    ));
}

#[test]
fn degree_three_formulas_fix_sign_of_y3() {
    let ka = known_answers();
    let a = ka
        .iter()
        .find(|a| a.degree_n == 3 && a.class_tag == ClassTag::Pt)
        .unwrap();
    let roots = a.defining_poly.complex_roots().unwrap();
    assert_eq!(roots.len(), 3);
    for w in roots {
        let y1 = w;
        let y2 = -1.0 - 2.0 * w + 2.0 * w.powu(3);
        let corrected = [y1, y2, 1.0 - 2.0 * w.powu(3)];
        let flipped = [y1, y2, -1.0 - 2.0 * w.powu(3)];
        assert!(full_residual(&corrected) < 1e-12);
        let sigma1_gap = (flipped[0] + flipped[1] + flipped[2] + flipped[0]).norm();
        assert!((sigma1_gap - 2.0).abs() < 1e-12);
    }
}

#[test]
fn substitution_residual_shrinks_quadratically() {
    for a in known_answers() {
        let s = build_full(a.degree_n).unwrap();
        let double = a
            .points()
            .unwrap()
            .iter()
            .map(|p| s.residual(p).unwrap())
            .fold(0.0, f64::max);
        let extended = a
            .points_dd()
            .unwrap()
            .iter()
            .map(|p| s.residual_dd(p).unwrap())
            .fold(0.0, f64::max);
        let unit = double.max(f64::EPSILON);
        assert!(double < 1e-9, "degree {}: {double:e}", a.degree_n);
        assert!(
            extended <= 1e3 * unit * unit,
            "degree {}: {double:e} -> {extended:e}",
            a.degree_n
        );
    }
}

#[test]
fn degree_four_pt_points_form_seven_conjugate_pairs() {
    let ka = known_answers();
    let a = ka
        .iter()
        .find(|a| a.degree_n == 4 && a.class_tag == ClassTag::Pt)
        .unwrap();
    let pts = a.points().unwrap();
    assert_eq!(pts.len(), 14);
    let mut paired = vec![false; 14];
    let mut pairs = 0;
    for i in 0..14 {
        if paired[i] {
            continue;
        }
        let j = (0..14)
            .find(|&j| j != i && !paired[j] && rel_dist(&conj(&pts[i]), &pts[j]) < 1e-6)
            .unwrap();
        paired[i] = true;
        paired[j] = true;
        pairs += 1;
        assert!(pts[i].iter().any(|z| z.im.abs() > 1e-6), "real point {:?}", pts[i]);
    }
    assert_eq!(pairs, 7);
}

#[test]
fn refined_real_point_satisfies_cubic() {
    let r = census(3);
    let p = r
        .solutions
        .iter()
        .find(|p| p.class_tag == ClassTag::Pt && p.is_real)
        .unwrap();
    assert!((p.y[0].re - 0.5651977).abs() < 1e-6);
    let s = build_full(3).unwrap();
    let start: Vec<C> = p.y.iter().map(|z| z + c(1e-7, 0.0)).collect();
    for precision in [Precision::Double, Precision::Extended] {
        let y = refine(&s, &start, precision).unwrap();
        let w = y[0];
        assert!((2.0 * w.powu(3) + 2.0 * w * w - 1.0).norm() < 1e-12);
    }
}

#[test]
fn malformed_data_is_rejected() {
    let wrong_version = "schema_version = 2\n[[answer]]\ndegree = 2\nclass = \"p0\"\ndefining_poly = [-1, 1]\ny = [{ w = [0] }, { w = [0] }]\n";
    assert!(matches!(
        parse_known_answers(wrong_version),
        Err(Error::KnownAnswerData(_))
    ));
    let short =
        "schema_version = 1\n[[answer]]\ndegree = 3\nclass = \"p0\"\ndefining_poly = [-1, 1]\ny = [{ w = [0] }]\n";
    assert!(matches!(parse_known_answers(short), Err(Error::KnownAnswerData(_))));
    let ok = "schema_version = 1\n[[answer]]\ndegree = 2\nclass = \"p0\"\ndefining_poly = [-1, 1]\ny = [{ w = [0] }, { w = [0] }]\n";
    assert_eq!(parse_known_answers(ok).unwrap().len(), 1);
}
