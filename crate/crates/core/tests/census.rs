mod common;

use common::{
    c, census, closed_under_conjugation, dedup, full_residual, halton_polydisc, newton_full, points, rel_dist,
    same_point_sets, C,
};
use peculiar::classify::{check_conjecture, check_recursion, enumerate, stein_filter};
use peculiar::homotopy::{solve, TrackOptions};
use peculiar::report::{to_json, EnumerationDocument, SolutionSet};
use peculiar::systems::{build_nonzero, build_p0_reduced, build_p1_nonzero, build_p1_reduced, ClassTag};

fn with_seed(seed: u64) -> TrackOptions {
    TrackOptions {
        gamma_seed: seed,
        ..TrackOptions::default()
    }
}

#[test]
fn newton_oracle_finds_the_same_points() {
    for n in 2..=3 {
        let found: Vec<Vec<C>> = (1..=100_000u64)
            .filter_map(|i| newton_full(halton_polydisc(i, n, 3.0)))
            .collect();
        let oracle = dedup(found, 1e-8);
        let r = census(n);
        assert!(
            same_point_sets(&oracle, &points(&r), 1e-8),
            "degree {n}: oracle found {}",
            oracle.len()
        );
    }
}

#[test]
fn every_solution_has_small_oracle_residual() {
    for n in 2..=6 {
        for p in &census(n).solutions {
            let scale = p.y.iter().map(|z| z.norm()).fold(1.0, f64::max).powi(n as i32);
            assert!(full_residual(&p.y) <= 1e-12 * scale, "degree {n}: {:?}", p.y);
        }
    }
}

#[test]
fn census_is_independent_of_gamma() {
    for n in 2..=5 {
        let base = census(n);
        for seed in [2, 3] {
            let r = enumerate(n, &with_seed(seed)).unwrap();
            assert_eq!(r.counts, base.counts, "degree {n} seed {seed}");
            assert!(
                same_point_sets(&points(&r), &points(&base), 1e-8),
                "degree {n} seed {seed}"
            );
            let mults = |r: &peculiar::classify::EnumerationReport| {
                let mut m: Vec<usize> = r.solutions.iter().map(|p| p.multiplicity).collect();
                m.sort();
                m
            };
            assert_eq!(mults(&r), mults(&base));
        }
    }
}

#[test]
fn solution_sets_are_closed_under_conjugation() {
    for n in 2..=6 {
        let r = census(n);
        for tag in [ClassTag::P0, ClassTag::P1MinusP0, ClassTag::Pt] {
            let set: Vec<Vec<C>> = r
                .solutions
                .iter()
                .filter(|p| p.class_tag == tag)
                .map(|p| p.y.clone())
                .collect();
            assert!(closed_under_conjugation(&set, 1e-8), "degree {n} class {tag:?}");
        }
    }
    for n in 4..=5 {
        let probe = check_conjecture(n, &TrackOptions::default(), None).unwrap();
        for sys in [&probe.p1_nonzero, &probe.pt] {
            let set: Vec<Vec<C>> = sys.solutions.iter().map(|p| p.y.clone()).collect();
            assert!(closed_under_conjugation(&set, 1e-8), "degree {n} {:?}", sys.variant);
        }
    }
}

#[test]
fn path_accounting_is_complete() {
    for n in 2..=6 {
        let a = census(n).path_accounting;
        assert_eq!((a.converged + a.at_infinity + a.failed) as u64, a.bezout);
        assert_eq!((a.at_infinity, a.failed), (0, 0), "degree {n}");
    }
}

#[test]
fn multiple_point_at_degree_four() {
    let r = census(4);
    let target = [c(1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)];
    let doubles: Vec<_> = r.solutions.iter().filter(|p| p.multiplicity > 1).collect();
    assert_eq!(doubles.len(), 1);
    assert_eq!(doubles[0].multiplicity, 2);
    assert!(rel_dist(&doubles[0].y, &target) < 1e-6);
}

#[test]
fn reduced_systems_agree_with_census() {
    let opts = TrackOptions::default();
    for n in 3..=5 {
        let r = census(n);
        let tol = 1e-8;

        let s = build_p0_reduced(n).unwrap();
        let p0: Vec<Vec<C>> = solve(&s, &opts).unwrap().solutions.into_iter().map(|p| p.y).collect();
        let expect: Vec<Vec<C>> = r
            .solutions
            .iter()
            .filter(|p| p.class_tag == ClassTag::P0)
            .map(|p| p.y.clone())
            .collect();
        assert!(same_point_sets(&p0, &expect, tol), "p0_reduced at degree {n}");

        let s = build_p1_reduced(n).unwrap();
        let p1: Vec<Vec<C>> = solve(&s, &opts).unwrap().solutions.into_iter().map(|p| p.y).collect();
        let expect: Vec<Vec<C>> = points(&r).into_iter().filter(|y| (y[0] - 1.0).norm() < tol).collect();
        assert!(same_point_sets(&p1, &expect, tol), "p1_reduced at degree {n}");

        let s = build_nonzero(n).unwrap();
        let nz: Vec<Vec<C>> = solve(&s, &opts)
            .unwrap()
            .solutions
            .into_iter()
            .map(|p| p.y)
            .filter(|y| y[n - 1].norm() > tol)
            .collect();
        let expect: Vec<Vec<C>> = r
            .solutions
            .iter()
            .filter(|p| p.class_tag != ClassTag::P0)
            .map(|p| p.y.clone())
            .collect();
        assert!(same_point_sets(&nz, &expect, tol), "nonzero at degree {n}");
    }
}

#[test]
fn probes_match_census_classes() {
    for n in 4..=5 {
        let r = census(n);
        let probe = check_conjecture(n, &TrackOptions::default(), Some(&r)).unwrap();
        assert_eq!(probe.p1_nonzero.consistent_with_census, Some(true), "degree {n}");
        assert_eq!(probe.pt.consistent_with_census, Some(true), "degree {n}");
        assert!(probe.p1_nonzero.count_matches && probe.pt.count_matches, "degree {n}");
        assert_eq!(probe.pt.non_peculiar, 0);
        let a = probe.pt.path_accounting;
        assert_eq!((a.converged + a.at_infinity + a.failed) as u64, a.bezout);
        assert_eq!(a.failed, 0);
    }
}

#[test]
fn unit_first_nonzero_system_at_degree_four() {
    let out = solve(&build_p1_nonzero(4).unwrap(), &TrackOptions::default()).unwrap();
    assert_eq!(out.solutions.len(), 4);
    let spurious = [c(1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)];
    assert!(out.solutions.iter().any(|p| rel_dist(&p.y, &spurious) < 1e-8));
    let census_p1: Vec<Vec<C>> = census(4)
        .solutions
        .iter()
        .filter(|p| p.class_tag == ClassTag::P1MinusP0)
        .map(|p| p.y.clone())
        .collect();
    for q in &census_p1 {
        assert!(out.solutions.iter().any(|p| rel_dist(&p.y, q) < 1e-8));
    }
}

#[test]
fn recursion_holds_between_consecutive_degrees() {
    for n in 3..=6 {
        assert!(check_recursion(&census(n), &census(n - 1)).unwrap(), "degree {n}");
    }
    assert!(check_recursion(&census(4), &census(2)).is_err());
}

#[test]
fn serial_and_parallel_reports_are_identical() {
    for n in 2..=5 {
        let serial = enumerate(
            n,
            &TrackOptions {
                workers: 1,
                ..Default::default()
            },
        )
        .unwrap();
        let parallel = enumerate(
            n,
            &TrackOptions {
                workers: 4,
                ..Default::default()
            },
        )
        .unwrap();
        let a = to_json(&EnumerationDocument::new(&serial, SolutionSet::All, None, None));
        let b = to_json(&EnumerationDocument::new(&parallel, SolutionSet::All, None, None));
        assert_eq!(a, b, "degree {n}");
    }
}

#[test]
fn real_nonzero_solutions() {
    let counts: Vec<usize> = (2..=6).map(|n| stein_filter(&census(n)).len()).collect();
    assert_eq!(counts, [1, 2, 1, 0, 0]);
}
