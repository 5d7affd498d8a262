use std::time::{Duration, Instant};

use mixmaxd_core::assembly::{optimize_levels, separation, separation_bruteforce};
use mixmaxd_core::lattice::{count_points, enumerate_ils};
use mixmaxd_core::levels::CandidateFamily;
use mixmaxd_core::oracle::oracle_tiny_maximin;
use mixmaxd_core::search::{construct_scaled, seed_simple, Families, SBounds};
use mixmaxd_core::space::{parse_rational, scale, to_f64, FactorDomain, FactorSpace, Rational};
use mixmaxd_core::{construct, Regime, SearchOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(text: &str) -> Rational {
    parse_rational(text).unwrap()
}

fn ordinal(levels: &str, weight: &Rational) -> FactorDomain {
    FactorDomain::discrete(levels.split(',').map(q).collect(), weight.clone()).unwrap()
}

fn mixed(n: usize) -> FactorSpace {
    let one = q("1");
    FactorSpace::new(
        vec![
            ordinal("0,0.12,0.24,0.36,0.48,0.6,0.72,0.84,0.96,1", &one),
            FactorDomain::continuous(one.clone()).unwrap(),
            FactorDomain::continuous(one).unwrap(),
        ],
        n,
    )
    .unwrap()
}

fn cube(p: usize, n: usize) -> FactorSpace {
    FactorSpace::new(vec![FactorDomain::continuous(q("1")).unwrap(); p], n).unwrap()
}

fn assert_certified(space: &FactorSpace, opts: &SearchOptions) -> f64 {
    let out = construct(space, opts).unwrap();
    let spec = out.certificate();
    assert!(out.m >= space.n() as u64);
    assert_eq!(out.design.m() as u64, out.m);
    assert_eq!(count_points(spec.code(), spec.sizes(), spec.shift()).unwrap(), out.m);
    assert!((separation(spec) - out.rho).abs() <= 1e-9);
    if out.design.m() <= 20_000 {
        assert!((separation_bruteforce(&out.design).unwrap() - out.rho).abs() <= 1e-9);
    }
    out.rho
}

#[test]
fn separation_does_not_increase_with_n() {
    for space in [mixed(2), cube(3, 2), cube(4, 2)] {
        let mut last = f64::INFINITY;
        for n in 4..=80 {
            let rho = assert_certified(&space.with_n(n).unwrap(), &SearchOptions::default());
            assert!(rho <= last + 1e-12, "n = {n}: {rho} > {last}");
            last = rho;
        }
    }
}

#[test]
fn identical_inputs_give_identical_certificates() {
    for space in [mixed(62), cube(5, 40), cube(7, 90)] {
        let a = construct(&space, &SearchOptions::default()).unwrap();
        let b = construct(&space, &SearchOptions::default()).unwrap();
        assert_eq!(a.certificate(), b.certificate());
        assert_eq!(a.design.points(), b.design.points());
    }
}

#[test]
fn pruned_sizes_never_beat_the_result() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (space, n) in [(mixed(62), 62), (cube(3, 30), 30), (mixed(120), 120)] {
        let scaled = scale(&space);
        let out = construct_scaled(&scaled, &SearchOptions::default()).unwrap();
        let families = Families::new(&scaled).unwrap();
        let mut bounds = SBounds::new(&families);
        bounds.update(&families, out.rho);
        let codes = enumerate_ils(3).unwrap();
        let mut checked = 0;
        while checked < 50 {
            let code = &codes[rng.gen_range(0..codes.len())];
            let sizes: Vec<usize> = (0..3)
                .map(|k| {
                    let top = families.max_size(k).unwrap_or(40);
                    rng.gen_range(2..=top)
                })
                .collect();
            if (0..3).all(|k| bounds.contains(k, sizes[k])) {
                continue;
            }
            if count_points(code, &sizes, 0).unwrap() < n as u64 {
                continue;
            }
            let fams: Vec<_> = (0..3).map(|k| families.get(k, sizes[k]).unwrap()).collect();
            let refs: Vec<&CandidateFamily> = fams.iter().map(|f| f.as_ref()).collect();
            let rho = optimize_levels(code, &refs).unwrap().rho;
            assert!(rho <= out.rho + 1e-9, "{code} {sizes:?}: {rho} > {}", out.rho);
            checked += 1;
        }
    }
}

#[test]
fn never_beats_exhaustive_maximin_on_tiny_grids() {
    let one = q("1");
    let grids = [
        vec![ordinal("0,0.5,1", &one), ordinal("0,0.5,1", &one)],
        vec![ordinal("0,0.25,1", &one), ordinal("0,0.5,1", &one)],
        vec![ordinal("0,1", &one), ordinal("0,1", &one), ordinal("0,0.5,1", &one)],
        vec![ordinal("0,1", &q("0.75")), ordinal("0,0.3,1", &one), ordinal("0,1", &one)],
        vec![ordinal("0,0.2,0.5,1", &one), ordinal("0,0.5,1", &q("0.5"))],
    ];
    for dims in grids {
        let size: usize = dims.iter().map(|d| d.levels().unwrap().len()).product();
        let scaled = scale(&FactorSpace::new(dims.clone(), 2).unwrap());
        let axes: Vec<Vec<f64>> = scaled
            .dims()
            .iter()
            .map(|d| match d {
                mixmaxd_core::space::ScaledDomain::Discrete { levels } => levels.iter().map(to_f64).collect(),
                _ => unreachable!(),
            })
            .collect();
        for n in 2..=size {
            let space = FactorSpace::new(dims.clone(), n).unwrap();
            let rho = assert_certified(&space, &SearchOptions::default());
            let best = oracle_tiny_maximin(&axes, n).unwrap();
            assert!(rho <= best + 1e-9, "n = {n}: {rho} > {best}");
        }
    }
}

#[test]
fn regimes_dispatch_on_dimension() {
    for (p, regime) in [(3, Regime::Exhaustive), (7, Regime::Qrs), (9, Regime::Extend)] {
        let out = construct(&cube(p, 2 * p), &SearchOptions::default()).unwrap();
        assert_eq!(out.regime, regime);
    }
    let forced = SearchOptions { regime: Regime::Extend, ..SearchOptions::default() };
    assert!(construct(&cube(3, 10), &forced).is_err());
}

#[test]
fn eight_dimensions_beat_every_seed() {
    let space = cube(8, 256);
    let rho = assert_certified(&space, &SearchOptions::default());
    for (cand, m) in seed_simple(&scale(&space)).unwrap() {
        if m >= 256 {
            assert!(cand.rho <= rho + 1e-9);
        }
    }
}

#[test]
fn fifteen_mixed_dimensions_extend_quickly() {
    let quarter = |i: i32| Rational::new(3.into(), 4.into()).pow(i);
    let q1 = "0,1";
    let q2 = "0,0.5,1";
    let q3 = "0,0.1,0.3,0.6,1";
    let q4 = "0,0.25,0.5,0.75,1";
    let q5 = "0,0.2,0.3,0.5,0.7,1";
    let q6 = "0,0.2,0.4,0.6,0.8,1";
    let kinds = [q2, q1, q3, q1, q1, q5, q1, q1, q1, q1, q4, q2, q6, q1, q1];
    let dims: Vec<FactorDomain> =
        kinds.iter().enumerate().map(|(i, l)| ordinal(l, &quarter(i as i32))).collect();
    for n in [50, 200] {
        let start = Instant::now();
        let space = FactorSpace::new(dims.clone(), n).unwrap();
        assert_certified(&space, &SearchOptions::default());
        assert!(start.elapsed() < Duration::from_secs(60));
    }
}
