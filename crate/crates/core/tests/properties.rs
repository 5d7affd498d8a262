use mixmaxd_core::assembly::{
    optimize_levels, realize, separation, separation_bruteforce, solve_dplus_block, DesignSpec,
    DplusBlock, DEFAULT_ROW_CAP,
};
use mixmaxd_core::lattice::{
    count_points, enumerate_ils, extend_dimension, split_index_two, BinaryCode, Word,
};
use mixmaxd_core::levels::{family_continuous, family_discrete, CandidateFamily, LevelSet, Member};
use mixmaxd_core::oracle::{oracle_count, oracle_family, oracle_quadratic_scan, QuadraticConstraint};
use mixmaxd_core::space::Rational;
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn code_strategy(max_p: usize) -> impl Strategy<Value = BinaryCode> {
    (2..=max_p).prop_flat_map(|p| {
        let all = enumerate_ils(p).unwrap();
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

/// Strictly increasing from 0 with gaps drawn from tenths.
fn levels_strategy(s: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1u32..=10, s - 1).prop_map(|gaps| {
        let mut v = vec![0.0];
        for g in gaps {
            v.push(v[v.len() - 1] + g as f64 / 10.0);
        }
        v
    })
}

fn spec_strategy(max_p: usize, max_s: usize) -> impl Strategy<Value = DesignSpec> {
    code_strategy(max_p).prop_flat_map(move |code| {
        let p = code.p();
        (prop::collection::vec(2..=max_s, p), 0..(1u32 << p)).prop_flat_map(move |(sizes, u)| {
            let code = code.clone();
            let levels: Vec<_> = sizes.iter().map(|&s| levels_strategy(s)).collect();
            (levels, Just(sizes)).prop_map(move |(levels, sizes)| {
                let levels = levels.into_iter().map(|v| LevelSet::from_f64(v).unwrap()).collect();
                DesignSpec::new(code.clone(), sizes, u, levels).unwrap()
            })
        })
    })
}

fn ground_strategy() -> impl Strategy<Value = Vec<Rational>> {
    (3usize..=10, 10i64..=40).prop_flat_map(|(len, top)| {
        prop::collection::btree_set(1..top, len - 2).prop_map(move |inner| {
            let den = BigInt::from(top);
            let mut g = vec![Rational::from_integer(0.into())];
            g.extend(inner.into_iter().map(|i| Rational::new(BigInt::from(i), den.clone())));
            g.push(Rational::from_integer(1.into()));
            g
        })
    })
}

fn gap_pair(y: &[Rational]) -> (Rational, Option<Rational>) {
    let ds = y.windows(2).map(|w| &w[1] - &w[0]).min().unwrap();
    (ds, y.windows(3).map(|w| &w[2] - &w[0]).min())
}

proptest! {
    #![proptest_config(config(400))]

    #[test]
    fn count_matches_enumeration(
        code in code_strategy(4),
        raw in prop::collection::vec(1usize..=6, 4),
        u in 0u32..16,
    ) {
        let p = code.p();
        let s = &raw[..p];
        let u = u & ((1 << p) - 1);
        prop_assert_eq!(count_points(&code, s, u).unwrap(), oracle_count(&code, s, u).unwrap());
    }

    #[test]
    fn translation_never_grows_and_sizes_are_bracketed(
        code in code_strategy(5),
        raw in prop::collection::vec(1usize..=9, 5),
        u in 0u32..32,
    ) {
        let p = code.p();
        let s = &raw[..p];
        let u = u & ((1 << p) - 1);
        let m = count_points(&code, s, u).unwrap();
        prop_assert!(m <= count_points(&code, s, 0).unwrap());
        let units = code.unit_mask();
        let (mut lo, mut hi) = (1u64, 1u64);
        for (k, &z) in s.iter().enumerate() {
            if units >> k & 1 == 1 {
                lo *= z as u64;
                hi *= z as u64;
            } else {
                lo *= 2 * (z as u64 / 2);
                hi *= 2 * (z as u64).div_ceil(2);
            }
        }
        // Both bounds carry the factor 2^(q - p).
        let shift = p - code.q();
        prop_assert!(lo >> shift <= m && m <= hi >> shift, "{} <= {} <= {}", lo >> shift, m, hi >> shift);
    }

    #[test]
    fn formula_matches_pairwise_and_ignores_translation(spec in spec_strategy(4, 5)) {
        let design = realize(&spec, DEFAULT_ROW_CAP).unwrap();
        prop_assert_eq!(design.m() as u64, spec.count());
        prop_assume!(design.m() >= 2);
        let brute = separation_bruteforce(&design).unwrap();
        prop_assert!((separation(&spec) - brute).abs() <= 1e-9);
        let base = realize(&spec.with_shift(0).unwrap(), DEFAULT_ROW_CAP).unwrap();
        prop_assert!((separation_bruteforce(&base).unwrap() - brute).abs() <= 1e-9);
    }

    #[test]
    fn discrete_families_are_the_pareto_front(g in ground_strategy(), s in 2usize..=6) {
        prop_assume!(s <= g.len());
        let fam = family_discrete(&g, s).unwrap();
        let got: Vec<_> = fam.members().iter().map(|m| gap_pair(m.exact().unwrap())).collect();
        let want: Vec<_> = oracle_family(&g, s).unwrap().into_iter().map(|o| (o.d_star, o.d_plus)).collect();
        prop_assert_eq!(got, want);
        for m in fam.members() {
            prop_assert!(m.exact().unwrap().iter().all(|v| g.contains(v)));
        }
    }

    #[test]
    fn even_continuous_family_gaps(w in 0.1f64..3.0, half in 2usize..=5, t in 0.0f64..=1.0) {
        let s = 2 * half;
        let fam = family_continuous(w, s).unwrap();
        let v1 = t * w / (s as f64 - 1.0);
        let y = fam.level_set(Member::Spacing(v1));
        prop_assert_eq!(y.len(), s);
        prop_assert!((y.values()[s - 1] - w).abs() <= 1e-12);
        prop_assert!((y.d_star() - v1).abs() <= 1e-12);
        prop_assert!((y.d_plus().unwrap() - 2.0 * (w - v1) / (s as f64 - 2.0)).abs() <= 1e-12);
    }

    #[test]
    fn block_solver_matches_scan(
        code in code_strategy(4),
        raw_sizes in prop::collection::vec(2usize..=6, 4),
        widths in prop::collection::vec(0.3f64..1.5, 4),
        star_frac in prop::collection::vec(0.2f64..1.0, 4),
        pick in 1u32..16,
    ) {
        let p = code.p();
        let mut sizes = raw_sizes[..p].to_vec();
        let active: Vec<usize> = (0..p).filter(|&k| pick >> k & 1 == 1).collect();
        prop_assume!(!active.is_empty());
        for &k in &active {
            sizes[k] = 2 * sizes[k].div_ceil(2).max(2);
        }
        let widths = &widths[..p];
        let dstar: Vec<f64> = (0..p).map(|k| widths[k] / (sizes[k] as f64 - 1.0) * star_frac[k]).collect();
        let dplus: Vec<Option<f64>> = (0..p)
            .map(|k| (sizes[k] > 2).then(|| 2.0 * widths[k] / (sizes[k] as f64 - 1.0)))
            .collect();
        let floor = 0.0;
        let sol = solve_dplus_block(&DplusBlock {
            words: code.words(),
            active: &active,
            dstar: &dstar,
            dplus: &dplus,
            widths,
            sizes: &sizes,
            floor,
        }).unwrap();

        let slope = |k: usize| (sizes[k] as f64 - 2.0) / 2.0;
        let mut hi = f64::INFINITY;
        for k in 0..p {
            if active.contains(&k) {
                hi = hi.min(widths[k] / slope(k));
            } else if let Some(d) = dplus[k] {
                hi = hi.min(d);
            }
        }
        let constraints: Vec<QuadraticConstraint> = code
            .words()
            .iter()
            .filter(|&&x| x != 0)
            .map(|&x| QuadraticConstraint {
                terms: active.iter().filter(|&&k| x >> k & 1 == 1).map(|&k| (widths[k], slope(k))).collect(),
                constant: (0..p)
                    .filter(|&k| x >> k & 1 == 1 && !active.contains(&k))
                    .map(|k| dstar[k] * dstar[k])
                    .sum(),
            })
            .collect();
        let scan = oracle_quadratic_scan(&constraints, floor, hi);
        prop_assert!(sol.feasible);
        prop_assert!((sol.value - scan).abs() <= 2e-6, "solver {} scan {}", sol.value, scan);
    }
}

proptest! {
    #![proptest_config(config(150))]

    #[test]
    fn level_optimization_never_loses(
        code in code_strategy(4),
        raw in prop::collection::vec(2usize..=6, 4),
        discrete in prop::collection::vec(any::<bool>(), 4),
        g in ground_strategy(),
    ) {
        let p = code.p();
        let fams: Vec<CandidateFamily> = (0..p)
            .map(|k| {
                let s = raw[k];
                if discrete[k] && s <= g.len() {
                    family_discrete(&g, s).unwrap()
                } else {
                    family_continuous(1.0, s).unwrap()
                }
            })
            .collect();
        let refs: Vec<&CandidateFamily> = fams.iter().collect();
        let choice = optimize_levels(&code, &refs).unwrap();
        prop_assert!(choice.rho >= choice.initial_rho - 1e-12);
        let sizes: Vec<usize> = fams.iter().map(CandidateFamily::size).collect();
        let spec = DesignSpec::new(code, sizes, 0, choice.levels).unwrap();
        prop_assert!((separation(&spec) - choice.rho).abs() <= 1e-9);
    }

    #[test]
    fn extension_adds_one_binary_dimension(
        code in code_strategy(5),
        keys in prop::collection::vec(0.05f64..1.0, 5),
        w in 0.05f64..1.0,
    ) {
        prop_assume!(code.q() >= 1);
        let p = code.p();
        let key = |x: Word| (0..p).filter(|&k| x >> k & 1 == 1).map(|k| keys[k] * keys[k]).sum::<f64>();
        let pivot = code.words().iter().copied().filter(|&x| x != 0)
            .min_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b))).unwrap();
        let (sub, coset) = split_index_two(&code, pivot, key).unwrap();
        prop_assert_eq!(sub.len(), coset.len());
        prop_assert!(coset.contains(&pivot));
        for &a in &sub {
            for &b in &sub {
                prop_assert!(sub.contains(&(a ^ b)));
            }
        }
        let ext = extend_dimension(&sub, &coset, p).unwrap();
        prop_assert!(ext.is_full_support());

        // Two levels everywhere, so every d+ is infinite and the separation
        // is the square root of the smallest word key.
        let levels: Vec<LevelSet> = (0..=p)
            .map(|k| LevelSet::from_f64(vec![0.0, if k < p { keys[k] } else { w }]).unwrap())
            .collect();
        let spec = DesignSpec::new(ext, vec![2; p + 1], 0, levels).unwrap();
        let min_key = |ws: &[Word]| ws.iter().filter(|&&x| x != 0).map(|&x| key(x)).fold(f64::INFINITY, f64::min);
        let expected = min_key(&sub).sqrt().min((min_key(&coset) + w * w).sqrt());
        prop_assert!((separation(&spec) - expected).abs() <= 1e-12);
    }
}
