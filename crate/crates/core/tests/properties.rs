//! Property-based invariants over the branch inverses and the catalog.

use num_complex::Complex64;
use proptest::prelude::*;
use rootfield::branch_inverse::{lambert_w, log_branch, root_branch};
use rootfield::root_catalog::{dedupe, union_count, RootRecord};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn log_branch_exponential_round_trip(
        re in -50.0f64..50.0,
        im in -50.0f64..50.0,
        k in -5i32..=5,
    ) {
        let z = c(re, im);
        prop_assume!(z.norm() > 1e-6);
        let l = log_branch(z, k).unwrap();
        let back = l.exp();
        prop_assert!((back - z).norm() <= 1e-13 * z.norm());
    }

    #[test]
    fn lambert_identity_annulus(
        radius in 0.1f64..10.0,
        angle in -std::f64::consts::PI..std::f64::consts::PI,
        k in -3i32..=3,
    ) {
        let z = Complex64::from_polar(radius, angle);
        let w = lambert_w(k, z).unwrap();
        prop_assert!((w * w.exp() - z).norm() <= 1e-12 * z.norm().max(1.0));
    }

    #[test]
    fn integer_roots_enumerate_distinctly(
        re in -10.0f64..10.0,
        im in -10.0f64..10.0,
        n in 2i32..=7,
    ) {
        let u = c(re, im);
        prop_assume!(u.norm() > 1e-3);
        let mut roots = Vec::new();
        for k in 0..n {
            roots.push(root_branch(u, n as f64, k).unwrap());
        }
        for (i, a) in roots.iter().enumerate() {
            prop_assert!((a.powi(n) - u).norm() <= 1e-12 * u.norm().max(1.0));
            for b in &roots[i + 1..] {
                prop_assert!((a - b).norm() > 1e-9);
            }
        }
    }

    #[test]
    fn dedupe_idempotent_and_below_tolerance_gap(
        values in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 0..24),
        tol_exp in -9.0f64..-3.0,
    ) {
        let tol = 10f64.powf(tol_exp);
        let records: Vec<RootRecord> = values
            .iter()
            .enumerate()
            .map(|(i, (re, im))| RootRecord {
                value: c(*re, *im),
                term_k: 1,
                variant_q: 0,
                primary_branch: i as i32,
                secondary_branch: 0,
                residual: 1e-12,
                iterations: 1,
                polished: true,
            })
            .collect();
        let once = dedupe(&records, tol);
        let survivors: Vec<RootRecord> =
            once.records.iter().map(|r| r.root.clone()).collect();
        let twice = dedupe(&survivors, tol);
        prop_assert_eq!(once.len(), twice.len());
        // no two survivors may sit within tolerance of each other
        for (i, a) in once.records.iter().enumerate() {
            for b in &once.records[i + 1..] {
                prop_assert!((a.root.value - b.root.value).norm() > tol);
            }
        }
    }

    #[test]
    fn union_count_matches_explicit_sets(
        raw in prop::collection::vec(prop::collection::vec(0u64..8, 0..7), 1..5),
    ) {
        let n = raw.len();
        let mut table = vec![0u64; 1 << n];
        for (mask, entry) in table.iter_mut().enumerate().skip(1) {
            *entry = (0..8u64)
                .filter(|x| (0..n).all(|i| mask & (1 << i) == 0 || raw[i].contains(x)))
                .count() as u64;
        }
        let mut union: Vec<u64> = raw.concat();
        union.sort_unstable();
        union.dedup();
        prop_assert_eq!(union_count(n, &table).unwrap(), union.len() as i64);
    }
}
