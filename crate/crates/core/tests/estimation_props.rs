use proptest::prelude::*;

use qrisk::estimation::{
    dominates_pair, risk_profile, transfer_estimator, transfer_weights, Domination, LossFunction,
};
use qrisk::quantum::{classicality_certificate, Classicality};
use qrisk::random::{random_classical_family, random_estimator, random_povm, seeded};
use qrisk::Tolerances;

fn simplex_point(raw: &[f64]) -> Vec<f64> {
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transferred_estimator_never_worse(seed in any::<u64>(), dim in 1usize..=4, points in 1usize..=8, k in 1usize..=5) {
        let tol = Tolerances::default();
        let mut rng = seeded(seed);
        let fam = random_classical_family(&mut rng, dim, points, None);
        let f = random_povm(&mut rng, dim, k);
        let est = random_estimator(&mut rng, k, -1.0, points as f64 + 1.0);
        let Classicality::Classical { basis, .. } = classicality_certificate(&fam, &tol) else {
            panic!("random classical family must certify");
        };
        let m = qrisk::quantum::Povm::projective(&basis).unwrap();
        let moved = transfer_estimator(&basis, &f, &est).unwrap();
        let ls = LossFunction::least_squares();
        let a = risk_profile(&fam, &m, &moved, &ls).unwrap();
        let b = risk_profile(&fam, &f, &est, &ls).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            prop_assert!(*x <= y + 1e-9);
        }
    }

    #[test]
    fn convexity_of_transfer_weights(seed in any::<u64>(), dim in 1usize..=4, k in 1usize..=5, theta in -2.0f64..2.0) {
        let mut rng = seeded(seed);
        let basis = qrisk::random::random_unitary(&mut rng, dim);
        let f = random_povm(&mut rng, dim, k);
        let est = random_estimator(&mut rng, k, -2.0, 2.0);
        let m = transfer_weights(&basis, &f).unwrap();
        let ls = LossFunction::least_squares();
        let moved = transfer_estimator(&basis, &f, &est).unwrap();
        for i in 0..dim {
            let lhs = ls.loss(moved.value(i), &[theta]).unwrap();
            let rhs: f64 = (0..k).map(|kk| m[kk][i] * ls.loss(est.value(kk), &[theta]).unwrap()).sum();
            prop_assert!(lhs <= rhs + 1e-12);
        }
    }

    #[test]
    fn domination_is_antisymmetric(a in prop::collection::vec(0.0f64..1.0, 4), b in prop::collection::vec(0.0f64..1.0, 4)) {
        let grid: Vec<Vec<f64>> = (0..4).map(|i| vec![i as f64]).collect();
        let pa = qrisk::estimation::RiskProfile { grid: grid.clone(), values: a };
        let pb = qrisk::estimation::RiskProfile { grid, values: b };
        if dominates_pair(&pa, &pb, 1e-9).unwrap() == Domination::Dominates {
            prop_assert_ne!(dominates_pair(&pb, &pa, 1e-9).unwrap(), Domination::WeaklyBetter);
            prop_assert_ne!(dominates_pair(&pb, &pa, 1e-9).unwrap(), Domination::Dominates);
        }
    }

    #[test]
    fn gradients_match_finite_differences(raw in prop::collection::vec(0.05f64..1.0, 3)) {
        let h = 1e-6;
        for loss in [LossFunction::least_squares(), LossFunction::kullback_leibler()] {
            let x = simplex_point(&raw);
            let g = loss.gradient(&x);
            for i in 0..x.len() {
                let (mut up, mut down) = (x.clone(), x.clone());
                up[i] += h;
                down[i] -= h;
                let fd = (loss.generator(&up) - loss.generator(&down)) / (2.0 * h);
                prop_assert!((fd - g[i]).abs() <= 1e-5 * g[i].abs().max(1.0));
            }
        }
    }

    #[test]
    fn built_in_losses_strictly_convex(a in prop::collection::vec(0.05f64..1.0, 3), b in prop::collection::vec(0.05f64..1.0, 3), t in prop::collection::vec(0.05f64..1.0, 3)) {
        let (a, b, t) = (simplex_point(&a), simplex_point(&b), simplex_point(&t));
        prop_assume!(a.iter().zip(&b).any(|(x, y)| (x - y).abs() > 1e-6));
        let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
        for loss in [LossFunction::least_squares(), LossFunction::kullback_leibler()] {
            let lhs = loss.loss(&mid, &t).unwrap();
            let rhs = 0.5 * loss.loss(&a, &t).unwrap() + 0.5 * loss.loss(&b, &t).unwrap();
            prop_assert!(lhs < rhs);
        }
    }
}
