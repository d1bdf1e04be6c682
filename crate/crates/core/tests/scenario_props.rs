use proptest::prelude::*;

use qrisk::bayes::{solve_bayes_measurement, Grouping};
use qrisk::estimation::LossFunction;
use qrisk::linalg::{self, c, Ket};
use qrisk::quantum::classicality_certificate;
use qrisk::random::{random_family, random_prior, seeded};
use qrisk::scenarios::{depolarizing, oracle_best_pair, oracle_measurement_grid, thermal, OracleCriterion};
use qrisk::Tolerances;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn thermal_and_depolarizing_are_classical(
        energies in prop::collection::vec(-2.0f64..2.0, 1..=4),
        psi in prop::collection::vec(-1.0f64..1.0, 2..=4),
    ) {
        let tol = Tolerances::default();
        let fam = thermal(&linalg::real_diagonal(&energies), &[0.0, 0.5, 1.0, 3.0], &tol).unwrap();
        prop_assert!(classicality_certificate(&fam, &tol).is_classical());
        prop_assume!(psi.iter().map(|x| x * x).sum::<f64>() > 1e-3);
        let ket = Ket::from_iterator(psi.len(), psi.iter().map(|x| c(*x)));
        let fam = depolarizing(&ket, &[0.0, 0.25, 0.5, 1.0]).unwrap();
        prop_assert!(classicality_certificate(&fam, &tol).is_classical());
    }

    #[test]
    fn oracle_never_beats_solver(seed in any::<u64>(), points in 2usize..=4) {
        let tol = Tolerances::default();
        let mut rng = seeded(seed);
        let fam = random_family(&mut rng, 2, points, 2);
        let prior = random_prior(&mut rng, points);
        let sol = solve_bayes_measurement(&fam, &prior, &tol, Grouping::Coarsest).unwrap();
        let hi = fam.point(points - 1)[0];
        let lattice: Vec<Vec<f64>> = (0..=40).map(|i| vec![hi * i as f64 / 40.0]).collect();
        let report = oracle_best_pair(
            &fam,
            &LossFunction::least_squares(),
            &oracle_measurement_grid(2, 10).unwrap(),
            &lattice,
            &OracleCriterion::BayesRisk(prior),
            u64::MAX,
        )
        .unwrap();
        prop_assert!(report.best().unwrap().bayes_risk >= sol.bayes_risk - 1e-9);
    }
}
