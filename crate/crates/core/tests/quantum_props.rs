use proptest::prelude::*;

use qrisk::linalg::{self, max_abs};
use qrisk::quantum::{
    classicality_certificate, d_max, helstrom_measurement, outcome_distribution, trace_norm, Classicality,
};
use qrisk::random::{random_classical_family, random_povm, random_state, seeded};
use qrisk::scenarios::oracle_measurement_grid;
use qrisk::Tolerances;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_norm_symmetric_and_triangular(seed in any::<u64>(), dim in 1usize..=4) {
        let mut rng = seeded(seed);
        let (a, b, c) = (
            random_state(&mut rng, dim, dim),
            random_state(&mut rng, dim, 1),
            random_state(&mut rng, dim, 2),
        );
        let ab = trace_norm(&(a.matrix() - b.matrix()));
        let ba = trace_norm(&(b.matrix() - a.matrix()));
        prop_assert!((ab - ba).abs() < 1e-12);
        let bc = trace_norm(&(b.matrix() - c.matrix()));
        let ac = trace_norm(&(a.matrix() - c.matrix()));
        prop_assert!(ac <= ab + bc + 1e-12);
        prop_assert!(ab <= 2.0 + 1e-12);
    }

    #[test]
    fn helstrom_attains_half_trace_norm(seed in any::<u64>()) {
        let tol = Tolerances::default();
        let mut rng = seeded(seed);
        let r1 = random_state(&mut rng, 2, 2);
        let r2 = random_state(&mut rng, 2, 1);
        let h = helstrom_measurement(&r1, &r2, &tol).unwrap();
        let gap = outcome_distribution(&r1, &h).unwrap()[0] - outcome_distribution(&r2, &h).unwrap()[0];
        let half = 0.5 * trace_norm(&(r1.matrix() - r2.matrix()));
        prop_assert!((gap.abs() - half).abs() < 1e-9);
        for m in oracle_measurement_grid(2, 12).unwrap() {
            let g = outcome_distribution(&r1, &m).unwrap()[0] - outcome_distribution(&r2, &m).unwrap()[0];
            prop_assert!(g.abs() <= half + 1e-9);
        }
    }

    #[test]
    fn d_max_nonnegative_and_zero_on_self(seed in any::<u64>(), dim in 1usize..=4) {
        let tol = Tolerances::default();
        let mut rng = seeded(seed);
        let rho = random_state(&mut rng, dim, dim);
        let sigma = random_state(&mut rng, dim, dim);
        prop_assert!(d_max(&rho, &sigma, &tol) >= 0.0);
        prop_assert!(d_max(&rho, &rho, &tol) < 1e-9);
        if dim > 1 {
            prop_assert!(d_max(&rho, &sigma, &tol) > 0.0);
        }
    }

    #[test]
    fn classical_states_rebuild_from_diagonal(seed in any::<u64>(), dim in 1usize..=4, points in 1usize..=8) {
        let tol = Tolerances::default();
        let fam = random_classical_family(&mut seeded(seed), dim, points, None);
        match classicality_certificate(&fam, &tol) {
            Classicality::Classical { basis, .. } => {
                for s in fam.states() {
                    let rotated = basis.adjoint() * s.matrix() * &basis;
                    let diag: Vec<f64> = (0..dim).map(|i| rotated[(i, i)].re).collect();
                    let rebuilt = linalg::from_spectrum(&diag, &basis);
                    prop_assert!(max_abs(&(rebuilt - s.matrix())) <= tol.comm);
                }
            }
            Classicality::NotClassical(w) => prop_assert!(false, "unexpected witness {:?}", w),
        }
    }

    #[test]
    fn outcome_distribution_normalised(seed in any::<u64>(), dim in 1usize..=4, k in 1usize..=5) {
        let mut rng = seeded(seed);
        let rho = random_state(&mut rng, dim, dim);
        let povm = random_povm(&mut rng, dim, k);
        let p = outcome_distribution(&rho, &povm).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
