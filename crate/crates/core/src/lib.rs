//! Risk calculus for quantum parameter estimation on finite grids.
//!
//! A [`ParametrisedState`](quantum::ParametrisedState) samples a family
//! `rho(theta)` on a grid. A measurement ([`Povm`](quantum::Povm)) and an
//! estimator (one parameter value per outcome) induce a risk profile
//! `R(theta) = sum_k Tr(rho(theta) M_k) L(estimate(k), theta)` for a Bregman
//! loss `L`. On top of that the crate provides:
//!
//! * [`optimality`]: optimal measurements for classical families, no-go
//!   witnesses for non-commuting ones, and additive, multiplicative and local
//!   approximate-optimality bounds;
//! * [`bayes`]: Bayes risk, posterior means and the least-squares Bayes
//!   measurement solver;
//! * [`admissibility`]: dominating constructions for refineable and
//!   uninformative measurements;
//! * [`scenarios`]: standard families and brute-force qubit oracles.
//!
//! ```
//! use qrisk::estimation::{risk_profile, Estimator, LossFunction};
//! use qrisk::scenarios::{mach_zehnder, mz_measurements};
//! use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
//!
//! let family = mach_zehnder(&[FRAC_PI_4, FRAC_PI_2]).unwrap();
//! let mz = mz_measurements();
//! let profile = risk_profile(&family, &mz.f, &mz.f_estimator, &LossFunction::least_squares()).unwrap();
//! assert!(profile.values[0] < 1e-12);
//! ```

pub mod admissibility;
pub mod bayes;
pub mod error;
pub mod estimation;
pub mod io;
pub mod linalg;
pub mod optimality;
pub mod quantum;
pub mod random;
pub mod scenarios;
pub mod tolerance;

/// Library version, recorded in report metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use tolerance::Tolerances;
