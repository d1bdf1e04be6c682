//! Loss functions, risk, domination and the classical estimator transfer.

mod loss;
pub(crate) mod preorder;
mod risk;
mod transfer;

pub use loss::{bregman_loss, LossDomain, LossFunction, LossKind};
pub use preorder::{measurement_preorder_bruteforce, PreorderOutcome, PreorderSearch};
pub use risk::{
    dominates_pair, risk, risk_at, risk_profile, Domination, Estimator, RiskProfile,
};
pub use transfer::{transfer_estimator, transfer_weights};
