use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    LeastSquares,
    KullbackLeibler,
    CustomBregman,
}

/// Where the generator is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossDomain {
    Unconstrained,
    /// Strictly positive coordinates summing to one.
    OpenSimplex,
}

type Generator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type Gradient = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A Bregman divergence `B(a, b) = g(a) - g(b) - grad g(b) . (a - b)` built
/// from a strictly convex generator `g`.
#[derive(Clone)]
pub struct LossFunction {
    kind: LossKind,
    domain: LossDomain,
    generator: Generator,
    gradient: Gradient,
}

impl fmt::Debug for LossFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LossFunction")
            .field("kind", &self.kind)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

const SIMPLEX_SUM_TOL: f64 = 1e-9;

impl LossFunction {
    /// `g(x) = |x|^2`, so `B(a, b) = |a - b|^2`.
    pub fn least_squares() -> Self {
        LossFunction {
            kind: LossKind::LeastSquares,
            domain: LossDomain::Unconstrained,
            generator: Arc::new(|x| x.iter().map(|v| v * v).sum()),
            gradient: Arc::new(|x| x.iter().map(|v| 2.0 * v).collect()),
        }
    }

    /// `g(x) = sum x_i ln x_i` on the open simplex.
    pub fn kullback_leibler() -> Self {
        LossFunction {
            kind: LossKind::KullbackLeibler,
            domain: LossDomain::OpenSimplex,
            generator: Arc::new(|x| x.iter().map(|v| v * v.ln()).sum()),
            gradient: Arc::new(|x| x.iter().map(|v| v.ln() + 1.0).collect()),
        }
    }

    /// A user-supplied generator and its gradient. Strict convexity is the
    /// caller's responsibility.
    pub fn custom_bregman<G, D>(generator: G, gradient: D, domain: LossDomain) -> Self
    where
        G: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        D: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        LossFunction {
            kind: LossKind::CustomBregman,
            domain,
            generator: Arc::new(generator),
            gradient: Arc::new(gradient),
        }
    }

    pub fn kind(&self) -> LossKind {
        self.kind
    }

    pub fn domain(&self) -> LossDomain {
        self.domain
    }

    pub fn generator(&self, x: &[f64]) -> f64 {
        (self.generator)(x)
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (self.gradient)(x)
    }

    pub fn check_domain(&self, x: &[f64]) -> Result<()> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::OutOfDomain(format!("non-finite point {x:?}")));
        }
        match self.domain {
            LossDomain::Unconstrained => Ok(()),
            LossDomain::OpenSimplex => {
                if x.iter().any(|&v| v <= 0.0) {
                    return Err(Error::OutOfDomain(format!(
                        "{x:?} is not in the open simplex (nonpositive coordinate)"
                    )));
                }
                let s: f64 = x.iter().sum();
                if (s - 1.0).abs() > SIMPLEX_SUM_TOL {
                    return Err(Error::OutOfDomain(format!(
                        "{x:?} is not in the open simplex (sum {s})"
                    )));
                }
                Ok(())
            }
        }
    }

    /// `B(estimate, truth)`; see [`bregman_loss`].
    pub fn loss(&self, estimate: &[f64], truth: &[f64]) -> Result<f64> {
        bregman_loss(self, estimate, truth)
    }
}

/// The Bregman divergence of `loss` between `a` (the estimate) and `b` (the
/// true parameter). Built-in losses use closed forms that avoid cancellation;
/// custom ones go through the generator. Tiny negative roundoff is floored
/// at zero.
pub fn bregman_loss(loss: &LossFunction, a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: b.len(),
            found: a.len(),
        });
    }
    loss.check_domain(a)?;
    loss.check_domain(b)?;
    let value = match loss.kind {
        LossKind::LeastSquares => a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum(),
        // sum a ln(a/b) - a + b, which equals the generator form exactly
        LossKind::KullbackLeibler => a.iter().zip(b).map(|(x, y)| x * (x / y).ln() - x + y).sum(),
        LossKind::CustomBregman => {
            let grad = loss.gradient(b);
            let lin: f64 = grad.iter().zip(a.iter().zip(b)).map(|(g, (x, y))| g * (x - y)).sum();
            loss.generator(a) - loss.generator(b) - lin
        }
    };
    Ok(value.max(0.0))
}
