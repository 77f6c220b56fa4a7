use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters `(β, λ, k, ν)` of the class.
///
/// * `beta`: lower bound on `Re E(z)`, in `[0, 1)`;
/// * `lambda`: mixing weight of the θ-derivative terms, `λ ≥ 0`;
/// * `k`: share of the second θ-derivative, in `[0, 1]`;
/// * `nu`: fractional order, in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassParams {
    pub beta: f64,
    pub lambda: f64,
    pub k: f64,
    pub nu: f64,
}

impl ClassParams {
    pub fn new(beta: f64, lambda: f64, k: f64, nu: f64) -> Result<Self> {
        let p = ClassParams {
            beta,
            lambda,
            k,
            nu,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ClassParams {
            beta,
            lambda,
            k,
            nu,
        } = *self;
        if !(0.0..1.0).contains(&beta) {
            return Err(Error::Params(format!("beta must lie in [0, 1), got {beta}")));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::Params(format!("lambda must be >= 0, got {lambda}")));
        }
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::Params(format!("k must lie in [0, 1], got {k}")));
        }
        if !(0.0..1.0).contains(&nu) {
            return Err(Error::Params(format!("nu must lie in [0, 1), got {nu}")));
        }
        Ok(())
    }

    /// `1 − β`, the budget every coefficient bound is measured against.
    pub fn budget(&self) -> f64 {
        1.0 - self.beta
    }

    /// Same `(λ, k, ν)` at a different level `β`.
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        ClassParams::new(beta, self.lambda, self.k, self.nu)
    }
}
