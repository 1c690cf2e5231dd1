//! Coefficient asymptotics: large-n terms through recurrences, Richardson
//! extrapolation of κ against κ ρⁿ / n^γ, and the integral constants of the
//! two conjectural cases.

mod constexpr;
mod extrap;
mod integral;
mod terms;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

pub use constexpr::{ConstExpr, NAMED_CONSTANTS};
pub use extrap::{
    check_kappa_terms, check_modulus, extrapolate, extrapolate_in, first_failures, Extrapolation, KappaReport, KappaRow,
    DEFAULT_LEVELS, DEFAULT_NMAX, DEFAULT_PREC, DEFAULT_TOL,
};
pub use integral::{conjecture_report, conjectured_kappa, integral_i, ConjectureRow, IntegralSpec, CONJECTURE_STATUS};
pub use terms::{annihilator, terms_for, terms_for_steps, terms_with, OperatorSource, DP_DIRECT, GUESS_GUARD};

use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::walks::{ModelData, SpecPoint};

/// Expected behaviour κ_r ρⁿ / n^γ of the coefficients of Q(spec; t) for
/// n ≡ r (mod period).
#[derive(Clone, Debug, PartialEq)]
pub struct AsymSpec {
    pub model: u32,
    pub spec: SpecPoint,
    pub rho: ConstExpr,
    pub gamma: Rat,
    pub period: u32,
    /// One entry per class; None where the coefficients vanish.
    pub kappa: Vec<Option<ConstExpr>>,
    pub oeis: String,
    pub algebraic: bool,
    /// Leading terms of the sequence, checked against enumeration.
    pub anchor: Vec<Rat>,
}

impl AsymSpec {
    pub fn check(&self) -> Result<()> {
        if self.period == 0 || self.kappa.len() != self.period as usize {
            return Err(Error::ValidationFailed(format!(
                "model {} spec {}: {} κ entries for period {}",
                self.model,
                self.spec,
                self.kappa.len(),
                self.period
            )));
        }
        if self.kappa.iter().all(|k| k.is_none()) {
            return Err(Error::ValidationFailed(format!("model {} spec {}: every class is zero", self.model, self.spec)));
        }
        self.rho.eval(64)?;
        for k in self.kappa.iter().flatten() {
            k.eval(64)?;
        }
        Ok(())
    }
}

/// κ check for a bundled model with `n` recurrence terms.
pub fn check_kappa(m: &ModelData, sp: SpecPoint, n: usize, tol: f64) -> Result<KappaReport> {
    let spec = m.asym_for(sp).ok_or_else(|| Error::ValidationFailed(format!("model {} has no data for {}", m.id, sp)))?;
    let a = terms_for(m, sp, n)?;
    check_kappa_terms(spec, &a, DEFAULT_LEVELS, tol, DEFAULT_PREC)
}
