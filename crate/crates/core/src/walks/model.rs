use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::enumerate::{dp_series, enumerate};
use super::group::{orbit_normalization, orbit_sum, walk_group};
use super::kernel::kernel_check;
use super::steps::{decompose_kernel, KernelData, StepSet};
use super::SpecPoint;
use crate::arith::{Rat, RatFn, RatFn2};
use crate::asymptotics::AsymSpec;
use crate::closedform::HGParams;
use crate::error::{Error, Result};

/// ₂F₁(a, b; c; w(t)) attached to a model.
#[derive(Clone, Debug, PartialEq)]
pub struct Table2 {
    pub params: HGParams,
    pub w: RatFn,
}

#[derive(Clone, Debug)]
pub struct ModelData {
    pub id: u32,
    pub stepset: StepSet,
    /// Orbit numerator N(x, y).
    pub n_orbit: RatFn2,
    /// c with orbit_sum = c·N.
    pub orbit_norm: Rat,
    pub table2: Table2,
    pub asym: Vec<AsymSpec>,
}

impl ModelData {
    pub fn kernel(&self) -> KernelData {
        decompose_kernel(&self.stepset)
    }

    pub fn asym_for(&self, sp: SpecPoint) -> Option<&AsymSpec> {
        self.asym.iter().find(|a| a.spec == sp)
    }

    /// Cases 17–19 have a Laurent-polynomial orbit numerator.
    pub fn has_polynomial_orbit(&self) -> bool {
        self.n_orbit.to_lpoly2().is_some()
    }
}

#[derive(Clone, Debug, Default)]
pub struct ModelReport {
    pub id: u32,
    pub group_order: usize,
    pub checks: Vec<(String, bool)>,
}

impl ModelReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }
}

/// Load-time validation of a bundled model row.
pub fn validate_model(m: &ModelData, order: usize) -> Result<ModelReport> {
    let mut rep = ModelReport { id: m.id, ..Default::default() };
    let k = m.kernel();
    rep.checks.push((String::from("kernel decomposition"), k.is_consistent()));
    let g = walk_group(&k, 16)?;
    rep.group_order = g.len();
    let os = orbit_sum(&g);
    let norm = orbit_normalization(&os, &m.n_orbit);
    rep.checks.push((format!("orbit sum = {}·N", m.orbit_norm), norm.as_ref() == Some(&m.orbit_norm)));
    let tab = enumerate(&m.stepset, order);
    rep.checks.push((String::from("kernel equation"), kernel_check(&k, &tab, order).is_ok()));
    let pp = crate::cones::positive_part_check(m, &tab, order).is_ok();
    rep.checks.push((String::from("positive part of R"), pp));
    let pts: Vec<(Rat, Rat)> = m.asym.iter().map(|a| a.spec.rats()).collect();
    let ser = dp_series(&m.stepset, &pts, order);
    for (a, s) in m.asym.iter().zip(ser.iter()) {
        if a.anchor.is_empty() {
            continue;
        }
        let ok = a.anchor.iter().enumerate().all(|(n, v)| n as i64 > s.order() || &s.coeff(n as i64) == v);
        rep.checks.push((format!("{} anchor terms {}", a.oeis, a.spec), ok));
    }
    if rep.passed() {
        Ok(rep)
    } else {
        let bad: Vec<&str> = rep.checks.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect();
        Err(Error::ValidationFailed(format!("model {}: {}", m.id, bad.join(", "))))
    }
}
