use alloc::vec::Vec;

use crate::arith::{LPoly2, Rat};
use crate::error::{Error, Result};
use crate::series::TSeries;

use super::cone::ConeSpec;

/// Truncated series in x, y, t: one Laurent polynomial in (x, y) per power
/// of t up to `nt`. Coefficients with an x- or y-exponent below `-kneg` are
/// not stored and count as unknown; `kneg = None` means every coefficient
/// is exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSeries3 {
    cone: ConeSpec,
    layers: Vec<LPoly2>,
    kneg: Option<i64>,
}

fn known(kneg: Option<i64>, k: i64, m: i64) -> bool {
    match kneg {
        None => true,
        Some(d) => k >= -d && m >= -d,
    }
}

fn min_depth(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(a.min(b)),
    }
}

impl ConeSeries3 {
    /// Layers are clipped to the known region.
    pub fn new(cone: ConeSpec, layers: Vec<LPoly2>, kneg: Option<i64>) -> ConeSeries3 {
        let layers = layers
            .into_iter()
            .map(|p| {
                let mut q = LPoly2::zero();
                for (&(k, m), c) in p.terms() {
                    if known(kneg, k, m) {
                        q.add_term(k, m, c.clone());
                    }
                }
                q
            })
            .collect();
        ConeSeries3 { cone, layers, kneg }
    }

    /// Declared support cone in (x, y, t)-exponent space.
    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    /// Highest power of t held.
    pub fn nt(&self) -> usize {
        self.layers.len().saturating_sub(1)
    }

    pub fn kneg(&self) -> Option<i64> {
        self.kneg
    }

    pub fn layer(&self, n: usize) -> &LPoly2 {
        &self.layers[n]
    }

    pub fn layers(&self) -> &[LPoly2] {
        &self.layers
    }

    /// Coefficient of x^k y^m t^n, or an error if it was truncated away.
    pub fn coeff(&self, k: i64, m: i64, n: usize) -> Result<Rat> {
        if n > self.nt() {
            return Err(Error::InsufficientTerms { need: n + 1, have: self.layers.len() });
        }
        if !known(self.kneg, k, m) {
            return Err(Error::DepthInsufficient { k, m });
        }
        Ok(self.layers[n].coeff(k, m))
    }

    pub fn add(&self, o: &ConeSeries3) -> ConeSeries3 {
        let n = self.layers.len().min(o.layers.len());
        let layers = (0..n).map(|i| self.layers[i].add(&o.layers[i])).collect();
        ConeSeries3::new(self.cone.clone(), layers, min_depth(self.kneg, o.kneg))
    }

    /// Termwise product in x and y, layer by layer in t.
    pub fn hadamard(&self, o: &ConeSeries3) -> ConeSeries3 {
        let n = self.layers.len().min(o.layers.len());
        let kneg = min_depth(self.kneg, o.kneg);
        let mut layers = Vec::with_capacity(n);
        for i in 0..n {
            let mut p = LPoly2::zero();
            for (&(k, m), a) in self.layers[i].terms() {
                let b = o.layers[i].coeff(k, m);
                if !b.is_zero() {
                    p.add_term(k, m, a * &b);
                }
            }
            layers.push(p);
        }
        ConeSeries3::new(self.cone.clone(), layers, kneg)
    }

    /// [x^{-1} y^{-1}] per layer.
    pub fn residue_xy(&self) -> Result<TSeries> {
        let c: Result<Vec<Rat>> = (0..self.layers.len()).map(|n| self.coeff(-1, -1, n)).collect();
        Ok(TSeries::from_coeffs(c?))
    }

    /// [x^>]: keep terms with positive x-exponent. Exact when the known
    /// region reaches x-exponent 1, which it always does for kneg ≥ 0.
    pub fn positive_part_x(&self) -> Result<ConeSeries3> {
        self.part(|k, _| k > 0, true, false)
    }

    pub fn positive_part_y(&self) -> Result<ConeSeries3> {
        self.part(|_, m| m > 0, false, true)
    }

    /// [x^> y^>].
    pub fn positive_part_xy(&self) -> Result<ConeSeries3> {
        self.part(|k, m| k > 0 && m > 0, true, true)
    }

    fn part(&self, keep: impl Fn(i64, i64) -> bool, in_x: bool, in_y: bool) -> Result<ConeSeries3> {
        if let Some(d) = self.kneg {
            if d < 0 {
                return Err(Error::DepthInsufficient { k: -d, m: -d });
            }
        }
        let layers: Vec<LPoly2> = self
            .layers
            .iter()
            .map(|p| {
                let mut q = LPoly2::zero();
                for (&(k, m), c) in p.terms() {
                    if keep(k, m) {
                        q.add_term(k, m, c.clone());
                    }
                }
                q
            })
            .collect();
        // a projection onto both positive parts discards everything unknown
        let kneg = if in_x && in_y { None } else { self.kneg };
        Ok(ConeSeries3 { cone: self.cone.clone(), layers, kneg })
    }

    /// ∂/∂x.
    pub fn derivative_x(&self) -> ConeSeries3 {
        let layers = self
            .layers
            .iter()
            .map(|p| {
                let mut q = LPoly2::zero();
                for (&(k, m), c) in p.terms() {
                    if k != 0 {
                        q.add_term(k - 1, m, c * &Rat::from(k));
                    }
                }
                q
            })
            .collect();
        ConeSeries3::new(self.cone.clone(), layers, self.kneg)
    }

    /// f(α, β; t) for a series with finitely many terms per layer.
    pub fn eval_xy(&self, alpha: &Rat, beta: &Rat) -> Result<TSeries> {
        if self.kneg.is_some() {
            let d = self.kneg.unwrap_or(0);
            return Err(Error::DepthInsufficient { k: -d - 1, m: -d - 1 });
        }
        Ok(TSeries::from_coeffs(self.layers.iter().map(|p| p.eval(alpha, beta)).collect()))
    }

    /// Divide by x·y.
    pub fn div_xy(&self) -> ConeSeries3 {
        let layers = self
            .layers
            .iter()
            .map(|p| {
                let mut q = LPoly2::zero();
                for (&(k, m), c) in p.terms() {
                    q.add_term(k - 1, m - 1, c.clone());
                }
                q
            })
            .collect();
        ConeSeries3 { cone: self.cone.clone(), layers, kneg: self.kneg.map(|d| d + 1) }
    }

    /// Every stored exponent (k, m, n) lies in the translate `shift + C`.
    pub fn support_within(&self, h: &[Vec<Rat>], shift: (i64, i64, i64)) -> bool {
        self.layers.iter().enumerate().all(|(n, p)| {
            p.terms().keys().all(|&(k, m)| super::cone::cone_contains(h, &[k - shift.0, m - shift.1, n as i64 - shift.2]))
        })
    }
}
