use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_integer::Integer;

use super::AsymSpec;
use crate::arith::{BigF, Rat};
use crate::error::{Error, Result};
use crate::walks::SpecPoint;

/// Richardson estimate and the gap between its last two levels.
#[derive(Clone, Debug, PartialEq)]
pub struct Extrapolation {
    pub value: BigF,
    pub spread: BigF,
}

/// Neville extrapolation to h = 0 through (h_i, u_i); returns the values
/// of the full interpolant and of the one without the last point.
fn neville_at_zero(h: &[BigF], u: &[BigF]) -> (BigF, BigF) {
    let n = h.len();
    let mut p: Vec<BigF> = u.to_vec();
    let mut second = p[0].clone();
    for k in 1..n {
        for i in 0..n - k {
            let num = &(&h[i] * &p[i + 1]) - &(&h[i + k] * &p[i]);
            p[i] = &num / &(&h[i] - &h[i + k]);
        }
        if k == n - 2 {
            second = p[0].clone();
        }
    }
    (p[0].clone(), second)
}

/// Limit of u_m = a_m m^γ / ρ^m along m ≡ r (mod p) in [N/2, N], where
/// N = a.len() − 1, assuming an expansion in powers of 1/m.
pub fn extrapolate(a: &[Rat], rho: &BigF, gamma: &Rat, r: usize, p: usize, levels: usize, prec: u32) -> Result<Extrapolation> {
    extrapolate_in(a, rho, gamma, r, p, levels, 1, prec)
}

/// As [`extrapolate`], for an expansion in powers of m^(−1/q).
#[allow(clippy::too_many_arguments)]
pub fn extrapolate_in(
    a: &[Rat],
    rho: &BigF,
    gamma: &Rat,
    r: usize,
    p: usize,
    levels: usize,
    q: u32,
    prec: u32,
) -> Result<Extrapolation> {
    if q == 0 {
        return Err(Error::BadParameters);
    }
    let n = a.len().saturating_sub(1);
    let p = p.max(1);
    let lo = (n / 2).max(1);
    let ms: Vec<usize> = (lo..=n).filter(|m| m % p == r % p).collect();
    if levels == 0 || ms.len() < levels + 2 {
        return Err(Error::InsufficientTerms { need: (levels + 2) * p, have: ms.len() * p });
    }
    // levels + 1 indices spread over the class, largest first
    let step = (ms.len() - 1) / levels;
    let picks: Vec<usize> = (0..=levels).map(|k| ms[ms.len() - 1 - k * step]).collect();
    let wp = prec + 64;
    let rho = rho.with_prec(wp);
    let mut h = Vec::with_capacity(picks.len());
    let mut u = Vec::with_capacity(picks.len());
    for &m in &picks {
        let mf = BigF::from_i64(m as i64, wp);
        let am = BigF::from_rat(&a[m], wp);
        let v = &(&am * &mf.pow_rat(gamma)) / &rho.powi(m as i64);
        h.push(&BigF::one(wp) / &mf.pow_rat(&Rat::frac(1, q as i64)));
        u.push(v);
    }
    let (top, second) = neville_at_zero(&h, &u);
    let spread = (&top - &second).abs();
    Ok(Extrapolation { value: top.with_prec(prec), spread: spread.with_prec(prec) })
}

/// One residue class of a κ check.
#[derive(Clone, Debug, PartialEq)]
pub struct KappaRow {
    pub model: u32,
    pub spec: SpecPoint,
    /// Class r modulo `modulus`.
    pub class: usize,
    pub modulus: usize,
    pub rho: String,
    pub gamma: Rat,
    /// q when the fit used powers of m^(−1/q).
    pub expansion: u32,
    /// None for a class that must vanish identically.
    pub kappa_expected: Option<String>,
    pub expected: f64,
    pub measured: f64,
    pub spread: f64,
    pub relerr: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct KappaReport {
    pub rows: Vec<KappaRow>,
}

impl KappaReport {
    pub fn passed(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.pass)
    }
}

/// Modulus used for the classes: the tabulated period times enough to
/// separate lower-order contributions of period 2, 3 or 4.
pub fn check_modulus(period: u32) -> usize {
    (period.max(1) as usize).lcm(&12)
}

fn rel_spread(e: &Extrapolation) -> BigF {
    if e.value.is_zero() {
        return e.spread.clone();
    }
    (&e.spread / &e.value).abs()
}

/// Fit in powers of 1/m and, with twice the levels, of m^(−1/2); the one
/// whose last two levels agree better wins.
fn best_fit(a: &[Rat], rho: &BigF, gamma: &Rat, r: usize, p: usize, levels: usize, prec: u32) -> Result<(Extrapolation, u32)> {
    let whole = extrapolate_in(a, rho, gamma, r, p, levels, 1, prec)?;
    match extrapolate_in(a, rho, gamma, r, p, 2 * levels, 2, prec) {
        Ok(half) if rel_spread(&half) < rel_spread(&whole) => Ok((half, 2)),
        _ => Ok((whole, 1)),
    }
}

/// Compare extrapolated constants with the expected ones, class by class.
pub fn check_kappa_terms(spec: &AsymSpec, a: &[Rat], levels: usize, tol: f64, prec: u32) -> Result<KappaReport> {
    let q = check_modulus(spec.period);
    let p = spec.period.max(1) as usize;
    let rho = spec.rho.eval(prec + 64)?;
    let rho_s = spec.rho.to_string();
    let mut rows = Vec::with_capacity(q);
    for r in 0..q {
        let base = KappaRow {
            model: spec.model,
            spec: spec.spec,
            class: r,
            modulus: q,
            rho: rho_s.clone(),
            gamma: spec.gamma.clone(),
            expansion: 1,
            kappa_expected: None,
            expected: 0.0,
            measured: 0.0,
            spread: 0.0,
            relerr: 0.0,
            pass: false,
        };
        match spec.kappa.get(r % p).cloned().flatten() {
            None => {
                // exact vanishing on the whole class
                let nonzero = (0..a.len()).filter(|m| m % q == r).find(|&m| !a[m].is_zero());
                let measured = nonzero.map_or(0.0, |m| a[m].to_f64());
                rows.push(KappaRow { measured, relerr: if nonzero.is_some() { 1.0 } else { 0.0 }, pass: nonzero.is_none(), ..base });
            }
            Some(k) => {
                let expected = k.eval(prec)?;
                let (ex, eq) = best_fit(a, &rho, &spec.gamma, r, q, levels, prec)?;
                let rel = (&(&ex.value - &expected) / &expected).abs().to_f64();
                rows.push(KappaRow {
                    kappa_expected: Some(k.to_string()),
                    expected: expected.to_f64(),
                    measured: ex.value.to_f64(),
                    spread: ex.spread.to_f64(),
                    relerr: rel,
                    pass: rel <= tol,
                    expansion: eq,
                    ..base
                });
            }
        }
    }
    Ok(KappaReport { rows })
}

/// Default extrapolation settings.
pub const DEFAULT_NMAX: usize = 4000;
pub const DEFAULT_LEVELS: usize = 8;
pub const DEFAULT_TOL: f64 = 1e-4;
pub const DEFAULT_PREC: u32 = 192;

/// One line per failing row.
pub fn first_failures(rep: &KappaReport) -> Vec<String> {
    rep.rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| {
            alloc::format!(
                "model {} spec {} class {} mod {}: expected {} measured {} relerr {:.3e}",
                r.model,
                r.spec,
                r.class,
                r.modulus,
                r.kappa_expected.clone().unwrap_or_else(|| "0".to_string()),
                r.measured,
                r.relerr
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn synthetic_polynomial_in_inverse_m() {
        // a_m = (2 + 3/m) ρ^m / m^γ with ρ = 1, γ = 0
        let a: Vec<Rat> = (0..200).map(|m| if m == 0 { Rat::zero() } else { &Rat::from(2) + &Rat::frac(3, m) }).collect();
        let e = extrapolate(&a, &BigF::one(128), &Rat::zero(), 0, 1, 4, 128).unwrap();
        let err = (&e.value - &BigF::from_i64(2, 128)).abs();
        assert!(err.is_zero() || err.top() < -100);
    }

    #[test]
    fn synthetic_higher_terms() {
        let a: Vec<Rat> = (0..400)
            .map(|m| {
                if m == 0 {
                    return Rat::zero();
                }
                let h = Rat::frac(1, m);
                let mut s = Rat::frac(7, 5);
                let mut hp = Rat::one();
                for c in 1..=8 {
                    hp = &hp * &h;
                    s += &(&hp * &Rat::from(c * c - 3));
                }
                s
            })
            .collect();
        let e = extrapolate(&a, &BigF::one(128), &Rat::zero(), 1, 2, 8, 128).unwrap();
        let err = (&e.value - &BigF::from_rat(&Rat::frac(7, 5), 128)).abs();
        assert!(err.is_zero() || err.top() < -90);
    }

    #[test]
    fn too_short() {
        let a = vec![Rat::one(); 10];
        assert!(matches!(extrapolate(&a, &BigF::one(64), &Rat::zero(), 0, 1, 8, 64), Err(Error::InsufficientTerms { .. })));
    }
}
