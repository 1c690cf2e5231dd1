//! Polyhedral cones, series supported in cones, and the positive-part and
//! residue descriptions of Q(x, y; t).

mod cone;
mod series3;

pub use cone::{
    cone_contains, cone_is_line_free, cones_in_opposition, fm_eliminate, fm_feasible, h_representation, ConeSpec,
    Constraint, MAX_DIM,
};
pub use series3::ConeSeries3;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use num_traits::Zero;

use crate::arith::{LPoly1, LPoly2, Rat, RatFn, RatFn2};
use crate::error::{Error, Result};
use crate::series::{ratfn_expand_at_infinity, ratfn_expand_at_zero, TSeries};
use crate::walks::{ModelData, WalkTable};

/// N(x, y) = Σ_j N_j(x) y^j, when the denominator of N is a power of y.
pub fn y_laurent_coeffs(n: &RatFn2) -> Option<BTreeMap<i64, RatFn>> {
    let den = n.den();
    let d = den.deg();
    if den.coeffs()[..d as usize].iter().any(|c| !c.is_zero()) {
        return None;
    }
    let mut out = BTreeMap::new();
    for (i, c) in n.num().coeffs().iter().enumerate() {
        if !c.is_zero() {
            out.insert(i as i64 - d, c.clone());
        }
    }
    Some(out)
}

/// Laurent polynomial in x, if the denominator is a monomial.
fn as_laurent(f: &RatFn) -> Option<LPoly1> {
    let den = f.den();
    let a = den.deg();
    if den.coeffs()[..a as usize].iter().any(|c| !c.is_zero()) {
        return None;
    }
    let mut p = LPoly1::zero();
    for (i, c) in f.num().coeffs().iter().enumerate() {
        if !c.is_zero() {
            p.add_term(i as i64 - a, c.clone());
        }
    }
    Some(p)
}

/// [f]_{Γ'}: f expanded in powers of x̄, terms with x-exponent ≥ lo.
fn expand_gamma_prime(f: &RatFn, lo: i64) -> LPoly1 {
    if let Some(p) = as_laurent(f) {
        let mut q = LPoly1::zero();
        for (&k, c) in p.terms() {
            if k >= lo {
                q.add_term(k, c.clone());
            }
        }
        return q;
    }
    let top = f.num().deg() - f.den().deg();
    let depth = (top - lo).max(0);
    let s = ratfn_expand_at_infinity(f, depth);
    let mut q = LPoly1::zero();
    for e in s.min_exp()..=s.order() {
        let c = s.coeff(e);
        if !c.is_zero() && -e >= lo {
            q.add_term(-e, c);
        }
    }
    q
}

fn orbit_coeffs(m: &ModelData) -> Result<BTreeMap<i64, RatFn>> {
    y_laurent_coeffs(&m.n_orbit)
        .ok_or_else(|| Error::ValidationFailed(format!("model {}: orbit numerator is not Laurent in y", m.id)))
}

/// Negative-exponent depth used unless a caller asks otherwise.
pub fn default_kneg(nt: usize) -> i64 {
    nt as i64 + 2
}

fn clip(p: &LPoly2, lo_k: i64, lo_m: i64) -> LPoly2 {
    let mut q = LPoly2::zero();
    for (&(k, m), c) in p.terms() {
        if k >= lo_k && m >= lo_m {
            q.add_term(k, m, c.clone());
        }
    }
    q
}

/// φ = [N/(1 − tS)]_Γ = Σ_n [N]_{Γ'} S^n t^n for n ≤ nt, known down to
/// exponent −kneg in x and y.
pub fn expand_r(m: &ModelData, nt: usize, kneg: i64) -> Result<ConeSeries3> {
    let nt_i = nt as i64;
    let mut p = LPoly2::zero();
    for (j, f) in orbit_coeffs(m)? {
        for (&k, c) in expand_gamma_prime(&f, -kneg - nt_i).terms() {
            p.add_term(k, j, c.clone());
        }
    }
    let s = m.stepset.step_poly();
    let mut layers = Vec::with_capacity(nt + 1);
    for n in 0..=nt_i {
        layers.push(p.clone());
        if n < nt_i {
            let lo = -kneg - (nt_i - n - 1);
            p = clip(&p.mul(&s), lo, lo);
        }
    }
    Ok(ConeSeries3::new(ConeSpec::gamma(), layers, Some(kneg)))
}

fn table_layer_xy(tab: &WalkTable, n: usize) -> LPoly2 {
    let mut p = LPoly2::zero();
    for i in 0..=n {
        for j in 0..=n {
            let v = tab.get(n, i, j);
            if !v.is_zero() {
                p.add_term(i as i64 + 1, j as i64 + 1, Rat::from(v.clone()));
            }
        }
    }
    p
}

/// xy·Q(x, y; t) = [x^> y^>] N/(1 − tS), compared layer by layer against
/// the enumeration table.
pub fn positive_part_check(m: &ModelData, tab: &WalkTable, order: usize) -> Result<()> {
    let order = order.min(tab.order());
    let pp = expand_r(m, order, default_kneg(order))?.positive_part_xy()?;
    for n in 0..=order {
        let diff = pp.layer(n).sub(&table_layer_xy(tab, n));
        if let Some((&(x, y), _)) = diff.terms().iter().next() {
            return Err(Error::ResidualNonzero { x, y, t: n as i64 });
        }
    }
    Ok(())
}

/// Q(α, β; t) as Res_{x,y} (1/xy)·φ(x̄, ȳ)·[xy/((1 − αx)(1 − βy))]_{R≥0²},
/// computed as the Hadamard product of φ with the geometric kernel summed
/// over its support.
pub fn q_via_residue(m: &ModelData, alpha: &Rat, beta: &Rat, nt: usize) -> Result<TSeries> {
    let phi = expand_r(m, nt, default_kneg(nt))?;
    let mut g_layers = Vec::with_capacity(nt + 1);
    let mut apow = Vec::with_capacity(nt + 2);
    let mut bpow = Vec::with_capacity(nt + 2);
    let (mut a, mut b) = (Rat::one(), Rat::one());
    for _ in 0..=nt + 1 {
        apow.push(a.clone());
        bpow.push(b.clone());
        a = &a * alpha;
        b = &b * beta;
    }
    for n in 0..=nt {
        // exponents of φ_n never exceed n + 1
        let mut g = LPoly2::zero();
        for i in 0..=n {
            for j in 0..=n {
                let c = &apow[i] * &bpow[j];
                if !c.is_zero() {
                    g.add_term(i as i64 + 1, j as i64 + 1, c);
                }
            }
        }
        g_layers.push(g);
    }
    let g = ConeSeries3::new(ConeSpec::orthant(3), g_layers, None);
    phi.hadamard(&g).positive_part_xy()?.eval_xy(&Rat::one(), &Rat::one())
}

fn mul_y(a: &BTreeMap<i64, RatFn>, b: &BTreeMap<i64, RatFn>) -> BTreeMap<i64, RatFn> {
    let mut out: BTreeMap<i64, RatFn> = BTreeMap::new();
    for (i, f) in a {
        for (j, g) in b {
            let e = out.entry(i + j).or_insert_with(RatFn::zero);
            *e = &*e + &(f * g);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Both routes to [x^> y^>] of N·S^j agree on x-exponents ≤ bound: the
/// Γ'-expansion followed by positive parts, and the exact y-positive part
/// (a Laurent polynomial in x) followed by its x-positive part.
pub fn verify_lemma9(m: &ModelData, j: usize, bound: i64) -> Result<bool> {
    let lhs_full = expand_r(m, j, default_kneg(j))?.positive_part_xy()?;
    let mut lhs = LPoly2::zero();
    for (&(k, mm), c) in lhs_full.layer(j).terms() {
        if k <= bound {
            lhs.add_term(k, mm, c.clone());
        }
    }
    let kd = m.kernel();
    let mut s = BTreeMap::new();
    for (e, a) in [(1, &kd.a1), (0, &kd.a0), (-1, &kd.am1)] {
        if !a.is_zero() {
            s.insert(e, a.to_ratfn());
        }
    }
    let mut prod = orbit_coeffs(m)?;
    for _ in 0..j {
        prod = mul_y(&prod, &s);
    }
    let mut rhs = LPoly2::zero();
    for (&e, f) in prod.range(1..) {
        if as_laurent(f).is_none() {
            return Ok(false);
        }
        let ser = ratfn_expand_at_zero(f, bound)?;
        for k in 1..=bound {
            let c = ser.coeff(k);
            if !c.is_zero() {
                rhs.add_term(k, e, c);
            }
        }
    }
    Ok(lhs == rhs)
}

/// f ⊙ g = Res_{y1,y2} (1/(y1 y2))·f(x1/y1, x2/y2)·g(y1, y2), with the
/// right side expanded in all four variables.
pub fn hadamard_residue_check(f: &LPoly2, g: &LPoly2) -> bool {
    // (x1, x2, y1, y2) exponents
    let mut prod: BTreeMap<(i64, i64, i64, i64), Rat> = BTreeMap::new();
    for (&(a, b), fc) in f.terms() {
        for (&(c, d), gc) in g.terms() {
            let key = (a, b, c - a - 1, d - b - 1);
            let e = prod.entry(key).or_insert_with(Rat::zero);
            *e = &*e + &(fc * gc);
        }
    }
    let mut res = LPoly2::zero();
    for (&(a, b, e1, e2), c) in &prod {
        if e1 == -1 && e2 == -1 {
            res.add_term(a, b, c.clone());
        }
    }
    let mut had = LPoly2::zero();
    for (&(a, b), fc) in f.terms() {
        let gc = g.coeff(a, b);
        if !gc.is_zero() {
            had.add_term(a, b, fc * &gc);
        }
    }
    res == had
}
