use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{integer_content, Rat};
use crate::error::{Error, Result};

pub const MAX_DIM: usize = 4;

/// Conic hull of integer generators in R^dim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSpec {
    pub dim: usize,
    pub generators: Vec<Vec<i64>>,
}

impl ConeSpec {
    pub fn new(dim: usize, generators: Vec<Vec<i64>>) -> ConeSpec {
        for g in &generators {
            assert_eq!(g.len(), dim, "generator dimension mismatch");
            assert!(g.iter().any(|&v| v != 0), "zero generator");
        }
        ConeSpec { dim, generators }
    }

    /// The nonnegative orthant R_{≥0}^dim.
    pub fn orthant(dim: usize) -> ConeSpec {
        let gens = (0..dim).map(|i| (0..dim).map(|j| (i == j) as i64).collect()).collect();
        ConeSpec::new(dim, gens)
    }

    /// Γ = cone{(1,1,1), (1,−1,1), (−1,0,0)} in (x, y, t)-exponent space.
    pub fn gamma() -> ConeSpec {
        ConeSpec::new(3, vec![vec![1, 1, 1], vec![1, -1, 1], vec![-1, 0, 0]])
    }

    /// Γ' = R_{≤0} × {0}.
    pub fn gamma_prime() -> ConeSpec {
        ConeSpec::new(2, vec![vec![-1, 0]])
    }

    /// Image under projection onto the coordinates k.. (zero images dropped).
    pub fn project_tail(&self, k: usize) -> ConeSpec {
        let gens = self.generators.iter().map(|g| g[k..].to_vec()).filter(|g| g.iter().any(|&v| v != 0)).collect();
        ConeSpec { dim: self.dim - k, generators: gens }
    }

    fn check_dim(&self) -> Result<()> {
        if self.dim > MAX_DIM {
            Err(Error::DimensionUnsupported(self.dim))
        } else {
            Ok(())
        }
    }
}

/// a·x ≥ b (or = b when `eq`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub a: Vec<Rat>,
    pub b: Rat,
    pub eq: bool,
}

impl Constraint {
    fn normalized(mut self) -> Constraint {
        // scale to primitive integer coefficients, positive scale only
        let mut v = self.a.clone();
        v.push(self.b.clone());
        let (c, _) = integer_content(&v);
        if c.is_zero() {
            return self;
        }
        let c = c.abs();
        self.a = self.a.iter().map(|x| x / &c).collect();
        self.b = &self.b / &c;
        self
    }

    fn is_trivial(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    fn holds_trivially(&self) -> bool {
        if self.eq {
            self.b.is_zero()
        } else {
            self.b <= Rat::zero()
        }
    }
}

/// Eliminate the variables `elim` (indices) by substitution through
/// equalities and Fourier–Motzkin on inequalities. Returns the projected
/// system on the remaining variables, or `None` if it is infeasible.
pub fn fm_eliminate(mut cons: Vec<Constraint>, elim: &[usize]) -> Option<Vec<Constraint>> {
    for &v in elim {
        if let Some(pos) = cons.iter().position(|c| c.eq && !c.a[v].is_zero()) {
            let e = cons.remove(pos);
            let inv = e.a[v].recip();
            let mut out = Vec::with_capacity(cons.len());
            for c in cons.into_iter() {
                if c.a[v].is_zero() {
                    out.push(c);
                    continue;
                }
                let f = &c.a[v] * &inv;
                let a: Vec<Rat> = c.a.iter().zip(e.a.iter()).map(|(x, y)| x - &(&f * y)).collect();
                out.push(Constraint { a, b: &c.b - &(&f * &e.b), eq: c.eq }.normalized());
            }
            cons = out;
        } else {
            let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
            for c in cons.into_iter() {
                if c.a[v].is_zero() {
                    rest.push(c);
                } else if c.a[v] > Rat::zero() {
                    pos.push(c);
                } else {
                    neg.push(c);
                }
            }
            for p in &pos {
                for n in &neg {
                    let fp = -&n.a[v];
                    let fn_ = p.a[v].clone();
                    let a: Vec<Rat> = p.a.iter().zip(n.a.iter()).map(|(x, y)| &(x * &fp) + &(y * &fn_)).collect();
                    let b = &(&p.b * &fp) + &(&n.b * &fn_);
                    rest.push(Constraint { a, b, eq: false }.normalized());
                }
            }
            cons = prune(rest);
        }
        for c in &cons {
            if c.is_trivial() && !c.holds_trivially() {
                return None;
            }
        }
        cons.retain(|c| !c.is_trivial());
    }
    Some(cons)
}

/// Drop duplicates and inequalities dominated by one with the same normal.
fn prune(cons: Vec<Constraint>) -> Vec<Constraint> {
    let mut out: Vec<Constraint> = Vec::new();
    'outer: for c in cons.into_iter() {
        for o in out.iter_mut() {
            if o.eq == c.eq && o.a == c.a {
                if c.eq {
                    if o.b != c.b {
                        // contradictory equalities; keep both so the caller sees it
                        break;
                    }
                    continue 'outer;
                }
                if c.b > o.b {
                    o.b = c.b.clone();
                }
                continue 'outer;
            }
        }
        out.push(c);
    }
    out
}

pub fn fm_feasible(cons: Vec<Constraint>, nvars: usize) -> bool {
    let all: Vec<usize> = (0..nvars).collect();
    fm_eliminate(cons, &all).is_some()
}

fn ri(v: i64) -> Rat {
    Rat::from(v)
}

/// C ∩ (−C) = {0}: no nonzero ν ≥ 0 with Σ ν_i g_i = 0.
pub fn cone_is_line_free(c: &ConeSpec) -> Result<bool> {
    c.check_dim()?;
    let r = c.generators.len();
    if r == 0 {
        return Ok(true);
    }
    let mut cons = Vec::new();
    for d in 0..c.dim {
        cons.push(Constraint { a: c.generators.iter().map(|g| ri(g[d])).collect(), b: Rat::zero(), eq: true });
    }
    cons.push(Constraint { a: vec![Rat::one(); r], b: Rat::one(), eq: true });
    for i in 0..r {
        let mut a = vec![Rat::zero(); r];
        a[i] = Rat::one();
        cons.push(Constraint { a, b: Rat::zero(), eq: false });
    }
    Ok(!fm_feasible(cons, r))
}

/// Whether two cones are in opposition with respect to the first k
/// coordinates.
pub fn cones_in_opposition(c1: &ConeSpec, c2: &ConeSpec, k: usize) -> Result<bool> {
    c1.check_dim()?;
    c2.check_dim()?;
    assert_eq!(c1.dim, c2.dim, "cones of different dimension");
    assert!(k <= c1.dim);
    if !cone_is_line_free(&c1.project_tail(k))? || !cone_is_line_free(&c2.project_tail(k))? {
        return Ok(false);
    }
    // variables: λ (r1), μ (r2); u = Gλ = Hμ with u_{k..} = 0
    let (r1, r2) = (c1.generators.len(), c2.generators.len());
    let nv = r1 + r2;
    let mut base = Vec::new();
    for d in 0..c1.dim {
        let mut a = vec![Rat::zero(); nv];
        for (i, g) in c1.generators.iter().enumerate() {
            a[i] = ri(g[d]);
        }
        for (j, h) in c2.generators.iter().enumerate() {
            a[r1 + j] = ri(-h[d]);
        }
        base.push(Constraint { a, b: Rat::zero(), eq: true });
        if d >= k {
            let mut a = vec![Rat::zero(); nv];
            for (i, g) in c1.generators.iter().enumerate() {
                a[i] = ri(g[d]);
            }
            base.push(Constraint { a, b: Rat::zero(), eq: true });
        }
    }
    for i in 0..nv {
        let mut a = vec![Rat::zero(); nv];
        a[i] = Rat::one();
        base.push(Constraint { a, b: Rat::zero(), eq: false });
    }
    // a nonzero point of the intersection cone can be scaled to |u_d| ≥ 1
    for d in 0..k {
        for sgn in [1i64, -1] {
            let mut cons = base.clone();
            let mut a = vec![Rat::zero(); nv];
            for (i, g) in c1.generators.iter().enumerate() {
                a[i] = ri(sgn * g[d]);
            }
            cons.push(Constraint { a, b: Rat::one(), eq: false });
            if fm_feasible(cons, nv) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Facet description {u : A u ≥ 0} of the cone, by projecting out λ.
pub fn h_representation(c: &ConeSpec) -> Result<Vec<Vec<Rat>>> {
    c.check_dim()?;
    let r = c.generators.len();
    let nv = c.dim + r;
    let mut cons = Vec::new();
    for d in 0..c.dim {
        let mut a = vec![Rat::zero(); nv];
        a[d] = Rat::one();
        for (i, g) in c.generators.iter().enumerate() {
            a[c.dim + i] = ri(-g[d]);
        }
        cons.push(Constraint { a, b: Rat::zero(), eq: true });
    }
    for i in 0..r {
        let mut a = vec![Rat::zero(); nv];
        a[c.dim + i] = Rat::one();
        cons.push(Constraint { a, b: Rat::zero(), eq: false });
    }
    // eliminate λ; equalities that survive become pairs of inequalities
    let elim: Vec<usize> = (c.dim..nv).collect();
    let rest = fm_eliminate(cons, &elim).expect("cone system is always feasible");
    let mut out = Vec::new();
    for k in rest {
        let a: Vec<Rat> = k.a[..c.dim].to_vec();
        if k.eq {
            out.push(a.iter().map(|x| -x).collect());
        }
        out.push(a);
    }
    Ok(out)
}

pub fn cone_contains(h: &[Vec<Rat>], u: &[i64]) -> bool {
    h.iter().all(|a| a.iter().zip(u.iter()).map(|(x, &v)| x * &Rat::from(v)).sum::<Rat>() >= Rat::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_free_examples() {
        assert!(cone_is_line_free(&ConeSpec::gamma()).unwrap());
        assert!(!cone_is_line_free(&ConeSpec::new(2, vec![vec![1, 0], vec![-1, 0]])).unwrap());
        assert!(cone_is_line_free(&ConeSpec::orthant(2)).unwrap());
        assert_eq!(cone_is_line_free(&ConeSpec::orthant(5)), Err(Error::DimensionUnsupported(5)));
    }

    #[test]
    fn opposition_examples() {
        assert!(cones_in_opposition(&ConeSpec::gamma(), &ConeSpec::orthant(3), 2).unwrap());
        assert!(!cones_in_opposition(&ConeSpec::orthant(2), &ConeSpec::orthant(2), 2).unwrap());
        let c = ConeSpec::new(2, vec![vec![-1, 0], vec![0, 1]]);
        assert!(cones_in_opposition(&ConeSpec::orthant(2), &c, 1).unwrap());
    }

    #[test]
    fn gamma_h_representation() {
        let h = h_representation(&ConeSpec::gamma()).unwrap();
        // n ≥ 0, −n ≤ m ≤ n, k ≤ n on (k, m, n)
        for k in -4..=4 {
            for m in -4..=4 {
                for n in -4..=4 {
                    let want = n >= 0 && -n <= m && m <= n && k <= n;
                    assert_eq!(cone_contains(&h, &[k, m, n]), want, "{:?}", (k, m, n));
                }
            }
        }
    }
}
