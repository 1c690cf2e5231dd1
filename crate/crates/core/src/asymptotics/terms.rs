use alloc::vec::Vec;

use crate::arith::Rat;
use crate::dfinite::{builtin_operators, guess_auto, to_recurrence, unroll, DiffOp};
use crate::error::{Error, Result};
use crate::walks::{dp_series, ModelData, SpecPoint, StepSet};

/// Terms computed by direct enumeration rather than by a recurrence.
pub const DP_DIRECT: usize = 60;
/// Coefficients held out from the solver when guessing.
pub const GUESS_GUARD: usize = 10;
/// Extra equations beyond the unknowns when guessing.
pub const GUESS_SLACK: usize = 6;
/// Number of DP terms tried for guessing, in order.
pub const GUESS_TERMS: [usize; 4] = [80, 140, 220, 320];
pub const GUESS_MAX_ORDER: usize = 8;

/// Where an annihilating operator came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperatorSource {
    Builtin(&'static str),
    Guessed { terms: usize, order: usize, degree: usize },
}

const KING: [(i64, i64); 8] = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];
const M18: [(i64, i64); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (-1, 1), (1, -1)];

fn same_steps(s: &StepSet, other: &[(i64, i64)]) -> bool {
    s.len() == other.len() && other.iter().all(|&st| s.contains(st))
}

fn builtin_for(s: &StepSet, sp: SpecPoint) -> Option<&'static str> {
    if same_steps(s, &KING) && sp == (SpecPoint { alpha: 1, beta: 1 }) {
        return Some("king");
    }
    if same_steps(s, &M18) && sp.alpha + sp.beta == 1 {
        return Some("case18");
    }
    None
}

/// A verified annihilator of Q(spec; t) for the step set, plus DP terms
/// used to find it.
pub fn annihilator(s: &StepSet, sp: SpecPoint) -> Result<(DiffOp, OperatorSource, Vec<Rat>)> {
    if let Some(name) = builtin_for(s, sp) {
        let f = dp_series(s, &[sp.rats()], DP_DIRECT).remove(0);
        return Ok((builtin_operators()[name].clone(), OperatorSource::Builtin(name), f.power_coeffs()));
    }
    for &t in GUESS_TERMS.iter() {
        let f = dp_series(s, &[sp.rats()], t).remove(0);
        match guess_auto(&f, GUESS_MAX_ORDER, GUESS_GUARD, GUESS_SLACK) {
            Ok((op, order, degree)) => {
                return Ok((op, OperatorSource::Guessed { terms: t, order, degree }, f.power_coeffs()));
            }
            Err(Error::NoOperatorFound) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoOperatorFound)
}

/// Terms a_0..a_N of Q(spec; t) for a step set, by recurrence beyond the
/// enumerated prefix.
pub fn terms_for_steps(s: &StepSet, sp: SpecPoint, n: usize) -> Result<Vec<Rat>> {
    if n <= DP_DIRECT {
        return Ok(dp_series(s, &[sp.rats()], n).remove(0).power_coeffs());
    }
    let (op, _, init) = annihilator(s, sp)?;
    terms_with(s, sp, &op, init, n)
}

/// Terms a_0..a_N from a known annihilator; `init` holds enumerated terms
/// and is extended when the recurrence needs more.
pub fn terms_with(s: &StepSet, sp: SpecPoint, op: &DiffOp, mut init: Vec<Rat>, n: usize) -> Result<Vec<Rat>> {
    let rec = to_recurrence(op)?;
    let need = rec.init_needed().max(DP_DIRECT.min(n + 1));
    if need > init.len() {
        init = dp_series(s, &[sp.rats()], need).remove(0).power_coeffs();
    }
    if n + 1 <= init.len() {
        init.truncate(n + 1);
        return Ok(init);
    }
    unroll(&rec, &init, n)
}

/// Terms a_0..a_N of Q(spec; t) for a bundled model.
pub fn terms_for(m: &ModelData, sp: SpecPoint, n: usize) -> Result<Vec<Rat>> {
    terms_for_steps(&m.stepset, sp, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn king_terms() {
        let s = StepSet::new(&KING).unwrap();
        let a = terms_for_steps(&s, SpecPoint { alpha: 1, beta: 1 }, 100).unwrap();
        let d = dp_series(&s, &[(Rat::one(), Rat::one())], 100).remove(0).power_coeffs();
        assert_eq!(a, d);
        assert_eq!(a[8], Rat::from(1_564_080));
    }

    #[test]
    fn zero_terms() {
        let s = StepSet::new(&KING).unwrap();
        assert_eq!(terms_for_steps(&s, SpecPoint { alpha: 0, beta: 0 }, 0).unwrap(), alloc::vec![Rat::one()]);
    }
}
