use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::steps::StepSet;
use crate::arith::Rat;
use crate::series::TSeries;

/// q[n][i][j] for 0 ≤ i, j ≤ n ≤ N, stored per n as a dense (n+1)² grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkTable {
    layers: Vec<Vec<BigInt>>,
}

impl WalkTable {
    pub fn order(&self) -> usize {
        self.layers.len() - 1
    }

    /// q_{i,j;n}, zero outside the stored box.
    pub fn get(&self, n: usize, i: usize, j: usize) -> &BigInt {
        static ZERO: BigInt = BigInt::ZERO;
        if i > n || j > n || n >= self.layers.len() {
            return &ZERO;
        }
        &self.layers[n][i * (n + 1) + j]
    }

    pub fn layer(&self, n: usize) -> &[BigInt] {
        &self.layers[n]
    }

    pub fn total(&self, n: usize) -> BigInt {
        self.layers[n].iter().sum()
    }

    pub fn totals(&self) -> Vec<BigInt> {
        (0..self.layers.len()).map(|n| self.total(n)).collect()
    }
}

fn step_layer(prev: &[BigInt], n: usize, steps: &[(i64, i64)]) -> Vec<BigInt> {
    // prev is the (n)×(n) grid of layer n−1; build the (n+1)² grid of layer n
    let w = n + 1;
    let pw = n;
    let mut cur = vec![BigInt::zero(); w * w];
    for i in 0..pw {
        for j in 0..pw {
            let v = &prev[i * pw + j];
            if v.is_zero() {
                continue;
            }
            for &(a, b) in steps {
                let ni = i as i64 + a;
                let nj = j as i64 + b;
                if ni < 0 || nj < 0 {
                    continue;
                }
                cur[ni as usize * w + nj as usize] += v;
            }
        }
    }
    cur
}

/// Exact counts of quarter-plane walks by endpoint and length.
pub fn enumerate(s: &StepSet, n_max: usize) -> WalkTable {
    let mut layers = Vec::with_capacity(n_max + 1);
    layers.push(vec![BigInt::one()]);
    for n in 1..=n_max {
        let next = step_layer(&layers[n - 1], n, s.steps());
        layers.push(next);
    }
    WalkTable { layers }
}

fn powers(a: &Rat, n: usize) -> Vec<Rat> {
    let mut v = Vec::with_capacity(n + 1);
    let mut p = Rat::one();
    for _ in 0..=n {
        v.push(p.clone());
        p = &p * a;
    }
    v
}

fn specialize_layer(layer: &[BigInt], n: usize, ap: &[Rat], bp: &[Rat]) -> Rat {
    let w = n + 1;
    let mut acc = Rat::zero();
    for i in 0..w {
        if ap[i].is_zero() {
            continue;
        }
        let mut row = Rat::zero();
        for j in 0..w {
            let v = &layer[i * w + j];
            if v.is_zero() || bp[j].is_zero() {
                continue;
            }
            if bp[j].is_one() {
                row += &Rat::from(v.clone());
            } else {
                row += &(&bp[j] * &Rat::from(v.clone()));
            }
        }
        acc += &(&row * &ap[i]);
    }
    acc
}

/// Q(α, β; t) mod t^(N+1) from a table.
pub fn specialize(tab: &WalkTable, alpha: &Rat, beta: &Rat) -> TSeries {
    let n = tab.order();
    let ap = powers(alpha, n);
    let bp = powers(beta, n);
    TSeries::from_coeffs((0..=n).map(|k| specialize_layer(tab.layer(k), k, &ap, &bp)).collect())
}

/// Q(α, β; t) at several points without storing the whole table.
pub fn dp_series(s: &StepSet, points: &[(Rat, Rat)], n_max: usize) -> Vec<TSeries> {
    let pw: Vec<(Vec<Rat>, Vec<Rat>)> = points.iter().map(|(a, b)| (powers(a, n_max), powers(b, n_max))).collect();
    let mut out: Vec<Vec<Rat>> = vec![Vec::with_capacity(n_max + 1); points.len()];
    let mut layer = vec![BigInt::one()];
    for n in 0..=n_max {
        if n > 0 {
            layer = step_layer(&layer, n, s.steps());
        }
        for (k, (ap, bp)) in pw.iter().enumerate() {
            out[k].push(specialize_layer(&layer, n, ap, bp));
        }
    }
    out.into_iter().map(TSeries::from_coeffs).collect()
}

/// Exhaustive rejection count over all |S|^n step sequences.
///
/// A sequence is split into a prefix of ⌈n/2⌉ steps and a suffix of ⌊n/2⌋
/// steps. Prefixes are enumerated one by one and rejected when they leave
/// N²; suffixes are enumerated one by one and summarized by their
/// displacement and minimal partial sums, which decide acceptance after any
/// given prefix endpoint. Every one of the |S|^n sequences is examined,
/// without any recurrence over walk lengths.
pub fn brute_force_counts(s: &StepSet, n: usize) -> BTreeMap<(i64, i64), BigInt> {
    let steps = s.steps();
    let half1 = (n + 1) / 2;
    let half2 = n / 2;
    // prefix endpoints of valid prefixes
    let mut pre: BTreeMap<(i64, i64), u64> = BTreeMap::new();
    for_each_sequence(steps, half1, |seq| {
        let (mut x, mut y) = (0i64, 0i64);
        for &(a, b) in seq {
            x += a;
            y += b;
            if x < 0 || y < 0 {
                return;
            }
        }
        *pre.entry((x, y)).or_insert(0) += 1;
    });
    // suffix classes: (min x partial, min y partial, dx, dy)
    let mut suf: BTreeMap<(i64, i64, i64, i64), u64> = BTreeMap::new();
    for_each_sequence(steps, half2, |seq| {
        let (mut x, mut y, mut mx, mut my) = (0i64, 0i64, 0i64, 0i64);
        for &(a, b) in seq {
            x += a;
            y += b;
            mx = mx.min(x);
            my = my.min(y);
        }
        *suf.entry((mx, my, x, y)).or_insert(0) += 1;
    });
    let mut out: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
    for (&(x, y), &c1) in &pre {
        for (&(mx, my, dx, dy), &c2) in &suf {
            if x + mx >= 0 && y + my >= 0 {
                *out.entry((x + dx, y + dy)).or_insert_with(BigInt::zero) += BigInt::from(c1) * BigInt::from(c2);
            }
        }
    }
    out
}

/// Literal rejection enumeration, one sequence at a time (small n only).
pub fn brute_force_counts_literal(s: &StepSet, n: usize) -> BTreeMap<(i64, i64), BigInt> {
    let mut out: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
    for_each_sequence(s.steps(), n, |seq| {
        let (mut x, mut y) = (0i64, 0i64);
        for &(a, b) in seq {
            x += a;
            y += b;
            if x < 0 || y < 0 {
                return;
            }
        }
        *out.entry((x, y)).or_insert_with(BigInt::zero) += 1u32;
    });
    out
}

fn for_each_sequence(steps: &[(i64, i64)], n: usize, mut f: impl FnMut(&[(i64, i64)])) {
    let k = steps.len();
    let mut idx = vec![0usize; n];
    let mut seq: Vec<(i64, i64)> = vec![steps[0]; n];
    loop {
        f(&seq);
        // odometer increment
        let mut p = 0;
        loop {
            if p == n {
                return;
            }
            idx[p] += 1;
            if idx[p] < k {
                seq[p] = steps[idx[p]];
                break;
            }
            idx[p] = 0;
            seq[p] = steps[0];
            p += 1;
        }
    }
}

/// Σ_{i,j} counts·α^i β^j for a brute-force endpoint map.
pub fn specialize_counts(counts: &BTreeMap<(i64, i64), BigInt>, alpha: &Rat, beta: &Rat) -> Rat {
    counts.iter().map(|(&(i, j), c)| &(&alpha.pow(i as i32) * &beta.pow(j as i32)) * &Rat::from(c.clone())).sum()
}
