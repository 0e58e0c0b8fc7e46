//! Dense multilinear-map kernels.
//!
//! A degree-`n` component over a `d`-dimensional algebra is a flat array of
//! length `d^n * d`: basis tuples in row-major order (first argument most
//! significant), then output coordinates. Everything the series layer does
//! reduces to contracting one argument slot against a block of values.

use std::collections::HashMap;

use dashu_int::ops::Gcd;
use dashu_int::{IBig, UBig};

use crate::algebra::BaseAlgebra;
use crate::rational::Rational;

/// Coefficient types the contraction kernels run over.
pub(crate) trait Coeff: Clone {
    fn zero_elem() -> Self;
    fn is_zero_elem(&self) -> bool;
    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self);
}

impl Coeff for Rational {
    fn zero_elem() -> Self {
        Rational::zero()
    }
    fn is_zero_elem(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        Rational::add_mul(self, a, b)
    }
}

impl Coeff for IBig {
    fn zero_elem() -> Self {
        IBig::ZERO
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        if a.is_zero_elem() || b.is_zero_elem() {
            return;
        }
        *self += a * b;
    }
}

#[inline]
pub(crate) fn pow(d: usize, n: usize) -> usize {
    d.pow(n as u32)
}

pub(crate) fn is_zero<T: Coeff>(t: &[T]) -> bool {
    t.iter().all(Coeff::is_zero_elem)
}

/// Substitutes a block of values into one argument slot.
///
/// `t` has shape `[outer][d][inner]` and `block` has shape `[u][d]`, row
/// `k` being the value (in coordinates) plugged in for the `k`-th index of
/// the new slot. Returns shape `[outer][u][inner]`.
pub(crate) fn contract_slot<T: Coeff>(t: &[T], outer: usize, d: usize, inner: usize, block: &[T], u: usize) -> Vec<T> {
    debug_assert_eq!(t.len(), outer * d * inner);
    debug_assert_eq!(block.len(), u * d);
    let mut out = vec![T::zero_elem(); outer * u * inner];
    for a in 0..outer {
        for x in 0..d {
            let src = &t[(a * d + x) * inner..(a * d + x + 1) * inner];
            if is_zero(src) {
                continue;
            }
            for k in 0..u {
                let g = &block[k * d + x];
                if g.is_zero_elem() {
                    continue;
                }
                let dst = &mut out[(a * u + k) * inner..(a * u + k + 1) * inner];
                for (o, s) in dst.iter_mut().zip(src) {
                    o.add_mul(g, s);
                }
            }
        }
    }
    out
}

/// Evaluates a degree-`n` component on `n` arbitrary elements.
pub(crate) fn evaluate(t: &[Rational], d: usize, args: &[&[Rational]]) -> Vec<Rational> {
    let n = args.len();
    debug_assert_eq!(t.len(), pow(d, n) * d);
    let mut cur = t.to_vec();
    // peel off the last remaining slot each time; the output block stays `d`
    for j in (0..n).rev() {
        cur = contract_slot(&cur, pow(d, j), d, d, args[j], 1);
    }
    cur
}

/// Fixes argument `slot` (0-based) of a degree-`n` component to `value`,
/// leaving a degree-`n-1` component.
pub(crate) fn fix_slot(t: &[Rational], d: usize, n: usize, slot: usize, value: &[Rational]) -> Vec<Rational> {
    contract_slot(t, pow(d, slot), d, pow(d, n - 1 - slot) * d, value, 1)
}

/// All compositions of `n` into positive parts.
pub(crate) fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::with_capacity(1 << (n - 1));
    for mask in 0..(1usize << (n - 1)) {
        let mut parts = Vec::new();
        let mut run = 1;
        for bit in 0..n - 1 {
            if mask & (1 << bit) != 0 {
                parts.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        parts.push(run);
        out.push(parts);
    }
    out
}

/// Series components over a common denominator: value = `nums / den`.
pub(crate) struct Scaled {
    pub comps: Vec<Vec<IBig>>,
    pub den: IBig,
}

impl Scaled {
    pub fn new(comps: &[Vec<Rational>]) -> Self {
        // few distinct denominators occur, so work per distinct value
        let mut factors: HashMap<&UBig, IBig> = HashMap::new();
        let mut den = UBig::ONE;
        for x in comps.iter().flatten().filter(|x| !x.is_zero()) {
            if !factors.contains_key(x.denom()) {
                den = lcm(&den, x.denom());
                factors.insert(x.denom(), IBig::ZERO);
            }
        }
        for (q, f) in factors.iter_mut() {
            *f = IBig::from(&den / *q);
        }
        let comps = comps
            .iter()
            .map(|c| {
                c.iter()
                    .map(|x| {
                        if x.is_zero() {
                            IBig::ZERO
                        } else {
                            x.numer() * &factors[x.denom()]
                        }
                    })
                    .collect()
            })
            .collect();
        Scaled {
            comps,
            den: IBig::from(den),
        }
    }
}

pub(crate) fn lcm(a: &UBig, b: &UBig) -> UBig {
    if b.is_one() {
        return a.clone();
    }
    a / a.gcd(b) * b
}

/// Divides integer coordinates by `den`, reducing each entry.
pub(crate) fn unscale(nums: Vec<IBig>, den: &IBig) -> Vec<Rational> {
    nums.into_iter()
        .map(|n| {
            if n.is_zero() {
                Rational::zero()
            } else {
                Rational::from_bigints(n, den.clone()).expect("nonzero denominator")
            }
        })
        .collect()
}

/// Component `n` of `f ∘ g`, as integers over `f.den * g.den^n`.
/// `g[0]` is ignored (callers guarantee it vanishes).
pub(crate) fn compose_component(f: &Scaled, g: &Scaled, d: usize, n: usize) -> (Vec<IBig>, IBig) {
    if n == 0 {
        return (f.comps[0].clone(), f.den.clone());
    }
    let den = &f.den * g.den.pow(n);
    let g_zero: Vec<bool> = g.comps.iter().take(n + 1).map(|c| is_zero(c)).collect();
    let mut out = vec![IBig::ZERO; pow(d, n) * d];
    for parts in compositions(n) {
        let l = parts.len();
        if is_zero(&f.comps[l]) || parts.iter().any(|&k| g_zero[k]) {
            continue;
        }
        let mut inner = d;
        let mut cur: Option<Vec<IBig>> = None;
        for j in (0..l).rev() {
            let k = parts[j];
            let src = cur.as_deref().unwrap_or(&f.comps[l]);
            let next = contract_slot(src, pow(d, j), d, inner, &g.comps[k], pow(d, k));
            inner *= pow(d, k);
            cur = Some(next);
        }
        // bring the l-fold product of g-denominators up to g.den^n
        let lift = g.den.pow(n - l);
        let lift_is_one = lift.is_one();
        for (o, v) in out.iter_mut().zip(cur.expect("l >= 1")) {
            if lift_is_one {
                *o += v;
            } else {
                *o += v * &lift;
            }
        }
    }
    (out, den)
}

/// Component `n` of `f · g`, as integers over `f.den * g.den * alg.table_den()`.
pub(crate) fn mul_component(f: &Scaled, g: &Scaled, alg: &BaseAlgebra, n: usize) -> (Vec<IBig>, IBig) {
    let d = alg.dim();
    let den = &f.den * &g.den * alg.table_den();
    let mut out = vec![IBig::ZERO; pow(d, n) * d];
    for k in 0..=n {
        let (fk, gk) = (&f.comps[k], &g.comps[n - k]);
        if is_zero(fk) || is_zero(gk) {
            continue;
        }
        let right = pow(d, n - k);
        for u1 in 0..pow(d, k) {
            let a = &fk[u1 * d..(u1 + 1) * d];
            if is_zero(a) {
                continue;
            }
            for u2 in 0..right {
                let b = &gk[u2 * d..(u2 + 1) * d];
                if is_zero(b) {
                    continue;
                }
                let idx = u1 * right + u2;
                alg.mul_acc_int(&mut out[idx * d..(idx + 1) * d], a, b);
            }
        }
    }
    (out, den)
}

/// Component `n` of the insertion sum `Σ_j f_k(I, .., g_m, .., I)` with
/// `g_m` in slot `j` and `k + m = n + 1`, as integers over `f.den * g.den`.
pub(crate) fn insertion_component(f: &Scaled, g: &Scaled, d: usize, n: usize) -> (Vec<IBig>, IBig) {
    let den = &f.den * &g.den;
    let mut out = vec![IBig::ZERO; pow(d, n) * d];
    for k in 1..=n {
        let m = n + 1 - k;
        if m >= g.comps.len() || is_zero(&f.comps[k]) || is_zero(&g.comps[m]) {
            continue;
        }
        for j in 0..k {
            let part = contract_slot(&f.comps[k], pow(d, j), d, pow(d, k - 1 - j) * d, &g.comps[m], pow(d, m));
            for (o, v) in out.iter_mut().zip(part) {
                *o += v;
            }
        }
    }
    (out, den)
}

pub(crate) fn tuple_to_index(d: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &i| acc * d + i)
}

pub(crate) fn index_to_tuple(d: usize, n: usize, mut idx: usize) -> Vec<usize> {
    let mut t = vec![0; n];
    for slot in (0..n).rev() {
        t[slot] = idx % d;
        idx /= d;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_counts() {
        for n in 1..8 {
            assert_eq!(compositions(n).len(), 1 << (n - 1));
            assert!(compositions(n).iter().all(|p| p.iter().sum::<usize>() == n));
        }
        assert_eq!(compositions(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn tuple_index_round_trip() {
        for idx in 0..64 {
            let t = index_to_tuple(4, 3, idx);
            assert_eq!(tuple_to_index(4, &t), idx);
        }
        assert_eq!(index_to_tuple(4, 3, 1), vec![0, 0, 1]);
    }
}
