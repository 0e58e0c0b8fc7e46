//! Truncated formal multilinear function series.
//!
//! A [`MultSeries`] of degree `N` over `B` is the sequence `f_0, ..., f_N`
//! with `f_n : B^{⊗n} → B`, stored densely by its values on basis tuples.
//! Two products are defined: the multiplication
//!
//! ```text
//! (f·g)_n(x_1..x_n) = Σ_{k=0..n} f_k(x_1..x_k) g_{n-k}(x_{k+1}..x_n)
//! ```
//!
//! and, when `g_0 = 0`, the composition
//!
//! ```text
//! (f∘g)_n(x_1..x_n) = Σ_{k_1+..+k_l = n} f_l(g_{k_1}(x_1..), .., g_{k_l}(..x_n))
//! ```
//!
//! Output component `n` of every operation only reads input components of
//! index at most `n`, so truncation commutes with all of them.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use dashu_int::IBig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraKind, BaseAlgebra, LinearMapOnB};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::tensor::{self, pow, Scaled};

#[derive(Clone)]
pub struct MultSeries {
    algebra: Arc<BaseAlgebra>,
    degree: usize,
    comps: Vec<Vec<Rational>>,
}

/// The groups and sets of series singled out by their low-order terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SeriesClass {
    /// invertible constant term
    Ginv,
    /// zero constant term, invertible linear term
    Gdif,
    /// `I · Ginv`
    GIl,
    /// `Ginv · I`
    GIr,
    /// zero constant term
    #[serde(rename = "gInv")]
    GInvLie,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constant {
    One,
    I,
    Zeta,
    OnePlusI,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// The first place where two series disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Difference {
    pub component: usize,
    pub index: Vec<usize>,
    pub lhs: AlgebraElement,
    pub rhs: AlgebraElement,
}

impl MultSeries {
    pub fn zero(algebra: &Arc<BaseAlgebra>, degree: usize) -> Self {
        let d = algebra.dim();
        MultSeries {
            algebra: Arc::clone(algebra),
            degree,
            comps: (0..=degree).map(|n| vec![Rational::zero(); pow(d, n) * d]).collect(),
        }
    }

    /// Builds a series from raw flattened components (see [`crate::tensor`]).
    pub fn from_components(algebra: &Arc<BaseAlgebra>, comps: Vec<Vec<Rational>>) -> Result<Self> {
        let d = algebra.dim();
        if comps.is_empty() {
            return Err(Error::Parse("series needs at least a constant term".into()));
        }
        for (n, c) in comps.iter().enumerate() {
            if c.len() != pow(d, n) * d {
                return Err(Error::Parse(format!(
                    "component {n} has {} entries, expected {}",
                    c.len(),
                    pow(d, n) * d
                )));
            }
        }
        Ok(MultSeries {
            algebra: Arc::clone(algebra),
            degree: comps.len() - 1,
            comps,
        })
    }

    /// Builds a series by evaluating `value(n, tuple)` on every basis tuple.
    pub fn from_fn(
        algebra: &Arc<BaseAlgebra>,
        degree: usize,
        mut value: impl FnMut(usize, &[usize]) -> AlgebraElement,
    ) -> Self {
        let mut s = Self::zero(algebra, degree);
        let d = algebra.dim();
        for n in 0..=degree {
            for idx in 0..pow(d, n) {
                let t = tensor::index_to_tuple(d, n, idx);
                let v = value(n, &t);
                assert_eq!(v.dim(), d, "value has wrong dimension");
                s.comps[n][idx * d..(idx + 1) * d].clone_from_slice(v.coords());
            }
        }
        s
    }

    /// A scalar-algebra series `Σ c_n z^n` (for other algebras, `Σ c_n I^n`).
    pub fn from_scalar_coeffs(algebra: &Arc<BaseAlgebra>, coeffs: &[Rational]) -> Self {
        let degree = coeffs.len().saturating_sub(1);
        let mut s = Self::zero(algebra, degree);
        let mut power = Self::constant(Constant::One, algebra, degree);
        let i = Self::constant(Constant::I, algebra, degree);
        for c in coeffs {
            s = &s + &power.scale(c);
            power = &power * &i;
        }
        s
    }

    pub fn constant(kind: Constant, algebra: &Arc<BaseAlgebra>, degree: usize) -> Self {
        let d = algebra.dim();
        let mut s = Self::zero(algebra, degree);
        let one = algebra.one();
        match kind {
            Constant::One => s.comps[0].clone_from_slice(one.coords()),
            Constant::I => {
                if degree >= 1 {
                    for c in 0..d {
                        s.comps[1][c * d + c] = Rational::one();
                    }
                }
            }
            Constant::OnePlusI => {
                s = &Self::constant(Constant::One, algebra, degree) + &Self::constant(Constant::I, algebra, degree);
            }
            Constant::Zeta => {
                // ζ = Σ I^n; (I^n)(x_1..x_n) = x_1 ⋯ x_n
                for n in 0..=degree {
                    for idx in 0..pow(d, n) {
                        let t = tensor::index_to_tuple(d, n, idx);
                        let mut v = one.clone();
                        for &i in &t {
                            v = algebra
                                .mul(&v, &AlgebraElement::unit_vector(d, i))
                                .expect("same algebra");
                        }
                        s.comps[n][idx * d..(idx + 1) * d].clone_from_slice(v.coords());
                    }
                }
            }
        }
        s
    }

    pub fn one(algebra: &Arc<BaseAlgebra>, degree: usize) -> Self {
        Self::constant(Constant::One, algebra, degree)
    }

    pub fn identity(algebra: &Arc<BaseAlgebra>, degree: usize) -> Self {
        Self::constant(Constant::I, algebra, degree)
    }

    pub fn algebra(&self) -> &Arc<BaseAlgebra> {
        &self.algebra
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn component(&self, n: usize) -> &[Rational] {
        &self.comps[n]
    }

    pub fn value(&self, n: usize, tuple: &[usize]) -> AlgebraElement {
        assert_eq!(tuple.len(), n);
        let d = self.dim();
        let idx = tensor::tuple_to_index(d, tuple);
        AlgebraElement::new(self.comps[n][idx * d..(idx + 1) * d].to_vec())
    }

    pub fn set_value(&mut self, n: usize, tuple: &[usize], v: &AlgebraElement) {
        let d = self.dim();
        let idx = tensor::tuple_to_index(d, tuple);
        self.comps[n][idx * d..(idx + 1) * d].clone_from_slice(v.coords());
    }

    pub fn constant_term(&self) -> AlgebraElement {
        AlgebraElement::new(self.comps[0].clone())
    }

    /// `f_1` as a linear map of `B`; the zero map for degree-0 series.
    pub fn linear_part(&self) -> LinearMapOnB {
        let d = self.dim();
        let rows = (0..d)
            .map(|r| {
                (0..d)
                    .map(|c| {
                        if self.degree >= 1 {
                            self.comps[1][c * d + r].clone()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        LinearMapOnB::from_rows(rows).expect("square")
    }

    /// Coefficients `f_n(1, .., 1)`, i.e. the ordinary power series for scalar `B`.
    pub fn scalar_coeffs(&self) -> Vec<Rational> {
        let one = self.algebra.one();
        (0..=self.degree)
            .map(|n| {
                let args: Vec<&[Rational]> = (0..n).map(|_| one.coords()).collect();
                let v = tensor::evaluate(&self.comps[n], self.dim(), &args);
                // coordinate of the unit direction; exact for the scalar algebra
                v[0].clone()
            })
            .collect()
    }

    /// Evaluates `f_n` on arbitrary elements of `B`.
    pub fn eval(&self, args: &[AlgebraElement]) -> Result<AlgebraElement> {
        let n = args.len();
        if n > self.degree {
            return Err(Error::DegreeMismatch {
                left: n,
                right: self.degree,
            });
        }
        for a in args {
            if a.dim() != self.dim() {
                return Err(Error::AlgebraMismatch {
                    expected: self.dim(),
                    found: a.dim(),
                });
            }
        }
        let refs: Vec<&[Rational]> = args.iter().map(|a| a.coords()).collect();
        Ok(AlgebraElement::new(tensor::evaluate(&self.comps[n], self.dim(), &refs)))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| tensor::is_zero(c))
    }

    /// The part of degree exactly `n`.
    pub fn homogeneous_part(&self, n: usize) -> Self {
        let mut s = Self::zero(&self.algebra, self.degree);
        s.comps[n] = self.comps[n].clone();
        s
    }

    /// Truncates or zero-extends to a new degree.
    pub fn with_degree(&self, degree: usize) -> Self {
        let mut s = Self::zero(&self.algebra, degree);
        for n in 0..=degree.min(self.degree) {
            s.comps[n] = self.comps[n].clone();
        }
        s
    }

    pub fn scale(&self, c: &Rational) -> Self {
        MultSeries {
            algebra: Arc::clone(&self.algebra),
            degree: self.degree,
            comps: self.comps.iter().map(|v| v.iter().map(|x| x * c).collect()).collect(),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.algebra.kind() != other.algebra.kind() {
            return Err(Error::AlgebraMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        self.check_compatible(other)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| op(x, y)).collect())
            .collect();
        Ok(MultSeries {
            algebra: Arc::clone(&self.algebra),
            degree: self.degree,
            comps,
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let (f, g) = (Scaled::new(&self.comps), Scaled::new(&other.comps));
        let comps = (0..=self.degree)
            .map(|n| {
                let (nums, den) = tensor::mul_component(&f, &g, &self.algebra, n);
                tensor::unscale(nums, &den)
            })
            .collect();
        Ok(MultSeries {
            algebra: Arc::clone(&self.algebra),
            degree: self.degree,
            comps,
        })
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if !tensor::is_zero(&other.comps[0]) {
            return Err(Error::NonzeroConstantTerm("inner series of a composition".into()));
        }
        let d = self.dim();
        let (f, g) = (Scaled::new(&self.comps), Scaled::new(&other.comps));
        let comps = (0..=self.degree)
            .map(|n| {
                let (nums, den) = tensor::compose_component(&f, &g, d, n);
                tensor::unscale(nums, &den)
            })
            .collect();
        Ok(MultSeries {
            algebra: Arc::clone(&self.algebra),
            degree: self.degree,
            comps,
        })
    }

    /// The linearised composition: component `n` sums `f_k` with `g_m`
    /// substituted into one slot and `I` into the others, over `k + m = n + 1`.
    pub fn insertion(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if !tensor::is_zero(&other.comps[0]) {
            return Err(Error::NonzeroConstantTerm("inserted series".into()));
        }
        let d = self.dim();
        let (f, g) = (Scaled::new(&self.comps), Scaled::new(&other.comps));
        let comps = (0..=self.degree)
            .map(|n| {
                let (nums, den) = tensor::insertion_component(&f, &g, d, n);
                tensor::unscale(nums, &den)
            })
            .collect();
        Ok(MultSeries {
            algebra: Arc::clone(&self.algebra),
            degree: self.degree,
            comps,
        })
    }

    /// Multiplicative inverse, built degree by degree from `h_0 = f_0^{-1}`
    /// and `h_n = -f_0^{-1} Σ_{k≥1} f_k ⊗ h_{n-k}`.
    pub fn mul_inverse(&self) -> Result<Self> {
        let alg = &self.algebra;
        let d = self.dim();
        let f0_inv = alg
            .inv(&self.constant_term())
            .map_err(|_| Error::NotInvertible("constant term not invertible".into()))?;
        let inv = Scaled::new(std::slice::from_ref(&f0_inv.coords().to_vec()));
        let f = Scaled::new(&self.comps);
        let mut h = Self::zero(alg, self.degree);
        h.comps[0] = f0_inv.coords().to_vec();
        for n in 1..=self.degree {
            // h_n is still zero, so this is exactly the lower-order residual
            let (residual, rden) = tensor::mul_component(&f, &Scaled::new(&h.comps), alg, n);
            let mut hn = vec![IBig::ZERO; residual.len()];
            for (dst, src) in hn.chunks_mut(d).zip(residual.chunks(d)) {
                alg.mul_acc_int(dst, &inv.comps[0], src);
            }
            let den = -(rden * &inv.den * alg.table_den());
            h.comps[n] = tensor::unscale(hn, &den);
        }
        Ok(h)
    }

    /// Compositional inverse of a series in `Gdif`: `h_1 = f_1^{-1}` and
    /// `h_n = -f_1^{-1}(residual_n)` where the residual is `(f∘h)_n` with `h_n = 0`.
    pub fn comp_inverse(&self) -> Result<Self> {
        if !tensor::is_zero(&self.comps[0]) {
            return Err(Error::NonzeroConstantTerm("compositional inverse needs f_0 = 0".into()));
        }
        let d = self.dim();
        let mut h = Self::zero(&self.algebra, self.degree);
        if self.degree == 0 {
            return Ok(h);
        }
        let f1_inv = self
            .linear_part()
            .inverse()
            .map_err(|_| Error::NotInvertible("linear term not invertible".into()))?;
        let mut h1 = vec![Rational::zero(); d * d];
        for u in 0..d {
            for r in 0..d {
                h1[u * d + r] = f1_inv.entry(r, u).clone();
            }
        }
        // rows of f_1^{-1} over a common denominator
        let inv = Scaled::new(f1_inv.rows());
        h.comps[1] = h1;
        let f = Scaled::new(&self.comps);
        for n in 2..=self.degree {
            let (residual, rden) = tensor::compose_component(&f, &Scaled::new(&h.comps), d, n);
            let mut hn = Vec::with_capacity(residual.len());
            for chunk in residual.chunks(d) {
                for row in &inv.comps {
                    let mut acc = IBig::ZERO;
                    for (a, b) in row.iter().zip(chunk) {
                        tensor::Coeff::add_mul(&mut acc, a, b);
                    }
                    hn.push(acc);
                }
            }
            let den = -(rden * &inv.den);
            h.comps[n] = tensor::unscale(hn, &den);
        }
        Ok(h)
    }

    /// `I·f` (left) or `f·I` (right).
    pub fn shift(&self, side: Side) -> Self {
        let i = Self::identity(&self.algebra, self.degree);
        match side {
            Side::Left => i.mul(self),
            Side::Right => self.mul(&i),
        }
        .expect("compatible by construction")
    }

    /// Fixes the first (left) or last (right) argument to `1_B`, giving the
    /// series `g_n(x_1..x_n) = f_{n+1}(1, x_1..x_n)` of degree `N - 1`.
    pub fn fix_unit_argument(&self, side: Side) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::DegreeMismatch { left: 0, right: 1 });
        }
        let d = self.dim();
        let one = self.algebra.one();
        let comps = (1..=self.degree)
            .map(|n| {
                let slot = match side {
                    Side::Left => 0,
                    Side::Right => n - 1,
                };
                tensor::fix_slot(&self.comps[n], d, n, slot, one.coords())
            })
            .collect();
        Self::from_components(&self.algebra, comps)
    }

    /// Integer power with respect to multiplication; negative powers need an
    /// invertible constant term.
    pub fn pow(&self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.mul_inverse()? } else { self.clone() };
        let mut acc = Self::one(&self.algebra, self.degree);
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    pub fn classify(&self) -> BTreeSet<SeriesClass> {
        let mut out = BTreeSet::new();
        let f0_zero = tensor::is_zero(&self.comps[0]);
        if self.algebra.is_invertible(&self.constant_term()) {
            out.insert(SeriesClass::Ginv);
        }
        if f0_zero {
            out.insert(SeriesClass::GInvLie);
            if self.degree >= 1 && self.linear_part().inverse().is_ok() {
                out.insert(SeriesClass::Gdif);
                if self.shift_invariant(Side::Left) {
                    out.insert(SeriesClass::GIl);
                }
                if self.shift_invariant(Side::Right) {
                    out.insert(SeriesClass::GIr);
                }
            }
        }
        out
    }

    /// Checks `f_n(x_1, ..) = x_1 f_n(1, ..)` (left) or
    /// `f_n(.., x_n) = f_n(.., 1) x_n` (right) on all basis tuples.
    fn shift_invariant(&self, side: Side) -> bool {
        let d = self.dim();
        let alg = &self.algebra;
        let one = alg.one();
        for n in 1..=self.degree {
            let slot = match side {
                Side::Left => 0,
                Side::Right => n - 1,
            };
            let fixed = tensor::fix_slot(&self.comps[n], d, n, slot, one.coords());
            for idx in 0..pow(d, n) {
                let t = tensor::index_to_tuple(d, n, idx);
                let rest: Vec<usize> = match side {
                    Side::Left => t[1..].to_vec(),
                    Side::Right => t[..n - 1].to_vec(),
                };
                let ridx = tensor::tuple_to_index(d, &rest);
                let base = &fixed[ridx * d..(ridx + 1) * d];
                let x = AlgebraElement::unit_vector(d, t[slot]);
                let mut expected = vec![Rational::zero(); d];
                match side {
                    Side::Left => alg.mul_acc(&mut expected, x.coords(), base),
                    Side::Right => alg.mul_acc(&mut expected, base, x.coords()),
                }
                if expected[..] != self.comps[n][idx * d..(idx + 1) * d] {
                    return false;
                }
            }
        }
        true
    }

    /// A deterministic random member of `class`, with coefficients `p/q`,
    /// `|p| <= bound`, `1 <= q <= bound`.
    pub fn random(class: SeriesClass, algebra: &Arc<BaseAlgebra>, degree: usize, seed: u64, bound: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(&mut rng, class, algebra, degree, bound.max(1) as i64)
    }

    fn random_with(
        rng: &mut ChaCha8Rng,
        class: SeriesClass,
        algebra: &Arc<BaseAlgebra>,
        degree: usize,
        bound: i64,
    ) -> Self {
        let d = algebra.dim();
        let coeff = |rng: &mut ChaCha8Rng| Rational::new(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound));
        let mut s = Self::zero(algebra, degree);
        for comp in s.comps.iter_mut() {
            for x in comp.iter_mut() {
                *x = coeff(rng);
            }
        }
        match class {
            SeriesClass::Ginv => {
                while !algebra.is_invertible(&s.constant_term()) {
                    for x in s.comps[0].iter_mut() {
                        *x = coeff(rng);
                    }
                }
                s
            }
            SeriesClass::GInvLie => {
                s.comps[0] = vec![Rational::zero(); d];
                s
            }
            SeriesClass::Gdif => {
                s.comps[0] = vec![Rational::zero(); d];
                if degree == 0 {
                    return s;
                }
                while s.linear_part().inverse().is_err() {
                    for x in s.comps[1].iter_mut() {
                        *x = coeff(rng);
                    }
                }
                s
            }
            SeriesClass::GIl => Self::random_with(rng, SeriesClass::Ginv, algebra, degree, bound).shift(Side::Left),
            SeriesClass::GIr => Self::random_with(rng, SeriesClass::Ginv, algebra, degree, bound).shift(Side::Right),
        }
    }

    /// First disagreement up to the smaller of the two degrees.
    pub fn first_difference(&self, other: &Self) -> Option<Difference> {
        let d = self.dim();
        if d != other.dim() {
            return Some(Difference {
                component: 0,
                index: vec![],
                lhs: self.constant_term(),
                rhs: other.constant_term(),
            });
        }
        let top = self.degree.min(other.degree);
        for n in 0..=top {
            if self.comps[n] == other.comps[n] {
                continue;
            }
            for idx in 0..pow(d, n) {
                let (a, b) = (
                    &self.comps[n][idx * d..(idx + 1) * d],
                    &other.comps[n][idx * d..(idx + 1) * d],
                );
                if a != b {
                    return Some(Difference {
                        component: n,
                        index: tensor::index_to_tuple(d, n, idx),
                        lhs: AlgebraElement::new(a.to_vec()),
                        rhs: AlgebraElement::new(b.to_vec()),
                    });
                }
            }
        }
        None
    }

    /// Largest numerator/denominator bit length among all coefficients.
    pub fn height_bits(&self) -> u64 {
        self.comps
            .iter()
            .flatten()
            .map(Rational::height_bits)
            .max()
            .unwrap_or(0)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.algebra.kind()
    }
}

impl PartialEq for MultSeries {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.kind() == other.algebra.kind() && self.degree == other.degree && self.comps == other.comps
    }
}

impl Eq for MultSeries {}

impl fmt::Debug for MultSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultSeries({}, N={}) {{", self.algebra.kind(), self.degree)?;
        let d = self.dim();
        for (n, c) in self.comps.iter().enumerate() {
            for idx in 0..pow(d, n) {
                let v = &c[idx * d..(idx + 1) * d];
                if !tensor::is_zero(v) {
                    write!(f, " {:?}: {:?}", tensor::index_to_tuple(d, n, idx), v)?;
                }
            }
        }
        write!(f, " }}")
    }
}

// The operator forms panic on algebra/degree mismatch; use the `try_*` and
// `mul` methods where that is a recoverable condition.
impl Add for &MultSeries {
    type Output = MultSeries;
    fn add(self, rhs: &MultSeries) -> MultSeries {
        self.try_add(rhs).expect("series mismatch in +")
    }
}

impl Sub for &MultSeries {
    type Output = MultSeries;
    fn sub(self, rhs: &MultSeries) -> MultSeries {
        self.try_sub(rhs).expect("series mismatch in -")
    }
}

impl Mul for &MultSeries {
    type Output = MultSeries;
    fn mul(self, rhs: &MultSeries) -> MultSeries {
        MultSeries::mul(self, rhs).expect("series mismatch in *")
    }
}

impl Neg for &MultSeries {
    type Output = MultSeries;
    fn neg(self) -> MultSeries {
        self.scale(&Rational::from_int(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar() -> Arc<BaseAlgebra> {
        Arc::new(BaseAlgebra::scalar())
    }

    fn mat2() -> Arc<BaseAlgebra> {
        Arc::new(BaseAlgebra::matrix(2).unwrap())
    }

    fn poly(alg: &Arc<BaseAlgebra>, c: &[i64]) -> MultSeries {
        let coeffs: Vec<Rational> = c.iter().map(|&x| Rational::from_int(x)).collect();
        MultSeries::from_scalar_coeffs(alg, &coeffs)
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_int(x)).collect()
    }

    #[test]
    fn unit_laws() {
        let alg = mat2();
        let f = MultSeries::random(SeriesClass::Ginv, &alg, 3, 7, 10);
        let one = MultSeries::one(&alg, 3);
        assert_eq!(&f * &one, f);
        assert_eq!(&one * &f, f);
        let i = MultSeries::identity(&alg, 3);
        let g = MultSeries::random(SeriesClass::Gdif, &alg, 3, 8, 10);
        assert_eq!(f.compose(&i).unwrap(), f);
        assert_eq!(i.compose(&g).unwrap(), g);
    }

    #[test]
    fn scalar_polynomial_product() {
        let alg = scalar();
        let p = &poly(&alg, &[1, 1, 0]) * &poly(&alg, &[1, -1, 0]);
        assert_eq!(p.scalar_coeffs(), ints(&[1, 0, -1]));
    }

    #[test]
    fn constant_terms_do_not_commute_in_mat2() {
        let alg = mat2();
        let mut f = MultSeries::zero(&alg, 2);
        let mut g = MultSeries::zero(&alg, 2);
        f.comps[0] = ints(&[0, 1, 0, 0]);
        g.comps[0] = ints(&[0, 0, 1, 0]);
        assert_eq!((&f * &g).constant_term().coords(), &ints(&[1, 0, 0, 0])[..]);
        assert_eq!((&g * &f).constant_term().coords(), &ints(&[0, 0, 0, 1])[..]);
    }

    #[test]
    fn geometric_series_composed_with_z_plus_z2() {
        let alg = scalar();
        let geom = poly(&alg, &[1, 1, 1, 1, 1]);
        let inner = poly(&alg, &[0, 1, 1, 0, 0]);
        assert_eq!(geom.compose(&inner).unwrap().scalar_coeffs(), ints(&[1, 1, 2, 3, 5]));
    }

    #[test]
    fn compose_rejects_nonzero_constant_term() {
        let alg = scalar();
        let f = poly(&alg, &[1, 1]);
        assert!(matches!(f.compose(&f), Err(Error::NonzeroConstantTerm(_))));
    }

    #[test]
    fn multiplicative_inverses() {
        let alg = scalar();
        let one = MultSeries::one(&alg, 4);
        assert_eq!(one.mul_inverse().unwrap(), one);
        let f = poly(&alg, &[1, 1, 0, 0, 0]);
        assert_eq!(f.mul_inverse().unwrap().scalar_coeffs(), ints(&[1, -1, 1, -1, 1]));
        let m = mat2();
        let zeta = MultSeries::constant(Constant::Zeta, &m, 4);
        let expected = &MultSeries::one(&m, 4) - &MultSeries::identity(&m, 4);
        assert_eq!(zeta.mul_inverse().unwrap(), expected);
        assert!(matches!(
            MultSeries::zero(&m, 2).mul_inverse(),
            Err(Error::NotInvertible(_))
        ));
    }

    #[test]
    fn compositional_inverses() {
        let alg = scalar();
        let i = MultSeries::identity(&alg, 4);
        assert_eq!(i.comp_inverse().unwrap(), i);
        let f = poly(&alg, &[0, 1, 1, 0, 0]);
        assert_eq!(f.comp_inverse().unwrap().scalar_coeffs(), ints(&[0, 1, -1, 2, -5]));
        let m = mat2();
        let g = MultSeries::random(SeriesClass::Gdif, &m, 4, 3, 10);
        let gi = g.comp_inverse().unwrap();
        assert_eq!(g.compose(&gi).unwrap(), MultSeries::identity(&m, 4));
        assert_eq!(gi.compose(&g).unwrap(), MultSeries::identity(&m, 4));
        let singular = poly(&alg, &[0, 0, 1]);
        assert!(matches!(singular.comp_inverse(), Err(Error::NotInvertible(_))));
        assert!(matches!(
            poly(&alg, &[1, 1]).comp_inverse(),
            Err(Error::NonzeroConstantTerm(_))
        ));
    }

    #[test]
    fn shifts() {
        let alg = scalar();
        assert_eq!(
            MultSeries::one(&alg, 3).shift(Side::Left),
            MultSeries::identity(&alg, 3)
        );
        assert_eq!(
            poly(&alg, &[1, 1, 0, 0]).shift(Side::Left).scalar_coeffs(),
            ints(&[0, 1, 1, 0])
        );
        // (I·f)_n(x_1..x_n) = x_1 f_{n-1}(x_2..x_n)
        let m = mat2();
        let f = MultSeries::random(SeriesClass::Ginv, &m, 3, 11, 10);
        let left = f.shift(Side::Left);
        for n in 1..=3 {
            for idx in 0..pow(4, n) {
                let t = tensor::index_to_tuple(4, n, idx);
                let x1 = AlgebraElement::unit_vector(4, t[0]);
                let expected = m.mul(&x1, &f.value(n - 1, &t[1..])).unwrap();
                assert_eq!(left.value(n, &t), expected);
            }
        }
    }

    #[test]
    fn constants() {
        let alg = scalar();
        assert_eq!(
            MultSeries::constant(Constant::Zeta, &alg, 3).scalar_coeffs(),
            ints(&[1, 1, 1, 1])
        );
        let m = mat2();
        let one = MultSeries::one(&m, 2);
        assert_eq!(one.constant_term(), m.one());
        assert!(one.component(1).iter().all(Rational::is_zero));
        let opi = MultSeries::constant(Constant::OnePlusI, &m, 2);
        assert_eq!(opi, &one + &MultSeries::identity(&m, 2));
    }

    #[test]
    fn classification() {
        let m = mat2();
        let one = MultSeries::one(&m, 3);
        assert_eq!(one.classify(), BTreeSet::from([SeriesClass::Ginv]));
        let i = MultSeries::identity(&m, 3);
        assert_eq!(
            i.classify(),
            BTreeSet::from([
                SeriesClass::Gdif,
                SeriesClass::GIl,
                SeriesClass::GIr,
                SeriesClass::GInvLie
            ])
        );
        let f = MultSeries::random(SeriesClass::Ginv, &m, 3, 5, 10);
        assert!(f.shift(Side::Left).classify().contains(&SeriesClass::GIl));
        assert!(f.shift(Side::Right).classify().contains(&SeriesClass::GIr));
        let g = MultSeries::random(SeriesClass::Gdif, &m, 3, 5, 10);
        assert!(!g.classify().contains(&SeriesClass::GIl));
    }

    #[test]
    fn random_is_deterministic_and_in_class() {
        let m = mat2();
        let a = MultSeries::random(SeriesClass::Ginv, &m, 3, 42, 10);
        assert_eq!(a, MultSeries::random(SeriesClass::Ginv, &m, 3, 42, 10));
        assert_ne!(a, MultSeries::random(SeriesClass::Ginv, &m, 3, 43, 10));
        for seed in 0..100 {
            assert!(MultSeries::random(SeriesClass::Ginv, &m, 2, seed, 10)
                .classify()
                .contains(&SeriesClass::Ginv));
        }
        let l = MultSeries::random(SeriesClass::GInvLie, &m, 2, 1, 10);
        assert!(l.constant_term().is_zero());
        for class in [SeriesClass::Gdif, SeriesClass::GIl, SeriesClass::GIr] {
            assert!(MultSeries::random(class, &m, 3, 9, 10).classify().contains(&class));
        }
    }

    #[test]
    fn coefficients_respect_bound() {
        let m = mat2();
        let s = MultSeries::random(SeriesClass::Ginv, &m, 2, 1, 3);
        for c in s.comps.iter().flatten() {
            assert!(dashu_int::ops::UnsignedAbs::unsigned_abs(c.numer()) <= 3u8.into());
            assert!(*c.denom() <= 3u8.into());
        }
    }

    #[test]
    fn left_distributivity_fails() {
        let m = mat2();
        let f = MultSeries::random(SeriesClass::Ginv, &m, 3, 1, 10);
        let g = MultSeries::random(SeriesClass::Ginv, &m, 3, 2, 10);
        let h = MultSeries::random(SeriesClass::Ginv, &m, 3, 3, 10);
        let fi = MultSeries::random(SeriesClass::Gdif, &m, 3, 4, 10);
        let gi = MultSeries::random(SeriesClass::Gdif, &m, 3, 5, 10);
        // right distributivity holds
        assert_eq!(
            (&f * &g).compose(&fi).unwrap(),
            &f.compose(&fi).unwrap() * &g.compose(&fi).unwrap()
        );
        // h∘(a·b) ≠ (h∘a)·(h∘b) for a, b with zero constant term
        let lhs = h.compose(&(&fi * &gi)).unwrap();
        let rhs = &h.compose(&fi).unwrap() * &h.compose(&gi).unwrap();
        assert!(lhs.first_difference(&rhs).is_some());
    }

    #[test]
    fn first_difference_localizes() {
        let m = mat2();
        let f = MultSeries::random(SeriesClass::Ginv, &m, 2, 1, 10);
        let mut g = f.clone();
        g.comps[2][4 * 5 + 2] = &g.comps[2][4 * 5 + 2] + &Rational::one();
        let diff = f.first_difference(&g).unwrap();
        assert_eq!(diff.component, 2);
        assert_eq!(diff.index, vec![1, 1]);
        assert!(f.first_difference(&f).is_none());
    }

    #[test]
    fn eval_matches_stored_values() {
        let m = mat2();
        let f = MultSeries::random(SeriesClass::Ginv, &m, 2, 3, 10);
        let b = m.basis();
        assert_eq!(f.eval(&[b[1].clone(), b[3].clone()]).unwrap(), f.value(2, &[1, 3]));
        // multilinear in each slot
        let x = &b[0] + &b[2].scale(&Rational::from_int(3));
        let lhs = f.eval(&[x, b[1].clone()]).unwrap();
        let rhs = &f.value(2, &[0, 1]) + &f.value(2, &[2, 1]).scale(&Rational::from_int(3));
        assert_eq!(lhs, rhs);
    }
}
