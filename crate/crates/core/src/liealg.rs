//! The Lie-algebra layer: series with vanishing constant term, the pre-Lie
//! bracket linearising composition, exponential and logarithm, post-Lie
//! products, Nijenhuis operators and crossed morphisms.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{invert_square, BaseAlgebra};
use crate::error::{Error, Result};
use crate::grouplaws::{action, group_law, inverse_map, ActionId, InverseMapId, LawId};
use crate::rational::Rational;
use crate::series::{MultSeries, SeriesClass, Side};

/// A series with zero constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieElement(MultSeries);

impl LieElement {
    pub fn new(series: MultSeries) -> Result<Self> {
        require_lie(&series, "Lie element")?;
        Ok(LieElement(series))
    }

    pub fn random(algebra: &Arc<BaseAlgebra>, degree: usize, seed: u64, bound: u32) -> Self {
        LieElement(MultSeries::random(SeriesClass::GInvLie, algebra, degree, seed, bound))
    }

    pub fn into_series(self) -> MultSeries {
        self.0
    }
}

impl Deref for LieElement {
    type Target = MultSeries;
    fn deref(&self) -> &MultSeries {
        &self.0
    }
}

fn require_lie(f: &MultSeries, what: &str) -> Result<()> {
    if f.constant_term().is_zero() {
        Ok(())
    } else {
        Err(Error::NonzeroConstantTerm(what.to_string()))
    }
}

/// `{f, g}`: the sum over all ways of substituting `g` into one argument of
/// `f` and `I` into the others.
pub fn pre_lie_bracket(f: &MultSeries, g: &MultSeries) -> Result<MultSeries> {
    require_lie(f, "left argument of the pre-Lie bracket")?;
    require_lie(g, "right argument of the pre-Lie bracket")?;
    f.insertion(g)
}

/// `[f, g] = f·g − g·f`
pub fn commutator(f: &MultSeries, g: &MultSeries) -> Result<MultSeries> {
    Ok(&f.mul(g)? - &g.mul(f)?)
}

fn factorial_recip(k: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 2..=k as i64 {
        acc = &acc * &Rational::new(1, i);
    }
    acc
}

/// `Σ_k f^k / k!`; finite because `f^k` vanishes below degree `k`.
pub fn exp_mul(f: &MultSeries) -> Result<MultSeries> {
    require_lie(f, "argument of exp")?;
    let mut acc = MultSeries::one(f.algebra(), f.degree());
    let mut power = acc.clone();
    for k in 1..=f.degree() {
        power = power.mul(f)?;
        acc = &acc + &power.scale(&factorial_recip(k));
    }
    Ok(acc)
}

/// `Σ_k (−1)^{k+1} (F − 1)^k / k`, for `F_0 = 1_B`.
pub fn log_mul(f: &MultSeries) -> Result<MultSeries> {
    let one = MultSeries::one(f.algebra(), f.degree());
    if f.constant_term() != f.algebra().one() {
        return Err(Error::Unsupported("logarithm needs constant term 1".into()));
    }
    let x = f - &one;
    let mut acc = MultSeries::zero(f.algebra(), f.degree());
    let mut power = one;
    for k in 1..=f.degree() {
        power = power.mul(&x)?;
        let sign = if k % 2 == 1 { 1 } else { -1 };
        acc = &acc + &power.scale(&Rational::new(sign, k as i64));
    }
    Ok(acc)
}

/// The `s^1 t^1` coefficient of a series-valued polynomial in `(s, t)`
/// whose degree in each variable is at most `degree`, by exact
/// interpolation at `s, t ∈ {1, .., degree + 1}`.
pub fn bilinear_coefficient<F>(degree: usize, expr: F) -> Result<MultSeries>
where
    F: Fn(&Rational, &Rational) -> Result<MultSeries> + Sync,
{
    let nodes: Vec<Rational> = (1..=degree as i64 + 1).map(Rational::from_int).collect();
    let vandermonde: Vec<Vec<Rational>> = nodes
        .iter()
        .map(|x| {
            let mut row = Vec::with_capacity(nodes.len());
            let mut p = Rational::one();
            for _ in 0..nodes.len() {
                row.push(p.clone());
                p = &p * x;
            }
            row
        })
        .collect();
    let inv = invert_square(&vandermonde).ok_or_else(|| Error::NotInvertible("interpolation system".into()))?;
    // linear coefficient of p from its values: Σ_i inv[1][i] p(x_i)
    let w = inv
        .get(1)
        .cloned()
        .unwrap_or_else(|| vec![Rational::zero(); nodes.len()]);
    let grid: Vec<(usize, usize)> = (0..nodes.len())
        .flat_map(|a| (0..nodes.len()).map(move |b| (a, b)))
        .collect();
    let values: Vec<MultSeries> = grid
        .par_iter()
        .map(|&(a, b)| expr(&nodes[a], &nodes[b]))
        .collect::<Result<_>>()?;
    let mut acc: Option<MultSeries> = None;
    for (&(a, b), v) in grid.iter().zip(&values) {
        let c = &w[a] * &w[b];
        if c.is_zero() {
            continue;
        }
        let term = v.scale(&c);
        acc = Some(match acc {
            None => term,
            Some(x) => &x + &term,
        });
    }
    acc.ok_or_else(|| Error::Unsupported("empty interpolation grid".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PostLieProduct {
    /// `f ▶_l g = {g, If}`
    Left,
    /// `f ▶_r g = −{g, fI}`
    Right,
    /// `f ▶ g = {g, [I, f]}`
    Both,
}

pub fn post_lie(product: PostLieProduct, f: &MultSeries, g: &MultSeries) -> Result<MultSeries> {
    require_lie(f, "left argument of a post-Lie product")?;
    match product {
        PostLieProduct::Left => pre_lie_bracket(g, &f.shift(Side::Left)),
        PostLieProduct::Right => Ok(-&pre_lie_bracket(g, &f.shift(Side::Right))?),
        PostLieProduct::Both => {
            let i = MultSeries::identity(f.algebra(), f.degree());
            pre_lie_bracket(g, &commutator(&i, f)?)
        }
    }
}

/// Left (`λ(f) = If`) or right (`ρ(f) = fI`) multiplication by `I`, and the
/// products `λ²` and `λρ`, which are Nijenhuis as well.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NijenhuisOp {
    Lambda,
    Rho,
    LambdaSquared,
    LambdaRho,
}

impl NijenhuisOp {
    pub const ALL: &'static [NijenhuisOp] = &[
        NijenhuisOp::Lambda,
        NijenhuisOp::Rho,
        NijenhuisOp::LambdaSquared,
        NijenhuisOp::LambdaRho,
    ];

    pub fn apply(self, f: &MultSeries) -> MultSeries {
        match self {
            NijenhuisOp::Lambda => f.shift(Side::Left),
            NijenhuisOp::Rho => f.shift(Side::Right),
            NijenhuisOp::LambdaSquared => f.shift(Side::Left).shift(Side::Left),
            NijenhuisOp::LambdaRho => f.shift(Side::Right).shift(Side::Left),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            NijenhuisOp::Lambda => "lambda",
            NijenhuisOp::Rho => "rho",
            NijenhuisOp::LambdaSquared => "lambda_squared",
            NijenhuisOp::LambdaRho => "lambda_rho",
        }
    }
}

impl FromStr for NijenhuisOp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        NijenhuisOp::ALL
            .iter()
            .copied()
            .find(|op| op.tag() == s)
            .ok_or_else(|| Error::Unsupported(format!("Nijenhuis operator {s:?}")))
    }
}

/// `N(f)•N(g) − N(N(f)•g + f•N(g) − N(f•g))` with `•` the pre-Lie bracket,
/// for an arbitrary linear map `N`.
pub fn nijenhuis_torsion(n: impl Fn(&MultSeries) -> MultSeries, f: &MultSeries, g: &MultSeries) -> Result<MultSeries> {
    let (nf, ng) = (n(f), n(g));
    let lhs = pre_lie_bracket(&nf, &ng)?;
    let inner = &(&pre_lie_bracket(&nf, g)? + &pre_lie_bracket(f, &ng)?) - &n(&pre_lie_bracket(f, g)?);
    Ok(&lhs - &n(&inner))
}

pub fn nijenhuis_defect(op: NijenhuisOp, f: &MultSeries, g: &MultSeries) -> Result<MultSeries> {
    nijenhuis_torsion(|x| op.apply(x), f, g)
}

/// Bilinear products on Lie elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProductHandle {
    /// `{x, y}`
    PreLie,
    /// `x ▷ y = {y, x}`, the left pre-Lie product opposite to the bracket
    LeftPreLie,
    /// `x · y`
    Mul,
    /// `[x, y] = x·y − y·x`
    Commutator,
    PostL,
    PostR,
    Post,
    /// `x ▷ N(y) − N(x ▷ y)` over the left pre-Lie product
    InducedDot(NijenhuisOp),
    /// `N(x) ▷ y` over the left pre-Lie product
    InducedTri(NijenhuisOp),
}

impl ProductHandle {
    pub fn apply(self, x: &MultSeries, y: &MultSeries) -> Result<MultSeries> {
        match self {
            ProductHandle::PreLie => pre_lie_bracket(x, y),
            ProductHandle::LeftPreLie => pre_lie_bracket(y, x),
            ProductHandle::Mul => x.mul(y),
            ProductHandle::Commutator => commutator(x, y),
            ProductHandle::PostL => post_lie(PostLieProduct::Left, x, y),
            ProductHandle::PostR => post_lie(PostLieProduct::Right, x, y),
            ProductHandle::Post => post_lie(PostLieProduct::Both, x, y),
            ProductHandle::InducedDot(n) => Ok(nijenhuis_induced_products(n, x, y)?.0),
            ProductHandle::InducedTri(n) => Ok(nijenhuis_induced_products(n, x, y)?.1),
        }
    }
}

/// `x•(y•z) − (x•y)•z`
pub fn associator(p: ProductHandle, x: &MultSeries, y: &MultSeries, z: &MultSeries) -> Result<MultSeries> {
    Ok(&p.apply(x, &p.apply(y, z)?)? - &p.apply(&p.apply(x, y)?, z)?)
}

/// `x•₁(y•₂z) − (x•₁y)•₂z − y•₂(x•₁z)`
pub fn derivator(
    p1: ProductHandle,
    p2: ProductHandle,
    x: &MultSeries,
    y: &MultSeries,
    z: &MultSeries,
) -> Result<MultSeries> {
    let a = p1.apply(x, &p2.apply(y, z)?)?;
    let b = p2.apply(&p1.apply(x, y)?, z)?;
    let c = p2.apply(y, &p1.apply(x, z)?)?;
    Ok(&(&a - &b) - &c)
}

/// The products `x·y = x ▷ N(y) − N(x ▷ y)` and `x ▶ y = N(x) ▷ y`
/// induced by `N` on the left pre-Lie algebra `x ▷ y = {y, x}`.
pub fn nijenhuis_induced_products(op: NijenhuisOp, x: &MultSeries, y: &MultSeries) -> Result<(MultSeries, MultSeries)> {
    let tri = |a: &MultSeries, b: &MultSeries| pre_lie_bracket(b, a);
    let dot = &tri(x, &op.apply(y))? - &op.apply(&tri(x, y)?);
    let star = tri(&op.apply(x), y)?;
    Ok((dot, star))
}

/// The crossed morphisms `φ : (H, ×) → (G, ·)` with an action `↪` of `H`
/// on `G`, all on the group of series with invertible constant term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CrossedInstance {
    /// `φ = Id`, `a × b = b ⋆_l a`, `a ↪ x = a ▷_l x`
    IdStarL,
    /// `φ = Id`, `a × b = b ⊡ a`, `a ↪ x = a ▷ x`
    IdSqdot,
    /// `φ = S_l`, `a × b = b ⊡con a`, `a ↪ x = S_l(a) ▷ x`
    SlBoxcon,
}

impl CrossedInstance {
    pub const ALL: &'static [CrossedInstance] = &[
        CrossedInstance::IdStarL,
        CrossedInstance::IdSqdot,
        CrossedInstance::SlBoxcon,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            CrossedInstance::IdStarL => "id_star_l",
            CrossedInstance::IdSqdot => "id_sqdot",
            CrossedInstance::SlBoxcon => "s_l_boxcon",
        }
    }

    fn phi(self, a: &MultSeries) -> Result<MultSeries> {
        match self {
            CrossedInstance::IdStarL | CrossedInstance::IdSqdot => Ok(a.clone()),
            CrossedInstance::SlBoxcon => inverse_map(InverseMapId::SL, a),
        }
    }

    /// `φ^{-1}`; `S_l` is an involution.
    fn phi_inverse(self, a: &MultSeries) -> Result<MultSeries> {
        self.phi(a)
    }

    fn times(self, a: &MultSeries, b: &MultSeries) -> Result<MultSeries> {
        match self {
            CrossedInstance::IdStarL => group_law(LawId::StarL, b, a),
            CrossedInstance::IdSqdot => group_law(LawId::Sqdot, b, a),
            CrossedInstance::SlBoxcon => group_law(LawId::Boxcon, b, a),
        }
    }

    fn act(self, a: &MultSeries, x: &MultSeries) -> Result<MultSeries> {
        match self {
            CrossedInstance::IdStarL => action(ActionId::RhdL, a, x),
            CrossedInstance::IdSqdot => action(ActionId::Rhd, a, x),
            CrossedInstance::SlBoxcon => action(ActionId::Rhd, &inverse_map(InverseMapId::SL, a)?, x),
        }
    }
}

impl fmt::Display for CrossedInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for CrossedInstance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CrossedInstance::ALL
            .iter()
            .copied()
            .find(|c| c.tag() == s)
            .ok_or_else(|| Error::Unsupported(format!("crossed morphism instance {s:?}")))
    }
}

/// `φ(a × b) − φ(a)·(a ↪ φ(b))`
pub fn crossed_morphism_defect(inst: CrossedInstance, a: &MultSeries, b: &MultSeries) -> Result<MultSeries> {
    let lhs = inst.phi(&inst.times(a, b)?)?;
    let rhs = inst.phi(a)?.mul(&inst.act(a, &inst.phi(b)?)?)?;
    Ok(&lhs - &rhs)
}

/// `φ^{-1}(x) × φ^{-1}(y) − φ^{-1}(x · (φ^{-1}(x) ↪ y))`
pub fn rota_baxter_defect(inst: CrossedInstance, x: &MultSeries, y: &MultSeries) -> Result<MultSeries> {
    let (px, py) = (inst.phi_inverse(x)?, inst.phi_inverse(y)?);
    let lhs = inst.times(&px, &py)?;
    let rhs = inst.phi_inverse(&x.mul(&inst.act(&px, y)?)?)?;
    Ok(&lhs - &rhs)
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

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_int(x)).collect()
    }

    fn monomial(alg: &Arc<BaseAlgebra>, degree: usize, k: usize) -> MultSeries {
        let mut c = vec![Rational::zero(); degree + 1];
        c[k] = Rational::one();
        MultSeries::from_scalar_coeffs(alg, &c)
    }

    #[test]
    fn bracket_examples() {
        let alg = scalar();
        let b = pre_lie_bracket(&monomial(&alg, 4, 2), &monomial(&alg, 4, 3)).unwrap();
        assert_eq!(b.scalar_coeffs(), ints(&[0, 0, 0, 0, 2]));
        let m = mat2();
        let f = LieElement::random(&m, 4, 1, 10);
        let i = MultSeries::identity(&m, 4);
        assert_eq!(pre_lie_bracket(&i, &f).unwrap(), *f);
        // {f, I} is the grading operator
        let graded = pre_lie_bracket(&f, &i).unwrap();
        for n in 0..=4 {
            let expected = f.homogeneous_part(n).scale(&Rational::from_int(n as i64));
            assert_eq!(graded.homogeneous_part(n), expected);
        }
        assert!(matches!(
            pre_lie_bracket(&MultSeries::one(&m, 2), &MultSeries::identity(&m, 2)),
            Err(Error::NonzeroConstantTerm(_))
        ));
    }

    #[test]
    fn exp_log() {
        let alg = scalar();
        let z = monomial(&alg, 3, 1);
        let e = exp_mul(&z).unwrap();
        assert_eq!(
            e.scalar_coeffs(),
            vec![
                Rational::one(),
                Rational::one(),
                Rational::new(1, 2),
                Rational::new(1, 6)
            ]
        );
        assert_eq!(log_mul(&e).unwrap(), z);
        let m = mat2();
        assert_eq!(exp_mul(&MultSeries::zero(&m, 3)).unwrap(), MultSeries::one(&m, 3));
        assert_eq!(log_mul(&MultSeries::one(&m, 3)).unwrap(), MultSeries::zero(&m, 3));
        let f = LieElement::random(&m, 3, 9, 10);
        assert_eq!(log_mul(&exp_mul(&f).unwrap()).unwrap(), *f);
    }

    #[test]
    fn post_lie_examples() {
        let alg = scalar();
        let z = monomial(&alg, 3, 1);
        assert_eq!(post_lie(PostLieProduct::Left, &z, &z).unwrap(), monomial(&alg, 3, 2));
        let f = LieElement::random(&alg, 3, 1, 10);
        let g = LieElement::random(&alg, 3, 2, 10);
        assert!(post_lie(PostLieProduct::Both, &f, &g).unwrap().is_zero());
    }

    #[test]
    fn bilinear_coefficient_of_constant_in_t_is_zero() {
        let m = mat2();
        let g = LieElement::random(&m, 3, 2, 10);
        let c = bilinear_coefficient(3, |s, _t| Ok(g.scale(s))).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn crossed_morphisms_at_unit() {
        let m = mat2();
        let one = MultSeries::one(&m, 3);
        for &inst in CrossedInstance::ALL {
            assert!(crossed_morphism_defect(inst, &one, &one).unwrap().is_zero());
            let y = MultSeries::random(SeriesClass::Ginv, &m, 3, 5, 10);
            assert!(rota_baxter_defect(inst, &one, &y).unwrap().is_zero(), "{inst}");
        }
        assert!("nope".parse::<CrossedInstance>().is_err());
    }
}
