//! Group laws, actions and inverse maps on the group of series with
//! invertible constant term.
//!
//! Every law and action is a literal transcription of its defining formula
//! in terms of multiplication, composition and the two inverses; none is
//! expressed through another (except the boxed convolution, which is
//! defined through `S_l` and `sqdot`).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::series::{MultSeries, Side};

macro_rules! tagged_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $tag:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn tag(self) -> &'static str {
                match self {
                    $($name::$variant => $tag),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.tag())
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($tag => Ok($name::$variant),)+
                    _ => Err(Error::Parse(format!("unknown {} {s:?}", stringify!($name)))),
                }
            }
        }
    };
}

tagged_enum!(
    /// Binary group laws.
    LawId {
        Dot => "dot",
        StarL => "star_l",
        StarR => "star_r",
        Sqdot => "sqdot",
        SqdotPrime => "sqdot_prime",
        Boxcon => "boxcon",
    }
);

tagged_enum!(
    /// Actions of the group on itself by multiplicative automorphisms.
    ActionId {
        RhdL => "rhd_l",
        RhdR => "rhd_r",
        Rhd => "rhd",
        RhdPrime => "rhd_prime",
        RhdLPrime => "rhd_l_prime",
        RhdRPrime => "rhd_r_prime",
    }
);

tagged_enum!(
    /// Maps sending `F` to its inverse for one of the group laws.
    InverseMapId {
        Sigma => "sigma",
        SL => "S_l",
        SR => "S_r",
        SSqdot => "S_sqdot",
        SSqdotPrime => "S_sqdot_prime",
        SBoxcon => "S_boxcon",
    }
);

impl LawId {
    /// The inverse map of this law.
    pub fn inverse_map(self) -> InverseMapId {
        match self {
            LawId::Dot => InverseMapId::Sigma,
            LawId::StarL => InverseMapId::SL,
            LawId::StarR => InverseMapId::SR,
            LawId::Sqdot => InverseMapId::SSqdot,
            LawId::SqdotPrime => InverseMapId::SSqdotPrime,
            LawId::Boxcon => InverseMapId::SBoxcon,
        }
    }
}

fn require_ginv(f: &MultSeries, what: &str) -> Result<()> {
    if f.algebra().is_invertible(&f.constant_term()) {
        Ok(())
    } else {
        Err(Error::NotInGinv(what.to_string()))
    }
}

fn identity_like(f: &MultSeries) -> MultSeries {
    MultSeries::identity(f.algebra(), f.degree())
}

/// `a · I · b`
pub fn sandwich(a: &MultSeries, b: &MultSeries) -> Result<MultSeries> {
    a.mul(&identity_like(a))?.mul(b)
}

pub fn group_law(law: LawId, f: &MultSeries, g: &MultSeries) -> Result<MultSeries> {
    require_ginv(f, "left operand")?;
    require_ginv(g, "right operand")?;
    match law {
        LawId::Dot => f.mul(g),
        LawId::StarL => g.mul(&f.compose(&g.shift(Side::Left))?),
        LawId::StarR => f.compose(&g.shift(Side::Right))?.mul(g),
        LawId::Sqdot => g.mul(&f.compose(&sandwich(&g.mul_inverse()?, g)?)?),
        LawId::SqdotPrime => f.compose(&sandwich(g, &g.mul_inverse()?)?)?.mul(g),
        LawId::Boxcon => {
            let sl = |x: &MultSeries| inverse_map(InverseMapId::SL, x);
            sl(&group_law(LawId::Sqdot, &sl(f)?, &sl(g)?)?)
        }
    }
}

/// The inner series `X` of `action(act, f, g) = g ∘ X`.
pub fn action_argument(act: ActionId, f: &MultSeries) -> Result<MultSeries> {
    require_ginv(f, "acting series")?;
    match act {
        ActionId::RhdL => Ok(f.shift(Side::Left)),
        ActionId::RhdR => Ok(f.shift(Side::Right)),
        ActionId::Rhd => sandwich(&f.mul_inverse()?, f),
        ActionId::RhdPrime => sandwich(f, &f.mul_inverse()?),
        ActionId::RhdLPrime => Ok(f.mul_inverse()?.shift(Side::Left)),
        ActionId::RhdRPrime => Ok(f.mul_inverse()?.shift(Side::Right)),
    }
}

pub fn action(act: ActionId, f: &MultSeries, g: &MultSeries) -> Result<MultSeries> {
    require_ginv(g, "acted-on series")?;
    g.compose(&action_argument(act, f)?)
}

pub fn inverse_map(map: InverseMapId, f: &MultSeries) -> Result<MultSeries> {
    require_ginv(f, "argument")?;
    let f_inv = f.mul_inverse()?;
    let inner = match map {
        InverseMapId::Sigma => return Ok(f_inv),
        InverseMapId::SL => f.shift(Side::Left),
        InverseMapId::SR => f.shift(Side::Right),
        InverseMapId::SSqdot => sandwich(&f_inv, f)?,
        InverseMapId::SSqdotPrime => sandwich(f, &f_inv)?,
        InverseMapId::SBoxcon => sandwich(f, f)?,
    };
    f_inv.compose(&inner.comp_inverse()?)
}

/// `F^{±1} ∘ (F^n I F^m)^{∘-1}`: the unprimed map uses `F`, the primed one `F^{-1}`.
pub fn psi(m: i32, n: i32, primed: bool, f: &MultSeries) -> Result<MultSeries> {
    require_ginv(f, "argument")?;
    let inner = sandwich(&f.pow(n)?, &f.pow(m)?)?.comp_inverse()?;
    let outer = if primed { f.mul_inverse()? } else { f.clone() };
    outer.compose(&inner)
}

/// The subordination pair `H1 = S_l(G ▷_r S_l(F))`, `H2 = S_r(F ▷_l S_r(G))`.
pub fn subordination(f: &MultSeries, g: &MultSeries) -> Result<(MultSeries, MultSeries)> {
    let h1 = inverse_map(
        InverseMapId::SL,
        &action(ActionId::RhdR, g, &inverse_map(InverseMapId::SL, f)?)?,
    )?;
    let h2 = inverse_map(
        InverseMapId::SR,
        &action(ActionId::RhdL, f, &inverse_map(InverseMapId::SR, g)?)?,
    )?;
    Ok((h1, h2))
}

/// `x ▷_l (S_l(x) ▷_r y)`, the action produced from the pair of post-groups
/// `(▷_l, ▷_r)`.
pub fn third_action(x: &MultSeries, y: &MultSeries) -> Result<MultSeries> {
    let inner = action(ActionId::RhdR, &inverse_map(InverseMapId::SL, x)?, y)?;
    action(ActionId::RhdL, x, &inner)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::BaseAlgebra;
    use crate::rational::Rational;
    use crate::series::{Constant, SeriesClass};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_int(x)).collect()
    }

    #[test]
    fn tags_round_trip() {
        for l in LawId::ALL {
            assert_eq!(l.tag().parse::<LawId>().unwrap(), *l);
        }
        for a in ActionId::ALL {
            assert_eq!(a.tag().parse::<ActionId>().unwrap(), *a);
        }
        for m in InverseMapId::ALL {
            assert_eq!(m.tag().parse::<InverseMapId>().unwrap(), *m);
        }
        assert!("nope".parse::<LawId>().is_err());
    }

    #[test]
    fn units() {
        let alg = Arc::new(BaseAlgebra::matrix(2).unwrap());
        let f = MultSeries::random(SeriesClass::Ginv, &alg, 3, 1, 10);
        let one = MultSeries::one(&alg, 3);
        for &law in LawId::ALL {
            assert_eq!(group_law(law, &f, &one).unwrap(), f, "{law}");
            assert_eq!(group_law(law, &one, &f).unwrap(), f, "{law}");
        }
        for &act in ActionId::ALL {
            assert_eq!(action(act, &one, &f).unwrap(), f, "{act}");
        }
    }

    #[test]
    fn boxcon_of_zeta_with_itself() {
        let alg = Arc::new(BaseAlgebra::scalar());
        let zeta = MultSeries::constant(Constant::Zeta, &alg, 3);
        let b = group_law(LawId::Boxcon, &zeta, &zeta).unwrap();
        assert_eq!(b.scalar_coeffs(), ints(&[1, 2, 5, 14]));
    }

    #[test]
    fn s_l_examples() {
        let alg = Arc::new(BaseAlgebra::scalar());
        let zeta = MultSeries::constant(Constant::Zeta, &alg, 4);
        assert_eq!(
            inverse_map(InverseMapId::SL, &zeta).unwrap().scalar_coeffs(),
            ints(&[1, -1, 1, -1, 1])
        );
        let f = MultSeries::from_scalar_coeffs(&alg, &ints(&[1, 1, 0, 0]));
        assert_eq!(
            inverse_map(InverseMapId::SL, &f).unwrap().scalar_coeffs(),
            ints(&[1, -1, 2, -5])
        );
    }

    #[test]
    fn psi_special_cases() {
        let alg = Arc::new(BaseAlgebra::matrix(2).unwrap());
        let f = MultSeries::random(SeriesClass::Ginv, &alg, 3, 4, 10);
        assert_eq!(psi(0, 0, false, &f).unwrap(), f);
        assert_eq!(psi(1, 0, true, &f).unwrap(), inverse_map(InverseMapId::SL, &f).unwrap());
        assert_eq!(psi(0, 1, true, &f).unwrap(), inverse_map(InverseMapId::SR, &f).unwrap());
    }

    #[test]
    fn rejects_non_invertible_constant_term() {
        let alg = Arc::new(BaseAlgebra::matrix(2).unwrap());
        let f = MultSeries::random(SeriesClass::GInvLie, &alg, 2, 4, 10);
        let one = MultSeries::one(&alg, 2);
        assert!(matches!(group_law(LawId::Dot, &f, &one), Err(Error::NotInGinv(_))));
        assert!(matches!(action(ActionId::Rhd, &f, &one), Err(Error::NotInGinv(_))));
        assert!(matches!(inverse_map(InverseMapId::SL, &f), Err(Error::NotInGinv(_))));
    }

    #[test]
    fn subordination_with_unit() {
        let alg = Arc::new(BaseAlgebra::matrix(2).unwrap());
        let f = MultSeries::random(SeriesClass::Ginv, &alg, 3, 4, 10);
        let one = MultSeries::one(&alg, 3);
        assert_eq!(subordination(&f, &one).unwrap(), (f.clone(), one.clone()));
        assert_eq!(third_action(&one, &f).unwrap(), f);
    }
}
