//! Named operations, as used by `eval` and by golden fixtures.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::freeprob::{cumulants_to_moments, moments_to_cumulants, s_transform, Cumulants, Moments};
use crate::grouplaws::{action, group_law, inverse_map, subordination, third_action, ActionId, InverseMapId, LawId};
use crate::liealg::{commutator, exp_mul, log_mul, post_lie, pre_lie_bracket, PostLieProduct};
use crate::series::{MultSeries, Side};

/// Moment/cumulant conversions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Conversion {
    MomentsToCumulants,
    CumulantsToMoments,
    STransform,
}

impl Conversion {
    pub const ALL: &'static [Conversion] = &[
        Conversion::MomentsToCumulants,
        Conversion::CumulantsToMoments,
        Conversion::STransform,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Conversion::MomentsToCumulants => "moments-to-cumulants",
            Conversion::CumulantsToMoments => "cumulants-to-moments",
            Conversion::STransform => "s-transform",
        }
    }

    pub fn apply(self, x: &MultSeries) -> Result<MultSeries> {
        match self {
            Conversion::MomentsToCumulants => Ok(moments_to_cumulants(&Moments(x.clone()))?.0),
            Conversion::CumulantsToMoments => Ok(cumulants_to_moments(&Cumulants(x.clone()))?.0),
            Conversion::STransform => s_transform(&Cumulants(x.clone())),
        }
    }
}

impl FromStr for Conversion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Conversion::ALL
            .iter()
            .copied()
            .find(|c| c.tag() == s)
            .ok_or_else(|| Error::Parse(format!("unknown conversion {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Mul,
    Compose,
    MulInverse,
    CompInverse,
    Shift(Side),
    Law(LawId),
    Action(ActionId),
    InverseMap(InverseMapId),
    PreLie,
    Commutator,
    PostLie(PostLieProduct),
    Exp,
    Log,
    Convert(Conversion),
    H1,
    H2,
    ThirdAction,
}

impl Op {
    /// Every operation name accepted by [`Op::from_str`].
    pub fn names() -> Vec<String> {
        let mut v: Vec<String> = [
            "mul",
            "compose",
            "mul_inverse",
            "comp_inverse",
            "shift_left",
            "shift_right",
            "pre_lie",
            "commutator",
            "post_l",
            "post_r",
            "post",
            "exp",
            "log",
            "H1",
            "H2",
            "third_action",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        v.extend(LawId::ALL.iter().map(|x| x.tag().to_string()));
        v.extend(ActionId::ALL.iter().map(|x| x.tag().to_string()));
        v.extend(InverseMapId::ALL.iter().map(|x| x.tag().to_string()));
        v.extend(Conversion::ALL.iter().map(|x| x.tag().to_string()));
        v
    }

    pub fn arity(self) -> usize {
        match self {
            Op::MulInverse
            | Op::CompInverse
            | Op::Shift(_)
            | Op::InverseMap(_)
            | Op::Exp
            | Op::Log
            | Op::Convert(_) => 1,
            _ => 2,
        }
    }

    pub fn apply(self, lhs: &MultSeries, rhs: Option<&MultSeries>) -> Result<MultSeries> {
        let rhs = || rhs.ok_or_else(|| Error::Unsupported(format!("operation {self} needs a right operand")));
        match self {
            Op::Mul => lhs.mul(rhs()?),
            Op::Compose => lhs.compose(rhs()?),
            Op::MulInverse => lhs.mul_inverse(),
            Op::CompInverse => lhs.comp_inverse(),
            Op::Shift(side) => Ok(lhs.shift(side)),
            Op::Law(l) => group_law(l, lhs, rhs()?),
            Op::Action(a) => action(a, lhs, rhs()?),
            Op::InverseMap(m) => inverse_map(m, lhs),
            Op::PreLie => pre_lie_bracket(lhs, rhs()?),
            Op::Commutator => commutator(lhs, rhs()?),
            Op::PostLie(p) => post_lie(p, lhs, rhs()?),
            Op::Exp => exp_mul(lhs),
            Op::Log => log_mul(lhs),
            Op::Convert(c) => c.apply(lhs),
            Op::H1 => Ok(subordination(lhs, rhs()?)?.0),
            Op::H2 => Ok(subordination(lhs, rhs()?)?.1),
            Op::ThirdAction => third_action(lhs, rhs()?),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Op::Mul => "mul",
            Op::Compose => "compose",
            Op::MulInverse => "mul_inverse",
            Op::CompInverse => "comp_inverse",
            Op::Shift(Side::Left) => "shift_left",
            Op::Shift(Side::Right) => "shift_right",
            Op::Law(l) => l.tag(),
            Op::Action(a) => a.tag(),
            Op::InverseMap(m) => m.tag(),
            Op::PreLie => "pre_lie",
            Op::Commutator => "commutator",
            Op::PostLie(PostLieProduct::Left) => "post_l",
            Op::PostLie(PostLieProduct::Right) => "post_r",
            Op::PostLie(PostLieProduct::Both) => "post",
            Op::Exp => "exp",
            Op::Log => "log",
            Op::Convert(c) => c.tag(),
            Op::H1 => "H1",
            Op::H2 => "H2",
            Op::ThirdAction => "third_action",
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Op {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let simple = match s {
            "mul" => Some(Op::Mul),
            "compose" => Some(Op::Compose),
            "mul_inverse" => Some(Op::MulInverse),
            "comp_inverse" => Some(Op::CompInverse),
            "shift_left" => Some(Op::Shift(Side::Left)),
            "shift_right" => Some(Op::Shift(Side::Right)),
            "pre_lie" => Some(Op::PreLie),
            "commutator" => Some(Op::Commutator),
            "post_l" => Some(Op::PostLie(PostLieProduct::Left)),
            "post_r" => Some(Op::PostLie(PostLieProduct::Right)),
            "post" => Some(Op::PostLie(PostLieProduct::Both)),
            "exp" => Some(Op::Exp),
            "log" => Some(Op::Log),
            "H1" => Some(Op::H1),
            "H2" => Some(Op::H2),
            "third_action" => Some(Op::ThirdAction),
            _ => None,
        };
        if let Some(op) = simple {
            return Ok(op);
        }
        s.parse()
            .map(Op::Law)
            .or_else(|_| s.parse().map(Op::Action))
            .or_else(|_| s.parse().map(Op::InverseMap))
            .or_else(|_| s.parse().map(Op::Convert))
            .map_err(|_| Error::Parse(format!("unknown operation {s:?}")))
    }
}
