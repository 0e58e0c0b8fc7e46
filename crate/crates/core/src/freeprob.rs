//! Moment and free-cumulant series, their conversions, and a scalar
//! noncrossing-partition oracle.
//!
//! A moment series has `M_n(x_1..x_n) = E(a x_1 a ⋯ x_n a)`, so in the
//! scalar case the moment `m_{n+1}` sits at component `n`. Cumulant series
//! use the same shift.

use std::fmt;

use crate::error::{Error, Result};
use crate::grouplaws::{action, group_law, inverse_map, ActionId, InverseMapId, LawId};
use crate::rational::Rational;
use crate::series::{Constant, Difference, MultSeries, Side};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moments(pub MultSeries);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cumulants(pub MultSeries);

fn i_of(f: &MultSeries) -> MultSeries {
    MultSeries::identity(f.algebra(), f.degree())
}

fn one_of(f: &MultSeries) -> MultSeries {
    MultSeries::one(f.algebra(), f.degree())
}

/// `I + I M I`
fn framed(m: &MultSeries) -> MultSeries {
    &i_of(m) + &m.shift(Side::Left).shift(Side::Right)
}

/// Solves `IK = (IM) ∘ (I + IMI)^{∘-1}` for `K`.
pub fn moments_to_cumulants(m: &Moments) -> Result<Cumulants> {
    let n = m.0.degree();
    let mm = m.0.with_degree(n + 1);
    let ik = mm.shift(Side::Left).compose(&framed(&mm).comp_inverse()?)?;
    Ok(Cumulants(ik.fix_unit_argument(Side::Left)?))
}

/// Solves `I + IMI = ((1 + IK)^{-1} I)^{∘-1}` for `M`.
pub fn cumulants_to_moments(k: &Cumulants) -> Result<Moments> {
    let n = k.0.degree();
    let kk = k.0.with_degree(n + 2);
    let one_plus_ik = &one_of(&kk) + &kk.shift(Side::Left);
    let framed = one_plus_ik.mul_inverse()?.shift(Side::Right).comp_inverse()?;
    let imi = &framed - &i_of(&kk);
    let m = imi.fix_unit_argument(Side::Left)?.fix_unit_argument(Side::Right)?;
    Ok(Moments(m))
}

/// The S-transform `S_a = S_l(K_a)` of a variable with cumulant series `K_a`.
pub fn s_transform(k: &Cumulants) -> Result<MultSeries> {
    inverse_map(InverseMapId::SL, &k.0)
}

/// Outcome of one relation in a moment-cumulant report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub name: &'static str,
    pub outcome: std::result::Result<(), RelationFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationFailure {
    Mismatch(Difference),
    /// one side could not be evaluated
    Error(Error),
}

impl RelationCheck {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

impl fmt::Display for RelationCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Ok(()) => write!(f, "{}: ok", self.name),
            Err(RelationFailure::Mismatch(d)) => write!(
                f,
                "{}: FAIL at component {} index {:?}: {} vs {}",
                self.name, d.component, d.index, d.lhs, d.rhs
            ),
            Err(RelationFailure::Error(e)) => write!(f, "{}: FAIL ({e})", self.name),
        }
    }
}

/// Names of the relations checked by [`mc_relations_report`], in order.
pub const MC_RELATIONS: &[&str] = &[
    "mc1_IK_eq_IM_circ_frame_inv",
    "mc2_KI_eq_MI_circ_frame_inv",
    "mc3_frame_eq_inv_1_plus_IK_times_I",
    "mc4_frame_eq_I_times_inv_1_plus_KI",
    "mc5_1_plus_IM_eq_S_r",
    "mc6_1_plus_MI_eq_S_l",
    "star_r_form",
    "star_l_form",
    "sqdot_prime_form",
    "sqdot_form",
    "product_form_right",
    "product_form_left",
    "IM_eq_IK_circ_frame",
    "MI_eq_KI_circ_frame",
    "action_form_left",
    "action_form_right",
    "M_eq_K_boxcon_zeta",
];

/// Evaluates every moment-cumulant relation on the pair `(M, K)`.
///
/// Relations that cannot be evaluated (for instance because `M` has no
/// invertible constant term) are reported as failures.
pub fn mc_relations_report(m: &Moments, k: &Cumulants) -> Result<Vec<RelationCheck>> {
    let (m, k) = (&m.0, &k.0);
    if m.degree() != k.degree() {
        return Err(Error::DegreeMismatch {
            left: m.degree(),
            right: k.degree(),
        });
    }
    if m.algebra().kind() != k.algebra().kind() {
        return Err(Error::AlgebraMismatch {
            expected: m.dim(),
            found: k.dim(),
        });
    }
    let one = one_of(m);
    let opi = MultSeries::constant(Constant::OnePlusI, m.algebra(), m.degree());
    let zeta = MultSeries::constant(Constant::Zeta, m.algebra(), m.degree());
    let frame = framed(m);
    let im = m.shift(Side::Left);
    let mi = m.shift(Side::Right);
    let ik = k.shift(Side::Left);
    let ki = k.shift(Side::Right);
    let one_plus_im = &one + &im;
    let one_plus_mi = &one + &mi;
    let one_plus_ik = &one + &ik;
    let one_plus_ki = &one + &ki;
    let sl = |x: &MultSeries| inverse_map(InverseMapId::SL, x);
    let sr = |x: &MultSeries| inverse_map(InverseMapId::SR, x);

    type Sides<'a> = Box<dyn Fn() -> Result<(MultSeries, MultSeries)> + 'a>;
    let relations: Vec<(&'static str, Sides)> = vec![
        (
            MC_RELATIONS[0],
            Box::new(|| Ok((ik.clone(), im.compose(&frame.comp_inverse()?)?))),
        ),
        (
            MC_RELATIONS[1],
            Box::new(|| Ok((ki.clone(), mi.compose(&frame.comp_inverse()?)?))),
        ),
        (
            MC_RELATIONS[2],
            Box::new(|| {
                Ok((
                    frame.clone(),
                    one_plus_ik.mul_inverse()?.shift(Side::Right).comp_inverse()?,
                ))
            }),
        ),
        (
            MC_RELATIONS[3],
            Box::new(|| {
                Ok((
                    frame.clone(),
                    one_plus_ki.mul_inverse()?.shift(Side::Left).comp_inverse()?,
                ))
            }),
        ),
        (
            MC_RELATIONS[4],
            Box::new(|| Ok((one_plus_im.clone(), sr(&one_plus_ik.mul_inverse()?)?))),
        ),
        (
            MC_RELATIONS[5],
            Box::new(|| Ok((one_plus_mi.clone(), sl(&one_plus_ki.mul_inverse()?)?))),
        ),
        (
            MC_RELATIONS[6],
            Box::new(|| Ok((m.clone(), group_law(LawId::StarR, k, &one_plus_im)?))),
        ),
        (
            MC_RELATIONS[7],
            Box::new(|| Ok((m.clone(), group_law(LawId::StarL, k, &one_plus_mi)?))),
        ),
        (
            MC_RELATIONS[8],
            Box::new(|| Ok((sr(k)?, group_law(LawId::SqdotPrime, &sr(m)?, &opi)?))),
        ),
        (
            MC_RELATIONS[9],
            Box::new(|| Ok((sl(k)?, group_law(LawId::Sqdot, &opi, &sl(m)?)?))),
        ),
        (MC_RELATIONS[10], Box::new(|| Ok((sr(k)?, sr(m)?.mul(&opi)?)))),
        (MC_RELATIONS[11], Box::new(|| Ok((sl(k)?, opi.mul(&sl(m)?)?)))),
        (MC_RELATIONS[12], Box::new(|| Ok((im.clone(), ik.compose(&frame)?)))),
        (MC_RELATIONS[13], Box::new(|| Ok((mi.clone(), ki.compose(&frame)?)))),
        (
            MC_RELATIONS[14],
            Box::new(|| Ok((one_plus_im.clone(), action(ActionId::RhdL, m, &opi)?))),
        ),
        (
            MC_RELATIONS[15],
            Box::new(|| Ok((one_plus_mi.clone(), action(ActionId::RhdR, m, &opi)?))),
        ),
        (
            MC_RELATIONS[16],
            Box::new(|| Ok((m.clone(), group_law(LawId::Boxcon, k, &zeta)?))),
        ),
    ];

    Ok(relations
        .into_iter()
        .map(|(name, sides)| {
            let outcome = match sides() {
                Ok((lhs, rhs)) => match lhs.first_difference(&rhs) {
                    None => Ok(()),
                    Some(d) => Err(RelationFailure::Mismatch(d)),
                },
                Err(e) => Err(RelationFailure::Error(e)),
            };
            RelationCheck { name, outcome }
        })
        .collect())
}

/// A set partition of `{1, .., n}` into blocks listed in increasing order of
/// their least element, each block sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NCPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl NCPartition {
    /// Normalizes and validates a partition of `{1..n}`; rejects crossings.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .filter(|b| !b.is_empty())
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        let mut seen = vec![false; n + 1];
        for &x in blocks.iter().flatten() {
            if x == 0 || x > n || seen[x] {
                return Err(Error::Parse(format!("not a partition of 1..{n}")));
            }
            seen[x] = true;
        }
        if seen[1..].iter().any(|s| !s) {
            return Err(Error::Parse(format!("not a partition of 1..{n}")));
        }
        let p = NCPartition { n, blocks };
        if p.has_crossing() {
            return Err(Error::Parse("partition is crossing".into()));
        }
        Ok(p)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().map(Vec::len)
    }

    fn has_crossing(&self) -> bool {
        let label = self.labels();
        crosses(&label)
    }

    /// `label[i]` is the block index of element `i + 1`.
    fn labels(&self) -> Vec<usize> {
        let mut label = vec![0; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                label[x - 1] = b;
            }
        }
        label
    }
}

impl fmt::Display for NCPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Whether a labelling has `a < b < c < d` with `a, c` in one block and
/// `b, d` in another.
pub(crate) fn crosses(label: &[usize]) -> bool {
    let n = label.len();
    for a in 0..n {
        for b in a + 1..n {
            if label[b] == label[a] {
                continue;
            }
            for c in b + 1..n {
                if label[c] != label[a] {
                    continue;
                }
                if (c + 1..n).any(|d| label[d] == label[b]) {
                    return true;
                }
            }
        }
    }
    false
}

pub const NC_LIMIT: usize = 9;

/// All noncrossing partitions of `{1..n}`, enumerated through restricted
/// growth strings.
pub fn nc_partitions(n: usize) -> Result<Vec<NCPartition>> {
    if n > NC_LIMIT {
        return Err(Error::SizeGuard { n, limit: NC_LIMIT });
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<NCPartition>) {
        let n = rgs.len();
        if i == n {
            if !crosses(rgs) {
                let nblocks = rgs.iter().max().map_or(0, |m| m + 1);
                let mut blocks = vec![Vec::new(); nblocks];
                for (x, &b) in rgs.iter().enumerate() {
                    blocks[b].push(x + 1);
                }
                out.push(NCPartition { n, blocks });
            }
            return;
        }
        for b in 0..=max {
            rgs[i] = b;
            rec(i + 1, max.max(b + 1), rgs, out);
        }
    }
    if n == 0 {
        return Ok(vec![NCPartition { n: 0, blocks: vec![] }]);
    }
    rgs[0] = 0;
    rec(1, 1, &mut rgs, &mut out);
    Ok(out)
}

/// The Kreweras complement, computed as the cycles of `π^{-1} ∘ γ` where
/// `γ = (1 2 .. n)` and `π` cycles each block in increasing order.
pub fn kreweras(p: &NCPartition) -> NCPartition {
    let n = p.n;
    let mut pi_inv = vec![0; n + 1];
    for block in &p.blocks {
        for (i, &x) in block.iter().enumerate() {
            let next = block[(i + 1) % block.len()];
            pi_inv[next] = x;
        }
    }
    let gamma = |i: usize| if i == n { 1 } else { i + 1 };
    let mut seen = vec![false; n + 1];
    let mut blocks = Vec::new();
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i);
            i = pi_inv[gamma(i)];
        }
        cycle.sort_unstable();
        blocks.push(cycle);
    }
    blocks.sort();
    NCPartition { n, blocks }
}

fn partition_product(k: &[Rational], sizes: impl Iterator<Item = usize>) -> Rational {
    let mut acc = Rational::one();
    for s in sizes {
        acc = &acc * &k[s - 1];
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// Free cumulants `k_1..k_n` from moments `m_1..m_n` by inverting
/// `m_n = Σ_{π ∈ NC(n)} Π_V k_{|V|}` one order at a time.
pub fn scalar_free_cumulants_oracle(moments: &[Rational]) -> Result<Vec<Rational>> {
    let mut k: Vec<Rational> = Vec::with_capacity(moments.len());
    for (i, m) in moments.iter().enumerate() {
        let n = i + 1;
        k.push(Rational::zero());
        let mut rest = Rational::zero();
        for p in nc_partitions(n)? {
            if p.blocks.len() > 1 {
                rest += &partition_product(&k, p.block_sizes());
            }
        }
        k[i] = m - &rest;
    }
    Ok(k)
}

pub const PRODUCT_ORACLE_LIMIT: usize = 8;

/// Free cumulants of a product of free variables:
/// `k_n^{ab} = Σ_{π ∈ NC(n)} k_π^a k_{Kr(π)}^b`.
pub fn scalar_product_cumulants_oracle(ka: &[Rational], kb: &[Rational]) -> Result<Vec<Rational>> {
    let n = ka.len().min(kb.len());
    if n > PRODUCT_ORACLE_LIMIT {
        return Err(Error::SizeGuard {
            n,
            limit: PRODUCT_ORACLE_LIMIT,
        });
    }
    (1..=n)
        .map(|order| {
            let mut acc = Rational::zero();
            for p in nc_partitions(order)? {
                let left = partition_product(ka, p.block_sizes());
                if left.is_zero() {
                    continue;
                }
                let right = partition_product(kb, kreweras(&p).block_sizes());
                acc.add_mul(&left, &right);
            }
            Ok(acc)
        })
        .collect()
}
