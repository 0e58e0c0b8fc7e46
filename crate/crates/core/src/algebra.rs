//! Finite-dimensional unital base algebras over the rationals.
//!
//! An algebra is given by structure constants on a fixed basis: the product
//! `e_i e_j` is stored as a sparse coordinate vector. Scalars (dimension 1)
//! and `d x d` matrices (dimension `d^2`, elementary-matrix basis in
//! row-major order) are provided; the series layer only ever sees the
//! structure constants.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use dashu_int::{IBig, UBig};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraKind {
    Scalar,
    Matrix(usize),
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraKind::Scalar => write!(f, "scalar"),
            AlgebraKind::Matrix(d) => write!(f, "mat{d}"),
        }
    }
}

/// An element of a base algebra, as coordinates in the algebra's basis.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgebraElement {
    coords: Vec<Rational>,
}

impl AlgebraElement {
    pub fn new(coords: Vec<Rational>) -> Self {
        AlgebraElement { coords }
    }

    pub fn zero(dim: usize) -> Self {
        AlgebraElement {
            coords: vec![Rational::zero(); dim],
        }
    }

    pub fn unit_vector(dim: usize, i: usize) -> Self {
        let mut e = Self::zero(dim);
        e.coords[i] = Rational::one();
        e
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rational::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        AlgebraElement {
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords.iter()).finish()
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.dim(), rhs.dim());
        AlgebraElement::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.dim(), rhs.dim());
        AlgebraElement::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement::new(self.coords.iter().map(|a| -a).collect())
    }
}

/// A linear endomorphism of `B`; column `c` holds the coordinates of `T(e_c)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearMapOnB {
    matrix: Vec<Vec<Rational>>,
}

impl LinearMapOnB {
    pub fn from_rows(matrix: Vec<Vec<Rational>>) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidAlgebra("linear map must be square".into()));
        }
        Ok(LinearMapOnB { matrix })
    }

    pub fn identity(n: usize) -> Self {
        let matrix = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| if r == c { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        LinearMapOnB { matrix }
    }

    pub fn diagonal(diag: &[Rational]) -> Self {
        let mut m = Self::identity(diag.len());
        for (k, d) in diag.iter().enumerate() {
            m.matrix[k][k] = d.clone();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn entry(&self, r: usize, c: usize) -> &Rational {
        &self.matrix[r][c]
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.matrix
            .iter()
            .map(|row| {
                let mut acc = Rational::zero();
                for (a, b) in row.iter().zip(v) {
                    acc.add_mul(a, b);
                }
                acc
            })
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMapOnB) -> LinearMapOnB {
        let n = self.dim();
        let mut out = vec![vec![Rational::zero(); n]; n];
        for (r, out_row) in out.iter_mut().enumerate() {
            for (c, slot) in out_row.iter_mut().enumerate() {
                for k in 0..n {
                    slot.add_mul(&self.matrix[r][k], &other.matrix[k][c]);
                }
            }
        }
        LinearMapOnB { matrix: out }
    }

    pub fn inverse(&self) -> Result<LinearMapOnB> {
        invert_square(&self.matrix)
            .map(|matrix| LinearMapOnB { matrix })
            .ok_or_else(|| Error::NotInvertible("singular linear map".into()))
    }
}

/// Exact Gauss-Jordan inversion; `None` when the matrix is singular.
pub fn invert_square(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut inv = LinearMapOnB::identity(n).matrix;
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].recip().ok()?;
        for k in 0..n {
            a[col][k] *= &p;
            inv[col][k] *= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for k in 0..n {
                let (src_a, src_i) = (a[col][k].clone(), inv[col][k].clone());
                a[r][k].sub_mul(&factor, &src_a);
                inv[r][k].sub_mul(&factor, &src_i);
            }
        }
    }
    Some(inv)
}

/// A unital associative algebra with an explicit basis.
#[derive(Clone, Debug)]
pub struct BaseAlgebra {
    kind: AlgebraKind,
    dim: usize,
    /// `table[i * dim + j]` lists the nonzero coordinates of `e_i e_j`.
    table: Vec<Vec<(usize, Rational)>>,
    /// `table` scaled by `table_den` to integers.
    int_table: Vec<Vec<(usize, IBig)>>,
    table_den: IBig,
    unit: AlgebraElement,
}

impl PartialEq for BaseAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for BaseAlgebra {}

impl BaseAlgebra {
    pub fn scalar() -> Self {
        Self::new(AlgebraKind::Scalar).expect("scalar algebra is valid")
    }

    pub fn matrix(d: usize) -> Result<Self> {
        Self::new(AlgebraKind::Matrix(d))
    }

    pub fn new(kind: AlgebraKind) -> Result<Self> {
        match kind {
            AlgebraKind::Scalar => {
                Self::from_structure_constants(kind, 1, vec![vec![Rational::one()]], vec![Rational::one()])
            }
            AlgebraKind::Matrix(d) => {
                if d == 0 {
                    return Err(Error::InvalidAlgebra("matrix size must be positive".into()));
                }
                let dim = d * d;
                let mut table = Vec::with_capacity(dim * dim);
                for i in 0..dim {
                    for j in 0..dim {
                        let (r1, c1) = (i / d, i % d);
                        let (r2, c2) = (j / d, j % d);
                        let mut coords = vec![Rational::zero(); dim];
                        if c1 == r2 {
                            coords[r1 * d + c2] = Rational::one();
                        }
                        table.push(coords);
                    }
                }
                let mut unit = vec![Rational::zero(); dim];
                for k in 0..d {
                    unit[k * d + k] = Rational::one();
                }
                Self::from_structure_constants(kind, dim, table, unit)
            }
        }
    }

    /// Builds an algebra from dense structure constants, rejecting tables
    /// that are not associative or for which `unit` is not a two-sided unit.
    pub fn from_structure_constants(
        kind: AlgebraKind,
        dim: usize,
        table: Vec<Vec<Rational>>,
        unit: Vec<Rational>,
    ) -> Result<Self> {
        if dim == 0 || table.len() != dim * dim || table.iter().any(|v| v.len() != dim) {
            return Err(Error::InvalidAlgebra("structure constants have wrong shape".into()));
        }
        if unit.len() != dim {
            return Err(Error::InvalidAlgebra("unit has wrong length".into()));
        }
        let sparse: Vec<Vec<(usize, Rational)>> = table
            .into_iter()
            .map(|coords| coords.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
            .collect();
        let table_den = sparse
            .iter()
            .flatten()
            .fold(UBig::ONE, |acc, (_, c)| crate::tensor::lcm(&acc, c.denom()));
        let int_table = sparse
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(k, c)| (*k, c.numer() * IBig::from(&table_den / c.denom())))
                    .collect()
            })
            .collect();
        let alg = BaseAlgebra {
            kind,
            dim,
            table: sparse,
            int_table,
            table_den: IBig::from(table_den),
            unit: AlgebraElement::new(unit),
        };
        alg.verify_axioms()?;
        Ok(alg)
    }

    fn verify_axioms(&self) -> Result<()> {
        let basis = self.basis();
        for (i, ei) in basis.iter().enumerate() {
            if self.mul_unchecked(&self.unit, ei) != *ei || self.mul_unchecked(ei, &self.unit) != *ei {
                return Err(Error::InvalidAlgebra(format!("unit law fails on basis element {i}")));
            }
            for (j, ej) in basis.iter().enumerate() {
                let ij = self.mul_unchecked(ei, ej);
                for (k, ek) in basis.iter().enumerate() {
                    let left = self.mul_unchecked(&ij, ek);
                    let right = self.mul_unchecked(ei, &self.mul_unchecked(ej, ek));
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!(
                            "associativity fails on basis triple ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn one(&self) -> AlgebraElement {
        self.unit.clone()
    }

    pub fn unit(&self) -> &AlgebraElement {
        &self.unit
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::zero(self.dim)
    }

    pub fn basis(&self) -> Vec<AlgebraElement> {
        (0..self.dim)
            .map(|i| AlgebraElement::unit_vector(self.dim, i))
            .collect()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.table[i * self.dim + j] == self.table[j * self.dim + i]))
    }

    fn check(&self, a: &AlgebraElement) -> Result<()> {
        if a.dim() != self.dim {
            return Err(Error::AlgebraMismatch {
                expected: self.dim,
                found: a.dim(),
            });
        }
        Ok(())
    }

    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    fn mul_unchecked(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut out = vec![Rational::zero(); self.dim];
        self.mul_acc(&mut out, &a.coords, &b.coords);
        AlgebraElement::new(out)
    }

    /// `out += a * b` on raw coordinate slices.
    #[inline]
    pub(crate) fn mul_acc(&self, out: &mut [Rational], a: &[Rational], b: &[Rational]) {
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let ab = ai * bj;
                for (k, c) in &self.table[i * self.dim + j] {
                    out[*k].add_mul(&ab, c);
                }
            }
        }
    }

    /// `out += a * b * table_den` on integer coordinates.
    pub(crate) fn mul_acc_int(&self, out: &mut [IBig], a: &[IBig], b: &[IBig]) {
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let ab = ai * bj;
                for (k, c) in &self.int_table[i * self.dim + j] {
                    if c.is_one() {
                        out[*k] += &ab;
                    } else {
                        out[*k] += &ab * c;
                    }
                }
            }
        }
    }

    pub(crate) fn table_den(&self) -> &IBig {
        &self.table_den
    }

    /// The matrix of `x ↦ a x`.
    pub fn left_mul_map(&self, a: &AlgebraElement) -> Result<LinearMapOnB> {
        self.check(a)?;
        let cols: Vec<AlgebraElement> = (0..self.dim)
            .map(|c| self.mul_unchecked(a, &AlgebraElement::unit_vector(self.dim, c)))
            .collect();
        let rows = (0..self.dim)
            .map(|r| cols.iter().map(|col| col.coords[r].clone()).collect())
            .collect();
        LinearMapOnB::from_rows(rows)
    }

    pub fn inv(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        let inv = self
            .left_mul_map(a)?
            .inverse()
            .map_err(|_| Error::NotInvertible(format!("element {a} has no inverse")))?;
        let x = AlgebraElement::new(inv.apply(&self.unit.coords));
        // x must also be a left inverse.
        if self.mul_unchecked(&x, a) != self.unit {
            return Err(Error::NotInvertible(format!(
                "element {a} is only one-sided invertible"
            )));
        }
        Ok(x)
    }

    pub fn is_invertible(&self, a: &AlgebraElement) -> bool {
        self.inv(a).is_ok()
    }

    /// Builds a matrix-algebra element from row-major rows.
    pub fn element_from_rows(&self, rows: &[Vec<Rational>]) -> Result<AlgebraElement> {
        let d = match self.kind {
            AlgebraKind::Matrix(d) => d,
            AlgebraKind::Scalar => 1,
        };
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(Error::Parse(format!("expected a {d}x{d} array")));
        }
        Ok(AlgebraElement::new(rows.iter().flatten().cloned().collect()))
    }

    pub fn element_to_rows(&self, a: &AlgebraElement) -> Vec<Vec<Rational>> {
        let d = match self.kind {
            AlgebraKind::Matrix(d) => d,
            AlgebraKind::Scalar => 1,
        };
        a.coords.chunks(d).map(|c| c.to_vec()).collect()
    }
}
