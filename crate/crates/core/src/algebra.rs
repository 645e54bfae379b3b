//! The truncated germ algebras `A(c) = prod_i k[t_i]/(t_i^{c_i})` and their
//! "constants equal" subalgebras `A+(c)`.
//!
//! Basis order is fixed and part of the wire format:
//!
//! * full: `t_i^j 1_i` for `i = 1..m`, `j = 0..c_i`, branch-major, degree-minor;
//! * plus: the unit first, then `t_i^j 1_i` for `j = 1..c_i` in the same order.
//!
//! Every product of two basis elements is either zero or a single basis
//! element with coefficient one, so the structure constants are stored as an
//! index table.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Full,
    Plus,
}

impl AlgebraKind {
    pub fn name(self) -> &'static str {
        match self {
            AlgebraKind::Full => "full",
            AlgebraKind::Plus => "plus",
        }
    }
}

/// A basis element; branches are 0-based internally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisElement {
    Unit,
    Monomial { branch: usize, degree: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GermAlgebra {
    field: FieldSpec,
    conductances: Vec<usize>,
    kind: AlgebraKind,
    basis: Vec<BasisElement>,
    /// `offsets[i]` is the index of `t_i^{j0} 1_i` where `j0` is 0 (full) or 1 (plus).
    offsets: Vec<usize>,
    products: Vec<Option<usize>>,
}

impl GermAlgebra {
    pub fn new(field: FieldSpec, conductances: &[usize], kind: AlgebraKind) -> Result<Self> {
        if conductances.is_empty() {
            return Err(Error::InvalidConductances("no branches".into()));
        }
        if let Some(i) = conductances.iter().position(|&c| c == 0) {
            return Err(Error::InvalidConductances(format!(
                "conductance of branch {} is zero",
                i + 1
            )));
        }
        let mut basis = Vec::new();
        let mut offsets = Vec::with_capacity(conductances.len());
        let first_degree = match kind {
            AlgebraKind::Full => 0,
            AlgebraKind::Plus => {
                basis.push(BasisElement::Unit);
                1
            }
        };
        for (branch, &c) in conductances.iter().enumerate() {
            offsets.push(basis.len());
            for degree in first_degree..c {
                basis.push(BasisElement::Monomial { branch, degree });
            }
        }
        let mut alg = GermAlgebra {
            field,
            conductances: conductances.to_vec(),
            kind,
            basis,
            offsets,
            products: Vec::new(),
        };
        let dim = alg.dim();
        let mut products = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                products.push(alg.basis_product(alg.basis[a], alg.basis[b]));
            }
        }
        alg.products = products;
        Ok(alg)
    }

    pub fn full(field: FieldSpec, conductances: &[usize]) -> Result<Self> {
        Self::new(field, conductances, AlgebraKind::Full)
    }

    pub fn plus(field: FieldSpec, conductances: &[usize]) -> Result<Self> {
        Self::new(field, conductances, AlgebraKind::Plus)
    }

    fn basis_product(&self, a: BasisElement, b: BasisElement) -> Option<usize> {
        match (a, b) {
            (BasisElement::Unit, x) | (x, BasisElement::Unit) => self.index_of(x),
            (
                BasisElement::Monomial {
                    branch: i,
                    degree: j,
                },
                BasisElement::Monomial {
                    branch: k,
                    degree: l,
                },
            ) => {
                if i == k && j + l < self.conductances[i] {
                    self.monomial_index(i, j + l)
                } else {
                    None
                }
            }
        }
    }

    fn index_of(&self, e: BasisElement) -> Option<usize> {
        match e {
            BasisElement::Unit => (self.kind == AlgebraKind::Plus).then_some(0),
            BasisElement::Monomial { branch, degree } => self.monomial_index(branch, degree),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn conductances(&self) -> &[usize] {
        &self.conductances
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn branches(&self) -> usize {
        self.conductances.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    /// Index of `t_i^j 1_i`; for plus algebras degree 0 has no own slot.
    pub fn monomial_index(&self, branch: usize, degree: usize) -> Option<usize> {
        let c = *self.conductances.get(branch)?;
        if degree >= c {
            return None;
        }
        match self.kind {
            AlgebraKind::Full => Some(self.offsets[branch] + degree),
            AlgebraKind::Plus => (degree >= 1).then(|| self.offsets[branch] + degree - 1),
        }
    }

    /// Index of the product of basis elements `a` and `b`, or `None` for zero.
    pub fn product_index(&self, a: usize, b: usize) -> Option<usize> {
        self.products[a * self.dim() + b]
    }

    /// Weighted degree of a basis element: `degree * weights[branch]`.
    pub fn weight_of(&self, index: usize, weights: &[u64]) -> u64 {
        match self.basis[index] {
            BasisElement::Unit => 0,
            BasisElement::Monomial { branch, degree } => degree as u64 * weights[branch],
        }
    }

    pub fn zero(&self) -> Vec<Scalar> {
        vec![self.field.zero(); self.dim()]
    }

    pub fn unit(&self) -> Vec<Scalar> {
        let mut v = self.zero();
        match self.kind {
            AlgebraKind::Plus => v[0] = self.field.one(),
            AlgebraKind::Full => {
                for &o in &self.offsets {
                    v[o] = self.field.one();
                }
            }
        }
        v
    }

    /// Basis vector `t_i^j 1_i`; in a plus algebra with one branch, degree 0 is the unit.
    pub fn monomial(&self, branch: usize, degree: usize) -> Option<Vec<Scalar>> {
        if self.kind == AlgebraKind::Plus && degree == 0 && self.branches() == 1 {
            return Some(self.unit());
        }
        let idx = self.monomial_index(branch, degree)?;
        let mut v = self.zero();
        v[idx] = self.field.one();
        Some(v)
    }

    /// The idempotent `1_S` of a full algebra.
    pub fn idempotent(&self, branches: &[usize]) -> Result<Vec<Scalar>> {
        if self.kind != AlgebraKind::Full {
            return Err(Error::KindMismatch { expected: "full" });
        }
        let mut v = self.zero();
        for &i in branches {
            let idx = self.monomial_index(i, 0).ok_or(Error::DimensionMismatch {
                expected: self.branches(),
                found: i + 1,
            })?;
            v[idx] = self.field.one();
        }
        Ok(v)
    }

    pub fn check_element(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        if let Some(bad) = v.iter().find(|s| !self.field.contains(s)) {
            return Err(Error::MixedCharacteristic {
                expected: self.field.characteristic(),
                found: bad.characteristic(),
            });
        }
        Ok(())
    }

    pub fn multiply(&self, u: &[Scalar], v: &[Scalar]) -> Result<Vec<Scalar>> {
        self.check_element(u)?;
        self.check_element(v)?;
        Ok(self.mul_unchecked(u, v))
    }

    pub(crate) fn mul_unchecked(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let dim = self.dim();
        let mut w = self.zero();
        for (a, ua) in u.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            for (b, vb) in v.iter().enumerate() {
                if vb.is_zero() {
                    continue;
                }
                if let Some(c) = self.products[a * dim + b] {
                    w[c] = w[c].add_ref(&ua.mul_ref(vb));
                }
            }
        }
        w
    }

    /// The full algebra `A(c)` containing this one.
    pub fn full_counterpart(&self) -> GermAlgebra {
        match self.kind {
            AlgebraKind::Full => self.clone(),
            AlgebraKind::Plus => GermAlgebra::full(self.field, &self.conductances)
                .expect("conductances already validated"),
        }
    }

    /// The plus algebra `A+(c)` with the same conductances.
    pub fn plus_counterpart(&self) -> GermAlgebra {
        match self.kind {
            AlgebraKind::Plus => self.clone(),
            AlgebraKind::Full => GermAlgebra::plus(self.field, &self.conductances)
                .expect("conductances already validated"),
        }
    }

    /// Inclusion `A+(c) -> A(c)`.
    pub fn embed_plus(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if self.kind != AlgebraKind::Plus {
            return Err(Error::KindMismatch { expected: "plus" });
        }
        self.check_element(v)?;
        Ok(self.embed_unchecked(v))
    }

    pub(crate) fn embed_unchecked(&self, v: &[Scalar]) -> Vec<Scalar> {
        let full_dim: usize = self.conductances.iter().sum();
        let mut out = Vec::with_capacity(full_dim);
        for (i, &c) in self.conductances.iter().enumerate() {
            out.push(v[0].clone());
            let base = self.offsets[i];
            out.extend(v[base..base + c - 1].iter().cloned());
        }
        out
    }

    /// Inverse of [`embed_plus`](Self::embed_plus) on a full-algebra element:
    /// `None` if its constant terms differ. `self` must be the plus algebra.
    pub fn restrict_to_plus(&self, full: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if self.kind != AlgebraKind::Plus {
            return Err(Error::KindMismatch { expected: "plus" });
        }
        let full_dim: usize = self.conductances.iter().sum();
        if full.len() != full_dim {
            return Err(Error::DimensionMismatch {
                expected: full_dim,
                found: full.len(),
            });
        }
        let mut out = Vec::with_capacity(self.dim());
        let mut pos = 0;
        let constant = full[0].clone();
        out.push(constant.clone());
        for &c in &self.conductances {
            if full[pos] != constant {
                return Ok(None);
            }
            out.extend(full[pos + 1..pos + c].iter().cloned());
            pos += c;
        }
        Ok(Some(out))
    }

    /// Constant terms `(f_1(0), ..., f_m(0))` of a full-algebra element.
    pub fn constant_terms(&self, v: &[Scalar]) -> Vec<Scalar> {
        match self.kind {
            AlgebraKind::Full => self.offsets.iter().map(|&o| v[o].clone()).collect(),
            AlgebraKind::Plus => vec![v[0].clone(); self.branches()],
        }
    }

    /// Coordinate positions of the constant slots `1_i` in a full algebra.
    pub fn constant_slots(&self) -> Result<&[usize]> {
        match self.kind {
            AlgebraKind::Full => Ok(&self.offsets),
            AlgebraKind::Plus => Err(Error::KindMismatch { expected: "full" }),
        }
    }

    /// Coordinates of block `branches` in a full algebra, in branch order.
    pub(crate) fn block_coordinates(&self, branches: &[usize]) -> Vec<usize> {
        assert_eq!(self.kind, AlgebraKind::Full);
        branches
            .iter()
            .flat_map(|&i| self.offsets[i]..self.offsets[i] + self.conductances[i])
            .collect()
    }
}
