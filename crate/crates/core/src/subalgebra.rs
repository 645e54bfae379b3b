//! Unital subalgebras of a germ algebra, their constant parts, and the
//! largest ideal of the ambient algebra they contain.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::algebra::{AlgebraKind, BasisElement, GermAlgebra};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{left_kernel, rref, unit_vector, Subspace};
use crate::partition::SetPartition;

/// A unital, multiplicatively closed subspace of a [`GermAlgebra`].
#[derive(Clone, Debug)]
pub struct Subalgebra {
    ambient: Arc<GermAlgebra>,
    span: Subspace,
}

/// Why a subspace fails to be a subalgebra, if it does.
fn closure_defect(ambient: &GermAlgebra, s: &Subspace) -> Option<String> {
    if s.ambient_dim() != ambient.dim() || s.field() != ambient.field() {
        return Some("subspace lives in a different ambient space".into());
    }
    if !s.contains_unchecked(&ambient.unit()) {
        return Some("unit is missing".into());
    }
    let basis = s.basis();
    for (a, u) in basis.iter().enumerate() {
        for v in &basis[a..] {
            if !s.contains_unchecked(&ambient.mul_unchecked(u, v)) {
                return Some(format!("product of basis rows {a} and another row escapes"));
            }
        }
    }
    None
}

/// True iff `s` contains the unit and is closed under multiplication.
pub fn verify(ambient: &GermAlgebra, s: &Subspace) -> bool {
    closure_defect(ambient, s).is_none()
}

impl Subalgebra {
    /// Smallest unital subalgebra containing `gens`.
    pub fn generate(ambient: &Arc<GermAlgebra>, gens: &[Vec<Scalar>]) -> Result<Self> {
        for g in gens {
            ambient.check_element(g)?;
        }
        let mut rows = vec![ambient.unit()];
        rows.extend(gens.iter().cloned());
        let mut span = rref(ambient.field(), ambient.dim(), &rows)?;
        let cap = ambient.dim();
        for _ in 0..=cap {
            let basis = span.basis();
            let mut missing = Vec::new();
            for (a, u) in basis.iter().enumerate() {
                for v in &basis[a..] {
                    let w = ambient.mul_unchecked(u, v);
                    if !span.contains_unchecked(&w) {
                        missing.push(w);
                    }
                }
            }
            if missing.is_empty() {
                return Ok(Subalgebra {
                    ambient: Arc::clone(ambient),
                    span,
                });
            }
            span = span.extend(&missing)?;
        }
        Err(Error::ClosureDidNotStabilize(cap))
    }

    pub fn from_subspace(ambient: &Arc<GermAlgebra>, span: Subspace) -> Result<Self> {
        match closure_defect(ambient, &span) {
            Some(reason) => Err(Error::NotSubalgebra(reason)),
            None => Ok(Subalgebra {
                ambient: Arc::clone(ambient),
                span,
            }),
        }
    }

    pub fn from_rows(ambient: &Arc<GermAlgebra>, rows: &[Vec<Scalar>]) -> Result<Self> {
        let span = rref(ambient.field(), ambient.dim(), rows)?;
        Self::from_subspace(ambient, span)
    }

    pub(crate) fn from_verified(ambient: Arc<GermAlgebra>, span: Subspace) -> Self {
        debug_assert!(verify(&ambient, &span));
        Subalgebra { ambient, span }
    }

    pub fn whole(ambient: &Arc<GermAlgebra>) -> Self {
        Subalgebra {
            ambient: Arc::clone(ambient),
            span: Subspace::full(ambient.field(), ambient.dim()),
        }
    }

    pub fn ambient(&self) -> &Arc<GermAlgebra> {
        &self.ambient
    }

    pub fn span(&self) -> &Subspace {
        &self.span
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        self.span.basis()
    }

    pub fn rank(&self) -> usize {
        self.span.rank()
    }

    pub fn corank(&self) -> usize {
        self.span.codim()
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        self.span.contains(v)
    }

    /// The image under `A+(c) -> A(c)`; a full subalgebra is returned as is.
    pub fn embed_full(&self) -> Subalgebra {
        match self.ambient.kind() {
            AlgebraKind::Full => self.clone(),
            AlgebraKind::Plus => {
                let full = Arc::new(self.ambient.full_counterpart());
                let rows: Vec<Vec<Scalar>> = self
                    .basis()
                    .iter()
                    .map(|r| self.ambient.embed_unchecked(r))
                    .collect();
                let span = rref(full.field(), full.dim(), &rows).expect("shapes match");
                Subalgebra::from_verified(full, span)
            }
        }
    }

    /// The same subalgebra viewed inside `A+(c)`, if all its elements have
    /// equal constant terms.
    pub fn restrict_to_plus(&self) -> Result<Option<Subalgebra>> {
        if self.ambient.kind() == AlgebraKind::Plus {
            return Ok(Some(self.clone()));
        }
        let plus = Arc::new(self.ambient.plus_counterpart());
        let mut rows = Vec::with_capacity(self.rank());
        for r in self.basis() {
            match plus.restrict_to_plus(r)? {
                Some(v) => rows.push(v),
                None => return Ok(None),
            }
        }
        let span = rref(plus.field(), plus.dim(), &rows)?;
        Ok(Some(Subalgebra::from_verified(plus, span)))
    }

    /// `R_0 = R ∩ (k·1_1 + .. + k·1_m)`, as a subspace of `k^m`.
    pub fn constants_part(&self) -> Subspace {
        let full = self.embed_full();
        let alg = full.ambient();
        let m = alg.branches();
        let field = alg.field();
        let slots = alg.constant_slots().expect("full ambient");
        let constants = rref(
            field,
            alg.dim(),
            &slots
                .iter()
                .map(|&s| unit_vector(field, alg.dim(), s))
                .collect::<Vec<_>>(),
        )
        .expect("shapes match");
        let inter = full.span.intersect(&constants).expect("same ambient");
        let rows: Vec<Vec<Scalar>> = inter
            .basis()
            .iter()
            .map(|v| alg.constant_terms(v))
            .collect();
        rref(field, m, &rows).expect("shapes match")
    }

    /// The partition `P` with `R_0 = Span{1_P}`, read off from the common
    /// level sets of a basis of `R_0`.
    pub fn constants_partition(&self) -> Result<SetPartition> {
        let r0 = self.constants_part();
        let m = self.ambient.branches();
        let mut label: Vec<Option<usize>> = vec![None; m];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for i in 0..m {
            if label[i].is_some() {
                continue;
            }
            let b = blocks.len();
            let mut block = vec![i];
            label[i] = Some(b);
            for j in i + 1..m {
                if label[j].is_none() && r0.basis().iter().all(|row| row[i] == row[j]) {
                    label[j] = Some(b);
                    block.push(j);
                }
            }
            blocks.push(block);
        }
        let partition = SetPartition::new(m, blocks)?;
        let field = self.ambient.field();
        let indicators_inside = partition.blocks().iter().all(|blk| {
            let mut v = vec![field.zero(); m];
            for &i in blk {
                v[i] = field.one();
            }
            r0.contains_unchecked(&v)
        });
        if !indicators_inside || r0.rank() != partition.len() {
            return Err(Error::InvariantViolation(format!(
                "constant part of rank {} is not spanned by block indicators of {partition}",
                r0.rank()
            )));
        }
        Ok(partition)
    }

    pub fn is_local(&self) -> Result<bool> {
        Ok(self.constants_partition()?.len() == 1)
    }

    /// Largest subspace `I` of the span with `A·I ⊆ I`: the conductor of
    /// the ambient full algebra over this subalgebra.
    pub fn largest_contained_ideal(&self) -> Result<Subspace> {
        if self.ambient.kind() != AlgebraKind::Full {
            return Err(Error::KindMismatch { expected: "full" });
        }
        let alg = &self.ambient;
        let field = alg.field();
        let dim = alg.dim();
        let mut ideal = self.span.clone();
        loop {
            if ideal.rank() == 0 {
                return Ok(ideal);
            }
            // Row k: residuals of e_a * r_k modulo the candidate, for every basis index a.
            let conditions: Vec<Vec<Scalar>> = ideal
                .basis()
                .iter()
                .map(|r| {
                    (0..dim)
                        .flat_map(|a| {
                            let ea = unit_vector(field, dim, a);
                            ideal.residual(&alg.mul_unchecked(&ea, r)).1
                        })
                        .collect()
                })
                .collect();
            let kernel = left_kernel(field, &conditions, dim * dim);
            if kernel.len() == ideal.rank() {
                return Ok(ideal);
            }
            let rows: Vec<Vec<Scalar>> = kernel
                .iter()
                .map(|x| {
                    let mut v = vec![field.zero(); dim];
                    for (coef, row) in x.iter().zip(ideal.basis()) {
                        if coef.is_zero() {
                            continue;
                        }
                        for (acc, e) in v.iter_mut().zip(row) {
                            *acc = acc.add_ref(&coef.mul_ref(e));
                        }
                    }
                    v
                })
                .collect();
            ideal = rref(field, dim, &rows)?;
        }
    }

    /// Basis indices `a` with `e_a` in the span (the unit slot excluded).
    pub fn contained_monomials(&self) -> Vec<usize> {
        let field = self.ambient.field();
        let dim = self.ambient.dim();
        (0..dim)
            .filter(|&a| self.ambient.basis()[a] != BasisElement::Unit)
            .filter(|&a| self.span.contains_unchecked(&unit_vector(field, dim, a)))
            .collect()
    }

    /// Whether the span is generated by the unit and basis monomials.
    pub fn is_monomial(&self) -> bool {
        let mut rows = vec![self.ambient.unit()];
        let field = self.ambient.field();
        let dim = self.ambient.dim();
        rows.extend(
            self.contained_monomials()
                .into_iter()
                .map(|a| unit_vector(field, dim, a)),
        );
        rref(field, dim, &rows).expect("shapes match").rank() == self.rank()
    }

    /// Relabels branches: branch `k` of the result is branch `perm[k]` of `self`.
    pub fn permute_branches(&self, perm: &[usize]) -> Result<Subalgebra> {
        let alg = &self.ambient;
        let m = alg.branches();
        let mut check = perm.to_vec();
        check.sort_unstable();
        if check != (0..m).collect::<Vec<_>>() {
            return Err(Error::InvalidPartition(format!(
                "{perm:?} is not a permutation"
            )));
        }
        let cond: Vec<usize> = perm.iter().map(|&i| alg.conductances()[i]).collect();
        let target = Arc::new(GermAlgebra::new(alg.field(), &cond, alg.kind())?);
        let rows: Vec<Vec<Scalar>> = self
            .basis()
            .iter()
            .map(|r| {
                let mut v = target.zero();
                for (idx, e) in target.basis().iter().enumerate() {
                    let src = match *e {
                        BasisElement::Unit => Some(0),
                        BasisElement::Monomial { branch, degree } => {
                            alg.monomial_index(perm[branch], degree)
                        }
                    };
                    v[idx] = r[src.expect("degree within conductance")].clone();
                }
                v
            })
            .collect();
        Subalgebra::from_rows(&target, &rows)
    }
}

impl PartialEq for Subalgebra {
    fn eq(&self, other: &Self) -> bool {
        *self.ambient == *other.ambient && self.span == other.span
    }
}

impl Eq for Subalgebra {}

impl std::hash::Hash for Subalgebra {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ambient.conductances().hash(state);
        self.ambient.kind().hash(state);
        self.span.hash(state);
    }
}

impl PartialOrd for Subalgebra {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subalgebra {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient
            .conductances()
            .cmp(other.ambient.conductances())
            .then(self.ambient.kind().cmp(&other.ambient.kind()))
            .then_with(|| self.span.cmp(&other.span))
    }
}
