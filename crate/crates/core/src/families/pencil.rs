//! One-parameter families of subspaces and chains of them.
//!
//! A pencil row is a polynomial `u_0 + λ u_1 + .. + λ^d u_d` in the ambient
//! algebra; the classic linear pencil `u + λ v` has `d = 1`. A pencil is
//! valid when, over the rational function field `k(λ)`, its rows are
//! independent and span a unital subalgebra of the declared corank, and its
//! fibres at the sampled parameter values are subalgebras of that corank.
//! Closure is checked as polynomial identities in `λ`, which is exact over
//! every field including `F_2`.

use std::sync::Arc;

use crate::algebra::GermAlgebra;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::invariants::{make_partition_singularity, partition_exponents};
use crate::linalg::{rref, Subspace};
use crate::subalgebra::{verify, Subalgebra};

use super::poly::{rank_over_fraction_field, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pencil {
    ambient: Arc<GermAlgebra>,
    /// `rows[k][d]` is the coefficient vector of `λ^d` in row `k`.
    rows: Vec<Vec<Vec<Scalar>>>,
    corank: usize,
}

impl Pencil {
    pub fn new(
        ambient: &Arc<GermAlgebra>,
        rows: Vec<Vec<Vec<Scalar>>>,
        corank: usize,
    ) -> Result<Self> {
        if corank > ambient.dim() || rows.len() != ambient.dim() - corank {
            return Err(Error::InvalidPencil(format!(
                "{} rows cannot have corank {corank} in dimension {}",
                rows.len(),
                ambient.dim()
            )));
        }
        for row in &rows {
            if row.is_empty() {
                return Err(Error::InvalidPencil("row without coefficients".into()));
            }
            for coeff in row {
                ambient.check_element(coeff)?;
            }
        }
        Ok(Pencil {
            ambient: Arc::clone(ambient),
            rows,
            corank,
        })
    }

    /// Rows `u + λ v`.
    pub fn linear(
        ambient: &Arc<GermAlgebra>,
        pairs: Vec<(Vec<Scalar>, Vec<Scalar>)>,
        corank: usize,
    ) -> Result<Self> {
        Self::new(
            ambient,
            pairs.into_iter().map(|(u, v)| vec![u, v]).collect(),
            corank,
        )
    }

    pub fn ambient(&self) -> &Arc<GermAlgebra> {
        &self.ambient
    }

    pub fn rows(&self) -> &[Vec<Vec<Scalar>>] {
        &self.rows
    }

    pub fn corank(&self) -> usize {
        self.corank
    }

    pub fn degree(&self) -> usize {
        self.rows.iter().map(|r| r.len() - 1).max().unwrap_or(0)
    }

    /// Naive fibre: the span of the rows evaluated at `lambda`.
    pub fn fiber(&self, lambda: &Scalar) -> Subspace {
        let dim = self.ambient.dim();
        let field = self.ambient.field();
        let rows: Vec<Vec<Scalar>> = self
            .rows
            .iter()
            .map(|row| {
                (0..dim)
                    .map(|c| {
                        row.iter().rev().fold(field.zero(), |acc, coeff| {
                            acc.mul_ref(lambda).add_ref(&coeff[c])
                        })
                    })
                    .collect()
            })
            .collect();
        rref(field, dim, &rows).expect("rows checked at construction")
    }

    fn poly_rows(&self) -> Vec<Vec<Poly>> {
        let field = self.ambient.field();
        let dim = self.ambient.dim();
        self.rows
            .iter()
            .map(|row| {
                (0..dim)
                    .map(|c| Poly::from_coeffs(field, row.iter().map(|v| v[c].clone()).collect()))
                    .collect()
            })
            .collect()
    }

    fn poly_product(&self, u: &[Poly], v: &[Poly]) -> Vec<Poly> {
        let alg = &self.ambient;
        let mut w = vec![Poly::zero(alg.field()); alg.dim()];
        for (a, ua) in u.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            for (b, vb) in v.iter().enumerate() {
                if vb.is_zero() {
                    continue;
                }
                if let Some(c) = alg.product_index(a, b) {
                    w[c] = w[c].add(&ua.mul(vb));
                }
            }
        }
        w
    }

    /// Generic-fibre checks over `k(λ)`; `Err` carries the failed condition.
    pub fn check_generic(&self) -> std::result::Result<(), String> {
        let rows = self.poly_rows();
        let r = rows.len();
        if rank_over_fraction_field(rows.clone()) != r {
            return Err("rows are dependent over k(λ)".into());
        }
        let field = self.ambient.field();
        let in_span = |w: Vec<Poly>| {
            let mut m = rows.clone();
            m.push(w);
            rank_over_fraction_field(m) == r
        };
        let unit: Vec<Poly> = self
            .ambient
            .unit()
            .into_iter()
            .map(|c| Poly::constant(field, c))
            .collect();
        if !in_span(unit) {
            return Err("generic fibre misses the unit".into());
        }
        for a in 0..r {
            for b in a..r {
                if !in_span(self.poly_product(&rows[a], &rows[b])) {
                    return Err(format!(
                        "product of rows {a} and {b} leaves the generic fibre"
                    ));
                }
            }
        }
        Ok(())
    }

    /// Fibre check at one parameter value.
    pub fn check_fiber(&self, lambda: &Scalar) -> std::result::Result<Subspace, String> {
        let fiber = self.fiber(lambda);
        if fiber.codim() != self.corank {
            return Err(format!(
                "fibre at λ = {lambda} has corank {} instead of {}",
                fiber.codim(),
                self.corank
            ));
        }
        if !verify(&self.ambient, &fiber) {
            return Err(format!("fibre at λ = {lambda} is not a subalgebra"));
        }
        Ok(fiber)
    }

    pub fn check(&self, samples: &[Scalar]) -> std::result::Result<(), String> {
        self.check_generic()?;
        for s in samples {
            self.check_fiber(s)?;
        }
        Ok(())
    }
}

/// Parameter values sampled on every pencil: `0, 1, .., dim + 1` over `Q`,
/// and as many distinct residues as exist (up to that count) over `F_p`.
pub fn default_samples(field: FieldSpec, dim: usize) -> Vec<Scalar> {
    let count = (dim as u64 + 2).min(field.order().unwrap_or(u64::MAX));
    (0..count as i64).map(|i| field.from_i64(i)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathStep {
    pub pencil: Pencil,
    pub samples: Vec<Scalar>,
}

/// A chain of pencils: step `k` runs from its fibre at `λ = 1` to its fibre
/// at `λ = 0`, which is where step `k + 1` starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCertificate {
    pub start: Subalgebra,
    pub end: Subalgebra,
    pub steps: Vec<PathStep>,
}

impl PathCertificate {
    /// Re-checks every pencil, the chaining, and that the path ends at a
    /// partition singularity point.
    pub fn verify(&self) -> Result<()> {
        let reject = |msg: String| Err(Error::CertificateRejected(msg));
        let alg = self.start.ambient();
        if self.end.ambient() != alg {
            return reject("endpoints live in different algebras".into());
        }
        let corank = self.start.corank();
        if self.end.corank() != corank {
            return reject("endpoints have different coranks".into());
        }
        let field = alg.field();
        let (zero, one) = (field.zero(), field.one());
        let mut current = self.start.span().clone();
        for (k, step) in self.steps.iter().enumerate() {
            let p = &step.pencil;
            if p.ambient() != alg || p.corank() != corank {
                return reject(format!("pencil {k} has the wrong ambient or corank"));
            }
            if !step.samples.contains(&zero) || !step.samples.contains(&one) {
                return reject(format!("pencil {k} does not sample both λ = 0 and λ = 1"));
            }
            if let Err(why) = p.check(&step.samples) {
                return reject(format!("pencil {k}: {why}"));
            }
            if p.fiber(&one) != current {
                return reject(format!("pencil {k} does not start where the path stands"));
            }
            current = p.fiber(&zero);
        }
        if &current != self.end.span() {
            return reject("path does not reach the declared end point".into());
        }
        let Some(exps) = partition_exponents(&self.end) else {
            return reject("end point is not a partition singularity".into());
        };
        if make_partition_singularity(field, &exps, alg.conductances())? != self.end {
            return reject("end point differs from its partition singularity".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GermAlgebra;

    fn tacnode_pencil(p: u64) -> (Arc<GermAlgebra>, Pencil) {
        let field = FieldSpec::new(p).unwrap();
        let a = Arc::new(GermAlgebra::plus(field, &[2, 2]).unwrap());
        let pencil = Pencil::linear(
            &a,
            vec![
                (a.unit(), a.zero()),
                (a.monomial(0, 1).unwrap(), a.monomial(1, 1).unwrap()),
            ],
            1,
        )
        .unwrap();
        (a, pencil)
    }

    #[test]
    fn tacnode_pencil_is_valid_in_every_characteristic() {
        for p in [0, 2, 3] {
            let (a, pencil) = tacnode_pencil(p);
            pencil.check(&default_samples(a.field(), a.dim())).unwrap();
        }
    }

    #[test]
    fn pencil_leaving_the_territory_is_rejected() {
        let q = FieldSpec::rationals();
        let a = Arc::new(GermAlgebra::plus(q, &[3]).unwrap());
        // span{1, t + λ t^2}: the square t^2 + .. escapes for λ generic
        let pencil = Pencil::linear(
            &a,
            vec![
                (a.unit(), a.zero()),
                (a.monomial(0, 1).unwrap(), a.monomial(0, 2).unwrap()),
            ],
            1,
        )
        .unwrap();
        assert!(pencil.check_generic().is_err());
    }

    #[test]
    fn samples_respect_the_field_size() {
        assert_eq!(default_samples(FieldSpec::prime(2), 5).len(), 2);
        assert_eq!(default_samples(FieldSpec::prime(7), 3).len(), 5);
        assert_eq!(default_samples(FieldSpec::rationals(), 3).len(), 5);
    }

    #[test]
    fn rank_drop_is_caught_at_samples() {
        let q = FieldSpec::rationals();
        let a = Arc::new(GermAlgebra::plus(q, &[2, 2]).unwrap());
        let t1 = a.monomial(0, 1).unwrap();
        let t2 = a.monomial(1, 1).unwrap();
        // rows t1 + λ t2 and t2 + λ t1 collapse at λ = 1
        let pencil = Pencil::new(
            &a,
            vec![vec![a.unit()], vec![t1.clone(), t2.clone()], vec![t2, t1]],
            0,
        )
        .unwrap();
        assert!(pencil.check_generic().is_ok());
        assert!(pencil.check_fiber(&q.one()).is_err());
        assert!(pencil.check_fiber(&q.from_i64(2)).is_ok());
    }

    #[test]
    fn rejects_bad_shapes() {
        let q = FieldSpec::rationals();
        let a = Arc::new(GermAlgebra::plus(q, &[2]).unwrap());
        assert!(Pencil::new(&a, vec![vec![a.unit()]], 0).is_err());
        assert!(Pencil::new(&a, vec![vec![]], 1).is_err());
    }
}
