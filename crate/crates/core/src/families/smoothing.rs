//! The family `B = k·1 ⊕ ⊕_i p_i k[t_i]` with `p_i = ∏_j (t_i - x_{i,j})`,
//! whose special fibre at `x = 0` is the partition singularity `X_n`.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::GermAlgebra;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::rref;
use crate::subalgebra::Subalgebra;

use super::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothingFamily {
    field: FieldSpec,
    exponents: Vec<usize>,
    roots: Vec<Vec<Scalar>>,
}

/// One branch of the normalization at the glued point: a root of `p_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingBranch {
    pub branch: usize,
    pub root: Scalar,
    pub multiplicity: usize,
}

impl SmoothingFamily {
    pub fn new(field: FieldSpec, exponents: &[usize], roots: Vec<Vec<Scalar>>) -> Result<Self> {
        if exponents.is_empty() || exponents.contains(&0) {
            return Err(Error::ExponentOutOfRange(
                "exponents must be a non-empty list of positive integers".into(),
            ));
        }
        if roots.len() != exponents.len() {
            return Err(Error::DimensionMismatch {
                expected: exponents.len(),
                found: roots.len(),
            });
        }
        for (xs, &n) in roots.iter().zip(exponents) {
            if xs.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: xs.len(),
                });
            }
            if let Some(x) = xs.iter().find(|x| !field.contains(x)) {
                return Err(Error::MixedCharacteristic {
                    expected: field.characteristic(),
                    found: x.characteristic(),
                });
            }
        }
        Ok(SmoothingFamily {
            field,
            exponents: exponents.to_vec(),
            roots,
        })
    }

    /// The special fibre `x = 0`.
    pub fn zero(field: FieldSpec, exponents: &[usize]) -> Result<Self> {
        let roots = exponents.iter().map(|&n| vec![field.zero(); n]).collect();
        Self::new(field, exponents, roots)
    }

    /// Uniform residues over `F_p`, integers in `[-1000, 1000]` over `Q`;
    /// with `distinct`, the roots on each branch are pairwise different.
    pub fn random<R: Rng + ?Sized>(
        field: FieldSpec,
        exponents: &[usize],
        rng: &mut R,
        distinct: bool,
    ) -> Result<Self> {
        if let Some(q) = field.order() {
            if distinct && exponents.iter().any(|&n| n as u64 > q) {
                return Err(Error::Unsupported(format!(
                    "{field} has too few elements for distinct roots"
                )));
            }
        }
        let draw = |rng: &mut R| match field.order() {
            Some(q) => field.from_i64(rng.gen_range(0..q) as i64),
            None => field.from_i64(rng.gen_range(-1000..=1000)),
        };
        let roots = exponents
            .iter()
            .map(|&n| {
                let mut xs: Vec<Scalar> = Vec::with_capacity(n);
                while xs.len() < n {
                    let x = draw(rng);
                    if !distinct || !xs.contains(&x) {
                        xs.push(x);
                    }
                }
                xs
            })
            .collect();
        Self::new(field, exponents, roots)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    pub fn roots(&self) -> &[Vec<Scalar>] {
        &self.roots
    }

    /// `p_i`.
    pub fn polynomial(&self, branch: usize) -> Poly {
        Poly::from_roots(self.field, &self.roots[branch])
    }

    /// Codimension of `B ∩ V_N` in `V_N = ∏_i k[t_i]_{<N}`.
    pub fn fiber_corank(&self, cut: usize) -> Result<usize> {
        let needed = self.exponents.iter().copied().max().unwrap_or(0);
        if cut < needed || cut == 0 {
            return Err(Error::DegreeCutTooSmall { cut, needed });
        }
        let m = self.exponents.len();
        let dim = m * cut;
        let zero = self.field.zero();
        let mut rows = Vec::new();
        let mut unit = vec![zero.clone(); dim];
        for i in 0..m {
            unit[i * cut] = self.field.one();
        }
        rows.push(unit);
        for (i, &n) in self.exponents.iter().enumerate() {
            let p = self.polynomial(i);
            for a in 0..cut - n {
                let mut row = vec![zero.clone(); dim];
                for (d, c) in p.shift_up(a).coeffs().iter().enumerate() {
                    row[i * cut + d] = c.clone();
                }
                rows.push(row);
            }
        }
        Ok(rref(self.field, dim, &rows)?.codim())
    }

    /// Distinct roots of each `p_i`, branch by branch, in order of first
    /// appearance.
    pub fn gluing_branches(&self) -> Vec<GluingBranch> {
        let mut out: Vec<GluingBranch> = Vec::new();
        for (i, xs) in self.roots.iter().enumerate() {
            let start = out.len();
            for x in xs {
                match out[start..].iter_mut().find(|g| &g.root == x) {
                    Some(g) => g.multiplicity += 1,
                    None => out.push(GluingBranch {
                        branch: i,
                        root: x.clone(),
                        multiplicity: 1,
                    }),
                }
            }
        }
        out
    }

    /// The germ of the fibre at the point where all roots are glued, as a
    /// subalgebra of `A+(trunc)` with one branch per gluing branch.
    ///
    /// Truncation levels default to the root multiplicities and may not be
    /// smaller than them.
    pub fn germ_at_gluing(&self, trunc: Option<&[usize]>) -> Result<Subalgebra> {
        let branches = self.gluing_branches();
        let levels: Vec<usize> = match trunc {
            Some(t) => t.to_vec(),
            None => branches.iter().map(|g| g.multiplicity).collect(),
        };
        if levels.len() != branches.len() {
            return Err(Error::DimensionMismatch {
                expected: branches.len(),
                found: levels.len(),
            });
        }
        for (k, (g, &t)) in branches.iter().zip(&levels).enumerate() {
            if t < g.multiplicity {
                return Err(Error::TruncationTooSmall {
                    branch: k + 1,
                    needed: g.multiplicity,
                    given: t,
                });
            }
        }
        let alg = Arc::new(GermAlgebra::plus(self.field, &levels)?);
        let mut rows = vec![alg.unit()];
        for i in 0..self.exponents.len() {
            let p = self.polynomial(i);
            let here: Vec<usize> = (0..branches.len())
                .filter(|&k| branches[k].branch == i)
                .collect();
            // jets of p_i·k[t] at the roots only depend on t^a for a below the total level
            let span: usize = here.iter().map(|&k| levels[k]).sum();
            for a in 0..span {
                let f = p.shift_up(a);
                let mut row = alg.zero();
                for &k in &here {
                    let jet = f
                        .taylor_shift(&branches[k].root)
                        .truncated_coeffs(levels[k]);
                    debug_assert!(jet[0].is_zero());
                    for (d, c) in jet.into_iter().enumerate().skip(1) {
                        row[alg.monomial_index(k, d).expect("degree below level")] = c;
                    }
                }
                rows.push(row);
            }
        }
        Subalgebra::from_rows(&alg, &rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{delta_genus, make_partition_singularity, record};

    fn ints(field: FieldSpec, xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| field.from_i64(x)).collect()
    }

    #[test]
    fn fiber_corank_examples() {
        let q = FieldSpec::rationals();
        let f5 = FieldSpec::prime(5);
        let fam = SmoothingFamily::new(q, &[2], vec![ints(q, &[0, 0])]).unwrap();
        assert_eq!(fam.fiber_corank(4).unwrap(), 1);
        let fam =
            SmoothingFamily::new(f5, &[2, 1], vec![ints(f5, &[3, 4]), ints(f5, &[1])]).unwrap();
        assert_eq!(fam.fiber_corank(5).unwrap(), 2);
        let fam = SmoothingFamily::new(q, &[3], vec![ints(q, &[0, 1, 2])]).unwrap();
        assert_eq!(fam.fiber_corank(6).unwrap(), 2);
        assert!(matches!(
            fam.fiber_corank(2),
            Err(Error::DegreeCutTooSmall { cut: 2, needed: 3 })
        ));
    }

    #[test]
    fn special_fiber_is_partition_point() {
        let q = FieldSpec::rationals();
        let fam = SmoothingFamily::zero(q, &[2]).unwrap();
        let germ = fam.germ_at_gluing(Some(&[2])).unwrap();
        assert_eq!(germ, make_partition_singularity(q, &[2], &[2]).unwrap());
        assert_eq!(germ.rank(), 1);
    }

    #[test]
    fn distinct_roots_give_a_node() {
        let q = FieldSpec::rationals();
        let fam = SmoothingFamily::new(q, &[2], vec![ints(q, &[0, 1])]).unwrap();
        let germ = fam.germ_at_gluing(Some(&[1, 1])).unwrap();
        assert_eq!(germ, Subalgebra::whole(germ.ambient()));
        assert_eq!(delta_genus(&germ).unwrap().1, Some(0));
        assert_eq!(record(&germ).unwrap().conductances, vec![1, 1]);

        let fam = SmoothingFamily::zero(q, &[1, 1]).unwrap();
        let germ = fam.germ_at_gluing(Some(&[1, 1])).unwrap();
        assert_eq!(germ, Subalgebra::whole(germ.ambient()));
    }

    #[test]
    fn partial_collision() {
        // p = t^2 (t - 1): a cusp glued to a smooth branch
        let q = FieldSpec::rationals();
        let fam = SmoothingFamily::new(q, &[3], vec![ints(q, &[0, 1, 0])]).unwrap();
        let gb = fam.gluing_branches();
        assert_eq!(gb.len(), 2);
        assert_eq!(gb[0].multiplicity, 2);
        let germ = fam.germ_at_gluing(None).unwrap();
        assert_eq!(germ.ambient().conductances(), &[2, 1]);
        assert_eq!(delta_genus(&germ).unwrap(), (2, Some(1)));
        assert!(matches!(
            fam.germ_at_gluing(Some(&[1, 1])),
            Err(Error::TruncationTooSmall {
                branch: 1,
                needed: 2,
                given: 1
            })
        ));
    }
}
