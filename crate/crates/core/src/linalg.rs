//! Dense exact linear algebra: reduced row echelon forms and subspaces.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// A subspace of `k^n` stored as its reduced row echelon basis.
///
/// The basis is canonical, so two subspaces are equal exactly when their
/// matrices are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: FieldSpec,
    ambient_dim: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

fn check_vector(field: FieldSpec, dim: usize, v: &[Scalar]) -> Result<()> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.len(),
        });
    }
    if let Some(bad) = v.iter().find(|s| !field.contains(s)) {
        return Err(Error::MixedCharacteristic {
            expected: field.characteristic(),
            found: bad.characteristic(),
        });
    }
    Ok(())
}

/// Gauss-Jordan elimination in place, visiting columns in `order`.
///
/// On return `rows` holds the nonzero rows of the reduced form, ordered by
/// the position of their pivot in `order`; the returned vector lists the
/// pivot column of each row.
pub(crate) fn echelonize(rows: &mut Vec<Vec<Scalar>>, order: &[usize]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for &col in order {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next, found);
        let inv = rows[next][col].inv();
        if !inv.is_one() {
            for x in rows[next].iter_mut() {
                *x = x.mul_ref(&inv);
            }
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.sub_ref(&factor.mul_ref(p));
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next);
    pivots
}

/// Canonical reduced row echelon form of the row space of `rows`.
pub fn rref(field: FieldSpec, ambient_dim: usize, rows: &[Vec<Scalar>]) -> Result<Subspace> {
    for row in rows {
        check_vector(field, ambient_dim, row)?;
    }
    Ok(Subspace::from_checked_rows(
        field,
        ambient_dim,
        rows.to_vec(),
    ))
}

impl Subspace {
    pub(crate) fn from_checked_rows(
        field: FieldSpec,
        ambient_dim: usize,
        mut rows: Vec<Vec<Scalar>>,
    ) -> Self {
        let order: Vec<usize> = (0..ambient_dim).collect();
        let pivots = echelonize(&mut rows, &order);
        Subspace {
            field,
            ambient_dim,
            basis: rows,
            pivots,
        }
    }

    pub fn zero(field: FieldSpec, ambient_dim: usize) -> Self {
        Subspace {
            field,
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| unit_vector(field, ambient_dim, i))
            .collect();
        Subspace {
            field,
            ambient_dim,
            basis,
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn into_basis(self) -> Vec<Vec<Scalar>> {
        self.basis
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.field != other.field {
            return Err(Error::MixedCharacteristic {
                expected: self.field.characteristic(),
                found: other.field.characteristic(),
            });
        }
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }

    /// `v` minus its projection along the pivot coordinates; zero iff `v`
    /// lies in the subspace.
    pub(crate) fn residual(&self, v: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (c, row) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (x, r) in rest.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.sub_ref(&c.mul_ref(r));
                }
            }
        }
        (coords, rest)
    }

    /// Membership test without shape checks.
    pub(crate) fn contains_unchecked(&self, v: &[Scalar]) -> bool {
        self.residual(v).1.iter().all(Scalar::is_zero)
    }

    /// Coordinates of `v` in the basis rows, or `None` if `v` is outside.
    pub fn member(&self, v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        check_vector(self.field, self.ambient_dim, v)?;
        let (coords, rest) = self.residual(v);
        Ok(rest.iter().all(Scalar::is_zero).then_some(coords))
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        Ok(self.member(v)?.is_some())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.basis.iter().all(|b| other.contains_unchecked(b)))
    }

    /// Subspace spanned by this one together with `extra`.
    pub fn extend(&self, extra: &[Vec<Scalar>]) -> Result<Subspace> {
        for v in extra {
            check_vector(self.field, self.ambient_dim, v)?;
        }
        let mut rows = self.basis.clone();
        rows.extend(extra.iter().cloned());
        Ok(Subspace::from_checked_rows(
            self.field,
            self.ambient_dim,
            rows,
        ))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        self.extend(&other.basis)
    }

    /// Intersection via the Zassenhaus construction on `[a | a ; b | 0]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let n = self.ambient_dim;
        let zero = self.field.zero();
        let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(self.rank() + other.rank());
        for a in &self.basis {
            let mut row = a.clone();
            row.extend(a.iter().cloned());
            rows.push(row);
        }
        for b in &other.basis {
            let mut row = b.clone();
            row.extend(std::iter::repeat_n(zero.clone(), n));
            rows.push(row);
        }
        let order: Vec<usize> = (0..2 * n).collect();
        let pivots = echelonize(&mut rows, &order);
        let inter: Vec<Vec<Scalar>> = rows
            .into_iter()
            .zip(pivots)
            .filter(|(_, p)| *p >= n)
            .map(|(row, _)| row[n..].to_vec())
            .collect();
        Ok(Subspace::from_checked_rows(self.field, n, inter))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .cmp(&other.field)
            .then(self.ambient_dim.cmp(&other.ambient_dim))
            .then_with(|| self.basis.cmp(&other.basis))
    }
}

pub fn unit_vector(field: FieldSpec, dim: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); dim];
    v[i] = field.one();
    v
}

/// Left kernel of a matrix given by rows: all coefficient vectors `x` with
/// `sum_r x_r * rows[r] = 0`.
pub(crate) fn left_kernel(
    field: FieldSpec,
    rows: &[Vec<Scalar>],
    ncols: usize,
) -> Vec<Vec<Scalar>> {
    let nrows = rows.len();
    let mut aug: Vec<Vec<Scalar>> = rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut v = row.clone();
            v.extend(unit_vector(field, nrows, r));
            v
        })
        .collect();
    let order: Vec<usize> = (0..ncols + nrows).collect();
    let pivots = echelonize(&mut aug, &order);
    aug.into_iter()
        .zip(pivots)
        .filter(|(_, p)| *p >= ncols)
        .map(|(row, _)| row[ncols..].to_vec())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(field: FieldSpec, rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect()
    }

    #[test]
    fn rref_identity_over_f2() {
        let f = FieldSpec::prime(2);
        let id = m(f, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let s = rref(f, 3, &id).unwrap();
        assert_eq!(s.rank(), 3);
        assert_eq!(s.basis(), id.as_slice());
    }

    #[test]
    fn rref_permutation_over_f2() {
        let f = FieldSpec::prime(2);
        let s = rref(f, 2, &m(f, &[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(s.basis(), m(f, &[&[1, 0], &[0, 1]]).as_slice());
    }

    #[test]
    fn rref_proportional_rows_over_q() {
        let q = FieldSpec::rationals();
        let s = rref(q, 2, &m(q, &[&[2, 4], &[1, 2]])).unwrap();
        assert_eq!(s.rank(), 1);
        assert_eq!(s.basis(), m(q, &[&[1, 2]]).as_slice());
    }

    #[test]
    fn rref_rejects_mixed_characteristics() {
        let f2 = FieldSpec::prime(2);
        let f3 = FieldSpec::prime(3);
        let rows = vec![vec![f2.one(), f3.one()]];
        assert_eq!(
            rref(f2, 2, &rows),
            Err(Error::MixedCharacteristic {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn member_examples() {
        let q = FieldSpec::rationals();
        let e1 = rref(q, 2, &m(q, &[&[1, 0]])).unwrap();
        assert_eq!(
            e1.member(&m(q, &[&[0, 0]])[0]).unwrap(),
            Some(vec![q.zero()])
        );
        assert_eq!(e1.member(&m(q, &[&[0, 1]])[0]).unwrap(), None);

        let l = rref(q, 2, &m(q, &[&[1, 2]])).unwrap();
        assert_eq!(
            l.member(&m(q, &[&[3, 6]])[0]).unwrap(),
            Some(vec![q.from_i64(3)])
        );
        assert!(matches!(
            l.member(&[q.one()]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn intersect_examples() {
        let q = FieldSpec::rationals();
        let a = rref(q, 2, &m(q, &[&[1, 0]])).unwrap();
        let b = rref(q, 2, &m(q, &[&[0, 1]])).unwrap();
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert_eq!(a.intersect(&b).unwrap().rank(), 0);
        let plane = Subspace::full(q, 2);
        let diag = rref(q, 2, &m(q, &[&[1, 1]])).unwrap();
        assert_eq!(plane.intersect(&diag).unwrap(), diag);
        assert!(matches!(
            a.intersect(&Subspace::full(q, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn left_kernel_of_dependent_rows() {
        let q = FieldSpec::rationals();
        let rows = m(q, &[&[1, 2], &[2, 4], &[0, 1]]);
        let k = left_kernel(q, &rows, 2);
        assert_eq!(k.len(), 1);
        // 2*r0 - r1 = 0
        let combo: Vec<Scalar> = (0..2)
            .map(|c| (0..3).fold(q.zero(), |acc, r| acc + &k[0][r] * &rows[r][c]))
            .collect();
        assert!(combo.iter().all(Scalar::is_zero));
    }
}
