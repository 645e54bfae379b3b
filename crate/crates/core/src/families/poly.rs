//! Dense univariate polynomials over an exact field.

use crate::field::{FieldSpec, Scalar};

/// Coefficients from the constant term up, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero(field: FieldSpec) -> Self {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: FieldSpec, c: Scalar) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::constant(field, field.one())
    }

    /// The polynomial `t`.
    pub fn var(field: FieldSpec) -> Self {
        Self::from_coeffs(field, vec![field.zero(), field.one()])
    }

    pub fn from_coeffs(field: FieldSpec, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    /// `prod_r (t - r)`.
    pub fn from_roots(field: FieldSpec, roots: &[Scalar]) -> Self {
        roots.iter().fold(Self::one(field), |acc, r| {
            acc.mul(&Self::from_coeffs(field, vec![r.neg_ref(), field.one()]))
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs(
            self.field,
            (0..n)
                .map(|i| self.coeff(i).add_ref(&other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs(
            self.field,
            (0..n)
                .map(|i| self.coeff(i).sub_ref(&other.coeff(i)))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self::from_coeffs(self.field, out)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Self::from_coeffs(
            self.field,
            self.coeffs.iter().map(|a| a.mul_ref(c)).collect(),
        )
    }

    /// Multiplication by `t^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly {
            field: self.field,
            coeffs,
        }
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.coeffs[dd].inv();
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree().filter(|&n| n >= dd) else {
            return (Self::zero(self.field), self.clone());
        };
        let mut quot = vec![self.field.zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let c = rem[k + dd].mul_ref(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].sub_ref(&c.mul_ref(d));
            }
            quot[k] = c;
        }
        (
            Self::from_coeffs(self.field, quot),
            Self::from_coeffs(self.field, rem),
        )
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| acc.mul_ref(x).add_ref(c))
    }

    /// `p(r + u)` as a polynomial in `u`.
    pub fn taylor_shift(&self, r: &Scalar) -> Poly {
        let lin = Self::from_coeffs(self.field, vec![r.clone(), self.field.one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(self.field), |acc, c| {
                acc.mul(&lin).add(&Self::constant(self.field, c.clone()))
            })
    }

    /// The first `n` coefficients (reduction modulo `u^n`).
    pub fn truncated_coeffs(&self, n: usize) -> Vec<Scalar> {
        (0..n).map(|i| self.coeff(i)).collect()
    }
}

/// Rank over the fraction field `k(λ)` of a matrix with entries in `k[λ]`,
/// by fraction-free (Bareiss) elimination.
pub(crate) fn rank_over_fraction_field(mut m: Vec<Vec<Poly>>) -> usize {
    let Some(first) = m.first() else {
        return 0;
    };
    let ncols = first.len();
    let Some(field) = m.iter().flatten().map(Poly::field).next() else {
        return 0;
    };
    let nrows = m.len();
    let mut prev = Poly::one(field);
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(found) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, found);
        let (top, below) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = pivot_row[col].clone();
        for row in below {
            let factor = row[col].clone();
            for (x, p) in row[col + 1..].iter_mut().zip(&pivot_row[col + 1..]) {
                let num = pivot.mul(x).sub(&factor.mul(p));
                let (q, r) = num.divrem(&prev);
                debug_assert!(r.is_zero(), "Bareiss step must divide exactly");
                *x = q;
            }
            row[col] = Poly::zero(field);
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn p(c: &[i64]) -> Poly {
        Poly::from_coeffs(q(), c.iter().map(|&x| q().from_i64(x)).collect())
    }

    #[test]
    fn roots_and_evaluation() {
        let f = Poly::from_roots(q(), &[q().from_i64(1), q().from_i64(2)]);
        assert_eq!(f, p(&[2, -3, 1]));
        assert!(f.eval(&q().from_i64(2)).is_zero());
        assert_eq!(f.eval(&q().from_i64(0)), q().from_i64(2));
    }

    #[test]
    fn division_with_remainder() {
        let (quot, rem) = p(&[1, 0, 1]).divrem(&p(&[1, 1]));
        assert_eq!(quot, p(&[-1, 1]));
        assert_eq!(rem, p(&[2]));
    }

    #[test]
    fn taylor_shift_recenters() {
        // t^2 - t at t = 1 + u is u + u^2
        assert_eq!(p(&[0, -1, 1]).taylor_shift(&q().one()), p(&[0, 1, 1]));
    }

    #[test]
    fn bareiss_rank() {
        let lam = p(&[0, 1]);
        let one = p(&[1]);
        // [[1, λ], [λ, λ^2]] has rank 1 over k(λ)
        let m = vec![
            vec![one.clone(), lam.clone()],
            vec![lam.clone(), lam.mul(&lam)],
        ];
        assert_eq!(rank_over_fraction_field(m), 1);
        // [[1, λ], [λ, 1]] has rank 2 even though it drops at λ = ±1
        let m = vec![
            vec![one.clone(), lam.clone()],
            vec![lam.clone(), one.clone()],
        ];
        assert_eq!(rank_over_fraction_field(m), 2);
        let m = vec![
            vec![Poly::zero(q()), one.clone(), lam.clone()],
            vec![Poly::zero(q()), lam.clone(), lam.mul(&lam)],
            vec![one.clone(), Poly::zero(q()), one.clone()],
        ];
        assert_eq!(rank_over_fraction_field(m), 2);
    }
}
