//! Weight degenerations `t_i -> λ^{w_i} t_i` and their flat limits.

use std::sync::Arc;

use num_integer::Integer;

use crate::algebra::GermAlgebra;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{echelonize, rref};
use crate::subalgebra::Subalgebra;

use super::pencil::{default_samples, Pencil};

pub(crate) fn check_weights(r: &Subalgebra, weights: &[u64]) -> Result<()> {
    let m = r.ambient().branches();
    if weights.len() != m {
        return Err(Error::InvalidWeights(format!(
            "{} weights for {m} branches",
            weights.len()
        )));
    }
    if weights.contains(&0) {
        return Err(Error::InvalidWeights("weights must be positive".into()));
    }
    Ok(())
}

/// Reduced basis of `r` with pivots taken in increasing weight order, and
/// the weight of each pivot.
fn weighted_basis(r: &Subalgebra, weights: &[u64]) -> (Vec<Vec<Scalar>>, Vec<u64>) {
    let alg = r.ambient();
    let mut order: Vec<usize> = (0..alg.dim()).collect();
    order.sort_by_key(|&b| (alg.weight_of(b, weights), b));
    let mut rows = r.basis().to_vec();
    let pivots = echelonize(&mut rows, &order);
    let lows = pivots.iter().map(|&p| alg.weight_of(p, weights)).collect();
    (rows, lows)
}

/// Splits each weighted basis row into its lowest-weight form and the rest.
struct Split {
    rows: Vec<Vec<Scalar>>,
    initial: Vec<Vec<Scalar>>,
    tails: Vec<Vec<Scalar>>,
    lows: Vec<u64>,
}

fn initial_and_tail(r: &Subalgebra, weights: &[u64]) -> Split {
    let alg = r.ambient();
    let zero = alg.field().zero();
    let (rows, lows) = weighted_basis(r, weights);
    let mut initial = Vec::with_capacity(rows.len());
    let mut tails = Vec::with_capacity(rows.len());
    for (row, &low) in rows.iter().zip(&lows) {
        let (mut i, mut t) = (row.clone(), row.clone());
        for b in 0..alg.dim() {
            if alg.weight_of(b, weights) == low {
                t[b] = zero.clone();
            } else {
                i[b] = zero.clone();
            }
        }
        initial.push(i);
        tails.push(t);
    }
    Split {
        rows,
        initial,
        tails,
        lows,
    }
}

/// The limit at `λ = 0` of the rescaled family `t_i -> λ^{w_i} t_i`.
///
/// Fixes every weight-homogeneous subalgebra, in particular every monomial
/// one, and is idempotent.
pub fn initial_subalgebra(r: &Subalgebra, weights: &[u64]) -> Result<Subalgebra> {
    check_weights(r, weights)?;
    let alg = r.ambient();
    let initial = initial_and_tail(r, weights).initial;
    let span = rref(alg.field(), alg.dim(), &initial)?;
    Subalgebra::from_subspace(alg, span)
        .map_err(|e| Error::InvariantViolation(format!("flat limit is not a subalgebra: {e}")))
}

/// A pencil whose fibre at `λ = 1` is `r` and at `λ = 0` is its initial
/// subalgebra, or `None` when the two coincide.
///
/// The linear pencil `in + λ·tail` is tried first. When it leaves the
/// territory the torus orbit itself is used, with row `k` carrying
/// `λ^{(wt(b) - ω_k)/e}` on basis element `b`, where `ω_k` is the lowest
/// weight of the row and `e` the gcd of all such exponents.
pub fn degeneration_pencil(r: &Subalgebra, weights: &[u64]) -> Result<Option<Pencil>> {
    check_weights(r, weights)?;
    let alg = r.ambient();
    let Split {
        rows,
        initial,
        tails,
        lows,
    } = initial_and_tail(r, weights);
    if tails.iter().all(|t| t.iter().all(|x| x.is_zero())) {
        return Ok(None);
    }
    let samples = default_samples(alg.field(), alg.dim());
    let linear = Pencil::linear(alg, initial.into_iter().zip(tails).collect(), r.corank())?;
    if linear.check(&samples).is_ok() {
        return Ok(Some(linear));
    }
    let orbit = orbit_pencil(alg, &rows, &lows, weights, r.corank())?;
    orbit
        .check(&samples)
        .map_err(|why| Error::InvalidPencil(format!("torus orbit pencil failed: {why}")))?;
    Ok(Some(orbit))
}

fn orbit_pencil(
    alg: &Arc<GermAlgebra>,
    rows: &[Vec<Scalar>],
    lows: &[u64],
    weights: &[u64],
    corank: usize,
) -> Result<Pencil> {
    let exponent = |k: usize, b: usize| alg.weight_of(b, weights) - lows[k];
    let mut step = 0u64;
    for (k, row) in rows.iter().enumerate() {
        for (b, x) in row.iter().enumerate() {
            if !x.is_zero() {
                step = step.gcd(&exponent(k, b));
            }
        }
    }
    let step = step.max(1);
    let poly_rows = rows
        .iter()
        .enumerate()
        .map(|(k, row)| {
            let mut coeffs: Vec<Vec<Scalar>> = Vec::new();
            for (b, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let d = (exponent(k, b) / step) as usize;
                if coeffs.len() <= d {
                    coeffs.resize(d + 1, alg.zero());
                }
                coeffs[d][b] = x.clone();
            }
            coeffs
        })
        .collect();
    Pencil::new(alg, poly_rows, corank)
}

/// Weights making every basis monomial of distinct weight: the first
/// primes exceeding every conductance, in branch order.
pub fn tie_break_weights(conductances: &[usize]) -> Vec<u64> {
    let floor = conductances.iter().copied().max().unwrap_or(0) as u64;
    let is_prime = |n: u64| {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    };
    let mut out = Vec::with_capacity(conductances.len());
    let mut n = floor;
    while out.len() < conductances.len() {
        n += 1;
        if is_prime(n) {
            out.push(n);
        }
    }
    out
}
