//! Numerical invariants of a singularity point and the partition
//! singularities `X_{n_1,..,n_m}`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraKind, GermAlgebra};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::subalgebra::Subalgebra;

/// Branches, conductances, delta invariant and genus of a point.
///
/// `genus` is `None` for non-local points, whose genus is only defined per
/// glued point (see [`crate::territory::decompose`]).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularityRecord {
    #[serde(rename = "m")]
    pub branches: usize,
    pub conductances: Vec<usize>,
    pub delta: usize,
    pub genus: Option<usize>,
    pub local: bool,
}

/// Conductance vector of a subalgebra of a full algebra `A(c)`.
///
/// Branch `i` gets the least `d >= 1` such that every `t_i^j 1_i` with
/// `j >= d` lies in the largest contained ideal; `d = c_i` when that ideal
/// misses branch `i` entirely. A smooth branch thus gets `1`, the smallest
/// conductance an ambient algebra can have.
pub fn conductances(r: &Subalgebra) -> Result<Vec<usize>> {
    let alg = r.ambient();
    if alg.kind() != AlgebraKind::Full {
        return Err(Error::KindMismatch { expected: "full" });
    }
    let ideal = r.largest_contained_ideal()?;
    Ok(alg
        .conductances()
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let mut d = c;
            while d > 1 {
                let e = alg.monomial(i, d - 1).expect("degree below conductance");
                if !ideal.contains_unchecked(&e) {
                    break;
                }
                d -= 1;
            }
            d
        })
        .collect())
}

/// `(delta, genus)`: corank in `A(c)` and in `A+(c)` respectively.
pub fn delta_genus(r: &Subalgebra) -> Result<(usize, Option<usize>)> {
    let m = r.ambient().branches();
    match r.ambient().kind() {
        AlgebraKind::Plus => {
            let g = r.corank();
            Ok((g + m - 1, Some(g)))
        }
        AlgebraKind::Full => {
            let delta = r.corank();
            let genus = if r.is_local()? {
                // a local point meets the constants in the diagonal only, so delta >= m - 1
                Some(delta + 1 - m)
            } else {
                None
            };
            Ok((delta, genus))
        }
    }
}

pub fn record(r: &Subalgebra) -> Result<SingularityRecord> {
    let full = r.embed_full();
    let (delta, genus) = delta_genus(r)?;
    Ok(SingularityRecord {
        branches: r.ambient().branches(),
        conductances: conductances(&full)?,
        delta,
        genus,
        local: r.is_local()?,
    })
}

/// The image of `k ⊕ t_1^{n_1}k[[t_1]] ⊕ .. ⊕ t_m^{n_m}k[[t_m]]` in `A+(c)`.
pub fn make_partition_singularity(
    field: FieldSpec,
    exponents: &[usize],
    conductances: &[usize],
) -> Result<Subalgebra> {
    if exponents.len() != conductances.len() {
        return Err(Error::DimensionMismatch {
            expected: conductances.len(),
            found: exponents.len(),
        });
    }
    if let Some(i) =
        (0..exponents.len()).find(|&i| exponents[i] == 0 || exponents[i] > conductances[i])
    {
        return Err(Error::ExponentOutOfRange(format!(
            "n_{} = {} must lie in 1..={}",
            i + 1,
            exponents[i],
            conductances[i]
        )));
    }
    let alg = Arc::new(GermAlgebra::plus(field, conductances)?);
    let mut rows = vec![alg.unit()];
    for (i, (&n, &c)) in exponents.iter().zip(conductances).enumerate() {
        for j in n..c {
            rows.push(alg.monomial(i, j).expect("degree in range"));
        }
    }
    Subalgebra::from_rows(&alg, &rows)
}

/// Exponents `n` with `1 <= n_i <= c_i` and `sum(n_i - 1) = g`, filling
/// branches greedily in index order; `None` when `g > sum(c_i - 1)`.
pub fn realize_for_genus(genus: usize, conductances: &[usize]) -> Option<Vec<usize>> {
    let capacity: usize = conductances.iter().map(|c| c.saturating_sub(1)).sum();
    if genus > capacity || conductances.contains(&0) {
        return None;
    }
    let mut remaining = genus;
    Some(
        conductances
            .iter()
            .map(|&c| {
                let extra = remaining.min(c - 1);
                remaining -= extra;
                1 + extra
            })
            .collect(),
    )
}

/// The exponents `n` if `r` (in a plus algebra) equals `X_n` truncated to
/// its ambient conductances.
pub fn partition_exponents(r: &Subalgebra) -> Option<Vec<usize>> {
    let alg = r.ambient();
    if alg.kind() != AlgebraKind::Plus || !r.is_monomial() {
        return None;
    }
    let mut exps = Vec::with_capacity(alg.branches());
    for (i, &c) in alg.conductances().iter().enumerate() {
        let inside = |j: usize| {
            r.span()
                .contains_unchecked(&alg.monomial(i, j).expect("degree in range"))
        };
        let mut n = c;
        while n > 1 && inside(n - 1) {
            n -= 1;
        }
        if (1..n).any(inside) {
            return None;
        }
        exps.push(n);
    }
    Some(exps)
}
