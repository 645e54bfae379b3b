//! Chains of pencils joining a point of `Ter^g_{A+(c)}` to a partition
//! singularity point.
//!
//! A point is first degenerated along the given weights and then along
//! tie-breaking weights, which lands on a monomial subalgebra. From there a
//! breadth-first search runs over monomial subalgebras of the same corank;
//! an edge replaces one monomial `t^a` by another `t^b` through the pencil
//! `span{.., t^b + λ (t^a - t^b), ..}` and is kept only if that pencil
//! passes the symbolic check.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{AlgebraKind, BasisElement, GermAlgebra};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::invariants::partition_exponents;
use crate::linalg::unit_vector;
use crate::subalgebra::Subalgebra;

use super::degenerate::{
    check_weights, degeneration_pencil, initial_subalgebra, tie_break_weights,
};
use super::pencil::{default_samples, PathCertificate, PathStep, Pencil};

/// Monomial subalgebras visited before the search gives up.
pub const DEFAULT_STATE_CAP: usize = 200_000;

#[derive(Clone, Debug)]
pub enum ConnectOutcome {
    Connected(PathCertificate),
    Failed {
        reason: String,
        visited: Vec<Subalgebra>,
    },
}

/// Bit `b` set iff the basis monomial with index `b` lies in the subalgebra.
type Mask = u64;

struct MonomialGraph<'a> {
    alg: &'a Arc<GermAlgebra>,
    samples: Vec<Scalar>,
    corank: usize,
}

impl MonomialGraph<'_> {
    fn closed(&self, mask: Mask) -> bool {
        let dim = self.alg.dim();
        (1..dim).filter(|&a| mask >> a & 1 == 1).all(|a| {
            (a..dim).filter(|&b| mask >> b & 1 == 1).all(|b| {
                self.alg
                    .product_index(a, b)
                    .is_none_or(|c| mask >> c & 1 == 1)
            })
        })
    }

    fn is_target(&self, mask: Mask) -> bool {
        // an up-set of degrees on every branch
        self.alg.basis().iter().enumerate().all(|(b, e)| match *e {
            BasisElement::Unit => true,
            BasisElement::Monomial { branch, degree } => {
                mask >> b & 1 == 0
                    || self
                        .alg
                        .monomial_index(branch, degree + 1)
                        .is_none_or(|n| mask >> n & 1 == 1)
            }
        })
    }

    fn basis_vector(&self, b: usize) -> Vec<Scalar> {
        unit_vector(self.alg.field(), self.alg.dim(), b)
    }

    fn subalgebra(&self, mask: Mask) -> Subalgebra {
        let mut rows = vec![self.alg.unit()];
        rows.extend(
            (1..self.alg.dim())
                .filter(|&b| mask >> b & 1 == 1)
                .map(|b| self.basis_vector(b)),
        );
        Subalgebra::from_rows(self.alg, &rows).expect("closed monomial sets are subalgebras")
    }

    /// The pencil moving monomial `a` (at `λ = 1`) to `b` (at `λ = 0`).
    fn exchange(&self, mask: Mask, a: usize, b: usize) -> Pencil {
        let mut rows = vec![vec![self.alg.unit()]];
        rows.extend(
            (1..self.alg.dim())
                .filter(|&c| c != a && mask >> c & 1 == 1)
                .map(|c| vec![self.basis_vector(c)]),
        );
        let (ea, eb) = (self.basis_vector(a), self.basis_vector(b));
        let diff: Vec<Scalar> = ea.iter().zip(&eb).map(|(x, y)| x.sub_ref(y)).collect();
        rows.push(vec![eb, diff]);
        Pencil::new(self.alg, rows, self.corank).expect("shape matches corank")
    }

    fn neighbours(&self, mask: Mask) -> Vec<(Mask, usize, usize)> {
        let dim = self.alg.dim();
        let mut out = Vec::new();
        for a in (1..dim).filter(|&a| mask >> a & 1 == 1) {
            for b in (1..dim).filter(|&b| mask >> b & 1 == 0) {
                let next = (mask & !(1 << a)) | (1 << b);
                if self.closed(next) && self.exchange(mask, a, b).check(&self.samples).is_ok() {
                    out.push((next, a, b));
                }
            }
        }
        out
    }
}

fn mask_of(r: &Subalgebra) -> Mask {
    r.contained_monomials().iter().fold(0, |m, &b| m | 1 << b)
}

/// Builds and re-verifies a certificate joining `r` to a partition
/// singularity point, or reports why none was found.
pub fn connect_to_partition_point(
    r: &Subalgebra,
    weights: Option<&[u64]>,
) -> Result<ConnectOutcome> {
    connect_with_cap(r, weights, DEFAULT_STATE_CAP)
}

pub fn connect_with_cap(
    r: &Subalgebra,
    weights: Option<&[u64]>,
    state_cap: usize,
) -> Result<ConnectOutcome> {
    let alg = r.ambient();
    if alg.kind() != AlgebraKind::Plus {
        return Err(Error::KindMismatch { expected: "plus" });
    }
    if alg.dim() > Mask::BITS as usize {
        return Err(Error::Unsupported(format!(
            "path search handles at most {} basis elements",
            Mask::BITS
        )));
    }
    let samples = default_samples(alg.field(), alg.dim());
    let ones = vec![1; alg.branches()];
    let weights = weights.unwrap_or(&ones);
    check_weights(r, weights)?;

    let mut steps = Vec::new();
    let mut current = r.clone();
    for w in [weights.to_vec(), tie_break_weights(alg.conductances())] {
        if current.is_monomial() {
            break;
        }
        match degeneration_pencil(&current, &w) {
            Ok(Some(pencil)) => steps.push(PathStep {
                pencil,
                samples: samples.clone(),
            }),
            Ok(None) => {}
            Err(Error::InvalidPencil(why)) => {
                return Ok(ConnectOutcome::Failed {
                    reason: format!("degeneration along weights {w:?} failed: {why}"),
                    visited: vec![current],
                });
            }
            Err(e) => return Err(e),
        }
        current = initial_subalgebra(&current, &w)?;
    }
    if !current.is_monomial() {
        return Ok(ConnectOutcome::Failed {
            reason: "degenerations did not reach a monomial subalgebra".into(),
            visited: vec![current],
        });
    }

    let graph = MonomialGraph {
        alg,
        samples: samples.clone(),
        corank: r.corank(),
    };
    let start = mask_of(&current);
    let mut parent: HashMap<Mask, Option<(Mask, usize, usize)>> = HashMap::from([(start, None)]);
    let mut order = vec![start];
    let mut frontier = VecDeque::from([start]);
    let mut found = graph.is_target(start).then_some(start);
    while found.is_none() && !frontier.is_empty() && parent.len() < state_cap {
        let level: Vec<Mask> = frontier.drain(..).collect();
        let expanded: Vec<Vec<(Mask, usize, usize)>> =
            level.par_iter().map(|&m| graph.neighbours(m)).collect();
        'level: for (&from, edges) in level.iter().zip(expanded) {
            for (next, a, b) in edges {
                if parent.contains_key(&next) {
                    continue;
                }
                parent.insert(next, Some((from, a, b)));
                order.push(next);
                frontier.push_back(next);
                if graph.is_target(next) {
                    found = Some(next);
                    break 'level;
                }
            }
        }
    }
    let Some(target) = found else {
        let reason = if parent.len() >= state_cap {
            format!("search stopped after {} monomial subalgebras", parent.len())
        } else {
            "monomial graph exhausted without reaching a partition point".into()
        };
        let mut visited: Vec<Subalgebra> = order.iter().map(|&m| graph.subalgebra(m)).collect();
        visited.sort();
        return Ok(ConnectOutcome::Failed { reason, visited });
    };

    let mut exchanges = Vec::new();
    let mut at = target;
    while let Some(Some((from, a, b))) = parent.get(&at) {
        exchanges.push((*from, *a, *b));
        at = *from;
    }
    for (from, a, b) in exchanges.into_iter().rev() {
        steps.push(PathStep {
            pencil: graph.exchange(from, a, b),
            samples: samples.clone(),
        });
    }
    let end = graph.subalgebra(target);
    debug_assert!(partition_exponents(&end).is_some());
    let cert = PathCertificate {
        start: r.clone(),
        end,
        steps,
    };
    match cert.verify() {
        Ok(()) => Ok(ConnectOutcome::Connected(cert)),
        Err(e) => Ok(ConnectOutcome::Failed {
            reason: format!("assembled certificate does not verify: {e}"),
            visited: Vec::new(),
        }),
    }
}
