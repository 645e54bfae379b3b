//! Points of territories: the product decomposition of a subalgebra of
//! `A(c)` along the idempotents it contains, the inverse assembly, and
//! exhaustive enumeration over finite fields.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{AlgebraKind, GermAlgebra};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{rref, Subspace};
use crate::partition::SetPartition;
use crate::subalgebra::{verify, Subalgebra};

/// Default cap on the number of candidate subspaces scanned by [`enumerate`].
pub const DEFAULT_MAX_CANDIDATES: u64 = 10_000_000;

/// Which branches are glued together, and with what genus each glued point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TerritoryIndex {
    pub partition: SetPartition,
    /// Genus of the point obtained from each block, in block order.
    pub genus: Vec<usize>,
}

impl TerritoryIndex {
    pub fn new(partition: SetPartition, genus: Vec<usize>) -> Result<Self> {
        if genus.len() != partition.len() {
            return Err(Error::TerritoryMismatch(format!(
                "{} genus values for {} blocks",
                genus.len(),
                partition.len()
            )));
        }
        Ok(TerritoryIndex { partition, genus })
    }

    /// `sum_P (g(P) + |P| - 1)`.
    pub fn delta(&self) -> usize {
        self.partition
            .blocks()
            .iter()
            .zip(&self.genus)
            .map(|(b, g)| g + b.len() - 1)
            .sum()
    }
}

/// A point of `Ter^delta_{A(c)}` split into one local point per block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecomposedPoint {
    pub index: TerritoryIndex,
    /// `parts[k]` is a subalgebra of `A+(c|_P)` for the `k`-th block `P`.
    pub parts: Vec<Subalgebra>,
}

fn restricted_conductances(cond: &[usize], block: &[usize]) -> Vec<usize> {
    block.iter().map(|&i| cond[i]).collect()
}

/// Splits `r ⊆ A(c)` as `prod_P r·1_P` with each factor read inside `A+(c|_P)`.
pub fn decompose(r: &Subalgebra) -> Result<DecomposedPoint> {
    let alg = r.ambient();
    if alg.kind() != AlgebraKind::Full {
        return Err(Error::KindMismatch { expected: "full" });
    }
    let partition = r.constants_partition()?;
    let mut parts = Vec::with_capacity(partition.len());
    let mut genus = Vec::with_capacity(partition.len());
    for block in partition.blocks() {
        let cond = restricted_conductances(alg.conductances(), block);
        let plus = Arc::new(GermAlgebra::plus(alg.field(), &cond)?);
        let coords = alg.block_coordinates(block);
        let mut rows = Vec::with_capacity(r.rank());
        for b in r.basis() {
            let local: Vec<Scalar> = coords.iter().map(|&c| b[c].clone()).collect();
            let v = plus.restrict_to_plus(&local)?.ok_or_else(|| {
                Error::InvariantViolation(format!(
                    "factor for block {block:?} has unequal constant terms"
                ))
            })?;
            rows.push(v);
        }
        let span = rref(alg.field(), plus.dim(), &rows)?;
        let part = Subalgebra::from_subspace(&plus, span)
            .map_err(|e| Error::InvariantViolation(format!("factor is not a subalgebra: {e}")))?;
        genus.push(part.corank());
        parts.push(part);
    }
    let index = TerritoryIndex { partition, genus };
    if index.delta() != r.corank() {
        return Err(Error::InvariantViolation(format!(
            "index equation gives {} but corank is {}",
            index.delta(),
            r.corank()
        )));
    }
    Ok(DecomposedPoint { index, parts })
}

/// Inverse of [`decompose`]: the product of the parts inside `A(c)`.
pub fn assemble(
    ambient: &Arc<GermAlgebra>,
    index: &TerritoryIndex,
    parts: &[Subalgebra],
) -> Result<Subalgebra> {
    if ambient.kind() != AlgebraKind::Full {
        return Err(Error::KindMismatch { expected: "full" });
    }
    let blocks = index.partition.blocks();
    if index.partition.size() != ambient.branches() {
        return Err(Error::TerritoryMismatch(format!(
            "partition of {} branches for an algebra with {}",
            index.partition.size(),
            ambient.branches()
        )));
    }
    if parts.len() != blocks.len() || index.genus.len() != blocks.len() {
        return Err(Error::TerritoryMismatch(format!(
            "{} parts for {} blocks",
            parts.len(),
            blocks.len()
        )));
    }
    let mut rows = Vec::new();
    for ((block, part), &g) in blocks.iter().zip(parts).zip(&index.genus) {
        let palg = part.ambient();
        let label = SetPartition::new(ambient.branches(), vec![block.clone()])
            .map(|p| p.to_string())
            .unwrap_or_else(|_| format!("{block:?}"));
        if palg.kind() != AlgebraKind::Plus
            || palg.field() != ambient.field()
            || palg.conductances() != restricted_conductances(ambient.conductances(), block)
        {
            return Err(Error::TerritoryMismatch(format!(
                "part for block {label} does not live in A+(c|_P)"
            )));
        }
        if !part.is_local()? {
            return Err(Error::TerritoryMismatch(format!(
                "part for block {label} is not local"
            )));
        }
        if part.corank() != g {
            return Err(Error::TerritoryMismatch(format!(
                "part for block {label} has corank {} but genus {g} was requested",
                part.corank()
            )));
        }
        let coords = ambient.block_coordinates(block);
        for b in part.basis() {
            let local = palg.embed_unchecked(b);
            let mut v = ambient.zero();
            for (&c, x) in coords.iter().zip(local) {
                v[c] = x;
            }
            rows.push(v);
        }
    }
    Subalgebra::from_rows(ambient, &rows)
}

/// Number of `k`-dimensional subspaces of `F_q^n`, saturating at `u128::MAX`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        let a = q.checked_pow((n - i) as u32).map(|x| x - 1);
        let b = q.checked_pow((i + 1) as u32).map(|x| x - 1);
        match (
            a.and_then(|a| num.checked_mul(a)),
            b.and_then(|b| den.checked_mul(b)),
        ) {
            (Some(x), Some(y)) => {
                num = x;
                den = y;
            }
            _ => return u128::MAX,
        }
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Candidate subspaces [`enumerate`] scans for this ambient and corank.
pub fn candidate_count(alg: &GermAlgebra, corank: usize) -> Result<u128> {
    let q = alg
        .field()
        .order()
        .ok_or_else(|| Error::Unsupported("enumeration needs a finite field".into()))?;
    let dim = alg.dim();
    if corank >= dim {
        return Ok(0);
    }
    Ok(gaussian_binomial(dim - 1, dim - 1 - corank, q))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// All unital subalgebras of corank `corank` in `alg`, over a finite field,
/// sorted canonically.
///
/// A subspace `S` containing the unit is determined by `S ∩ U`, where `U`
/// is spanned by every basis vector except the first (the unit has a
/// nonzero first coordinate). The scan walks the reduced echelon matrices
/// of `(dim S - 1)`-dimensional subspaces of `U`, one pivot pattern per
/// parallel task.
pub fn enumerate(
    alg: &Arc<GermAlgebra>,
    corank: usize,
    max_candidates: u64,
) -> Result<Vec<Subalgebra>> {
    let field = alg.field();
    let elements = field
        .elements()
        .ok_or_else(|| Error::Unsupported("enumeration needs a finite field".into()))?;
    let candidates = candidate_count(alg, corank)?;
    if candidates > max_candidates as u128 {
        return Err(Error::WorkBoundExceeded {
            candidates,
            bound: max_candidates,
        });
    }
    let dim = alg.dim();
    if corank >= dim {
        return Ok(Vec::new());
    }
    let rows_needed = dim - 1 - corank;
    // columns of U are 1..dim
    let patterns = combinations(dim - 1, rows_needed);
    let mut found: Vec<Subalgebra> = patterns
        .par_iter()
        .flat_map_iter(|pattern| scan_pattern(alg, field, &elements, pattern))
        .collect();
    found.sort();
    Ok(found)
}

fn scan_pattern(
    alg: &Arc<GermAlgebra>,
    field: FieldSpec,
    elements: &[Scalar],
    pattern: &[usize],
) -> Vec<Subalgebra> {
    let dim = alg.dim();
    let pivots: Vec<usize> = pattern.iter().map(|&p| p + 1).collect();
    // free slots (row, column): columns right of the row pivot that are not pivots
    let free: Vec<(usize, usize)> = pivots
        .iter()
        .enumerate()
        .flat_map(|(r, &p)| {
            let pivots = &pivots;
            (p + 1..dim)
                .filter(move |c| !pivots.contains(c))
                .map(move |c| (r, c))
        })
        .collect();
    let q = elements.len();
    let mut digits = vec![0usize; free.len()];
    let mut out = Vec::new();
    let unit = alg.unit();
    loop {
        let mut rows: Vec<Vec<Scalar>> = pivots
            .iter()
            .map(|&p| {
                let mut v = vec![field.zero(); dim];
                v[p] = field.one();
                v
            })
            .collect();
        for (&(r, c), &d) in free.iter().zip(&digits) {
            rows[r][c] = elements[d].clone();
        }
        rows.push(unit.clone());
        let span = Subspace::from_checked_rows(field, dim, rows);
        if verify(alg, &span) {
            out.push(Subalgebra::from_verified(Arc::clone(alg), span));
        }
        // odometer
        let mut k = 0;
        loop {
            if k == digits.len() {
                return out;
            }
            digits[k] += 1;
            if digits[k] < q {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// All indices `(P, g)` with `sum_P (g(P) + |P| - 1) = delta`, partitions in
/// restricted growth order and genus functions lexicographic.
pub fn component_indices(branches: usize, delta: usize) -> Vec<TerritoryIndex> {
    let mut out = Vec::new();
    for partition in SetPartition::all(branches) {
        let glued = branches - partition.len();
        if glued > delta {
            continue;
        }
        let total = delta - glued;
        let mut genus = vec![0; partition.len()];
        compositions(total, 0, &mut genus, &mut |g| {
            out.push(TerritoryIndex {
                partition: partition.clone(),
                genus: g.to_vec(),
            })
        });
    }
    out
}

fn compositions(remaining: usize, pos: usize, cur: &mut [usize], emit: &mut dyn FnMut(&[usize])) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        emit(cur);
        return;
    }
    if cur.is_empty() {
        if remaining == 0 {
            emit(cur);
        }
        return;
    }
    for g in 0..=remaining {
        cur[pos] = g;
        compositions(remaining - g, pos + 1, cur, emit);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentCount {
    pub index: TerritoryIndex,
    /// Product of the factor territory sizes.
    pub predicted: usize,
    /// Brute-force points of `A(c)` that decompose into this index.
    pub observed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingReport {
    pub field: FieldSpec,
    pub conductances: Vec<usize>,
    pub delta: usize,
    pub total: usize,
    pub components: Vec<ComponentCount>,
    pub identity_holds: bool,
}

impl CountingReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &ComponentCount> {
        self.components.iter().filter(|c| c.predicted != c.observed)
    }
}

/// Compares `|Ter^delta_{A(c)}(F_q)|` with the sum over indices of the
/// products `prod_P |Ter^{g(P)}_{A+(c|_P)}(F_q)|`, and checks that every
/// enumerated point decomposes into the component it is counted in.
pub fn check_counting_identity(
    field: FieldSpec,
    conductances: &[usize],
    delta: usize,
    max_candidates: u64,
) -> Result<CountingReport> {
    let alg = Arc::new(GermAlgebra::full(field, conductances)?);
    let points = enumerate(&alg, delta, max_candidates)?;
    let indices = component_indices(alg.branches(), delta);

    let mut factor_sizes: HashMap<(Vec<usize>, usize), usize> = HashMap::new();
    let mut components = Vec::with_capacity(indices.len());
    for index in indices {
        let mut predicted = 1usize;
        for (block, &g) in index.partition.blocks().iter().zip(&index.genus) {
            let cond = restricted_conductances(conductances, block);
            let key = (cond.clone(), g);
            let size = match factor_sizes.get(&key) {
                Some(&s) => s,
                None => {
                    let plus = Arc::new(GermAlgebra::plus(field, &cond)?);
                    let s = enumerate(&plus, g, max_candidates)?.len();
                    factor_sizes.insert(key, s);
                    s
                }
            };
            predicted *= size;
        }
        components.push(ComponentCount {
            index,
            predicted,
            observed: 0,
        });
    }

    let mut strays = 0usize;
    for p in &points {
        let idx = decompose(p)?.index;
        match components.iter_mut().find(|c| c.index == idx) {
            Some(c) => c.observed += 1,
            None => strays += 1,
        }
    }
    let predicted_total: usize = components.iter().map(|c| c.predicted).sum();
    let identity_holds = strays == 0
        && predicted_total == points.len()
        && components.iter().all(|c| c.predicted == c.observed);
    Ok(CountingReport {
        field,
        conductances: conductances.to_vec(),
        delta,
        total: points.len(),
        components,
        identity_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 1, 2), 3);
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(3, 0, 5), 1);
        assert_eq!(gaussian_binomial(3, 4, 5), 0);
    }

    #[test]
    fn projective_line_of_tacnodes() {
        for p in [2, 3, 5] {
            let a = Arc::new(GermAlgebra::plus(f(p), &[2, 2]).unwrap());
            assert_eq!(
                enumerate(&a, 1, DEFAULT_MAX_CANDIDATES).unwrap().len() as u64,
                p + 1
            );
        }
    }

    #[test]
    fn four_points_of_corank_two() {
        let a = Arc::new(GermAlgebra::full(f(2), &[2, 2]).unwrap());
        assert_eq!(enumerate(&a, 2, DEFAULT_MAX_CANDIDATES).unwrap().len(), 4);
    }

    #[test]
    fn impossible_corank_is_empty() {
        for p in [2, 3] {
            let a = Arc::new(GermAlgebra::plus(f(p), &[1, 1]).unwrap());
            assert!(enumerate(&a, 1, DEFAULT_MAX_CANDIDATES).unwrap().is_empty());
        }
    }

    #[test]
    fn enumeration_refuses_rationals_and_large_work() {
        let a = Arc::new(GermAlgebra::full(FieldSpec::rationals(), &[2]).unwrap());
        assert!(matches!(enumerate(&a, 1, 10), Err(Error::Unsupported(_))));
        let b = Arc::new(GermAlgebra::full(f(3), &[3, 3]).unwrap());
        assert!(matches!(
            enumerate(&b, 3, 5),
            Err(Error::WorkBoundExceeded { bound: 5, .. })
        ));
    }

    #[test]
    fn node_cusp_decomposition() {
        let q = FieldSpec::rationals();
        let a = Arc::new(GermAlgebra::full(q, &[1, 1, 2]).unwrap());
        let e = a.idempotent(&[0, 1]).unwrap();
        let f3 = a.idempotent(&[2]).unwrap();
        let r = Subalgebra::from_rows(&a, &[e, f3]).unwrap();
        let d = decompose(&r).unwrap();
        assert_eq!(
            d.index.partition,
            SetPartition::new(3, vec![vec![0, 1], vec![2]]).unwrap()
        );
        assert_eq!(d.index.genus, vec![0, 1]);
        assert_eq!(d.index.delta(), 2);
        assert_eq!(d.parts[0], Subalgebra::whole(d.parts[0].ambient()));
        assert_eq!(d.parts[1].rank(), 1);
        assert_eq!(assemble(&a, &d.index, &d.parts).unwrap(), r);
    }

    #[test]
    fn tacnode_decomposition() {
        let q = FieldSpec::rationals();
        let a = Arc::new(GermAlgebra::full(q, &[2, 2]).unwrap());
        let g: Vec<_> = a
            .monomial(0, 1)
            .unwrap()
            .iter()
            .zip(&a.monomial(1, 1).unwrap())
            .map(|(x, y)| x + y)
            .collect();
        let tac = Subalgebra::generate(&a, &[g]).unwrap();
        let d = decompose(&tac).unwrap();
        assert_eq!(d.index.partition, SetPartition::single_block(2));
        assert_eq!(d.index.genus, vec![1]);
        let p = d.parts[0].ambient();
        let expect_row: Vec<Scalar> = vec![q.zero(), q.one(), q.one()];
        assert!(d.parts[0].contains(&expect_row).unwrap());
        assert_eq!(assemble(&a, &d.index, &d.parts).unwrap(), tac);
        assert_eq!(p.kind(), AlgebraKind::Plus);
    }

    #[test]
    fn smooth_two_branch_decomposition() {
        let a = Arc::new(GermAlgebra::full(f(2), &[1, 1]).unwrap());
        let d = decompose(&Subalgebra::whole(&a)).unwrap();
        assert_eq!(d.index.partition, SetPartition::discrete(2));
        assert_eq!(d.index.genus, vec![0, 0]);
        assert_eq!(d.index.delta(), 0);
    }

    #[test]
    fn cusp_times_cusp_assembly() {
        let q = FieldSpec::rationals();
        let a = Arc::new(GermAlgebra::full(q, &[2, 2]).unwrap());
        let cusp =
            Subalgebra::generate(&Arc::new(GermAlgebra::plus(q, &[2]).unwrap()), &[]).unwrap();
        let index = TerritoryIndex::new(SetPartition::discrete(2), vec![1, 1]).unwrap();
        let r = assemble(&a, &index, &[cusp.clone(), cusp.clone()]).unwrap();
        assert_eq!(r.corank(), 2);
        assert_eq!(
            r,
            Subalgebra::from_rows(
                &a,
                &[a.idempotent(&[0]).unwrap(), a.idempotent(&[1]).unwrap()]
            )
            .unwrap()
        );
    }

    #[test]
    fn assembly_rejects_wrong_genus_and_shape() {
        let q = FieldSpec::rationals();
        let a = Arc::new(GermAlgebra::full(q, &[2, 2]).unwrap());
        let cusp =
            Subalgebra::generate(&Arc::new(GermAlgebra::plus(q, &[2]).unwrap()), &[]).unwrap();
        let wrong = TerritoryIndex::new(SetPartition::discrete(2), vec![0, 1]).unwrap();
        assert!(matches!(
            assemble(&a, &wrong, &[cusp.clone(), cusp.clone()]),
            Err(Error::TerritoryMismatch(_))
        ));
        let single = TerritoryIndex::new(SetPartition::single_block(2), vec![1]).unwrap();
        assert!(matches!(
            assemble(&a, &single, &[cusp]),
            Err(Error::TerritoryMismatch(_))
        ));
    }

    #[test]
    fn index_enumeration_respects_equation() {
        let idx = component_indices(3, 2);
        assert!(idx.iter().all(|i| i.delta() == 2));
        // {123}: g = 0; {12}{3},{13}{2},{1}{23}: 2 each; {1}{2}{3}: 6
        assert_eq!(idx.len(), 1 + 3 * 2 + 6);
        assert_eq!(idx[0].partition, SetPartition::single_block(3));
    }

    #[test]
    fn counting_identity_small_cases() {
        let r = check_counting_identity(f(2), &[2, 2], 2, DEFAULT_MAX_CANDIDATES).unwrap();
        assert_eq!(r.total, 4);
        assert!(r.identity_holds);
        let r = check_counting_identity(f(2), &[1, 1], 1, DEFAULT_MAX_CANDIDATES).unwrap();
        assert_eq!(r.total, 1);
        assert!(r.identity_holds);
        let r = check_counting_identity(f(3), &[2, 2], 1, DEFAULT_MAX_CANDIDATES).unwrap();
        assert!(r.identity_holds);
        assert_eq!(r.mismatches().count(), 0);
    }
}
