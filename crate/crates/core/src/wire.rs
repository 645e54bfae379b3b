//! JSON documents for algebras, subalgebras, decompositions, counting
//! reports and path certificates.
//!
//! Branches and partition blocks are numbered from 1. Scalars are strings:
//! a residue in `0..p` over `F_p`, and `n` or `n/d` over `Q`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraKind, GermAlgebra};
use crate::error::{Error, Result};
use crate::families::{PathCertificate, PathStep, Pencil};
use crate::field::{FieldSpec, Scalar};
use crate::partition::SetPartition;
use crate::subalgebra::Subalgebra;
use crate::territory::{CountingReport, DecomposedPoint, TerritoryIndex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraWire {
    #[serde(rename = "char")]
    pub characteristic: u64,
    #[serde(rename = "cond")]
    pub conductances: Vec<usize>,
    pub kind: AlgebraKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubalgebraWire {
    pub algebra: AlgebraWire,
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexWire {
    pub partition: Vec<Vec<usize>>,
    /// Keyed by the comma-joined block, e.g. `"1,2"`.
    pub genus: BTreeMap<String, usize>,
    pub delta: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartWire {
    pub block: Vec<usize>,
    pub subalgebra: SubalgebraWire,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionWire {
    pub index: IndexWire,
    pub parts: Vec<PartWire>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentWire {
    pub partition: Vec<Vec<usize>>,
    pub genus: BTreeMap<String, usize>,
    /// Product of the factor territory sizes.
    pub count: usize,
    /// Enumerated points decomposing into this component.
    pub observed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportWire {
    pub field: String,
    pub conductances: Vec<usize>,
    pub delta: usize,
    pub total: usize,
    pub components: Vec<ComponentWire>,
    pub identity_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationWire {
    pub algebra: AlgebraWire,
    pub corank: usize,
    pub total: usize,
    pub components: Vec<ComponentWire>,
    pub identity_holds: bool,
    pub points: Vec<SubalgebraWire>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilWire {
    /// `rows[k][d]` is the coefficient vector of `λ^d` in row `k`.
    pub rows: Vec<Vec<Vec<String>>>,
    pub samples: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateWire {
    pub endpoints: Vec<SubalgebraWire>,
    pub pencils: Vec<PencilWire>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectFailureWire {
    pub reason: String,
    pub visited: Vec<SubalgebraWire>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothCheckWire {
    pub field: String,
    pub n: Vec<usize>,
    pub x: Vec<Vec<String>>,
    pub cuts: Vec<usize>,
    pub fiber_coranks: Vec<usize>,
    pub expected_corank: usize,
    pub flat: bool,
    pub germ: SubalgebraWire,
    pub germ_record: crate::invariants::SingularityRecord,
}

fn wire_err(msg: impl Into<String>) -> Error {
    Error::Wire(msg.into())
}

pub fn scalars_to_wire(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::to_string).collect()
}

pub fn scalars_from_wire(field: FieldSpec, v: &[String]) -> Result<Vec<Scalar>> {
    v.iter().map(|s| field.parse(s)).collect()
}

fn one_based(blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    blocks
        .iter()
        .map(|b| b.iter().map(|i| i + 1).collect())
        .collect()
}

fn zero_based(blocks: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    blocks
        .iter()
        .map(|b| {
            b.iter()
                .map(|&i| {
                    i.checked_sub(1)
                        .ok_or_else(|| wire_err("branch numbers start at 1"))
                })
                .collect()
        })
        .collect()
}

fn block_key(block: &[usize]) -> String {
    block
        .iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn genus_map(index: &TerritoryIndex) -> BTreeMap<String, usize> {
    index
        .partition
        .blocks()
        .iter()
        .zip(&index.genus)
        .map(|(b, &g)| (block_key(b), g))
        .collect()
}

impl AlgebraWire {
    pub fn from_algebra(a: &GermAlgebra) -> Self {
        AlgebraWire {
            characteristic: a.field().characteristic(),
            conductances: a.conductances().to_vec(),
            kind: a.kind(),
        }
    }

    pub fn to_algebra(&self) -> Result<GermAlgebra> {
        GermAlgebra::new(
            FieldSpec::new(self.characteristic)?,
            &self.conductances,
            self.kind,
        )
    }
}

impl SubalgebraWire {
    pub fn from_subalgebra(r: &Subalgebra) -> Self {
        SubalgebraWire {
            algebra: AlgebraWire::from_algebra(r.ambient()),
            basis: r.basis().iter().map(|v| scalars_to_wire(v)).collect(),
        }
    }

    pub fn to_subalgebra(&self) -> Result<Subalgebra> {
        self.to_subalgebra_in(&Arc::new(self.algebra.to_algebra()?))
    }

    /// Reads the basis inside an existing ambient, which must match.
    pub fn to_subalgebra_in(&self, ambient: &Arc<GermAlgebra>) -> Result<Subalgebra> {
        if AlgebraWire::from_algebra(ambient) != self.algebra {
            return Err(Error::AmbientMismatch);
        }
        let rows = self
            .basis
            .iter()
            .map(|r| scalars_from_wire(ambient.field(), r))
            .collect::<Result<Vec<_>>>()?;
        Subalgebra::from_rows(ambient, &rows)
    }
}

impl IndexWire {
    pub fn from_index(index: &TerritoryIndex) -> Self {
        IndexWire {
            partition: one_based(index.partition.blocks()),
            genus: genus_map(index),
            delta: index.delta(),
        }
    }

    pub fn to_index(&self, branches: usize) -> Result<TerritoryIndex> {
        let partition = SetPartition::new(branches, zero_based(&self.partition)?)?;
        let genus = partition
            .blocks()
            .iter()
            .map(|b| {
                self.genus
                    .get(&block_key(b))
                    .copied()
                    .ok_or_else(|| wire_err(format!("no genus for block {}", block_key(b))))
            })
            .collect::<Result<Vec<_>>>()?;
        if self.genus.len() != genus.len() {
            return Err(wire_err("genus map has keys that are not blocks"));
        }
        let index = TerritoryIndex::new(partition, genus)?;
        if index.delta() != self.delta {
            return Err(wire_err(format!(
                "index equation gives {} but delta is {}",
                index.delta(),
                self.delta
            )));
        }
        Ok(index)
    }
}

impl DecompositionWire {
    pub fn from_point(p: &DecomposedPoint) -> Self {
        DecompositionWire {
            index: IndexWire::from_index(&p.index),
            parts: p
                .index
                .partition
                .blocks()
                .iter()
                .zip(&p.parts)
                .map(|(b, s)| PartWire {
                    block: b.iter().map(|i| i + 1).collect(),
                    subalgebra: SubalgebraWire::from_subalgebra(s),
                })
                .collect(),
        }
    }

    pub fn to_point(&self) -> Result<DecomposedPoint> {
        let branches = self.index.partition.iter().map(Vec::len).sum();
        let index = self.index.to_index(branches)?;
        if self.parts.len() != index.partition.len() {
            return Err(wire_err("one part per block is required"));
        }
        let mut parts = Vec::with_capacity(self.parts.len());
        for (part, block) in self.parts.iter().zip(index.partition.blocks()) {
            if zero_based(std::slice::from_ref(&part.block))?[0] != *block {
                return Err(wire_err("parts must follow the block order"));
            }
            parts.push(part.subalgebra.to_subalgebra()?);
        }
        Ok(DecomposedPoint { index, parts })
    }
}

impl ReportWire {
    pub fn from_report(r: &CountingReport) -> Self {
        ReportWire {
            field: r.field.to_string(),
            conductances: r.conductances.clone(),
            delta: r.delta,
            total: r.total,
            components: r
                .components
                .iter()
                .map(|c| ComponentWire {
                    partition: one_based(c.index.partition.blocks()),
                    genus: genus_map(&c.index),
                    count: c.predicted,
                    observed: c.observed,
                })
                .collect(),
            identity_holds: r.identity_holds,
        }
    }
}

impl PencilWire {
    pub fn from_step(step: &PathStep) -> Self {
        PencilWire {
            rows: step
                .pencil
                .rows()
                .iter()
                .map(|row| row.iter().map(|v| scalars_to_wire(v)).collect())
                .collect(),
            samples: scalars_to_wire(&step.samples),
        }
    }

    pub fn to_step(&self, ambient: &Arc<GermAlgebra>, corank: usize) -> Result<PathStep> {
        let field = ambient.field();
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|v| scalars_from_wire(field, v)).collect())
            .collect::<Result<Vec<_>>>()?;
        Ok(PathStep {
            pencil: Pencil::new(ambient, rows, corank)?,
            samples: scalars_from_wire(field, &self.samples)?,
        })
    }
}

impl CertificateWire {
    pub fn from_certificate(c: &PathCertificate) -> Self {
        CertificateWire {
            endpoints: vec![
                SubalgebraWire::from_subalgebra(&c.start),
                SubalgebraWire::from_subalgebra(&c.end),
            ],
            pencils: c.steps.iter().map(PencilWire::from_step).collect(),
        }
    }

    /// Parses without verifying; call [`PathCertificate::verify`] next.
    pub fn to_certificate(&self) -> Result<PathCertificate> {
        let [start, end] = self.endpoints.as_slice() else {
            return Err(wire_err("a certificate has exactly two endpoints"));
        };
        let ambient = Arc::new(start.algebra.to_algebra()?);
        let start = start.to_subalgebra_in(&ambient)?;
        let end = end.to_subalgebra_in(&ambient)?;
        let steps = self
            .pencils
            .iter()
            .map(|p| p.to_step(&ambient, start.corank()))
            .collect::<Result<Vec<_>>>()?;
        Ok(PathCertificate { start, end, steps })
    }
}
