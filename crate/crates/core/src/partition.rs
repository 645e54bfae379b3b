//! Set partitions of `{0, .., m-1}` in canonical form.

use std::fmt;

use crate::error::{Error, Result};

/// Blocks are sorted internally and ordered by their least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    size: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(size: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; size];
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &i in b {
                if i >= size {
                    return Err(Error::InvalidPartition(format!("element {i} out of range")));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidPartition(format!("element {i} repeated")));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("element {i} missing")));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { size, blocks })
    }

    /// Partition from a restricted growth string `a` with `a[0] = 0` and
    /// `a[i] <= 1 + max(a[..i])`.
    pub fn from_rgs(rgs: &[usize]) -> Result<Self> {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &label) in rgs.iter().enumerate() {
            if label > blocks.len() {
                return Err(Error::InvalidPartition(format!(
                    "restricted growth violated at position {i}"
                )));
            }
            if label == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[label].push(i);
        }
        Ok(SetPartition {
            size: rgs.len(),
            blocks,
        })
    }

    pub fn single_block(size: usize) -> Self {
        SetPartition {
            size,
            blocks: if size == 0 {
                vec![]
            } else {
                vec![(0..size).collect()]
            },
        }
    }

    pub fn discrete(size: usize) -> Self {
        SetPartition {
            size,
            blocks: (0..size).map(|i| vec![i]).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, i: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&i))
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.block_of(i).is_some() && self.block_of(i) == self.block_of(j)
    }

    pub fn rgs(&self) -> Vec<usize> {
        let mut a = vec![0; self.size];
        for (label, b) in self.blocks.iter().enumerate() {
            for &i in b {
                a[i] = label;
            }
        }
        a
    }

    /// All partitions of `{0, .., size-1}` in lexicographic restricted
    /// growth string order.
    pub fn all(size: usize) -> Vec<SetPartition> {
        let mut out = Vec::new();
        if size == 0 {
            out.push(SetPartition {
                size: 0,
                blocks: vec![],
            });
            return out;
        }
        let mut rgs = vec![0usize; size];
        grow(&mut rgs, 1, 0, &mut out);
        out
    }
}

fn grow(rgs: &mut [usize], pos: usize, max: usize, out: &mut Vec<SetPartition>) {
    if pos == rgs.len() {
        out.push(SetPartition::from_rgs(rgs).expect("valid growth string"));
        return;
    }
    for label in 0..=max + 1 {
        rgs[pos] = label;
        grow(rgs, pos + 1, max.max(label), out);
    }
}

impl fmt::Display for SetPartition {
    /// 1-based, e.g. `{1,2}{3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            write!(f, "{{")?;
            for (k, i) in b.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", i + 1)?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}
