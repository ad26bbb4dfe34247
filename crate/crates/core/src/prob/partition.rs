//! Set partitions of `{0, .., n-1}`, standing in for sub-sigma-algebras of a
//! finite discrete space.
//!
//! Blocks are kept in canonical form: ordered by their least element, indices
//! ascending within a block. Two partitions are structurally equal iff they
//! generate the same sigma-algebra.
//!
//! The order convention follows sigma-algebra inclusion: `P.refines(&Q)`
//! means every block of `P` lies inside a block of `Q`, i.e. `σ(Q) ⊆ σ(P)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::prob::ProbSpace;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    labels: Vec<usize>,
}

impl Partition {
    /// Builds from arbitrary block labels, one per outcome.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut relabel = std::collections::HashMap::new();
        let mut canon = Vec::with_capacity(labels.len());
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (x, l) in labels.iter().enumerate() {
            let next = relabel.len();
            let b = *relabel.entry(*l).or_insert(next);
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(x);
            canon.push(b);
        }
        Partition {
            blocks,
            labels: canon,
        }
    }

    /// Validates and canonicalizes an explicit list of blocks.
    pub fn from_blocks(parent_size: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut labels = vec![usize::MAX; parent_size];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &x in block {
                if x >= parent_size {
                    return Err(Error::InvalidPartition(format!(
                        "outcome {x} out of range 0..{parent_size}"
                    )));
                }
                if labels[x] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "outcome {x} appears in two blocks"
                    )));
                }
                labels[x] = b;
            }
        }
        if let Some(x) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidPartition(format!("outcome {x} not covered")));
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn trivial(n: usize) -> Self {
        Self::from_labels(&vec![0; n])
    }

    /// Level `level` of the dyadic filtration on `2^levels` atoms: blocks are
    /// consecutive runs of `2^(levels - level)` atoms.
    pub fn dyadic(levels: u32, level: u32) -> Self {
        assert!(level <= levels);
        let n = 1usize << levels;
        let width = 1usize << (levels - level);
        Self::from_labels(&(0..n).map(|x| x / width).collect::<Vec<_>>())
    }

    pub fn parent_size(&self) -> usize {
        self.labels.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Canonical block index of outcome `x`.
    pub fn block_of(&self, x: usize) -> usize {
        self.labels[x]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.labels.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.len() == 1
    }

    fn ensure_size(&self, other: &Partition) -> Result<()> {
        if self.parent_size() != other.parent_size() {
            return Err(Error::SizeMismatch {
                expected: self.parent_size(),
                found: other.parent_size(),
            });
        }
        Ok(())
    }

    /// Every block of `self` is contained in a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        if self.parent_size() != other.parent_size() {
            return false;
        }
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&x| other.labels[x] == other.labels[b[0]]))
    }

    /// Common refinement (the sigma-algebra generated by both).
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        self.ensure_size(other)?;
        let width = other.num_blocks();
        let labels: Vec<usize> = (0..self.parent_size())
            .map(|x| self.labels[x] * width + other.labels[x])
            .collect();
        Ok(Self::from_labels(&labels))
    }

    /// Finest common coarsening (intersection of the sigma-algebras).
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        self.ensure_size(other)?;
        let n = self.parent_size();
        let mut uf = UnionFind::new(n);
        for b in self.blocks.iter().chain(other.blocks.iter()) {
            for w in b.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let labels: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
        Ok(Self::from_labels(&labels))
    }

    /// Null-set completion: every outcome of weight zero becomes a singleton.
    pub fn complete<S: Scalar>(&self, space: &ProbSpace<S>) -> Result<Partition> {
        if space.size() != self.parent_size() {
            return Err(Error::SizeMismatch {
                expected: self.parent_size(),
                found: space.size(),
            });
        }
        let n = self.parent_size();
        let labels: Vec<usize> = (0..n)
            .map(|x| {
                if space.is_supported(x) {
                    self.labels[x]
                } else {
                    n + x
                }
            })
            .collect();
        Ok(Self::from_labels(&labels))
    }

    /// All partitions of an `n`-set, in restricted-growth-string order.
    pub fn enumerate(n: usize) -> PartitionIter {
        PartitionIter {
            rgs: vec![0; n],
            maxes: vec![0; n],
            done: false,
        }
    }

    /// Number of partitions of an `n`-set.
    pub fn bell(n: usize) -> u64 {
        let mut row = vec![1u64];
        for _ in 0..n {
            let mut next = vec![*row.last().unwrap()];
            for v in &row {
                let last = *next.last().unwrap();
                next.push(last + v);
            }
            row = next;
        }
        row[0]
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

pub fn join_partitions(p: &Partition, q: &Partition) -> Result<Partition> {
    p.join(q)
}

pub fn meet_partitions(p: &Partition, q: &Partition) -> Result<Partition> {
    p.meet(q)
}

pub fn complete_partition<S: Scalar>(p: &Partition, space: &ProbSpace<S>) -> Result<Partition> {
    p.complete(space)
}

/// Restricted growth strings enumerate set partitions without repetition.
pub struct PartitionIter {
    rgs: Vec<usize>,
    maxes: Vec<usize>,
    done: bool,
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let n = self.rgs.len();
        if n == 0 {
            self.done = true;
            return Some(Partition::from_labels(&[]));
        }
        let out = Partition::from_labels(&self.rgs);
        // maxes[i] = max(rgs[0..i]) so rgs[i] may grow up to maxes[i] + 1.
        let mut i = n - 1;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            if self.rgs[i] <= self.maxes[i] {
                self.rgs[i] += 1;
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.maxes[j] = self.maxes[j - 1].max(self.rgs[j - 1]);
                }
                break;
            }
            i -= 1;
        }
        Some(out)
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
