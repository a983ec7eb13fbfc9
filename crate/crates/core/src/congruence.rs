//! Semilattice congruences: generated congruences by union-find closure and
//! quotients with their natural surjections.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::structure::{FiniteStructure, Matrix, StructureClass, Table};

/// A partition of `0..len` into blocks, numbered by their least member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Congruence {
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Congruence {
    pub fn identity(len: usize) -> Self {
        Self::from_labels(&(0..len).collect::<Vec<_>>())
    }

    /// Partition whose blocks are the fibres of `labels`.
    pub fn from_labels<T: Eq + std::hash::Hash>(labels: &[T]) -> Self {
        let mut first: std::collections::HashMap<&T, usize> = Default::default();
        let mut block_of = Vec::with_capacity(labels.len());
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            let b = *first.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(i);
            block_of.push(b);
        }
        Congruence { block_of, blocks }
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    /// Whether `a ~ b` implies `a ∧ c ~ b ∧ c` for every `c`.
    pub fn is_compatible(&self, s: &FiniteStructure) -> bool {
        let n = s.len();
        self.blocks.iter().all(|block| {
            block.windows(2).all(|w| (0..n).all(|c| self.related(s.meet(w[0], c), s.meet(w[1], c))))
        })
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Least congruence containing `pairs` on a semilattice of `len` elements
/// whose meet is given by `meet`. Each merged pair `(a, b)` schedules
/// `(a ∧ c, b ∧ c)` for every `c` until nothing changes.
pub fn close_under_meet(
    len: usize,
    meet: impl Fn(usize, usize) -> usize,
    pairs: impl IntoIterator<Item = (usize, usize)>,
) -> Congruence {
    let mut uf = UnionFind::new(len);
    let mut queue: VecDeque<(usize, usize)> = pairs.into_iter().collect();
    while let Some((a, b)) = queue.pop_front() {
        if uf.union(a, b) {
            for c in 0..len {
                let (x, y) = (meet(a, c), meet(b, c));
                if x != y {
                    queue.push_back((x, y));
                }
            }
        }
    }
    let roots: Vec<usize> = (0..len).map(|x| uf.find(x)).collect();
    Congruence::from_labels(&roots)
}

pub fn congruence_generated(s: &FiniteStructure, pairs: &[(usize, usize)]) -> Result<Congruence> {
    require_semilattice(s)?;
    for &(a, b) in pairs {
        if a >= s.len() || b >= s.len() {
            return Err(Error::Malformed(format!("pair ({a}, {b}) is outside the carrier")));
        }
    }
    Ok(close_under_meet(s.len(), |a, b| s.meet(a, b), pairs.iter().copied()))
}

fn require_semilattice(s: &FiniteStructure) -> Result<()> {
    if s.class() != StructureClass::Semilattice {
        return Err(Error::ClassMismatch {
            expected: StructureClass::Semilattice,
            found: s.class(),
        });
    }
    Ok(())
}

/// Meet table of `s/c` over block numbers; fails with the witnessing pair
/// if the blockwise meet is ill-defined.
pub(crate) fn quotient_table(len: usize, meet: impl Fn(usize, usize) -> usize, c: &Congruence) -> Result<Matrix<usize>> {
    if c.len() != len {
        return Err(Error::Precondition(format!(
            "congruence covers {} elements but the structure has {len}",
            c.len()
        )));
    }
    let k = c.blocks().len();
    let reps: Vec<usize> = c.blocks().iter().map(|b| b[0]).collect();
    let table = Matrix::from_fn(k, |i, j| c.block_of(meet(reps[i], reps[j])));
    for (bi, block) in c.blocks().iter().enumerate() {
        for &a in block {
            for (bj, other) in c.blocks().iter().enumerate() {
                for &b in other {
                    if c.block_of(meet(a, b)) != *table.get(bi, bj) {
                        return Err(Error::Internal(format!(
                            "meet is not well defined on blocks: {a} ∧ {b} leaves block {}",
                            table.get(bi, bj)
                        )));
                    }
                }
            }
        }
    }
    Ok(table)
}

/// `s/c` with blocks named after their least member, and `ν: s → s/c`.
pub fn quotient(s: &Arc<FiniteStructure>, c: &Congruence) -> Result<(Arc<FiniteStructure>, Morphism)> {
    require_semilattice(s)?;
    let table = quotient_table(s.len(), |a, b| s.meet(a, b), c)?;
    let names = c.blocks().iter().map(|b| s.name(b[0]).to_string()).collect();
    let q = Arc::new(FiniteStructure::checked(names, Table::Semilattice(table))?);
    let nu = Morphism::new(s.clone(), q.clone(), (0..s.len()).map(|x| c.block_of(x)).collect())?;
    if !nu.kind().is_surjection() {
        return Err(Error::Internal("natural map onto a quotient is not a surjective homomorphism".into()));
    }
    Ok((q, nu))
}

/// Every congruence of `s`, by brute force over all partitions. Only for
/// small structures.
pub fn all_congruences(s: &FiniteStructure) -> Vec<Congruence> {
    let n = s.len();
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn go(k: usize, max: usize, labels: &mut Vec<usize>, s: &FiniteStructure, out: &mut Vec<Congruence>) {
        if k == labels.len() {
            let c = Congruence::from_labels(labels);
            if c.is_compatible(s) {
                out.push(c);
            }
            return;
        }
        for l in 0..=max {
            labels[k] = l;
            go(k + 1, max.max(l + 1), labels, s, out);
        }
    }
    if n > 0 {
        go(1, 1, &mut labels, s, &mut out);
    }
    out
}
