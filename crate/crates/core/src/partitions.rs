//! k-tuples and k-tuple partitions: the index set of every basis.
//!
//! A [`KTuplePartition`] is a multiset of nonzero k-tuples. Parts are stored
//! sorted descending (tuples compare entrywise, left to right), and partitions
//! are totally ordered by length first and then lexicographically on their
//! stored part sequences. Strict refinement of a partition strictly increases
//! its length, so this order makes refinement-based change-of-basis matrices
//! triangular.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::{check_limit, Error, Result};

/// A nonzero tuple of nonnegative integers of fixed length `k >= 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KTuple(Vec<u32>);

impl KTuple {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Invalid("a k-tuple needs k >= 1".into()));
        }
        if entries.iter().all(|&e| e == 0) {
            return Err(Error::Invalid("the zero tuple is not a valid part".into()));
        }
        Ok(KTuple(entries))
    }

    /// The unit tuple with a one in (0-based) position `i`.
    pub fn unit(k: usize, i: usize) -> Self {
        assert!(i < k, "unit index {i} out of range for k = {k}");
        let mut entries = vec![0; k];
        entries[i] = 1;
        KTuple(entries)
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn norm(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise sum.
    pub fn add(&self, other: &KTuple) -> Result<KTuple> {
        same_k(self.k(), other.k())?;
        Ok(KTuple(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    /// `Some(i)` when this is the unit tuple with its one at position `i`.
    pub fn unit_index(&self) -> Option<usize> {
        if self.norm() != 1 {
            return None;
        }
        self.0.iter().position(|&e| e == 1)
    }

    /// Identify the last two coordinates: `(i_1, .., i_{k-1} + i_k)`.
    pub fn fold_last(&self) -> Result<KTuple> {
        let k = self.k();
        if k < 2 {
            return Err(Error::Invalid("cannot fold a 1-tuple".into()));
        }
        let mut entries = self.0[..k - 1].to_vec();
        entries[k - 2] += self.0[k - 1];
        Ok(KTuple(entries))
    }

    /// Append a zero coordinate, embedding a k-tuple into k+1 coordinates.
    pub fn widen(&self) -> KTuple {
        let mut entries = self.0.clone();
        entries.push(0);
        KTuple(entries)
    }
}

impl fmt::Debug for KTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

pub(crate) fn same_k(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::KMismatch { expected, found })
    }
}

/// A multiset of [`KTuple`]s sharing one `k`, kept in canonical (descending) order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KTuplePartition {
    k: usize,
    parts: Vec<KTuple>,
}

impl KTuplePartition {
    pub fn new(k: usize, mut parts: Vec<KTuple>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("k must be positive".into()));
        }
        for p in &parts {
            same_k(k, p.k())?;
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(KTuplePartition { k, parts })
    }

    /// Convenience constructor from raw rows; every row must be a valid k-tuple.
    pub fn from_rows(k: usize, rows: &[&[u32]]) -> Result<Self> {
        let parts = rows
            .iter()
            .map(|r| KTuple::new(r.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, parts)
    }

    pub fn empty(k: usize) -> Self {
        assert!(k > 0);
        KTuplePartition { k, parts: Vec::new() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn parts(&self) -> &[KTuple] {
        &self.parts
    }

    /// Number of parts, `l(λ)`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Componentwise sum of all parts; all zeros for the empty partition.
    pub fn tuple_sum(&self) -> Vec<u32> {
        let mut sum = vec![0u32; self.k];
        for p in &self.parts {
            for (s, e) in sum.iter_mut().zip(p.entries()) {
                *s += e;
            }
        }
        sum
    }

    /// Sum of every entry of every part.
    pub fn norm(&self) -> u32 {
        self.parts.iter().map(KTuple::norm).sum()
    }

    /// Number of parts equal to `alpha`.
    pub fn multiplicity(&self, alpha: &KTuple) -> usize {
        self.parts.iter().filter(|p| *p == alpha).count()
    }

    /// Distinct parts with their multiplicities, in stored order.
    pub fn multiplicities(&self) -> Vec<(&KTuple, usize)> {
        let mut out: Vec<(&KTuple, usize)> = Vec::new();
        for p in &self.parts {
            match out.last_mut() {
                Some((q, n)) if *q == p => *n += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Multiset union of parts.
    pub fn union(&self, other: &KTuplePartition) -> Result<KTuplePartition> {
        same_k(self.k, other.k)?;
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        KTuplePartition::new(self.k, parts)
    }

    /// Apply [`KTuple::fold_last`] to every part.
    pub fn fold_last(&self) -> Result<KTuplePartition> {
        let parts = self.parts.iter().map(KTuple::fold_last).collect::<Result<Vec<_>>>()?;
        KTuplePartition::new(self.k - 1, parts)
    }
}

impl Ord for KTuplePartition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.k
            .cmp(&other.k)
            .then(self.parts.len().cmp(&other.parts.len()))
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for KTuplePartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for KTuplePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p:?}")?;
        }
        f.write_str(")")
    }
}

/// Canonical total order on partitions of the same `k`.
pub fn compare(a: &KTuplePartition, b: &KTuplePartition) -> Result<Ordering> {
    same_k(a.k, b.k)?;
    Ok(a.cmp(b))
}

/// Every k-tuple partition with `tuple_sum == target`, each once, in canonical order.
pub fn enumerate_partitions(target: &[u32], norm_limit: u32) -> Result<Vec<KTuplePartition>> {
    let k = target.len();
    if k == 0 || target.iter().all(|&t| t == 0) {
        return Err(Error::Invalid("target must be a nonzero k-tuple".into()));
    }
    let norm: u32 = target.iter().sum();
    check_limit("partition norm", norm as u64, norm_limit as u64)?;

    let mut out = Vec::new();
    let mut current = Vec::new();
    let remaining = target.to_vec();
    enumerate_rec(&remaining, None, &mut current, &mut out);
    let mut result: Vec<KTuplePartition> = out
        .into_iter()
        .map(|parts| KTuplePartition { k, parts })
        .collect();
    result.sort();
    Ok(result)
}

// Parts are chosen in non-increasing order so each multiset is produced once.
fn enumerate_rec(
    remaining: &[u32],
    max_part: Option<&[u32]>,
    current: &mut Vec<KTuple>,
    out: &mut Vec<Vec<KTuple>>,
) {
    if remaining.iter().all(|&r| r == 0) {
        out.push(current.clone());
        return;
    }
    let k = remaining.len();
    let mut candidate = vec![0u32; k];
    loop {
        // odometer over all tuples <= remaining componentwise
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if candidate[i] < remaining[i] {
                candidate[i] += 1;
                for c in candidate.iter_mut().skip(i + 1) {
                    *c = 0;
                }
                break;
            }
        }
        if let Some(max) = max_part {
            if candidate.as_slice() > max {
                continue;
            }
        }
        let rest: Vec<u32> = remaining.iter().zip(&candidate).map(|(r, c)| r - c).collect();
        current.push(KTuple(candidate.clone()));
        let bound = candidate.clone();
        enumerate_rec(&rest, Some(&bound), current, out);
        current.pop();
    }
}

/// Partition whose parts are the componentwise sums of `parts` over each block.
///
/// `blocks` must partition the index set `0..parts.len()`.
pub fn merge(parts: &[KTuple], blocks: &[Vec<usize>]) -> Result<KTuplePartition> {
    let k = parts
        .first()
        .map(KTuple::k)
        .ok_or_else(|| Error::Invalid("merge needs at least one part".into()))?;
    let mut seen = vec![false; parts.len()];
    let mut merged = Vec::with_capacity(blocks.len());
    for block in blocks {
        if block.is_empty() {
            return Err(Error::Invalid("empty block".into()));
        }
        let mut sum = vec![0u32; k];
        for &i in block {
            if i >= parts.len() || seen[i] {
                return Err(Error::Invalid("blocks do not partition the index set".into()));
            }
            seen[i] = true;
            same_k(k, parts[i].k())?;
            for (s, e) in sum.iter_mut().zip(parts[i].entries()) {
                *s += e;
            }
        }
        merged.push(KTuple(sum));
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Invalid("blocks do not cover the index set".into()));
    }
    KTuplePartition::new(k, merged)
}

/// Calls `f` with the block index of every element, for each set partition of
/// `0..n` (restricted growth strings), together with the number of blocks.
pub(crate) fn for_each_set_partition(n: usize, mut f: impl FnMut(&[usize], usize)) {
    let mut rgs = vec![0usize; n];
    set_partition_rec(0, 0, &mut rgs, &mut f);
}

fn set_partition_rec(i: usize, blocks: usize, rgs: &mut [usize], f: &mut impl FnMut(&[usize], usize)) {
    if i == rgs.len() {
        f(rgs, blocks);
        return;
    }
    for b in 0..=blocks {
        rgs[i] = b;
        set_partition_rec(i + 1, blocks.max(b + 1), rgs, f);
    }
}

/// Sum the weights in each block of a restricted growth string.
pub(crate) fn merge_rgs(weights: &[KTuple], rgs: &[usize], blocks: usize, k: usize) -> KTuplePartition {
    let mut sums = vec![vec![0u32; k]; blocks];
    for (w, &b) in weights.iter().zip(rgs) {
        for (s, e) in sums[b].iter_mut().zip(w.entries()) {
            *s += e;
        }
    }
    let mut parts: Vec<KTuple> = sums.into_iter().map(KTuple).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    KTuplePartition { k, parts }
}
