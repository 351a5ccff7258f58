//! Chromatic k-multisymmetric functions of weighted graphs.
//!
//! Three independent algorithms are provided:
//!
//! * [`csf_by_colorings`] sums `m̃` over stable set partitions (result in `m̃`);
//! * [`csf_by_edge_subsets`] is the signed sum over edge sub-multisets (result in `p`);
//! * [`csf_by_deletion_contraction`] recurses on `X(G) = X(G - e) - X(G / e)` (result in `p`).
//!
//! [`csf`] picks one of them, or cross-checks several.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;

use crate::graphs::{CanonicalKey, LabelledGraph};
use crate::multisym::{Basis, MultiSym};
use crate::partitions::{KTuple, KTuplePartition};
use crate::{check_limit, Error, Limits, Rational, Result};

/// Which algorithm [`csf`] should run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    /// Cheapest applicable algorithm.
    #[default]
    Auto,
    Colorings,
    Subsets,
    DeletionContraction,
    /// Run every algorithm within limits (at least two) and demand agreement.
    Verify,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::Colorings => "colorings",
            Algorithm::Subsets => "subsets",
            Algorithm::DeletionContraction => "delcon",
            Algorithm::Verify => "verify",
        }
    }

    pub fn from_name(name: &str) -> Option<Algorithm> {
        [
            Algorithm::Auto,
            Algorithm::Colorings,
            Algorithm::Subsets,
            Algorithm::DeletionContraction,
            Algorithm::Verify,
        ]
        .into_iter()
        .find(|a| a.name() == name)
    }
}

fn sum_weights(g: &LabelledGraph, members: impl Iterator<Item = usize>) -> KTuple {
    members
        .map(|v| g.weight(v).clone())
        .reduce(|a, b| a.add(&b).expect("weights share k"))
        .expect("nonempty block")
}

/// `X = Σ_{π stable} m̃_{λ(π)}`. Any loop makes every partition unstable.
pub fn csf_by_colorings(g: &LabelledGraph, limits: &Limits) -> Result<MultiSym> {
    if g.has_loop() {
        return Ok(MultiSym::zero(g.k(), Basis::MTilde));
    }
    let n = g.vertex_count();
    check_limit("coloring vertices", n as u64, limits.coloring_vertices as u64)?;
    let mut nbr = alloc::vec![0u64; n];
    for &(a, b) in g.edges() {
        nbr[a] |= 1 << b;
        nbr[b] |= 1 << a;
    }
    let mut counts: BTreeMap<KTuplePartition, i64> = BTreeMap::new();
    let mut blocks: Vec<u64> = Vec::new();
    stable_partitions(0, n, &nbr, &mut blocks, &mut |blocks| {
        let parts = blocks
            .iter()
            .map(|&mask| sum_weights(g, (0..n).filter(|v| mask >> v & 1 == 1)))
            .collect();
        let key = KTuplePartition::new(g.k(), parts).expect("weights share k");
        *counts.entry(key).or_insert(0) += 1;
    });
    Ok(MultiSym::from_counts(g.k(), Basis::MTilde, counts))
}

fn stable_partitions(v: usize, n: usize, nbr: &[u64], blocks: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if v == n {
        f(blocks);
        return;
    }
    for i in 0..blocks.len() {
        if blocks[i] & nbr[v] == 0 {
            blocks[i] |= 1 << v;
            stable_partitions(v + 1, n, nbr, blocks, f);
            blocks[i] &= !(1 << v);
        }
    }
    blocks.push(1 << v);
    stable_partitions(v + 1, n, nbr, blocks, f);
    blocks.pop();
}

/// `X = Σ_{S ⊆ E} (-1)^{|S|} p_{λ(S)}` where `λ(S)` collects component weights of `(V, S)`.
pub fn csf_by_edge_subsets(g: &LabelledGraph, limits: &Limits) -> Result<MultiSym> {
    let m = g.edge_count();
    check_limit("edge-subset edges", m as u64, limits.subset_edges as u64)?;
    let n = g.vertex_count();
    let mut counts: BTreeMap<KTuplePartition, i64> = BTreeMap::new();
    let mut parent = alloc::vec![0usize; n];
    for mask in 0u64..(1u64 << m) {
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i;
        }
        for (i, &(a, b)) in g.edges().iter().enumerate() {
            if mask >> i & 1 == 1 {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = root(&mut parent, v);
            comps.entry(r).or_default().push(v);
        }
        let parts = comps.into_values().map(|c| sum_weights(g, c.into_iter())).collect();
        let key = KTuplePartition::new(g.k(), parts).expect("weights share k");
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        *counts.entry(key).or_insert(0) += sign;
    }
    Ok(MultiSym::from_counts(g.k(), Basis::P, counts))
}

fn root(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Recursive deletion-contraction, memoized on canonical keys when the graph is
/// small enough to canonize. The edge taken at each step is the one whose
/// endpoint ids form the lexicographically least pair.
pub fn csf_by_deletion_contraction(g: &LabelledGraph, limits: &Limits) -> Result<MultiSym> {
    let mut memo = BTreeMap::new();
    Ok(delcon(g, limits, &mut memo))
}

fn id_pair(g: &LabelledGraph, e: (usize, usize)) -> (&str, &str) {
    let (a, b) = (g.id(e.0), g.id(e.1));
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn delcon(g: &LabelledGraph, limits: &Limits, memo: &mut BTreeMap<CanonicalKey, MultiSym>) -> MultiSym {
    if g.has_loop() {
        return MultiSym::zero(g.k(), Basis::P);
    }
    if g.edge_count() == 0 {
        return MultiSym::basis_element(Basis::P, g.weight_partition());
    }
    let key = g.canonical_key(limits.canon_vertices).ok();
    if let Some(hit) = key.as_ref().and_then(|k| memo.get(k)) {
        return hit.clone();
    }
    let pos = (0..g.edge_count())
        .min_by(|&i, &j| match id_pair(g, g.edges()[i]).cmp(&id_pair(g, g.edges()[j])) {
            Ordering::Equal => i.cmp(&j),
            o => o,
        })
        .expect("at least one edge");
    let deleted = delcon(&g.delete_edge_at(pos), limits, memo);
    let contracted = delcon(&g.contract_edge_at(pos), limits, memo);
    let value = deleted.sub(&contracted).expect("same k and basis");
    if let Some(k) = key {
        memo.insert(k, value.clone());
    }
    value
}

// Rough operation counts used to choose an algorithm.
fn bell_estimate(n: usize) -> u128 {
    let mut row = alloc::vec![1u128];
    for _ in 0..n {
        let mut next = alloc::vec![*row.last().unwrap()];
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

/// The chromatic function of `g` in the power-sum basis.
pub fn csf(g: &LabelledGraph, algorithm: Algorithm, limits: &Limits) -> Result<MultiSym> {
    match algorithm {
        Algorithm::Colorings => csf_by_colorings(g, limits)?.to_basis(Basis::P, limits),
        Algorithm::Subsets => csf_by_edge_subsets(g, limits),
        Algorithm::DeletionContraction => csf_by_deletion_contraction(g, limits),
        Algorithm::Auto => {
            if g.has_loop() {
                return Ok(MultiSym::zero(g.k(), Basis::P));
            }
            let g = g.simplify();
            let (n, m) = (g.vertex_count(), g.edge_count());
            let colorings_ok = n <= limits.coloring_vertices;
            let subsets_ok = m <= limits.subset_edges;
            if subsets_ok && (!colorings_ok || (1u128 << m) <= bell_estimate(n)) {
                csf_by_edge_subsets(&g, limits)
            } else if colorings_ok {
                csf(&g, Algorithm::Colorings, limits)
            } else {
                csf_by_deletion_contraction(&g, limits)
            }
        }
        Algorithm::Verify => {
            let mut results = Vec::new();
            if g.vertex_count() <= limits.coloring_vertices {
                results.push(csf(g, Algorithm::Colorings, limits)?);
            }
            if g.edge_count() <= limits.subset_edges {
                results.push(csf_by_edge_subsets(g, limits)?);
            }
            results.push(csf_by_deletion_contraction(g, limits)?);
            if results.len() < 2 {
                check_limit("coloring vertices", g.vertex_count() as u64, limits.coloring_vertices as u64)?;
            }
            if results.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::Inconsistent("chromatic function algorithms disagree".into()));
            }
            Ok(results.pop().expect("nonempty"))
        }
    }
}

/// Exact integer from a small count.
pub(crate) fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
