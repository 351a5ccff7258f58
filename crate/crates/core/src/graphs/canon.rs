//! Canonical labelling by colour refinement plus exhaustive individualization.
//!
//! Vertices start coloured by (weight, loop count). Refinement splits colour
//! classes by the multiset of (neighbour colour, multiplicity) until stable.
//! When classes remain, each member of the first non-singleton class is
//! individualized in turn (skipping twins of members already tried) and the
//! smallest resulting encoding wins. Every step depends only on isomorphism
//! invariants, so two graphs get equal keys exactly when some
//! weight-preserving bijection carries one edge multiset onto the other.

use alloc::vec;
use alloc::vec::Vec;

use super::LabelledGraph;
use crate::{check_limit, Result};

/// Opaque, totally ordered isomorphism invariant of a weighted multigraph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u32>);

struct Info<'a> {
    g: &'a LabelledGraph,
    mult: Vec<Vec<u32>>,
}

pub(super) fn canonical_key(g: &LabelledGraph, limit: usize) -> Result<CanonicalKey> {
    let n = g.vertex_count();
    check_limit("canonical labelling vertices", n as u64, limit as u64)?;
    let mut mult = vec![vec![0u32; n]; n];
    for &(a, b) in g.edges() {
        mult[a][b] += 1;
        if a != b {
            mult[b][a] += 1;
        }
    }
    let info = Info { g, mult };
    let initial: Vec<_> = (0..n).map(|v| (g.weight(v).clone(), info.mult[v][v])).collect();
    let colors = refine(&info, rank(&initial));
    let mut best = None;
    search(&info, colors, &mut best);
    let mut key = vec![g.k() as u32, n as u32];
    key.extend(best.unwrap_or_default());
    Ok(CanonicalKey(key))
}

fn rank<T: Ord>(sigs: &[T]) -> Vec<usize> {
    let mut sorted: Vec<&T> = sigs.iter().collect();
    sorted.sort();
    sorted.dedup();
    sigs.iter().map(|s| sorted.binary_search(&s).expect("present")).collect()
}

fn class_count(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |m| m + 1)
}

fn refine(info: &Info<'_>, mut colors: Vec<usize>) -> Vec<usize> {
    let n = colors.len();
    loop {
        let sigs: Vec<(usize, Vec<(usize, u32)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(usize, u32)> = (0..n)
                    .filter(|&u| u != v && info.mult[v][u] > 0)
                    .map(|u| (colors[u], info.mult[v][u]))
                    .collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let next = rank(&sigs);
        if class_count(&next) == class_count(&colors) {
            return next;
        }
        colors = next;
    }
}

fn twins(info: &Info<'_>, a: usize, b: usize) -> bool {
    info.mult[a][a] == info.mult[b][b]
        && (0..info.mult.len()).all(|x| x == a || x == b || info.mult[a][x] == info.mult[b][x])
}

fn encode(info: &Info<'_>, colors: &[usize]) -> Vec<u32> {
    let n = colors.len();
    let mut order = vec![0; n];
    for (v, &c) in colors.iter().enumerate() {
        order[c] = v;
    }
    let mut out = Vec::new();
    for &v in &order {
        out.extend_from_slice(info.g.weight(v).entries());
    }
    for p in 0..n {
        for q in p..n {
            out.push(info.mult[order[p]][order[q]]);
        }
    }
    out
}

fn search(info: &Info<'_>, colors: Vec<usize>, best: &mut Option<Vec<u32>>) {
    let n = colors.len();
    if class_count(&colors) == n {
        let e = encode(info, &colors);
        if best.as_ref().map_or(true, |b| e < *b) {
            *best = Some(e);
        }
        return;
    }
    let mut sizes = vec![0usize; class_count(&colors)];
    for &c in &colors {
        sizes[c] += 1;
    }
    let cell = sizes.iter().position(|&s| s > 1).expect("some class is not a singleton");
    let mut tried: Vec<usize> = Vec::new();
    for v in (0..n).filter(|&v| colors[v] == cell) {
        if tried.iter().any(|&t| twins(info, t, v)) {
            continue;
        }
        tried.push(v);
        let split: Vec<usize> =
            (0..n).map(|u| 2 * colors[u] + usize::from(colors[u] == cell && u != v)).collect();
        search(info, refine(info, rank(&split)), best);
    }
}
