#![allow(dead_code)]

use std::collections::BTreeMap;

use chromsym_core::graphs::{LabelPermutation, LabelledGraph};
use chromsym_core::kernel::{ell_iso, ext_os, GraphCombination};
use chromsym_core::multisym::{Basis, MultiSym};
use chromsym_core::partitions::{KTuple, KTuplePartition};
use chromsym_core::posets::{Pattern, Poset};
use chromsym_core::{Limits, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Limits roomy enough for the random instances below.
pub fn roomy() -> Limits {
    Limits { partition_norm: 48, ..Limits::default() }
}

pub fn random_tuple(r: &mut impl Rng, k: usize, max_entry: u32) -> KTuple {
    loop {
        let e: Vec<u32> = (0..k).map(|_| r.gen_range(0..=max_entry)).collect();
        if e.iter().any(|&x| x > 0) {
            return KTuple::new(e).unwrap();
        }
    }
}

/// Random partition with norm at most `max_norm`.
pub fn random_partition(r: &mut impl Rng, k: usize, max_norm: u32) -> KTuplePartition {
    let budget = r.gen_range(1..=max_norm);
    let mut parts = Vec::new();
    let mut used = 0;
    while used < budget {
        let t = random_tuple(r, k, (budget - used).min(3));
        if used + t.norm() > budget {
            continue;
        }
        used += t.norm();
        parts.push(t);
    }
    KTuplePartition::new(k, parts).unwrap()
}

fn ids(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{i}")).collect()
}

/// Weighted multigraph; loops appear with small probability when `loops` is set.
pub fn random_graph(r: &mut impl Rng, k: usize, max_n: usize, max_m: usize, max_entry: u32, loops: bool) -> LabelledGraph {
    let n = r.gen_range(1..=max_n);
    let vertices = ids(n).into_iter().map(|id| (id, random_tuple(r, k, max_entry))).collect();
    let m = r.gen_range(0..=max_m);
    let mut edges = Vec::new();
    for _ in 0..m {
        let a = r.gen_range(0..n);
        let b = r.gen_range(0..n);
        if a == b && !(loops && r.gen_bool(0.1)) {
            continue;
        }
        edges.push((a, b));
    }
    LabelledGraph::from_indices(k, vertices, edges).unwrap()
}

/// Simple k-vertex-labelled graph with block sizes `sizes` and edge probability `p`.
pub fn random_labelled(r: &mut impl Rng, sizes: &[usize], p: f64) -> LabelledGraph {
    let k = sizes.len();
    let mut vertices = Vec::new();
    for (i, &s) in sizes.iter().enumerate() {
        for j in 0..s {
            vertices.push((format!("{}{}", (b'a' + i as u8) as char, j + 1), KTuple::unit(k, i)));
        }
    }
    let n = vertices.len();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if r.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    LabelledGraph::from_indices(k, vertices, edges).unwrap()
}

/// Random block-respecting permutation of `g`'s vertex set.
pub fn random_block_permutation(r: &mut impl Rng, g: &LabelledGraph) -> LabelPermutation {
    let mut pairs = Vec::new();
    for block in g.blocks().unwrap() {
        let mut shuffled = block.clone();
        shuffled.shuffle(r);
        for (a, b) in block.iter().zip(&shuffled) {
            pairs.push((g.id(*a).to_owned(), g.id(*b).to_owned()));
        }
    }
    LabelPermutation::new(pairs).unwrap()
}

fn random_coeff(r: &mut impl Rng) -> Rational {
    loop {
        let c = frac(r.gen_range(-3..=3), r.gen_range(1..=3));
        if !c.is_zero() {
            return c;
        }
    }
}

/// A kernel element built as a random combination of generator instances on one vertex set.
pub fn random_kernel_element(r: &mut impl Rng, sizes: &[usize]) -> GraphCombination {
    let template = random_labelled(r, sizes, 0.0);
    let k = sizes.len();
    let mut out = GraphCombination::zero(&template).unwrap();
    for _ in 0..r.gen_range(1..=3) {
        let c = random_coeff(r);
        let os_triples: Vec<[usize; 3]> = triples(k).into_iter().filter(|t| fits(t, sizes)).collect();
        if r.gen_bool(0.5) || os_triples.is_empty() {
            let g = random_labelled(r, sizes, 0.5);
            let sigma = random_block_permutation(r, &g);
            out = out.add(&ell_iso(&g, &sigma).unwrap().scale(&c)).unwrap();
        } else {
            let t = *os_triples.choose(r).unwrap();
            let mut host = random_labelled(r, sizes, 0.4);
            let blocks = host.blocks().unwrap();
            let d = |x: usize, y: usize| usize::from(x == y);
            let [m, n, p] = [t[0] - 1, t[1] - 1, t[2] - 1];
            let pos = [blocks[m][0], blocks[n][d(m, n)], blocks[p][d(m, p) + d(n, p)]];
            let keep: Vec<(usize, usize)> = host
                .edges()
                .iter()
                .copied()
                .filter(|&(x, y)| !(pos.contains(&x) && pos.contains(&y)))
                .collect();
            host = host.with_edges(keep).unwrap();
            out = out.add(&ext_os(t, &host).unwrap().scale(&c)).unwrap();
        }
    }
    out
}

fn triples(k: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 1..=k {
        for b in 1..=k {
            for c in 1..=k {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn fits(t: &[usize; 3], sizes: &[usize]) -> bool {
    (1..=sizes.len()).all(|i| t.iter().filter(|&&x| x == i).count() <= sizes[i - 1])
}

/// The chromatic function in the `m` basis from the definition: enumerate every
/// colouring with `n` colours, keep the proper ones, and divide each monomial
/// type's count by the number of monomials of that type in `n` variables.
pub fn colouring_oracle(g: &LabelledGraph) -> MultiSym {
    let n = g.vertex_count();
    let k = g.k();
    let mut counts: BTreeMap<KTuplePartition, u64> = BTreeMap::new();
    let mut colour = vec![0usize; n];
    'outer: loop {
        let proper = g.edges().iter().all(|&(a, b)| colour[a] != colour[b]);
        if proper {
            let mut sums = vec![vec![0u32; k]; n];
            for (v, &c) in colour.iter().enumerate() {
                for (s, w) in sums[c].iter_mut().zip(g.weight(v).entries()) {
                    *s += w;
                }
            }
            let parts = sums.into_iter().filter(|s| s.iter().any(|&x| x > 0)).map(|s| KTuple::new(s).unwrap()).collect();
            *counts.entry(KTuplePartition::new(k, parts).unwrap()).or_insert(0) += 1;
        }
        for i in 0..n {
            colour[i] += 1;
            if colour[i] < n {
                continue 'outer;
            }
            colour[i] = 0;
        }
        break;
    }
    let fact = |x: usize| (1..=x as u64).product::<u64>();
    let terms = counts.into_iter().map(|(lambda, count)| {
        let monomials = fact(n) / fact(n - lambda.len())
            / lambda.multiplicities().iter().map(|&(_, m)| fact(m)).product::<u64>();
        let c = Rational::new(BigInt::from(count), BigInt::from(monomials));
        (lambda, c)
    });
    MultiSym::from_terms(k, Basis::M, terms).unwrap()
}

/// Random poset: each pair `i < j` of a random linear extension is related with probability `p`.
pub fn random_poset(r: &mut impl Rng, n: usize, p: f64) -> Poset {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(r);
    let mut less = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if r.gen_bool(p) {
                less.push((names[order[i]].clone(), names[order[j]].clone()));
            }
        }
    }
    Poset::new(&names, &less).unwrap()
}

/// Rejection sampling for (3+1)-free posets.
pub fn random_three_plus_one_free(r: &mut impl Rng, max_n: usize) -> Poset {
    loop {
        let n = r.gen_range(1..=max_n);
        let p = r.gen_range(0.15..0.6);
        let poset = random_poset(r, n, p);
        if poset.find_induced_pattern(Pattern::ThreePlusOne).is_none() {
            return poset;
        }
    }
}

pub fn one() -> Rational {
    Rational::one()
}
