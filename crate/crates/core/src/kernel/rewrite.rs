//! Constructive decomposition of a combination into kernel generators plus
//! a residual in the `I^λ` basis.
//!
//! Graphs are handled as bitmasks over vertex pairs of the common vertex set.
//! While some term contains an induced `K_1 ⊔ K_2`, the term with the most
//! non-edges (smallest mask on ties) is aligned by a block-respecting
//! permutation so that the pattern sits on the labelled vertices
//! `a_t, b_t, c_t`, and the triangular relation replaces it by three graphs
//! with strictly fewer non-edges. Survivors are complete multipartite; each
//! is then relabelled onto a fixed layout of `I^λ`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{ext_os, os_labels, GraphCombination};
use crate::graphs::{LabelPermutation, LabelledGraph};
use crate::multisym::{Basis, MultiSym};
use crate::partitions::{KTuple, KTuplePartition};
use crate::{check_limit, Error, Limits, Rational, Result};

/// `coeff · (graph - graph_σ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoTerm {
    pub coeff: Rational,
    pub graph: LabelledGraph,
    pub sigma: LabelPermutation,
}

/// `coeff · Ext(ℓ_os(t); host)` with `t` 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OsTerm {
    pub coeff: Rational,
    pub t: [usize; 3],
    pub host: LabelledGraph,
}

/// A kernel-form presentation plus residual: the input equals
/// `Σ iso_terms + Σ os_terms + Σ_λ c_λ I^λ` as a formal sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelCertificate {
    /// The common vertex set (edgeless).
    pub template: LabelledGraph,
    pub iso_terms: Vec<IsoTerm>,
    pub os_terms: Vec<OsTerm>,
    /// Nonzero coefficients of the `I^λ` laid out by [`canonical_multipartite`].
    pub residual: Vec<(Rational, KTuplePartition)>,
    /// Every permutation used by an iso term.
    pub sufficient_set: Vec<LabelPermutation>,
}

impl KernelCertificate {
    pub fn residual_is_zero(&self) -> bool {
        self.residual.is_empty()
    }

    /// The residual as an element of the `r` basis.
    pub fn residual_r(&self) -> Result<MultiSym> {
        MultiSym::from_terms(self.template.k(), Basis::R, self.residual.iter().map(|(c, l)| (l.clone(), c.clone())))
    }

    /// Re-expand every recorded term into one formal combination.
    pub fn expand(&self) -> Result<GraphCombination> {
        let mut out = GraphCombination::zero(&self.template)?;
        for term in &self.iso_terms {
            out.push(term.coeff.clone(), &term.graph)?;
            out.push(-term.coeff.clone(), &term.graph.permuted(&term.sigma)?)?;
        }
        for term in &self.os_terms {
            out = out.add(&ext_os(term.t, &term.host)?.scale(&term.coeff))?;
        }
        for (c, lambda) in &self.residual {
            out.push(c.clone(), &canonical_multipartite(&self.template, lambda)?)?;
        }
        Ok(out)
    }

    /// The certificate re-sums to `l`.
    pub fn verify(&self, l: &GraphCombination) -> Result<bool> {
        Ok(self.expand()?.formally_equal(l))
    }
}

/// `I^λ` on the vertex set of `template`: the parts of `λ` in stored order each
/// take the next unused vertices of every block, in the template's order.
pub fn canonical_multipartite(template: &LabelledGraph, lambda: &KTuplePartition) -> Result<LabelledGraph> {
    let blocks = template.blocks().ok_or_else(|| Error::Invalid("template must be k-vertex-labelled".into()))?;
    if lambda.k() != template.k() || lambda.tuple_sum() != template.total_weight() {
        return Err(Error::Invalid(format!("{lambda:?} does not match the vertex set")));
    }
    let mut next = vec![0usize; blocks.len()];
    let mut group = vec![usize::MAX; template.vertex_count()];
    for (g, part) in lambda.parts().iter().enumerate() {
        for (j, &count) in part.entries().iter().enumerate() {
            for _ in 0..count {
                group[blocks[j][next[j]]] = g;
                next[j] += 1;
            }
        }
    }
    let n = template.vertex_count();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if group[a] != group[b] {
                edges.push((a, b));
            }
        }
    }
    template.with_edges(edges)
}

struct Pairs {
    n: usize,
    index: Vec<Vec<u32>>,
}

impl Pairs {
    fn new(n: usize) -> Self {
        let mut index = vec![vec![0; n]; n];
        let mut bit = 0;
        for a in 0..n {
            for b in a + 1..n {
                index[a][b] = bit;
                index[b][a] = bit;
                bit += 1;
            }
        }
        Pairs { n, index }
    }

    fn bit(&self, a: usize, b: usize) -> u64 {
        1 << self.index[a][b]
    }

    fn adjacent(&self, mask: u64, a: usize, b: usize) -> bool {
        mask & self.bit(a, b) != 0
    }


    fn mask_of(&self, g: &LabelledGraph) -> u64 {
        g.edges().iter().fold(0, |m, &(a, b)| m | self.bit(a, b))
    }

    fn edges_of(&self, mask: u64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.adjacent(mask, a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Same rule as [`LabelledGraph::find_k1_sqcup_k2_at`].
    fn k1_sqcup_k2(&self, mask: u64) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    match (self.adjacent(mask, a, b), self.adjacent(mask, a, c), self.adjacent(mask, b, c)) {
                        (true, false, false) => return Some((c, a, b)),
                        (false, true, false) => return Some((b, a, c)),
                        (false, false, true) => return Some((a, b, c)),
                        _ => {}
                    }
                }
            }
        }
        None
    }

    fn permute(&self, mask: u64, perm: &[usize]) -> u64 {
        self.edges_of(mask).into_iter().fold(0, |m, (a, b)| m | self.bit(perm[a], perm[b]))
    }
}

/// Smallest-support permutation extending the injective partial map `f`: each
/// chain of `f` is closed into a cycle.
fn complete_permutation(n: usize, f: &[(usize, usize)]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    let image: BTreeMap<usize, usize> = f.iter().copied().collect();
    let preimage: BTreeMap<usize, usize> = f.iter().map(|&(a, b)| (b, a)).collect();
    for (&s, &t) in &image {
        perm[s] = t;
    }
    for &t in image.values() {
        if image.contains_key(&t) {
            continue;
        }
        // t is an end of a chain; walk back to its start
        let mut start = t;
        while let Some(&s) = preimage.get(&start) {
            start = s;
        }
        perm[t] = start;
    }
    perm
}

fn moved(perm: &[usize]) -> usize {
    perm.iter().enumerate().filter(|&(i, &p)| i != p).count()
}

struct Alignment {
    t0: [usize; 3],
    perm: Vec<usize>,
    targets: [usize; 3],
}

/// Choose `t` and `σ` putting `(r; p, q)` onto `(a_t; b_t, c_t)`: fewest moved
/// points first, then the smaller `t`.
fn align_pattern(blocks: &[Vec<usize>], block_of: &[usize], r: usize, p: usize, q: usize) -> Alignment {
    let n = block_of.len();
    let candidates = [(p, q), (q, p)].map(|(x, y)| {
        let t0 = [block_of[r], block_of[x], block_of[y]];
        let targets = os_labels(t0).map(|(i, j)| blocks[i][j]);
        let perm = complete_permutation(n, &[(r, targets[0]), (x, targets[1]), (y, targets[2])]);
        Alignment { t0, perm, targets }
    });
    let [first, second] = candidates;
    if (moved(&second.perm), second.t0) < (moved(&first.perm), first.t0) {
        second
    } else {
        first
    }
}

fn to_permutation(g: &LabelledGraph, perm: &[usize]) -> LabelPermutation {
    LabelPermutation::new(perm.iter().enumerate().map(|(i, &j)| (g.id(i), g.id(j)))).expect("a permutation")
}

/// Decompose `l` into `ℓ_iso` and `ℓ_os` generators plus an `I^λ` residual.
pub fn rewrite_to_r(l: &GraphCombination, limits: &Limits) -> Result<KernelCertificate> {
    let template = l.template().clone();
    let n = template.vertex_count();
    check_limit("rewriting vertices", n as u64, (limits.rewrite_vertices.min(11)) as u64)?;
    if l.terms().iter().any(|(_, g)| !g.is_simple()) {
        return Err(Error::NotSimple);
    }
    let blocks = template.blocks().expect("combinations are k-vertex-labelled");
    let mut block_of = vec![0; n];
    for (i, b) in blocks.iter().enumerate() {
        for &v in b {
            block_of[v] = i;
        }
    }
    let pairs = Pairs::new(n);
    let graph = |mask: u64| template.with_edges(pairs.edges_of(mask)).expect("valid positions");

    let mut work: BTreeMap<u64, Rational> = BTreeMap::new();
    for (c, g) in l.terms() {
        add_to(&mut work, pairs.mask_of(g), c.clone());
    }
    let mut cert = KernelCertificate {
        template: template.clone(),
        iso_terms: Vec::new(),
        os_terms: Vec::new(),
        residual: Vec::new(),
        sufficient_set: Vec::new(),
    };

    loop {
        let pick = work
            .keys()
            .filter_map(|&m| pairs.k1_sqcup_k2(m).map(|tri| (m, tri)))
            .min_by_key(|&(m, _)| (m.count_ones(), m));
        let Some((mask, (r, p, q))) = pick else { break };
        let c = work.remove(&mask).expect("picked from work");
        let al = align_pattern(&blocks, &block_of, r, p, q);
        let aligned = pairs.permute(mask, &al.perm);
        if moved(&al.perm) > 0 {
            cert.iso_terms.push(IsoTerm {
                coeff: c.clone(),
                graph: graph(mask),
                sigma: to_permutation(&template, &al.perm),
            });
        }
        let [a, b, cc] = al.targets;
        let (ab, ac, bc) = (pairs.bit(a, b), pairs.bit(a, cc), pairs.bit(b, cc));
        debug_assert!(aligned & bc != 0 && aligned & (ab | ac) == 0);
        let host = aligned & !bc;
        cert.os_terms.push(OsTerm { coeff: c.clone(), t: al.t0.map(|x| x + 1), host: graph(host) });
        for (sign, extra) in [(-1, ab | ac | bc), (1, ac | bc), (1, ab | bc)] {
            let next = host | extra;
            if next.count_ones() <= mask.count_ones() {
                return Err(Error::Inconsistent("rewriting step did not reduce non-edges".into()));
            }
            add_to(&mut work, next, &c * crate::csf::int(sign));
        }
    }

    // Every survivor is complete multipartite; group by λ.
    let mut groups: BTreeMap<KTuplePartition, Vec<(u64, Rational)>> = BTreeMap::new();
    for (mask, c) in work {
        let g = graph(mask);
        let parts = g.multipartite_parts().expect("no induced K1 ⊔ K2 left");
        let lambda = KTuplePartition::new(
            template.k(),
            parts
                .iter()
                .map(|part| {
                    part.iter()
                        .map(|&v| template.weight(v).clone())
                        .reduce(|x, y| x.add(&y).expect("same k"))
                        .expect("nonempty part")
                })
                .collect::<Vec<KTuple>>(),
        )?;
        groups.entry(lambda).or_default().push((mask, c));
    }
    for (lambda, members) in groups {
        let net: Rational = members.iter().fold(Rational::zero(), |s, (_, c)| s + c);
        let target = if net.is_zero() {
            graph(members[0].0)
        } else {
            canonical_multipartite(&template, &lambda)?
        };
        for (mask, c) in members {
            let g = graph(mask);
            if g == target {
                continue;
            }
            let iso = g.labelled_isomorphism(&target).expect("same λ gives isomorphic graphs");
            cert.iso_terms.push(IsoTerm { coeff: c, graph: g, sigma: iso });
        }
        if !net.is_zero() {
            cert.residual.push((net, lambda));
        }
    }

    let sigmas: BTreeSet<LabelPermutation> = cert.iso_terms.iter().map(|t| t.sigma.clone()).collect();
    cert.sufficient_set = sigmas.into_iter().collect();
    if !cert.verify(l)? {
        return Err(Error::Inconsistent("certificate does not re-sum to the input".into()));
    }
    Ok(cert)
}

fn add_to(work: &mut BTreeMap<u64, Rational>, mask: u64, c: Rational) {
    let entry = work.entry(mask).or_insert_with(Rational::zero);
    *entry += c;
    if entry.is_zero() {
        work.remove(&mask);
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{two_block_swap, q};
    use super::super::{ell_iso, ell_os, evaluate, ext};
    use super::*;
    use crate::csf::Algorithm;
    use crate::graphs::multipartite_i;

    #[test]
    fn chain_completion() {
        assert_eq!(complete_permutation(4, &[(0, 1)]), vec![1, 0, 2, 3]);
        assert_eq!(complete_permutation(4, &[(0, 0), (2, 3)]), vec![0, 1, 3, 2]);
        assert_eq!(complete_permutation(4, &[(0, 1), (1, 2)]), vec![1, 2, 0, 3]);
    }

    #[test]
    fn two_block_swap_certificate_shape() {
        let l = two_block_swap();
        let cert = rewrite_to_r(&l, &Limits::default()).unwrap();
        assert!(cert.residual_is_zero());
        assert_eq!(cert.os_terms.len(), 2);
        assert_eq!(cert.iso_terms.len(), 1);
        let phi = LabelPermutation::from_cycles(&[&["u", "z"], &["v", "w"]]).unwrap();
        assert_eq!(cert.sufficient_set, vec![phi]);
        assert!(cert.verify(&l).unwrap());
    }

    #[test]
    fn multipartite_input_needs_no_modular_steps() {
        let lam = KTuplePartition::from_rows(2, &[&[1, 1], &[1, 0]]).unwrap();
        let g = multipartite_i(&lam);
        let l = GraphCombination::new(vec![(q(3), g)]).unwrap();
        let cert = rewrite_to_r(&l, &Limits::default()).unwrap();
        assert!(cert.os_terms.is_empty());
        assert_eq!(cert.residual, vec![(q(3), lam)]);
        assert!(cert.verify(&l).unwrap());
    }

    #[test]
    fn generator_combinations_have_zero_residual() {
        let host = LabelledGraph::k_labelled(&[&["a", "b", "c"], &["d", "e"]], &[("a", "e"), ("c", "d")]).unwrap();
        // plain Ext matches by id, and the host does not use label ids
        assert!(ext(&ell_os([1, 2, 1], 2).unwrap(), &host).is_err());
        let o = ext_os([1, 2, 1], &host).unwrap();
        let s = LabelPermutation::from_cycles(&[&["a", "c"], &["d", "e"]]).unwrap();
        let i = ell_iso(&host, &s).unwrap();
        let l = o.scale(&q(2)).add(&i.scale(&q(-5))).unwrap();
        let cert = rewrite_to_r(&l, &Limits::default()).unwrap();
        assert!(cert.residual_is_zero());
        assert!(cert.verify(&l).unwrap());
        assert!(evaluate(&l, Algorithm::Auto, &Limits::default()).unwrap().is_zero());
    }

    #[test]
    fn single_graph_has_nonzero_residual() {
        let l = GraphCombination::new(vec![(q(1), two_block_swap().terms()[0].1.clone())]).unwrap();
        let cert = rewrite_to_r(&l, &Limits::default()).unwrap();
        assert!(!cert.residual_is_zero());
        // residual in r must equal the chromatic function itself
        let lim = Limits::default();
        let x = evaluate(&l, Algorithm::Auto, &lim).unwrap();
        assert_eq!(cert.residual_r().unwrap().to_basis(Basis::P, &lim).unwrap(), x);
    }

    #[test]
    fn rejects_non_simple_and_large() {
        let g = LabelledGraph::unweighted(&["a", "b"], &[("a", "b"), ("a", "b")]).unwrap();
        let l = GraphCombination::new(vec![(q(1), g)]).unwrap();
        assert_eq!(rewrite_to_r(&l, &Limits::default()).unwrap_err(), Error::NotSimple);
        let big: Vec<alloc::string::String> = (0..9).map(|i| alloc::format!("{i}")).collect();
        let ids: Vec<&str> = big.iter().map(|s| s.as_str()).collect();
        let g = LabelledGraph::unweighted(&ids, &[]).unwrap();
        let l = GraphCombination::new(vec![(q(1), g)]).unwrap();
        assert!(matches!(rewrite_to_r(&l, &Limits::default()), Err(Error::LimitExceeded { .. })));
    }
}
