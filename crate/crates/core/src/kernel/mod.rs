//! Formal combinations of k-vertex-labelled graphs and the kernel of `X_k`.
//!
//! A [`GraphCombination`] is an element of `Γ_k`: rational multiples of
//! k-vertex-labelled graphs that all live on one common vertex set. The
//! kernel of `X_k` is spanned by two families of generators:
//!
//! * `ℓ_iso(G, σ) = G - G_σ` for a block-respecting permutation `σ` ([`ell_iso`]);
//! * the triangular modular relation `ℓ_os(t)` on three labelled vertices,
//!   extended into any host graph ([`ell_os`], [`ext_os`]).
//!
//! [`rewrite_to_r`] writes any combination as generators plus a residual in
//! the basis of complete multipartite graphs `I^λ`, which is zero exactly on
//! the kernel.

mod lift;
mod rewrite;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::csf::{csf, Algorithm};
use crate::graphs::{LabelPermutation, LabelledGraph};
use crate::multisym::{Basis, MultiSym};
use crate::partitions::{same_k, KTuple};
use crate::{Error, Limits, Rational, Result};

pub use lift::{
    check_lift_valid, check_lift_valid_with_extensions, lift, lift_is_homogeneous, orellana_scott_apply, LiftCheck, LiftRoute,
    OrellanaScott, OrellanaScottRoute,
};
pub use rewrite::{canonical_multipartite, rewrite_to_r, IsoTerm, KernelCertificate, OsTerm};

/// A formal rational combination of k-vertex-labelled graphs on a common vertex set.
///
/// The common vertex order is the first graph's order, stably sorted by block.
/// Labelled-identical graphs are kept as separate terms until [`merged`](Self::merged).
#[derive(Clone, PartialEq, Eq)]
pub struct GraphCombination {
    template: LabelledGraph,
    terms: Vec<(Rational, LabelledGraph)>,
}

fn block_of(w: &KTuple) -> Result<usize> {
    w.unit_index()
        .ok_or_else(|| Error::Invalid(format!("weight {w:?} is not a unit tuple; graphs must be k-vertex-labelled")))
}

/// Rewrite `g` onto the vertex order of `template` (same ids and weights required).
fn align(g: &LabelledGraph, template: &LabelledGraph) -> Result<LabelledGraph> {
    same_k(template.k(), g.k())?;
    if g.vertex_count() != template.vertex_count() {
        return Err(Error::Invalid("graphs in a combination must share their vertex set".into()));
    }
    let mut pos = Vec::with_capacity(g.vertex_count());
    for v in g.vertices() {
        let j = template
            .index_of(&v.id)
            .ok_or_else(|| Error::Invalid(format!("vertex {:?} is not in the common vertex set", v.id)))?;
        if template.weight(j) != &v.weight {
            return Err(Error::Invalid(format!("vertex {:?} has inconsistent weights", v.id)));
        }
        pos.push(j);
    }
    template.with_edges(g.edges().iter().map(|&(a, b)| (pos[a], pos[b])).collect())
}

impl GraphCombination {
    /// Empty combination on the vertex set of `template` (its edges are ignored).
    pub fn zero(template: &LabelledGraph) -> Result<Self> {
        let mut order: Vec<usize> = (0..template.vertex_count()).collect();
        let blocks = order.iter().map(|&i| block_of(template.weight(i))).collect::<Result<Vec<_>>>()?;
        order.sort_by_key(|&i| blocks[i]);
        let vertices = order
            .iter()
            .map(|&i| (template.id(i).into(), template.weight(i).clone()))
            .collect();
        let template = LabelledGraph::from_indices(template.k(), vertices, Vec::new())?;
        Ok(GraphCombination { template, terms: Vec::new() })
    }

    /// At least one term is needed to fix the vertex set; use [`zero`](Self::zero) otherwise.
    pub fn new(terms: Vec<(Rational, LabelledGraph)>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::Invalid("an empty combination needs an explicit vertex set".into()))?;
        let mut out = GraphCombination::zero(&first.1)?;
        for (c, g) in terms {
            out.push(c, &g)?;
        }
        Ok(out)
    }

    /// Append `c · g`; zero coefficients are dropped.
    pub fn push(&mut self, c: Rational, g: &LabelledGraph) -> Result<()> {
        let g = align(g, &self.template)?;
        if !c.is_zero() {
            self.terms.push((c, g));
        }
        Ok(())
    }

    pub(crate) fn push_edges(&mut self, c: Rational, edges: Vec<(usize, usize)>) {
        if !c.is_zero() {
            let g = self.template.with_edges(edges).expect("positions come from the template");
            self.terms.push((c, g));
        }
    }

    pub fn k(&self) -> usize {
        self.template.k()
    }

    /// The common vertex set as an edgeless graph.
    pub fn template(&self) -> &LabelledGraph {
        &self.template
    }

    pub fn terms(&self) -> &[(Rational, LabelledGraph)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &GraphCombination) -> Result<Self> {
        let mut out = self.clone();
        for (c, g) in &other.terms {
            out.push(c.clone(), g)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = GraphCombination { template: self.template.clone(), terms: Vec::new() };
        for (d, g) in &self.terms {
            if !(c * d).is_zero() {
                out.terms.push((c * d, g.clone()));
            }
        }
        out
    }

    /// Sum coefficients of labelled-identical graphs (same edge multiset on the same labels).
    pub fn merged(&self) -> Self {
        let mut acc: BTreeMap<Vec<(usize, usize)>, Rational> = BTreeMap::new();
        for (c, g) in &self.terms {
            *acc.entry(g.edges().to_vec()).or_insert_with(Rational::zero) += c;
        }
        let mut out = GraphCombination { template: self.template.clone(), terms: Vec::new() };
        for (edges, c) in acc {
            out.push_edges(c, edges);
        }
        out
    }

    /// Equality as formal sums after merging labelled-identical graphs.
    pub fn formally_equal(&self, other: &GraphCombination) -> bool {
        let Ok(other) = GraphCombination::zero(&self.template).and_then(|z| z.add(other)) else {
            return false;
        };
        self.merged().terms == other.merged().terms
    }
}

impl fmt::Debug for GraphCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 on {:?}", self.template);
        }
        for (i, (c, g)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}·{g:?}")?;
        }
        Ok(())
    }
}

/// `Σ c_i X_k(H_i)` in the power-sum basis.
pub fn evaluate(l: &GraphCombination, algorithm: Algorithm, limits: &Limits) -> Result<MultiSym> {
    let mut out = MultiSym::zero(l.k(), Basis::P);
    for (c, g) in &l.terms {
        out = out.add(&csf(g, algorithm, limits)?.scale(c))?;
    }
    Ok(out)
}

/// `Ext(L; G)`: add each term's edges (matched by id) to `G` as a multiset union.
pub fn ext(l: &GraphCombination, g: &LabelledGraph) -> Result<GraphCombination> {
    same_k(l.k(), g.k())?;
    let t = &l.template;
    let mut pos = Vec::with_capacity(t.vertex_count());
    for v in t.vertices() {
        let j = g.index_of(&v.id).ok_or_else(|| Error::UnknownVertex(v.id.clone()))?;
        if g.weight(j) != &v.weight {
            return Err(Error::Invalid(format!("vertex {:?} has a different weight in the host", v.id)));
        }
        pos.push(j);
    }
    let mut out = GraphCombination::zero(g)?;
    for (c, h) in &l.terms {
        let mut edges = g.edges().to_vec();
        edges.extend(h.edges().iter().map(|&(a, b)| (pos[a], pos[b])));
        out.push(c.clone(), &g.with_edges(edges)?)?;
    }
    Ok(out)
}

/// Positional label `(i, j)` (both 1-based) used as a vertex id.
pub fn label_id(block: usize, j: usize) -> String {
    format!("({block},{j})")
}

/// Block indices (0-based) and in-block positions (0-based) of `a_t, b_t, c_t`.
fn os_labels(t: [usize; 3]) -> [(usize, usize); 3] {
    let [m, n, p] = t;
    let d = |x: usize, y: usize| usize::from(x == y);
    [(m, 0), (n, d(m, n)), (p, d(m, p) + d(n, p))]
}

fn check_triple(t: [usize; 3], k: usize) -> Result<[usize; 3]> {
    if t.iter().any(|&i| i == 0 || i > k) {
        return Err(Error::Invalid(format!("block triple {t:?} out of range 1..={k}")));
    }
    Ok([t[0] - 1, t[1] - 1, t[2] - 1])
}

/// Terms of `ℓ_os` on positions `a, b, c` over base edges `host`:
/// `H - (H∖ab) - (H∖ac) + (H∖{ab, ac})` where `H = host + ab + ac + bc`.
fn os_terms(host: &[(usize, usize)], [a, b, c]: [usize; 3]) -> [(i64, Vec<(usize, usize)>); 4] {
    let with = |extra: &[(usize, usize)]| {
        let mut e = host.to_vec();
        e.extend_from_slice(extra);
        e
    };
    [
        (1, with(&[(a, b), (a, c), (b, c)])),
        (-1, with(&[(a, c), (b, c)])),
        (-1, with(&[(a, b), (b, c)])),
        (1, with(&[(b, c)])),
    ]
}

/// The triangular relation `ℓ_os(t)` on its three labelled vertices (`t` is 1-based).
pub fn ell_os(t: [usize; 3], k: usize) -> Result<GraphCombination> {
    let t0 = check_triple(t, k)?;
    let labels = os_labels(t0);
    let mut vertices: Vec<(String, KTuple)> =
        labels.iter().map(|&(i, j)| (label_id(i + 1, j + 1), KTuple::unit(k, i))).collect();
    // Stable order by block, then position within block.
    let mut order = [0usize, 1, 2];
    order.sort_by_key(|&x| labels[x]);
    vertices = order.iter().map(|&x| vertices[x].clone()).collect();
    let at = |x: usize| order.iter().position(|&o| o == x).expect("permutation");
    let template = LabelledGraph::from_indices(k, vertices, Vec::new())?;
    let mut out = GraphCombination::zero(&template)?;
    for (c, edges) in os_terms(&[], [at(0), at(1), at(2)]) {
        out.push_edges(crate::csf::int(c), edges);
    }
    Ok(out)
}

/// Positions of `a_t, b_t, c_t` in a k-vertex-labelled graph (`t` 0-based).
fn os_positions(g: &LabelledGraph, t0: [usize; 3]) -> Result<[usize; 3]> {
    let blocks = g.blocks().ok_or_else(|| Error::Invalid("host must be k-vertex-labelled".into()))?;
    let mut out = [0; 3];
    for (slot, (i, j)) in out.iter_mut().zip(os_labels(t0)) {
        *slot = *blocks[i]
            .get(j)
            .ok_or_else(|| Error::Invalid(format!("block {} has no vertex {}", i + 1, j + 1)))?;
    }
    Ok(out)
}

/// `Ext(ℓ_os(t); host)`, identifying the labels `(i, j)` with the `j`-th vertex of `V_i` in `host`.
pub fn ext_os(t: [usize; 3], host: &LabelledGraph) -> Result<GraphCombination> {
    let t0 = check_triple(t, host.k())?;
    let pos = os_positions(host, t0)?;
    let mut out = GraphCombination::zero(host)?;
    let aligned = align(host, &out.template)?;
    let pos = pos.map(|p| out.template.index_of(host.id(p)).expect("same vertex set"));
    for (c, edges) in os_terms(aligned.edges(), pos) {
        out.push_edges(crate::csf::int(c), edges);
    }
    Ok(out)
}

/// `ℓ_iso(G, σ) = G - G_σ`.
pub fn ell_iso(g: &LabelledGraph, sigma: &LabelPermutation) -> Result<GraphCombination> {
    let g_sigma = g.permuted(sigma)?;
    let mut out = GraphCombination::zero(g)?;
    out.push(Rational::one(), g)?;
    out.push(-Rational::one(), &g_sigma)?;
    Ok(out)
}

/// Which independent route(s) [`is_kernel_member`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipRoute {
    Evaluate,
    Rewrite,
    Both,
}

/// Membership in `Ker(X_k)`. With [`MembershipRoute::Both`], disagreement is an error.
pub fn is_kernel_member(l: &GraphCombination, route: MembershipRoute, limits: &Limits) -> Result<bool> {
    let by_eval = || -> Result<bool> { Ok(evaluate(l, Algorithm::Auto, limits)?.is_zero()) };
    let by_rewrite = || -> Result<bool> { Ok(rewrite_to_r(l, limits)?.residual_is_zero()) };
    match route {
        MembershipRoute::Evaluate => by_eval(),
        MembershipRoute::Rewrite => by_rewrite(),
        MembershipRoute::Both => {
            let (a, b) = (by_eval()?, by_rewrite()?);
            if a != b {
                return Err(Error::Inconsistent(format!(
                    "kernel membership routes disagree: evaluation says {a}, rewriting says {b}"
                )));
            }
            Ok(a)
        }
    }
}

/// Fold block `V_k` into `V_{k-1}`.
pub fn project_gamma(l: &GraphCombination) -> Result<GraphCombination> {
    if l.k() < 2 {
        return Err(Error::Invalid("projection needs k >= 2".into()));
    }
    let mut out = GraphCombination::zero(&l.template.fold_last()?)?;
    for (c, g) in &l.terms {
        out.push(c.clone(), &g.fold_last()?)?;
    }
    Ok(out)
}

/// Fold all the way down to ordinary (k = 1) graphs.
pub fn project_to_csf(l: &GraphCombination) -> Result<GraphCombination> {
    let mut out = l.clone();
    while out.k() > 1 {
        out = project_gamma(&out)?;
    }
    Ok(out)
}
