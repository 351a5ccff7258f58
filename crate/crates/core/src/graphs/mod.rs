//! Tuple-weighted multigraphs with loops.
//!
//! A [`LabelledGraph`] has an ordered vertex list (opaque string ids, each
//! with a [`KTuple`] weight) and an edge multiset stored as sorted index
//! pairs. When every weight is a unit tuple `ε_i`, the graph is
//! *k-vertex-labelled* and its blocks `V_i` are the vertices of weight `ε_i`.

mod canon;
mod iso;

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::partitions::{same_k, KTuple, KTuplePartition};
use crate::{Error, Result};

pub use canon::CanonicalKey;
pub use iso::LabelPermutation;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: String,
    pub weight: KTuple,
}

/// A vertex of `W` that is neither complete nor anticomplete to block `V_block`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub vertex: String,
    pub block: usize,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabelledGraph {
    k: usize,
    vertices: Vec<Vertex>,
    /// Sorted; each pair has `a <= b`.
    edges: Vec<(usize, usize)>,
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl LabelledGraph {
    /// Build from ids. Edges may repeat (multi-edges) and may be loops.
    pub fn new(k: usize, vertices: Vec<(String, KTuple)>, edges: &[(&str, &str)]) -> Result<Self> {
        let g = LabelledGraph::from_indices(k, vertices, Vec::new())?;
        let mut idx = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            idx.push((g.require(a)?, g.require(b)?));
        }
        LabelledGraph::from_indices(k, g.vertices.into_iter().map(|v| (v.id, v.weight)).collect(), idx)
    }

    /// Build from vertex positions.
    pub fn from_indices(
        k: usize,
        vertices: Vec<(String, KTuple)>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("k must be positive".into()));
        }
        let mut seen = BTreeSet::new();
        for (id, w) in &vertices {
            same_k(k, w.k())?;
            if !seen.insert(id.as_str()) {
                return Err(Error::Invalid(format!("duplicate vertex id {id:?}")));
            }
        }
        let n = vertices.len();
        let mut edges: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| ordered(a, b)).collect();
        if let Some(&(_, b)) = edges.iter().find(|&&(_, b)| b >= n) {
            return Err(Error::Invalid(format!("edge endpoint {b} out of range")));
        }
        edges.sort_unstable();
        let vertices = vertices.into_iter().map(|(id, weight)| Vertex { id, weight }).collect();
        Ok(LabelledGraph { k, vertices, edges })
    }

    /// Unit-weight graph at `k = 1`.
    pub fn unweighted(ids: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let one = KTuple::unit(1, 0);
        LabelledGraph::new(1, ids.iter().map(|&i| (i.to_owned(), one.clone())).collect(), edges)
    }

    /// k-vertex-labelled graph: `blocks[i]` lists the ids of weight `ε_{i+1}`.
    pub fn k_labelled(blocks: &[&[&str]], edges: &[(&str, &str)]) -> Result<Self> {
        let k = blocks.len();
        let mut vertices = Vec::new();
        for (i, block) in blocks.iter().enumerate() {
            for &id in block.iter() {
                vertices.push((id.to_owned(), KTuple::unit(k, i)));
            }
        }
        LabelledGraph::new(k, vertices, edges)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Sorted index pairs, repeated for multi-edges.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.edges.iter().map(|&(a, b)| (self.id(a), self.id(b)))
    }

    pub fn id(&self, i: usize) -> &str {
        &self.vertices[i].id
    }

    pub fn weight(&self, i: usize) -> &KTuple {
        &self.vertices[i].weight
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    fn require(&self, id: &str) -> Result<usize> {
        self.index_of(id).ok_or_else(|| Error::UnknownVertex(id.to_owned()))
    }

    fn require_all(&self, ids: &[&str]) -> Result<Vec<usize>> {
        ids.iter().map(|id| self.require(id)).collect()
    }

    /// Number of copies of edge `ab`.
    pub fn multiplicity(&self, a: usize, b: usize) -> usize {
        let e = ordered(a, b);
        let start = self.edges.partition_point(|x| *x < e);
        self.edges[start..].iter().take_while(|x| **x == e).count()
    }

    /// Adjacent through at least one edge (loops make a vertex adjacent to itself).
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&ordered(a, b)).is_ok()
    }

    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(|&(a, b)| a == b)
    }

    /// No loops and no multi-edges.
    pub fn is_simple(&self) -> bool {
        !self.has_loop() && self.edges.windows(2).all(|w| w[0] != w[1])
    }

    /// Componentwise sum of all weights.
    pub fn total_weight(&self) -> Vec<u32> {
        let mut sum = vec![0; self.k];
        for v in &self.vertices {
            for (s, e) in sum.iter_mut().zip(v.weight.entries()) {
                *s += e;
            }
        }
        sum
    }

    /// The multiset of vertex weights as a k-tuple partition.
    pub fn weight_partition(&self) -> KTuplePartition {
        KTuplePartition::new(self.k, self.vertices.iter().map(|v| v.weight.clone()).collect())
            .expect("weights share k")
    }

    /// `Some(blocks)` when every weight is a unit tuple; `blocks[i]` holds the positions of weight `ε_{i+1}`.
    pub fn blocks(&self) -> Option<Vec<Vec<usize>>> {
        let mut blocks = vec![Vec::new(); self.k];
        for (i, v) in self.vertices.iter().enumerate() {
            blocks[v.weight.unit_index()?].push(i);
        }
        Some(blocks)
    }

    pub fn is_k_labelled(&self) -> bool {
        self.blocks().is_some()
    }

    /// Connected components as sorted position lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    fn fresh_id(&self, base: &str) -> String {
        let mut id = base.to_owned();
        while self.index_of(&id).is_some() {
            id.push('\'');
        }
        id
    }

    fn edge_position(&self, a: &str, b: &str) -> Result<(usize, usize, usize)> {
        let (ia, ib) = (self.require(a)?, self.require(b)?);
        let pos = self
            .edges
            .binary_search(&ordered(ia, ib))
            .map_err(|_| Error::MissingEdge(a.to_owned(), b.to_owned()))?;
        Ok((pos, ia, ib))
    }

    /// Remove one copy of edge `ab`.
    pub fn delete_edge(&self, a: &str, b: &str) -> Result<Self> {
        let (pos, _, _) = self.edge_position(a, b)?;
        Ok(self.delete_edge_at(pos))
    }

    /// Remove the edge at position `pos` of [`edges`](Self::edges).
    pub fn delete_edge_at(&self, pos: usize) -> Self {
        let mut g = self.clone();
        g.edges.remove(pos);
        g
    }

    /// Contract one copy of edge `ab`. The merged vertex takes `a`'s place and
    /// the summed weight; other copies of `ab` become loops. Contracting a loop deletes it.
    pub fn contract_edge(&self, a: &str, b: &str) -> Result<Self> {
        let (pos, _, _) = self.edge_position(a, b)?;
        Ok(self.contract_edge_at(pos))
    }

    /// Contract the edge at position `pos` of [`edges`](Self::edges).
    pub fn contract_edge_at(&self, pos: usize) -> Self {
        let (a, b) = self.edges[pos];
        if a == b {
            return self.delete_edge_at(pos);
        }
        // a < b: b disappears, later positions shift down
        let remap = |x: usize| match x {
            x if x == b => a,
            x if x > b => x - 1,
            x => x,
        };
        let merged_id = self.fresh_id(&format!("{}+{}", self.id(a), self.id(b)));
        let merged_weight = self.weight(a).add(self.weight(b)).expect("weights share k");
        let mut vertices = self.vertices.clone();
        vertices[a] = Vertex { id: merged_id, weight: merged_weight };
        vertices.remove(b);
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pos)
            .map(|(_, &(x, y))| ordered(remap(x), remap(y)))
            .collect();
        edges.sort_unstable();
        LabelledGraph { k: self.k, vertices, edges }
    }

    /// Add one copy of edge `ab`.
    pub fn add_edge(&self, a: &str, b: &str) -> Result<Self> {
        let (ia, ib) = (self.require(a)?, self.require(b)?);
        Ok(self.add_edge_at(ia, ib))
    }

    pub(crate) fn add_edge_at(&self, a: usize, b: usize) -> Self {
        let mut g = self.clone();
        let e = ordered(a, b);
        let at = g.edges.partition_point(|x| *x <= e);
        g.edges.insert(at, e);
        g
    }

    /// Same vertices, new edge multiset given by positions.
    pub fn with_edges(&self, edges: Vec<(usize, usize)>) -> Result<Self> {
        LabelledGraph::from_indices(
            self.k,
            self.vertices.iter().map(|v| (v.id.clone(), v.weight.clone())).collect(),
            edges,
        )
    }

    /// Same vertices and edges, new weights (possibly a different `k`).
    pub fn with_weights(&self, k: usize, weights: Vec<KTuple>) -> Result<Self> {
        if weights.len() != self.vertices.len() {
            return Err(Error::Invalid("one weight per vertex is required".into()));
        }
        LabelledGraph::from_indices(
            k,
            self.vertices.iter().zip(weights).map(|(v, w)| (v.id.clone(), w)).collect(),
            self.edges.clone(),
        )
    }

    /// Induced subgraph on the listed ids, keeping this graph's vertex order.
    pub fn induced_subgraph(&self, ids: &[&str]) -> Result<Self> {
        let keep: BTreeSet<usize> = self.require_all(ids)?.into_iter().collect();
        Ok(self.induced_on(&keep))
    }

    pub(crate) fn induced_on(&self, keep: &BTreeSet<usize>) -> Self {
        let mut new_pos = vec![usize::MAX; self.vertices.len()];
        let mut vertices = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if keep.contains(&i) {
                new_pos[i] = vertices.len();
                vertices.push(v.clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|(a, b)| keep.contains(a) && keep.contains(b))
            .map(|&(a, b)| (new_pos[a], new_pos[b]))
            .collect();
        LabelledGraph { k: self.k, vertices, edges }
    }

    /// Complement of a simple graph.
    pub fn complement(&self) -> Result<Self> {
        if !self.is_simple() {
            return Err(Error::NotSimple);
        }
        let n = self.vertices.len();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if !self.adjacent(a, b) {
                    edges.push((a, b));
                }
            }
        }
        Ok(LabelledGraph { k: self.k, vertices: self.vertices.clone(), edges })
    }

    /// Disjoint union; ids of `other` that collide are primed until unique.
    pub fn disjoint_union(&self, other: &LabelledGraph) -> Result<Self> {
        same_k(self.k, other.k)?;
        let mut g = self.clone();
        let offset = g.vertices.len();
        for v in &other.vertices {
            let id = g.fresh_id(&v.id);
            g.vertices.push(Vertex { id, weight: v.weight.clone() });
        }
        g.edges.extend(other.edges.iter().map(|&(a, b)| (a + offset, b + offset)));
        g.edges.sort_unstable();
        Ok(g)
    }

    /// Collapse multi-edges (and repeated loops) to single edges.
    pub fn simplify(&self) -> Self {
        let mut g = self.clone();
        g.edges.dedup();
        g
    }

    fn check_disjoint(a: &[usize], b: &[usize]) -> Result<()> {
        if a.iter().any(|x| b.contains(x)) {
            return Err(Error::Invalid("vertex sets must be disjoint".into()));
        }
        Ok(())
    }

    /// Every vertex of `b` is adjacent to every vertex of `a`.
    pub fn is_complete_to(&self, b: &[&str], a: &[&str]) -> Result<bool> {
        let (ib, ia) = (self.require_all(b)?, self.require_all(a)?);
        Self::check_disjoint(&ib, &ia)?;
        Ok(ib.iter().all(|&x| ia.iter().all(|&y| self.adjacent(x, y))))
    }

    /// No vertex of `b` is adjacent to a vertex of `a`.
    pub fn is_anticomplete_to(&self, b: &[&str], a: &[&str]) -> Result<bool> {
        let (ib, ia) = (self.require_all(b)?, self.require_all(a)?);
        Self::check_disjoint(&ib, &ia)?;
        Ok(ib.iter().all(|&x| ia.iter().all(|&y| !self.adjacent(x, y))))
    }

    /// Checks that each vertex of `w` is complete or anticomplete to each `blocks[i]`.
    /// The blocks together with `w` must partition the vertex set.
    /// Returns the first violation found, or `None` when the collection is homogeneous.
    pub fn verify_homogeneous_collection(&self, blocks: &[Vec<&str>], w: &[&str]) -> Result<Option<Violation>> {
        let mut seen = vec![false; self.vertices.len()];
        let mut idx_blocks = Vec::with_capacity(blocks.len());
        for ids in blocks.iter().map(|b| b.as_slice()).chain(core::iter::once(w)) {
            let idx = self.require_all(ids)?;
            for &i in &idx {
                if core::mem::replace(&mut seen[i], true) {
                    return Err(Error::Invalid(format!("vertex {:?} listed twice", self.id(i))));
                }
            }
            idx_blocks.push(idx);
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Invalid("the sets do not cover every vertex".into()));
        }
        let w_idx = idx_blocks.pop().expect("w was pushed last");
        Ok(self.homogeneity_violation(&idx_blocks, &w_idx))
    }

    pub(crate) fn homogeneity_violation(&self, blocks: &[Vec<usize>], w: &[usize]) -> Option<Violation> {
        for &x in w {
            for (i, block) in blocks.iter().enumerate() {
                let hits = block.iter().filter(|&&y| self.adjacent(x, y)).count();
                if hits != 0 && hits != block.len() {
                    return Some(Violation { vertex: self.id(x).to_owned(), block: i });
                }
            }
        }
        None
    }

    /// Adjacency among the vertices of `blocks` is unchanged by every permutation
    /// that maps each block to itself.
    pub(crate) fn blocks_are_symmetric(&self, blocks: &[Vec<usize>]) -> bool {
        fn uniform(mut bits: impl Iterator<Item = bool>) -> bool {
            match bits.next() {
                Some(first) => bits.all(|b| b == first),
                None => true,
            }
        }
        blocks.iter().enumerate().all(|(i, a)| {
            uniform(a.iter().map(|&x| self.adjacent(x, x)))
                && blocks[i..].iter().enumerate().all(|(d, b)| {
                    let pairs = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y)));
                    uniform(pairs.filter(|(x, y)| d > 0 || x != y).map(|(x, y)| self.adjacent(x, y)))
                })
        })
    }

    /// Lexicographically least position triple `a < b < c` inducing exactly one
    /// edge, returned as `(isolated, p, q)` with `p < q` adjacent. Loops are ignored.
    pub fn find_k1_sqcup_k2_at(&self) -> Option<(usize, usize, usize)> {
        let n = self.vertices.len();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let (ab, ac, bc) = (self.adjacent(a, b), self.adjacent(a, c), self.adjacent(b, c));
                    match (ab, ac, bc) {
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

    /// Ids of an induced `K_1 ⊔ K_2`: `(isolated, p, q)`.
    pub fn find_k1_sqcup_k2(&self) -> Option<(&str, &str, &str)> {
        self.find_k1_sqcup_k2_at().map(|(r, p, q)| (self.id(r), self.id(p), self.id(q)))
    }

    /// Non-adjacency is an equivalence relation on distinct vertices. Loops are ignored.
    pub fn is_complete_multipartite(&self) -> bool {
        self.multipartite_parts().is_some()
    }

    /// The parts of a complete multipartite graph (components of the complement), or `None`.
    pub fn multipartite_parts(&self) -> Option<Vec<Vec<usize>>> {
        let n = self.vertices.len();
        let mut part_of = vec![usize::MAX; n];
        let mut parts: Vec<Vec<usize>> = Vec::new();
        for v in 0..n {
            if part_of[v] != usize::MAX {
                continue;
            }
            let part: Vec<usize> = (v..n).filter(|&u| u == v || !self.adjacent(u, v)).collect();
            for &u in &part {
                if part_of[u] != usize::MAX {
                    return None;
                }
                part_of[u] = parts.len();
            }
            parts.push(part);
        }
        for a in 0..n {
            for b in a + 1..n {
                if (part_of[a] == part_of[b]) == self.adjacent(a, b) {
                    return None;
                }
            }
        }
        Some(parts)
    }

    /// Replace every weight by its fold of the last two coordinates (k → k−1).
    pub fn fold_last(&self) -> Result<Self> {
        let weights = self.vertices.iter().map(|v| v.weight.fold_last()).collect::<Result<Vec<_>>>()?;
        self.with_weights(self.k - 1, weights)
    }

    /// Apply a vertex permutation: edge `{a, b}` becomes `{σ(a), σ(b)}`.
    pub fn permuted(&self, sigma: &LabelPermutation) -> Result<Self> {
        let map = sigma.positions(self)?;
        self.with_edges(self.edges.iter().map(|&(a, b)| (map[a], map[b])).collect())
    }

    /// Canonical form under weight-preserving relabelling.
    pub fn canonical_key(&self, vertex_limit: usize) -> Result<CanonicalKey> {
        canon::canonical_key(self, vertex_limit)
    }

    /// A weight-preserving bijection from this graph's ids onto `other`'s ids carrying
    /// the edge multiset of `self` onto that of `other`, if one exists.
    pub fn labelled_isomorphism(&self, other: &LabelledGraph) -> Option<LabelPermutation> {
        iso::find(self, other)
    }
}

impl fmt::Debug for LabelledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G[k={}; ", self.k)?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}:{:?}", v.id, v.weight)?;
        }
        f.write_str(";")?;
        for (a, b) in self.edge_ids() {
            write!(f, " {a}-{b}")?;
        }
        f.write_str("]")
    }
}

fn weighted_vertices(prefix: &str, weights: &[KTuple]) -> Vec<(String, KTuple)> {
    weights
        .iter()
        .enumerate()
        .map(|(i, w)| (format!("{prefix}{}", i + 1), w.clone()))
        .collect()
}

fn unit_weights(alpha: &KTuple) -> Vec<KTuple> {
    let mut out = Vec::new();
    for (j, &a) in alpha.entries().iter().enumerate() {
        for _ in 0..a {
            out.push(KTuple::unit(alpha.k(), j));
        }
    }
    out
}

/// Complete graph `K^λ`: one vertex per part, weighted by that part.
pub fn complete_graph_k(lambda: &KTuplePartition) -> LabelledGraph {
    let n = lambda.len();
    let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    LabelledGraph::from_indices(lambda.k(), weighted_vertices("v", lambda.parts()), edges)
        .expect("valid construction")
}

/// Edgeless graph with one vertex per part of `λ`.
pub fn edgeless(lambda: &KTuplePartition) -> LabelledGraph {
    LabelledGraph::from_indices(lambda.k(), weighted_vertices("v", lambda.parts()), Vec::new())
        .expect("valid construction")
}

/// `I^α`: edgeless, with `α_j` vertices of weight `ε_j`.
pub fn edgeless_i(alpha: &KTuple) -> LabelledGraph {
    LabelledGraph::from_indices(alpha.k(), weighted_vertices("v", &unit_weights(alpha)), Vec::new())
        .expect("valid construction")
}

/// `I^λ`: the complete join of `I^{λ_1}, .., I^{λ_l}`. Vertex `j` of group `i` has id `"i.j"`.
pub fn multipartite_i(lambda: &KTuplePartition) -> LabelledGraph {
    let mut vertices = Vec::new();
    let mut group = Vec::new();
    for (i, part) in lambda.parts().iter().enumerate() {
        for (j, w) in unit_weights(part).into_iter().enumerate() {
            vertices.push((format!("{}.{}", i + 1, j + 1), w));
            group.push(i);
        }
    }
    let n = vertices.len();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if group[a] != group[b] {
                edges.push((a, b));
            }
        }
    }
    LabelledGraph::from_indices(lambda.k(), vertices, edges).expect("valid construction")
}

/// `G^α`: the complete graph on `α_j` vertices of weight `ε_j` for each `j`.
pub fn elementary_g(alpha: &KTuple) -> LabelledGraph {
    let weights = unit_weights(alpha);
    let n = weights.len();
    let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    LabelledGraph::from_indices(alpha.k(), weighted_vertices("v", &weights), edges).expect("valid construction")
}
