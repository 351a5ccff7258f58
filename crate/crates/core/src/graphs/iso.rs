use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::LabelledGraph;
use crate::{Error, Result};

/// A weight-preserving relabelling of vertex ids.
///
/// Ids absent from the map are fixed, so the identity is the empty map. For a
/// k-vertex-labelled graph this is an element of `S_{V_1} × … × S_{V_k}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LabelPermutation {
    map: BTreeMap<String, String>,
}

impl LabelPermutation {
    pub fn identity() -> Self {
        LabelPermutation::default()
    }

    /// From explicit `from → to` pairs; rejects repeated sources or targets.
    pub fn new<I, A, B>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let mut map = BTreeMap::new();
        let mut targets = BTreeSet::new();
        for (a, b) in pairs {
            let (a, b) = (a.into(), b.into());
            if !targets.insert(b.clone()) {
                return Err(Error::Invalid(format!("{b:?} is the image of two ids")));
            }
            if map.insert(a.clone(), b).is_some() {
                return Err(Error::Invalid(format!("{a:?} is mapped twice")));
            }
        }
        map.retain(|a, b| a != b);
        Ok(LabelPermutation { map })
    }

    /// From disjoint cycles, e.g. `[["u", "z"], ["v", "w"]]`.
    pub fn from_cycles(cycles: &[&[&str]]) -> Result<Self> {
        let mut pairs = Vec::new();
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                pairs.push((a, cycle[(i + 1) % cycle.len()]));
            }
        }
        LabelPermutation::new(pairs)
    }

    pub fn apply<'a>(&'a self, id: &'a str) -> &'a str {
        self.map.get(id).map_or(id, String::as_str)
    }

    /// Non-fixed pairs in id order.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.map.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    pub fn moved_points(&self) -> usize {
        self.map.len()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &LabelPermutation) -> Result<Self> {
        let mut ids: BTreeSet<&str> = self.map.keys().map(String::as_str).collect();
        ids.extend(other.map.keys().map(String::as_str));
        LabelPermutation::new(ids.into_iter().map(|id| (id, self.apply(other.apply(id)))))
    }

    pub fn inverse(&self) -> Self {
        LabelPermutation { map: self.map.iter().map(|(a, b)| (b.clone(), a.clone())).collect() }
    }

    /// Position map on `g`: vertex `i` goes to position `σ(i)`. Fails unless `σ` permutes
    /// the vertex set of `g` and preserves weights.
    pub fn positions(&self, g: &LabelledGraph) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(g.vertex_count());
        let mut hit = vec![false; g.vertex_count()];
        for (a, _) in self.pairs() {
            g.require(a)?;
        }
        for v in g.vertices() {
            let j = g.require(self.apply(&v.id))?;
            if g.weight(j) != &v.weight {
                return Err(Error::Invalid(format!(
                    "permutation maps {:?} to {:?} with a different weight",
                    v.id,
                    g.id(j)
                )));
            }
            if core::mem::replace(&mut hit[j], true) {
                return Err(Error::Invalid("not a permutation of the vertex set".into()));
            }
            out.push(j);
        }
        Ok(out)
    }
}

impl fmt::Debug for LabelPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.map.is_empty() {
            return f.write_str("id");
        }
        f.write_str("{")?;
        for (i, (a, b)) in self.pairs().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}->{b}")?;
        }
        f.write_str("}")
    }
}

struct Side {
    loops: Vec<usize>,
    degree: Vec<usize>,
    mult: Vec<Vec<usize>>,
}

impl Side {
    fn of(g: &LabelledGraph) -> Side {
        let n = g.vertex_count();
        let mut s = Side { loops: vec![0; n], degree: vec![0; n], mult: vec![vec![0; n]; n] };
        for &(a, b) in g.edges() {
            if a == b {
                s.loops[a] += 1;
            } else {
                s.degree[a] += 1;
                s.degree[b] += 1;
            }
            s.mult[a][b] += 1;
            if a != b {
                s.mult[b][a] += 1;
            }
        }
        s
    }
}

pub(super) fn find(g: &LabelledGraph, h: &LabelledGraph) -> Option<LabelPermutation> {
    if g.k() != h.k()
        || g.vertex_count() != h.vertex_count()
        || g.edge_count() != h.edge_count()
        || g.weight_partition() != h.weight_partition()
    {
        return None;
    }
    let (sg, sh) = (Side::of(g), Side::of(h));
    let n = g.vertex_count();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if !extend(g, h, &sg, &sh, 0, &mut image, &mut used) {
        return None;
    }
    let pairs = (0..n).map(|i| (g.id(i), h.id(image[i])));
    Some(LabelPermutation::new(pairs).expect("a bijection"))
}

fn extend(
    g: &LabelledGraph,
    h: &LabelledGraph,
    sg: &Side,
    sh: &Side,
    v: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if v == image.len() {
        return true;
    }
    for c in 0..image.len() {
        if used[c]
            || g.weight(v) != h.weight(c)
            || sg.loops[v] != sh.loops[c]
            || sg.degree[v] != sh.degree[c]
            || (0..v).any(|u| sg.mult[v][u] != sh.mult[c][image[u]])
        {
            continue;
        }
        image[v] = c;
        used[c] = true;
        if extend(g, h, sg, sh, v + 1, image, used) {
            return true;
        }
        used[c] = false;
    }
    image[v] = usize::MAX;
    false
}
