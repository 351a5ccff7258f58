//! Finite posets, their incomparability graphs, and the reduction of a
//! (3+1)-free poset to a convex combination of (3+1)- and (2+2)-free ones.
//!
//! Elements are addressed by position; ids are kept only for display and IO.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::graphs::LabelledGraph;
use crate::partitions::KTuple;
use crate::{Error, Result};

mod reduce;

pub use reduce::{
    build_gk, build_hk, build_q, gp_coefficients, gp_reduce, grow_homogeneous_pair,
    grow_homogeneous_pair_exhaustive, is_square_connected, HomogeneousPair, Reduction, ReductionStep,
};

/// A finite strict partial order. The relation is stored transitively closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    elements: Vec<String>,
    less: Vec<Vec<bool>>,
}

/// The two forbidden four-element subposets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    /// `a < b < c` with `d` incomparable to all three.
    ThreePlusOne,
    /// `a < c`, `b < d` and nothing else.
    TwoPlusTwo,
}

impl Poset {
    /// Builds the transitive closure of `less_than`. Rejects unknown or duplicate
    /// ids and relations whose closure is not antisymmetric.
    pub fn new<S: AsRef<str>>(elements: &[S], less_than: &[(S, S)]) -> Result<Self> {
        let elements: Vec<String> = elements.iter().map(|s| s.as_ref().to_owned()).collect();
        let mut seen = BTreeSet::new();
        for id in &elements {
            if !seen.insert(id.as_str()) {
                return Err(Error::Invalid(format!("duplicate element {id:?}")));
            }
        }
        let find = |id: &str| {
            elements.iter().position(|e| e == id).ok_or_else(|| Error::UnknownVertex(id.to_owned()))
        };
        let mut pairs = Vec::with_capacity(less_than.len());
        for (a, b) in less_than {
            pairs.push((find(a.as_ref())?, find(b.as_ref())?));
        }
        Poset::from_pairs(elements, &pairs)
    }

    pub(crate) fn from_pairs(elements: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = elements.len();
        let mut less = vec![vec![false; n]; n];
        for &(a, b) in pairs {
            less[a][b] = true;
        }
        for m in 0..n {
            for i in 0..n {
                if less[i][m] {
                    for j in 0..n {
                        if less[m][j] {
                            less[i][j] = true;
                        }
                    }
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| less[i][i]) {
            return Err(Error::Invalid(format!("the relation has a cycle through {:?}", elements[i])));
        }
        Ok(Poset { elements, less })
    }

    /// Like [`Poset::from_pairs`] but requires the relation to be transitive already.
    pub(crate) fn from_closed(elements: Vec<String>, less: Vec<Vec<bool>>) -> Result<Self> {
        let n = elements.len();
        for i in 0..n {
            for m in 0..n {
                if less[i][m] && (0..n).any(|j| less[m][j] && !less[i][j]) {
                    return Err(Error::Inconsistent(format!(
                        "relation through {:?} is not transitive",
                        elements[m]
                    )));
                }
            }
            if less[i][i] {
                return Err(Error::Inconsistent(format!("{:?} is below itself", elements[i])));
            }
        }
        Ok(Poset { elements, less })
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn id(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == id)
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.less[a][b]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.less[a][b] || self.less[b][a]
    }

    /// All pairs of the closed relation, in position order.
    pub fn relations(&self) -> Vec<(&str, &str)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.less[a][b] {
                    out.push((self.id(a), self.id(b)));
                }
            }
        }
        out
    }

    /// Unit-weight graph at `k = 1` joining exactly the incomparable pairs.
    pub fn incomparability_graph(&self) -> LabelledGraph {
        let n = self.len();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if !self.comparable(a, b) {
                    edges.push((a, b));
                }
            }
        }
        let one = KTuple::unit(1, 0);
        LabelledGraph::from_indices(1, self.elements.iter().map(|e| (e.clone(), one.clone())).collect(), edges)
            .expect("ids are distinct")
    }

    /// Role assignment `(a, b, c, d)` if the four positions induce `pattern`.
    pub(crate) fn roles(&self, quad: [usize; 4], pattern: Pattern) -> Option<[usize; 4]> {
        let mut comparable = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                let (x, y) = (quad[i], quad[j]);
                if self.less[x][y] {
                    comparable.push((x, y));
                } else if self.less[y][x] {
                    comparable.push((y, x));
                }
            }
        }
        match pattern {
            Pattern::TwoPlusTwo => {
                let [(a, c), (b, d)] = comparable[..] else { return None };
                if [a, c].iter().any(|x| *x == b || *x == d) {
                    return None;
                }
                Some(if a < b { [a, b, c, d] } else { [b, a, d, c] })
            }
            Pattern::ThreePlusOne => {
                if comparable.len() != 3 {
                    return None;
                }
                let d = *quad.iter().find(|&&x| comparable.iter().all(|&(p, q)| p != x && q != x))?;
                let mut chain: Vec<usize> = quad.iter().copied().filter(|&x| x != d).collect();
                chain.sort_by_key(|&x| quad.iter().filter(|&&y| self.less[y][x]).count());
                let [a, b, c] = chain[..] else { return None };
                (self.less[a][b] && self.less[b][c]).then_some([a, b, c, d])
            }
        }
    }

    fn quads(&self) -> impl Iterator<Item = [usize; 4]> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| {
            (i + 1..n).flat_map(move |j| (j + 1..n).flat_map(move |k| (k + 1..n).map(move |l| [i, j, k, l])))
        })
    }

    /// The first induced copy of `pattern` over 4-subsets in position order.
    pub fn find_induced_pattern(&self, pattern: Pattern) -> Option<[usize; 4]> {
        self.quads().find_map(|q| self.roles(q, pattern))
    }

    /// Number of 4-subsets inducing a (2+2).
    pub fn count_2plus2(&self) -> usize {
        self.quads().filter(|&q| self.roles(q, Pattern::TwoPlusTwo).is_some()).count()
    }

    pub(crate) fn require_three_plus_one_free(&self) -> Result<()> {
        match self.find_induced_pattern(Pattern::ThreePlusOne) {
            Some(q) => Err(Error::ContainsThreePlusOne(q.map(|i| self.id(i).to_owned()))),
            None => Ok(()),
        }
    }
}
